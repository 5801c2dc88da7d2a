#!/usr/bin/env python3
"""End-to-end demo: two hospitals align patient IDs under an attribute policy.

Writes two item files into a temp directory, runs the full pipeline
(setup, keygen, encrypt, upload, fetch, decrypt) twice: once with a
satisfying attribute set and once with a forbidden attribute present,
which makes decryption reject.
"""

import sys
import tempfile
from pathlib import Path

sys.path.insert(0, "src")

from mcfe_si.harness import AlignmentConfig, run_alignment

POLICY = "Year:2024 AND Department:history AND NOT Department:biology"


def write_items(path: Path, ids):
    path.write_text("\n".join(ids) + "\n", encoding="utf-8")
    return str(path)


def main():
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        files = [
            write_items(tmp / "hospital_a.txt", ["p-001", "p-002", "p-003", "p-007"]),
            write_items(tmp / "hospital_b.txt", ["p-002", "p-005", "p-007"]),
        ]
        for attrs, caption in [
            (["Year:2024", "Department:history"], "satisfying attribute set"),
            (["Year:2024", "Department:history", "Department:biology"],
             "forbidden attribute present"),
        ]:
            print(f"--- {caption} ---")
            report = run_alignment(AlignmentConfig(
                workdir=str(tmp / "deploy"), d=5, item_files=files, attrs=attrs,
                label="round-2024-06", policy=POLICY, pair=(1, 2), seed=7))
            print(report.format())
            print()


if __name__ == "__main__":
    main()
