"""Four-role deployment simulator: TA, clients, ciphertext store, aggregator.

The cloud store is a directory with one file per (client, label) record
plus a JSON manifest; uploads are atomic replacements, so a re-upload
for the same key leaves exactly one record.  Items and labels are mapped
into GT deterministically (separate hash domains), which is what makes
independently encrypted equal sample IDs collide in the index-matching
test.
"""

from __future__ import annotations

import json
import os
import tempfile
import time
import random
from dataclasses import dataclass, field

from .pairing import GroupContext, GTElem, default_context
from . import scheme, wire
from .scheme import REJECT, Reject


def encode_item(ctx: GroupContext, data: bytes) -> GTElem:
    """Deterministic item-bytes -> GT encoding, shared by all clients."""
    if not data:
        raise ValueError("cannot encode an empty item")
    return ctx.gt ** ctx.hash_bytes_to_scalar(data, domain=b"item")


def make_tag(ctx: GroupContext, label: str) -> GTElem:
    """Deterministic label -> GT tag, domain-separated from items."""
    return ctx.gt ** ctx.hash_bytes_to_scalar(label.encode(), domain=b"tag")


class ItemCodec:
    """Item encoder plus a session dictionary for decoding results.

    GT exponents cannot be inverted, so decoding works by registering the
    candidate items of a session and looking recovered elements up by
    their canonical encoding.
    """

    def __init__(self, ctx: GroupContext):
        self.ctx = ctx
        self._dict: dict[bytes, bytes] = {}

    def encode(self, data: bytes) -> GTElem:
        elem = encode_item(self.ctx, data)
        self._dict[elem.encode()] = data
        return elem

    def decode(self, elem: GTElem) -> bytes | None:
        return self._dict.get(elem.encode())


# ---------------------------------------------------------------------------
# Ciphertext store
# ---------------------------------------------------------------------------

class MissingRecordError(KeyError):
    pass


class CorruptRecordError(ValueError):
    pass


@dataclass
class StoreRecord:
    k: int
    label: str
    attr_labels: tuple[str, ...]
    ct_bytes: bytes
    timestamp: float = field(default_factory=time.time)


class CiphertextStore:
    """Directory-backed store with at most one record per (client, label)."""

    def __init__(self, root: str):
        self.root = root
        os.makedirs(root, exist_ok=True)
        self.manifest_path = os.path.join(root, "manifest.json")

    def _key(self, k: int, label: str) -> str:
        import hashlib
        return f"{k}_{hashlib.sha256(label.encode()).hexdigest()[:16]}"

    def _load_manifest(self) -> dict:
        if not os.path.exists(self.manifest_path):
            return {}
        with open(self.manifest_path, encoding="utf-8") as f:
            return json.load(f)

    def _save_manifest(self, manifest: dict):
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            json.dump(manifest, f, indent=2, sort_keys=True)
        os.replace(tmp, self.manifest_path)

    def upload(self, record: StoreRecord):
        import hashlib
        key = self._key(record.k, record.label)
        path = os.path.join(self.root, key + ".ct")
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        with os.fdopen(fd, "wb") as f:
            f.write(record.ct_bytes)
        os.replace(tmp, path)  # last writer wins, atomically
        manifest = self._load_manifest()
        manifest[key] = {
            "client": record.k,
            "label": record.label,
            "attrs": list(record.attr_labels),
            "sha256": hashlib.sha256(record.ct_bytes).hexdigest(),
            "uploaded_at": record.timestamp,
        }
        self._save_manifest(manifest)

    def fetch(self, k: int, label: str) -> StoreRecord:
        import hashlib
        key = self._key(k, label)
        meta = self._load_manifest().get(key)
        path = os.path.join(self.root, key + ".ct")
        if meta is None or not os.path.exists(path):
            raise MissingRecordError(f"no record for client {k}, label {label!r}")
        with open(path, "rb") as f:
            data = f.read()
        if hashlib.sha256(data).hexdigest() != meta["sha256"]:
            raise CorruptRecordError(f"payload checksum mismatch for {key}")
        return StoreRecord(k, label, tuple(meta["attrs"]), data, meta["uploaded_at"])


# ---------------------------------------------------------------------------
# End-to-end alignment run
# ---------------------------------------------------------------------------

@dataclass
class AlignmentConfig:
    workdir: str
    d: int
    item_files: list[str]        # one file per client, one item per line
    attrs: list[str]
    label: str
    policy: str
    pair: tuple[int, int]
    seed: int | None = None


@dataclass
class AlignmentReport:
    outcome: str                              # "ok" or "policy-unsatisfied"
    pair: tuple[int, int]
    matches: list[tuple[int, int, str]]       # (eta_w, eta_v, decoded item)

    def format(self) -> str:
        lines = [f"pair: {self.pair[0]},{self.pair[1]}", f"outcome: {self.outcome}"]
        for ew, ev, item in self.matches:
            lines.append(f"match: {ew} {ev} {item}")
        lines.append(f"total: {len(self.matches)}")
        return "\n".join(lines)


def read_item_file(path: str) -> list[bytes]:
    with open(path, encoding="utf-8") as f:
        items = [line.strip().encode() for line in f if line.strip()]
    if not items:
        raise ValueError(f"item file {path} is empty")
    if len(set(items)) != len(items):
        raise ValueError(f"item file {path} contains duplicates")
    return items


def run_alignment(config: AlignmentConfig, ctx: GroupContext | None = None
                  ) -> AlignmentReport:
    """Drive setup -> keygen -> per-client encrypt -> upload -> fetch -> decrypt."""
    ctx = ctx or default_context()
    rng = random.Random(config.seed) if config.seed is not None else random.SystemRandom()
    n = len(config.item_files)

    pp, msk, csks = scheme.setup(ctx, config.d, n, rng)
    sk = scheme.keygen(ctx, msk, pp, config.pair, config.policy, rng)

    codec = ItemCodec(ctx)
    tag = make_tag(ctx, config.label)
    store = CiphertextStore(os.path.join(config.workdir, "store"))
    raw_items = []
    for k, path in enumerate(config.item_files, start=1):
        items = read_item_file(path)
        raw_items.append(items)
        ct = scheme.encrypt(ctx, pp, config.attrs, tag,
                            [codec.encode(it) for it in items], csks[k - 1], rng)
        store.upload(StoreRecord(k, config.label, ct.attrs,
                                 wire.encode_ciphertext(ctx, ct)))

    w, v = config.pair
    ct_w = wire.decode_ciphertext(ctx, store.fetch(w, config.label).ct_bytes)
    ct_v = wire.decode_ciphertext(ctx, store.fetch(v, config.label).ct_bytes)
    result = scheme.decrypt(ctx, pp, ct_w, ct_v, sk)

    if isinstance(result, Reject):
        return AlignmentReport("policy-unsatisfied", config.pair, [])
    matches = []
    for ew, ev, m in result.matches:
        decoded = codec.decode(m)
        matches.append((ew, ev, decoded.decode("utf-8", "replace")
                        if decoded is not None else f"<unknown:{m.encode().hex()[:16]}>"))
    return AlignmentReport("ok", config.pair, sorted(matches))
