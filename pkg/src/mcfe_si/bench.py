"""Timing harness for the four scheme algorithms.

Cases mirror the reference evaluation setup (d = 10; Case-I N=5 l=5,
Case-II N=10 l=5, Case-III N=10 l=10).  Each case runs a warm-up pass
plus `repetitions` measured passes on a monotonic clock; only ratios
between cases are meaningful, absolute numbers are machine-dependent.
"""

from __future__ import annotations

import random
import statistics
import time
from dataclasses import dataclass, field

from .pairing import GroupContext, default_context
from . import scheme
from .harness import ItemCodec, make_tag

BENCH_POLICY = "attr0 AND attr1 AND (attr2 OR NOT attr3)"
BENCH_ATTRS = ["attr0", "attr1", "attr2"]


@dataclass
class BenchCase:
    name: str
    n_clients: int
    items_per_client: int
    d: int = 10
    repetitions: int = 5


CASES = {
    "case-i": BenchCase("case-i", 5, 5),
    "case-ii": BenchCase("case-ii", 10, 5),
    "case-iii": BenchCase("case-iii", 10, 10),
}


@dataclass
class BenchResult:
    case: BenchCase
    timings_ms: dict[str, list[float]] = field(default_factory=dict)

    def mean(self, algorithm: str) -> float:
        return statistics.mean(self.timings_ms[algorithm])

    def stdev(self, algorithm: str) -> float:
        vals = self.timings_ms[algorithm]
        return statistics.stdev(vals) if len(vals) > 1 else 0.0

    def rows(self):
        for alg in ("setup", "keygen", "encrypt", "decrypt"):
            yield (self.case.name, alg, self.mean(alg), self.stdev(alg))


def run_bench(case: BenchCase, ctx: GroupContext | None = None,
              seed: int = 2024) -> BenchResult:
    ctx = ctx or default_context()
    rng = random.Random(seed)
    result = BenchResult(case, {a: [] for a in ("setup", "keygen", "encrypt", "decrypt")})

    codec = ItemCodec(ctx)
    tag = make_tag(ctx, "bench-round")
    item_sets = []
    for k in range(case.n_clients):
        items = [codec.encode(f"client{k}-item{i}".encode())
                 for i in range(case.items_per_client - 1)]
        items.append(codec.encode(b"shared-item"))  # guarantee one match
        item_sets.append(items)

    for rep in range(case.repetitions + 1):
        t0 = time.monotonic()
        pp, msk, csks = scheme.setup(ctx, case.d, case.n_clients, rng)
        t1 = time.monotonic()
        sk = scheme.keygen(ctx, msk, pp, (1, 2), BENCH_POLICY, rng)
        t2 = time.monotonic()
        cts = [scheme.encrypt(ctx, pp, BENCH_ATTRS, tag, item_sets[k], csks[k], rng)
               for k in range(case.n_clients)]
        t3 = time.monotonic()
        out = scheme.decrypt(ctx, pp, cts[0], cts[1], sk)
        t4 = time.monotonic()
        assert not isinstance(out, scheme.Reject)

        if rep == 0:
            continue  # warm-up pass
        result.timings_ms["setup"].append((t1 - t0) * 1e3)
        result.timings_ms["keygen"].append((t2 - t1) * 1e3)
        result.timings_ms["encrypt"].append((t3 - t2) * 1e3)
        result.timings_ms["decrypt"].append((t4 - t3) * 1e3)
    return result


def format_table(results: list[BenchResult]) -> str:
    lines = [f"{'case':<10} {'algorithm':<10} {'mean_ms':>10} {'stdev_ms':>10}"]
    for res in results:
        for case, alg, mean, stdev in res.rows():
            lines.append(f"{case:<10} {alg:<10} {mean:>10.1f} {stdev:>10.1f}")
    return "\n".join(lines)
