"""Plaintext-side brute-force oracles and the property-test corpus.

``sif`` and ``j_set`` are direct transcriptions of the collected-
intersection and index-exclusion helper functions; the test suite uses
``sif`` as the ground truth that decryption output is checked against.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field


def sif(sets: list, query: set[tuple[int, int]]) -> list[set]:
    """Collected pairwise intersections: E_k gathers every element of every
    queried intersection that involves client k (1-based pairs)."""
    n = len(sets)
    e = [set() for _ in range(n)]
    for w, v in query:
        if not (1 <= w <= n and 1 <= v <= n):
            raise IndexError(f"pair {(w, v)} out of range for {n} clients")
        si = set(sets[w - 1]) & set(sets[v - 1])
        e[w - 1] |= si
        e[v - 1] |= si
    return e


def j_set(n: int, nu_star: int, query: set[tuple[int, int]]) -> set[int]:
    """Indices nu != nu_star whose (ordered) pair with nu_star was not queried."""
    if not 1 <= nu_star <= n:
        raise IndexError(f"target index {nu_star} out of range [1, {n}]")
    j = set()
    for nu in range(1, n + 1):
        if nu == nu_star:
            continue
        if nu < nu_star and (nu, nu_star) not in query:
            j.add(nu)
        if nu > nu_star and (nu_star, nu) not in query:
            j.add(nu)
    return j


# ---------------------------------------------------------------------------
# Randomized trial corpus
# ---------------------------------------------------------------------------

@dataclass
class Trial:
    index: int
    d: int
    n_clients: int
    policy: str
    attrs: list[str]           # attribute labels of the ciphertext set S
    items: list[list[bytes]]   # one duplicate-free item list per client
    label: str
    pair: tuple[int, int]
    satisfying: bool


_UNIVERSE = [f"attr{i}" for i in range(6)]


def _random_policy(rng: random.Random, kind: str) -> tuple[str, int]:
    """Returns (policy text, leaf count)."""
    if kind == "pure-not":
        k = rng.randint(1, 3)
        labs = rng.sample(_UNIVERSE, k)
        return " AND ".join(f"NOT {lab}" for lab in labs), k
    if kind == "threshold":
        n = rng.randint(3, 5)
        labs = rng.sample(_UNIVERSE, n)
        lits = [f"NOT {lab}" if rng.random() < 0.3 else lab for lab in labs]
        t = rng.randint(2, n - 1)
        return f"THRESHOLD({t}; {', '.join(lits)})", n
    # general nested formula with <= 6 leaves
    leaves = rng.randint(1, 6)
    labs = [rng.choice(_UNIVERSE) for _ in range(leaves)]
    lits = [f"NOT {lab}" if rng.random() < 0.25 else lab for lab in labs]
    expr = lits[0]
    for lit in lits[1:]:
        op = rng.choice(["AND", "OR"])
        if rng.random() < 0.5:
            expr = f"({expr}) {op} {lit}"
        else:
            expr = f"{lit} {op} ({expr})"
    return expr, leaves


def _satisfies(policy_text: str, present: set[str]) -> bool:
    from .policy import evaluate_policy, parse_policy
    return evaluate_policy(parse_policy(policy_text), present)


def property_corpus(seed: int, n_trials: int = 100) -> list[Trial]:
    """Deterministic trial generator.  Every 100-trial block contains at
    least one pure-NOT policy, one threshold policy, one empty overlap and
    one full overlap; satisfying and non-satisfying attribute sets both
    appear."""
    rng = random.Random(seed)
    trials = []
    for idx in range(n_trials):
        slot = idx % 100
        kind = {0: "pure-not", 1: "threshold"}.get(slot % 10, "general")
        policy, leaves = _random_policy(rng, kind)

        d = rng.randint(max(3, 2), 10)
        n_clients = rng.randint(2, 6)
        want_satisfying = slot % 4 != 3

        attrs = None
        for _ in range(50):
            cand = rng.sample(_UNIVERSE, rng.randint(0, min(d - 1, 4)))
            if _satisfies(policy, set(cand)) == want_satisfying:
                attrs = cand
                break
        if attrs is None:  # policy is (almost) constant; take what we get
            attrs = rng.sample(_UNIVERSE, rng.randint(0, min(d - 1, 4)))

        pool = [f"id-{rng.randrange(10 ** 6)}".encode() for _ in range(12)]
        items = []
        overlap_mode = slot % 5
        base = rng.sample(pool, rng.randint(1, 8))
        for k in range(n_clients):
            if overlap_mode == 2:
                items.append(list(base))              # full overlap
            elif overlap_mode == 4:
                lo = k * 4                            # disjoint slices
                items.append(pool[lo:lo + 4] or [pool[-1 - k]])
            else:
                take = rng.randint(1, 8)
                items.append(rng.sample(pool, min(take, len(pool))))

        w = rng.randint(1, n_clients - 1)
        v = rng.randint(w + 1, n_clients)
        trials.append(Trial(
            index=idx, d=d, n_clients=n_clients, policy=policy, attrs=attrs,
            items=items, label=f"label-{idx}", pair=(w, v),
            satisfying=_satisfies(policy, set(attrs)),
        ))
    return trials
