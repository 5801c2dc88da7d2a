"""Shared test utilities: exhaustive policy enumeration and LSSS checking.

Policies are enumerated up to semantic equivalence: children of a gate
are unordered, same-gate AND/OR nesting flattens, a 1-of-n threshold is
OR and an n-of-n threshold is AND, so those redundant forms are skipped.
Leaf labels are filled left to right from a fixed list and every
negation pattern is emitted, which covers every distinct policy over
interchangeable attribute names.
"""

import itertools

from mcfe_si.policy import (
    And,
    Leaf,
    Or,
    ReconPlan,
    Threshold,
    Unsatisfied,
    compile_lsss,
    derive_nm_set,
    evaluate_policy,
    recon_coefficients,
)


def _partitions(n):
    """Partitions of n into >= 2 parts, parts non-increasing."""
    def rec(rest, cap):
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in rec(rest - first, first):
                yield (first,) + tail
    return [p for p in rec(n, n - 1) if len(p) >= 2]


def _gates(k):
    gates = [("and", None), ("or", None)]
    gates += [("thr", t) for t in range(2, k)]
    return gates


def _shapes(n, parent):
    """Gate trees with n leaf slots; `parent` suppresses same-gate nesting."""
    if n == 1:
        yield "leaf"
        return
    for parts in _partitions(n):
        for gate, t in _gates(len(parts)):
            if gate == parent and gate in ("and", "or"):
                continue
            for kids in itertools.product(*(_shapes(p, gate) for p in parts)):
                yield (gate, t, kids)


def _instantiate(shape, labels, mask, pos):
    if shape == "leaf":
        return Leaf(labels[pos], bool(mask >> pos & 1)), pos + 1
    gate, t, kids = shape
    nodes = []
    for kid in kids:
        node, pos = _instantiate(kid, labels, mask, pos)
        nodes.append(node)
    if gate == "and":
        return And(tuple(nodes)), pos
    if gate == "or":
        return Or(tuple(nodes)), pos
    return Threshold(t, tuple(nodes)), pos


def enumerate_policies(max_leaves, labels):
    """Every distinct policy AST with <= max_leaves leaves over `labels`."""
    for n in range(1, max_leaves + 1):
        for shape in _shapes(n, None):
            for mask in range(1 << n):
                node, _ = _instantiate(shape, labels, mask, 0)
                yield node


def check_lsss_soundness(ctx, node, present):
    """Reconstruction succeeds iff the policy is satisfied; verify the
    coefficients (or the dual witness) by direct matrix arithmetic."""
    return check_matrix_soundness(compile_lsss(node, ctx), node, present)


def check_matrix_soundness(m, node, present):
    plan = recon_coefficients(m, derive_nm_set(present, m))
    if evaluate_policy(node, present):
        assert isinstance(plan, ReconPlan), (node, present)
        combo = [0] * m.ncols
        for i, pi in plan.coeffs.items():
            for c in range(m.ncols):
                combo[c] = (combo[c] + pi * m.rows[i][c]) % m.order
        assert combo == [1] + [0] * (m.ncols - 1), (node, present)
    else:
        assert isinstance(plan, Unsatisfied), (node, present)
        v = plan.witness
        assert v[0] % m.order == 1
        for i in derive_nm_set(present, m):
            assert sum(a * b for a, b in zip(m.rows[i], v)) % m.order == 0
    return plan
