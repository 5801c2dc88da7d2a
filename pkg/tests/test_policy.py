"""Parser, LSSS compilation, secret sharing and polynomial encodings."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import check_lsss_soundness, enumerate_policies
from mcfe_si.policy import (
    And,
    AttributeSetTooLarge,
    Leaf,
    Or,
    PolicySyntaxError,
    ReconPlan,
    Threshold,
    Unsatisfied,
    char_poly_vector,
    compile_lsss,
    derive_nm_set,
    evaluate_policy,
    make_attribute,
    parse_policy,
    poly_eval,
    policy_leaves,
    recon_coefficients,
    share_secret,
    theta_vector,
)

EXAMPLE = "Year:2024 AND Department:history AND NOT Department:biology"


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def test_parse_example_policy():
    node = parse_policy(EXAMPLE)
    assert node == And((
        Leaf("Year:2024"),
        Leaf("Department:history"),
        Leaf("Department:biology", negated=True),
    ))


def test_parse_precedence_and_parens():
    assert parse_policy("a OR b AND c") == Or((Leaf("a"), And((Leaf("b"), Leaf("c")))))
    assert parse_policy("(a OR b) AND c") == And((Or((Leaf("a"), Leaf("b"))), Leaf("c")))


def test_parse_threshold():
    node = parse_policy("THRESHOLD(2; a, b, NOT c)")
    assert node == Threshold(2, (Leaf("a"), Leaf("b"), Leaf("c", negated=True)))


def test_parse_flattens_nested_same_gate():
    assert parse_policy("a AND (b AND c)") == And((Leaf("a"), Leaf("b"), Leaf("c")))
    assert parse_policy("(a OR b) OR c") == Or((Leaf("a"), Leaf("b"), Leaf("c")))


def test_negation_pushes_to_leaves():
    assert parse_policy("NOT (a AND b)") == Or((Leaf("a", True), Leaf("b", True)))
    assert parse_policy("NOT (a OR NOT b)") == And((Leaf("a", True), Leaf("b")))
    # k-of-n negates to (n-k+1)-of-n over negated children
    assert parse_policy("NOT THRESHOLD(2; a, b, c)") == Threshold(
        2, (Leaf("a", True), Leaf("b", True), Leaf("c", True)))


def test_parse_errors_carry_position():
    for text, pos in [("a AND", 5), ("AND a", 0), ("a ) b", 2),
                      ("THRESHOLD(4; a, b)", 0), ("a && b", 1)]:
        with pytest.raises(PolicySyntaxError) as err:
            parse_policy(text)
        assert err.value.pos == pos


def test_evaluate_policy():
    node = parse_policy(EXAMPLE)
    assert evaluate_policy(node, {"Year:2024", "Department:history"})
    assert not evaluate_policy(
        node, {"Year:2024", "Department:history", "Department:biology"})
    thr = parse_policy("THRESHOLD(2; a, b, c)")
    assert evaluate_policy(thr, {"a", "c"})
    assert not evaluate_policy(thr, {"b"})


def test_policy_leaves_order():
    labels = [leaf.label for leaf in policy_leaves(parse_policy("a AND (b OR NOT c)"))]
    assert labels == ["a", "b", "c"]


# ---------------------------------------------------------------------------
# LSSS matrix and sharing
# ---------------------------------------------------------------------------

def test_compile_shapes(ctx):
    m = compile_lsss(parse_policy("a AND b"), ctx)
    assert m.nrows == 2 and m.ncols == 2
    m = compile_lsss(parse_policy("a OR b"), ctx)
    assert m.nrows == 2 and m.ncols == 1
    assert m.rows == [[1], [1]]
    m = compile_lsss(parse_policy("THRESHOLD(2; a, b, c)"), ctx)
    assert m.nrows == 3 and m.ncols == 2


def test_negation_changes_only_rho(ctx):
    pos = compile_lsss(parse_policy("a AND b"), ctx)
    neg = compile_lsss(parse_policy("a AND NOT b"), ctx)
    assert pos.rows == neg.rows
    assert [n for _, n in pos.rho] == [False, False]
    assert [n for _, n in neg.rho] == [False, True]


def test_share_recon_round_trip(ctx):
    rng = random.Random(21)
    for text, present in [
        ("a AND b", {"a", "b"}),
        ("a OR b", {"b"}),
        ("THRESHOLD(2; a, b, c)", {"a", "c"}),
        (EXAMPLE, {"Year:2024", "Department:history"}),
        ("NOT a AND NOT b", set()),
        ("(a AND b) OR (c AND NOT d)", {"c"}),
    ]:
        node = parse_policy(text)
        m = compile_lsss(node, ctx)
        secret = ctx.rand_nonzero_scalar(rng)
        shares = share_secret(m, secret, ctx, rng)
        plan = recon_coefficients(m, derive_nm_set(present, m))
        assert isinstance(plan, ReconPlan)
        got = sum(pi * shares[i] for i, pi in plan.coeffs.items()) % ctx.order
        assert got == secret


def test_unsatisfied_witness(ctx):
    m = compile_lsss(parse_policy("a AND (b OR c)"), ctx)
    plan = recon_coefficients(m, derive_nm_set({"b", "c"}, m))
    assert isinstance(plan, Unsatisfied)
    assert plan.witness[0] == 1
    for i in derive_nm_set({"b", "c"}, m):
        assert sum(x * y for x, y in zip(m.rows[i], plan.witness)) % ctx.order == 0


def test_soundness_sampled_policies(ctx):
    # spot check; the exhaustive sweep lives in the acceptance suite
    labels = ["a", "b", "c"]
    rng = random.Random(22)
    pool = list(enumerate_policies(3, labels))
    for node in rng.sample(pool, 12):
        for mask in range(8):
            present = {lab for i, lab in enumerate(labels) if mask >> i & 1}
            check_lsss_soundness(ctx, node, present)


def test_derive_nm_set(ctx):
    m = compile_lsss(parse_policy("a AND NOT b"), ctx)
    assert derive_nm_set({"a"}, m) == {0, 1}
    assert derive_nm_set({"a", "b"}, m) == {0}
    assert derive_nm_set(set(), m) == {1}


# ---------------------------------------------------------------------------
# Polynomial encodings
# ---------------------------------------------------------------------------

def test_theta_char_poly_adjoint(ctx):
    rng = random.Random(23)
    d = 6
    values = [ctx.rand_nonzero_scalar(rng) for _ in range(4)]
    y = char_poly_vector(values, d, ctx.order)
    for _ in range(10):
        x = ctx.rand_scalar(rng)
        ip = sum(t * c for t, c in zip(theta_vector(x, d, ctx.order), y)) % ctx.order
        assert ip == poly_eval(y, x, ctx.order)
    for x in values:
        theta = theta_vector(x, d, ctx.order)
        assert sum(t * c for t, c in zip(theta, y)) % ctx.order == 0
    outside = ctx.rand_nonzero_scalar(rng)
    theta = theta_vector(outside, d, ctx.order)
    assert sum(t * c for t, c in zip(theta, y)) % ctx.order != 0


def test_char_poly_dimension_limit(ctx):
    with pytest.raises(AttributeSetTooLarge):
        char_poly_vector([1, 2, 3], 3, ctx.order)
    y = char_poly_vector([], 4, ctx.order)
    assert y == [1, 0, 0, 0]


@settings(max_examples=50, deadline=None)
@given(roots=st.lists(st.integers(min_value=0, max_value=10 ** 9), max_size=5),
       x=st.integers(min_value=0, max_value=10 ** 9))
def test_char_poly_matches_product(roots, x):
    order = (1 << 61) - 1  # any prime works for the polynomial identity
    y = char_poly_vector(roots, len(roots) + 1, order)
    direct = 1
    for j in roots:
        direct = direct * (x - j) % order
    assert poly_eval(y, x, order) == direct


def test_attribute_values_distinct(ctx):
    vals = {make_attribute(ctx, f"attr{i}").value for i in range(200)}
    assert len(vals) == 200
