"""Release acceptance gate, one test per criterion.

Each test prints a single "criterion N (...): PASS" line on success;
a failing criterion shows up as the corresponding FAILED test.
"""

import random
import subprocess
import sys
from pathlib import Path

from helpers import check_matrix_soundness, enumerate_policies
from mcfe_si import scheme
from mcfe_si.bench import CASES, BenchCase, run_bench
from mcfe_si.harness import encode_item, make_tag
from mcfe_si.oracle import j_set, property_corpus, sif
from mcfe_si.policy import (
    ReconPlan,
    compile_lsss,
    derive_nm_set,
    evaluate_policy,
    parse_policy,
    recon_coefficients,
    share_secret,
)
from mcfe_si.scheme import REJECT, Reject


def _ok(n, label):
    print(f"criterion {n} ({label}): PASS")


def test_criterion_1_correctness_vs_brute_force(ctx):
    trials = property_corpus(2026, n_trials=100)
    for t in trials:
        rng = random.Random(10_000 + t.index)
        pp, msk, csks = scheme.setup(ctx, t.d, t.n_clients, rng)
        sk = scheme.keygen(ctx, msk, pp, t.pair, t.policy, rng)
        tag = make_tag(ctx, t.label)
        w, v = t.pair

        decode = {}
        cts = {}
        for k in (w, v):
            gt_items = []
            for raw in t.items[k - 1]:
                elem = encode_item(ctx, raw)
                decode[elem] = raw
                gt_items.append(elem)
            cts[k] = scheme.encrypt(ctx, pp, t.attrs, tag, gt_items,
                                    csks[k - 1], rng)

        out = scheme.decrypt(ctx, pp, cts[w], cts[v], sk)
        if not t.satisfying:
            assert out is REJECT, t
            continue
        assert not isinstance(out, Reject), t
        expected = sif([set(lst) for lst in t.items], {t.pair})[w - 1]
        assert {decode[m] for _, _, m in out.matches} == expected, t
        for ew, ev, m in out.matches:
            assert t.items[w - 1][ew] == t.items[v - 1][ev] == decode[m], t
    _ok(1, "correctness vs brute-force intersection, 100 trials")


def test_criterion_2_policy_soundness_exhaustive(ctx):
    labels = ["u0", "u1", "u2"]
    universe = labels + ["u3"]
    rng = random.Random(2)
    pp, msk, csks = scheme.setup(ctx, 5, 2, rng)
    tag = make_tag(ctx, "sweep")
    item = encode_item(ctx, b"probe")

    subsets = []
    for mask in range(1 << len(universe)):
        attrs = [lab for i, lab in enumerate(universe) if mask >> i & 1]
        ct_w = scheme.encrypt(ctx, pp, attrs, tag, [item], csks[0], rng)
        ct_v = scheme.encrypt(ctx, pp, attrs, tag, [item], csks[1], rng)
        subsets.append((set(attrs), ct_w, ct_v))

    n_policies = 0
    for node in enumerate_policies(3, labels):
        n_policies += 1
        sk = scheme.keygen(ctx, msk, pp, (1, 2), node, rng)
        for present, ct_w, ct_v in subsets:
            out = scheme.decrypt(ctx, pp, ct_w, ct_v, sk)
            if evaluate_policy(node, present):
                assert not isinstance(out, Reject), (node, present)
                assert out.matches == [(0, 0, item)], (node, present)
            else:
                assert out is REJECT, (node, present)
    assert n_policies == 50  # all distinct <=3-leaf policies
    _ok(2, f"exhaustive soundness, {n_policies} policies x {len(subsets)} sets")


def test_criterion_3_non_monotone_example(ctx):
    policy = "Year:2024 AND Department:history AND NOT Department:biology"
    rng = random.Random(3)
    pp, msk, csks = scheme.setup(ctx, 5, 2, rng)
    sk = scheme.keygen(ctx, msk, pp, (1, 2), policy, rng)
    tag = make_tag(ctx, "term-1")
    item = encode_item(ctx, b"student-42")

    good = ["Year:2024", "Department:history"]
    ct_w = scheme.encrypt(ctx, pp, good, tag, [item], csks[0], rng)
    ct_v = scheme.encrypt(ctx, pp, good, tag, [item], csks[1], rng)
    out = scheme.decrypt(ctx, pp, ct_w, ct_v, sk)
    assert out.matches == [(0, 0, item)]

    bad = good + ["Department:biology"]
    ct_w = scheme.encrypt(ctx, pp, bad, tag, [item], csks[0], rng)
    ct_v = scheme.encrypt(ctx, pp, bad, tag, [item], csks[1], rng)
    assert scheme.decrypt(ctx, pp, ct_w, ct_v, sk) is REJECT
    _ok(3, "non-monotone example accepts then rejects")


def test_criterion_4_label_binding(ctx):
    rng = random.Random(4)
    pp, msk, csks = scheme.setup(ctx, 3, 2, rng)
    sk = scheme.keygen(ctx, msk, pp, (1, 2), "ok", rng)
    for trial in range(100):
        item = encode_item(ctx, f"shared-{trial}".encode())
        tag_a = make_tag(ctx, f"label-a-{trial}")
        tag_b = make_tag(ctx, f"label-b-{trial}")
        ct_w = scheme.encrypt(ctx, pp, ["ok"], tag_a, [item], csks[0], rng)
        ct_v_other = scheme.encrypt(ctx, pp, ["ok"], tag_b, [item], csks[1], rng)
        ct_v_same = scheme.encrypt(ctx, pp, ["ok"], tag_a, [item], csks[1], rng)

        out = scheme.decrypt(ctx, pp, ct_w, ct_v_other, sk)
        assert out.matches == [], trial  # differing labels never match
        out = scheme.decrypt(ctx, pp, ct_w, ct_v_same, sk)
        assert out.matches == [(0, 0, item)], trial
    _ok(4, "label binding over 100 trials")


def test_criterion_5_algebraic_identities(ctx):
    from mcfe_si.policy import char_poly_vector, make_attribute, theta_vector
    from mcfe_si.scheme import _row_factor

    rng = random.Random(5)
    for inst in range(20):
        d = rng.randint(3, 6)
        pp, msk, csks = scheme.setup(ctx, d, 2, rng)
        tag = make_tag(ctx, f"round-{inst}")
        m = encode_item(ctx, f"item-{inst}".encode())
        attrs = ["present"] + [f"extra{i}" for i in range(rng.randint(0, d - 2))]
        ct_w = scheme.encrypt(ctx, pp, attrs, tag, [m], csks[0], rng)
        ct_v = scheme.encrypt(ctx, pp, attrs, tag, [m], csks[1], rng)
        y = char_poly_vector([make_attribute(ctx, lab).value
                              for lab in ct_w.attrs], d, ctx.order)
        alpha_blind = ctx.pair(ctx.g ** msk.alpha_tilde, ct_w.ct1)

        # 1: non-negated row factor equals e(g, ghat)^{lambda s}
        sk_pos = scheme.keygen(ctx, msk, pp, (1, 2), "present", rng)
        theta = theta_vector(sk_pos.matrix.rho[0][0].value, d, ctx.order)
        assert _row_factor(ctx, sk_pos.row_keys[0], y, theta, ct_w) == alpha_blind

        # 2: negated row factor equals e(g, ghat)^{lambda s}
        sk_neg = scheme.keygen(ctx, msk, pp, (1, 2), "NOT absent", rng)
        theta = theta_vector(sk_neg.matrix.rho[0][0].value, d, ctx.order)
        assert _row_factor(ctx, sk_neg.row_keys[0], y, theta, ct_w) == alpha_blind

        # 3: per-item ciphertext component forms
        ct0, c1 = ct_w.items[0]
        hm = ctx.hash_gt_to_g(m * tag)
        assert c1 == hm ** msk.client_keys[0].a
        assert ct0 == m * alpha_blind * (ctx.pair(hm, pp.ghat_r)
                                         ** msk.client_keys[0].b)

        # 4: index-matching pairing equality for equal items
        assert ctx.pair(ct_w.items[0][1], sk_pos.sk_f2) == \
            ctx.pair(ct_v.items[0][1], sk_pos.sk_f1)

        # 5: final unmasking recovers exactly M
        c1_w, c1_v = ct_w.items[0][1], ct_v.items[0][1]
        b_w = msk.client_keys[0].b
        assert ctx.pair(c1_w * c1_v, sk_pos.sk_f3) == ctx.pair(hm, pp.ghat_r) ** b_w
        out = scheme.decrypt(ctx, pp, ct_w, ct_v, sk_pos)
        assert out.matches == [(0, 0, m)]
    _ok(5, "white-box derivations on 20 instances each")


def test_criterion_6_lsss_properties(ctx):
    rng = random.Random(6)
    labels = ["l0", "l1", "l2", "l3", "l4"]

    n_checked = 0
    for node in enumerate_policies(5, labels):
        m = compile_lsss(node, ctx)
        n_leaves = m.nrows
        for mask in range(1 << n_leaves):
            present = {labels[i] for i in range(n_leaves) if mask >> i & 1}
            check_matrix_soundness(m, node, present)
            n_checked += 1

        # share / reconstruct round trip on a sampled satisfying subset
        if rng.random() < 0.02:
            secret = ctx.rand_nonzero_scalar(rng)
            shares = share_secret(m, secret, ctx, rng)
            for mask in range(1 << n_leaves):
                present = {labels[i] for i in range(n_leaves) if mask >> i & 1}
                plan = recon_coefficients(m, derive_nm_set(present, m))
                if isinstance(plan, ReconPlan):
                    got = sum(pi * shares[i]
                              for i, pi in plan.coeffs.items()) % ctx.order
                    assert got == secret, (node, present)
    _ok(6, f"share/recon plus {n_checked} exhaustive soundness checks")


def test_criterion_7_scaling(ctx):
    results = {}
    for name, case in CASES.items():
        cfg = BenchCase(case.name, case.n_clients, case.items_per_client,
                        d=case.d, repetitions=3)
        results[name] = run_bench(cfg, ctx, seed=7)
    enc = {n: r.mean("encrypt") for n, r in results.items()}
    r21 = enc["case-ii"] / enc["case-i"]
    r32 = enc["case-iii"] / enc["case-ii"]
    assert 1.4 <= r21 <= 2.6, enc
    assert 1.4 <= r32 <= 2.6, enc
    assert results["case-iii"].mean("decrypt") > results["case-i"].mean("decrypt")
    _ok(7, f"encrypt scaling ratios {r21:.2f}, {r32:.2f}")


def test_criterion_8_index_exclusion_helper():
    from itertools import combinations
    assert j_set(5, 2, {(1, 5), (2, 4), (3, 4), (2, 5)}) == {1, 3}
    for n in range(1, 6):
        pairs = list(combinations(range(1, n + 1), 2))
        for mask in range(1 << len(pairs)):
            q = {p for i, p in enumerate(pairs) if mask >> i & 1}
            for nu_star in range(1, n + 1):
                expected = {nu for nu in range(1, n + 1)
                            if nu != nu_star
                            and (min(nu, nu_star), max(nu, nu_star)) not in q}
                assert j_set(n, nu_star, q) == expected
    _ok(8, "worked example and exhaustive N<=5 agreement")


def test_criterion_9_serialization_cross_process():
    worker = Path(__file__).with_name("serialize_worker.py")
    runs = [subprocess.run([sys.executable, str(worker), "99"],
                           capture_output=True, text=True, check=True)
            for _ in range(2)]
    assert runs[0].stdout == runs[1].stdout
    lines = runs[0].stdout.strip().splitlines()
    assert len(lines) == 5 and all(lines)

    import serialize_worker
    local = [b.hex() for b in serialize_worker.dump(99)]
    assert local == lines
    _ok(9, "bit-exact serialization across independent processes")
