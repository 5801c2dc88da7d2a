"""The MCFE set-intersection scheme: setup, keygen, encrypt, decrypt.

N clients encrypt labeled item sets (GT elements) under a shared
attribute set; a decryption key binds a client pair (w, v) to a
non-monotonic policy.  Decryption recovers exactly the pairwise
intersection of the two clients' items, or the distinguished ``REJECT``
when the ciphertext attribute set does not satisfy the policy.

The blinding exponent r is sampled once at setup and its public powers
(ghat^r, u_0^r, h_1^r) travel inside the public parameters; every key
generation reuses it, while r-dot and the per-row t_i are fresh per
call.  This is the only arrangement in which encryption stays
non-interactive and the row identities cancel.
"""

from __future__ import annotations

from dataclasses import dataclass

from .pairing import GElem, GHatElem, GTElem, GroupContext
from .policy import (
    AccessMatrix,
    PolicyNode,
    ReconPlan,
    Unsatisfied,
    char_poly_vector,
    compile_lsss,
    derive_nm_set,
    make_attribute,
    parse_policy,
    recon_coefficients,
    share_secret,
    theta_vector,
)


class Reject:
    """Distinguished decryption outcome for an unsatisfied policy (not a fault)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "REJECT"


REJECT = Reject()


@dataclass
class PublicParams:
    d: int
    n_clients: int
    e_gg_alpha: GTElem          # e(g, ghat)^alpha~
    h_vec: list[GElem]          # (h_1, ..., h_d)
    u_vec: list[GElem]          # (u_0, ..., u_d)
    ghat_r: GHatElem
    u0_r: GElem
    h1_r: GElem


@dataclass
class ClientKey:
    k: int   # 1-based client index
    a: int
    b: int


@dataclass
class MasterSecret:
    alpha_tilde: int
    r: int
    alpha_vec: list[int]   # exponents of h_vec
    beta_vec: list[int]    # exponents of u_vec
    client_keys: list[ClientKey]


@dataclass
class PolicyRowKey:
    row: int
    negated: bool
    sk1: GElem
    sk2: GHatElem
    kvec: list[GElem]  # (k_{i,2}, ..., k_{i,d})


@dataclass
class DecryptionKey:
    w: int
    v: int
    sk_f1: GHatElem
    sk_f2: GHatElem
    sk_f3: GHatElem
    matrix: AccessMatrix
    row_keys: list[PolicyRowKey]


@dataclass
class ClientCiphertext:
    k: int
    attrs: tuple[str, ...]                  # attribute labels, sorted
    ct1: GHatElem                           # ghat^{s_k}
    ct2: GElem
    ct3: GElem
    items: list[tuple[GTElem, GElem]]       # per item: (ct^(0), ct^(1))


@dataclass
class IntersectionResult:
    matches: list[tuple[int, int, GTElem]]  # (eta_w, eta_v, recovered item)

    def elements(self) -> set[GTElem]:
        return {m for _, _, m in self.matches}


def setup(ctx: GroupContext, d: int, n_clients: int, rng
          ) -> tuple[PublicParams, MasterSecret, list[ClientKey]]:
    if d < 2:
        raise ValueError("attribute dimension d must be >= 2")
    if n_clients < 2:
        raise ValueError("need at least 2 clients")

    alpha_tilde = ctx.rand_nonzero_scalar(rng)
    r = ctx.rand_nonzero_scalar(rng)
    alpha_vec = [ctx.rand_nonzero_scalar(rng) for _ in range(d)]
    beta_vec = [ctx.rand_nonzero_scalar(rng) for _ in range(d + 1)]

    # a_w + a_v must be invertible for every pair, b_k nonzero
    a_vals: list[int] = []
    while len(a_vals) < n_clients:
        a = ctx.rand_nonzero_scalar(rng)
        if all((a + prev) % ctx.order != 0 for prev in a_vals):
            a_vals.append(a)
    client_keys = [ClientKey(k + 1, a_vals[k], ctx.rand_nonzero_scalar(rng))
                   for k in range(n_clients)]

    pp = PublicParams(
        d=d,
        n_clients=n_clients,
        e_gg_alpha=ctx.gt ** alpha_tilde,
        h_vec=[ctx.g ** a for a in alpha_vec],
        u_vec=[ctx.g ** b for b in beta_vec],
        ghat_r=ctx.ghat ** r,
        u0_r=ctx.g ** (beta_vec[0] * r),
        h1_r=ctx.g ** (alpha_vec[0] * r),
    )
    msk = MasterSecret(alpha_tilde, r, alpha_vec, beta_vec, client_keys)
    return pp, msk, client_keys


def keygen(ctx: GroupContext, msk: MasterSecret, pp: PublicParams,
           pair_index: tuple[int, int], policy: PolicyNode | str, rng
           ) -> DecryptionKey:
    w, v = pair_index
    if not (1 <= w < v <= pp.n_clients):
        raise ValueError(f"index pair must satisfy 1 <= w < v <= N, got {(w, v)}")
    if isinstance(policy, str):
        policy = parse_policy(policy)

    a_w, b_w = msk.client_keys[w - 1].a, msk.client_keys[w - 1].b
    a_v = msk.client_keys[v - 1].a
    r_dot = ctx.rand_nonzero_scalar(rng)
    sk_f1 = ctx.ghat ** (a_w * r_dot)
    sk_f2 = ctx.ghat ** (a_v * r_dot)
    sk_f3 = ctx.ghat ** (msk.r * b_w * ctx.scalar_inv(a_w + a_v))

    matrix = compile_lsss(policy, ctx)
    shares = share_secret(matrix, msk.alpha_tilde, ctx, rng)

    d = pp.d
    row_keys = []
    for i, (attr, negated) in enumerate(matrix.rho):
        t_i = ctx.rand_nonzero_scalar(rng)
        theta = theta_vector(attr.value, d, ctx.order)
        sk2 = ctx.ghat ** t_i
        if not negated:
            sk1 = (ctx.g ** shares[i]) * (pp.u0_r ** t_i)
            kvec = [((pp.u_vec[1] ** (-theta[j - 1])) * pp.u_vec[j]) ** t_i
                    for j in range(2, d + 1)]
        else:
            sk1 = (ctx.g ** shares[i]) * (pp.h1_r ** t_i)
            kvec = [((pp.h1_r ** (-theta[j - 1])) * pp.h_vec[j - 1]) ** t_i
                    for j in range(2, d + 1)]
        row_keys.append(PolicyRowKey(i, negated, sk1, sk2, kvec))

    return DecryptionKey(w, v, sk_f1, sk_f2, sk_f3, matrix, row_keys)


def encrypt(ctx: GroupContext, pp: PublicParams, attr_labels, tag: GTElem,
            items: list[GTElem], csk: ClientKey, rng) -> ClientCiphertext:
    labels = tuple(sorted(set(attr_labels)))
    if not items:
        raise ValueError("item set must be non-empty")
    values = [make_attribute(ctx, lab).value for lab in labels]
    if len(values) >= pp.d:
        raise ValueError(f"attribute set of size {len(values)} too large for d={pp.d}")
    y = char_poly_vector(values, pp.d, ctx.order)

    s = ctx.rand_nonzero_scalar(rng)
    ct1 = ctx.ghat ** s

    base2 = pp.u0_r
    for i in range(1, pp.d + 1):
        if y[i - 1]:
            base2 = base2 * (pp.u_vec[i] ** y[i - 1])
    ct2 = base2 ** s

    base3 = pp.h1_r ** y[0]
    for i in range(2, pp.d + 1):
        if y[i - 1]:
            base3 = base3 * (pp.h_vec[i - 1] ** y[i - 1])
    ct3 = base3 ** s

    egg_alpha_s = pp.e_gg_alpha ** s
    enc_items = []
    for m in items:
        hm = ctx.hash_gt_to_g(m * tag)
        ct0 = m * egg_alpha_s * (ctx.pair(hm, pp.ghat_r) ** csk.b)
        enc_items.append((ct0, hm ** csk.a))

    return ClientCiphertext(csk.k, labels, ct1, ct2, ct3, enc_items)


def _row_factor(ctx: GroupContext, rk: PolicyRowKey, y: list[int],
                theta: list[int], ct: ClientCiphertext) -> GTElem:
    """e(g, ghat)^{lambda_i s} for one policy row against one ciphertext header."""
    d = len(y)
    acc = None
    for j in range(2, d + 1):
        if y[j - 1]:
            term = rk.kvec[j - 2] ** y[j - 1]
            acc = term if acc is None else acc * term
    if not rk.negated:
        combined = rk.sk1 if acc is None else rk.sk1 * acc
        return ctx.pair(combined, ct.ct1) / ctx.pair(ct.ct2, rk.sk2)
    ip = sum(t * yy for t, yy in zip(theta, y)) % ctx.order
    # a satisfied negated row has x_i outside S, so P_S(x_i) != 0
    assert ip != 0, "negated row with vanishing inner product selected as satisfied"
    prod = acc if acc is not None else ctx.identity_g()
    inner = ctx.pair(prod, ct.ct1) / ctx.pair(ct.ct3, rk.sk2)
    return ctx.pair(rk.sk1, ct.ct1) * (inner ** ctx.scalar_inv(ip))


def decrypt(ctx: GroupContext, pp: PublicParams, ct_w: ClientCiphertext,
            ct_v: ClientCiphertext, sk: DecryptionKey
            ) -> IntersectionResult | Reject:
    if ct_w.k != sk.w or ct_v.k != sk.v:
        raise ValueError(
            f"ciphertext clients {(ct_w.k, ct_v.k)} do not match key pair {(sk.w, sk.v)}")
    if ct_w.attrs != ct_v.attrs:
        raise ValueError("ciphertexts were produced under different attribute sets")

    present = set(ct_w.attrs)
    satisfied = derive_nm_set(present, sk.matrix)
    plan = recon_coefficients(sk.matrix, satisfied)
    if isinstance(plan, Unsatisfied):
        return REJECT

    values = [make_attribute(ctx, lab).value for lab in ct_w.attrs]
    y = char_poly_vector(values, pp.d, ctx.order)

    mask = ctx.identity_gt()
    for i, pi in plan.coeffs.items():
        rk = sk.row_keys[i]
        theta = theta_vector(sk.matrix.rho[i][0].value, pp.d, ctx.order)
        mask = mask * (_row_factor(ctx, rk, y, theta, ct_w) ** pi)

    # index matching: one cached pairing per item per side
    w_index = [ctx.pair(c1, sk.sk_f2) for _, c1 in ct_w.items]
    v_index = [ctx.pair(c1, sk.sk_f1) for _, c1 in ct_v.items]

    matches = []
    for ew, (ct0_w, c1_w) in enumerate(ct_w.items):
        for ev, (_, c1_v) in enumerate(ct_v.items):
            if w_index[ew] == v_index[ev]:
                m = (ct0_w / mask) / ctx.pair(c1_w * c1_v, sk.sk_f3)
                matches.append((ew, ev, m))
    return IntersectionResult(matches)


def index_match(ctx: GroupContext, item_w: GElem, item_v: GElem,
                sk: DecryptionKey) -> bool:
    """Ciphertext indexing test: do two per-item components hide the same item?"""
    return ctx.pair(item_w, sk.sk_f2) == ctx.pair(item_v, sk.sk_f1)
