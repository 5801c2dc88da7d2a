"""Arithmetic for a 256-bit Barreto-Naehrig curve with its sextic twist.

Implements the optimal ate pairing e: G x Ghat -> GT where G = E(Fp),
Ghat is the order-n subgroup of the twist E'(Fp2) and GT sits inside
Fp12.  Tower: Fp2 = Fp[i]/(i^2+1), Fp6 = Fp2[tau]/(tau^3 - xi) with
xi = i+3, Fp12 = Fp6[omega]/(omega^2 - tau).

Field elements are plain ints (Fp) and nested tuples (Fp2/Fp6/Fp12);
points are Jacobian triples.  Everything here is low-level and
allocation-light; the user-facing wrappers live in pairing.py.

Curve: y^2 = x^3 + 3 over Fp, BN parameter u = 1868033^3.
"""

import hashlib

BN_V = 1868033
BN_U = BN_V ** 3

# field prime and group order of a BN curve with parameter u
P = (((BN_U + 1) * 6 * BN_U + 4) * BN_U + 1) * 6 * BN_U + 1
ORDER = P - 6 * BN_U * BN_U

assert P % 4 == 3

CURVE_B = 3


def inv_mod_p(a):
    return pow(a, P - 2, P)


def sqrt_mod_p(a):
    """Square root in Fp (p = 3 mod 4); caller checks the result squares back."""
    return pow(a, (P + 1) // 4, P)


def legendre(a):
    x = pow(a, (P - 1) // 2, P)
    return -1 if x == P - 1 else x


# ---------------------------------------------------------------------------
# Fp2 = Fp[i]/(i^2 + 1), elements (a, b) = a*i + b
# ---------------------------------------------------------------------------

F2_ZERO = (0, 0)
F2_ONE = (0, 1)
XI = (1, 3)  # i + 3, the non-residue defining the cubic extension


def f2_add(a, b):
    return ((a[0] + b[0]) % P, (a[1] + b[1]) % P)


def f2_sub(a, b):
    return ((a[0] - b[0]) % P, (a[1] - b[1]) % P)


def f2_neg(a):
    return (-a[0] % P, -a[1] % P)


def f2_conj(a):
    return (-a[0] % P, a[1])


def f2_mul(a, b):
    ax, ay = a
    bx, by = b
    vy = ay * by
    vx = ax * bx
    return ((ax + ay) * (bx + by) - vy - vx) % P, (vy - vx) % P


def f2_sqr(a):
    ax, ay = a
    return (2 * ax * ay) % P, ((ay - ax) * (ay + ax)) % P


def f2_mul_int(a, k):
    return (a[0] * k % P, a[1] * k % P)


def f2_mul_xi(a):
    # (xi + y)(i + 3) = (3x + y)i + (3y - x)
    ax, ay = a
    return (3 * ax + ay) % P, (3 * ay - ax) % P


def f2_inv(a):
    ax, ay = a
    t = inv_mod_p(ax * ax + ay * ay)
    return -ax * t % P, ay * t % P


def f2_exp(a, k):
    r = F2_ONE
    for bit in bin(k)[2:]:
        r = f2_sqr(r)
        if bit == "1":
            r = f2_mul(r, a)
    return r


def f2_sqrt(a):
    """Square root in Fp2, or None if a is a non-square."""
    ax, ay = a
    if ax == 0:
        if legendre(ay) != -1:
            return (0, sqrt_mod_p(ay))
        # ay is a non-residue: sqrt(ay) = sqrt(-ay) * i since i^2 = -1
        return (sqrt_mod_p(-ay % P), 0)
    norm = (ax * ax + ay * ay) % P
    if legendre(norm) == -1:
        return None
    alpha = sqrt_mod_p(norm)
    delta = (ay + alpha) * inv_mod_p(2) % P
    if legendre(delta) == -1:
        delta = (ay - alpha) * inv_mod_p(2) % P
        if legendre(delta) == -1:
            return None
    yr = sqrt_mod_p(delta)
    xi_ = ax * inv_mod_p(2 * yr) % P
    cand = (xi_, yr)
    return cand if f2_sqr(cand) == (ax % P, ay % P) else None


# ---------------------------------------------------------------------------
# Fp6 = Fp2[tau]/(tau^3 - xi), elements (x, y, z) = x*tau^2 + y*tau + z
# ---------------------------------------------------------------------------

F6_ZERO = (F2_ZERO, F2_ZERO, F2_ZERO)
F6_ONE = (F2_ZERO, F2_ZERO, F2_ONE)


def f6_add(a, b):
    return (f2_add(a[0], b[0]), f2_add(a[1], b[1]), f2_add(a[2], b[2]))


def f6_sub(a, b):
    return (f2_sub(a[0], b[0]), f2_sub(a[1], b[1]), f2_sub(a[2], b[2]))


def f6_neg(a):
    return (f2_neg(a[0]), f2_neg(a[1]), f2_neg(a[2]))


def f6_mul(a, b):
    # interpolation-style multiplication (Devegili et al. / Beuchat et al.)
    ax, ay, az = a
    bx, by, bz = b
    t0 = f2_mul(az, bz)
    t1 = f2_mul(ay, by)
    t2 = f2_mul(ax, bx)

    tz = f2_mul(f2_add(ax, ay), f2_add(bx, by))
    tz = f2_sub(f2_sub(tz, t1), t2)
    tz = f2_add(f2_mul_xi(tz), t0)

    ty = f2_mul(f2_add(ay, az), f2_add(by, bz))
    ty = f2_add(f2_sub(f2_sub(ty, t0), t1), f2_mul_xi(t2))

    tx = f2_mul(f2_add(ax, az), f2_add(bx, bz))
    tx = f2_sub(f2_add(f2_sub(tx, t0), t1), t2)

    return (tx, ty, tz)


def f6_mul_f2(a, k):
    return (f2_mul(a[0], k), f2_mul(a[1], k), f2_mul(a[2], k))


def f6_mul_tau(a):
    # (x*tau^2 + y*tau + z) * tau = y*tau^2 + z*tau + x*xi
    return (a[1], a[2], f2_mul_xi(a[0]))


def f6_sqr(a):
    ax, ay, az = a
    ay2 = f2_add(ay, ay)
    c4 = f2_mul(az, ay2)
    c5 = f2_sqr(ax)
    c1 = f2_add(f2_mul_xi(c5), c4)
    c2 = f2_sub(c4, c5)
    c3 = f2_sqr(az)
    c4 = f2_sub(f2_add(ax, az), ay)
    c5 = f2_mul(ay2, ax)
    c4 = f2_sqr(c4)
    c0 = f2_add(f2_mul_xi(c5), c3)
    c2 = f2_sub(f2_add(f2_add(c2, c4), c5), c3)
    return (c2, c1, c0)


def f6_inv(a):
    ax, ay, az = a
    xx = f2_sqr(ax)
    yy = f2_sqr(ay)
    zz = f2_sqr(az)
    xy = f2_mul(ax, ay)
    xz = f2_mul(ax, az)
    yz = f2_mul(ay, az)

    A = f2_sub(zz, f2_mul_xi(xy))
    B = f2_sub(f2_mul_xi(xx), yz)
    C = f2_sub(yy, xz)

    F = f2_mul_xi(f2_mul(C, ay))
    F = f2_add(F, f2_mul(A, az))
    F = f2_add(F, f2_mul_xi(f2_mul(B, ax)))
    F = f2_inv(F)

    return (f2_mul(C, F), f2_mul(B, F), f2_mul(A, F))


# ---------------------------------------------------------------------------
# Fp12 = Fp6[omega]/(omega^2 - tau), elements (x, y) = x*omega + y
# ---------------------------------------------------------------------------

F12_ONE = (F6_ZERO, F6_ONE)

# xi^(k*(p-1)/6) for k = 1..5, used by the Frobenius maps
XI1 = [f2_exp(XI, k * (P - 1) // 6) for k in range(1, 6)]
XI2 = [f2_mul(x, f2_conj(x)) for x in XI1]


def f12_conj(a):
    return (f6_neg(a[0]), a[1])


def f12_mul(a, b):
    axbx = f6_mul(a[0], b[0])
    axby = f6_mul(a[0], b[1])
    aybx = f6_mul(a[1], b[0])
    ayby = f6_mul(a[1], b[1])
    return (f6_add(axby, aybx), f6_add(ayby, f6_mul_tau(axbx)))


def f12_sqr(a):
    ax, ay = a
    v0 = f6_mul(ax, ay)
    t = f6_add(f6_mul_tau(ax), ay)
    ty = f6_mul(f6_add(ax, ay), t)
    ty = f6_sub(f6_sub(ty, v0), f6_mul_tau(v0))
    return (f6_add(v0, v0), ty)


def f12_inv(a):
    t1 = f6_sqr(a[0])
    t2 = f6_sqr(a[1])
    t1 = f6_inv(f6_sub(t2, f6_mul_tau(t1)))
    return (f6_mul(f6_neg(a[0]), t1), f6_mul(a[1], t1))


def f12_exp(a, k):
    if k < 0:
        a = f12_inv(a)
        k = -k
    r = F12_ONE
    for bit in bin(k)[2:]:
        r = f12_sqr(r)
        if bit == "1":
            r = f12_mul(r, a)
    return r


def f12_frobenius(a):
    (axx, axy, axz), (ayx, ayy, ayz) = a
    e1 = (f2_mul(f2_conj(axx), XI1[4]),
          f2_mul(f2_conj(axy), XI1[2]),
          f2_mul(f2_conj(axz), XI1[0]))
    e2 = (f2_mul(f2_conj(ayx), XI1[3]),
          f2_mul(f2_conj(ayy), XI1[1]),
          f2_conj(ayz))
    return (e1, e2)


def f12_frobenius_p2(a):
    (axx, axy, axz), (ayx, ayy, ayz) = a
    e1 = (f2_mul(axx, XI2[4]), f2_mul(axy, XI2[2]), f2_mul(axz, XI2[0]))
    e2 = (f2_mul(ayx, XI2[3]), f2_mul(ayy, XI2[1]), ayz)
    return (e1, e2)


# ---------------------------------------------------------------------------
# G1: Jacobian points (X, Y, Z) over Fp on y^2 = x^3 + 3
# ---------------------------------------------------------------------------

G1_INF = (0, 1, 0)
G1_GEN = (1, P - 2, 1)  # (1, -2) is on the curve: 4 = 1 + 3


def g1_is_inf(a):
    return a[2] == 0


def g1_double(a):
    x, y, z = a
    A = x * x % P
    B = y * y % P
    C = B * B % P
    t = (x + B) % P
    D = 2 * (t * t - A - C) % P
    E = 3 * A % P
    F = E * E % P
    X3 = (F - 2 * D) % P
    Y3 = (E * (D - X3) - 8 * C) % P
    Z3 = 2 * y * z % P
    return (X3, Y3, Z3)


def g1_add(a, b):
    if a[2] == 0:
        return b
    if b[2] == 0:
        return a
    x1, y1, z1 = a
    x2, y2, z2 = b
    z1z1 = z1 * z1 % P
    z2z2 = z2 * z2 % P
    u1 = x1 * z2z2 % P
    u2 = x2 * z1z1 % P
    s1 = y1 * z2 * z2z2 % P
    s2 = y2 * z1 * z1z1 % P
    h = (u2 - u1) % P
    r = (s2 - s1) % P
    if h == 0:
        if r == 0:
            return g1_double(a)
        return G1_INF
    i = 4 * h * h % P
    j = h * i % P
    r = 2 * r % P
    V = u1 * i % P
    X3 = (r * r - j - 2 * V) % P
    Y3 = (r * (V - X3) - 2 * s1 * j) % P
    Z3 = ((z1 + z2) * (z1 + z2) - z1z1 - z2z2) * h % P
    return (X3, Y3, Z3)


def g1_neg(a):
    return (a[0], -a[1] % P, a[2])


def g1_mul(a, k):
    k %= ORDER
    if k == 0 or a[2] == 0:
        return G1_INF
    r = G1_INF
    for bit in bin(k)[2:]:
        r = g1_double(r)
        if bit == "1":
            r = g1_add(r, a)
    return r


def g1_affine(a):
    if a[2] == 0:
        return None
    zinv = inv_mod_p(a[2])
    zinv2 = zinv * zinv % P
    return (a[0] * zinv2 % P, a[1] * zinv2 * zinv % P)


def g1_from_affine(xy):
    if xy is None:
        return G1_INF
    return (xy[0], xy[1], 1)


def g1_on_curve(a):
    if a[2] == 0:
        return True
    x, y = g1_affine(a)
    return (y * y - x * x * x - CURVE_B) % P == 0


def g1_eq(a, b):
    return g1_affine(a) == g1_affine(b)


def g1_hash_to_point(msg):
    """Deterministic indifferentiable hashing to G1 (Fouque-Tibouchi style)."""
    sqrt_neg3 = sqrt_mod_p(P - 3)
    inv2 = inv_mod_p(2)

    ctr = 0
    while True:
        h = hashlib.sha512(msg + ctr.to_bytes(4, "big")).digest()
        t = int.from_bytes(h, "big") % P
        if t != 0 and (1 + CURVE_B + t * t) % P != 0:
            break
        ctr += 1

    t2 = t * t % P
    chi_t = legendre(t)
    w = sqrt_neg3 * t * inv_mod_p(1 + CURVE_B + t2) % P

    def g(x):
        return (x * x * x + CURVE_B) % P

    x1 = ((sqrt_neg3 - 1) * inv2 - t * w) % P
    if legendre(g(x1)) == 1:
        return (x1, chi_t * sqrt_mod_p(g(x1)) % P, 1)
    x2 = (-1 - x1) % P
    if legendre(g(x2)) == 1:
        return (x2, chi_t * sqrt_mod_p(g(x2)) % P, 1)
    x3 = (1 + inv_mod_p(w * w)) % P
    return (x3, chi_t * sqrt_mod_p(g(x3)) % P, 1)


# ---------------------------------------------------------------------------
# G2: Jacobian points over Fp2 on the twist y^2 = x^3 + b/xi
# ---------------------------------------------------------------------------

TWIST_B = f2_mul(f2_inv(XI), (0, CURVE_B))

G2_INF = (F2_ZERO, F2_ONE, F2_ZERO)

# fixed generator of the order-n subgroup of the twist
G2_GEN = (
    (21167961636542580255011770066570541300993051739349375019639421053990175267184,
     64746500191241794695844075326670126197795977525365406531717464316923369116492),
    (20666913350058776956210519119118544732556678129809273996262322366050359951122,
     17778617556404439934652658462602675281523610326338642107814333856843981424549),
    F2_ONE,
)


def g2_is_inf(a):
    return a[2] == F2_ZERO


def g2_double(a):
    x, y, z = a
    A = f2_sqr(x)
    B = f2_sqr(y)
    C = f2_sqr(B)
    t = f2_sqr(f2_add(x, B))
    D = f2_sub(f2_sub(t, A), C)
    D = f2_add(D, D)
    E = f2_mul_int(A, 3)
    F = f2_sqr(E)
    C8 = f2_mul_int(C, 8)
    X3 = f2_sub(F, f2_add(D, D))
    Y3 = f2_sub(f2_mul(E, f2_sub(D, X3)), C8)
    Z3 = f2_add(f2_mul(y, z), f2_mul(y, z))
    return (X3, Y3, Z3)


def g2_add(a, b):
    if g2_is_inf(a):
        return b
    if g2_is_inf(b):
        return a
    x1, y1, z1 = a
    x2, y2, z2 = b
    z1z1 = f2_sqr(z1)
    z2z2 = f2_sqr(z2)
    u1 = f2_mul(x1, z2z2)
    u2 = f2_mul(x2, z1z1)
    s1 = f2_mul(f2_mul(y1, z2), z2z2)
    s2 = f2_mul(f2_mul(y2, z1), z1z1)
    h = f2_sub(u2, u1)
    r = f2_sub(s2, s1)
    if h == F2_ZERO:
        if r == F2_ZERO:
            return g2_double(a)
        return G2_INF
    i = f2_mul_int(f2_sqr(h), 4)
    j = f2_mul(h, i)
    r = f2_add(r, r)
    V = f2_mul(u1, i)
    X3 = f2_sub(f2_sub(f2_sqr(r), j), f2_add(V, V))
    Y3 = f2_sub(f2_mul(r, f2_sub(V, X3)), f2_mul_int(f2_mul(s1, j), 2))
    Z3 = f2_mul(f2_sub(f2_sub(f2_sqr(f2_add(z1, z2)), z1z1), z2z2), h)
    return (X3, Y3, Z3)


def g2_neg(a):
    return (a[0], f2_neg(a[1]), a[2])


def g2_mul(a, k):
    k %= ORDER
    if k == 0 or g2_is_inf(a):
        return G2_INF
    r = G2_INF
    for bit in bin(k)[2:]:
        r = g2_double(r)
        if bit == "1":
            r = g2_add(r, a)
    return r


def g2_affine(a):
    if g2_is_inf(a):
        return None
    zinv = f2_inv(a[2])
    zinv2 = f2_sqr(zinv)
    return (f2_mul(a[0], zinv2), f2_mul(f2_mul(a[1], zinv2), zinv))


def g2_from_affine(xy):
    if xy is None:
        return G2_INF
    return (xy[0], xy[1], F2_ONE)


def g2_on_curve(a):
    if g2_is_inf(a):
        return True
    x, y = g2_affine(a)
    return f2_sub(f2_sub(f2_sqr(y), f2_mul(f2_sqr(x), x)), TWIST_B) == F2_ZERO


def g2_eq(a, b):
    return g2_affine(a) == g2_affine(b)


# ---------------------------------------------------------------------------
# Optimal ate pairing
# ---------------------------------------------------------------------------

def _to_naf(x):
    z = []
    while x > 0:
        if x % 2 == 0:
            z.append(0)
        else:
            zi = 2 - (x % 4)
            x -= zi
            z.append(zi)
        x //= 2
    return z


NAF_6U2 = list(reversed(_to_naf(6 * BN_U + 2)))[1:]


def _line_double(r, q):
    """Tangent line at twist point r evaluated at G1 point q (affine)."""
    rx, ry, rz = r
    qx, qy = q
    r_t = f2_sqr(rz)
    A = f2_sqr(rx)
    B = f2_sqr(ry)
    C = f2_sqr(B)
    D = f2_sqr(f2_add(rx, B))
    D = f2_sub(f2_sub(D, A), C)
    D = f2_add(D, D)
    E = f2_mul_int(A, 3)
    F = f2_sqr(E)
    C8 = f2_mul_int(C, 8)
    r_x = f2_sub(F, f2_add(D, D))
    r_y = f2_sub(f2_mul(E, f2_sub(D, r_x)), C8)
    r_z = f2_sub(f2_sub(f2_sqr(f2_add(ry, rz)), B), r_t)
    r_out = (r_x, r_y, r_z)

    a = f2_sqr(f2_add(rx, E))
    a = f2_sub(a, f2_add(f2_add(A, F), f2_mul_int(B, 4)))
    t = f2_add(f2_mul(E, r_t), f2_mul(E, r_t))
    b = f2_mul_int(f2_neg(t), qx)
    c = f2_mul_int(f2_mul(r_z, r_t), 2 * qy)
    return a, b, c, r_out


def _line_add(r, p, q, p_y2):
    """Chord through twist points r, p evaluated at G1 point q (affine)."""
    rx, ry, rz = r
    px, py, _ = p
    qx, qy = q
    r_t = f2_sqr(rz)
    B = f2_mul(px, r_t)
    D = f2_sqr(f2_add(py, rz))
    D = f2_mul(f2_sub(f2_sub(D, p_y2), r_t), r_t)
    H = f2_sub(B, rx)
    I = f2_sqr(H)
    E = f2_mul_int(I, 4)
    J = f2_mul(H, E)
    L1 = f2_sub(f2_sub(D, ry), ry)
    V = f2_mul(rx, E)
    r_x = f2_sub(f2_sub(f2_sqr(L1), J), f2_add(V, V))
    r_z = f2_sub(f2_sub(f2_sqr(f2_add(rz, H)), r_t), I)
    t = f2_mul(f2_sub(V, r_x), L1)
    t2 = f2_mul_int(f2_mul(ry, J), 2)
    r_y = f2_sub(t, t2)
    r_out = (r_x, r_y, r_z)

    t = f2_sqr(f2_add(py, r_z))
    t = f2_sub(f2_sub(t, p_y2), f2_sqr(r_z))
    t2 = f2_mul_int(f2_mul(L1, px), 2)
    a = f2_sub(t2, t)
    c = f2_mul_int(r_z, 2 * qy)
    b = f2_mul_int(f2_neg(L1), 2 * qx)
    return a, b, c, r_out


def _mul_line(f, a, b, c):
    """Multiply f in Fp12 by the sparse line value a*omega*tau + b*omega + c."""
    fx, fy = f
    t1 = f6_mul(fx, (F2_ZERO, a, b))
    t3 = f6_mul_f2(fy, c)
    t = f6_add(fx, fy)
    t2 = f6_mul(t, (F2_ZERO, a, f2_add(b, c)))
    n_x = f6_sub(f6_sub(t2, t1), t3)
    n_y = f6_add(t3, f6_mul_tau(t1))
    return (n_x, n_y)


def miller(q, p):
    qa = g2_affine(q)
    pa = g1_affine(p)
    Q = (qa[0], qa[1], F2_ONE)
    mQ = (qa[0], f2_neg(qa[1]), F2_ONE)

    f = F12_ONE
    T = Q
    q_y2 = f2_sqr(Q[1])

    for naf_i in NAF_6U2:
        f = f12_sqr(f)
        a, b, c, T = _line_double(T, pa)
        f = _mul_line(f, a, b, c)
        if naf_i == 1:
            a, b, c, T = _line_add(T, Q, pa, q_y2)
            f = _mul_line(f, a, b, c)
        elif naf_i == -1:
            a, b, c, T = _line_add(T, mQ, pa, q_y2)
            f = _mul_line(f, a, b, c)

    # Frobenius twists of Q close the optimal ate loop
    Q1 = (f2_mul(f2_conj(Q[0]), XI1[1]),
          f2_mul(f2_conj(Q[1]), XI1[2]),
          F2_ONE)
    Q2 = (f2_mul(Q[0], XI2[1]),
          Q[1],
          F2_ONE)

    a, b, c, T = _line_add(T, Q1, pa, f2_sqr(Q1[1]))
    f = _mul_line(f, a, b, c)
    a, b, c, T = _line_add(T, Q2, pa, f2_sqr(Q2[1]))
    f = _mul_line(f, a, b, c)
    return f


def final_exp(f):
    t1 = f12_mul(f12_conj(f), f12_inv(f))  # f^(p^6 - 1)
    t1 = f12_mul(t1, f12_frobenius_p2(t1))  # ... ^(p^2 + 1)

    fp1 = f12_frobenius(t1)
    fp2 = f12_frobenius_p2(t1)
    fp3 = f12_frobenius(fp2)

    fu1 = f12_exp(t1, BN_U)
    fu2 = f12_exp(fu1, BN_U)
    fu3 = f12_exp(fu2, BN_U)

    y3 = f12_conj(f12_frobenius(fu1))
    fu2p = f12_frobenius(fu2)
    fu3p = f12_frobenius(fu3)
    y2 = f12_frobenius_p2(fu2)

    y0 = f12_mul(f12_mul(fp1, fp2), fp3)
    y1 = f12_conj(t1)
    y5 = f12_conj(fu2)
    y4 = f12_conj(f12_mul(fu1, fu2p))
    y6 = f12_conj(f12_mul(fu3, fu3p))

    t0 = f12_mul(f12_mul(f12_sqr(y6), y4), y5)
    t1 = f12_mul(f12_mul(y3, y5), t0)
    t0 = f12_mul(t0, y2)
    t1 = f12_mul(f12_sqr(t1), t0)
    t1 = f12_sqr(t1)
    t0 = f12_mul(t1, y1)
    t1 = f12_mul(t1, y0)
    t0 = f12_sqr(t0)
    return f12_mul(t0, t1)


def pairing(p, q):
    """Optimal ate pairing of p in G1 and q in G2, already final-exponentiated."""
    if g1_is_inf(p) or g2_is_inf(q):
        return F12_ONE
    return final_exp(miller(q, p))
