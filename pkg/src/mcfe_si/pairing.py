"""Type-III pairing backend: group element wrappers and the group context.

Multiplicative notation throughout: ``a * b`` is the group operation,
``a ** k`` exponentiation by an integer scalar.  Scalars are plain ints
reduced modulo the group order.  Every element has a fixed-length
canonical encoding (compressed points for G and Ghat, the 12-limb field
tuple for GT) with ``decode(encode(x)) == x``.

The concrete curve is the BN-256 instance in bn256.py; GroupContext is
the seam where another Type-III curve could be plugged in.
"""

from __future__ import annotations

import hashlib

from . import bn256 as _c

FP_BYTES = 32
G1_BYTES = 1 + FP_BYTES
G2_BYTES = 1 + 2 * FP_BYTES
GT_BYTES = 12 * FP_BYTES
SCALAR_BYTES = 32

_HASH_PREFIX = b"mcfe-si-nas/v1/"


class DecodeError(ValueError):
    """Byte string is not a valid canonical group-element encoding."""


def _fp_bytes(v):
    return v.to_bytes(FP_BYTES, "big")


def _fp_from(b):
    v = int.from_bytes(b, "big")
    if v >= _c.P:
        raise DecodeError("field element out of range")
    return v


class GElem:
    """Element of the base group G (source group of the pairing)."""

    __slots__ = ("pt",)

    def __init__(self, pt):
        self.pt = pt

    def __mul__(self, other: "GElem") -> "GElem":
        return GElem(_c.g1_add(self.pt, other.pt))

    def __truediv__(self, other: "GElem") -> "GElem":
        return GElem(_c.g1_add(self.pt, _c.g1_neg(other.pt)))

    def __pow__(self, k: int) -> "GElem":
        return GElem(_c.g1_mul(self.pt, k % _c.ORDER))

    def inverse(self) -> "GElem":
        return GElem(_c.g1_neg(self.pt))

    def __eq__(self, other) -> bool:
        return isinstance(other, GElem) and _c.g1_eq(self.pt, other.pt)

    def __hash__(self):
        return hash(self.encode())

    def __repr__(self):
        return f"GElem({self.encode().hex()[:16]}...)"

    def is_identity(self) -> bool:
        return _c.g1_is_inf(self.pt)

    def encode(self) -> bytes:
        a = _c.g1_affine(self.pt)
        if a is None:
            return b"\x00" * G1_BYTES
        x, y = a
        return bytes([0x02 | (y & 1)]) + _fp_bytes(x)

    @classmethod
    def decode(cls, data: bytes) -> "GElem":
        if len(data) != G1_BYTES:
            raise DecodeError("bad G element length")
        if data == b"\x00" * G1_BYTES:
            return cls(_c.G1_INF)
        flag = data[0]
        if flag & ~0x03 or not flag & 0x02:
            raise DecodeError("bad G compression flag")
        x = _fp_from(data[1:])
        yy = (x * x * x + _c.CURVE_B) % _c.P
        y = _c.sqrt_mod_p(yy)
        if y * y % _c.P != yy:
            raise DecodeError("x not on curve")
        if (y & 1) != (flag & 1):
            y = _c.P - y
        return cls((x, y, 1))


class GHatElem:
    """Element of the twisted group Ghat (second source group)."""

    __slots__ = ("pt",)

    def __init__(self, pt):
        self.pt = pt

    def __mul__(self, other: "GHatElem") -> "GHatElem":
        return GHatElem(_c.g2_add(self.pt, other.pt))

    def __truediv__(self, other: "GHatElem") -> "GHatElem":
        return GHatElem(_c.g2_add(self.pt, _c.g2_neg(other.pt)))

    def __pow__(self, k: int) -> "GHatElem":
        return GHatElem(_c.g2_mul(self.pt, k % _c.ORDER))

    def inverse(self) -> "GHatElem":
        return GHatElem(_c.g2_neg(self.pt))

    def __eq__(self, other) -> bool:
        return isinstance(other, GHatElem) and _c.g2_eq(self.pt, other.pt)

    def __hash__(self):
        return hash(self.encode())

    def __repr__(self):
        return f"GHatElem({self.encode().hex()[:16]}...)"

    def is_identity(self) -> bool:
        return _c.g2_is_inf(self.pt)

    def encode(self) -> bytes:
        a = _c.g2_affine(self.pt)
        if a is None:
            return b"\x00" * G2_BYTES
        (xi, xr), y = a
        sign = 1 if (y[1], y[0]) > ((-y[1]) % _c.P, (-y[0]) % _c.P) else 0
        return bytes([0x02 | sign]) + _fp_bytes(xi) + _fp_bytes(xr)

    @classmethod
    def decode(cls, data: bytes) -> "GHatElem":
        if len(data) != G2_BYTES:
            raise DecodeError("bad Ghat element length")
        if data == b"\x00" * G2_BYTES:
            return cls(_c.G2_INF)
        flag = data[0]
        if flag & ~0x03 or not flag & 0x02:
            raise DecodeError("bad Ghat compression flag")
        x = (_fp_from(data[1:1 + FP_BYTES]), _fp_from(data[1 + FP_BYTES:]))
        yy = _c.f2_add(_c.f2_mul(_c.f2_sqr(x), x), _c.TWIST_B)
        y = _c.f2_sqrt(yy)
        if y is None:
            raise DecodeError("x not on twist")
        sign = 1 if (y[1], y[0]) > ((-y[1]) % _c.P, (-y[0]) % _c.P) else 0
        if sign != (flag & 1):
            y = _c.f2_neg(y)
        pt = (x, y, _c.F2_ONE)
        if not _c.g2_is_inf(_c.g2_mul(pt, _c.ORDER)):
            raise DecodeError("point not in the prime-order subgroup")
        return cls(pt)


class GTElem:
    """Element of the target group GT (inside the degree-12 extension field)."""

    __slots__ = ("val",)

    def __init__(self, val):
        self.val = val

    def __mul__(self, other: "GTElem") -> "GTElem":
        return GTElem(_c.f12_mul(self.val, other.val))

    def __truediv__(self, other: "GTElem") -> "GTElem":
        return GTElem(_c.f12_mul(self.val, _c.f12_inv(other.val)))

    def __pow__(self, k: int) -> "GTElem":
        return GTElem(_c.f12_exp(self.val, k % _c.ORDER))

    def inverse(self) -> "GTElem":
        return GTElem(_c.f12_inv(self.val))

    def __eq__(self, other) -> bool:
        return isinstance(other, GTElem) and self.val == other.val

    def __hash__(self):
        return hash(self.encode())

    def __repr__(self):
        return f"GTElem({self.encode().hex()[:16]}...)"

    def is_identity(self) -> bool:
        return self.val == _c.F12_ONE

    def encode(self) -> bytes:
        (xx, xy, xz), (yx, yy, yz) = self.val
        limbs = (*xx, *xy, *xz, *yx, *yy, *yz)
        return b"".join(_fp_bytes(v) for v in limbs)

    @classmethod
    def decode(cls, data: bytes) -> "GTElem":
        if len(data) != GT_BYTES:
            raise DecodeError("bad GT element length")
        limbs = [_fp_from(data[i:i + FP_BYTES]) for i in range(0, GT_BYTES, FP_BYTES)]
        v = (((limbs[0], limbs[1]), (limbs[2], limbs[3]), (limbs[4], limbs[5])),
             ((limbs[6], limbs[7]), (limbs[8], limbs[9]), (limbs[10], limbs[11])))
        return cls(v)


class GroupContext:
    """The pairing environment: groups, generators, order and hashing.

    Operations are pure given their arguments; ``pairing_count`` is a
    plain instrumentation counter used by cost-accounting tests.
    """

    group_id = "bn256"

    def __init__(self):
        self.order = _c.ORDER
        self.g = GElem(_c.G1_GEN)
        self.ghat = GHatElem(_c.G2_GEN)
        self.pairing_count = 0
        self.gt = self.pair(self.g, self.ghat)  # generator of GT
        self.pairing_count = 0

    def pair(self, a: GElem, b: GHatElem) -> GTElem:
        self.pairing_count += 1
        return GTElem(_c.pairing(a.pt, b.pt))

    def identity_gt(self) -> GTElem:
        return GTElem(_c.F12_ONE)

    def identity_g(self) -> GElem:
        return GElem(_c.G1_INF)

    def identity_ghat(self) -> GHatElem:
        return GHatElem(_c.G2_INF)

    def hash_gt_to_g(self, t: GTElem) -> GElem:
        """Deterministic H: GT -> G, a pure function of the canonical encoding."""
        return GElem(_c.g1_hash_to_point(_HASH_PREFIX + b"gt2g:" + t.encode()))

    def hash_bytes_to_scalar(self, data: bytes, domain: bytes = b"") -> int:
        h = hashlib.sha512(_HASH_PREFIX + b"h2s:" + domain + b"\x00" + data).digest()
        return int.from_bytes(h, "big") % self.order

    def rand_scalar(self, rng) -> int:
        return rng.randrange(self.order)

    def rand_nonzero_scalar(self, rng) -> int:
        return rng.randrange(1, self.order)

    def scalar_inv(self, x: int) -> int:
        if x % self.order == 0:
            raise ZeroDivisionError("no inverse of 0 mod group order")
        return pow(x, -1, self.order)


_DEFAULT: GroupContext | None = None


def default_context() -> GroupContext:
    """Process-wide context for the default curve (generators are fixed)."""
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = GroupContext()
    return _DEFAULT
