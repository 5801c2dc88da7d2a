"""Versioned binary wire format for keys and ciphertexts.

Every record is ``MAGIC | version | type | group-id | body | checksum``
with all multi-byte integers big-endian, length prefixes on variable
fields, and canonical group-element encodings in declaration order of
the corresponding type.  The trailing checksum is the first 8 bytes of
SHA-256 over everything before it, so corruption is detected before any
group decoding happens.
"""

from __future__ import annotations

import hashlib
import struct

from .pairing import (
    G1_BYTES,
    G2_BYTES,
    GT_BYTES,
    SCALAR_BYTES,
    GElem,
    GHatElem,
    GTElem,
    GroupContext,
)
from .policy import AccessMatrix, make_attribute
from .scheme import (
    ClientCiphertext,
    ClientKey,
    DecryptionKey,
    MasterSecret,
    PolicyRowKey,
    PublicParams,
)

MAGIC = b"MCSI"
VERSION = 1
CHECKSUM_BYTES = 8

TYPE_PUBLIC_PARAMS = 1
TYPE_CLIENT_KEY = 2
TYPE_MASTER_SECRET = 3
TYPE_DECRYPTION_KEY = 4
TYPE_CIPHERTEXT = 5


class WireError(ValueError):
    pass


class ChecksumError(WireError):
    pass


class _Writer:
    def __init__(self):
        self.parts = []

    def u8(self, v):
        self.parts.append(struct.pack(">B", v))

    def u16(self, v):
        self.parts.append(struct.pack(">H", v))

    def u32(self, v):
        self.parts.append(struct.pack(">I", v))

    def u64(self, v):
        self.parts.append(struct.pack(">Q", v))

    def scalar(self, v):
        self.parts.append(v.to_bytes(SCALAR_BYTES, "big"))

    def raw(self, b):
        self.parts.append(b)

    def blob(self, b):
        self.u32(len(b))
        self.raw(b)

    def text(self, s):
        self.blob(s.encode("utf-8"))

    def getvalue(self):
        return b"".join(self.parts)


class _Reader:
    def __init__(self, data):
        self.data = data
        self.pos = 0

    def _take(self, n):
        if self.pos + n > len(self.data):
            raise WireError("truncated record")
        b = self.data[self.pos:self.pos + n]
        self.pos += n
        return b

    def u8(self):
        return struct.unpack(">B", self._take(1))[0]

    def u16(self):
        return struct.unpack(">H", self._take(2))[0]

    def u32(self):
        return struct.unpack(">I", self._take(4))[0]

    def u64(self):
        return struct.unpack(">Q", self._take(8))[0]

    def scalar(self):
        return int.from_bytes(self._take(SCALAR_BYTES), "big")

    def blob(self):
        return self._take(self.u32())

    def text(self):
        return self.blob().decode("utf-8")

    def g(self):
        return GElem.decode(self._take(G1_BYTES))

    def ghat(self):
        return GHatElem.decode(self._take(G2_BYTES))

    def gt(self):
        return GTElem.decode(self._take(GT_BYTES))

    def done(self):
        if self.pos != len(self.data):
            raise WireError("trailing bytes in record")


def _frame(ctx: GroupContext, rec_type: int, body: bytes) -> bytes:
    w = _Writer()
    w.raw(MAGIC)
    w.u8(VERSION)
    w.u8(rec_type)
    w.text(ctx.group_id)
    w.raw(body)
    payload = w.getvalue()
    return payload + hashlib.sha256(payload).digest()[:CHECKSUM_BYTES]


def _unframe(ctx: GroupContext, data: bytes, expect_type: int) -> _Reader:
    if len(data) < len(MAGIC) + 2 + CHECKSUM_BYTES:
        raise WireError("record too short")
    payload, checksum = data[:-CHECKSUM_BYTES], data[-CHECKSUM_BYTES:]
    if hashlib.sha256(payload).digest()[:CHECKSUM_BYTES] != checksum:
        raise ChecksumError("record checksum mismatch")
    r = _Reader(payload)
    if r._take(len(MAGIC)) != MAGIC:
        raise WireError("bad magic")
    if r.u8() != VERSION:
        raise WireError("unsupported version")
    if r.u8() != expect_type:
        raise WireError("unexpected record type")
    if r.text() != ctx.group_id:
        raise WireError("record was produced for a different group")
    return r


# ---------------------------------------------------------------------------
# Per-type encoders / decoders
# ---------------------------------------------------------------------------

def encode_public_params(ctx: GroupContext, pp: PublicParams) -> bytes:
    w = _Writer()
    w.u16(pp.d)
    w.u16(pp.n_clients)
    w.raw(pp.e_gg_alpha.encode())
    for h in pp.h_vec:
        w.raw(h.encode())
    for u in pp.u_vec:
        w.raw(u.encode())
    w.raw(pp.ghat_r.encode())
    w.raw(pp.u0_r.encode())
    w.raw(pp.h1_r.encode())
    return _frame(ctx, TYPE_PUBLIC_PARAMS, w.getvalue())


def decode_public_params(ctx: GroupContext, data: bytes) -> PublicParams:
    r = _unframe(ctx, data, TYPE_PUBLIC_PARAMS)
    d = r.u16()
    n = r.u16()
    pp = PublicParams(
        d=d, n_clients=n,
        e_gg_alpha=r.gt(),
        h_vec=[r.g() for _ in range(d)],
        u_vec=[r.g() for _ in range(d + 1)],
        ghat_r=r.ghat(), u0_r=r.g(), h1_r=r.g(),
    )
    r.done()
    return pp


def encode_client_key(ctx: GroupContext, csk: ClientKey) -> bytes:
    w = _Writer()
    w.u16(csk.k)
    w.scalar(csk.a)
    w.scalar(csk.b)
    return _frame(ctx, TYPE_CLIENT_KEY, w.getvalue())


def decode_client_key(ctx: GroupContext, data: bytes) -> ClientKey:
    r = _unframe(ctx, data, TYPE_CLIENT_KEY)
    csk = ClientKey(r.u16(), r.scalar(), r.scalar())
    r.done()
    return csk


def encode_master_secret(ctx: GroupContext, msk: MasterSecret) -> bytes:
    w = _Writer()
    w.scalar(msk.alpha_tilde)
    w.scalar(msk.r)
    w.u16(len(msk.alpha_vec))
    for a in msk.alpha_vec:
        w.scalar(a)
    w.u16(len(msk.beta_vec))
    for b in msk.beta_vec:
        w.scalar(b)
    w.u16(len(msk.client_keys))
    for csk in msk.client_keys:
        w.u16(csk.k)
        w.scalar(csk.a)
        w.scalar(csk.b)
    return _frame(ctx, TYPE_MASTER_SECRET, w.getvalue())


def decode_master_secret(ctx: GroupContext, data: bytes) -> MasterSecret:
    r = _unframe(ctx, data, TYPE_MASTER_SECRET)
    alpha_tilde = r.scalar()
    rr = r.scalar()
    alpha_vec = [r.scalar() for _ in range(r.u16())]
    beta_vec = [r.scalar() for _ in range(r.u16())]
    client_keys = [ClientKey(r.u16(), r.scalar(), r.scalar()) for _ in range(r.u16())]
    r.done()
    return MasterSecret(alpha_tilde, rr, alpha_vec, beta_vec, client_keys)


def _write_matrix(w: _Writer, m: AccessMatrix):
    w.u16(m.nrows)
    w.u16(m.ncols)
    for row in m.rows:
        for v in row:
            w.scalar(v)
    for attr, negated in m.rho:
        w.text(attr.label)
        w.u8(1 if negated else 0)


def _read_matrix(r: _Reader, ctx: GroupContext) -> AccessMatrix:
    nrows = r.u16()
    ncols = r.u16()
    rows = [[r.scalar() for _ in range(ncols)] for _ in range(nrows)]
    rho = [(make_attribute(ctx, r.text()), bool(r.u8())) for _ in range(nrows)]
    return AccessMatrix(rows, rho, ctx.order)


def encode_decryption_key(ctx: GroupContext, sk: DecryptionKey) -> bytes:
    w = _Writer()
    w.u16(sk.w)
    w.u16(sk.v)
    w.raw(sk.sk_f1.encode())
    w.raw(sk.sk_f2.encode())
    w.raw(sk.sk_f3.encode())
    _write_matrix(w, sk.matrix)
    for rk in sk.row_keys:
        w.u8(1 if rk.negated else 0)
        w.raw(rk.sk1.encode())
        w.raw(rk.sk2.encode())
        w.u16(len(rk.kvec))
        for kv in rk.kvec:
            w.raw(kv.encode())
    return _frame(ctx, TYPE_DECRYPTION_KEY, w.getvalue())


def decode_decryption_key(ctx: GroupContext, data: bytes) -> DecryptionKey:
    r = _unframe(ctx, data, TYPE_DECRYPTION_KEY)
    wv = (r.u16(), r.u16())
    sk_f1, sk_f2, sk_f3 = r.ghat(), r.ghat(), r.ghat()
    matrix = _read_matrix(r, ctx)
    row_keys = []
    for i in range(matrix.nrows):
        negated = bool(r.u8())
        sk1 = r.g()
        sk2 = r.ghat()
        kvec = [r.g() for _ in range(r.u16())]
        row_keys.append(PolicyRowKey(i, negated, sk1, sk2, kvec))
    r.done()
    return DecryptionKey(wv[0], wv[1], sk_f1, sk_f2, sk_f3, matrix, row_keys)


def encode_ciphertext(ctx: GroupContext, ct: ClientCiphertext) -> bytes:
    w = _Writer()
    w.u16(ct.k)
    w.u16(len(ct.attrs))
    for lab in ct.attrs:
        w.text(lab)
    w.raw(ct.ct1.encode())
    w.raw(ct.ct2.encode())
    w.raw(ct.ct3.encode())
    w.u32(len(ct.items))
    for ct0, ct1 in ct.items:
        w.raw(ct0.encode())
        w.raw(ct1.encode())
    return _frame(ctx, TYPE_CIPHERTEXT, w.getvalue())


def decode_ciphertext(ctx: GroupContext, data: bytes) -> ClientCiphertext:
    r = _unframe(ctx, data, TYPE_CIPHERTEXT)
    k = r.u16()
    attrs = tuple(r.text() for _ in range(r.u16()))
    ct1 = r.ghat()
    ct2 = r.g()
    ct3 = r.g()
    items = [(r.gt(), r.g()) for _ in range(r.u32())]
    r.done()
    return ClientCiphertext(k, attrs, ct1, ct2, ct3, items)
