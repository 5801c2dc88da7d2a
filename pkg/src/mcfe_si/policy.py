"""Policy formulas, LSSS compilation and secret sharing over Z_p.

Grammar (see README for the EBNF):

    expr      := term (OR term)*
    term      := factor (AND factor)*
    factor    := NOT factor | THRESHOLD '(' int ';' expr (',' expr)* ')'
                 | '(' expr ')' | attribute
    attribute := [A-Za-z0-9_:.+-]+

AND/OR are left-associative, NOT binds tighter than AND.  Parsing
normalizes the tree so negations sit on leaves only (De Morgan; a
negated k-of-n threshold becomes an (n-k+1)-of-n threshold over the
negated children).

Compilation uses the recursive gate-by-gate LSSS construction: OR
passes the parent vector through, a t-of-n gate appends t-1 fresh
columns and hands child j the parent vector plus the Vandermonde tail
(j, j^2, ..., j^{t-1}); AND is the n-of-n case.  A negated leaf shares
its row shape with a non-negated one; only the rho flag differs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .pairing import GroupContext


class PolicySyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Leaf:
    label: str
    negated: bool = False


@dataclass(frozen=True)
class And:
    children: tuple


@dataclass(frozen=True)
class Or:
    children: tuple


@dataclass(frozen=True)
class Threshold:
    t: int
    children: tuple


PolicyNode = Leaf | And | Or | Threshold

_TOKEN_RE = re.compile(r"\s*(?:(\()|(\))|(;)|(,)|([A-Za-z0-9_:.+-]+))")
_KEYWORDS = {"AND", "OR", "NOT", "THRESHOLD"}


def _tokenize(text):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == m.start():
            if text[pos:].strip() == "":
                break
            raise PolicySyntaxError(f"unexpected character {text[pos]!r}", pos)
        group = next(i for i in range(1, 6) if m.group(i) is not None)
        tokens.append((m.group(group), m.start(group)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def next(self):
        if self.i >= len(self.tokens):
            raise PolicySyntaxError("unexpected end of policy", len(self.text))
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, want):
        tok, pos = self.next()
        if tok != want:
            raise PolicySyntaxError(f"expected {want!r}, got {tok!r}", pos)

    def parse(self):
        node = self.expr()
        if self.i < len(self.tokens):
            tok, pos = self.tokens[self.i]
            raise PolicySyntaxError(f"trailing input {tok!r}", pos)
        return node

    def expr(self):
        children = [self.term()]
        while self.peek() == "OR":
            self.next()
            children.append(self.term())
        return children[0] if len(children) == 1 else Or(tuple(children))

    def term(self):
        children = [self.factor()]
        while self.peek() == "AND":
            self.next()
            children.append(self.factor())
        return children[0] if len(children) == 1 else And(tuple(children))

    def factor(self):
        tok = self.peek()
        if tok == "NOT":
            self.next()
            return _negate(self.factor())
        if tok == "THRESHOLD":
            _, pos = self.next()
            self.expect("(")
            t_tok, t_pos = self.next()
            if not t_tok.isdigit():
                raise PolicySyntaxError("threshold count must be an integer", t_pos)
            t = int(t_tok)
            self.expect(";")
            children = [self.expr()]
            while self.peek() == ",":
                self.next()
                children.append(self.expr())
            self.expect(")")
            if not 1 <= t <= len(children):
                raise PolicySyntaxError(
                    f"threshold {t} out of range for {len(children)} children", pos)
            return Threshold(t, tuple(children))
        if tok == "(":
            self.next()
            node = self.expr()
            self.expect(")")
            return node
        tok, pos = self.next()
        if tok in _KEYWORDS or tok in "();,":
            raise PolicySyntaxError(f"expected attribute, got {tok!r}", pos)
        return Leaf(tok)


def _negate(node):
    if isinstance(node, Leaf):
        return Leaf(node.label, not node.negated)
    if isinstance(node, And):
        return Or(tuple(_negate(c) for c in node.children))
    if isinstance(node, Or):
        return And(tuple(_negate(c) for c in node.children))
    n = len(node.children)
    return Threshold(n - node.t + 1, tuple(_negate(c) for c in node.children))


def _flatten(node):
    if isinstance(node, Leaf):
        return node
    children = tuple(_flatten(c) for c in node.children)
    if isinstance(node, And):
        merged = []
        for c in children:
            merged.extend(c.children if isinstance(c, And) else (c,))
        return And(tuple(merged))
    if isinstance(node, Or):
        merged = []
        for c in children:
            merged.extend(c.children if isinstance(c, Or) else (c,))
        return Or(tuple(merged))
    return Threshold(node.t, children)


def parse_policy(text: str) -> PolicyNode:
    """Parse a policy string into a normalized AST (negations on leaves only)."""
    return _flatten(_Parser(text).parse())


def policy_leaves(node: PolicyNode):
    if isinstance(node, Leaf):
        yield node
    else:
        for c in node.children:
            yield from policy_leaves(c)


def evaluate_policy(node: PolicyNode, present: set[str]) -> bool:
    """Plaintext truth value of the policy under the non-monotone convention:
    a non-negated leaf holds iff its label is present, a negated leaf iff not."""
    if isinstance(node, Leaf):
        return (node.label in present) != node.negated
    hits = sum(evaluate_policy(c, present) for c in node.children)
    if isinstance(node, And):
        return hits == len(node.children)
    if isinstance(node, Or):
        return hits >= 1
    return hits >= node.t


# ---------------------------------------------------------------------------
# Attributes and the LSSS matrix
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Attribute:
    label: str
    value: int  # scalar used for theta vectors and P_S roots


def make_attribute(ctx: GroupContext, label: str) -> Attribute:
    return Attribute(label, ctx.hash_bytes_to_scalar(label.encode(), domain=b"attr"))


@dataclass
class AccessMatrix:
    rows: list[list[int]]             # o x c over Z_order
    rho: list[tuple[Attribute, bool]]  # row -> (attribute, negated)
    order: int

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return len(self.rows[0]) if self.rows else 0


def compile_lsss(ast: PolicyNode, ctx: GroupContext) -> AccessMatrix:
    rows: list[tuple[dict, Leaf]] = []  # sparse vector {col: coeff}, literal
    ncols = 1

    def assign(node, vec):
        nonlocal ncols
        if isinstance(node, Leaf):
            rows.append((vec, node))
            return
        if isinstance(node, Or):
            for c in node.children:
                assign(c, vec)
            return
        t = len(node.children) if isinstance(node, And) else node.t
        new_cols = list(range(ncols, ncols + t - 1))
        ncols += t - 1
        for j, c in enumerate(node.children, start=1):
            child = dict(vec)
            jk = 1
            for col in new_cols:
                jk = jk * j % ctx.order
                child[col] = (child.get(col, 0) + jk) % ctx.order
            assign(c, child)

    assign(ast, {0: 1})
    dense = [[vec.get(c, 0) for c in range(ncols)] for vec, _ in rows]
    rho = [(make_attribute(ctx, leaf.label), leaf.negated) for _, leaf in rows]
    return AccessMatrix(dense, rho, ctx.order)


def share_secret(m: AccessMatrix, secret: int, ctx: GroupContext, rng) -> list[int]:
    """Shares lambda = L * zeta with zeta_1 = secret, zeta_2.. random."""
    zeta = [secret % m.order] + [ctx.rand_scalar(rng) for _ in range(m.ncols - 1)]
    return [sum(r * z for r, z in zip(row, zeta)) % m.order for row in m.rows]


def derive_nm_set(present_labels: set[str], m: AccessMatrix) -> set[int]:
    """Row indices satisfied by an attribute set under the NM convention:
    non-negated rows need their label present, negated rows need it absent."""
    return {i for i, (attr, negated) in enumerate(m.rho)
            if (attr.label in present_labels) != negated}


@dataclass
class ReconPlan:
    coeffs: dict[int, int]  # satisfied row index -> pi_i (zero coeffs dropped)


@dataclass
class Unsatisfied:
    witness: list[int]  # v with L_sat . v = 0 and v_1 = 1 (Proposition-1 dual)


def _solve_mod(a: list[list[int]], b: list[int], p: int):
    """One solution x of a.x = b over Z_p, preferring lowest-index pivots;
    None if inconsistent."""
    m = [row[:] + [rhs] for row, rhs in zip(a, b)]
    nrows, ncols = len(m), len(a[0]) if a else 0
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][col] % p), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][col], -1, p)
        m[r] = [v * inv % p for v in m[r]]
        for i in range(nrows):
            if i != r and m[i][col] % p:
                f = m[i][col]
                m[i] = [(vi - f * vr) % p for vi, vr in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if m[i][ncols] % p:
            return None
    x = [0] * ncols
    for i, col in enumerate(pivots):
        x[col] = m[i][ncols]
    return x


def recon_coefficients(m: AccessMatrix, satisfied: set[int]) -> ReconPlan | Unsatisfied:
    """Coefficients pi with sum pi_i L_i = (1,0,...,0), or the dual witness."""
    idx = sorted(i for i in satisfied if 0 <= i < m.nrows)
    e1 = [1] + [0] * (m.ncols - 1)
    if idx:
        # solve transpose(L_sat) . pi = e1
        at = [[m.rows[i][c] for i in idx] for c in range(m.ncols)]
        sol = _solve_mod(at, e1, m.order)
        if sol is not None:
            return ReconPlan({i: pi for i, pi in zip(idx, sol) if pi})
    # unsatisfied: find v with L_sat . v = 0 and <e1, v> = 1
    a = [m.rows[i] for i in idx] + [e1]
    b = [0] * len(idx) + [1]
    witness = _solve_mod(a, b, m.order)
    assert witness is not None, "dual witness must exist when e1 is not in the row span"
    return Unsatisfied(witness)


# ---------------------------------------------------------------------------
# Polynomial attribute-set encodings
# ---------------------------------------------------------------------------

def theta_vector(x: int, d: int, order: int) -> list[int]:
    """(1, x, x^2, ..., x^{d-1}) mod the group order."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    out = [1]
    for _ in range(d - 1):
        out.append(out[-1] * x % order)
    return out


class AttributeSetTooLarge(ValueError):
    pass


def char_poly_vector(values, d: int, order: int) -> list[int]:
    """Coefficients of prod_{j in values}(X - j), ascending, zero-padded to d."""
    values = list(values)
    if len(values) + 1 > d:
        raise AttributeSetTooLarge(
            f"attribute set of size {len(values)} needs dimension >= {len(values) + 1}, have {d}")
    coeffs = [1]
    for j in values:
        coeffs = [0] + coeffs
        for k in range(len(coeffs) - 1):
            coeffs[k] = (coeffs[k] - coeffs[k + 1] * j) % order
    return coeffs + [0] * (d - len(coeffs))


def poly_eval(coeffs: list[int], x: int, order: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % order
    return acc
