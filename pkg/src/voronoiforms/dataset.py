"""Embedded constants for the E6 / E6* pair, a shorthand expander for vector
families, and a consistency check over all of them.

All matrices are materialized at arithmetic minimum m = 2, which makes every
matrix integral except ``F_E6_STAR`` (entries in Z/2).
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .exactgeom import RationalMatrix, frac, matrix, vadd
from .qform import ParseError, QuadraticForm, minima, transform

M = Fraction(2)


class CountMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# shorthand expansion

_PATTERN = re.compile(r"^\s*(?P<pm>±|\+-|\+/-)?\s*\[(?P<body>[^\]]*)\]\s*(?:(?:×|x|\*)\s*(?P<k>\d+))?\s*$")
_TOKEN = re.compile(r"^\s*(-?\d+)\s*(?:\^\s*(\d+))?\s*$")


def _parse_block(block: str) -> list[int]:
    out: list[int] = []
    for tok in block.split(","):
        if not tok.strip():
            raise ParseError(f"empty entry in block {block!r}")
        mt = _TOKEN.match(tok)
        if not mt:
            raise ParseError(f"bad entry {tok!r}")
        out.extend([int(mt.group(1))] * int(mt.group(2) or 1))
    return out


def _distinct_permutations(seq: list[int]) -> list[tuple[int, ...]]:
    return sorted(set(itertools.permutations(seq)))


def expand_vertex(pattern: str) -> list[tuple[int, ...]]:
    """All vectors named by one bracket pattern, without sign closure.

    Semicolon-separated leading blocks are fixed; the final block runs over
    all its distinct permutations.
    """
    mt = _PATTERN.match(pattern)
    if not mt:
        raise ParseError(f"cannot parse pattern {pattern!r}")
    blocks = [_parse_block(b) for b in mt.group("body").split(";")]
    head = [x for b in blocks[:-1] for x in b]
    return [tuple(head) + p for p in _distinct_permutations(blocks[-1])]


@dataclass(frozen=True)
class VectorFamilySpec:
    """A single shorthand term such as ``±[1;0^2,-1^3]×10``.

    Without a ``×k`` suffix the bracket is a literal vector; with it, the
    final block is permuted and must produce exactly ``k`` vectors (``k`` +-pairs
    when the term is signed).
    """

    pattern: str

    def parse(self):
        mt = _PATTERN.match(self.pattern)
        if not mt:
            raise ParseError(f"cannot parse pattern {self.pattern!r}")
        signed = mt.group("pm") is not None
        k = int(mt.group("k")) if mt.group("k") else None
        return mt.group("body"), signed, k

    @property
    def expected_count(self) -> int:
        return self.parse()[2] or 1


def expand_shorthand(spec: VectorFamilySpec | str) -> frozenset:
    if isinstance(spec, str):
        spec = VectorFamilySpec(spec)
    body, signed, k = spec.parse()
    if k is None:
        vecs = [tuple(x for b in body.split(";") for x in _parse_block(b))]
    else:
        vecs = expand_vertex(f"[{body}]")
    out = set(vecs)
    if signed:
        out |= {tuple(-x for x in v) for v in vecs}
    if k is not None:
        # k counts +- pairs for signed families
        got = len(out) // 2 if signed else len(out)
        if got != k:
            raise CountMismatch(f"{spec.pattern} expands to {got} {'pairs' if signed else 'vectors'}, expected {k}")
    return frozenset(out)


def _split_terms(text: str) -> list[str]:
    return [t.strip() for t in re.findall(r"(?:±|\+-)?\s*\[[^\]]*\]\s*(?:×\s*\d+)?", text)]


def expand_family(text: str, expected_pairs: int | None = None) -> frozenset:
    """Union of the comma-separated shorthand terms inside ``{...}``."""
    out: set = set()
    total = 0
    for term in _split_terms(text):
        part = expand_shorthand(term)
        total += len(part)
        out |= part
    if len(out) != total:
        raise CountMismatch(f"family {text!r} contains repeated vectors")
    if expected_pairs is not None and len(out) != 2 * expected_pairs:
        raise CountMismatch(f"family {text!r} has {len(out)} vectors, expected {2 * expected_pairs}")
    return frozenset(out)


def triangle_family(vertex_patterns: list[str], centroid, count: int) -> list[frozenset]:
    """Lattice triangles whose vertices match the patterns and share ``centroid``."""
    centroid = tuple(frac(x) for x in centroid)
    choices = [expand_vertex(p) for p in vertex_patterns]
    tris = set()
    for a, b, c in itertools.product(*choices):
        if len({a, b, c}) < 3:
            continue
        s = vadd(vadd(a, b), c)
        if all(Fraction(x, 3) == y for x, y in zip(s, centroid)):
            tris.add(frozenset((a, b, c)))
    if len(tris) != count:
        raise CountMismatch(f"triangle family {vertex_patterns} gives {len(tris)} triangles, expected {count}")
    return sorted(tris, key=lambda t: sorted(t))


def edge_set(points) -> frozenset:
    pts = list(points)
    out = set()
    for a, b in itertools.combinations(pts, 2):
        d = tuple(x - y for x, y in zip(a, b))
        out.add(d)
        out.add(tuple(-x for x in d))
    return frozenset(out)


# ---------------------------------------------------------------------------
# matrices (m = 2)


def _scaled(c, rows) -> RationalMatrix:
    return matrix(rows).scale(c)


P_E6 = _scaled(M / 2, [
    [8, 1, 3, 3, 3, 3],
    [1, 2, 0, 0, 0, 0],
    [3, 0, 2, 1, 1, 1],
    [3, 0, 1, 2, 1, 1],
    [3, 0, 1, 1, 2, 1],
    [3, 0, 1, 1, 1, 2],
])
P_E6_STAR = _scaled(M / 4, [
    [16, 5, 5, 5, 5, 5],
    [5, 4, 1, 1, 1, 1],
    [5, 1, 4, 1, 1, 1],
    [5, 1, 1, 4, 1, 1],
    [5, 1, 1, 1, 4, 1],
    [5, 1, 1, 1, 1, 4],
])
F_E6 = _scaled(M / 2, [
    [8, -5, -5, -5, -5, -5],
    [-5, 4, 3, 3, 3, 3],
    [-5, 3, 4, 3, 3, 3],
    [-5, 3, 3, 4, 3, 3],
    [-5, 3, 3, 3, 4, 3],
    [-5, 3, 3, 3, 3, 4],
])
F_E6_STAR = _scaled(M / 4, [
    [10, -5, -6, -6, -6, -6],
    [-5, 4, 3, 3, 3, 3],
    [-6, 3, 6, 3, 3, 3],
    [-6, 3, 3, 6, 3, 3],
    [-6, 3, 3, 3, 6, 3],
    [-6, 3, 3, 3, 3, 6],
])
U_STAR = matrix([
    [2, -2, 0, -1, -1, -1],
    [-2, 2, 1, 1, 1, 1],
    [0, 1, -1, 0, 0, 0],
    [-1, 1, 0, 1, 0, 0],
    [-1, 1, 0, 0, 1, 0],
    [-1, 1, 0, 0, 0, 1],
])
U_STAR_INV = matrix([
    [0, 1, 1, -1, -1, -1],
    [1, 1, 1, 0, 0, 0],
    [1, 1, 0, 0, 0, 0],
    [-1, 0, 0, 0, -1, -1],
    [-1, 0, 0, -1, 0, -1],
    [-1, 0, 0, -1, -1, 0],
])
# printed value of the repartitioning matrix
P_R_PRINTED = matrix([
    [6, 1, 2, 2, 2, 2],
    [1, 2, 0, 0, 0, 0],
    [2, 0, 1, 1, 1, 1],
    [2, 0, 1, 1, 1, 1],
    [2, 0, 1, 1, 1, 1],
    [2, 0, 1, 1, 1, 1],
]).scale(-1)
K0 = matrix([
    [3, 0, -2, -2, -2, -2],
    [2, -1, -1, -1, -1, -1],
    [1, 0, 0, -1, -1, -1],
    [1, 0, -1, 0, -1, -1],
    [1, 0, -1, -1, 0, -1],
    [1, 0, -1, -1, -1, 0],
])
I1 = matrix([
    [0, 4, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0],
    [-1, 2, 2, 0, 0, 0],
    [-1, 2, 0, 2, 0, 0],
    [-1, 2, 0, 0, 2, 0],
    [-1, 2, 0, 0, 0, 2],
]).scale(Fraction(1, 2))
I12 = matrix([
    [-1, 2, 2, 0, 0, 0],
    [0, 0, 1, 0, 0, 0],
    [0, 1, 0, 0, 0, 0],
    [-1, 1, 1, 1, 0, 0],
    [-1, 1, 1, 0, 1, 0],
    [-1, 1, 1, 0, 0, 1],
])

PI_E6 = QuadraticForm(P_E6)
PI_E6_STAR = QuadraticForm(P_E6_STAR)
PHI_E6 = QuadraticForm(F_E6)
PHI_E6_STAR = QuadraticForm(F_E6_STAR)

# ---------------------------------------------------------------------------
# vector families

P1_TEXT = "±[-3;2^5], ±[2;-2;-1^4], ±[1;0;-1^4]"
P2_TEXT = "±[2;-1;-2,-1^3]×4, ±[1;-1;0,-1^3]×4, ±[1;0^2,-1^3]×10, ±[0;1,0^4]×5, ±[2;-1^5]"
P3_TEXT = "±[0;0;1,-1,0^2]×6, ±[1;0;-1^2,0^2]×6"
S1_TEXT = "±[2,-1,1^4], ±[-2,0,-1^4], ±[0,1,0^4]"
S2_TEXT = "±[0,1;-1,0^3]×4, ±[2,0;0,1^3]×4, ±[1;1^2,0^3]×10, ±[1;1,0^4]×5, ±[3;1^5]"
S3_TEXT = "±[0,0;1,-1,0^2]×6, ±[2,1;1^2,0^2]×6"
LB_TEXT = ("±[3,0,1^4], ±[1,2,0^4], ±[0^2;1,0^3]×4, ±[2,1;0,1^3]×4, "
           "±[1,-1;0,1^3]×4, ±[3,0;2,1^3]×4, ±[1,-1;1^2,0^2]×6")

P1 = expand_family(P1_TEXT, 3)
P2 = expand_family(P2_TEXT, 24)
P3 = expand_family(P3_TEXT, 12)
S1 = expand_family(S1_TEXT, 3)
S2 = expand_family(S2_TEXT, 24)
S3 = expand_family(S3_TEXT, 12)
L_B = expand_family(LB_TEXT, 24)

P_E6_VECTORS = P2 | P3          # minimal vectors of pi_E6
P_E6_STAR_VECTORS = P1 | P2     # minimal vectors of pi_E6*
S_E6 = S2 | S3                  # minimal vectors of phi_E6
S_E6_STAR = S1 | S2             # minimal vectors of phi_E6*
L_E6_STAR = L_B | S3            # long vectors of phi_E6*

P_1 = (-3, 2, 2, 2, 2, 2)

# parity-class representatives of the long vectors of phi_E6, with the number
# of classes in each orbit under even permutations of the last five coordinates
# (the printed "[-2;0-1^4]" is read as "[-2;0,-1^4]", and the printed L5 term
# "[-1;0,1^2,-1,1]", which is not a long vector, as "[-1;0,-1^2,1,-1]")
LONG_CLASS_TEXT = {
    "L1": ("±[2;-1,1^4]×5", 1),
    "L2": ("±[-2;0,-1^4], ±[4;2,1^4], ±[0;0,-1^2,1^2], ±[0;0,-1,1,-1,1], ±[0;0,-1,1^2,-1]", 5),
    "L3": ("±[0;1,0^4], ±[2;1,2,0^3], ±[2;1,0,2,0^2], ±[2;1,0^2,2,0], ±[2;1,0^3,2]", 5),
    "L4": ("±[1;2,0^4]×5", 1),
    "L5": ("±[3;0,1^4], ±[-1;0,1,-1^3], ±[-1;0,-1,1,-1^2], ±[-1;0,-1^2,1,-1], ±[-1;0,-1^3,1]", 5),
    "L6": ("±[-3;-2,0,-1^3], ±[-3;0,-2,-1^3], ±[1;0^2,-1,1^2], ±[1;0^2,1,-1,1], ±[1;0^2,1^2,-1]", 10),
}
LONG_CLASSES = {k: expand_family(t, 5) for k, (t, _) in LONG_CLASS_TEXT.items()}

# triangles inscribed in the reference cells
C_G = (Fraction(2, 3),) + (Fraction(1, 3),) * 5
C_T = (0, 0, 0, 0, Fraction(1, 3), Fraction(1, 3))
C_Q = (0, 0, 0, Fraction(1, 3), Fraction(1, 3), Fraction(1, 3))

DELTA_G_SPEC = {
    1: (["[0;0^5]", "[0;1,0^4]", "[2;0,1^4]"], 5),
    2: (["[3;1^5]", "[-1;-1,0^4]", "[0;1,0^4]"], 5),
    3: (["[1;0,1^2,0^2]", "[1;0^3,1^2]", "[0;1,0^4]"], 15),
    4: (["[1;1^2,0^3]", "[-1;0,-1,0^3]", "[2;0,1^4]"], 20),
}
DELTA_G = {i: triangle_family(p, C_G, k) for i, (p, k) in DELTA_G_SPEC.items()}
DELTA_G_REF = {
    1: frozenset({(0, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0), (2, 0, 1, 1, 1, 1)}),
    2: frozenset({(3, 1, 1, 1, 1, 1), (-1, -1, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0)}),
    3: frozenset({(1, 0, 1, 1, 0, 0), (1, 0, 0, 0, 1, 1), (0, 1, 0, 0, 0, 0)}),
    4: frozenset({(1, 1, 1, 0, 0, 0), (-1, 0, -1, 0, 0, 0), (2, 0, 1, 1, 1, 1)}),
}
E_G_TEXT = {
    1: "±[2;-1,1^4], ±[-2;0,-1^4], ±[0;1,0^4]",
    2: "±[-4;-2,-1^4], ±[1;2,0^4], ±[3;0,1^4]",
    3: "±[0;0,-1^2,1^2], ±[-1;1,0^2,-1^2], ±[1;-1,1^2,0^2]",
    4: "±[-2;-1,-2,0^3], ±[3;0,2,1^3], ±[-1;1,0,-1^3]",
}
E_G = {i: expand_family(t, 3) for i, t in E_G_TEXT.items()}

DELTA_T = {
    1: frozenset({(0, 0, 0, 0, 0, 0), (0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1)}),
    2: frozenset({(2, 0, 1, 1, 1, 1), (-1, 0, 0, -1, 0, 0), (-1, 0, -1, 0, 0, 0)}),
    3: frozenset({(0, 1, 0, 0, 0, 0), (1, 0, 0, 0, 1, 1), (-1, -1, 0, 0, 0, 0)}),
    4: frozenset({(0, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0), (2, 0, 1, 1, 1, 1)}),
}
E_T_TEXT = {
    1: "±[0,0,0,0,-1,1], ±[0,0,0,0,0,-1], ±[0,0,0,0,1,0]",
    2: "±[0,0,1,-1,0,0], ±[-3,0,-2,-1,-1,-1], ±[3,0,1,2,1,1]",
    3: "±[2,1,0,0,1,1], ±[-1,-2,0,0,0,0], ±[-1,1,0,0,-1,-1]",
}
E_T = {i: expand_family(t, 3) for i, t in E_T_TEXT.items()}

DELTA_Q = {
    1: frozenset({(0, 0, 0, 1, 0, 0), (0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1)}),
    2: frozenset({(0, 1, 0, 0, 0, 0), (-1, -1, 0, 0, 0, 0), (1, 0, 0, 1, 1, 1)}),
    3: frozenset({(2, 0, 1, 1, 1, 1), (-1, 0, 0, 0, 0, 0), (-1, 0, -1, 0, 0, 0)}),
}

S_Q = {
    1: ((0, 1, 0, 0, 0, 0), (2, 0, 1, 1, 1, 1), (-1, -1, 0, 0, 0, 0), (-1, 0, 0, 0, 0, 0)),
    2: ((0, 1, 0, 0, 0, 0), (2, 0, 1, 1, 1, 1), (1, 0, 0, 1, 1, 1), (-1, 0, -1, 0, 0, 0)),
    3: ((-1, -1, 0, 0, 0, 0), (-1, 0, 0, 0, 0, 0), (1, 0, 0, 1, 1, 1), (-1, 0, -1, 0, 0, 0)),
}
S_G = {
    1: ((0, 0, 1, 0, 0, 0), (0, 0, 0, 1, 0, 0), (0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1)),
    2: ((2, 1, 0, 1, 1, 1), (0, 0, 0, 1, 0, 0), (0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1)),
    3: ((-2, -1, -1, 0, 0, 0), (0, 0, 0, 1, 0, 0), (0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1)),
}
S_CENTROIDS = {
    1: tuple(Fraction(x, 4) for x in (0, 0, 1, 1, 1, 1)),
    2: tuple(Fraction(x, 4) for x in (2, 1, 0, 2, 2, 2)),
    3: tuple(Fraction(x, 4) for x in (-2, -1, -1, 1, 1, 1)),
}
V_G = S_G[1]
V_Q = S_Q[1]

G_VERTICES = tuple(sorted({v for fam in DELTA_G.values() for tri in fam for v in tri}))
G_STAR_VERTICES = tuple(sorted(DELTA_T[1] | DELTA_T[2] | DELTA_T[3]))
Q_VERTICES = tuple(sorted(DELTA_Q[1] | DELTA_Q[2] | DELTA_Q[3]))
R_VERTICES = tuple(sorted(set(V_G) | set(V_Q)))
WITNESS = S_CENTROIDS[1]


def phi_t(t) -> QuadraticForm:
    """(1 - t) phi_E6 + t phi_E6*."""
    t = frac(t)
    return PHI_E6.scale(1 - t) + PHI_E6_STAR.scale(t)


def repartitioning_matrix(vg=V_G, vq=V_Q) -> RationalMatrix:
    n = len(vg[0])
    acc = [[Fraction(0)] * n for _ in range(n)]
    for sign, vs in ((1, vg), (-1, vq)):
        for v in vs:
            for i in range(n):
                for j in range(n):
                    acc[i][j] += sign * v[i] * v[j]
    return RationalMatrix(tuple(map(tuple, acc)))


def image(U: RationalMatrix, vectors) -> frozenset:
    return frozenset(tuple(int(x) for x in (U @ tuple(v))) for v in vectors)


def sum_rank_one(vectors, weight) -> RationalMatrix:
    from .qform import oriented

    n = len(next(iter(vectors)))
    acc = [[Fraction(0)] * n for _ in range(n)]
    for v in oriented(vectors):
        for i in range(n):
            for j in range(n):
                acc[i][j] += v[i] * v[j]
    return RationalMatrix(tuple(map(tuple, acc))).scale(weight)


# ---------------------------------------------------------------------------
# verification


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]


def _residual(A: RationalMatrix, B: RationalMatrix) -> str:
    D = A - B
    bad = [(i, j, str(D.rows[i][j])) for i in range(D.shape[0]) for j in range(D.shape[1]) if D.rows[i][j] != 0]
    return "exact" if not bad else f"{len(bad)} entries differ, e.g. {bad[:4]}"


def _even_perm_orbit_sizes(classes: dict) -> dict:
    perms = [p for p in itertools.permutations(range(5))
             if sum(1 for i in range(5) for j in range(i + 1, 5) if p[i] > p[j]) % 2 == 0]
    out = {}
    for name, cls in classes.items():
        orbit = set()
        for p in perms:
            orbit.add(frozenset((v[0],) + tuple(v[1 + p[i]] for i in range(5)) for v in cls))
        out[name] = len(orbit)
    return out


def verify_dataset(corrupt: str | None = None) -> VerificationReport:
    """Recheck every stated relation among the embedded constants.

    ``corrupt`` names a constant to perturb before checking (a test hook used
    to exercise failure reporting); supported: ``"U_STAR_INV"``, ``"F_E6"``,
    ``"P1"``.
    """
    u_inv, f_e6, p1 = U_STAR_INV, F_E6, P1
    if corrupt == "U_STAR_INV":
        rows = [list(r) for r in U_STAR_INV.rows]
        rows[0][0] += 1
        u_inv = matrix(rows)
    elif corrupt == "F_E6":
        f_e6 = F_E6.scale(Fraction(3, 2))
    elif corrupt == "P1":
        p1 = frozenset(list(P1)[:-1])
    elif corrupt is not None:
        raise ValueError(f"unknown corruption target {corrupt!r}")

    rep = VerificationReport()
    add = rep.checks.append
    I6 = RationalMatrix.identity(6)

    add(Check("U* U*^-1 = I", U_STAR @ u_inv == I6, _residual(U_STAR @ u_inv, I6)))
    t1 = transform(PI_E6, U_STAR).gram
    t2 = transform(PI_E6_STAR, U_STAR).gram
    add(Check("U*^T P_E6 U* = F_E6", t1 == f_e6, _residual(t1, f_e6)))
    add(Check("U*^T P_E6* U* = F_E6*", t2 == F_E6_STAR, _residual(t2, F_E6_STAR)))
    target = I6.scale(Fraction(3, 8) * M * M)
    add(Check("F_E6 P_E6* = (3/8)m^2 I", f_e6 @ P_E6_STAR == target, _residual(f_e6 @ P_E6_STAR, target)))
    add(Check("F_E6* P_E6 = (3/8)m^2 I", F_E6_STAR @ P_E6 == target, _residual(F_E6_STAR @ P_E6, target)))
    for name, P, S in (("1", p1, S1), ("2", P2, S2), ("3", P3, S3)):
        img = image(u_inv, P)
        add(Check(f"S{name} = U*^-1 P{name}", img == S, f"{len(img ^ S)} vectors differ"))

    for label, Q, expected in (
        ("pi_E6 minimal vectors = P2 u P3", PI_E6, P2 | P3),
        ("pi_E6* minimal vectors = P1 u P2", PI_E6_STAR, p1 | P2),
        ("phi_E6 minimal vectors = S2 u S3", QuadraticForm(f_e6), S2 | S3),
        ("phi_E6* minimal vectors = S1 u S2", PHI_E6_STAR, S1 | S2),
    ):
        rep_min = minima(Q)
        ok = rep_min.minimal_vectors == expected and rep_min.min_value == M
        add(Check(label, ok, f"m={rep_min.min_value}, {len(rep_min.minimal_vectors)} vectors, {len(rep_min.minimal_vectors ^ expected)} differ"))

    for label, lhs, vecs, w in (
        ("pi_E6 = (m/12) sum over S_E6*", P_E6, S1 | S2, M / 12),
        ("pi_E6* = (m/16) sum over S_E6", P_E6_STAR, S2 | S3, M / 16),
        ("phi_E6 = (m/12) sum over P_E6*", f_e6, p1 | P2, M / 12),
        ("phi_E6* = (m/16) sum over P_E6", F_E6_STAR, P2 | P3, M / 16),
    ):
        rhs = sum_rank_one(vecs, w)
        add(Check(label, lhs == rhs, _residual(lhs, rhs)))

    built = repartitioning_matrix()
    add(Check("printed P_R = sum_VG vv^T - sum_VQ vv^T", built == P_R_PRINTED, _residual(P_R_PRINTED, built)))
    add(Check("sum V_G = sum V_Q = [0^2,1^4]",
              tuple(map(sum, zip(*V_G))) == tuple(map(sum, zip(*V_Q))) == (0, 0, 1, 1, 1, 1), ""))

    for label, fam, c in (("Delta_G", [t for f in DELTA_G.values() for t in f], C_G),
                          ("Delta_T", [DELTA_T[1], DELTA_T[2], DELTA_T[3]], C_T),
                          ("Delta_Q", list(DELTA_Q.values()), C_Q)):
        ok = all(tuple(Fraction(sum(v[i] for v in tri), 3) for i in range(6)) == tuple(frac(x) for x in c) for tri in fam)
        add(Check(f"{label} triangles share the stated centroid", ok, f"{len(fam)} triangles"))
    ok = all(tuple(Fraction(sum(v[i] for v in S_Q[k]), 4) for i in range(6)) == S_CENTROIDS[k]
             == tuple(Fraction(sum(v[i] for v in S_G[k]), 4) for i in range(6)) for k in (1, 2, 3))
    add(Check("S_Q^k and S_G^k share centroids", ok, ""))
    add(Check("G has 27 vertices from 45 triangles", len(G_VERTICES) == 27
              and sum(len(f) for f in DELTA_G.values()) == 45, f"{len(G_VERTICES)} vertices"))

    L_E6 = minima(QuadraticForm(f_e6)).long_vectors
    add(Check("E_G^1 = S1", edge_set(DELTA_G_REF[1]) == S1 == E_G[1], ""))
    for i in (2, 3, 4):
        add(Check(f"E_G^{i} = edges of Delta_G^{i}", edge_set(DELTA_G_REF[i]) == E_G[i], ""))
    for i in (1, 2, 3):
        add(Check(f"E_T^{i} = edges of Delta_T^{i}", edge_set(DELTA_T[i]) == E_T[i], ""))
    add(Check("E_T^4 = E_G^1 = L_E6 n S_E6*", edge_set(DELTA_T[4]) == E_G[1] == (L_E6 & (S1 | S2)), ""))
    add(Check("E_G families lie in L_E6", all(e <= L_E6 for e in E_G.values()), ""))
    add(Check("E_T^1..3 lie in L_E6*", all(E_T[i] <= L_E6_STAR for i in (1, 2, 3)), ""))
    add(Check("L_E6* = L_b u S3", minima(PHI_E6_STAR).long_vectors == L_E6_STAR, ""))

    sizes = _even_perm_orbit_sizes(LONG_CLASSES)
    expected = {k: v for k, (_, v) in LONG_CLASS_TEXT.items()}
    ok_par = all(len({tuple(x % 2 for x in v) for v in c}) == 1 for c in LONG_CLASSES.values())
    add(Check("L1..L6 are parity classes in L_E6", ok_par and all(c <= L_E6 for c in LONG_CLASSES.values()), ""))
    add(Check("L1..L6 orbit multiplicities 1,5,5,1,5,10 cover 270", sizes == expected
              and 10 * sum(expected.values()) == len(L_E6) == 270, str(sizes)))
    return rep
