"""Integral automorphism groups of positive forms and their actions.

Groups of the sizes met here (up to ~10^5 elements) are stored as a full
element table: an ``(N, n, n)`` int64 array.  Group elements act on column
vectors, ``x -> g x``.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .exactgeom import ExactPolytope, RationalMatrix, invert, lcm_denominator, matrix
from .qform import QuadraticForm, ldl, short_vectors


class NotClosed(ValueError):
    pass


_CHUNK = 8192


def _key(g: np.ndarray) -> bytes:
    return np.ascontiguousarray(g, dtype=np.int64).tobytes()


def _vector_codes(vecs: np.ndarray, radix: int) -> np.ndarray:
    """Injective int64 codes for integer vectors with |entries| < radix/2 (last axis)."""
    half = radix // 2
    v = vecs.astype(np.int64) + half
    code = np.zeros(v.shape[:-1], dtype=np.int64)
    for i in range(v.shape[-1]):
        code = code * radix + v[..., i]
    return code


class IntegralGroup:
    """A finite subgroup of GL(n, Z) held as a sorted element table."""

    def __init__(self, elements: np.ndarray, generators: Sequence[np.ndarray] | None = None, form: QuadraticForm | None = None):
        elements = np.asarray(elements, dtype=np.int64)
        order = np.lexsort(elements.reshape(len(elements), -1).T[::-1])
        self.elements = elements[order]
        self.n = elements.shape[1]
        self.form = form
        self._generators = None if generators is None else [np.asarray(g, dtype=np.int64) for g in generators]

    # -- basic protocol -------------------------------------------------
    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return self.order

    @cached_property
    def _index(self) -> dict:
        return {_key(g): i for i, g in enumerate(self.elements)}

    def __contains__(self, g) -> bool:
        g = np.asarray(matrix(g).to_int_rows() if isinstance(g, RationalMatrix) else g)
        if g.shape != (self.n, self.n):
            return False
        return _key(g) in self._index

    def element_set(self) -> set:
        return set(self._index)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntegralGroup) and self.order == other.order and np.array_equal(self.elements, other.elements)

    @property
    def generators(self) -> list[np.ndarray]:
        if self._generators is None:
            self._generators = _greedy_generators(self.elements)
        return self._generators

    def identity(self) -> np.ndarray:
        return np.eye(self.n, dtype=np.int64)

    def act(self, g: np.ndarray, v: Sequence[int]) -> tuple:
        return tuple(int(x) for x in g @ np.asarray(v, dtype=np.int64))

    # -- subgroups --------------------------------------------------------
    def subgroup(self, mask: np.ndarray) -> "IntegralGroup":
        return IntegralGroup(self.elements[mask], form=self.form)

    def conjugate(self, U, Uinv) -> "IntegralGroup":
        """The group U G U^-1 (U, U^-1 integral)."""
        U = np.asarray(matrix(U).to_int_rows(), dtype=np.int64)
        Ui = np.asarray(matrix(Uinv).to_int_rows(), dtype=np.int64)
        return IntegralGroup(U @ self.elements @ Ui)

    def transposed(self) -> "IntegralGroup":
        return IntegralGroup(np.transpose(self.elements, (0, 2, 1)))


def _closure(gens: list[np.ndarray], n: int) -> np.ndarray:
    """All products of the generators (breadth-first)."""
    seen = {_key(np.eye(n, dtype=np.int64))}
    elems = [np.eye(n, dtype=np.int64)]
    frontier = np.eye(n, dtype=np.int64)[None]
    G = np.stack(gens)
    while len(frontier):
        prods = (frontier[:, None] @ G[None]).reshape(-1, n, n)
        new = []
        for p in prods:
            k = _key(p)
            if k not in seen:
                seen.add(k)
                new.append(p)
        elems.extend(new)
        frontier = np.array(new, dtype=np.int64).reshape(-1, n, n)
    return np.array(elems, dtype=np.int64)


def _greedy_generators(elements: np.ndarray) -> list[np.ndarray]:
    n = elements.shape[1]
    eye = np.eye(n, dtype=np.int64)
    have = {_key(eye)}
    gens: list[np.ndarray] = []
    # try elements in a deterministic order; stop once everything is generated
    for g in elements:
        if _key(g) in have:
            continue
        gens.append(g.copy())
        have = {_key(h) for h in _closure(gens, n)}
        if len(have) == len(elements):
            break
    return gens


def group_from_generators(gens: Iterable, form: QuadraticForm | None = None) -> IntegralGroup:
    gens = [np.asarray(matrix(g).to_int_rows() if not isinstance(g, np.ndarray) else g, dtype=np.int64) for g in gens]
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].shape[0]
    return IntegralGroup(_closure(gens, n), generators=gens, form=form)


def trivial_group(n: int) -> IntegralGroup:
    return IntegralGroup(np.eye(n, dtype=np.int64)[None], generators=[])


# ---------------------------------------------------------------------------
# automorphism groups


def _gcd_of_minors(vectors: list[tuple[int, ...]]) -> int:
    k = len(vectors)
    n = len(vectors[0])
    g = 0
    for cols in itertools.combinations(range(n), k):
        sub = RationalMatrix(tuple(tuple(v[c] for c in cols) for v in vectors))
        g = math.gcd(g, int(sub.det()))
        if g == 1:
            return 1
    return g


def _unimodular_basis(vecs: list[tuple[int, ...]], n: int) -> list[tuple[int, ...]] | None:
    basis: list[tuple[int, ...]] = []
    for v in vecs:
        trial = basis + [v]
        if _gcd_of_minors(trial) == 1:
            basis = trial
            if len(basis) == n:
                return basis
    return None


def _integer_gram(Q: QuadraticForm) -> np.ndarray:
    d = lcm_denominator(Q.gram.entries)
    return np.array([[int(x * d) for x in r] for r in Q.gram.rows], dtype=np.int64)


def automorphism_group(Q: QuadraticForm) -> IntegralGroup:
    """All g in GL(n, Z) with g^T Q g = Q, by backtracking over basis images."""
    ldl(Q)  # raises NotPositiveDefinite
    n = Q.n
    G = _integer_gram(Q)
    bound = max(Q.gram.rows[i][i] for i in range(n))
    # smallest norm level whose vectors contain a unimodular basis
    levels = sorted({v for _, v in short_vectors(Q, bound)})
    basis = None
    for lev in levels:
        pool = [z for z, v in short_vectors(Q, lev)]
        basis = _unimodular_basis(pool, n)
        if basis is not None:
            break
    assert basis is not None  # the unit vectors lie below ``bound``
    top = max(Q(b) for b in basis)
    cand = np.array([z for z, v in short_vectors(Q, top)], dtype=np.int64)
    B = np.array(basis, dtype=np.int64)  # rows are basis vectors
    ip_cand = cand @ G @ cand.T
    norms = np.einsum("ij,jk,ik->i", cand, G, cand)
    ipB = B @ G @ B.T
    level_mask = [norms == ipB[i, i] for i in range(n)]

    chosen: list[int] = []
    results: list[list[int]] = []

    def rec(k: int):
        if k == n:
            results.append(list(chosen))
            return
        mask = level_mask[k].copy()
        for j, c in enumerate(chosen):
            mask &= ip_cand[c] == ipB[j, k]
        for idx in np.flatnonzero(mask):
            chosen.append(int(idx))
            rec(k + 1)
            chosen.pop()

    rec(0)
    W = cand[np.array(results)]  # (N, n, n): W[e, i] is the image of basis vector i
    Binv = np.array(invert(RationalMatrix(tuple(map(tuple, B.T)))).to_int_rows(), dtype=np.int64)
    # g B^T = W^T  ->  g = W^T Binv
    elements = np.transpose(W, (0, 2, 1)) @ Binv
    check = np.transpose(elements, (0, 2, 1)) @ G @ elements
    assert np.all(check == G[None])
    return IntegralGroup(elements, form=Q)


def is_automorphism(Q: QuadraticForm, g) -> bool:
    M = matrix(g)
    if not M.is_integral() or abs(M.det()) != 1:
        return False
    return M.T @ Q.gram @ M == Q.gram


def dual_group(G: IntegralGroup) -> IntegralGroup:
    """{(g^-1)^T : g in G}; as a set this is the set of transposes."""
    gens = None
    if G._generators is not None:
        gens = [np.array(invert(RationalMatrix(tuple(map(tuple, g.tolist())))).T.to_int_rows(), dtype=np.int64)
                for g in G._generators]
    form = None
    if G.form is not None:
        from .qform import dual

        form = dual(G.form)
    return IntegralGroup(np.transpose(G.elements, (0, 2, 1)), generators=gens, form=form)


def dual_element(g) -> np.ndarray:
    M = RationalMatrix(tuple(map(tuple, np.asarray(g).tolist())))
    return np.array(invert(M).T.to_int_rows(), dtype=np.int64)


# ---------------------------------------------------------------------------
# stabilizers and orbits


def _scaled_points(points) -> tuple[np.ndarray, int]:
    pts = [tuple(Fraction(x) for x in p) for p in points]
    d = lcm_denominator(x for p in pts for x in p)
    return np.array([[int(x * d) for x in p] for p in pts], dtype=np.int64), d


def _stabilizer_mask(G: IntegralGroup, pts: np.ndarray) -> np.ndarray:
    if len(pts) == 0:
        return np.ones(G.order, dtype=bool)
    radix = 2 * (int(np.abs(pts).max()) * G.n * int(np.abs(G.elements).max()) + 1) + 1
    bits = math.log2(radix) * G.n
    if bits > 62:
        raise OverflowError("points too large for the packed membership test")
    target = np.sort(_vector_codes(pts, radix))
    out = np.empty(G.order, dtype=bool)
    for s in range(0, G.order, _CHUNK):
        E = G.elements[s:s + _CHUNK]
        imgs = np.einsum("eij,kj->eki", E, pts)
        codes = _vector_codes(imgs, radix)
        pos = np.searchsorted(target, codes)
        pos = np.minimum(pos, len(target) - 1)
        out[s:s + _CHUNK] = np.all(target[pos] == codes, axis=1)
    return out


def set_stabilizer(G: IntegralGroup, S: Iterable[Sequence]) -> IntegralGroup:
    """Subgroup of elements g with g S = S (S finite, possibly rational)."""
    pts, _ = _scaled_points(sorted(set(tuple(v) for v in S)))
    return G.subgroup(_stabilizer_mask(G, pts))


def multi_set_stabilizer(G: IntegralGroup, sets: Iterable[Iterable[Sequence]]) -> IntegralGroup:
    mask = np.ones(G.order, dtype=bool)
    for S in sets:
        pts, _ = _scaled_points(sorted(set(tuple(v) for v in S)))
        mask &= _stabilizer_mask(G, pts)
    return G.subgroup(mask)


def cell_stabilizer(G: IntegralGroup, P) -> IntegralGroup:
    verts = P.vertices if isinstance(P, ExactPolytope) else getattr(P, "vertices", P)
    return set_stabilizer(G, verts)


def pointwise_stabilizer(G: IntegralGroup, points: Iterable[Sequence]) -> IntegralGroup:
    pts, _ = _scaled_points(list(points))
    mask = np.ones(G.order, dtype=bool)
    for p in pts:
        mask &= np.all(G.elements @ p == p, axis=1)
    return G.subgroup(mask)


def restriction_kernel(G: IntegralGroup, sublattice_basis: Iterable[Sequence[int]]) -> IntegralGroup:
    """Elements fixing every point of the sublattice spanned by the basis."""
    return pointwise_stabilizer(G, sublattice_basis)


def orbits(G: IntegralGroup, S: Iterable[Sequence]) -> list[list[tuple]]:
    """Orbit partition of a finite G-invariant set (sorted orbits, sorted members)."""
    S = set(tuple(v) for v in S)
    gens = G.generators
    remaining = set(S)
    out = []
    while remaining:
        start = min(remaining)
        orb = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for v in frontier:
                for g in gens:
                    w = G.act(g, v)
                    if w not in S:
                        raise NotClosed(f"{w} = g{v} lies outside the set")
                    if w not in orb:
                        orb.add(w)
                        nxt.append(w)
            frontier = nxt
        remaining -= orb
        out.append(sorted(orb))
    out.sort(key=lambda o: (len(o), o[0]))
    return out


def orbits_of_sets(G: IntegralGroup, family: Iterable[frozenset]) -> list[list[frozenset]]:
    """Orbit partition of a G-invariant family of finite integer point sets."""
    fam = set(frozenset(tuple(v) for v in s) for s in family)
    gens = G.generators
    remaining = set(fam)
    out = []
    while remaining:
        start = min(remaining, key=lambda s: sorted(s))
        orb = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for s in frontier:
                arr = np.array(sorted(s), dtype=np.int64)
                for g in gens:
                    img = frozenset(tuple(int(x) for x in r) for r in arr @ g.T)
                    if img not in fam:
                        raise NotClosed("family is not closed under the group")
                    if img not in orb:
                        orb.add(img)
                        nxt.append(img)
            frontier = nxt
        remaining -= orb
        out.append(sorted(orb, key=lambda s: sorted(s)))
    return out
