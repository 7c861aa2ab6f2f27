"""Finitely generated projective modules and the maps between them.

A :class:`ProjModule` is a formal direct sum ``P_{v_1} ⊕ ... ⊕ P_{v_k}``.  A
:class:`ProjMap` is a matrix whose ``(j, i)`` entry lies in
``e_{w_j} Λ e_{v_i}``; maps compose by matrix multiplication over Λ
(``(g @ f)[k][i] = Σ_j g[k][j] * f[j][i]``).
"""
from __future__ import annotations

from typing import Iterable, List, Optional, Sequence

import numpy as np

from .quiver import AlgebraElement, AlgebraError, PathAlgebra

__all__ = ["ProjModule", "ProjMap", "HomCoords", "invert_unit", "solve_left", "inverse_map"]


class ProjModule(tuple):
    """Ordered tuple of vertex ids; the empty tuple is the zero module."""

    def __new__(cls, vertices: Iterable[str] = ()):
        return super().__new__(cls, (str(v) for v in vertices))

    def __add__(self, other):
        return ProjModule(tuple(self) + tuple(other))

    def __repr__(self):
        if not self:
            return "0"
        return " ⊕ ".join(f"P{v}" for v in self)


class ProjMap:
    """A Λ-linear map between projective modules (left multiplication matrix)."""

    __slots__ = ("algebra", "source", "target", "entries")

    def __init__(self, algebra: PathAlgebra, source, target, entries=None, check: bool = True):
        self.algebra = algebra
        self.source = ProjModule(source)
        self.target = ProjModule(target)
        if entries is None:
            z = algebra.zero()
            entries = [[z] * len(self.source) for _ in self.target]
        rows = tuple(tuple(r) for r in entries)
        if check:
            if len(rows) != len(self.target) or any(len(r) != len(self.source) for r in rows):
                raise AlgebraError(
                    f"entry matrix shape does not match {len(self.target)}x{len(self.source)}"
                )
            basis = algebra.basis
            for j, w in enumerate(self.target):
                for i, v in enumerate(self.source):
                    for k in rows[j][i].terms:
                        p = basis[k]
                        if p.source != v or p.target != w:
                            raise AlgebraError(
                                f"entry ({j},{i}) contains path {p} which is not a path {v} -> {w}"
                            )
        self.entries = rows

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, algebra, source, target):
        return cls(algebra, source, target, check=False)

    @classmethod
    def identity(cls, algebra, module):
        module = ProjModule(module)
        z = algebra.zero()
        rows = [[algebra.idempotent(v) if i == j else z for i in range(len(module))] for j, v in enumerate(module)]
        return cls(algebra, module, module, rows, check=False)

    @classmethod
    def from_words(cls, algebra, source, target, words):
        """Build from path-word strings; ``"1"`` means ``e_v`` on a diagonal-type entry."""
        from .codec import parse_element

        source, target = ProjModule(source), ProjModule(target)
        rows = []
        for j, w in enumerate(target):
            rows.append([parse_element(algebra, words[j][i], source[i], w) for i in range(len(source))])
        return cls(algebra, source, target, rows)

    @classmethod
    def block(cls, algebra, row_modules, col_modules, blocks):
        """Assemble from a 2D list of blocks; ``None`` means a zero block."""
        source = ProjModule(v for m in col_modules for v in m)
        target = ProjModule(v for m in row_modules for v in m)
        z = algebra.zero()
        rows = [[z] * len(source) for _ in target]
        r0 = 0
        for bi, rm in enumerate(row_modules):
            c0 = 0
            for bj, cm in enumerate(col_modules):
                b = blocks[bi][bj]
                if b is not None:
                    if b.target != ProjModule(rm) or b.source != ProjModule(cm):
                        raise AlgebraError(f"block ({bi},{bj}) has the wrong shape")
                    for j in range(len(rm)):
                        for i in range(len(cm)):
                            rows[r0 + j][c0 + i] = b.entries[j][i]
                c0 += len(cm)
            r0 += len(rm)
        return cls(algebra, source, target, rows, check=False)

    # -- structure --------------------------------------------------------
    @property
    def shape(self):
        return (len(self.target), len(self.source))

    def __getitem__(self, key):
        j, i = key
        return self.entries[j][i]

    def submap(self, rows: Sequence[int], cols: Sequence[int]) -> "ProjMap":
        return ProjMap(
            self.algebra,
            [self.source[i] for i in cols],
            [self.target[j] for j in rows],
            [[self.entries[j][i] for i in cols] for j in rows],
            check=False,
        )

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.entries for e in r)

    def is_radical(self) -> bool:
        """True if no entry has a nonzero ``e_v`` coefficient (minimality)."""
        return not any(e.has_unit_part() for r in self.entries for e in r)

    def unit_part(self, v: str):
        """Scalar matrix of ``e_v`` coefficients between the ``P_v`` summands."""
        A = self.algebra
        idx = A.trivial_index(v)
        rows = [j for j, w in enumerate(self.target) if w == v]
        cols = [i for i, u in enumerate(self.source) if u == v]
        data = [[self.entries[j][i].coeff(idx) for i in cols] for j in rows]
        return A.field.array(np.array(data, dtype=object).reshape(len(rows), len(cols)))

    def is_invertible(self) -> bool:
        """Invertible iff every unit-part block is square and nonsingular."""
        from .exactlin import is_invertible

        if sorted(self.source) != sorted(self.target):
            return False
        return all(is_invertible(self.algebra.field, self.unit_part(v)) for v in set(self.source))

    # -- arithmetic -------------------------------------------------------
    def _check_same(self, other):
        if self.source != other.source or self.target != other.target:
            raise AlgebraError("maps have different source/target")

    def __add__(self, other):
        self._check_same(other)
        rows = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)]
        return ProjMap(self.algebra, self.source, self.target, rows, check=False)

    def __sub__(self, other):
        self._check_same(other)
        rows = [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)]
        return ProjMap(self.algebra, self.source, self.target, rows, check=False)

    def __neg__(self):
        rows = [[-a for a in r] for r in self.entries]
        return ProjMap(self.algebra, self.source, self.target, rows, check=False)

    def scale(self, s):
        rows = [[a.scale(s) for a in r] for r in self.entries]
        return ProjMap(self.algebra, self.source, self.target, rows, check=False)

    def __matmul__(self, other: "ProjMap") -> "ProjMap":
        """Composition ``self ∘ other``."""
        if other.target != self.source:
            raise AlgebraError(f"cannot compose: {other.target!r} vs {self.source!r}")
        A = self.algebra
        mult = A._mult
        n_mid = len(self.source)
        rows = []
        for j in range(len(self.target)):
            row = []
            for i in range(len(other.source)):
                acc = {}
                for k in range(n_mid):
                    a = self.entries[j][k].terms
                    if not a:
                        continue
                    b = other.entries[k][i].terms
                    if not b:
                        continue
                    for x, cx in a.items():
                        mrow = mult[x]
                        for y, cy in b.items():
                            z = mrow[y]
                            if z >= 0:
                                acc[z] = acc.get(z, 0) + cx * cy
                row.append(AlgebraElement(A, acc))
            rows.append(row)
        return ProjMap(A, other.source, self.target, rows, check=False)

    def __eq__(self, other):
        return (
            isinstance(other, ProjMap)
            and self.source == other.source
            and self.target == other.target
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.source, self.target, self.entries))

    def permuted(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "ProjMap":
        return self.submap(row_perm, col_perm)

    def words(self) -> List[List[str]]:
        return [[e.words() for e in r] for r in self.entries]

    def __repr__(self):
        body = "; ".join(", ".join(r) for r in self.words())
        return f"ProjMap({self.source!r} -> {self.target!r}: [{body}])"


def invert_unit(x: AlgebraElement, v: str) -> AlgebraElement:
    """Inverse of ``x ∈ e_v Λ e_v`` with nonzero ``e_v`` coefficient (a unit of the local ring)."""
    A = x.algebra
    F = A.field
    c = x.idempotent_coeff(v)
    if c == 0:
        raise ZeroDivisionError(f"{x.words()} is not a unit of e_{v} Λ e_{v}")
    ci = F.inv(c)
    e = A.idempotent(v)
    r = e - x.scale(ci)  # x = c (e - r), r nilpotent
    out = e
    power = e
    while True:
        power = power * r
        if power.is_zero():
            break
        out = out + power
    return out.scale(ci)


class HomCoords:
    """Coordinates on a space of ProjMaps ``source -> target``.

    ``allowed(i, j)`` restricts which entries may be nonzero (source summand
    ``i``, target summand ``j``).  Each coordinate is a triple
    ``(j, i, basis_index)``.
    """

    def __init__(self, algebra: PathAlgebra, source, target, allowed=None):
        self.algebra = algebra
        self.source = ProjModule(source)
        self.target = ProjModule(target)
        coords = []
        for j, w in enumerate(self.target):
            for i, v in enumerate(self.source):
                if allowed is not None and not allowed(i, j):
                    continue
                for k in algebra.hom_basis(v, w):
                    coords.append((j, i, k))
        self.coords = coords
        self.index = {c: n for n, c in enumerate(coords)}

    def __len__(self):
        return len(self.coords)

    def vector(self, f: ProjMap) -> np.ndarray:
        F = self.algebra.field
        out = [0] * len(self.coords)
        for j, row in enumerate(f.entries):
            for i, e in enumerate(row):
                for k, c in e.terms.items():
                    n = self.index.get((j, i, k))
                    if n is None:
                        raise AlgebraError(f"map has an entry outside the coordinate space at ({j},{i})")
                    out[n] = c
        return F.array(np.array(out, dtype=object).reshape(len(out), 1))

    def from_vector(self, vec) -> ProjMap:
        A = self.algebra
        vec = np.asarray(vec).reshape(-1)
        terms = [[{} for _ in self.source] for _ in self.target]
        for n, (j, i, k) in enumerate(self.coords):
            c = vec[n]
            if c != 0:
                terms[j][i][k] = c
        rows = [[AlgebraElement(A, t) for t in r] for r in terms]
        return ProjMap(A, self.source, self.target, rows, check=False)

    def basis_map(self, n: int) -> ProjMap:
        A = self.algebra
        j, i, k = self.coords[n]
        z = A.zero()
        rows = [[z] * len(self.source) for _ in self.target]
        rows[j][i] = AlgebraElement(A, {k: 1})
        return ProjMap(A, self.source, self.target, rows, check=False)

    def matrix_of(self, maps: Sequence[ProjMap]) -> np.ndarray:
        """Columns are the coordinate vectors of ``maps``."""
        F = self.algebra.field
        if not maps:
            return F.zeros(len(self.coords), 0)
        return np.concatenate([self.vector(m) for m in maps], axis=1)


def solve_left(d: ProjMap, rhs: ProjMap) -> Optional[ProjMap]:
    """Some ``x`` with ``d ∘ x = rhs``, or ``None``."""
    from . import exactlin as el

    A = d.algebra
    co = HomCoords(A, rhs.source, d.source)
    out = HomCoords(A, rhs.source, d.target)
    if len(out) == 0:
        return ProjMap.zero(A, rhs.source, d.source)
    target = out.vector(rhs)
    if len(co) == 0:
        return ProjMap.zero(A, rhs.source, d.source) if not target.any() else None
    M = out.matrix_of([d @ co.basis_map(k) for k in range(len(co))])
    sol = el.solve(A.field, M, target)
    if sol is None:
        return None
    return co.from_vector(sol.x[:, 0])


def inverse_map(f: ProjMap) -> ProjMap:
    """Two-sided inverse of an invertible ProjMap."""
    if not f.is_invertible():
        raise AlgebraError("map is not invertible")
    g = solve_left(f, ProjMap.identity(f.algebra, f.target))
    assert g is not None and g @ f == ProjMap.identity(f.algebra, f.source)
    return g
