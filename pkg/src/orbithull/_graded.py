"""Shared engine for complexes of projectives.

Both bounded complexes and n-periodic complexes are handled as a single
"total" object: a projective module ``M`` whose summands carry a degree label,
together with one differential ``ε: M -> M`` of degree +1.  For bounded
complexes labels are integers and ``succ(d) = d + 1``; for period ``n`` they
are residues and ``succ(d) = (d + 1) % n``.

Everything downstream (chain maps, null-homotopies, homotopy-category Hom,
Gaussian elimination) is phrased once in these terms.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import exactlin as el
from .proj import HomCoords, ProjMap, ProjModule, invert_unit
from .quiver import PathAlgebra


@dataclass(frozen=True)
class Total:
    algebra: PathAlgebra
    module: ProjModule
    labels: Tuple
    diff: ProjMap
    period: Optional[int] = None  # None for bounded complexes

    def succ(self, d):
        return d + 1 if self.period is None else (d + 1) % self.period

    def __len__(self):
        return len(self.module)

    def label_order(self):
        return sorted(set(self.labels))

    def restrict(self, keep: Sequence[int]) -> "Total":
        keep = list(keep)
        return Total(
            self.algebra,
            ProjModule(self.module[i] for i in keep),
            tuple(self.labels[i] for i in keep),
            self.diff.submap(keep, keep),
            self.period,
        )

    def is_minimal(self) -> bool:
        return self.diff.is_radical()

    def squares_to_zero(self) -> bool:
        return (self.diff @ self.diff).is_zero()


def shift_total(X: Total, k: int = 1) -> Total:
    """``Σ^k``: labels drop by ``k``, differential picks up ``(-1)^k``."""
    if X.period is None:
        labels = tuple(d - k for d in X.labels)
    else:
        labels = tuple((d - k) % X.period for d in X.labels)
    diff = X.diff if k % 2 == 0 else -X.diff
    return Total(X.algebra, X.module, labels, diff, X.period)


def direct_sum_total(X: Total, Y: Total) -> Total:
    diff = ProjMap.block(X.algebra, [X.module, Y.module], [X.module, Y.module], [[X.diff, None], [None, Y.diff]])
    return Total(X.algebra, X.module + Y.module, X.labels + Y.labels, diff, X.period)


def cone_total(X: Total, Y: Total, f: ProjMap) -> Total:
    """Cone of a degree-preserving chain map: ``ΣX ⊕ Y`` with ``[[-ε_X, 0], [f, ε_Y]]``."""
    sx = shift_total(X, 1)
    diff = ProjMap.block(X.algebra, [X.module, Y.module], [X.module, Y.module], [[-X.diff, None], [f, Y.diff]])
    return Total(X.algebra, X.module + Y.module, sx.labels + Y.labels, diff, X.period)


def wrap_total(X: Total, n: int) -> Total:
    """Reduce labels modulo ``n`` (compression when ``X`` is bounded)."""
    return Total(X.algebra, X.module, tuple(d % n for d in X.labels), X.diff, n)


def sort_total(X: Total) -> Tuple[Total, List[int]]:
    """Stable reorder by label; returns the reordered object and the permutation used."""
    perm = sorted(range(len(X.labels)), key=lambda i: X.labels[i])
    return X.restrict(perm), perm


def coords(X: Total, Y: Total, degree: int = 0) -> HomCoords:
    """Coordinates of maps ``X -> Y`` raising the degree label by ``degree`` (0 or ±1)."""
    if degree == 0:
        ok = lambda i, j: X.labels[i] == Y.labels[j]
    elif degree == 1:
        ok = lambda i, j: Y.labels[j] == X.succ(X.labels[i])
    elif degree == -1:
        ok = lambda i, j: X.labels[i] == Y.succ(Y.labels[j])
    else:
        raise ValueError("degree must be -1, 0 or 1")
    return HomCoords(X.algebra, X.module, Y.module, ok)


def _op_matrix(X: Total, Y: Total, dom: HomCoords, cod: HomCoords, sign_right: int) -> np.ndarray:
    """Matrix of ``E ↦ ε_Y E + sign_right · E ε_X`` from ``dom`` to ``cod`` coordinates."""
    A = X.algebra
    F = A.field
    mult = A._mult
    eY = Y.diff.entries
    eX = X.diff.entries
    idx = cod.index
    cols = []
    for (j, i, p) in dom.coords:
        col = {}
        for jj in range(len(Y.module)):
            for x, c in eY[jj][j].terms.items():
                z = mult[x][p]
                if z >= 0:
                    key = idx[(jj, i, z)]
                    col[key] = col.get(key, 0) + c
        for ii in range(len(X.module)):
            for x, c in eX[i][ii].terms.items():
                z = mult[p][x]
                if z >= 0:
                    key = idx[(j, ii, z)]
                    col[key] = col.get(key, 0) + sign_right * c
        cols.append(col)
    M = np.zeros((len(cod), len(dom)), dtype=object)
    M[:] = 0
    for n, col in enumerate(cols):
        for key, v in col.items():
            M[key, n] = v
    return F.array(M)


@dataclass
class HomData:
    """Chain maps modulo null-homotopic ones, in the ``chain`` coordinates."""

    chain: HomCoords
    cycles: np.ndarray       # columns: basis of chain maps
    boundaries: np.ndarray   # columns: basis of null-homotopic chain maps
    quotient: np.ndarray     # columns: chain maps projecting to a basis of the quotient

    @property
    def dim(self) -> int:
        return self.quotient.shape[1]

    def maps(self, which: str = "quotient") -> List[ProjMap]:
        M = getattr(self, which)
        return [self.chain.from_vector(M[:, k]) for k in range(M.shape[1])]


def chain_map_basis(X: Total, Y: Total) -> Tuple[HomCoords, np.ndarray]:
    F = X.algebra.field
    dom = coords(X, Y, 0)
    full = HomCoords(X.algebra, X.module, Y.module)
    if len(dom) == 0:
        return dom, F.zeros(0, 0)
    M = _op_matrix(X, Y, dom, full, -1)
    return dom, el.nullspace(F, M)


def homotopy_operator(X: Total, Y: Total, chain: HomCoords) -> Tuple[HomCoords, np.ndarray]:
    """Matrix of ``s ↦ s ε_X + ε_Y s`` from homotopy coordinates to ``chain`` coordinates."""
    hcoords = coords(X, Y, -1)
    if len(hcoords) == 0 or len(chain) == 0:
        return hcoords, X.algebra.field.zeros(len(chain), len(hcoords))
    return hcoords, _op_matrix(X, Y, hcoords, chain, 1)


def hom_homotopy(X: Total, Y: Total) -> HomData:
    F = X.algebra.field
    chain, Z = chain_map_basis(X, Y)
    _, H = homotopy_operator(X, Y, chain)
    B = el.column_basis(F, H) if H.size else F.zeros(len(chain), 0)
    if Z.shape[1] == 0:
        return HomData(chain, Z, B, Z)
    picks = el.complement_columns(F, B, Z)
    Q = Z[:, picks] if picks else F.zeros(len(chain), 0)
    return HomData(chain, Z, B, Q)


def reduce_mod_boundaries(data: HomData, vec) -> np.ndarray:
    """Coordinates of a chain-map vector in the quotient basis."""
    F = data.chain.algebra.field
    basis = np.concatenate([data.quotient, data.boundaries], axis=1)
    sol = el.solve(F, basis, vec)
    if sol is None:
        raise ValueError("vector is not a chain map")
    return sol.x[: data.dim]


def null_homotopy(X: Total, Y: Total, f: ProjMap) -> Optional[ProjMap]:
    """Some ``s`` with ``f = s ε_X + ε_Y s``, or ``None``."""
    F = X.algebra.field
    full = HomCoords(X.algebra, X.module, Y.module)
    hcoords = coords(X, Y, -1)
    target = full.vector(f)
    if len(hcoords) == 0:
        return ProjMap.zero(X.algebra, X.module, Y.module) if f.is_zero() else None
    H = _op_matrix(X, Y, hcoords, full, 1)
    sol = el.solve(F, H, target)
    if sol is None:
        return None
    return hcoords.from_vector(sol.x[:, 0])


# -- Gaussian elimination ---------------------------------------------------

@dataclass
class Reduction:
    """``X ≃ reduced`` with ``f: X -> reduced``, ``g: reduced -> X``.

    ``f ∘ g = 1`` and ``g ∘ f - 1 = s ε + ε s``.
    """

    reduced: Total
    f: ProjMap
    g: ProjMap
    s: ProjMap


def find_pivot(X: Total) -> Optional[Tuple[int, int]]:
    """First unit entry ``(row c, col b)``, ``b != c``, scanning source degrees upward, rows then columns."""
    A = X.algebra
    basis = A.basis
    entries = X.diff.entries
    for d in X.label_order():
        cols = [i for i, lab in enumerate(X.labels) if lab == d]
        rows = [j for j, lab in enumerate(X.labels) if lab == X.succ(d)]
        for c in rows:
            for b in cols:
                if b == c:
                    continue
                if any(not basis[k].word for k in entries[c][b].terms):
                    return c, b
    return None


def _with_column(identity_rows, col: int, values):
    rows = [list(r) for r in identity_rows]
    for k, v in enumerate(values):
        rows[k][col] = v
    return rows


def eliminate(X: Total, c: int, b: int) -> Reduction:
    """Cancel the unit entry ``ε[c][b]`` (a ``P_v -> P_v`` component)."""
    A = X.algebra
    M = X.module
    n = len(M)
    v = M[b]
    eps = X.diff
    phi = eps.entries[c][b]
    phi_inv = invert_unit(phi, v)
    I = ProjMap.identity(A, M)

    u = [eps.entries[k][b] for k in range(n)]
    T = ProjMap(A, M, M, _with_column(I.entries, c, u), check=False)
    w = [(-u[k]) * phi_inv if k != c else phi_inv for k in range(n)]
    T_inv = ProjMap(A, M, M, _with_column(I.entries, c, w), check=False)
    eps1 = T_inv @ eps @ T

    rest = [k for k in range(n) if k not in (b, c)]
    s_rows = [list(r) for r in I.entries]
    si_rows = [list(r) for r in I.entries]
    for a in rest:
        s_rows[b][a] = -eps1.entries[c][a]
        si_rows[b][a] = eps1.entries[c][a]
    S = ProjMap(A, M, M, s_rows, check=False)
    S_inv = ProjMap(A, M, M, si_rows, check=False)
    U = T @ S
    U_inv = S_inv @ T_inv
    eps2 = S_inv @ eps1 @ S
    assert all(eps2.entries[k][c].is_zero() for k in range(n)), "elimination left column c nonzero"
    assert all(eps2.entries[b][k].is_zero() for k in range(n)), "elimination left row b nonzero"

    reduced = X.restrict(rest)
    reduced = Total(A, reduced.module, reduced.labels, eps2.submap(rest, rest), X.period)
    f = U_inv.submap(rest, list(range(n)))
    g = U.submap(list(range(n)), rest)
    z = A.zero()
    s0_rows = [[z] * n for _ in range(n)]
    s0_rows[b][c] = A.idempotent(v)
    s0 = ProjMap(A, M, M, s0_rows, check=False)
    s = -(U @ s0 @ U_inv)
    return Reduction(reduced, f, g, s)


def minimize(X: Total) -> Reduction:
    A = X.algebra
    I = ProjMap.identity(A, X.module)
    F_tot, G_tot = I, I
    S_tot = ProjMap.zero(A, X.module, X.module)
    cur = X
    while True:
        piv = find_pivot(cur)
        if piv is None:
            break
        step = eliminate(cur, *piv)
        S_tot = S_tot + G_tot @ step.s @ F_tot
        F_tot = step.f @ F_tot
        G_tot = G_tot @ step.g
        cur = step.reduced
    return Reduction(cur, F_tot, G_tot, S_tot)


def is_chain_map(X: Total, Y: Total, f: ProjMap) -> bool:
    return (Y.diff @ f - f @ X.diff).is_zero()


def verify_reduction(X: Total, red: Reduction) -> bool:
    Y = red.reduced
    A = X.algebra
    ok = is_chain_map(X, Y, red.f) and is_chain_map(Y, X, red.g)
    ok = ok and (red.f @ red.g) == ProjMap.identity(A, Y.module)
    lhs = red.g @ red.f - ProjMap.identity(A, X.module)
    rhs = red.s @ X.diff + X.diff @ red.s
    return ok and lhs == rhs
