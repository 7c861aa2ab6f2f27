"""n-periodic complexes; at ``n = 1`` these are differential modules ``(M, ε)``.

Positions are ``0, ..., n-1`` and ``d^r: X^r -> X^{r+1 mod n}``.  Two flavors:

* :class:`PeriodicComplex` has projective terms and lives on the shared
  total-object engine, so homotopy questions are linear systems over Λ-paths;
* :class:`RepPeriodicComplex` has arbitrary representations as terms and is
  used for homology and quasi-isomorphism checks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import _graded as g
from . import exactlin as el
from .boundedcx import NotAComplex
from .proj import ProjMap, ProjModule
from .quiver import AlgebraError, PathAlgebra
from .repmod import RepMap, Representation, eval_proj, eval_projmap

__all__ = [
    "PeriodicComplex",
    "RepPeriodicComplex",
    "PeriodicMap",
    "RepPeriodicMap",
    "make_periodic",
    "shift_periodic",
    "cone_periodic",
    "homology_periodic",
    "null_homotopy",
    "hom_kn",
    "quasi_iso",
    "minimize_periodic",
    "iso_cn",
    "indecomposable_kn",
    "unroll",
    "wrap",
]


class PeriodicComplex:
    """Projective flavor, stored as a :class:`_graded.Total` with residue labels."""

    def __init__(self, total: g.Total, check: bool = True):
        if total.period is None or total.period < 1:
            raise AlgebraError("a periodic complex needs a period n >= 1")
        if any(not (0 <= d < total.period) for d in total.labels):
            raise AlgebraError("positions must lie in 0..n-1")
        self.total = total
        if check and not total.squares_to_zero():
            raise NotAComplex(f"consecutive differentials do not compose to zero: {(total.diff @ total.diff)!r}")

    @property
    def algebra(self) -> PathAlgebra:
        return self.total.algebra

    @property
    def n(self) -> int:
        return self.total.period

    def indices(self, r: int) -> List[int]:
        return [k for k, d in enumerate(self.total.labels) if d == r % self.n]

    def term(self, r: int) -> ProjModule:
        return ProjModule(self.total.module[k] for k in self.indices(r))

    def diff(self, r: int) -> ProjMap:
        return self.total.diff.submap(self.indices(r + 1), self.indices(r))

    def is_zero(self) -> bool:
        return len(self.total) == 0

    def is_minimal(self) -> bool:
        return self.total.is_minimal()

    def evaluate(self) -> "RepPeriodicComplex":
        A = self.algebra
        terms = [eval_proj(A, self.term(r)) for r in range(self.n)]
        diffs = [eval_projmap(self.diff(r), terms[r], terms[(r + 1) % self.n]) for r in range(self.n)]
        return RepPeriodicComplex(terms, diffs, check=False)

    def direct_sum(self, other: "PeriodicComplex") -> "PeriodicComplex":
        return PeriodicComplex(g.direct_sum_total(self.total, other.total), check=False)

    def identity(self) -> "PeriodicMap":
        return PeriodicMap(self, self, ProjMap.identity(self.algebra, self.total.module), check=False)

    def __eq__(self, other):
        return (
            isinstance(other, PeriodicComplex)
            and self.total.module == other.total.module
            and self.total.labels == other.total.labels
            and self.total.diff == other.total.diff
            and self.n == other.n
        )

    def summary(self) -> dict:
        return {
            "period": self.n,
            "module": list(self.total.module),
            "positions": list(self.total.labels),
            "differential": self.total.diff.words(),
        }

    def __repr__(self):
        return f"PeriodicComplex(n={self.n}, {self.total.module!r}, ε={self.total.diff.words()})"


class RepPeriodicComplex:
    """Representation flavor: ``terms[r]`` and ``diffs[r]: terms[r] -> terms[r+1 mod n]``."""

    def __init__(self, terms: Sequence[Representation], diffs: Sequence[RepMap], check: bool = True):
        if not terms or len(terms) != len(diffs):
            raise AlgebraError("need n >= 1 terms and exactly n differentials")
        self.terms = list(terms)
        self.diffs = list(diffs)
        n = len(terms)
        for r, d in enumerate(self.diffs):
            if d.source is not self.terms[r] and d.source.dims != self.terms[r].dims:
                raise AlgebraError(f"differential {r} has the wrong source")
        if check:
            for r in range(n):
                comp = self.diffs[(r + 1) % n] @ self.diffs[r]
                if not comp.is_zero():
                    raise NotAComplex(f"d^{(r + 1) % n} d^{r} != 0")

    @property
    def n(self) -> int:
        return len(self.terms)

    @property
    def algebra(self):
        return self.terms[0].algebra

    def evaluate(self) -> "RepPeriodicComplex":
        return self

    def total_dim(self) -> int:
        return sum(t.total_dim for t in self.terms)


def make_periodic(terms, diffs, n: Optional[int] = None, algebra: Optional[PathAlgebra] = None):
    """Build and validate an n-periodic complex of either flavor."""
    terms = list(terms)
    diffs = list(diffs)
    if n is None:
        n = len(terms)
    if len(terms) != n or len(diffs) != n:
        raise AlgebraError(f"period {n} needs {n} terms and {n} differentials")
    if terms and isinstance(terms[0], Representation):
        return RepPeriodicComplex(terms, diffs)
    if algebra is None:
        algebra = diffs[0].algebra
    terms = [ProjModule(t) for t in terms]
    blocks = [[None] * n for _ in range(n)]
    for r, d in enumerate(diffs):
        if d.source != terms[r] or d.target != terms[(r + 1) % n]:
            raise AlgebraError(f"differential {r} has the wrong source or target")
        if n == 1:
            blocks[0][0] = d
        else:
            blocks[(r + 1) % n][r] = d
    diff = ProjMap.block(algebra, terms, terms, blocks)
    module = ProjModule(v for t in terms for v in t)
    labels = tuple(r for r, t in enumerate(terms) for _ in t)
    return PeriodicComplex(g.Total(algebra, module, labels, diff, n))


def differential_module(algebra, module, diff: ProjMap) -> PeriodicComplex:
    """Shorthand for a 1-periodic complex ``(P, ε)``."""
    return make_periodic([ProjModule(module)], [diff], 1, algebra)


def from_bounded_total(total: g.Total, n: int) -> PeriodicComplex:
    return PeriodicComplex(g.wrap_total(total, n), check=False)


def shift_periodic(X):
    if isinstance(X, RepPeriodicComplex):
        n = X.n
        terms = [X.terms[(r + 1) % n] for r in range(n)]
        diffs = [-X.diffs[(r + 1) % n] for r in range(n)]
        return RepPeriodicComplex(terms, diffs, check=False)
    return PeriodicComplex(g.shift_total(X.total, 1), check=False)


def unroll(Y: PeriodicComplex, m: int) -> PeriodicComplex:
    """View an l-periodic complex as an m-periodic one (``l`` divides ``m``)."""
    l = Y.n
    if m % l:
        raise AlgebraError(f"period {l} does not divide {m}")
    copies = m // l
    A = Y.algebra
    N = len(Y.total)
    module = ProjModule(list(Y.total.module) * copies)
    labels = tuple(Y.total.labels[i] + k * l for k in range(copies) for i in range(N))
    rows = [[A.zero()] * (N * copies) for _ in range(N * copies)]
    for k in range(copies):
        for j in range(N):
            for i in range(N):
                e = Y.total.diff.entries[j][i]
                if e.is_zero():
                    continue
                kk = k if Y.total.labels[i] + 1 < l else (k + 1) % copies
                rows[kk * N + j][k * N + i] = e
    diff = ProjMap(A, module, module, rows, check=False)
    return PeriodicComplex(g.Total(A, module, labels, diff, m))


def wrap(Y: PeriodicComplex, n: int) -> PeriodicComplex:
    """The n-periodic object obtained by unrolling ``Y`` to ``lcm(l, n)`` and folding modulo ``n``."""
    m = Y.n * n // gcd(Y.n, n)
    return PeriodicComplex(g.wrap_total(unroll(Y, m).total, n), check=False)


# -- maps -------------------------------------------------------------------

class PeriodicMap:
    """Components ``f^r: X^r -> Y^r`` stored as one position-preserving ProjMap."""

    def __init__(self, source: PeriodicComplex, target: PeriodicComplex, total_map: ProjMap, check: bool = True):
        self.source = source
        self.target = target
        self.map = total_map
        if check:
            if total_map.source != source.total.module or total_map.target != target.total.module:
                raise AlgebraError("map has the wrong source or target module")
            for j, row in enumerate(total_map.entries):
                for i, e in enumerate(row):
                    if not e.is_zero() and source.total.labels[i] != target.total.labels[j]:
                        raise AlgebraError("map does not preserve positions")
            if not g.is_chain_map(source.total, target.total, total_map):
                raise AlgebraError("map does not commute with the differentials")

    @classmethod
    def from_components(cls, X: PeriodicComplex, Y: PeriodicComplex, comps: Dict[int, ProjMap], check=True):
        A = X.algebra
        rows = [[A.zero()] * len(X.total) for _ in Y.total.module]
        for r, f in comps.items():
            for jj, j in enumerate(Y.indices(r)):
                for ii, i in enumerate(X.indices(r)):
                    rows[j][i] = f.entries[jj][ii]
        return cls(X, Y, ProjMap(A, X.total.module, Y.total.module, rows, check=False), check)

    def component(self, r: int) -> ProjMap:
        return self.map.submap(self.target.indices(r), self.source.indices(r))

    def evaluate(self) -> "RepPeriodicMap":
        Xe, Ye = self.source.evaluate(), self.target.evaluate()
        mats = [eval_projmap(self.component(r), Xe.terms[r], Ye.terms[r]) for r in range(self.source.n)]
        return RepPeriodicMap(Xe, Ye, mats)

    def is_invertible(self) -> bool:
        return self.map.is_invertible()

    def __matmul__(self, other: "PeriodicMap") -> "PeriodicMap":
        return PeriodicMap(other.source, self.target, self.map @ other.map, check=False)

    def __repr__(self):
        return f"PeriodicMap({self.map.words()})"


@dataclass
class RepPeriodicMap:
    source: RepPeriodicComplex
    target: RepPeriodicComplex
    mats: List[RepMap]


def cone_periodic(f: PeriodicMap) -> PeriodicComplex:
    """``ΣM ⊕ N`` with ``[[-ε_M, 0], [f, ε_N]]``."""
    return PeriodicComplex(g.cone_total(f.source.total, f.target.total, f.map))


# -- homology and quasi-isomorphisms -------------------------------------------

def _stack(F, blocks, rows):
    blocks = [b for b in blocks if b.shape[1]]
    if not blocks:
        return F.zeros(rows, 0)
    return np.concatenate(blocks, axis=1)


def _cycles_boundaries(X: RepPeriodicComplex, r: int, v: str):
    """Column bases of cycles and boundaries at position ``r``, vertex ``v``."""
    F = X.algebra.field
    n = X.n
    d_out = X.diffs[r].mats[v]
    d_in = X.diffs[(r - 1) % n].mats[v]
    dim = X.terms[r].dims[v]
    if dim == 0:
        return F.zeros(0, 0), F.zeros(0, 0)
    Z = el.nullspace(F, d_out) if d_out.shape[0] else F.eye(dim)
    B = el.column_basis(F, d_in) if d_in.shape[1] else F.zeros(dim, 0)
    return Z, B


def homology_dims(X) -> List[Dict[str, int]]:
    X = X.evaluate()
    out = []
    for r in range(X.n):
        dims = {}
        for v in X.algebra.vertices:
            Z, B = _cycles_boundaries(X, r, v)
            dims[v] = Z.shape[1] - B.shape[1]
        out.append(dims)
    return out


def homology_periodic(X) -> List[Representation]:
    """``H^r = ker d^r / im d^{r-1}`` as representations, one per position."""
    from .repmod import cokernel, kernel_image

    X = X.evaluate()
    F = X.algebra.field
    out = []
    for r in range(X.n):
        K, incl, _, _ = kernel_image(X.diffs[r])
        d_in = X.diffs[(r - 1) % X.n]
        # d_in lands in the kernel; factor it through the inclusion
        mats = {}
        for v in X.algebra.vertices:
            if K.dims[v] == 0 or d_in.mats[v].shape[1] == 0:
                mats[v] = F.zeros(K.dims[v], d_in.mats[v].shape[1])
                continue
            mats[v] = el.solve(F, incl.mats[v], d_in.mats[v]).x
        into_k = RepMap(d_in.source, K, mats, check=False)
        H, _ = cokernel(into_k)
        out.append(H)
    return out


def quasi_iso(f) -> bool:
    """True iff ``f`` induces isomorphisms on homology at every position."""
    if isinstance(f, PeriodicMap):
        f = f.evaluate()
    X, Y = f.source, f.target
    F = X.algebra.field
    for r in range(X.n):
        for v in X.algebra.vertices:
            Zx, Bx = _cycles_boundaries(X, r, v)
            Zy, By = _cycles_boundaries(Y, r, v)
            hx = Zx.shape[1] - Bx.shape[1]
            hy = Zy.shape[1] - By.shape[1]
            if hx != hy:
                return False
            if hx == 0:
                continue
            img = el.matmul(F, f.mats[r].mats[v], Zx)
            both = _stack(F, [img, By], Y.terms[r].dims[v])
            if el.rank(F, both) - By.shape[1] != hx:
                return False
    return True


# -- homotopy ---------------------------------------------------------------------

def null_homotopy(f: PeriodicMap) -> Optional[ProjMap]:
    """``s`` lowering positions by one with ``f = s ε_X + ε_Y s``, or ``None``."""
    return g.null_homotopy(f.source.total, f.target.total, f.map)


def verify_homotopy(f: PeriodicMap, s: ProjMap) -> bool:
    return f.map == s @ f.source.total.diff + f.target.total.diff @ s


@dataclass
class HomKn:
    dim: int
    basis: List[PeriodicMap]
    data: g.HomData


def hom_kn(X: PeriodicComplex, Y: PeriodicComplex) -> HomKn:
    data = g.hom_homotopy(X.total, Y.total)
    basis = [PeriodicMap(X, Y, m, check=False) for m in data.maps()]
    return HomKn(data.dim, basis, data)


@dataclass
class PeriodicReduction:
    source: PeriodicComplex
    reduced: PeriodicComplex
    f: PeriodicMap
    g: PeriodicMap
    s: ProjMap

    def verify(self) -> bool:
        red = g.Reduction(self.reduced.total, self.f.map, self.g.map, self.s)
        return g.verify_reduction(self.source.total, red)


def minimize_periodic(X: PeriodicComplex) -> PeriodicReduction:
    red = g.minimize(X.total)
    Y = PeriodicComplex(red.reduced, check=False)
    return PeriodicReduction(X, Y, PeriodicMap(X, Y, red.f, check=False), PeriodicMap(Y, X, red.g, check=False),
                             red.s)


# -- isomorphism ------------------------------------------------------------------

@dataclass
class IsoResult:
    verdict: str                 # YES / NO / UNKNOWN
    witness: Optional[PeriodicMap] = None
    certificate: dict = field(default_factory=dict)


def _signature(X: PeriodicComplex):
    return sorted(zip(X.total.module, X.total.labels))


def _unit_blocks(F, basis_maps: List[ProjMap], X: PeriodicComplex, Y: PeriodicComplex):
    """For every (vertex, position) block: the stacked unit-part matrices of the basis maps."""
    keys = sorted(set(zip(X.total.module, X.total.labels)))
    A = X.algebra
    blocks = []
    for v, r in keys:
        cols = [i for i, (u, d) in enumerate(zip(X.total.module, X.total.labels)) if (u, d) == (v, r)]
        rows = [j for j, (u, d) in enumerate(zip(Y.total.module, Y.total.labels)) if (u, d) == (v, r)]
        idx = A.trivial_index(v)
        mats = []
        for m in basis_maps:
            mats.append([[m.entries[j][i].coeff(idx) for i in cols] for j in rows])
        blocks.append(((v, r), mats))
    return blocks


def _nonsingular_mod_p(M: np.ndarray, p: int) -> np.ndarray:
    """Batched nonsingularity test over GF(p); ``M`` has shape (N, k, k)."""
    M = M.copy() % p
    N, k, _ = M.shape
    alive = np.ones(N, dtype=bool)
    inv_table = np.array([0] + [pow(x, -1, p) for x in range(1, p)], dtype=np.int64) if p < 1 << 16 else None
    for c in range(k):
        sub = M[:, c:, c]
        nz = sub != 0
        has = nz.any(axis=1)
        alive &= has
        piv = np.argmax(nz, axis=1) + c
        ar = np.arange(N)
        rows_c = M[ar, c].copy()
        rows_p = M[ar, piv].copy()
        M[ar, c] = rows_p
        M[ar, piv] = rows_c
        pv = M[:, c, c]
        if inv_table is not None:
            inv = inv_table[pv]
        else:
            inv = np.array([pow(int(x), -1, p) if x else 0 for x in pv], dtype=np.int64)
        M[:, c, :] = (M[:, c, :] * inv[:, None]) % p
        factors = M[:, c + 1:, c].copy()
        M[:, c + 1:, :] = (M[:, c + 1:, :] - factors[:, :, None] * M[:, c:c + 1, :]) % p
    return alive


def _combine(F, basis_maps, coeffs, src, tgt, A):
    total = ProjMap.zero(A, src, tgt)
    for c, m in zip(coeffs, basis_maps):
        if c != 0:
            total = total + m.scale(c)
    return total


def search_nonsingular(F, barrs: List[List[np.ndarray]], cap_enum: int = 10**7, cap_random: int = 10**4,
                       seed: int = 0):
    """Look for coefficients ``c`` making every block ``Σ_k c_k barrs[b][k]`` nonsingular.

    ``barrs[b][k]`` is block ``b`` of basis element ``k``.  Returns
    ``(verdict, picks, coeffs, info)`` where ``picks`` indexes the basis elements
    actually varied (a basis of the span of the blocks) and ``coeffs`` pairs with them.
    """
    r = len(barrs[0]) if barrs else 0
    flat = []
    for k in range(r):
        vec = []
        for arrs in barrs:
            vec.extend(np.asarray(arrs[k], dtype=object).reshape(-1).tolist())
        flat.append(vec)
    if r and flat[0]:
        U = F.array(np.array(flat, dtype=object).reshape(r, -1).T)
        picks = list(el.rref(F, U, with_transform=False).pivots)
    else:
        picks = []
    ru = len(picks)
    info = {"unit_part_rank": ru}
    if not barrs:
        return "YES", picks, [], dict(info, method="empty")
    sub = [[np.asarray(arrs[k], dtype=object) for k in picks] for arrs in barrs]
    shapes = [np.asarray(arrs[0], dtype=object).shape if r else (0, 0) for arrs in barrs]

    def invertible(coeffs) -> bool:
        for arrs in sub:
            M = sum((arr * c for arr, c in zip(arrs, coeffs)), np.zeros_like(arrs[0]))
            if M.shape[0] != M.shape[1] or not el.is_invertible(F, F.array(M)):
                return False
        return True

    if any(sh[0] != sh[1] for sh in shapes):
        return "NO", picks, None, dict(info, method="exhaustive", searched=0, reason="non-square block")
    if ru == 0:
        return "NO", picks, None, dict(info, method="exhaustive", searched=1,
                                       reason="every candidate has zero unit part")
    if F.size is not None and F.size ** ru <= cap_enum:
        p = F.size
        total = p ** ru
        chunk = 1 << 16
        for start in range(0, total, chunk):
            idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
            coeffs = np.stack([(idx // p ** k) % p for k in range(ru)], axis=1)
            ok = np.ones(len(idx), dtype=bool)
            for arrs in sub:
                stack = np.stack([a.astype(np.int64) for a in arrs])  # (ru, k, k)
                M = np.einsum("nr,rij->nij", coeffs, stack) % p
                ok &= _nonsingular_mod_p(M, p)
                if not ok.any():
                    break
            if ok.any():
                found = [int(c) for c in coeffs[int(np.argmax(ok))]]
                return "YES", picks, found, dict(info, method="exhaustive", coefficients=found)
        return "NO", picks, None, dict(info, method="exhaustive", searched=total)
    # too large to enumerate, or infinite field
    if F.size is None and _symbolic_det_zero(sub, ru):
        return "NO", picks, None, dict(info, method="symbolic", reason="determinant identically zero")
    rng = np.random.default_rng(seed)
    for t in range(cap_random):
        coeffs = [F.random(rng, -5, 5) for _ in range(ru)]
        if invertible(coeffs):
            return "YES", picks, coeffs, dict(info, method="random", trials=t + 1,
                                              coefficients=[F.to_json(c) for c in coeffs])
    return "UNKNOWN", picks, None, dict(info, method="random", trials=cap_random)


def find_invertible(F, basis_maps: List[ProjMap], X: PeriodicComplex, Y: PeriodicComplex,
                    cap_enum: int = 10**7, cap_random: int = 10**4, seed: int = 0) -> IsoResult:
    """Search the span of ``basis_maps`` for an invertible map ``X -> Y``."""
    A = X.algebra
    src, tgt = X.total.module, Y.total.module
    blocks = _unit_blocks(F, basis_maps, X, Y)
    cert = {"field": repr(F), "hom_dim": len(basis_maps),
            "blocks": [f"P{v}@{pos}" for (v, pos), _ in blocks]}
    if blocks and not basis_maps:
        return IsoResult("NO", certificate=dict(cert, unit_part_rank=0, method="exhaustive", searched=1,
                                                reason="the Hom space is zero"))
    barrs = [[np.array(mats[k], dtype=object) for k in range(len(basis_maps))] for _, mats in blocks]
    verdict, picks, coeffs, info = search_nonsingular(F, barrs, cap_enum, cap_random, seed)
    cert.update(info)
    if verdict != "YES":
        return IsoResult(verdict, certificate=cert)
    w = _combine(F, [basis_maps[k] for k in picks], coeffs, src, tgt, A)
    return IsoResult("YES", PeriodicMap(X, Y, w, check=False), cert)


def _symbolic_det_zero(barrs, ru) -> bool:
    import sympy

    xs = sympy.symbols(f"x0:{ru}")
    for arrs in barrs:
        k = arrs[0].shape
        if k[0] != k[1]:
            return True
        M = sympy.zeros(*k)
        for arr, x in zip(arrs, xs):
            M += sympy.Matrix(arr.tolist()) * x
        if sympy.expand(M.det()) == 0:
            return True
    return False


def iso_cn(X: PeriodicComplex, Y: PeriodicComplex, minimize: bool = True, cap_enum: int = 10**7,
           cap_random: int = 10**4, seed: int = 0) -> IsoResult:
    """Decide ``X ≅ Y`` in K_n (``minimize=True``) or strictly in C_n (``minimize=False``)."""
    F = X.algebra.field
    if X.n != Y.n:
        return IsoResult("NO", certificate={"reason": "period mismatch", "periods": [X.n, Y.n]})
    Xm = minimize_periodic(X).reduced if minimize else X
    Ym = minimize_periodic(Y).reduced if minimize else Y
    cert = {"category": "K_n" if minimize else "C_n"}
    if _signature(Xm) != _signature(Ym):
        cert.update(reason="dimension", source_summands=[f"P{v}@{r}" for v, r in _signature(Xm)],
                    target_summands=[f"P{v}@{r}" for v, r in _signature(Ym)])
        return IsoResult("NO", certificate=cert)
    chain, Z = g.chain_map_basis(Xm.total, Ym.total)
    basis = [chain.from_vector(Z[:, k]) for k in range(Z.shape[1])]
    res = find_invertible(F, basis, Xm, Ym, cap_enum, cap_random, seed)
    res.certificate = dict(cert, **res.certificate)
    if res.witness is not None and minimize:
        # transport the witness back to the given objects
        fx = minimize_periodic(X)
        gy = minimize_periodic(Y)
        res.certificate["minimal_witness"] = res.witness.map.words()
        res.witness = PeriodicMap(X, Y, gy.g.map @ res.witness.map @ fx.f.map, check=False)
    return res


# -- indecomposability ----------------------------------------------------------------

@dataclass
class IndecResult:
    verdict: str                  # INDECOMPOSABLE / DECOMPOSABLE / ZERO / UNKNOWN
    end_dim: int
    certificate: dict = field(default_factory=dict)
    idempotent: Optional[PeriodicMap] = None


def _end_structure(X: PeriodicComplex, data: g.HomData):
    """Structure constants ``b_i b_j = Σ c_k b_k`` of End in the homotopy category."""
    maps = data.maps()
    m = len(maps)
    mult = np.zeros((m, m, m), dtype=object)
    for i in range(m):
        for j in range(m):
            prod = data.chain.vector(maps[i] @ maps[j])
            c = g.reduce_mod_boundaries(data, prod)
            mult[i, j, :] = [c[k, 0] for k in range(m)]
    return maps, mult


def _left_mult(F, mult, x):
    """Matrix of ``y ↦ x y`` on End."""
    m = len(x)
    M = np.zeros((m, m), dtype=object)
    for i in range(m):
        if x[i] == 0:
            continue
        M = M + mult[i].T * x[i]  # column j = b_i b_j
    return F.array(M)


def _poly_eval(F, mult, unit, x, coeffs):
    """Evaluate ``Σ coeffs[k] x^k`` inside End (vectors in the quotient basis)."""
    m = len(x)
    L = _left_mult(F, mult, x)
    out = F.zeros(m, 1)
    power = F.array(np.array(unit, dtype=object).reshape(m, 1))
    for c in coeffs:
        if c != 0:
            out = F.reduce(out + power * F.norm(c))
        power = el.matmul(F, L, power)
    return out


def _min_poly(F, L):
    """Monic minimal polynomial coefficients (lowest degree first) of a square matrix."""
    m = L.shape[0]
    vecs = [F.eye(m).reshape(m * m, 1)]
    P = F.eye(m)
    for k in range(1, m + 1):
        P = el.matmul(F, P, L)
        target = P.reshape(m * m, 1)
        basis = np.concatenate(vecs, axis=1)
        sol = el.solve(F, basis, target)
        if sol is not None:
            c = [F.norm(-sol.x[i, 0]) for i in range(k)]
            return c + [F.one]
        vecs.append(target)
    raise AssertionError("minimal polynomial degree exceeds matrix size")


def _unit_vector(F, data: g.HomData, X):
    ident = data.chain.vector(ProjMap.identity(X.algebra, X.total.module))
    return [c for c in g.reduce_mod_boundaries(data, ident)[:, 0]]


def _sympy_poly(F, coeffs):
    import sympy

    t = sympy.Symbol("t")
    expr = sum(sympy.Integer(int(c)) * t**k if F.char else sympy.Rational(c.numerator, c.denominator) * t**k
               for k, c in enumerate(coeffs))
    if F.char:
        return sympy.Poly(expr, t, modulus=F.char)
    return sympy.Poly(expr, t, domain="QQ")


def _from_sympy(F, poly):
    cs = poly.all_coeffs()[::-1]
    if F.char:
        return [F.norm(int(c)) for c in cs]
    from fractions import Fraction
    return [Fraction(int(c.p), int(c.q)) for c in cs]


def _split_idempotent(F, mult, unit, x):
    """An idempotent polynomial in ``x`` from a coprime factorization of its minimal polynomial."""
    L = _left_mult(F, mult, x)
    mp = _min_poly(F, L)
    P = _sympy_poly(F, mp)
    _, factors = P.factor_list()
    if len(factors) < 2:
        return None
    f0, e0 = factors[0]
    A_ = f0 ** e0
    B_ = P.quo(A_)
    s, _, _ = A_.gcdex(B_)
    # s A + t B = 1, so e = s A is 1 mod B and 0 mod A
    E = (s * A_).rem(P)
    return _poly_eval(F, mult, unit, x, _from_sympy(F, E))


def verify_idempotent(X: PeriodicComplex, e: ProjMap) -> bool:
    """``e² ≃ e`` while neither ``e`` nor ``1 - e`` is null-homotopic."""
    one = ProjMap.identity(X.algebra, X.total.module)
    T = X.total
    return (
        g.null_homotopy(T, T, e @ e - e) is not None
        and g.null_homotopy(T, T, e) is None
        and g.null_homotopy(T, T, one - e) is None
    )


def indecomposable_kn(X: PeriodicComplex, trials: int = 64, seed: int = 0) -> IndecResult:
    F = X.algebra.field
    data = g.hom_homotopy(X.total, X.total)
    m = data.dim
    if m == 0:
        return IndecResult("ZERO", 0, {"reason": "End is zero, so the object is zero in the homotopy category"})
    if m == 1:
        return IndecResult("INDECOMPOSABLE", 1, {"method": "dim End = 1"})
    maps, mult = _end_structure(X, data)
    unit = _unit_vector(F, data, X)
    rng = np.random.default_rng(seed)
    for t in range(trials):
        x = [F.random(rng, -4, 4) for _ in range(m)]
        e = _split_idempotent(F, mult, unit, x)
        if e is None:
            continue
        evec = [e[k, 0] for k in range(m)]
        if all(c == 0 for c in evec) or evec == [F.norm(c) for c in unit]:
            continue
        emap = ProjMap.zero(X.algebra, X.total.module, X.total.module)
        for c, b in zip(evec, maps):
            if c != 0:
                emap = emap + b.scale(c)
        if not verify_idempotent(X, emap):
            continue
        return IndecResult("DECOMPOSABLE", m, {"method": "minimal polynomial split", "trial": t + 1,
                                               "idempotent_coords": [F.to_json(c) for c in evec]},
                           PeriodicMap(X, X, emap, check=False))
    if F.char == 0 or F.char > m:
        # trace form: rad End = {x : tr(L_{xy}) = 0 for all y}
        Ls = [_left_mult(F, mult, [F.one if k == i else F.zero for k in range(m)]) for i in range(m)]
        T = np.zeros((m, m), dtype=object)
        for i in range(m):
            for j in range(m):
                T[i, j] = sum(el.matmul(F, Ls[i], Ls[j])[k, k] for k in range(m))
        T = F.array(T)
        rad = m - el.rank(F, T)
        cert = {"method": "trace radical", "radical_dim": rad, "trials": trials}
        if m - rad == 1:
            return IndecResult("INDECOMPOSABLE", m, cert)
        return IndecResult("UNKNOWN", m, cert)
    return IndecResult("UNKNOWN", m, {"method": "none", "reason": "trace test needs char 0 or char > dim End",
                                      "trials": trials})
