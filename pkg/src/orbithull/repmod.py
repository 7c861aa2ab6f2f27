"""Right Λ-modules as quiver representations.

An arrow ``a: v -> w`` acts on the right, i.e. as a linear map from the space
at ``w`` to the space at ``v``; its matrix has shape ``(dim_v, dim_w)``.  With
this convention ``P_v = e_v Λ`` has the paths ``v <- u`` at vertex ``u``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import exactlin as el
from .proj import ProjMap, ProjModule
from .quiver import AlgebraElement, AlgebraError, PathAlgebra

__all__ = [
    "Representation",
    "RepMap",
    "Resolution",
    "GlobalDimensionExceeded",
    "simple",
    "eval_proj",
    "eval_projmap",
    "hom_space",
    "kernel_image",
    "cokernel",
    "top_and_cover",
    "map_from_projective",
    "lift_through",
    "repmap_to_projmap",
    "proj_resolution",
    "ext_basis",
]


class GlobalDimensionExceeded(AlgebraError):
    code = "GLDIM_BOUND_EXCEEDED"


class Representation:
    """Per-vertex dimensions plus one action matrix per arrow."""

    def __init__(self, algebra: PathAlgebra, dims: Dict[str, int], actions: Optional[Dict[str, np.ndarray]] = None,
                 check: bool = True):
        F = algebra.field
        self.algebra = algebra
        self.dims = {v: int(dims.get(v, 0)) for v in algebra.vertices}
        acts = {}
        for a in algebra.quiver.arrows:
            shape = (self.dims[a.source], self.dims[a.target])
            m = None if actions is None else actions.get(a.name)
            if m is None:
                m = F.zeros(*shape)
            else:
                m = F.array(np.asarray(m, dtype=object).reshape(shape) if np.size(m) else np.zeros(shape, dtype=np.int64))
            if m.shape != shape:
                raise AlgebraError(f"action of {a.name} must have shape {shape}, got {m.shape}")
            acts[a.name] = m
        self.actions = acts
        if check:
            for r in algebra.relations:
                if np.any(self.path_action(r) != 0):
                    raise AlgebraError(f"relation {'*'.join(r)} does not act as zero")

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def path_action(self, word: Sequence[str]) -> np.ndarray:
        """Matrix of ``m ↦ m·p`` for the path ``p`` (from target space to source space)."""
        F = self.algebra.field
        Q = self.algebra.quiver
        arrows = [Q.arrow(a) for a in word]
        out = None
        for a in arrows:  # leftmost arrow acts first on the right
            m = self.actions[a.name]
            out = m if out is None else el.matmul(F, m, out)
        return out

    def element_action(self, x: AlgebraElement, v: str, u: str) -> np.ndarray:
        """Matrix ``M_v -> M_u`` of right multiplication by ``x ∈ e_v Λ e_u``."""
        F = self.algebra.field
        out = F.zeros(self.dims[u], self.dims[v])
        for k, c in x.terms.items():
            p = self.algebra.basis[k]
            if p.target != v or p.source != u:
                continue
            m = F.eye(self.dims[v]) if not p.word else self.path_action(p.word)
            out = F.reduce(out + m * c)
        return out

    def direct_sum(self, other: "Representation") -> "Representation":
        F = self.algebra.field
        dims = {v: self.dims[v] + other.dims[v] for v in self.dims}
        acts = {}
        for a in self.algebra.quiver.arrows:
            m1, m2 = self.actions[a.name], other.actions[a.name]
            top = np.concatenate([m1, F.zeros(m1.shape[0], m2.shape[1])], axis=1)
            bot = np.concatenate([F.zeros(m2.shape[0], m1.shape[1]), m2], axis=1)
            acts[a.name] = np.concatenate([top, bot], axis=0)
        return Representation(self.algebra, dims, acts, check=False)

    def __repr__(self):
        d = ", ".join(f"{v}:{n}" for v, n in self.dims.items())
        return f"Representation({d})"


def simple(algebra: PathAlgebra, v: str) -> Representation:
    return Representation(algebra, {v: 1})


class RepMap:
    """A Λ-linear map: one matrix per vertex, shape ``(dim N_v, dim M_v)``."""

    def __init__(self, source: Representation, target: Representation, mats: Dict[str, np.ndarray],
                 check: bool = True):
        F = source.algebra.field
        self.source = source
        self.target = target
        out = {}
        for v in source.algebra.vertices:
            shape = (target.dims[v], source.dims[v])
            m = mats.get(v)
            m = F.zeros(*shape) if m is None or np.size(m) == 0 else F.array(m)
            if m.shape != shape:
                raise AlgebraError(f"RepMap block at {v} must have shape {shape}, got {m.shape}")
            out[v] = m
        self.mats = out
        if check and not self.commutes():
            raise AlgebraError("RepMap does not commute with the arrow actions")

    @property
    def algebra(self):
        return self.source.algebra

    def commutes(self) -> bool:
        F = self.algebra.field
        for a in self.algebra.quiver.arrows:
            lhs = el.matmul(F, self.mats[a.source], self.source.actions[a.name])
            rhs = el.matmul(F, self.target.actions[a.name], self.mats[a.target])
            if np.any(lhs != rhs):
                return False
        return True

    def __matmul__(self, other: "RepMap") -> "RepMap":
        F = self.algebra.field
        mats = {v: el.matmul(F, self.mats[v], other.mats[v]) for v in self.mats}
        return RepMap(other.source, self.target, mats, check=False)

    def __add__(self, other):
        F = self.algebra.field
        return RepMap(self.source, self.target, {v: F.reduce(self.mats[v] + other.mats[v]) for v in self.mats},
                      check=False)

    def __neg__(self):
        F = self.algebra.field
        return RepMap(self.source, self.target, {v: F.reduce(-self.mats[v]) for v in self.mats}, check=False)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        F = self.algebra.field
        s = F.norm(s)
        return RepMap(self.source, self.target, {v: F.reduce(self.mats[v] * s) for v in self.mats}, check=False)

    def is_zero(self) -> bool:
        return all(not np.any(m != 0) for m in self.mats.values())

    def __eq__(self, other):
        return isinstance(other, RepMap) and all(np.array_equal(self.mats[v], other.mats[v]) for v in self.mats)

    def rank(self) -> int:
        F = self.algebra.field
        return sum(el.rank(F, m) for m in self.mats.values() if m.size)

    def is_iso(self) -> bool:
        F = self.algebra.field
        return all(m.shape[0] == m.shape[1] and el.rank(F, m) == m.shape[0] for m in self.mats.values())

    @classmethod
    def identity(cls, M: Representation) -> "RepMap":
        F = M.algebra.field
        return cls(M, M, {v: F.eye(d) for v, d in M.dims.items()}, check=False)

    @classmethod
    def zero(cls, M, N) -> "RepMap":
        return cls(M, N, {}, check=False)


# -- projectives as representations ------------------------------------------

def _proj_spaces(algebra: PathAlgebra, P: ProjModule):
    """Per vertex ``u``: list of (summand index, basis path index) spanning ``(⊕P_{v_i})_u``."""
    spaces = {u: [] for u in algebra.vertices}
    for i, v in enumerate(P):
        for u in algebra.vertices:
            for k in algebra.hom_basis(u, v):
                spaces[u].append((i, k))
    return spaces


def eval_proj(algebra: PathAlgebra, P) -> Representation:
    """The representation underlying ``⊕ P_{v_i}``."""
    P = ProjModule(P)
    F = algebra.field
    spaces = _proj_spaces(algebra, P)
    pos = {u: {b: n for n, b in enumerate(bs)} for u, bs in spaces.items()}
    acts = {}
    for a in algebra.quiver.arrows:
        # a: s -> t acts (P)_t -> (P)_s by p ↦ p·a
        src, tgt = a.source, a.target
        m = np.zeros((len(spaces[src]), len(spaces[tgt])), dtype=np.int64)
        a_idx = algebra.index_of((a.name,))
        for col, (i, k) in enumerate(spaces[tgt]):
            z = algebra.mult_index(k, a_idx)
            if z >= 0:
                m[pos[src][(i, z)], col] = 1
        acts[a.name] = F.array(m)
    return Representation(algebra, {u: len(b) for u, b in spaces.items()}, acts, check=False)


def eval_projmap(f: ProjMap, source: Optional[Representation] = None,
                 target: Optional[Representation] = None) -> RepMap:
    """Left multiplication by ``f`` as a RepMap between the evaluated modules."""
    A = f.algebra
    F = A.field
    source = source or eval_proj(A, f.source)
    target = target or eval_proj(A, f.target)
    sp_s = _proj_spaces(A, f.source)
    sp_t = _proj_spaces(A, f.target)
    pos_t = {u: {b: n for n, b in enumerate(bs)} for u, bs in sp_t.items()}
    mats = {}
    for u in A.vertices:
        m = np.zeros((len(sp_t[u]), len(sp_s[u])), dtype=object)
        m[:] = 0
        for col, (i, k) in enumerate(sp_s[u]):
            for j in range(len(f.target)):
                for x, c in f.entries[j][i].terms.items():
                    z = A.mult_index(x, k)
                    if z >= 0:
                        m[pos_t[u][(j, z)], col] += c
        mats[u] = F.array(m) if m.size else F.zeros(*m.shape)
    return RepMap(source, target, mats, check=False)


def generator_vector(algebra: PathAlgebra, P: ProjModule, i: int) -> Tuple[str, int]:
    """Vertex and position of the generator ``e_{v_i}`` of summand ``i`` in ``eval_proj(P)``."""
    v = P[i]
    spaces = _proj_spaces(algebra, P)
    return v, spaces[v].index((i, algebra.trivial_index(v)))


def map_from_projective(P, M: Representation, images: Sequence[np.ndarray]) -> RepMap:
    """The RepMap ``eval_proj(P) -> M`` sending generator ``i`` to ``images[i] ∈ M_{v_i}``."""
    A = M.algebra
    F = A.field
    P = ProjModule(P)
    source = eval_proj(A, P)
    spaces = _proj_spaces(A, P)
    mats = {}
    for u in A.vertices:
        cols = []
        for (i, k) in spaces[u]:
            m = np.asarray(images[i]).reshape(-1, 1)
            p = A.basis[k]
            if p.word:
                m = el.matmul(F, M.path_action(p.word), F.array(m))
            cols.append(F.array(m))
        mats[u] = np.concatenate(cols, axis=1) if cols else F.zeros(M.dims[u], 0)
    return RepMap(source, M, mats, check=False)


def repmap_to_projmap(g: RepMap, P, Q) -> ProjMap:
    """Read a RepMap ``eval_proj(P) -> eval_proj(Q)`` back as a ProjMap."""
    A = g.algebra
    P, Q = ProjModule(P), ProjModule(Q)
    sp_q = _proj_spaces(A, Q)
    rows = [[A.zero() for _ in P] for _ in Q]
    for i, v in enumerate(P):
        _, gpos = generator_vector(A, P, i)
        col = g.mats[v][:, gpos]
        terms = [dict() for _ in Q]
        for n, (j, k) in enumerate(sp_q[v]):
            if col[n] != 0:
                terms[j][k] = col[n]
        for j in range(len(Q)):
            rows[j][i] = AlgebraElement(A, terms[j])
    return ProjMap(A, P, Q, rows, check=False)


def lift_through(P, g: RepMap, h: RepMap) -> Optional[RepMap]:
    """A map ``θ: eval_proj(P) -> g.source`` with ``g ∘ θ = h``, or ``None``."""
    A = g.algebra
    F = A.field
    P = ProjModule(P)
    images = []
    for i, v in enumerate(P):
        _, pos = generator_vector(A, P, i)
        rhs = h.mats[v][:, pos].reshape(-1, 1)
        if g.mats[v].shape[1] == 0:
            if np.any(rhs != 0):
                return None
            images.append(F.zeros(0, 1))
            continue
        sol = el.solve(F, g.mats[v], rhs)
        if sol is None:
            return None
        images.append(sol.x)
    return map_from_projective(P, g.source, images)


# -- homs, kernels, images ----------------------------------------------------

def hom_space(M: Representation, N: Representation) -> List[RepMap]:
    A = M.algebra
    F = A.field
    verts = A.vertices
    offs = {}
    n = 0
    for v in verts:
        offs[v] = n
        n += N.dims[v] * M.dims[v]
    eqs = []
    for a in A.quiver.arrows:
        s, t = a.source, a.target
        # F_s · M_a - N_a · F_t = 0, entrywise
        Ma, Na = M.actions[a.name], N.actions[a.name]
        for r in range(N.dims[s]):
            for c in range(M.dims[t]):
                row = [0] * n
                for k in range(M.dims[s]):
                    if Ma[k, c] != 0:
                        row[offs[s] + r * M.dims[s] + k] += Ma[k, c]
                for k in range(N.dims[t]):
                    if Na[r, k] != 0:
                        row[offs[t] + k * M.dims[t] + c] -= Na[r, k]
                eqs.append(row)
    if n == 0:
        return []
    if eqs:
        K = el.nullspace(F, F.array(np.array(eqs, dtype=object)))
    else:
        K = F.eye(n)
    out = []
    for col in range(K.shape[1]):
        mats = {}
        for v in verts:
            blk = K[offs[v]: offs[v] + N.dims[v] * M.dims[v], col]
            mats[v] = blk.reshape(N.dims[v], M.dims[v]) if blk.size else F.zeros(N.dims[v], M.dims[v])
        out.append(RepMap(M, N, mats, check=False))
    return out


def _sub_representation(M: Representation, bases: Dict[str, np.ndarray]) -> Representation:
    """The subrepresentation spanned by column bases (assumed closed under the action)."""
    A = M.algebra
    F = A.field
    acts = {}
    for a in A.quiver.arrows:
        s, t = a.source, a.target
        Bs, Bt = bases[s], bases[t]
        if Bs.shape[1] == 0 or Bt.shape[1] == 0:
            acts[a.name] = F.zeros(Bs.shape[1], Bt.shape[1])
            continue
        img = el.matmul(F, M.actions[a.name], Bt)
        sol = el.solve(F, Bs, img)
        if sol is None:
            raise AlgebraError("subspace is not a subrepresentation")
        acts[a.name] = sol.x
    return Representation(A, {v: b.shape[1] for v, b in bases.items()}, acts, check=False)


def kernel_image(f: RepMap):
    """``(K, incl_K, I, incl_I)`` with ``incl_K: K -> source`` and ``incl_I: I -> target``."""
    A = f.algebra
    F = A.field
    kb, ib = {}, {}
    for v in A.vertices:
        m = f.mats[v]
        if m.shape[1] == 0:
            kb[v] = F.zeros(0, 0)
        elif m.shape[0] == 0:
            kb[v] = F.eye(m.shape[1])
        else:
            kb[v] = el.nullspace(F, m)
        ib[v] = el.column_basis(F, m) if m.size else F.zeros(m.shape[0], 0)
    K = _sub_representation(f.source, kb)
    I = _sub_representation(f.target, ib)
    return K, RepMap(K, f.source, kb, check=False), I, RepMap(I, f.target, ib, check=False)


def cokernel(f: RepMap):
    """``(C, proj: target -> C)``."""
    A = f.algebra
    F = A.field
    T = f.target
    comp = {}
    for v in A.vertices:
        m = f.mats[v]
        img = el.column_basis(F, m) if m.size else F.zeros(T.dims[v], 0)
        picks = el.complement_columns(F, img, F.eye(T.dims[v])) if T.dims[v] else []
        comp[v] = (img, picks)
    dims = {v: len(comp[v][1]) for v in A.vertices}
    # coordinates w.r.t. basis [img | chosen unit vectors]; projection keeps the last block
    proj = {}
    for v in A.vertices:
        img, picks = comp[v]
        d = T.dims[v]
        if d == 0:
            proj[v] = F.zeros(0, 0)
            continue
        basis = np.concatenate([img, F.eye(d)[:, picks]], axis=1) if picks else img
        inv = el.inverse(F, basis)
        proj[v] = inv[img.shape[1]:, :]
    acts = {}
    for a in A.quiver.arrows:
        s, t = a.source, a.target
        img_t, picks_t = comp[t]
        lift = F.eye(T.dims[t])[:, picks_t] if picks_t else F.zeros(T.dims[t], 0)
        acted = el.matmul(F, T.actions[a.name], lift) if lift.size and T.dims[s] else F.zeros(T.dims[s], len(picks_t))
        acts[a.name] = el.matmul(F, proj[s], acted) if proj[s].size and acted.size else F.zeros(dims[s], dims[t])
    C = Representation(A, dims, acts, check=False)
    return C, RepMap(T, C, proj, check=False)


def radical_images(M: Representation) -> Dict[str, np.ndarray]:
    """Per vertex, a column basis of ``(M·rad Λ)_v``."""
    A = M.algebra
    F = A.field
    out = {}
    for v in A.vertices:
        blocks = [M.actions[a.name] for a in A.quiver.arrows if a.source == v and M.dims[a.target]]
        if blocks and M.dims[v]:
            out[v] = el.column_basis(F, np.concatenate(blocks, axis=1))
        else:
            out[v] = F.zeros(M.dims[v], 0)
    return out


def top_and_cover(M: Representation):
    """Projective cover ``(T, cover: eval_proj(T) -> M)``; generators are chosen unit vectors."""
    A = M.algebra
    F = A.field
    rad = radical_images(M)
    T = []
    images = []
    for v in A.vertices:
        d = M.dims[v]
        if d == 0:
            continue
        picks = el.complement_columns(F, rad[v], F.eye(d))
        for p in picks:
            T.append(v)
            images.append(F.eye(d)[:, p: p + 1])
    T = ProjModule(T)
    return T, map_from_projective(T, M, images)


def is_projective(M: Representation) -> bool:
    T, cover = top_and_cover(M)
    return cover.source.total_dim == M.total_dim


# -- resolutions --------------------------------------------------------------

@dataclass
class Resolution:
    """Minimal projective resolution ``0 -> P_l -> ... -> P_0 -> M -> 0``.

    ``terms[i] = P_i`` and ``maps[i-1]: P_i -> P_{i-1}`` (``i >= 1``);
    ``augmentation: eval_proj(P_0) -> M``.
    """

    module: Representation
    terms: List[ProjModule]
    maps: List[ProjMap]
    augmentation: RepMap

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    def complex(self):
        """As a bounded (cohomological) complex with ``P_i`` in degree ``-i``."""
        from .boundedcx import BoundedComplex

        l = self.length
        terms = [self.terms[l - k] for k in range(l + 1)]
        diffs = [self.maps[l - k - 1] for k in range(l)]
        return BoundedComplex(self.module.algebra, -l, terms, diffs)


def proj_resolution(M: Representation, bound: Optional[int] = None) -> Resolution:
    A = M.algebra
    if bound is None:
        bound = A.dim
    T0, aug = top_and_cover(M)
    terms = [T0]
    maps: List[ProjMap] = []
    prev_term = T0
    prev_map = aug
    step = 0
    while True:
        K, incl, _, _ = kernel_image(prev_map)
        if K.is_zero():
            break
        step += 1
        if step > bound:
            raise GlobalDimensionExceeded(f"kernel still nonzero after {bound} steps")
        T, cover = top_and_cover(K)
        d = repmap_to_projmap(incl @ cover, T, prev_term)
        terms.append(T)
        maps.append(d)
        prev_term = T
        prev_map = eval_projmap(d)
    return Resolution(M, terms, maps, aug)


def ext_basis(S: Representation, T: Representation, l: int, bound: Optional[int] = None):
    """Chain maps ``res(S) -> Σ^l res(T)`` representing a basis of ``Ext^l(S, T)``."""
    from .boundedcx import hom_kb

    if l < 0:
        raise ValueError("Ext degree must be >= 0")
    X = proj_resolution(S, bound).complex()
    Y = proj_resolution(T, bound).complex()
    return hom_kb(X, Y, l)
