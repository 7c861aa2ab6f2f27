"""Seeded random objects for property suites and the CLI ``--random`` mode."""
from __future__ import annotations

from typing import List, Optional

import numpy as np

from . import exactlin as el
from .boundedcx import BoundedComplex
from .periodic import RepPeriodicComplex, PeriodicComplex, make_periodic
from .proj import HomCoords, ProjMap, ProjModule
from .repmod import RepMap, Representation

__all__ = [
    "random_projmap_solving",
    "random_bounded_complex",
    "random_relative_projective",
    "random_differential_module_a3",
    "random_rep_differential_module",
]


def _random_combination(F, rng, M: np.ndarray):
    if M.shape[1] == 0:
        return F.zeros(M.shape[0], 1)
    c = F.array(np.array([F.random(rng, -2, 2) for _ in range(M.shape[1])], dtype=object).reshape(-1, 1))
    return el.matmul(F, M, c)


def random_projmap_solving(A, source, target, rng, before: Optional[ProjMap] = None,
                           after: Optional[ProjMap] = None) -> ProjMap:
    """A random map ``source -> target`` with ``d ∘ before = 0`` and ``after ∘ d = 0``."""
    F = A.field
    co = HomCoords(A, source, target)
    if len(co) == 0:
        return ProjMap.zero(A, source, target)
    rows = []
    if before is not None and len(before.source):
        out = HomCoords(A, before.source, target)
        if len(out):
            rows.append(out.matrix_of([co.basis_map(k) @ before for k in range(len(co))]))
    if after is not None and len(after.target):
        out = HomCoords(A, source, after.target)
        if len(out):
            rows.append(out.matrix_of([after @ co.basis_map(k) for k in range(len(co))]))
    if rows:
        N = el.nullspace(F, np.concatenate(rows, axis=0))
    else:
        N = F.eye(len(co))
    return co.from_vector(_random_combination(F, rng, N)[:, 0])


def random_bounded_complex(A, rng, max_width: int = 3, max_summands: int = 3, lo: int = 0) -> BoundedComplex:
    verts = list(A.vertices)
    width = int(rng.integers(1, max_width + 1))
    terms = [ProjModule(rng.choice(verts, size=int(rng.integers(1, max_summands + 1)))) for _ in range(width)]
    diffs: List[ProjMap] = []
    for k in range(width - 1):
        prev = diffs[-1] if diffs else None
        diffs.append(random_projmap_solving(A, terms[k], terms[k + 1], rng, before=prev))
    return BoundedComplex(A, lo, terms, diffs)


def random_automorphism(A, P, rng) -> tuple:
    """``(T, T⁻¹)`` with ``T = 1 + N``, ``N`` strictly upper triangular in summand order."""
    F = A.field
    co = HomCoords(A, P, P, allowed=lambda i, j: j < i)
    I = ProjMap.identity(A, P)
    if len(co) == 0:
        return I, I
    N = co.from_vector(_random_combination(F, rng, F.eye(len(co)))[:, 0])
    inv = I
    power = I
    for _ in range(len(P)):
        power = -(power @ N)
        inv = inv + power
    return I + N, inv


def random_relative_projective(A, rng, max_summands: int = 3) -> PeriodicComplex:
    """A random differential module ``(P, ε)`` with ``P`` projective.

    Half the time ``ε = g ∘ h`` with ``h ∘ g = 0``; otherwise a compressed random
    complex conjugated by a random automorphism, which hides its flag.
    """
    verts = list(A.vertices)
    if rng.integers(2) == 0:
        P = ProjModule(rng.choice(verts, size=int(rng.integers(1, max_summands + 1))))
        R = ProjModule(rng.choice(verts, size=int(rng.integers(1, max_summands + 1))))
        h = random_projmap_solving(A, P, R, rng)
        g = random_projmap_solving(A, R, P, rng, after=h)
        return make_periodic([P], [g @ h], 1, A)
    from .compress import compress

    X = random_bounded_complex(A, rng, 3, max(1, max_summands // 2 + 1))
    Y = compress(X, 1)
    P = Y.total.module
    T, Ti = random_automorphism(A, P, rng)
    return make_periodic([P], [T @ Y.total.diff @ Ti], 1, A)


def random_rep_differential_module(A, rng, max_summands: int = 3) -> RepPeriodicComplex:
    """A random differential module with non-projective underlying module.

    Built as ``M = B ⊕ C`` with ``ε = [[0, 0], [φ, 0]]`` for a random RepMap ``φ: B -> C``
    between quotients of projectives, so ``ε² = 0`` automatically.
    """
    from .repmod import cokernel, hom_space

    def random_module():
        P = random_relative_projective(A, rng, max_summands)
        Pe = P.evaluate()
        C, _ = cokernel(Pe.diffs[0])
        return C

    B = random_module()
    C = random_module()
    homs = hom_space(B, C)
    F = A.field
    phi = RepMap.zero(B, C)
    for h in homs:
        phi = phi + h.scale(F.random(rng, -2, 2))
    M = B.direct_sum(C)
    mats = {}
    for v in A.vertices:
        b, c = B.dims[v], C.dims[v]
        m = np.zeros((b + c, b + c), dtype=object)
        m[:] = 0
        if b and c:
            m[b:, :b] = phi.mats[v]
        mats[v] = F.array(m)
    eps = RepMap(M, M, mats)
    return RepPeriodicComplex([M], [eps])


def random_differential_module_a3(A, rng, max_dim: int = 4) -> RepPeriodicComplex:
    """Random differential module over the linear quiver with vertex dims ≤ ``max_dim``.

    The underlying module is ``A ⊕ B`` (two or three layers) with ε mapping one layer to the next.
    """
    F = A.field
    verts = list(A.vertices)
    arrows = list(A.quiver.arrows)

    def random_rep(budget):
        dims = {v: int(rng.integers(0, budget + 1)) for v in verts}
        acts = {}
        for a in arrows:
            shape = (dims[a.source], dims[a.target])
            acts[a.name] = np.array([[F.random(rng, -1, 1) for _ in range(shape[1])] for _ in range(shape[0])],
                                    dtype=object).reshape(shape)
        return Representation(A, dims, acts, check=False)

    def enforce_relations(rep):
        # monomial relations: zero out until all relations hold
        if all(not np.any(rep.path_action(r) != 0) for r in A.relations):
            return rep
        return None

    layers = int(rng.integers(2, 4))
    reps = []
    while len(reps) < layers:
        budget = max(1, max_dim // layers)
        r = enforce_relations(random_rep(budget))
        if r is not None:
            reps.append(r)
    maps = []
    for k in range(layers - 1):
        from .repmod import hom_space

        hs = hom_space(reps[k], reps[k + 1])
        phi = RepMap.zero(reps[k], reps[k + 1])
        for h in hs:
            phi = phi + h.scale(F.random(rng, -2, 2))
        if k > 0:
            # force ψ φ = 0: restrict the next map to vanish on the previous image
            phi = _kill_image(phi, maps[-1])
        maps.append(phi)
    M = reps[0]
    for r in reps[1:]:
        M = M.direct_sum(r)
    offs = {v: [0] for v in verts}
    for v in verts:
        for r in reps:
            offs[v].append(offs[v][-1] + r.dims[v])
    mats = {}
    for v in verts:
        n = offs[v][-1]
        m = np.zeros((n, n), dtype=object)
        m[:] = 0
        for k, phi in enumerate(maps):
            s0, s1 = offs[v][k], offs[v][k + 1]
            t0, t1 = offs[v][k + 1], offs[v][k + 2]
            if s1 > s0 and t1 > t0:
                m[t0:t1, s0:s1] = phi.mats[v]
        mats[v] = F.array(m)
    eps = RepMap(M, M, mats)
    return RepPeriodicComplex([M], [eps])


def _kill_image(psi: RepMap, phi: RepMap) -> RepMap:
    """Replace ``psi`` by a map vanishing on ``im phi``, chosen from the Hom space."""
    from .repmod import hom_space

    A = psi.algebra
    F = A.field
    hs = hom_space(psi.source, psi.target)
    if not hs:
        return psi
    # linear condition: Σ c_k (h_k ∘ phi) = 0
    cols = []
    for h in hs:
        comp = h @ phi
        cols.append(np.concatenate([comp.mats[v].reshape(-1) for v in A.vertices]) if any(
            comp.mats[v].size for v in A.vertices) else np.zeros(0, dtype=object))
    if cols[0].size == 0:
        return psi
    M = F.array(np.stack(cols, axis=1))
    N = el.nullspace(F, M)
    if N.shape[1] == 0:
        return RepMap.zero(psi.source, psi.target)
    out = RepMap.zero(psi.source, psi.target)
    rng_vec = [F.norm(k + 1) for k in range(N.shape[1])]
    for j in range(N.shape[1]):
        for k, h in enumerate(hs):
            c = F.reduce(N[k, j] * rng_vec[j])
            if c != 0:
                out = out + h.scale(c)
    return out
