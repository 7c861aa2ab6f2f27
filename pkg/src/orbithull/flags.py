"""Projective-flag models of differential modules.

``flag_resolution`` builds a quasi-isomorphic flag from two horseshoe
constructions; ``relproj_to_flag`` rewrites a differential module with
projective underlying module as a flag up to a contractible summand, with an
explicit conjugating isomorphism.  Only period 1 is supported.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple


from . import exactlin as el
from .compress import compress
from .periodic import (
    PeriodicComplex,
    RepPeriodicComplex,
    RepPeriodicMap,
    homology_periodic,
    iso_cn,
    make_periodic,
    quasi_iso,
)
from .proj import ProjMap, ProjModule, inverse_map, solve_left
from .quiver import AlgebraError
from .repmod import (
    RepMap,
    cokernel,
    eval_proj,
    eval_projmap,
    generator_vector,
    kernel_image,
    lift_through,
    map_from_projective,
    proj_resolution,
    repmap_to_projmap,
)
from .boundedcx import BoundedComplex

__all__ = [
    "NotHereditary",
    "NoHomotopy",
    "FlagWitness",
    "RelProjFlag",
    "flag_resolution",
    "relproj_to_flag",
    "hereditary_stalk_check",
    "is_strictly_lower",
]


class NotHereditary(AlgebraError):
    code = "NOT_HEREDITARY"


class NoHomotopy(AlgebraError):
    code = "NO_HOMOTOPY"


def is_strictly_lower(eps: ProjMap) -> bool:
    """Nonzero entries only strictly below the diagonal, in summand order."""
    return all(eps.entries[j][i].is_zero() for j in range(len(eps.target)) for i in range(len(eps.source)) if j <= i)


def _solve_rep(F, A_mat, B_mat):
    if A_mat.shape[1] == 0:
        return F.zeros(0, B_mat.shape[1])
    sol = el.solve(F, A_mat, B_mat)
    if sol is None:
        raise AlgebraError("linear factorization failed")
    return sol.x


def _factor_through_mono(mono: RepMap, h: RepMap) -> RepMap:
    """The unique ``x`` with ``mono ∘ x = h``."""
    F = mono.algebra.field
    mats = {v: _solve_rep(F, mono.mats[v], h.mats[v]) if h.mats[v].shape[1] else F.zeros(mono.source.dims[v], 0)
            for v in mono.algebra.vertices}
    return RepMap(h.source, mono.source, mats, check=False)


def _generator_images(f: RepMap, P: ProjModule):
    A = f.algebra
    out = []
    for i in range(len(P)):
        v, pos = generator_vector(A, P, i)
        out.append(f.mats[v][:, pos: pos + 1])
    return out


def _lift(P: ProjModule, g: RepMap, h: RepMap) -> RepMap:
    x = lift_through(P, g, h)
    if x is None:
        raise AlgebraError("lift through a surjection failed")
    return x


def _term(res, i) -> ProjModule:
    return res.terms[i] if i < len(res.terms) else ProjModule()


def _diff(A, res, i) -> ProjMap:
    """``∂_i: P_i -> P_{i-1}`` (zero outside the resolution)."""
    if 1 <= i < len(res.terms):
        return res.maps[i - 1]
    return ProjMap.zero(A, _term(res, i), _term(res, i - 1))


@dataclass
class _Horseshoe:
    """Resolution of the middle term ``B`` of ``0 -> A' -> B -> C -> 0``, quotient summands first."""

    terms: List[ProjModule]
    diffs: List[ProjMap]      # diffs[i-1] = ∂_i for i >= 1
    aug: RepMap               # eval(P_0) -> B
    sub_len: List[int]        # number of summands coming from the quotient, per degree


def _horseshoe(A, sub_terms, sub_diffs, sub_aug: RepMap, incl: RepMap,
               quo_terms, quo_diffs, quo_aug: RepMap, proj: RepMap) -> _Horseshoe:
    """``incl: A' -> B`` injective, ``proj: B -> C`` surjective; resolutions of ``A'`` and ``C`` given."""
    length = max(len(sub_terms), len(quo_terms))
    S = lambda i: sub_terms[i] if i < len(sub_terms) else ProjModule()
    C = lambda i: quo_terms[i] if i < len(quo_terms) else ProjModule()

    def dS(i):
        return sub_diffs[i - 1] if 1 <= i < len(sub_terms) else ProjMap.zero(A, S(i), S(i - 1))

    def dC(i):
        return quo_diffs[i - 1] if 1 <= i < len(quo_terms) else ProjMap.zero(A, C(i), C(i - 1))

    B = incl.target
    # σ_0: eval(C_0) -> B lifting quo_aug through proj
    sigma0 = _lift(C(0), proj, quo_aug)
    sub_into_b = incl @ sub_aug
    terms = [C(i) + S(i) for i in range(length)]
    aug_images = _generator_images(sigma0, C(0)) + _generator_images(sub_into_b, S(0))
    aug = map_from_projective(terms[0], B, aug_images) if len(terms[0]) else RepMap.zero(eval_proj(A, []), B)
    diffs = []
    theta_prev = None
    for i in range(1, length):
        if i == 1:
            rhs = -(sigma0 @ eval_projmap(dC(1), eval_proj(A, C(1)), sigma0.source))
            th = _lift(C(1), sub_into_b, rhs) if len(C(1)) else None
            theta = repmap_to_projmap(th, C(1), S(0)) if th is not None else ProjMap.zero(A, C(1), S(0))
        else:
            rhs = -(theta_prev @ dC(i))
            theta = solve_left(dS(i - 1), rhs)
            if theta is None:
                raise AlgebraError("horseshoe connecting map does not exist")
        d = ProjMap.block(A, [C(i - 1), S(i - 1)], [C(i), S(i)], [[dC(i), None], [theta, dS(i)]])
        diffs.append(d)
        theta_prev = theta
    return _Horseshoe(terms, diffs, aug, [len(C(i)) for i in range(length)])


@dataclass
class FlagWitness:
    """A flag ``(pM, ε_pM)`` with augmentation to the input.

    ``layers[k] = (i, part)`` records that summand ``k`` of the flag lies in ``P_i``
    and in the ``part`` ∈ {"X", "Y", "X'"} piece of ``P_i = X_i ⊕ Y_i ⊕ X_i``.
    """

    flag: PeriodicComplex
    layers: List[Tuple[int, str]]
    augmentation: RepMap
    source: RepPeriodicComplex
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def _as_rep(M) -> RepPeriodicComplex:
    if isinstance(M, PeriodicComplex):
        return M.evaluate()
    return M


def flag_resolution(M, bound: Optional[int] = None) -> FlagWitness:
    M = _as_rep(M)
    if M.n != 1:
        raise AlgebraError("flag resolutions are implemented for period 1 only")
    A = M.algebra
    mod = M.terms[0]
    eps = M.diffs[0]
    K, inclK, I, inclI = kernel_image(eps)
    pi = _factor_through_mono(inclI, eps)          # M -> Im
    j = _factor_through_mono(inclK, inclI)          # Im -> Ker
    H, q = cokernel(j)                              # Ker -> H

    resX = proj_resolution(I, bound)
    resY = proj_resolution(H, bound)
    # Ker: quotient H first, then Im
    hz = _horseshoe(A, resX.terms, resX.maps, resX.augmentation, j, resY.terms, resY.maps, resY.augmentation, q)
    # M: quotient Im first, then Ker
    hm = _horseshoe(A, hz.terms, hz.diffs, hz.aug, inclK, resX.terms, resX.maps, resX.augmentation, pi)

    l = len(hm.terms) - 1
    X = lambda i: _term(resX, i)
    Y = lambda i: _term(resY, i)
    for i, t in enumerate(hm.terms):
        assert t == X(i) + Y(i) + X(i)
    # ε_i = (-1)^i ε̂_i, ε̂_i sends the first X_i to the last X_i by the identity
    eps_hat = []
    for i in range(l + 1):
        P = hm.terms[i]
        nx, ny = len(X(i)), len(Y(i))
        rows = [[A.zero()] * len(P) for _ in P]
        for k in range(nx):
            rows[nx + ny + k][k] = A.idempotent(X(i)[k], (-1) ** i)
        eps_hat.append(ProjMap(A, P, P, rows, check=False))
    # assemble over P_l ⊕ ... ⊕ P_0
    order = list(range(l, -1, -1))
    mods = [hm.terms[i] for i in order]
    blocks = [[None] * (l + 1) for _ in range(l + 1)]
    for b, i in enumerate(order):
        blocks[b][b] = eps_hat[i]
        if b + 1 <= l and i >= 1:
            blocks[b + 1][b] = hm.diffs[i - 1]
    diff = ProjMap.block(A, mods, mods, blocks)
    module = ProjModule(v for m in mods for v in m)
    flag = make_periodic([module], [diff], 1, A)
    layers = []
    for i in order:
        layers += [(i, "X")] * len(X(i)) + [(i, "Y")] * len(Y(i)) + [(i, "X'")] * len(X(i))

    # augmentation (p_l, ..., p_0) ↦ ∂_0(p_0)
    P0 = hm.terms[0] if hm.terms else ProjModule()
    proj0 = ProjMap(A, module, P0,
                    [[A.idempotent(P0[r]) if c == len(module) - len(P0) + r else A.zero() for c in range(len(module))]
                     for r in range(len(P0))], check=False)
    flag_rep = flag.evaluate()
    e0 = eval_projmap(proj0, flag_rep.terms[0], hm.aug.source if len(P0) else eval_proj(A, P0))
    aug = hm.aug @ e0 if len(P0) else RepMap.zero(flag_rep.terms[0], mod)
    aug = RepMap(flag_rep.terms[0], mod, aug.mats, check=False)

    qmap = RepPeriodicMap(flag_rep, M, [aug])
    checks = {
        "squares_to_zero": flag.total.squares_to_zero(),
        "augmentation_is_linear": aug.commutes(),
        "augmentation_commutes_with_differential": (M.diffs[0] @ aug) == (aug @ flag_rep.diffs[0]),
        "strictly_lower_triangular": is_strictly_lower(diff),
        "layer_structure": _layers_ok(diff, layers),
        "quasi_isomorphism": quasi_iso(qmap),
    }
    return FlagWitness(flag, layers, aug, M, checks)


def _layers_ok(eps: ProjMap, layers) -> bool:
    """Entries only from ``P_i`` into ``P_{i-1}`` or from the first X of ``P_i`` to its last X."""
    for j in range(len(eps.target)):
        for i in range(len(eps.source)):
            if eps.entries[j][i].is_zero():
                continue
            (li, pi), (lj, pj) = layers[i], layers[j]
            if lj == li - 1:
                continue
            if lj == li and pi == "X" and pj == "X'":
                continue
            return False
    return True


# -- relative projectives --------------------------------------------------------

@dataclass
class RelProjFlag:
    source: PeriodicComplex
    resolution: BoundedComplex      # P_l -> ... -> P_0 in degrees -l..0
    homotopy: List[ProjMap]         # s_i: P_i -> P_{i+1}
    delta: PeriodicComplex          # compression ΔP
    Q: PeriodicComplex
    Qprime: PeriodicComplex
    f: ProjMap                      # Q' -> Q
    f_inv: ProjMap
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def relproj_to_flag(X: PeriodicComplex, bound: Optional[int] = None) -> RelProjFlag:
    if X.n != 1:
        raise AlgebraError("relproj_to_flag is implemented for period 1 only")
    A = X.algebra
    P0 = X.total.module
    eps = X.total.diff
    Xe = X.evaluate()
    K, inclK, _, _ = kernel_image(Xe.diffs[0])

    # resolution of Im ε: a resolution of Ker ε spliced with its inclusion into P_0
    terms = [P0]
    maps: List[ProjMap] = []
    if not K.is_zero():
        resK = proj_resolution(K, bound)
        d1 = repmap_to_projmap(inclK @ resK.augmentation, resK.terms[0], P0)
        terms += resK.terms
        maps = [d1] + list(resK.maps)
    l = len(terms) - 1
    res = BoundedComplex(A, -l, terms[::-1], maps[::-1])

    # s_i: P_i -> P_{i+1}: ∂_1 s_0 = ε, ∂_{i+1} s_i = -s_{i-1} ∂_i
    s: List[ProjMap] = []
    for i in range(l):
        rhs = eps if i == 0 else -(s[i - 1] @ maps[i - 1])
        si = solve_left(maps[i], rhs)
        if si is None:
            raise NoHomotopy(f"no homotopy component s_{i}")
        s.append(si)
    if l and not (s[l - 1] @ maps[l - 1]).is_zero():
        raise NoHomotopy("s_{l-1} ∂_l != 0")

    DP = compress(res, 1)
    D = DP.total.module
    eD = DP.total.diff
    n_d = len(D)
    offs = {}
    pos = 0
    for i in range(l, -1, -1):
        offs[i] = pos
        pos += len(terms[i])
    # h = Σ (-1)^i s_i placed from the P_i block to the P_{i+1} block
    rows = [[A.zero()] * n_d for _ in range(n_d)]
    for i, si in enumerate(s):
        sign = (-1) ** i
        for jj in range(len(terms[i + 1])):
            for ii in range(len(terms[i])):
                rows[offs[i + 1] + jj][offs[i] + ii] = si.entries[jj][ii].scale(sign)
    h = ProjMap(A, D, D, rows, check=False)
    n0 = len(P0)
    e = ProjMap(A, D, P0, [[A.idempotent(P0[r]) if c == offs[0] + r else A.zero() for c in range(n_d)]
                           for r in range(n0)], check=False)
    m = ProjMap(A, P0, D, [[A.idempotent(D[r]) if r == offs[0] + c else A.zero() for c in range(n0)]
                           for r in range(n_d)], check=False)
    one = ProjMap.identity(A, D)
    Z = None
    mods = [D, P0, D]
    eps_Q = ProjMap.block(A, mods, mods, [[-eD, Z, Z], [Z, eps, Z], [-one, Z, eD]])
    eps_Qp = ProjMap.block(A, mods, mods, [[-eD, Z, Z], [-(eps @ e), Z, Z], [-(one + h), -m, eD]])
    f = ProjMap.block(A, mods, mods, [[one + h, m, Z], [e, Z, -(e @ eD)], [Z, Z, one]])
    module = D + P0 + D
    Q = make_periodic([module], [eps_Q], 1, A)
    Qp = make_periodic([module], [eps_Qp], 1, A)
    f_inv = inverse_map(f)
    checks = {
        "homotopy_identity": m @ eps @ e == eD @ h - h @ eD,
        "intertwines": eps_Q @ f == f @ eps_Qp,
        "conjugation": f_inv @ eps_Q @ f == eps_Qp,
        "f_invertible": f.is_invertible(),
        "strictly_lower_triangular": is_strictly_lower(eps_Qp),
    }
    return RelProjFlag(X, res, s, DP, Q, Qp, f, f_inv, checks)


# -- hereditary stalk check --------------------------------------------------------

def hereditary_stalk_check(M, cap_enum: int = 10**7, cap_random: int = 10**4, seed: int = 0) -> bool:
    """Whether ``(M, ε) ≅ (H(M), 0)`` in the 1-periodic derived category (via flag models)."""
    M = _as_rep(M)
    A = M.algebra
    if A.relations:
        raise NotHereditary("the algebra has relations, so the check does not apply")
    if M.n != 1:
        raise AlgebraError("stalk check is implemented for period 1 only")
    H = homology_periodic(M)[0]
    stalk = RepPeriodicComplex([H], [RepMap.zero(H, H)])
    F1 = flag_resolution(M).flag
    F2 = flag_resolution(stalk).flag
    return iso_cn(F1, F2, minimize=True, cap_enum=cap_enum, cap_random=cap_random, seed=seed).verdict == "YES"
