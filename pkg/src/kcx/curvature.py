"""Curvature and torsion, in both the module and the bundle-map pictures.

Module side: curvature is the wedge-collapsed second application of a
connection, landing in Omega^2(A) (x) M; torsion (for connections on the
differentials module) is the wedge collapse of the Christoffel images.

Bundle side: curvature compares the twice-applied vertical form against its
canonical flip; torsion compares the vertical form with the affine flip, or
equivalently runs through the horizontal form and brackets.  The embedding
psi writes the module quantities inside the double tangent and the projection
phi comes back; composing the two picks up the commutative-to-anticommutative
factor: phi(psi(w)) = 2w exactly.  psi produces raw (unreduced) polynomials so
that identity holds on the nose on the generator basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield

from .algebra import AlgebraElement, AlgebraMorphism, compose_chain, compose_morphisms
from .connections import Connection, apply_connection, to_horizontal, to_vertical
from .errors import KcxError, ModuleNotKahler
from .modules import ModuleElement, kahler_module, tensor_modules, wedge_square
from .poly import Polynomial
from .tangent import (
    affine_flip,
    affine_swap,
    bracketing,
    bundle_combine,
    tangent_apply_functor,
)


@dataclass
class CurvatureResult:
    images: dict[str, ModuleElement]  # per module generator, in Omega^2 (x) M
    flat: bool
    tangent_images: dict[str, AlgebraElement] | None = None
    residuals: dict[str, list] = dfield(default_factory=dict)

    @property
    def residuals_zero(self) -> bool:
        return all(r.is_zero() for rs in self.residuals.values() for r in rs)


@dataclass
class TorsionResult:
    images: dict[str, ModuleElement]  # per Omega generator, in Omega^2
    torsion_free: bool
    tangent_images: dict[str, AlgebraElement] | None = None
    residuals: dict[str, list] = dfield(default_factory=dict)

    @property
    def residuals_zero(self) -> bool:
        return all(r.is_zero() for rs in self.residuals.values() for r in rs)


# ---------------------------------------------------------------------------
# module-side curvature and torsion
# ---------------------------------------------------------------------------


def curvature_target(nabla: Connection):
    omega = kahler_module(nabla.base)
    return tensor_modules(wedge_square(omega), nabla.module)


def curvature_of_element(nabla: Connection, e: ModuleElement) -> ModuleElement:
    """Apply the connection twice and collapse the two form slots to a wedge."""
    M = nabla.module
    omega = kahler_module(nabla.base)
    w2 = wedge_square(omega)
    target = curvature_target(nabla)
    first = apply_connection(nabla, e)
    n = M.rank
    out = target.zero()
    for idx, coef in enumerate(first.comps):
        if coef.is_zero():
            continue
        i, l = divmod(idx, n)
        second = apply_connection(nabla, M.gen(M.gens[l]).scaled(coef))
        for idx2, coef2 in enumerate(second.comps):
            if coef2.is_zero():
                continue
            k, target_gen = divmod(idx2, n)
            if i == k:
                continue
            if i < k:
                wedge = w2.gen(w2.gens[w2.pairs.index((i, k))])
            else:
                wedge = -w2.gen(w2.gens[w2.pairs.index((k, i))])
            out = out + target.pair(wedge, M.gen(M.gens[target_gen])).scaled(coef2)
    return out


def module_curvature(nabla: Connection) -> CurvatureResult:
    images = {g: curvature_of_element(nabla, nabla.module.gen(g)) for g in nabla.module.gens}
    return CurvatureResult(images, flat=all(v.is_zero() for v in images.values()))


def module_torsion(nabla: Connection) -> TorsionResult:
    """Wedge collapse of the Christoffel images; needs a Kahler-module bundle."""
    if nabla.module.provenance != "kahler":
        raise ModuleNotKahler("torsion is defined for connections on the differentials module")
    omega = nabla.module
    w2 = wedge_square(omega)
    images = {g: w2.from_tensor(nabla.gamma[g]) for g in omega.gens}
    return TorsionResult(images, torsion_free=all(v.is_zero() for v in images.values()))


# ---------------------------------------------------------------------------
# bundle-side curvature
# ---------------------------------------------------------------------------


def tangent_curvature(nabla: Connection, K: AlgebraMorphism | None = None) -> AlgebraMorphism:
    """Flip-compared double application of the vertical form: S -> T^2(S)."""
    ctx = nabla.ctx
    K = K if K is not None else to_vertical(nabla)
    TK = tangent_apply_functor(K)
    twice = compose_morphisms(TK, K)
    flipped = compose_morphisms(ctx.flip_S, twice)
    return bundle_combine(flipped, twice, "minus", set(nabla.module.gens))


def tangent_curvature_is_flat(nabla: Connection, C: AlgebraMorphism) -> bool:
    """Flat bundle curvature: identity on the base, zero on module generators."""
    ctx = nabla.ctx
    return all(C.image_of(m).is_zero() for m in nabla.module.gens) and all(
        C(ctx.S.gen(x)) == ctx.T2S.element(Polynomial.variable(ctx.T2S.field, ctx.T2S.gens, x))
        for x in ctx.A.gens
    )


# ---------------------------------------------------------------------------
# comparison maps: psi / phi and their torsion analogues
# ---------------------------------------------------------------------------


def embed_wedge_curvature(nabla: Connection, e: ModuleElement) -> Polynomial:
    """psi: Omega^2 (x) M -> T^2(S_A(M)) as a raw polynomial.

    A wedge generator (d(x_i) ^ d(x_j)) (x) m goes to
    m d(x_i) d'(x_j) - m d'(x_i) d(x_j), with d the first and d' the second
    tangent level.
    """
    ctx = nabla.ctx
    T2S, TS, M = ctx.T2S, ctx.TS, nabla.module
    target = curvature_target(nabla)
    if e.module is not target:
        raise ValueError("expected an element of Omega^2 (x) M")
    w2 = wedge_square(kahler_module(nabla.base))
    var = lambda name: Polynomial.variable(T2S.field, T2S.gens, name)
    out = Polynomial.zero(T2S.field, T2S.gens)
    for idx, coef in enumerate(e.comps):
        if coef.is_zero():
            continue
        p, l = divmod(idx, M.rank)
        i, j = w2.pairs[p]
        m = var(M.gens[l])
        d_i, d_j = var(TS.dmap[ctx.A.gens[i]]), var(TS.dmap[ctx.A.gens[j]])
        dp_i, dp_j = var(T2S.dmap[ctx.A.gens[i]]), var(T2S.dmap[ctx.A.gens[j]])
        out = out + coef.change_vars(T2S.gens) * m * (d_i * dp_j - dp_i * d_j)
    return out


def project_wedge_curvature(nabla: Connection, poly) -> ModuleElement:
    """phi: T^2(S_A(M)) -> Omega^2 (x) M, killing monomials of other shapes.

    Keeps exactly the monomials with one module generator, one first-level and
    one second-level base differential (no mixed sorts); accepts an element or
    a raw polynomial.
    """
    ctx = nabla.ctx
    T2S, M = ctx.T2S, nabla.module
    if isinstance(poly, AlgebraElement):
        poly = poly.poly
    target = curvature_target(nabla)
    w2 = wedge_square(kahler_module(nabla.base))
    kinds = {g: T2S.roles[g].kind for g in T2S.gens}
    idx_of = {g: i for i, g in enumerate(T2S.gens)}
    base_back = {g: g for g in ctx.A.gens}
    comps = [Polynomial.zero(ctx.A.field, ctx.A.gens)] * target.rank
    for exp, coef in poly.terms.items():
        m_vars, d_vars, dp_vars, bad = [], [], [], False
        rest = list(exp)
        for g, pos in idx_of.items():
            vdeg = exp[pos]
            if not vdeg:
                continue
            kind = kinds[g]
            if kind == "base":
                continue
            if kind == "module" and vdeg == 1:
                m_vars.append(g)
            elif kind == "d" and vdeg == 1:
                d_vars.append(g)
            elif kind == "dp" and vdeg == 1:
                dp_vars.append(g)
            else:
                bad = True
                break
        if bad or len(m_vars) != 1 or len(d_vars) != 1 or len(dp_vars) != 1:
            continue
        i = ctx.A.gens.index(T2S.roles[d_vars[0]].origin)
        j = ctx.A.gens.index(T2S.roles[dp_vars[0]].origin)
        if i == j:
            continue
        rest[idx_of[m_vars[0]]] -= 1
        rest[idx_of[d_vars[0]]] -= 1
        rest[idx_of[dp_vars[0]]] -= 1
        base_coef = Polynomial(T2S.field, T2S.gens, {tuple(rest): coef}).change_vars(
            ctx.A.gens, base_back
        )
        l = M.gens.index(m_vars[0])
        if i < j:
            k = target.pair_index(w2.pairs.index((i, j)), l)
            comps[k] = comps[k] + base_coef
        else:
            k = target.pair_index(w2.pairs.index((j, i)), l)
            comps[k] = comps[k] - base_coef
    return target.element(tuple(comps))


def embed_wedge_torsion(nabla: Connection, e: ModuleElement) -> Polynomial:
    """psi-hat: Omega^2 -> T(S_A(Omega)) raw; d(x_i)^d(x_j) -> the d/d' commutator."""
    ctx = nabla.ctx
    TS, M = ctx.TS, nabla.module
    w2 = wedge_square(kahler_module(nabla.base))
    if e.module is not w2:
        raise ValueError("expected an element of Omega^2")
    var = lambda name: Polynomial.variable(TS.field, TS.gens, name)
    out = Polynomial.zero(TS.field, TS.gens)
    for p, coef in enumerate(e.comps):
        if coef.is_zero():
            continue
        i, j = w2.pairs[p]
        m_i, m_j = var(M.gens[i]), var(M.gens[j])
        d_i, d_j = var(TS.dmap[ctx.A.gens[i]]), var(TS.dmap[ctx.A.gens[j]])
        out = out + coef.change_vars(TS.gens) * (m_i * d_j - d_i * m_j)
    return out


def project_wedge_torsion(nabla: Connection, poly) -> ModuleElement:
    """phi-hat: T(S_A(Omega)) -> Omega^2; keeps module-times-differential monomials."""
    ctx = nabla.ctx
    TS, M = ctx.TS, nabla.module
    if isinstance(poly, AlgebraElement):
        poly = poly.poly
    w2 = wedge_square(kahler_module(nabla.base))
    kinds = {g: TS.roles[g].kind for g in TS.gens}
    idx_of = {g: i for i, g in enumerate(TS.gens)}
    comps = [Polynomial.zero(ctx.A.field, ctx.A.gens)] * w2.rank
    for exp, coef in poly.terms.items():
        m_vars, d_vars, bad = [], [], False
        rest = list(exp)
        for g, pos in idx_of.items():
            vdeg = exp[pos]
            if not vdeg:
                continue
            kind = kinds[g]
            if kind == "base":
                continue
            if kind == "module" and vdeg == 1:
                m_vars.append(g)
            elif kind == "d" and vdeg == 1:
                d_vars.append(g)
            else:
                bad = True
                break
        if bad or len(m_vars) != 1 or len(d_vars) != 1:
            continue
        i = M.gens.index(m_vars[0])
        j = ctx.A.gens.index(TS.roles[d_vars[0]].origin)
        if i == j:
            continue
        rest[idx_of[m_vars[0]]] -= 1
        rest[idx_of[d_vars[0]]] -= 1
        base_coef = Polynomial(TS.field, TS.gens, {tuple(rest): coef}).change_vars(
            ctx.A.gens, {g: g for g in ctx.A.gens}
        )
        if i < j:
            k = w2.pairs.index((i, j))
            comps[k] = comps[k] + base_coef
        else:
            k = w2.pairs.index((j, i))
            comps[k] = comps[k] - base_coef
    return w2.element(tuple(comps))


# ---------------------------------------------------------------------------
# torsion on the bundle side (both routes)
# ---------------------------------------------------------------------------


def tangent_torsion(nabla: Connection) -> AlgebraMorphism:
    """Torsion of the induced bundle connection, as a map S -> T(S).

    Computed both by comparing the vertical form against the affine flip and
    by the flip-conjugated horizontal route followed by bracketing; the two
    must agree exactly (their common value matches psi-hat of the module
    torsion).
    """
    if nabla.module.provenance != "kahler":
        raise ModuleNotKahler("bundle torsion needs the differentials module")
    ctx = nabla.ctx
    c = affine_flip(ctx)
    K = to_vertical(nabla)
    v_k = bundle_combine(K, compose_chain([K, c]), "minus", set(nabla.module.gens))

    H = to_horizontal(nabla)
    UH = compose_morphisms(ctx.U, H)
    d_fibre = {ctx.TS.dmap[g] for g in ctx.S.gens}
    v_flat = bundle_combine(
        compose_chain([UH, c]), compose_chain([c, UH]), "minus", d_fibre
    )
    v_h = bracketing(ctx.bundle, v_flat)
    if v_k != v_h:
        raise KcxError("torsion routes disagree (internal consistency failure)")
    return v_k


def torsionfree_horizontal_criterion(nabla: Connection) -> bool:
    """Flip-equivariance of the horizontal form, the torsion-free test."""
    ctx = nabla.ctx
    H = to_horizontal(nabla)
    lhs = compose_chain([affine_flip(ctx), H])
    rhs = compose_chain([H, affine_swap(ctx)])
    return lhs == rhs


# ---------------------------------------------------------------------------
# correspondence checks (the factor-of-two identities)
# ---------------------------------------------------------------------------


def check_curvature_correspondence(nabla: Connection) -> CurvatureResult:
    """Verify the bundle curvature against the module curvature per generator.

    Residuals recorded per generator: the difference of the bundle image and
    the embedded module image; twice the module image minus the projection of
    the bundle image; and away from characteristic two, the module image minus
    half the projection.
    """
    ctx = nabla.ctx
    result = module_curvature(nabla)
    C = tangent_curvature(nabla)
    result.tangent_images = {m: C.image_of(m) for m in nabla.module.gens}
    half = None
    if nabla.base.field.char != 2:
        half = nabla.base.field.of(1) / 2 if nabla.base.field.char == 0 else nabla.base.field.inv(2)
    for m in nabla.module.gens:
        c_img = result.tangent_images[m]
        psi_img = ctx.T2S.element(embed_wedge_curvature(nabla, result.images[m]))
        res1 = c_img - psi_img
        phi_img = project_wedge_curvature(nabla, c_img)
        res2 = result.images[m].scaled(2) - phi_img
        residuals = [res1, res2]
        if half is not None:
            residuals.append(result.images[m] - phi_img.scaled(half))
        result.residuals[m] = residuals
    return result


def check_torsion_correspondence(nabla: Connection) -> TorsionResult:
    """Verify the bundle torsion against the module torsion per generator."""
    ctx = nabla.ctx
    result = module_torsion(nabla)
    V = tangent_torsion(nabla)
    result.tangent_images = {m: V.image_of(m) for m in nabla.module.gens}
    half = None
    if nabla.base.field.char != 2:
        half = nabla.base.field.of(1) / 2 if nabla.base.field.char == 0 else nabla.base.field.inv(2)
    for m in nabla.module.gens:
        v_img = result.tangent_images[m]
        psi_img = ctx.TS.element(embed_wedge_torsion(nabla, result.images[m]))
        res1 = v_img - psi_img
        phi_img = project_wedge_torsion(nabla, v_img)
        res2 = result.images[m].scaled(2) - phi_img
        residuals = [res1, res2]
        if half is not None:
            residuals.append(result.images[m] - phi_img.scaled(half))
        result.residuals[m] = residuals
    return result
