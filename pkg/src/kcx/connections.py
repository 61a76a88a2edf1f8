"""Module connections and their horizontal/vertical bundle forms.

A connection on M over A is stored by its Christoffel data: one element of
Omega(A) (x)_A M per module generator.  Construction certifies the Leibniz
compatibility with every module relation and rejects anything else with the
offending residue.  The same data converts losslessly to the two bundle-map
forms: the horizontal form H out of T(S_A(M)) and the vertical form K into it,
and back; the axiom suite checks the four H diagrams, the four K diagrams and
the two compatibility equations as morphism identities on generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield

from .algebra import (
    AlgebraMorphism,
    PresentedAlgebra,
    compose_chain,
    compose_morphisms,
    identity_morphism,
    make_morphism,
)
from .errors import (
    AxiomFailure,
    MembershipFailure,
    SectionRetractionFailure,
    WellDefinednessFailure,
)
from .modules import (
    ModuleElement,
    ModuleMorphism,
    PresentedModule,
    free_module,
    kahler_module,
    make_module,
    tensor_modules,
    universal_derivation,
)
from .poly import Polynomial
from .tangent import (
    BundleContext,
    TangentPresentation,
    bracketing,
    bundle_combine,
    bundle_context,
    tangent_apply_functor,
)


class Connection:
    """Christoffel data for nabla: M -> Omega(A) (x)_A M, certified."""

    def __init__(self, M: PresentedModule, gamma: dict[str, ModuleElement]):
        self.module = M
        self.ctx = bundle_context(M)
        self.gamma = gamma

    @property
    def base(self) -> PresentedAlgebra:
        return self.module.base

    def render_table(self) -> list[tuple[str, str]]:
        return [(g, self.gamma[g].render()) for g in self.module.gens]

    def __repr__(self) -> str:
        rows = "; ".join(f"{g} -> {e.render()}" for g, e in self.render_table())
        return f"<connection {rows}>"


def connection_residues(
    M: PresentedModule, gamma: dict[str, ModuleElement]
) -> list[tuple[tuple, ModuleElement]]:
    """Per-relation Leibniz residues of candidate Christoffel data (no raise)."""
    A = M.base
    ctx = bundle_context(M)
    target = ctx.omega_tensor_M
    out = []
    for row in M.relations:
        residue = target.zero()
        for coef, g in zip(row, M.gens):
            if coef.is_zero():
                continue
            residue = residue + target.pair(
                universal_derivation(A, A.element(coef)), M.gen(g)
            )
            residue = residue + gamma[g].scaled(coef)
        out.append((row, residue))
    return out


def make_connection(M: PresentedModule, images: dict[str, object]) -> Connection:
    """Build and certify a connection from generator images in Omega(A) (x) M."""
    ctx = bundle_context(M)
    target = ctx.omega_tensor_M
    if set(images) != set(M.gens):
        raise ValueError("need exactly one image per module generator")
    gamma = {g: target.element(v) for g, v in images.items()}
    for row, residue in connection_residues(M, gamma):
        if not residue.is_zero():
            raise WellDefinednessFailure(
                "connection", " , ".join(c.render() for c in row), residue.render()
            )
    return Connection(M, gamma)


def apply_connection(nabla: Connection, e: ModuleElement) -> ModuleElement:
    """Leibniz extension: nabla(sum a_j g_j) = sum (d(a_j) (x) g_j + a_j Gamma(g_j))."""
    M = nabla.module
    e = M.element(e)
    target = nabla.ctx.omega_tensor_M
    out = target.zero()
    for coef, g in zip(e.comps, M.gens):
        if coef.is_zero():
            continue
        out = out + target.pair(universal_derivation(M.base, M.base.element(coef)), M.gen(g))
        out = out + nabla.gamma[g].scaled(coef)
    return out


# ---------------------------------------------------------------------------
# conversions between the module form and the bundle forms
# ---------------------------------------------------------------------------


def to_horizontal(nabla: Connection) -> AlgebraMorphism:
    """H: T(S_A(M)) -> T(A) (x)_A S_A(M) with H(d(m)) the connection image."""
    ctx = nabla.ctx
    TS, T = ctx.TS, ctx.TAS
    images: dict[str, Polynomial] = {}
    for x in ctx.A.gens:
        images[x] = Polynomial.variable(T.field, T.gens, f"{x}#0")
        images[TS.dmap[x]] = Polynomial.variable(T.field, T.gens, f"{ctx.TA.dmap[x]}#0")
    for m in ctx.M.gens:
        images[m] = Polynomial.variable(T.field, T.gens, f"{m}#1")
        images[TS.dmap[m]] = ctx.omega_m_to_tensor_algebra(nabla.gamma[m])
    return AlgebraMorphism(TS, T, images, certify=True, name="H")


def to_vertical(nabla: Connection) -> AlgebraMorphism:
    """K: S_A(M) -> T(S_A(M)), K(m) = d(m) minus the multiplied-out image."""
    ctx = nabla.ctx
    S, TS = ctx.S, ctx.TS
    images: dict[str, Polynomial] = {}
    for x in ctx.A.gens:
        images[x] = Polynomial.variable(TS.field, TS.gens, x)
    for m in ctx.M.gens:
        dm = Polynomial.variable(TS.field, TS.gens, TS.dmap[m])
        images[m] = dm - ctx.U.apply_raw(ctx.omega_m_to_tensor_algebra(nabla.gamma[m]))
    return AlgebraMorphism(S, TS, images, certify=True, name="K")


def from_horizontal(H: AlgebraMorphism, M: PresentedModule) -> Connection:
    """Recover the connection from a horizontal form (axioms checked first)."""
    ctx = bundle_context(M)
    report = verify_horizontal_axioms(H, M)
    if not report.all_pass:
        raise AxiomFailure(report)
    images = {}
    for m in M.gens:
        elem, stray = ctx.tensor_algebra_to_omega_m(H.image_of(ctx.TS.dmap[m]))
        if not stray.is_zero():
            raise MembershipFailure(m, stray.render())
        images[m] = elem
    return make_connection(M, images)


def vertical_from_horizontal(H: AlgebraMorphism, M: PresentedModule) -> AlgebraMorphism:
    """K via the one-minus-multiplication route and bracketing."""
    ctx = bundle_context(M)
    UH = compose_morphisms(ctx.U, H)
    fibre = {ctx.TS.dmap[g] for g in ctx.S.gens}
    k_flat = bundle_combine(identity_morphism(ctx.TS), UH, "minus", fibre)
    return bracketing(ctx.bundle, k_flat)


# ---------------------------------------------------------------------------
# axiom suite
# ---------------------------------------------------------------------------


@dataclass
class AxiomCheck:
    axiom_id: str
    status: str  # pass | fail
    witness: str = ""
    lhs: str = ""
    rhs: str = ""


@dataclass
class AxiomReport:
    entries: list[AxiomCheck] = dfield(default_factory=list)

    @property
    def all_pass(self) -> bool:
        return all(e.status == "pass" for e in self.entries)

    def add_morphism_equality(self, axiom_id: str, lhs: AlgebraMorphism, rhs: AlgebraMorphism):
        for gen in lhs.dom.gens:
            left, right = lhs.image_of(gen), rhs.image_of(gen)
            if left != right:
                self.entries.append(
                    AxiomCheck(axiom_id, "fail", gen, left.render(), right.render())
                )
                return
        self.entries.append(AxiomCheck(axiom_id, "pass"))


def _vertical_lift_map(T2B: TangentPresentation) -> AlgebraMorphism:
    """l: T(T(B)) -> T(B): kills both single levels, folds the mixed sort."""
    TB = T2B.source
    images = {}
    for g in T2B.gens:
        kind = T2B.roles[g].kind
        if g in TB.source.gens:
            images[g] = Polynomial.variable(TB.field, TB.gens, g)
        elif kind in ("dpd", "dpdm"):
            images[g] = Polynomial.variable(TB.field, TB.gens, TB.dmap[T2B.roles[g].origin])
        else:
            images[g] = Polynomial.zero(TB.field, TB.gens)
    return AlgebraMorphism(T2B, TB, images, certify=True, name="l")


def _zero_map(TB: TangentPresentation) -> AlgebraMorphism:
    """0: T(B) -> B: identity on B, kills the differentials."""
    B = TB.source
    images = {}
    for g in B.gens:
        images[g] = Polynomial.variable(B.field, B.gens, g)
        images[TB.dmap[g]] = Polynomial.zero(B.field, B.gens)
    return AlgebraMorphism(TB, B, images, certify=True, name="0")


def _ctx_maps(ctx: BundleContext) -> dict:
    """Morphisms shared by the axiom checks, built once per module."""
    if "axiom_maps" in ctx._lazy:
        return ctx._lazy["axiom_maps"]
    TS, S = ctx.TS, ctx.S
    maps = {}
    maps["p_S"] = make_morphism(S, TS, {g: TS.gen(g) for g in S.gens}, name="p")
    maps["zero_S"] = _zero_map(TS)
    maps["Tq"] = tangent_apply_functor(ctx.bundle.q, certify=True)
    maps["lift_S"] = _vertical_lift_map(ctx.T2S)
    maps["T_lam"] = tangent_apply_functor(ctx.bundle.lam, certify=True)
    # H.3 downward map: vertical lift on the T^2(A) factor, zero on the T(S) factor
    big = ctx.T2A_tensor_TS
    lift_A = _vertical_lift_map(ctx.T2A)
    zero_S_side = _zero_map(TS)
    h3 = {}
    h4 = {}
    zero_TA = _zero_map(ctx.T2A)  # T(T(A)) -> T(A): kills the outer level
    for g in ctx.T2A.gens:
        h3[f"{g}#0"] = ctx.TAS.i0.apply_raw(lift_A.images[g])
        h4[f"{g}#0"] = ctx.TAS.i0.apply_raw(zero_TA.images[g])
    for g in TS.gens:
        h3[f"{g}#1"] = ctx.TAS.i1.apply_raw(zero_S_side.images[g])
        h4[f"{g}#1"] = ctx.TAS.i1.apply_raw(ctx.bundle.lam.images[g])
    maps["h3_down"] = AlgebraMorphism(big, ctx.TAS, h3, certify=True, name="l(x)0")
    maps["h4_down"] = AlgebraMorphism(big, ctx.TAS, h4, certify=True, name="0(x)lam")
    ctx._lazy["axiom_maps"] = maps
    return maps


def verify_horizontal_axioms(H: AlgebraMorphism, M: PresentedModule) -> AxiomReport:
    ctx = bundle_context(M)
    maps = _ctx_maps(ctx)
    report = AxiomReport()
    TH = tangent_apply_functor(H)
    report.add_morphism_equality(
        "H.1", compose_chain([maps["Tq"], H]), ctx.TAS.i0
    )
    report.add_morphism_equality(
        "H.2", compose_chain([maps["p_S"], H]), ctx.TAS.i1
    )
    report.add_morphism_equality(
        "H.3",
        compose_chain([maps["lift_S"], H]),
        compose_chain([TH, ctx.leibniz_iso, maps["h3_down"]]),
    )
    report.add_morphism_equality(
        "H.4",
        compose_chain([ctx.flip_S, maps["T_lam"], H]),
        compose_chain([TH, ctx.leibniz_iso, maps["h4_down"]]),
    )
    return report


def verify_vertical_axioms(K: AlgebraMorphism, M: PresentedModule) -> AxiomReport:
    ctx = bundle_context(M)
    maps = _ctx_maps(ctx)
    lam = ctx.bundle.lam
    report = AxiomReport()
    TK = tangent_apply_functor(K)
    report.add_morphism_equality("K.1", compose_chain([K, lam]), identity_morphism(ctx.S))
    report.add_morphism_equality(
        "K.2", compose_chain([ctx.bundle.q, K]), compose_chain([ctx.bundle.q, maps["p_S"]])
    )
    lhs34 = compose_chain([lam, K])
    report.add_morphism_equality("K.3", lhs34, compose_chain([TK, maps["lift_S"]]))
    report.add_morphism_equality(
        "K.4", lhs34, compose_chain([TK, ctx.flip_S, maps["T_lam"]])
    )
    return report


def verify_connection_axioms(
    K: AlgebraMorphism, H: AlgebraMorphism, M: PresentedModule
) -> AxiomReport:
    """Full suite: H.1-H.4, K.1-K.4 and the two compatibility equations."""
    ctx = bundle_context(M)
    maps = _ctx_maps(ctx)
    report = AxiomReport()
    report.entries.extend(verify_horizontal_axioms(H, M).entries)
    report.entries.extend(verify_vertical_axioms(K, M).entries)
    # C.1: following K then H is the zero section over the bundle projection.
    rhs = compose_chain([ctx.bundle.z, ctx.bundle.q, ctx.TAS.i1])
    report.add_morphism_equality("C.1", compose_chain([K, H]), rhs)
    # C.2: vertical part plus horizontal part reassemble the identity of T(S).
    module_fibre = set(M.gens) | {ctx.TS.dmap[m] for m in M.gens}
    d_fibre = {ctx.TS.dmap[g] for g in ctx.S.gens}
    vertical = bundle_combine(
        compose_chain([ctx.bundle.lam, K]),
        compose_chain([maps["zero_S"], maps["p_S"]]),
        "plus",
        module_fibre,
    )
    total = bundle_combine(vertical, compose_morphisms(ctx.U, H), "plus", d_fibre)
    report.add_morphism_equality("C.2", total, identity_morphism(ctx.TS))
    return report


# ---------------------------------------------------------------------------
# stock constructions
# ---------------------------------------------------------------------------


def free_canonical_connection(A: PresentedAlgebra, n: int) -> Connection:
    """Gamma = 0 on a rank-n free module; Leibniz gives componentwise d."""
    M = free_module(A, n)
    ctx = bundle_context(M)
    return make_connection(M, {g: ctx.omega_tensor_M.zero() for g in M.gens})


def zero_gamma_connection(M: PresentedModule) -> Connection:
    """Gamma = 0 on any module (certified, so rejected when not admissible)."""
    ctx = bundle_context(M)
    return make_connection(M, {g: ctx.omega_tensor_M.zero() for g in M.gens})


def pullback_connection(nabla: Connection, f: AlgebraMorphism) -> Connection:
    """Transport a connection along f: A -> B to the module B (x)_A M.

    The pullback module keeps M's generator names, with relation coefficients
    pushed through f; Christoffel images map d(x_i) to d(f(x_i)).
    """
    if f.dom is not nabla.base:
        raise ValueError("morphism domain must be the connection's base algebra")
    if not f.certified:
        f.certify()
    M, A, B = nabla.module, nabla.base, f.cod
    pulled = make_module(B, M.gens, [[f(A.element(c)) for c in row] for row in M.relations])
    ctx = bundle_context(pulled)
    omega_B = kahler_module(B)
    target = ctx.omega_tensor_M
    images = {}
    for g in M.gens:
        src = nabla.gamma[g]
        out = target.zero()
        n = M.rank
        for idx, coef in enumerate(src.comps):
            if coef.is_zero():
                continue
            i, l = divmod(idx, n)
            d_image = universal_derivation(B, f(A.gen(A.gens[i])))
            out = out + target.pair(d_image, pulled.gen(M.gens[l])).scaled(f(A.element(coef)))
        images[g] = out
    return make_connection(pulled, images)


def retract_connection(nabla: Connection, s: ModuleMorphism, r: ModuleMorphism) -> Connection:
    """Connection induced on a retract: compose section, nabla, and retraction."""
    M = nabla.module
    Mp = s.dom
    if s.cod is not M or r.dom is not M or r.cod is not Mp:
        raise ValueError("need s: M' -> M and r: M -> M'")
    for g in Mp.gens:
        if r(s(Mp.gen(g))) != Mp.gen(g):
            raise SectionRetractionFailure(f"r(s({g})) != {g}")
    omega = kahler_module(M.base)
    target = tensor_modules(omega, Mp)
    n = M.rank
    images = {}
    for g in Mp.gens:
        full = apply_connection(nabla, s(Mp.gen(g)))
        out = target.zero()
        for idx, coef in enumerate(full.comps):
            if coef.is_zero():
                continue
            i, l = divmod(idx, n)
            out = out + target.pair(omega.gen(omega.gens[i]), r(M.gen(M.gens[l]))).scaled(coef)
        images[g] = out
    return make_connection(Mp, images)


def connection_equal(c1: Connection, c2: Connection) -> bool:
    """Equality of Christoffel data, up to identical module presentations."""
    m1, m2 = c1.module, c2.module
    if m1 is m2:
        return all(c1.gamma[g] == c2.gamma[g] for g in m1.gens)
    if m1.base is not m2.base or m1.gens != m2.gens or m1.relations != m2.relations:
        return False
    return all(c1.gamma[g].comps == c2.gamma[g].comps for g in m1.gens)
