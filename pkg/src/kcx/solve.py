"""Bounded-degree existence solvers for connections, and two-chart gluing.

Everything here exploits that the Leibniz residues of candidate Christoffel
data are affine-linear in the unknown coefficients: evaluating the residues at
the zero candidate and at each coordinate unit produces an exact linear
system, solved over the coefficient field.  Unknowns are the coefficients of
each generator image over the standard monomials of the target quotient
module, up to the requested degree.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import AlgebraMorphism, PresentedAlgebra, compose_morphisms, localize, make_morphism
from .connections import AxiomCheck, AxiomReport, Connection, apply_connection
from .errors import KcxError
from .fields import Coef
from .linsolve import AffineSolutionSpace, LinearEquation, affine_linear_solve
from .modules import (
    ModuleElement,
    PresentedModule,
    kahler_module,
    module_standard_monomials,
    tensor_modules,
    universal_derivation,
)
from .poly import Polynomial
from .tangent import bundle_context


@dataclass
class ConnectionSpace:
    """Solution space of the well-definedness system for one module."""

    module: PresentedModule
    degree_bound: int
    layout: dict[tuple[str, int, tuple], str]  # (generator, target index, exponent) -> unknown
    space: AffineSolutionSpace

    @property
    def is_empty(self) -> bool:
        return self.space.is_empty

    @property
    def dimension(self) -> int:
        return self.space.dimension

    def coefficients_of(self, nabla: Connection) -> dict[str, Coef] | None:
        """Unknown assignment matching a concrete connection, if representable."""
        values: dict[str, Coef] = {}
        for g in self.module.gens:
            for idx, comp in enumerate(nabla.gamma[g].comps):
                for exp, coef in comp.terms.items():
                    key = (g, idx, exp)
                    if key not in self.layout:
                        return None
                    values[self.layout[key]] = coef
        return values

    def contains_connection(self, nabla: Connection) -> bool:
        values = self.coefficients_of(nabla)
        if values is None:
            return False
        return self.space.contains(values, self.module.base.field)


def _gamma_from_units(M, target, entries: dict[tuple[str, int, tuple], Coef]):
    f = M.base.field
    gamma = {}
    for g in M.gens:
        comps = [Polynomial.zero(f, M.base.gens)] * target.rank
        for (gen, idx, exp), coef in entries.items():
            if gen == g:
                comps[idx] = comps[idx] + Polynomial.monomial(f, M.base.gens, exp, coef)
        gamma[g] = target.element(tuple(comps))
    return gamma


def solve_connection_space(M: PresentedModule, degree_bound: int) -> ConnectionSpace:
    """Exact solution space of Christoffel coefficients up to a degree bound."""
    if degree_bound < 0:
        raise ValueError("degree bound must be nonnegative")
    from .connections import connection_residues

    ctx = bundle_context(M)
    target = ctx.omega_tensor_M
    f = M.base.field
    basis = module_standard_monomials(target, degree_bound)
    layout: dict[tuple[str, int, tuple], str] = {}
    names: list[str] = []
    for g in M.gens:
        for idx, exp in basis:
            name = f"c[{g}][{target.gens[idx]}][{','.join(map(str, exp))}]"
            layout[(g, idx, exp)] = name
            names.append(name)

    zero_gamma = _gamma_from_units(M, target, {})
    base_res = [r for _, r in connection_residues(M, zero_gamma)]
    columns: dict[str, list[ModuleElement]] = {}
    for key, name in layout.items():
        gamma = _gamma_from_units(M, target, {key: f.one()})
        col = [r - r0 for (_, r), r0 in zip(connection_residues(M, gamma), base_res)]
        columns[name] = col

    equations: list[LinearEquation] = []
    for rel_idx in range(len(base_res)):
        support = set()
        for pos, comp in enumerate(base_res[rel_idx].comps):
            support.update((pos, e) for e in comp.terms)
        for col in columns.values():
            for pos, comp in enumerate(col[rel_idx].comps):
                support.update((pos, e) for e in comp.terms)
        for pos, e in support:
            coeffs = {}
            for name, col in columns.items():
                c = col[rel_idx].comps[pos].terms.get(e)
                if c:
                    coeffs[name] = c
            equations.append(
                LinearEquation(coeffs, base_res[rel_idx].comps[pos].terms.get(e, f.zero()))
            )

    return ConnectionSpace(M, degree_bound, layout, affine_linear_solve(equations, tuple(names), f))


# ---------------------------------------------------------------------------
# two-chart gluing
# ---------------------------------------------------------------------------


class SemilinearModuleMap:
    """A map of modules over an algebra morphism f: g(a m) = f(a) g(m)."""

    def __init__(self, f: AlgebraMorphism, dom: PresentedModule, cod: PresentedModule, images):
        if dom.base is not f.dom or cod.base is not f.cod:
            raise ValueError("module bases must match the morphism's ends")
        self.f = f
        self.dom = dom
        self.cod = cod
        self.images = {g: cod.element(v) for g, v in images.items()}
        for row in dom.relations:
            total = cod.zero()
            for coef, g in zip(row, dom.gens):
                total = total + self.images[g].scaled(f(f.dom.element(coef)))
            if not total.is_zero():
                raise KcxError("semilinear map does not respect a module relation")

    def __call__(self, e: ModuleElement) -> ModuleElement:
        e = self.dom.element(e)
        out = self.cod.zero()
        for coef, g in zip(e.comps, self.dom.gens):
            if not coef.is_zero():
                out = out + self.images[g].scaled(self.f(self.f.dom.element(coef)))
        return out


def kahler_map(f: AlgebraMorphism) -> SemilinearModuleMap:
    """Functorial map of differential modules over f: d(v) -> d(f(v))."""
    omega_dom = kahler_module(f.dom)
    omega_cod = kahler_module(f.cod)
    images = {}
    for v, dv in zip(f.dom.gens, omega_dom.gens):
        images[dv] = universal_derivation(f.cod, f(f.dom.gen(v)))
    return SemilinearModuleMap(f, omega_dom, omega_cod, images)


def localized_gamma(
    A: PresentedAlgebra, L: PresentedAlgebra, gamma: dict[str, ModuleElement]
) -> dict[str, ModuleElement]:
    """Extend Christoffel data on Omega(A) to Omega(L) for one adjoined inverse.

    The new generator's image follows from the quotient rule: with u invertible
    and d(u_inv) = -u_inv^2 d(u), the image is 2 u_inv^3 d(u)(x)d(u) minus
    u_inv^2 times the image of d(u).  The lifted row is then satisfied
    identically, so the extension is well defined whenever the input is.
    """
    src = kahler_module(A)
    _, u, inv = L._memo["localization_of"]
    omega_L = kahler_module(L)
    t_L = tensor_modules(omega_L, omega_L)
    n_src = len(A.gens)
    out: dict[str, ModuleElement] = {}

    def push(e: ModuleElement) -> ModuleElement:
        comps = [Polynomial.zero(L.field, L.gens)] * t_L.rank
        for idx, coef in enumerate(e.comps):
            if coef.is_zero():
                continue
            i, l = divmod(idx, n_src)
            comps[i * omega_L.rank + l] = coef.change_vars(L.gens)
        return t_L.element(tuple(comps))

    for v, dv in zip(A.gens, src.gens):
        out[omega_L.gens[A.gens.index(v)]] = push(gamma[dv])
    u_idx = A.gens.index(u)
    du_L = omega_L.gens[u_idx]
    inv_el = L.gen(inv)
    correction = t_L.pair(omega_L.gen(du_L), omega_L.gen(du_L)).scaled(inv_el ** 3 * 2)
    out[omega_L.gens[-1]] = correction - out[du_L].scaled(inv_el ** 2)
    return out


@dataclass
class GlueResult:
    report: AxiomReport | None = None
    space: AffineSolutionSpace | None = None
    layout: dict[tuple[int, str, int, tuple], str] | None = None  # chart, gen, idx, exp

    @property
    def passed(self) -> bool:
        return self.report is not None and self.report.all_pass


def _glue_residues(
    A1, L1, A2, L2, t: AlgebraMorphism, omega_t: SemilinearModuleMap, gamma1, gamma2
) -> list[ModuleElement]:
    """Both composites on each Omega(L1) generator; zero means compatible."""
    g1_loc = localized_gamma(A1, L1, gamma1)
    g2_loc = localized_gamma(A2, L2, gamma2)
    omega_L1, omega_L2 = kahler_module(L1), kahler_module(L2)
    nabla1 = Connection(omega_L1, g1_loc)
    nabla2 = Connection(omega_L2, g2_loc)
    t2 = tensor_modules(omega_L2, omega_L2)
    out = []
    for g in omega_L1.gens:
        first = apply_connection(nabla1, omega_L1.gen(g))
        route1 = t2.zero()
        n = omega_L1.rank
        for idx, coef in enumerate(first.comps):
            if coef.is_zero():
                continue
            i, l = divmod(idx, n)
            li = L1.element(coef)
            route1 = route1 + t2.pair(
                omega_t(omega_L1.gen(omega_L1.gens[i])),
                omega_t(omega_L1.gen(omega_L1.gens[l])),
            ).scaled(t(li))
        route2 = apply_connection(nabla2, omega_t(omega_L1.gen(g)))
        out.append(route1 - route2)
    return out


def glued_connection_check(
    A1: PresentedAlgebra,
    u1: str,
    A2: PresentedAlgebra,
    u2: str,
    transition_images: dict[str, object],
    inverse_images: dict[str, object],
    nabla1: Connection | None = None,
    nabla2: Connection | None = None,
    degree: int = 6,
) -> GlueResult:
    """Check or solve compatibility of chart connections across a transition.

    With concrete connections the two composites are compared per generator;
    with no connections given, Christoffel coefficients on both charts (of
    degree at most `degree`) become unknowns and the combined system of chart
    well-definedness and gluing constraints is solved exactly.
    """
    from .connections import connection_residues

    L1, L2 = localize(A1, u1), localize(A2, u2)
    t = make_morphism(L1, L2, transition_images, name="t")
    tinv = make_morphism(L2, L1, inverse_images, name="t_inv")
    from .algebra import identity_morphism

    if compose_morphisms(tinv, t) != identity_morphism(L1) or compose_morphisms(
        t, tinv
    ) != identity_morphism(L2):
        raise KcxError("transition is not invertible against the supplied inverse")
    omega_t = kahler_map(t)

    if (nabla1 is None) != (nabla2 is None):
        raise KcxError("give connections for both charts or neither")

    if nabla1 is not None:
        residues = _glue_residues(A1, L1, A2, L2, t, omega_t, nabla1.gamma, nabla2.gamma)
        report = AxiomReport()
        for g, r in zip(kahler_module(L1).gens, residues):
            if r.is_zero():
                report.entries.append(AxiomCheck(f"glue[{g}]", "pass"))
            else:
                report.entries.append(AxiomCheck(f"glue[{g}]", "fail", g, r.render(), "0"))
        return GlueResult(report=report)

    f = A1.field
    layout: dict[tuple[int, str, int, tuple], str] = {}
    names: list[str] = []
    charts = []
    for chart_no, A in ((1, A1), (2, A2)):
        omega = kahler_module(A)
        target = tensor_modules(omega, omega)
        basis = module_standard_monomials(target, degree)
        for g in omega.gens:
            for idx, exp in basis:
                name = f"c{chart_no}[{g}][{target.gens[idx]}][{','.join(map(str, exp))}]"
                layout[(chart_no, g, idx, exp)] = name
                names.append(name)
        charts.append((A, omega, target, basis))

    def gammas(entries: dict[tuple[int, str, int, tuple], Coef]):
        out = []
        for chart_no, (A, omega, target, basis) in zip((1, 2), charts):
            sub = {
                (g, idx, exp): c
                for (cn, g, idx, exp), c in entries.items()
                if cn == chart_no
            }
            out.append(_gamma_from_units(omega, target, sub))
        return out

    def all_residues(entries) -> list[ModuleElement]:
        g1, g2 = gammas(entries)
        rows: list[ModuleElement] = []
        rows += [r for _, r in connection_residues(kahler_module(A1), g1)]
        rows += [r for _, r in connection_residues(kahler_module(A2), g2)]
        rows += _glue_residues(A1, L1, A2, L2, t, omega_t, g1, g2)
        return rows

    base = all_residues({})
    columns: dict[str, list[ModuleElement]] = {}
    for key, name in layout.items():
        col = all_residues({key: f.one()})
        columns[name] = [r - r0 for r, r0 in zip(col, base)]

    equations: list[LinearEquation] = []
    for row_idx in range(len(base)):
        support = set()
        for pos, comp in enumerate(base[row_idx].comps):
            support.update((pos, e) for e in comp.terms)
        for col in columns.values():
            for pos, comp in enumerate(col[row_idx].comps):
                support.update((pos, e) for e in comp.terms)
        for pos, e in support:
            coeffs = {}
            for name, col in columns.items():
                c = col[row_idx].comps[pos].terms.get(e)
                if c:
                    coeffs[name] = c
            equations.append(
                LinearEquation(coeffs, base[row_idx].comps[pos].terms.get(e, f.zero()))
            )

    return GlueResult(
        space=affine_linear_solve(equations, tuple(names), f), layout=layout
    )
