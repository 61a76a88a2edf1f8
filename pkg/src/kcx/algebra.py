"""Finitely presented commutative algebras, their elements and morphisms.

A `PresentedAlgebra` is k[g1..gn]/I with a cached reduced Groebner basis, so
element equality is canonical normal-form equality.  Morphisms are stored by
raw generator images; applying one substitutes and then reduces in the
codomain.  Certification (all domain relations map to zero) happens eagerly
for user-built morphisms and lazily/never for maps whose well-definedness is
forced by construction.

Generator roles record how a generator arose (plain base, module generator of
a symmetric-algebra bundle, or a first/second-level tangent differential of
one); the tangent machinery relies on them for deterministic naming.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .errors import OwnerMismatch, WellDefinednessFailure
from .fields import Field
from .groebner import IdealBasis
from .parse import poly_normalize
from .poly import Polynomial


@dataclass(frozen=True)
class GenRole:
    kind: str  # base | module | d | dm | dp | dpm | dpd | dpdm
    origin: str  # name of the base/module generator this one differentiates


ElementLike = Union["AlgebraElement", Polynomial, str, int]

# Variable-order ranks for tangent presentations.  Normal forms prefer late
# (grevlex-small) monomials, so pure differential sorts go last: reductions
# then rewrite composite sorts (d of module generators and second-level
# differentials) toward products of plain differentials and module generators.
_ROLE_RANK = {"dpdm": 0, "dpd": 1, "dpm": 2, "dm": 3, "base": 4, "dp": 5, "d": 6, "module": 7}


class PresentedAlgebra:
    def __init__(
        self,
        field: Field,
        gens: tuple[str, ...],
        relations: Iterable[Polynomial],
        provenance: str = "plain",
        roles: Mapping[str, GenRole] | None = None,
        grading: Mapping[str, tuple[int, ...]] | None = None,
        cap: tuple[int, ...] | None = None,
    ):
        if len(set(gens)) != len(gens):
            raise ValueError("duplicate generator names")
        self.field = field
        self.gens = tuple(gens)
        self.relations = tuple(relations)
        for r in self.relations:
            if r.vars != self.gens or r.field != field:
                raise ValueError("relation not over the algebra's generators")
        self.provenance = provenance
        self.roles = dict(roles) if roles else {g: GenRole("base", g) for g in gens}
        if set(self.roles) != set(gens):
            raise ValueError("role table must cover every generator exactly once")
        # Optional N^k-grading by differential sort; with a cap the Groebner
        # basis is truncated to the grades the engine actually reduces.
        self.grading = dict(grading) if grading else None
        self.cap = cap
        self._basis: IdealBasis | None = None
        self._memo: dict = {}  # once-only published derived structures

    # The basis is computed at most once and then published; concurrent
    # readers may race to compute it but always observe a complete value.
    @property
    def basis(self) -> IdealBasis:
        if self._basis is None:
            grading_list = [self.grading[g] for g in self.gens] if self.grading else None
            self._basis = IdealBasis(
                self.field, self.gens, list(self.relations), grading_list, self.cap
            )
        return self._basis

    def __repr__(self) -> str:
        rels = "; ".join(r.render() for r in self.relations) or "0"
        return f"<algebra k[{', '.join(self.gens)}]/({rels}) char {self.field.char}>"

    # ---------- elements ----------

    def element(self, value: ElementLike) -> "AlgebraElement":
        if isinstance(value, AlgebraElement):
            if value.owner is not self:
                raise OwnerMismatch("element belongs to a different algebra")
            return value
        if isinstance(value, Polynomial):
            return AlgebraElement(self, value)
        if isinstance(value, str):
            return AlgebraElement(self, poly_normalize(value, self.field, self.gens))
        return AlgebraElement(self, Polynomial.const(self.field, self.gens, value))

    def gen(self, name: str) -> "AlgebraElement":
        return AlgebraElement(self, Polynomial.variable(self.field, self.gens, name))

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, Polynomial.zero(self.field, self.gens))

    def one(self) -> "AlgebraElement":
        return self.element(1)

    def gens_by_kind(self, *kinds: str) -> tuple[str, ...]:
        return tuple(g for g in self.gens if self.roles[g].kind in kinds)


class AlgebraElement:
    __slots__ = ("owner", "poly")

    def __init__(self, owner: PresentedAlgebra, poly: Polynomial):
        self.owner = owner
        self.poly = owner.basis.normal_form(poly)

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def _coerce(self, other) -> "AlgebraElement":
        return self.owner.element(other)

    def __add__(self, other):
        return AlgebraElement(self.owner, self.poly + self._coerce(other).poly)

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        return AlgebraElement(self.owner, self.poly - self._coerce(other).poly)

    def __rsub__(self, other):
        return AlgebraElement(self.owner, self._coerce(other).poly - self.poly)

    def __mul__(self, other):
        return AlgebraElement(self.owner, self.poly * self._coerce(other).poly)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __neg__(self):
        return AlgebraElement(self.owner, -self.poly)

    def __pow__(self, n: int):
        return AlgebraElement(self.owner, self.poly ** n)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraElement):
            try:
                other = self._coerce(other)
            except Exception:
                return NotImplemented
        if other.owner is not self.owner:
            raise OwnerMismatch("comparing elements of different algebras")
        return self.poly == other.poly

    def __hash__(self):
        return hash((id(self.owner), self.poly))

    def render(self) -> str:
        return self.poly.render()

    def __repr__(self) -> str:
        return f"<elt {self.render()}>"


def make_algebra(field: Field, gens: Iterable[str], relations: Iterable[str] = ()) -> PresentedAlgebra:
    """Build k[gens]/(relations) from expression strings; basis cached lazily."""
    gens = tuple(gens)
    rels = [poly_normalize(r, field, gens) for r in relations]
    return PresentedAlgebra(field, gens, rels)


def element_equal(e1: AlgebraElement, e2: AlgebraElement) -> bool:
    return e1 == e2


# ---------------------------------------------------------------------------
# morphisms
# ---------------------------------------------------------------------------


class AlgebraMorphism:
    """Algebra map determined by raw generator images in the codomain."""

    __slots__ = ("dom", "cod", "images", "certified", "name")

    def __init__(
        self,
        dom: PresentedAlgebra,
        cod: PresentedAlgebra,
        images: Mapping[str, Polynomial],
        certify: bool = True,
        name: str = "",
    ):
        self.dom = dom
        self.cod = cod
        self.name = name
        if set(images) != set(dom.gens):
            missing = set(dom.gens) - set(images)
            raise ValueError(f"missing image for generator(s): {sorted(missing)}")
        imgs = {}
        for g, p in images.items():
            if p.vars != cod.gens or p.field != cod.field:
                raise ValueError(f"image of {g!r} is not in the codomain ring")
            imgs[g] = p
        self.images = imgs
        self.certified = False
        if certify:
            self.certify()

    def certificate(self) -> list[tuple[Polynomial, AlgebraElement]]:
        """Normal forms of all relation images; all zero iff well defined."""
        return [(rel, self.apply_poly(rel)) for rel in self.dom.relations]

    def certify(self) -> "AlgebraMorphism":
        for rel, residue in self.certificate():
            if not residue.is_zero():
                raise WellDefinednessFailure(self.name or "morphism", rel.render(), residue.render())
        self.certified = True
        return self

    def apply_raw(self, poly: Polynomial) -> Polynomial:
        """Substitute generator images; no reduction in the codomain."""
        return poly.substitute(self.images, self.cod.gens)

    def apply_poly(self, poly: Polynomial) -> AlgebraElement:
        return AlgebraElement(self.cod, self.apply_raw(poly))

    def __call__(self, e: ElementLike) -> AlgebraElement:
        e = self.dom.element(e)
        return self.apply_poly(e.poly)

    def image_of(self, gen: str) -> AlgebraElement:
        return AlgebraElement(self.cod, self.images[gen])

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraMorphism):
            return NotImplemented
        if self.dom is not other.dom or self.cod is not other.cod:
            return False
        return all(self.image_of(g) == other.image_of(g) for g in self.dom.gens)

    def __hash__(self):
        return hash((id(self.dom), id(self.cod)))

    def __repr__(self) -> str:
        label = self.name or "morphism"
        return f"<{label}: {len(self.dom.gens)} gens -> {len(self.cod.gens)} gens>"


def make_morphism(
    dom: PresentedAlgebra,
    cod: PresentedAlgebra,
    images: Mapping[str, ElementLike],
    certify: bool = True,
    name: str = "",
) -> AlgebraMorphism:
    """Morphism from generator images (elements, polynomials or expressions)."""
    polys = {g: cod.element(v).poly for g, v in images.items()}
    return AlgebraMorphism(dom, cod, polys, certify=certify, name=name)


def identity_morphism(A: PresentedAlgebra) -> AlgebraMorphism:
    return AlgebraMorphism(
        A, A, {g: Polynomial.variable(A.field, A.gens, g) for g in A.gens}, certify=False, name="id"
    )


def apply_morphism(f: AlgebraMorphism, e: AlgebraElement) -> AlgebraElement:
    if e.owner is not f.dom:
        raise OwnerMismatch("element not owned by the morphism's domain")
    return f(e)


def compose_morphisms(g: AlgebraMorphism, f: AlgebraMorphism) -> AlgebraMorphism:
    """g after f; certificate inherited, images composed by raw substitution."""
    if f.cod is not g.dom:
        raise ValueError("codomain/domain mismatch in composition")
    images = {x: g.apply_raw(p) for x, p in f.images.items()}
    h = AlgebraMorphism(f.dom, g.cod, images, certify=False, name=f"{g.name}.{f.name}")
    h.certified = f.certified and g.certified
    return h


def compose_chain(maps: list[AlgebraMorphism]) -> AlgebraMorphism:
    """Compose left-to-right application order: maps[0] first."""
    out = maps[0]
    for m in maps[1:]:
        out = compose_morphisms(m, out)
    return out


# ---------------------------------------------------------------------------
# tensor product over a base and localization
# ---------------------------------------------------------------------------


class TensorAlgebra(PresentedAlgebra):
    """B1 (x)_A B2 presented on renamed generators with A-images identified."""

    def __init__(
        self, base, left, right, f_left, f_right, gens, relations, roles, rename0, rename1,
        grading=None, cap=None,
    ):
        super().__init__(
            left.field, gens, relations, provenance="tensor", roles=roles, grading=grading, cap=cap
        )
        self.base = base
        self.factors = (left, right)
        self.structural = (f_left, f_right)
        self.rename = (dict(rename0), dict(rename1))
        self.i0 = AlgebraMorphism(
            left, self, {g: Polynomial.variable(self.field, gens, rename0[g]) for g in left.gens},
            certify=False, name="i0",
        )
        self.i1 = AlgebraMorphism(
            right, self, {g: Polynomial.variable(self.field, gens, rename1[g]) for g in right.gens},
            certify=False, name="i1",
        )

    def pair(self, w: ElementLike, v: ElementLike) -> AlgebraElement:
        """The simple tensor w (x) v."""
        return self.i0(self.factors[0].element(w)) * self.i1(self.factors[1].element(v))


def tensor_over_base(
    A: PresentedAlgebra,
    B1: PresentedAlgebra,
    B2: PresentedAlgebra,
    f1: AlgebraMorphism,
    f2: AlgebraMorphism,
    grading: Mapping[str, tuple[int, ...]] | None = None,
    cap: tuple[int, ...] | None = None,
    concat_grading: bool = False,
) -> TensorAlgebra:
    """Pushout presentation of B1 (x)_A B2 along structural maps A -> Bi.

    Generators are the disjoint union (suffixed #0/#1, never user-visible),
    relations are both factors' relations plus the identification of the two
    A-images.  `concat_grading` juxtaposes the factors' sort gradings (sound
    when the structural maps hit only grade-zero generators); callers whose
    structural maps shift sorts pass an explicit grading instead.
    """
    if f1.dom is not A or f2.dom is not A or f1.cod is not B1 or f2.cod is not B2:
        raise ValueError("structural maps must go A -> B1 and A -> B2")
    if B1.field != B2.field:
        raise ValueError("factors over different fields")
    rename0 = {g: f"{g}#0" for g in B1.gens}
    rename1 = {g: f"{g}#1" for g in B2.gens}
    gens = tuple(rename0[g] for g in B1.gens) + tuple(rename1[g] for g in B2.gens)
    if len(set(gens)) != len(gens):
        raise ValueError("generator name collision after renaming")
    roles = {}
    for g in B1.gens:
        r = B1.roles[g]
        roles[rename0[g]] = GenRole(r.kind, f"{r.origin}#0")
    for g in B2.gens:
        r = B2.roles[g]
        roles[rename1[g]] = GenRole(r.kind, f"{r.origin}#1")
    if concat_grading and grading is None:
        k0 = len(next(iter(B1.grading.values()))) if B1.grading else 0
        k1 = len(next(iter(B2.grading.values()))) if B2.grading else 0
        grading = {}
        for g in B1.gens:
            left = B1.grading[g] if B1.grading else ()
            grading[rename0[g]] = left + (0,) * k1
        for g in B2.gens:
            right = B2.grading[g] if B2.grading else ()
            grading[rename1[g]] = (0,) * k0 + right
        cap = (1,) * (k0 + k1) if cap is None else cap
    relations = [rel.change_vars(gens, rename0) for rel in B1.relations]
    relations += [rel.change_vars(gens, rename1) for rel in B2.relations]
    for a in A.gens:
        left = f1(A.gen(a)).poly.change_vars(gens, rename0)
        right = f2(A.gen(a)).poly.change_vars(gens, rename1)
        relations.append(left - right)
    return TensorAlgebra(
        A, B1, B2, f1, f2, gens, relations, roles, rename0, rename1, grading=grading, cap=cap
    )


def localize(A: PresentedAlgebra, u: str) -> PresentedAlgebra:
    """Adjoin a fresh inverse generator for u with relation u*u_inv = 1."""
    if u not in A.gens:
        raise ValueError(f"{u!r} is not a generator")
    inv = f"{u}_inv"
    while inv in A.gens:
        inv += "_"
    gens = A.gens + (inv,)
    relations = [r.change_vars(gens) for r in A.relations]
    relations.append(
        Polynomial.variable(A.field, gens, u) * Polynomial.variable(A.field, gens, inv)
        - Polynomial.const(A.field, gens, 1)
    )
    roles = {g: A.roles[g] for g in A.gens}
    roles[inv] = GenRole("base", inv)
    L = PresentedAlgebra(A.field, gens, relations, provenance="localization", roles=roles)
    L._memo["localization_of"] = (A, u, inv)
    return L
