"""Finitely presented modules over a presented algebra.

A module is A^m / N, stored as generator names plus relation vectors over A.
Zero-testing lifts to the underlying polynomial ring: N's rows together with
(ideal Groebner basis) * e_k generate a submodule of k[x]^m whose normal forms
are canonical representatives.  Module elements reduce eagerly on construction
since equality is the hot operation everywhere downstream.

Also here: Kahler differentials with the universal derivation, tensor products
of modules, the wedge square with its alternation map, and plain A-linear
module morphisms (used for section/retraction data).
"""

from __future__ import annotations

import itertools
from typing import Iterable, Mapping, Sequence, Union

from .algebra import AlgebraElement, ElementLike, PresentedAlgebra
from .errors import OwnerMismatch, WellDefinednessFailure
from .groebner import ModuleBasis, Vector, vector_leading
from .poly import Polynomial

VectorLike = Union["ModuleElement", Sequence[ElementLike], Mapping[str, ElementLike]]


class PresentedModule:
    def __init__(
        self,
        base: PresentedAlgebra,
        gens: tuple[str, ...],
        relations: Iterable[Sequence[ElementLike]],
        provenance: str = "presented",
    ):
        if len(set(gens)) != len(gens):
            raise ValueError("duplicate module generator names")
        self.base = base
        self.gens = tuple(gens)
        rels = []
        for rel in relations:
            if len(rel) != len(self.gens):
                raise ValueError("relation vector has wrong length")
            rels.append(tuple(base.element(c).poly for c in rel))
        self.relations: tuple[Vector, ...] = tuple(rels)
        self.provenance = provenance
        self._lifted: ModuleBasis | None = None
        self._memo: dict = {}

    @property
    def rank(self) -> int:
        return len(self.gens)

    # Lifted submodule N + I*e_1 + ... + I*e_m of the free polynomial module;
    # published once, idempotent to recompute.
    @property
    def lifted(self) -> ModuleBasis:
        if self._lifted is None:
            A = self.base
            gens: list[Vector] = [tuple(rel) for rel in self.relations]
            zero = Polynomial.zero(A.field, A.gens)
            for b in A.basis.basis:
                for k in range(self.rank):
                    gens.append(tuple(b if i == k else zero for i in range(self.rank)))
            self._lifted = ModuleBasis(A.field, A.gens, self.rank, gens)
        return self._lifted

    def __repr__(self) -> str:
        return f"<module rank {self.rank} over {self.base!r} ({self.provenance})>"

    # ---------- elements ----------

    def element(self, value: VectorLike) -> "ModuleElement":
        A = self.base
        if isinstance(value, ModuleElement):
            if value.module is not self:
                raise OwnerMismatch("element belongs to a different module")
            return value
        if isinstance(value, Mapping):
            comps = [A.element(value.get(g, 0)).poly for g in self.gens]
        else:
            if len(value) != self.rank:
                raise ValueError("component vector has wrong length")
            comps = [A.element(c).poly for c in value]
        return ModuleElement(self, tuple(comps))

    def gen(self, name: str) -> "ModuleElement":
        i = self.gens.index(name)
        one = Polynomial.const(self.base.field, self.base.gens, 1)
        zero = Polynomial.zero(self.base.field, self.base.gens)
        return ModuleElement(self, tuple(one if j == i else zero for j in range(self.rank)))

    def zero(self) -> "ModuleElement":
        z = Polynomial.zero(self.base.field, self.base.gens)
        return ModuleElement(self, tuple(z for _ in range(self.rank)))


class ModuleElement:
    __slots__ = ("module", "comps")

    def __init__(self, module: PresentedModule, comps: Vector):
        self.module = module
        self.comps = module.lifted.normal_form(comps)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def component(self, gen: str) -> AlgebraElement:
        return AlgebraElement(self.module.base, self.comps[self.module.gens.index(gen)])

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        other = self.module.element(other)
        return ModuleElement(self.module, tuple(a + b for a, b in zip(self.comps, other.comps)))

    def __sub__(self, other: "ModuleElement") -> "ModuleElement":
        other = self.module.element(other)
        return ModuleElement(self.module, tuple(a - b for a, b in zip(self.comps, other.comps)))

    def __neg__(self) -> "ModuleElement":
        return ModuleElement(self.module, tuple(-a for a in self.comps))

    def scaled(self, a: ElementLike) -> "ModuleElement":
        p = self.module.base.element(a).poly
        return ModuleElement(self.module, tuple(p * c for c in self.comps))

    def __mul__(self, a: ElementLike) -> "ModuleElement":
        return self.scaled(a)

    def __rmul__(self, a: ElementLike) -> "ModuleElement":
        return self.scaled(a)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModuleElement):
            return NotImplemented
        if other.module is not self.module:
            raise OwnerMismatch("comparing elements of different modules")
        return self.comps == other.comps

    def __hash__(self):
        return hash((id(self.module), self.comps))

    def render(self) -> str:
        parts: list[str] = []
        for g, c in zip(self.module.gens, self.comps):
            if c.is_zero():
                continue
            body = c.render()
            if len(c.terms) > 1:
                chunk, sign = f"({body})*{g}", "+"
            elif body.startswith("-"):
                chunk, sign = f"{body[1:]}*{g}", "-"
            elif body == "1":
                chunk, sign = g, "+"
            else:
                chunk, sign = f"{body}*{g}", "+"
            if not parts:
                parts.append(chunk if sign == "+" else f"-{chunk}")
            else:
                parts.append(f"{'+' if sign == '+' else '-'} {chunk}")
        return " ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"<mod-elt {self.render()}>"


def element_is_zero(e: ModuleElement) -> bool:
    return e.is_zero()


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def free_module(A: PresentedAlgebra, n: int, names: tuple[str, ...] | None = None) -> PresentedModule:
    if n < 0:
        raise ValueError("rank must be nonnegative")
    gens = names if names is not None else tuple(f"e{i + 1}" for i in range(n))
    if len(gens) != n:
        raise ValueError("need exactly n generator names")
    return PresentedModule(A, gens, [], provenance="free")


def make_module(
    A: PresentedAlgebra, gens: Iterable[str], relations: Iterable[Sequence[ElementLike]] = ()
) -> PresentedModule:
    return PresentedModule(A, tuple(gens), relations, provenance="presented")


def kahler_module(A: PresentedAlgebra) -> PresentedModule:
    """Module of Kahler-style differentials: one d(x) per generator, one
    Jacobian row per relation.  Cached on the algebra."""
    if "kahler" not in A._memo:
        gens = tuple(f"d({x})" for x in A.gens)
        rows = []
        for rel in A.relations:
            rows.append(tuple(rel.partial(x) for x in A.gens))
        M = PresentedModule(A, gens, rows, provenance="kahler")
        M._memo["kahler_of"] = A
        A._memo["kahler"] = M
    return A._memo["kahler"]


def universal_derivation(A: PresentedAlgebra, a: ElementLike) -> ModuleElement:
    """d(a) = sum of partial(a, x_i) d(x_i); R-linear and Leibniz by construction."""
    e = A.element(a)
    omega = kahler_module(A)
    return omega.element(tuple(e.poly.partial(x) for x in A.gens))


class TensorModule(PresentedModule):
    """M (x)_A N on pair generators g@h with relations inherited in each slot."""

    def __init__(self, M: PresentedModule, N: PresentedModule):
        if M.base is not N.base:
            raise ValueError("tensor factors over different base algebras")
        A = M.base
        self.factors = (M, N)
        gens = tuple(f"{g}@{h}" for g in M.gens for h in N.gens)
        zero = Polynomial.zero(A.field, A.gens)
        rows: list[Vector] = []
        for rel in M.relations:
            for j in range(N.rank):
                row = [zero] * (M.rank * N.rank)
                for k in range(M.rank):
                    row[k * N.rank + j] = rel[k]
                rows.append(tuple(row))
        for rel in N.relations:
            for i in range(M.rank):
                row = [zero] * (M.rank * N.rank)
                for l in range(N.rank):
                    row[i * N.rank + l] = rel[l]
                rows.append(tuple(row))
        super().__init__(A, gens, rows, provenance="tensor")

    def pair_index(self, i: int, j: int) -> int:
        return i * self.factors[1].rank + j

    def pair(self, u: VectorLike, v: VectorLike) -> ModuleElement:
        """The simple tensor u (x) v, expanded over pair generators."""
        M, N = self.factors
        u = M.element(u)
        v = N.element(v)
        comps = [Polynomial.zero(self.base.field, self.base.gens)] * self.rank
        for i, cu in enumerate(u.comps):
            if cu.is_zero():
                continue
            for j, cv in enumerate(v.comps):
                if cv.is_zero():
                    continue
                k = self.pair_index(i, j)
                comps[k] = comps[k] + cu * cv
        return ModuleElement(self, tuple(comps))


def tensor_modules(M: PresentedModule, N: PresentedModule) -> TensorModule:
    key = ("tensor", id(N))
    if key not in M._memo:
        M._memo[key] = TensorModule(M, N)
    return M._memo[key]


class WedgeSquare(PresentedModule):
    """Second exterior power on ordered pair generators gi^gj (i < j)."""

    def __init__(self, M: PresentedModule):
        A = M.base
        self.source = M
        pairs = [(i, j) for i in range(M.rank) for j in range(i + 1, M.rank)]
        self.pairs = pairs
        gens = tuple(f"{M.gens[i]}^{M.gens[j]}" for i, j in pairs)
        zero = Polynomial.zero(A.field, A.gens)
        rows: list[Vector] = []
        for rel in M.relations:
            for j in range(M.rank):
                row = [zero] * len(pairs)
                for k in range(M.rank):
                    c = rel[k]
                    if c.is_zero() or k == j:
                        continue
                    if k < j:
                        row[pairs.index((k, j))] = row[pairs.index((k, j))] + c
                    else:
                        row[pairs.index((j, k))] = row[pairs.index((j, k))] - c
                rows.append(tuple(row))
        super().__init__(A, gens, rows, provenance="wedge2")

    def from_tensor(self, e: ModuleElement) -> ModuleElement:
        """Alternation: gi @ gj -> gi^gj, with sign for i > j and zero on the diagonal."""
        T = e.module
        if not isinstance(T, TensorModule) or T.factors != (self.source, self.source):
            raise ValueError("expected an element of the matching tensor square")
        n = self.source.rank
        comps = [Polynomial.zero(self.base.field, self.base.gens)] * len(self.pairs)
        for idx, c in enumerate(e.comps):
            if c.is_zero():
                continue
            i, j = divmod(idx, n)
            if i == j:
                continue
            if i < j:
                k = self.pairs.index((i, j))
                comps[k] = comps[k] + c
            else:
                k = self.pairs.index((j, i))
                comps[k] = comps[k] - c
        return ModuleElement(self, tuple(comps))


def wedge_square(M: PresentedModule) -> WedgeSquare:
    if "wedge2" not in M._memo:
        M._memo["wedge2"] = WedgeSquare(M)
    return M._memo["wedge2"]


def module_standard_monomials(M: PresentedModule, degree_bound: int) -> list[tuple[int, tuple]]:
    """Standard (position, monomial) pairs of the quotient up to a degree.

    These are the monomial module elements not divisible by any leading term
    of the lifted basis: a vector-space basis of the quotient in low degrees,
    used as solver coordinates.
    """
    A = M.base
    leads = [vector_leading(v) for v in M.lifted.basis]
    nvars = len(A.gens)
    out: list[tuple[int, tuple]] = []
    for k in range(M.rank):
        for total in range(degree_bound + 1):
            for combo in itertools.combinations_with_replacement(range(nvars), total):
                exp = [0] * nvars
                for i in combo:
                    exp[i] += 1
                expt = tuple(exp)
                if any(
                    pos == k and all(a <= b for a, b in zip(lead, expt)) for pos, lead in leads
                ):
                    continue
                out.append((k, expt))
    return out


# ---------------------------------------------------------------------------
# module morphisms (A-linear maps given on generators)
# ---------------------------------------------------------------------------


class ModuleMorphism:
    def __init__(
        self,
        dom: PresentedModule,
        cod: PresentedModule,
        images: Mapping[str, VectorLike],
        certify: bool = True,
        name: str = "",
    ):
        if dom.base is not cod.base:
            raise ValueError("module morphism between different base algebras")
        if set(images) != set(dom.gens):
            raise ValueError("need exactly one image per domain generator")
        self.dom = dom
        self.cod = cod
        self.name = name
        self.images = {g: cod.element(v) for g, v in images.items()}
        if certify:
            for rel in dom.relations:
                total = cod.zero()
                for coef, g in zip(rel, dom.gens):
                    total = total + self.images[g].scaled(coef)
                if not total.is_zero():
                    raise WellDefinednessFailure(
                        name or "module morphism",
                        "+".join(c.render() for c in rel),
                        total.render(),
                    )

    def __call__(self, e: VectorLike) -> ModuleElement:
        e = self.dom.element(e)
        out = self.cod.zero()
        for coef, g in zip(e.comps, self.dom.gens):
            if not coef.is_zero():
                out = out + self.images[g].scaled(coef)
        return out
