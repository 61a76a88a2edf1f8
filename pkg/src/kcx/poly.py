"""Sparse multivariate polynomials with exact coefficients.

A polynomial is a map from exponent tuples to nonzero coefficients, together
with its ambient ordered variable list and coefficient field:

    x^2*y + 3  over vars ("x", "y")  ->  {(2, 1): Fraction(1), (0, 0): Fraction(3)}

Zero-coefficient terms are never stored, so two polynomials over the same
variable list are equal iff their term dicts are equal.  The canonical term
order everywhere is graded reverse lexicographic (grevlex) with respect to the
declared variable order.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

from .fields import Coef, Field

Exponent = tuple[int, ...]


def grevlex_key(exp: Exponent):
    """Sort key: larger key = larger monomial in grevlex."""
    return (sum(exp), tuple(-e for e in reversed(exp)))


def exp_mul(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def exp_divides(a: Exponent, b: Exponent) -> bool:
    """True iff monomial a divides monomial b."""
    return all(x <= y for x, y in zip(a, b))


def exp_div(a: Exponent, b: Exponent) -> Exponent:
    """Exponent of a/b; caller guarantees divisibility."""
    return tuple(x - y for x, y in zip(a, b))


def exp_lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


class Polynomial:
    __slots__ = ("field", "vars", "terms")

    def __init__(self, field: Field, variables: tuple[str, ...], terms: Mapping[Exponent, Coef]):
        self.field = field
        self.vars = variables
        self.terms: dict[Exponent, Coef] = {e: c for e, c in terms.items() if c}

    # ---------- constructors ----------

    @classmethod
    def zero(cls, field: Field, variables: tuple[str, ...]) -> "Polynomial":
        return cls(field, variables, {})

    @classmethod
    def const(cls, field: Field, variables: tuple[str, ...], value) -> "Polynomial":
        c = field.of(value)
        return cls(field, variables, {(0,) * len(variables): c} if c else {})

    @classmethod
    def variable(cls, field: Field, variables: tuple[str, ...], name: str) -> "Polynomial":
        i = variables.index(name)
        exp = tuple(1 if j == i else 0 for j in range(len(variables)))
        return cls(field, variables, {exp: field.one()})

    @classmethod
    def monomial(cls, field: Field, variables: tuple[str, ...], exp: Exponent, coef) -> "Polynomial":
        return cls(field, variables, {exp: field.of(coef)})

    # ---------- basic queries ----------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Coef:
        """Coefficient of the constant monomial."""
        return self.terms.get((0,) * len(self.vars), self.field.zero())

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, indices: Iterable[int]) -> int:
        idx = tuple(indices)
        return max((sum(e[i] for i in idx) for e in self.terms), default=0)

    def leading_exponent(self) -> Exponent:
        return max(self.terms, key=grevlex_key)

    def leading_coefficient(self) -> Coef:
        return self.terms[self.leading_exponent()]

    def sorted_exponents(self) -> list[Exponent]:
        return sorted(self.terms, key=grevlex_key, reverse=True)

    def __iter__(self) -> Iterator[tuple[Exponent, Coef]]:
        return iter(self.terms.items())

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and other.field == self.field
            and other.vars == self.vars
            and other.terms == self.terms
        )

    def __hash__(self) -> int:
        return hash((self.field, self.vars, tuple(sorted(self.terms.items()))))

    # ---------- arithmetic ----------

    def _check(self, other: "Polynomial"):
        if self.field != other.field or self.vars != other.vars:
            raise ValueError("polynomials live in different rings")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        f = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = f.add(out.get(e, f.zero()), c)
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial(f, self.vars, out)

    def __neg__(self) -> "Polynomial":
        f = self.field
        return Polynomial(f, self.vars, {e: f.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        f = self.field
        out: dict[Exponent, Coef] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = exp_mul(e1, e2)
                s = f.add(out.get(e, f.zero()), f.mul(c1, c2))
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Polynomial(f, self.vars, out)

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative exponent")
        result = Polynomial.const(self.field, self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        f = self.field
        c = f.of(c)
        return Polynomial(f, self.vars, {e: f.mul(v, c) for e, v in self.terms.items()})

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(self.field.inv(self.leading_coefficient()))

    def mul_monomial(self, exp: Exponent, coef: Coef) -> "Polynomial":
        f = self.field
        return Polynomial(f, self.vars, {exp_mul(e, exp): f.mul(c, coef) for e, c in self.terms.items()})

    # ---------- calculus and substitution ----------

    def partial(self, name: str) -> "Polynomial":
        """Formal partial derivative; satisfies the Leibniz rule exactly."""
        i = self.vars.index(name)
        f = self.field
        out: dict[Exponent, Coef] = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            d = f.mul(c, f.of(e[i]))
            if not d:
                continue
            e2 = tuple(v - 1 if j == i else v for j, v in enumerate(e))
            s = f.add(out.get(e2, f.zero()), d)
            if s:
                out[e2] = s
            else:
                out.pop(e2, None)
        return Polynomial(f, self.vars, out)

    def substitute(self, images: Mapping[str, "Polynomial"], target_vars: tuple[str, ...]) -> "Polynomial":
        """Ring-homomorphic substitution into the ring on `target_vars`.

        Every variable of self that actually occurs must have an image; images
        must all live in the target ring.
        """
        f = self.field
        cache: dict[tuple[int, int], Polynomial] = {}

        def power(i: int, n: int) -> Polynomial:
            key = (i, n)
            if key not in cache:
                cache[key] = images[self.vars[i]] ** n
            return cache[key]

        out = Polynomial.zero(f, target_vars)
        for e, c in self.terms.items():
            term = Polynomial.const(f, target_vars, c)
            for i, n in enumerate(e):
                if n:
                    if self.vars[i] not in images:
                        raise KeyError(f"no image for variable {self.vars[i]!r}")
                    term = term * power(i, n)
            out = out + term
        return out

    def change_vars(self, target_vars: tuple[str, ...], rename: Mapping[str, str] | None = None) -> "Polynomial":
        """Re-express over a different variable list (by name, optionally renamed).

        Every occurring variable must map to a distinct target variable; this is
        a monomial-to-monomial relabeling, much cheaper than `substitute`.
        """
        pos: dict[int, int] = {}
        for i, v in enumerate(self.vars):
            w = rename.get(v, v) if rename else v
            if w in target_vars:
                pos[i] = target_vars.index(w)
        n = len(target_vars)
        out: dict[Exponent, Coef] = {}
        for e, c in self.terms.items():
            new = [0] * n
            for i, v in enumerate(e):
                if v:
                    if i not in pos:
                        raise KeyError(f"variable {self.vars[i]!r} missing from target ring")
                    new[pos[i]] = v
            out[tuple(new)] = c
        return Polynomial(self.field, target_vars, out)

    # ---------- rendering ----------

    def render(self) -> str:
        """Canonical human/machine form, grevlex-descending; reparses exactly."""
        if not self.terms:
            return "0"
        f = self.field
        parts: list[str] = []
        for e in self.sorted_exponents():
            c = self.terms[e]
            factors = []
            for name, n in zip(self.vars, e):
                if n == 1:
                    factors.append(name)
                elif n > 1:
                    factors.append(f"{name}^{n}")
            negative = (c < 0) if f.char == 0 else False
            mag = -c if negative else c
            coef_str = f.render(mag)
            if factors and coef_str == "1":
                body = "*".join(factors)
            elif factors:
                body = coef_str + "*" + "*".join(factors)
            else:
                body = coef_str
            if not parts:
                parts.append(("-" if negative else "") + body)
            else:
                parts.append(("- " if negative else "+ ") + body)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"<poly {self.render()}>"


def poly_substitute(
    p: Polynomial, images: Mapping[str, Polynomial], target_vars: tuple[str, ...]
) -> Polynomial:
    """Function form of `Polynomial.substitute`."""
    return p.substitute(images, target_vars)


def formal_partial(p: Polynomial, name: str) -> Polynomial:
    """Function form of `Polynomial.partial`."""
    return p.partial(name)
