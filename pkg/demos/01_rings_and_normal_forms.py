"""Exact polynomial arithmetic and canonical forms in quotient rings.

Everything downstream rests on one primitive: deciding whether an element of
k[x1..xn]/I is zero.  This demo builds a few quotients and shows the canonical
representatives at work.
"""

from kcx import GF, QQ, kahler_module, localize, make_algebra, poly_normalize

# Expressions expand to a canonical sparse form.
p = poly_normalize("(x + y)^2 - (x - y)^2", QQ, ("x", "y"))
print("(x+y)^2 - (x-y)^2 =", p.render())

# Over GF(2) signs collapse.
q = poly_normalize("x^2 + y^2 - 1", GF(2), ("x", "y"))
print("over GF(2):", q.render())

# The unit circle: x^2 + y^2 is literally 1 in the coordinate ring.
circle = make_algebra(QQ, ("x", "y"), ["x^2 + y^2 - 1"])
print("x^2 + y^2 == 1 in the circle ring:", circle.element("x^2 + y^2") == circle.one())

# A square-zero point kills every higher power.
fat = make_algebra(QQ, ("x",), ["x^2"])
print("x^3 in k[x]/(x^2):", fat.element("x^3").render())

# Localization adjoins an inverse; u * u_inv normalizes to 1.
line = make_algebra(QQ, ("x",))
loc = localize(line, "x")
print("x * x_inv in the localization:", loc.element("x*x_inv").render())

# The differentials module of the circle knows its defining relation.
omega = kahler_module(circle)
row = omega.element(["2*x", "2*y"])
print("2x d(x) + 2y d(y) vanishes in Omega(circle):", row.is_zero())
print("d(x) alone does not:", omega.gen("d(x)").render())
