"""Connections on the circle: what fails, what works, and where it comes from.

A connection on a presented module must respect the relations through the
Leibniz rule.  On the circle's differentials the zero choice fails with an
explicit residue; the canonical choice works, and it is not ad hoc: it is the
retract of the componentwise-derivative connection on the free cover.
"""

from kcx import (
    ModuleMorphism,
    WellDefinednessFailure,
    apply_connection,
    connection_equal,
    free_module,
    kahler_module,
    make_algebra,
    make_connection,
    retract_connection,
    QQ,
)
from kcx.gallery import circle_canonical_connection

circle = make_algebra(QQ, ("x", "y"), ["x^2 + y^2 - 1"])
omega = kahler_module(circle)

# The naive zero data is not a connection here:
try:
    make_connection(omega, {"d(x)": ["0", "0", "0", "0"], "d(y)": ["0", "0", "0", "0"]})
except WellDefinednessFailure as exc:
    print("zero data rejected; residue:", exc.residue)

# The canonical choice certifies.
nabla = circle_canonical_connection(circle)
print("canonical image of d(x):", nabla.gamma["d(x)"].render())

# Leibniz in action on a non-generator element:
value = apply_connection(nabla, omega.element(["y", "0"]))
print("nabla(y d(x)) =", value.render())

# Where the canonical connection comes from: a section of the free cover.
free2 = free_module(circle, 2)
section = ModuleMorphism(
    omega,
    free2,
    {"d(x)": free2.element(["y^2", "-x*y"]), "d(y)": free2.element(["-x*y", "x^2"])},
)
quotient = ModuleMorphism(
    free2, omega, {"e1": omega.gen("d(x)"), "e2": omega.gen("d(y)")}
)
base = make_connection(free2, {"e1": [0] * 4, "e2": [0] * 4})
derived = retract_connection(base, section, quotient)
print("retract reproduces the canonical connection:", connection_equal(derived, nabla))
