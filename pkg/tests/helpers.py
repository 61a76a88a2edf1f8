"""Shared builders for the worked connection examples used across tests.

Thin wrappers over the library's gallery constructors, so tests exercise the
same objects the CLI gallery runs, but on the session-scoped fixtures.
"""

from __future__ import annotations

import random

from kcx import gallery
from kcx.connections import Connection, make_connection
from kcx.modules import kahler_module
from kcx.poly import Polynomial
from kcx.tangent import bundle_context


def circle_canonical(circle) -> Connection:
    return gallery.circle_canonical_connection(circle)


def plane_zero(plane) -> Connection:
    return gallery.plane_zero_connection(plane)


def plane_twisted(plane) -> Connection:
    return gallery.plane_twisted_connection(plane)


def plane_antisymmetric(plane) -> Connection:
    return gallery.plane_antisymmetric_connection(plane)


def sphere_canonical(sphere2) -> Connection:
    return gallery.sphere_canonical_connection(sphere2)


def elliptic_connection(elliptic) -> Connection:
    return gallery.elliptic_connection(elliptic)


def free_canonical_connection_on(M) -> Connection:
    t = bundle_context(M).omega_tensor_M
    return make_connection(M, {g: t.zero() for g in M.gens})


def random_plane_connection(plane, rng: random.Random, max_degree: int = 2) -> Connection:
    omega = kahler_module(plane)
    omega_tensor = bundle_context(omega).omega_tensor_M

    def rand_poly():
        p = Polynomial.zero(plane.field, plane.gens)
        for _ in range(3):
            exp = (rng.randint(0, max_degree), rng.randint(0, max_degree))
            if sum(exp) > max_degree:
                continue
            p = p + Polynomial.monomial(plane.field, plane.gens, exp, rng.randint(-3, 3))
        return p

    images = {g: omega_tensor.element([rand_poly() for _ in range(4)]) for g in omega.gens}
    return make_connection(omega, images)
