import pytest

from kcx.algebra import compose_morphisms, identity_morphism, localize, make_algebra, make_morphism
from kcx.errors import BaseMismatch, BracketingConditionFailure
from kcx.fields import QQ
from kcx.modules import free_module, kahler_module, make_module
from kcx.tangent import (
    affine_flip,
    affine_swap,
    bracketing,
    bundle_combine,
    bundle_context,
    sym_algebra_bundle,
    tangent_algebra,
    tangent_apply_functor,
    tangent_structure_maps,
    u_map,
)


def test_tangent_plane_free(plane):
    T = tangent_algebra(plane)
    assert set(T.gens) == {"x1", "x2", "d_x1", "d_x2"}
    assert T.relations == ()


def test_tangent_circle_relations(circle):
    T = tangent_algebra(circle)
    assert T.element("x^2 + y^2 - 1").is_zero()
    assert T.element("2*x*d_x + 2*y*d_y").is_zero()
    assert not T.element("d_x").is_zero()


def test_double_tangent_roles(circle):
    T2 = tangent_algebra(tangent_algebra(circle))
    kinds = {T2.roles[g].kind for g in T2.gens}
    assert kinds == {"base", "d", "dp", "dpd"}
    assert "dpd_x" in T2.gens and "dp_x" in T2.gens


def test_structure_map_values(plane):
    maps = tangent_structure_maps(plane)
    T, T2 = maps.TA, maps.TTA
    assert maps.lift(T2.gen("dpd_x1")) == T.gen("d_x1")
    assert maps.lift(T2.gen("d_x1")).is_zero()
    assert maps.lift(T2.gen("dp_x1")).is_zero()
    assert maps.flip(T2.gen("d_x1")) == T2.gen("dp_x1")
    assert maps.flip(T2.gen("dpd_x1")) == T2.gen("dpd_x1")


def test_flip_is_involution(circle):
    maps = tangent_structure_maps(circle)
    assert compose_morphisms(maps.flip, maps.flip) == identity_morphism(maps.TTA)


def test_projection_zero_identity(circle):
    maps = tangent_structure_maps(circle)
    assert compose_morphisms(maps.zero, maps.p) == identity_morphism(circle)


def test_plus_and_tau_certified(circle):
    maps = tangent_structure_maps(circle)
    assert maps.plus.certified and maps.tau.certified and maps.minus.certified
    # tau swaps the two copies
    d0 = maps.T2.i0(maps.TA.gen("d_x"))
    d1 = maps.T2.i1(maps.TA.gen("d_x"))
    assert maps.tau(d0) == d1


def test_structure_maps_certified_on_gallery(plane, circle, fat_point, elliptic, sphere2):
    for A in (plane, circle, fat_point, elliptic, sphere2):
        maps = tangent_structure_maps(A)
        for m in (maps.p, maps.zero, maps.plus, maps.minus, maps.lift, maps.flip, maps.tau):
            assert m.certified


def test_sym_bundle_basics(circle):
    omega = kahler_module(circle)
    b = sym_algebra_bundle(circle, omega)
    row = b.S.gen("x") * b.S.gen("d(x)") * 2 + b.S.gen("y") * b.S.gen("d(y)") * 2
    assert row.is_zero()
    assert b.S.module_element(omega.element(["2*x", "2*y"])).is_zero()
    assert b.z(b.S.gen("d(x)")).is_zero()
    assert b.iota(b.S.gen("d(x)")) == -b.S.gen("d(x)")
    assert b.q(circle.gen("x")) == b.S.gen("x")
    for m in (b.q, b.z, b.iota, b.sigma, b.lam):
        assert m.certified


def test_sym_bundle_zero_module(circle):
    zero_mod = free_module(circle, 0)
    b = sym_algebra_bundle(circle, zero_mod)
    assert b.S.gens == circle.gens


def test_lambda_values_and_lift_embedding(circle):
    omega = kahler_module(circle)
    b = sym_algebra_bundle(circle, omega)
    TS = b.TS
    assert b.lam(TS.gen("d_d(x)")) == b.S.gen("d(x)")
    assert b.lam(TS.gen("d_x")).is_zero()
    assert b.lam(TS.gen("d(x)")).is_zero()
    # The composite m -> lam(d(m)) is the identity embedding of the module.
    for m in omega.gens:
        assert b.lam(TS.d(b.S.gen(m))) == b.S.gen(m)


def test_u_map_values(circle):
    omega = kahler_module(circle)
    ctx = bundle_context(omega)
    U = u_map(circle, omega)
    T = ctx.TAS
    d_a = ctx.TA.gen("d_x")
    m = ctx.S.gen("d(y)")
    assert U(T.pair(d_a, 1)) == ctx.TS.gen("d_x")
    assert U(T.pair(1, m)) == ctx.TS.gen("d(y)")
    assert U(T.pair(d_a, m)) == ctx.TS.gen("d(y)") * ctx.TS.gen("d_x")


def test_bracketing_accepts_lambda_like(circle):
    omega = kahler_module(circle)
    b = sym_algebra_bundle(circle, omega)
    lam_bracket = bracketing(b, b.lam)
    # {lambda}(m) = lambda(d(m)) = m
    for m in omega.gens:
        assert lam_bracket(b.S.gen(m)) == b.S.gen(m)


def test_bracketing_rejects_identity(circle):
    omega = kahler_module(circle)
    b = sym_algebra_bundle(circle, omega)
    with pytest.raises(BracketingConditionFailure):
        bracketing(b, identity_morphism(b.TS))


def test_bundle_combine(circle):
    omega = kahler_module(circle)
    b = sym_algebra_bundle(circle, omega)
    fibre = set(omega.gens)
    z_like = bundle_combine(identity_morphism(b.S), identity_morphism(b.S), "minus", fibre)
    for m in omega.gens:
        assert z_like(b.S.gen(m)).is_zero()
    assert z_like(b.S.gen("x")) == b.S.gen("x")
    # plus recovers doubling on module generators
    dbl = bundle_combine(identity_morphism(b.S), identity_morphism(b.S), "plus", fibre)
    assert dbl(b.S.gen("d(x)")) == b.S.gen("d(x)") * 2
    # disagreeing on a base generator is an error
    sq = make_morphism(b.S, b.S, {g: b.S.gen(g) * b.S.gen(g) for g in b.S.gens}, certify=False)
    with pytest.raises(BaseMismatch):
        bundle_combine(identity_morphism(b.S), sq, "minus", fibre)


def test_tangent_functor_identity_and_transition(circle):
    T_id = tangent_apply_functor(identity_morphism(circle))
    assert T_id == identity_morphism(tangent_algebra(circle))

    line1 = make_algebra(QQ, ("x",))
    line2 = make_algebra(QQ, ("y",))
    L1, L2 = localize(line1, "x"), localize(line2, "y")
    t = make_morphism(L1, L2, {"x": "y_inv", "x_inv": "y"}, name="t")
    Tt = tangent_apply_functor(t, certify=True)
    TL2 = tangent_algebra(L2)
    assert Tt(tangent_algebra(L1).gen("d_x")) == TL2.element("-y_inv^2*d_y")


def test_tangent_functor_composition(circle):
    f = make_morphism(circle, circle, {"x": "y", "y": "x"})
    g = make_morphism(circle, circle, {"x": "-x", "y": "-y"})
    lhs = tangent_apply_functor(compose_morphisms(g, f))
    rhs = compose_morphisms(tangent_apply_functor(g), tangent_apply_functor(f))
    assert lhs == rhs


def test_affine_flip_and_swap_certified(circle):
    omega = kahler_module(circle)
    ctx = bundle_context(omega)
    c = affine_flip(ctx)
    assert c(ctx.TS.gen("d(x)")) == ctx.TS.gen("d_x")
    assert compose_morphisms(c, c) == identity_morphism(ctx.TS)
    tau = affine_swap(ctx)
    assert tau(ctx.TAS.pair(ctx.TA.gen("d_x"), 1)) == ctx.TAS.pair(1, ctx.S.gen("d(x)"))
    assert compose_morphisms(tau, tau) == identity_morphism(ctx.TAS)


def test_generic_flip_on_bundle_double_tangent(circle):
    omega = kahler_module(circle)
    ctx = bundle_context(omega)
    flip = ctx.flip_S
    T2S = ctx.T2S
    assert flip.certified
    assert compose_morphisms(flip, flip) == identity_morphism(T2S)


def test_leibniz_iso_certifies_on_small_cases(plane, circle):
    for A in (plane, circle):
        ctx = bundle_context(kahler_module(A))
        iso = ctx.leibniz_iso
        iso.certify()
        assert iso.certified


def test_dual_numbers_vs_module_presentation(fat_point):
    # S over an explicitly presented module matches S over the kahler module.
    omega = kahler_module(fat_point)
    explicit = make_module(fat_point, ("d(x)",), [["2*x"]])
    b1 = sym_algebra_bundle(fat_point, omega)
    b2 = sym_algebra_bundle(fat_point, explicit)
    assert b1.S.gens == b2.S.gens
    assert b1.S.relations == b2.S.relations
