import numpy as np
import pytest

from src.algebra.finite_field import PRIMITIVE_POLYS, build_field, build_unit_circle, poly_to_str
from src.utils.errors import FieldConstructionError, FieldDivisionError, PreconditionError


@pytest.mark.parametrize("m", sorted(PRIMITIVE_POLYS))
def test_tables_are_consistent(m):
    ctx = build_field(m)
    assert ctx.q == 1 << m
    nonzero = np.arange(1, ctx.order)
    assert np.array_equal(ctx.exp[ctx.log[nonzero]], nonzero)
    assert len(set(ctx.exp[: ctx.group_order].tolist())) == ctx.group_order


def test_poly_to_str():
    assert poly_to_str(0x11D) == "x^8 + x^4 + x^3 + x^2 + 1"
    assert poly_to_str(0x409) == "x^10 + x^3 + 1"


def test_rejects_bad_polynomials():
    with pytest.raises(FieldConstructionError):
        build_field(4, 0x11B)  # irreducible, not primitive
    with pytest.raises(FieldConstructionError):
        build_field(4, 0x409)
    with pytest.raises(FieldConstructionError):
        build_field(3)


def test_scalar_arithmetic(ctx16):
    a, b = 0x53, 0xCA
    assert ctx16.mul(a, ctx16.inv(a)) == 1
    assert ctx16.div(ctx16.mul(a, b), b) == a
    assert ctx16.arith(a, b, "add") == a ^ b
    assert ctx16.arith(a, 3, "pow_k") == ctx16.mul(a, ctx16.mul(a, a))
    assert ctx16.power(a, ctx16.group_order) == 1
    with pytest.raises(PreconditionError):
        ctx16.arith(a, b, "sub")


def test_division_by_zero(ctx16):
    with pytest.raises(FieldDivisionError):
        ctx16.div(5, 0)
    with pytest.raises(ZeroDivisionError):
        ctx16.inv(0)
    with pytest.raises(FieldDivisionError):
        ctx16.inv_arr(np.array([1, 0]))


def test_subfield_trace_and_sqrt(ctx16):
    xs = ctx16.elements()
    traces = ctx16.trace_arr(xs)
    assert all(ctx16.in_subfield(int(t)) for t in traces)
    assert sum(ctx16.in_subfield(int(x)) for x in xs) == ctx16.q
    for x in (0, 1, 7, 200):
        r = ctx16.sqrt(x)
        assert ctx16.mul(r, r) == x


def test_vectorized_matches_scalar(ctx32):
    rng = np.random.default_rng(3)
    a = rng.integers(0, ctx32.order, 500)
    b = rng.integers(0, ctx32.order, 500)
    assert np.array_equal(ctx32.mul_arr(a, b), [ctx32.mul(int(x), int(y)) for x, y in zip(a, b)])
    assert np.array_equal(ctx32.pow_arr(a, 5), [ctx32.power(int(x), 5) for x in a])


@pytest.mark.parametrize("q_fixture", ["circle16", "circle32"])
def test_unit_circle(q_fixture, request):
    circle = request.getfixturevalue(q_fixture)
    ctx = circle.ctx
    q = ctx.q
    assert circle.size == q + 1
    assert np.all(ctx.pow_arr(circle.elements, q + 1) == 1)
    assert circle.element(1) == circle.beta
    assert ctx.frobenius(circle.beta) == ctx.inv(circle.beta)
    assert circle.index(circle.element(5)) == 5
    assert np.array_equal(ctx.exp[circle.logs], circle.elements)


def test_index_rejects_points_off_the_circle(circle16):
    assert not circle16.contains(0)
    with pytest.raises(PreconditionError):
        circle16.index(0)


def test_circle_is_rebuilt_identically(ctx16, circle16):
    again = build_unit_circle(ctx16)
    assert np.array_equal(again.elements, circle16.elements)
