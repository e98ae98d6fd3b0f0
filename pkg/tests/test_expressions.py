import numpy as np
import pytest

from src.designs.expressions import parse_expression
from src.utils.errors import UnsupportedFamilyError


def test_expands_products_mod_2():
    expr = parse_expression("(s4_1 + s4_2)^2")
    # cross term 2 s1 s2 vanishes
    assert expr.k == 4
    assert sorted(expr.terms) == [((0, 0, 2, 0, 0), ()), ((0, 2, 0, 0, 0), ())]
    assert expr.degree_needed() == 2


def test_integer_constants_reduce_mod_2():
    assert parse_expression("2", k=5).terms == ()
    assert parse_expression("3", k=5).terms == (((0, 0, 0, 0, 0, 0), ()),)


def test_evaluate_against_scalar_arithmetic(ctx16):
    expr = parse_expression("s4_2^2 + alpha*s4_1*s4_3")
    sig = np.array([[1, 7, 19, 33, 101]], dtype=np.int64)
    expected = ctx16.mul(19, 19) ^ ctx16.mul(ctx16.alpha, ctx16.mul(7, 33))
    assert int(expr.evaluate(ctx16, sig)[0]) == expected


@pytest.mark.parametrize("text", ["s4_1 + s5_2", "s4_5", "s4_1 +", "s4_1 $ 2", "(s4_1"])
def test_rejects_bad_expressions(text):
    with pytest.raises(UnsupportedFamilyError):
        parse_expression(text)


def test_explicit_k_must_agree():
    with pytest.raises(UnsupportedFamilyError):
        parse_expression("s4_1", k=5)
    assert parse_expression("1 + alpha", k=6).k == 6
