import numpy as np
import pytest

from src.codes.bch_codes import (
    build_code,
    code_basis,
    is_codeword,
    low_weight_families,
    minimal_poly,
    poly_divmod,
    poly_eval,
    poly_gcd,
    poly_mul,
    scan_supports,
    support_kernel,
)
from src.utils.errors import PreconditionError


def test_polynomial_helpers(ctx16):
    p = [3, 1]
    r = [7, 0, 1]
    prod = poly_mul(ctx16, p, r)
    quot, rem = poly_divmod(ctx16, prod, r)
    assert quot == p
    assert rem == [0]
    assert poly_gcd(ctx16, prod, p) == [ctx16.div(3, 1), 1]
    with pytest.raises(PreconditionError):
        poly_divmod(ctx16, p, [0])


def test_minimal_polynomials(circle16):
    ctx = circle16.ctx
    assert minimal_poly(0, circle16) == [1, 1]
    for s in range(1, 17):
        poly = minimal_poly(s, circle16)
        assert len(poly) == 3
        assert poly_eval(ctx, poly, circle16.element(s)) == 0
        assert poly_eval(ctx, poly, circle16.element(-s)) == 0
        assert all(ctx.in_subfield(c) for c in poly)


def test_code_parameters_at_q16(workspace):
    code = workspace.code(16)
    assert (code.n, code.dimension, code.min_distance) == (17, 11, 5)
    assert code.kind == "A^2MDS"
    report = code.report()
    assert len(report["generator_poly_logs"]) == 7
    assert report["generator_poly_logs"][-1] == "0"


def test_basis_rows_are_codewords(workspace):
    code = workspace.code(16)
    basis = code_basis(code)
    assert basis.shape == (11, 17)
    assert all(is_codeword(code, row) for row in basis)
    bad = basis[0].copy()
    bad[0] ^= 1
    assert not is_codeword(code, bad)


def test_support_kernel_on_known_support(workspace, circle16):
    steiner = workspace.blocks(16, "plain:5,2")
    hit, dims = support_kernel(circle16, steiner.blocks[:50])
    assert hit.all()
    assert (dims == 1).all()
    hit, _ = support_kernel(circle16, np.array([[0, 1, 2, 3]]))
    assert not hit[0]


@pytest.mark.parametrize("k", [5, 6, 7])
def test_low_weight_supports_match_block_sets(workspace, k):
    scan = workspace.supports(16, k)
    family = low_weight_families(16)[k]
    assert scan.blocks.same_blocks(workspace.blocks(16, family))
    if k == 5:
        assert scan.kernel_dims == {1: 68}


def test_support_scan_rejects_large_k(workspace):
    with pytest.raises(PreconditionError):
        scan_supports(workspace.code(16), 8)


@pytest.mark.slow
def test_q32_code_is_nmds(workspace):
    code = workspace.code(32)
    assert (code.n, code.dimension, code.min_distance, code.kind) == (33, 27, 6, "NMDS")
    scan = workspace.supports(32, 6)
    assert scan.blocks.same_blocks(workspace.blocks(32, "plain:6,3"))
    assert scan.kernel_dims == {1: 32736}


@pytest.mark.slow
def test_q32_weight7_supports_are_the_u73_complement(workspace):
    scan = workspace.supports(32, 7, count_only=True)
    assert scan.count == 3388176


def test_build_code_without_distance():
    code = build_code(16, establish_distance=False)
    assert code.min_distance is None
    assert code.kind == "unknown"
