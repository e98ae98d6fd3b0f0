from fractions import Fraction
from math import comb

import pytest
from pydantic import ValidationError

from src.designs.designs import (
    Design,
    DesignVerdict,
    all_subsets_design,
    block_count,
    claimed_lambda,
    complementary,
    complementary_lambda,
    intersections_of_size,
    lambda_s,
    max_pairwise_intersection,
    spot_check_lower_strengths,
    supplementary,
    supplementary_lambda,
    verify_t_design,
)
from src.designs.esp_blocks import BlockSet, esp_rows
from src.utils.errors import PreconditionError

Q16_DESIGNS = [
    ("plain:5,2", 1, 68),
    ("u:4,2", 2, None),
    ("bbar:5,3", 61, None),
    ("b:6,2", 24, None),
    ("zero63", 24, None),
    ("plain:6,3", 24, None),
    ("u:7,3", 231, None),
    ("zero73", 231, 4488),
]


@pytest.mark.parametrize("family, lam, count", Q16_DESIGNS)
def test_even_m_designs(workspace, family, lam, count):
    d = workspace.design(16, family)
    assert claimed_lambda(family, 16) == (3, lam)
    verdict = verify_t_design(d, 3)
    assert verdict.lambda_ == lam
    assert d.num_blocks == block_count(17, d.k, 3, lam)
    if count is not None:
        assert d.num_blocks == count
    assert all(spot_check_lower_strengths(d, 3, lam).values())


def test_complement_of_u73_at_q16(workspace):
    d = complementary(workspace.design(16, "u:7,3"))
    assert d.blocks.family == "comp(u:7,3)"
    assert verify_t_design(d, 3).lambda_ == comb(14, 4) - 231 == 770
    assert complementary(d).blocks.family == "u:7,3"


def test_residual63_is_empty_design(workspace):
    verdict = verify_t_design(workspace.design(16, "residual63"), 3)
    assert verdict.empty
    assert verdict.lambda_ == 0


def test_witness_for_non_design():
    d = Design(17, 2, BlockSet(16, 2, "two", [[0, 1], [0, 2]]))
    verdict = verify_t_design(d, 1)
    assert not verdict.is_design
    assert verdict.witness == [{"subset": [0], "count": 2}, {"subset": [1], "count": 1}]
    assert "witness" in verdict.to_report()


def test_complete_design_flag():
    verdict = verify_t_design(all_subsets_design(6, 3), 2)
    assert verdict.complete
    assert verdict.lambda_ == 4
    assert verdict.to_report()["complete"] is True


def test_verdict_requires_lambda_or_witness():
    with pytest.raises(ValidationError):
        DesignVerdict(v=5, k=2, t=1, num_blocks=0)


def test_invalid_strength():
    with pytest.raises(PreconditionError):
        verify_t_design(all_subsets_design(6, 3), 4)


def test_index_relations():
    assert lambda_s(33, 6, 4, 12, 3) == 120
    assert lambda_s(17, 5, 3, 1, 1) == 20
    assert lambda_s(17, 5, 3, 1, 2) == Fraction(5)
    assert block_count(33, 5, 4, 5) == 40920
    assert supplementary_lambda(33, 5, 4, 5) == 20475
    assert supplementary_lambda(33, 6, 4, 12) == 14040
    assert complementary_lambda(33, 7, 4, 756) == 2898
    assert complementary_lambda(65, 7, 3, 55755) == 502090


def test_supplementary_is_involutive(workspace):
    d = workspace.design(16, "plain:5,2")
    supp = supplementary(d)
    assert supp.k == 12
    assert supp.blocks.family == "supp(plain:5,2)"
    back = supplementary(supp)
    assert back.blocks.same_blocks(d.blocks)
    assert back.blocks.family == "plain:5,2"
    assert verify_t_design(supp, 3).lambda_ == supplementary_lambda(17, 5, 3, 1)


def test_steiner_blocks_meet_in_at_most_two_points(workspace):
    assert max_pairwise_intersection(workspace.design(16, "plain:5,2")) == 2


def test_plain63_five_point_intersections_have_vanishing_sigma52(workspace, circle16):
    d = workspace.design(16, "plain:6,3")
    assert max_pairwise_intersection(d) == 5
    pairs = intersections_of_size(d, 5)
    assert pairs
    shared = [list(s) for s, _ in pairs]
    assert (esp_rows(circle16, shared, 2)[:, 2] == 0).all()


def test_max_intersection_needs_two_blocks():
    with pytest.raises(PreconditionError):
        max_pairwise_intersection(Design(17, 2, BlockSet(16, 2, "one", [[0, 1]])))


def test_claimed_lambda_odd_m():
    assert claimed_lambda("b:5,3", 32) == (4, 5)
    assert claimed_lambda("u:7,3", 32) == (4, 756)
    assert claimed_lambda("u:5,3", 32) == (4, 29)
    assert claimed_lambda("plain:6,3", 32) == (4, 12)
    with pytest.raises(PreconditionError):
        claimed_lambda("zero63", 32)


@pytest.mark.slow
@pytest.mark.parametrize(
    "family, lam, count",
    [("plain:6,3", 12, 32736), ("b:5,3", 5, 40920), ("bbar:5,3", 24, None), ("u:5,3", 29, comb(33, 5)), ("u:7,3", 756, 883872)],
)
def test_odd_m_designs(workspace, family, lam, count):
    d = workspace.design(32, family)
    verdict = verify_t_design(d, 4)
    assert verdict.lambda_ == lam
    if count is not None:
        assert d.num_blocks == count


@pytest.mark.slow
def test_odd_m_complement_and_supplements(workspace):
    comp = complementary(workspace.design(32, "u:7,3"))
    assert comp.num_blocks == 3388176
    assert verify_t_design(comp, 4).lambda_ == 2898
    assert verify_t_design(supplementary(workspace.design(32, "b:5,3")), 4).lambda_ == 20475
    assert verify_t_design(workspace.design(32, "plain:5,2"), 4).empty
