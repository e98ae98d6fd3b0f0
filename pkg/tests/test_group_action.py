from math import comb

import numpy as np
import pytest

from src.designs.esp_blocks import BlockSet
from src.group.group_action import (
    Moebius,
    alltop_design,
    element_order,
    expected_fixed_points,
    fixed_point_profile,
    fixed_points,
    fixing_involutions,
    identity,
    invariance_check,
    inversion,
    is_three_transitive,
    orbit_count_formulas,
    orbit_partition,
    order2_fixed_points,
    rotation,
    short_orbits_with_symmetric_member,
    stab_generators,
    type3,
)
from src.utils.errors import PreconditionError


def test_generators_permute_the_circle(circle16):
    for g in stab_generators(circle16):
        perm = g.permutation(circle16)
        assert sorted(perm.tolist()) == list(range(17))
    assert element_order(circle16, rotation(circle16)) == 17
    assert element_order(circle16, inversion()) == 2


def test_moebius_algebra(ctx16, circle16):
    g = type3(circle16, ctx16.alpha)
    assert g.compose(ctx16, g.inverse(ctx16)) == identity()
    u = circle16.element(3)
    assert g.inverse(ctx16).apply(ctx16, g.apply(ctx16, u)) == u
    with pytest.raises(PreconditionError):
        Moebius.make(ctx16, 1, 1, 1, 1)
    with pytest.raises(PreconditionError):
        type3(circle16, 1)


def test_identity_fixes_everything(circle16):
    assert fixed_points(circle16, identity()) == 17
    with pytest.raises(PreconditionError):
        order2_fixed_points(circle16, identity())
    assert order2_fixed_points(circle16, inversion()) == 1


def test_closure_at_q16(group16):
    assert group16.order == 16 ** 3 - 16
    assert is_three_transitive(group16)
    assert group16.index_of(identity()) >= 0
    assert int(group16.element_orders.max()) == 17


def test_fixed_point_profile_at_q16(group16):
    profile = fixed_point_profile(group16)
    assert profile[1] == [17]
    assert profile[2] == [1]
    for order, counts in profile.items():
        assert counts == [expected_fixed_points(16, order)]


def test_invariance_at_q16(group16, workspace):
    for family in ("plain:5,2", "plain:6,3"):
        result = invariance_check(group16, workspace.blocks(16, family))
        assert result.invariant
        assert result.checked_elements == 4080


def test_invariance_failure_reports_a_witness(group16):
    lonely = BlockSet(16, 5, "lonely", [[0, 1, 2, 3, 4]])
    result = invariance_check(group16, lonely, sample=50, seed=1)
    assert not result
    assert result.witness["block"] == [0, 1, 2, 3, 4]


def test_orbits_at_q16(group16):
    report = orbit_partition(group16, 5)
    assert sum(o.length for o in report.orbits) == comb(17, 5)
    assert all(group16.order % o.length == 0 for o in report.orbits)
    reps = [o.rep for o in report.orbits]
    assert reps == sorted(reps, key=lambda r: tuple(reversed(r)))
    with pytest.raises(PreconditionError):
        orbit_partition(group16, 6)


def test_alltop_needs_odd_m(group16):
    with pytest.raises(PreconditionError):
        alltop_design(group16)


def test_orbit_count_formulas():
    assert orbit_count_formulas(32) == {"short": 5, "trivial": 6}


@pytest.mark.slow
def test_q32_group_and_short_orbits(group32, workspace):
    assert group32.order == 32736
    assert fixed_point_profile(group32)[2] == [1]
    report = orbit_partition(group32, 5)
    short = report.short_orbits()
    assert len(short) == 5
    assert {o.stabilizer_order for o in short} == {4}
    assert report.stabilizer_histogram()[1] == 6
    assert sum(o.length for o in report.orbits) == 237336
    assert short_orbits_with_symmetric_member(report)


@pytest.mark.slow
def test_q32_alltop_design(group32, workspace):
    d = alltop_design(group32)
    assert d.num_blocks == 40920
    assert d.blocks.same_blocks(workspace.blocks(32, "b:5,3"))
    assert fixing_involutions(group32, workspace.blocks(32, "b:5,3")).all()
    assert invariance_check(group32, d.blocks, sample=100, seed=20240601).invariant
