from math import comb

import numpy as np
import pytest

from src.designs.esp_blocks import (
    BlockSet,
    all_blocks,
    as_block,
    blockset_general,
    blockset_plain,
    conjugation_identity_holds,
    esp,
    esp_rows,
    esp_shifted,
    esp_values,
    exceptional_sets,
    parse_family,
    quintuple_ratio,
    random_blocks,
    shift_paths_agree,
    u_variant_size_formula,
)
from src.utils.errors import BlockFileError, ConsistencyError, PreconditionError, UnsupportedFamilyError


def test_as_block_validation():
    assert as_block([1, 4, 9]) == (1, 4, 9)
    with pytest.raises(PreconditionError):
        as_block([3, 3])
    with pytest.raises(PreconditionError):
        as_block([0, 17], q=16)


def test_esp_small_cases(circle16):
    ctx = circle16.ctx
    u = [circle16.element(i) for i in (0, 3, 8)]
    assert esp(circle16, (0, 3, 8), 0) == 1
    assert esp(circle16, (0, 3, 8), 1) == u[0] ^ u[1] ^ u[2]
    assert esp(circle16, (0, 3, 8), 3) == ctx.mul(u[0], ctx.mul(u[1], u[2]))
    assert esp(circle16, (), 0) == 1
    with pytest.raises(PreconditionError):
        esp(circle16, (0, 3, 8), 4)


def test_log_domain_matches_direct(circle32):
    rows = random_blocks(32, 6, 300, np.random.default_rng(1))
    direct = esp_values(circle32.ctx, circle32.values(rows), 6)
    assert np.array_equal(esp_rows(circle32, rows, 6), direct)


def test_esp_shifted_paths_agree(circle16):
    block, a = (0, 2, 5, 11, 13), 0x5A
    direct = esp_values(circle16.ctx, circle16.values(block) ^ a, 3)[0, 3]
    assert esp_shifted(circle16, block, a, 3) == direct
    assert esp_shifted(circle16, (1, 4), 0, 2) == esp(circle16, (1, 4), 2)


@pytest.mark.parametrize("fixture", ["circle16", "circle32"])
def test_conjugation_and_shift_properties(fixture, request):
    circle = request.getfixturevalue(fixture)
    q = circle.ctx.q
    rng = np.random.default_rng(7)
    for k in (4, 5, 7):
        rows = random_blocks(q, k, 500, rng)
        assert conjugation_identity_holds(circle, rows)
        assert shift_paths_agree(circle, rows, rng.integers(0, q * q, size=500))


def test_random_blocks_are_sorted_subsets():
    rows = random_blocks(16, 5, 100, np.random.default_rng(0))
    assert rows.shape == (100, 5)
    assert np.all(np.diff(rows, axis=1) > 0)
    assert rows.max() <= 16


@pytest.mark.parametrize(
    "tag, kind, k, l",
    [("plain:5,2", "plain", 5, 2), ("u:7,3", "u", 7, 3), ("bbar:5,3", "bbar", 5, 3), ("zero63", "zero63", 6, None)],
)
def test_parse_family(tag, kind, k, l):
    fam = parse_family(tag)
    assert (fam.kind, fam.k, fam.l) == (kind, k, l)
    assert fam.tag == tag


def test_parse_general_family():
    fam = parse_family("general:s4_2^2 + s4_1*s4_3")
    assert fam.k == 4
    assert parse_family("general:5:1").k == 5


@pytest.mark.parametrize("tag", ["u:6,2", "b:7,3", "plain:9,2", "foo", "general:1", "plain:5,7"])
def test_parse_family_rejects(tag):
    with pytest.raises(UnsupportedFamilyError):
        parse_family(tag)


def test_even_only_families_refused_at_odd_m(workspace):
    with pytest.raises(PreconditionError):
        workspace.blocks(32, "zero63")


def test_steiner_system(workspace):
    steiner = workspace.blocks(16, "plain:5,2")
    assert steiner.num_blocks == 68
    assert steiner.same_blocks(blockset_plain(16, 5, 2))


def test_general_constant_expressions():
    assert blockset_general(16, 4, "1").num_blocks == 0
    assert blockset_general(16, 4, "0").num_blocks == comb(17, 4)


def test_u42_equals_general_expression(workspace):
    u42 = workspace.blocks(16, "u:4,2")
    assert u42.same_blocks(workspace.blocks(16, "general:4:s4_2^2 + s4_1*s4_3"))


def test_u_variant_collapse_at_even_m(workspace):
    assert workspace.blocks(16, "u:5,2").same_blocks(workspace.blocks(16, "plain:5,2"))
    assert workspace.blocks(16, "u:6,3").same_blocks(workspace.blocks(16, "plain:6,3"))


def test_u73_definitional_and_accelerated_agree(workspace):
    fast = workspace.blocks(16, "u:7,3")
    assert fast.same_blocks(workspace.definitional(16, "u:7,3"))
    assert fast.num_blocks == u_variant_size_formula(16)


def test_u_variant_size_formula():
    assert u_variant_size_formula(32) == 883872
    assert u_variant_size_formula(64) == 69_582_240


def test_residual63_empty_at_q16(workspace):
    assert workspace.blocks(16, "residual63").num_blocks == 0
    assert workspace.blocks(16, "plain:6,3").same_blocks(workspace.blocks(16, "zero63"))


def test_b_and_bbar_partition_u(workspace):
    b, bbar, u = (workspace.blocks(16, f) for f in ("b:5,3", "bbar:5,3", "u:5,3"))
    assert b.intersection(bbar).num_blocks == 0
    assert b.union(bbar).same_blocks(u)


def test_blockset_set_algebra():
    left = BlockSet(16, 2, "left", [[0, 1], [2, 3], [4, 5]])
    right = BlockSet(16, 2, "right", [[2, 3], [6, 7]])
    assert left.difference(right).num_blocks == 2
    assert left.union(right).num_blocks == 4
    assert list(left.intersection(right)) == [(2, 3)]
    witness = left.symmetric_difference_witness(right)
    assert witness["only_left"] == [[0, 1]]
    assert witness["only_right"] == [[6, 7]]
    assert left.symmetric_difference_witness(left) is None
    assert (3, 2) in left
    assert (0, 2) not in left


def test_blockset_rejects_duplicates():
    with pytest.raises(PreconditionError):
        BlockSet(16, 2, "dup", [[0, 1], [1, 0]])
    with pytest.raises(PreconditionError):
        BlockSet(16, 2, "range", [[0, 17]])


def test_json_roundtrip_is_canonical(workspace, tmp_path):
    steiner = workspace.blocks(16, "plain:5,2")
    path = steiner.save(tmp_path / "steiner.json")
    loaded = BlockSet.load(path)
    assert loaded.same_blocks(steiner)
    assert loaded.to_json() == path.read_text()


def test_json_errors_carry_line_numbers():
    text = BlockSet(16, 2, "x", [[0, 1], [2, 3], [4, 5]]).to_json().replace("[2, 3]", "[3, 2]")
    with pytest.raises(BlockFileError, match="line 8"):
        BlockSet.from_json(text)
    with pytest.raises(BlockFileError):
        BlockSet.from_json('{"q": 16, "k": 2, "family": "x", "num_blocks": 2, "blocks": [[0, 1]]}')
    with pytest.raises(BlockFileError, match="line"):
        BlockSet.from_json("{\n  \"q\": 16,\n  oops\n}")


def test_exceptional_sets_at_odd_m(circle32):
    ex = exceptional_sets(circle32, (0, 3, 7, 20))
    assert len(ex.s1) == 5
    assert len(ex.s) == 9
    assert set(ex.quad) <= set(ex.s)
    for u5 in range(33):
        if u5 in ex.quad:
            continue
        block = tuple(sorted(ex.quad + (u5,)))
        ratio = quintuple_ratio(circle32, block)
        inside = circle32.contains(ratio) and circle32.index(ratio) in block
        assert inside == (u5 in ex.s1)


def test_exceptional_sets_refuse_vanishing_sigma52(workspace, circle16):
    block = next(iter(workspace.blocks(16, "plain:5,2")))
    with pytest.raises(PreconditionError):
        exceptional_sets(circle16, block[:4])


def test_exceptional_sets_reject_colliding_points(circle32, monkeypatch):
    monkeypatch.setattr(type(circle32), "index", lambda self, u: 0)
    with pytest.raises(ConsistencyError):
        exceptional_sets(circle32, (0, 3, 7, 20))


def test_all_blocks():
    assert all_blocks(16, 3).num_blocks == comb(17, 3)
