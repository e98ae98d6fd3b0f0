import pytest
from pydantic import ValidationError

from src.codes.weights import WeightTable, defect_weights, krawtchouk, macwilliams, nmds_weights
from src.utils.errors import ConsistencyError, PreconditionError


def test_nmds_table_at_q32():
    table = nmds_weights(33, 27, 32, 31 * 32736)
    assert table[6] == 1014816
    assert table[7] == 105033456
    assert table[8] == 11116421316
    assert table[9] == 948713422800
    assert table[10] == 70662246969600
    assert table.mass == 32 ** 27
    assert table.minimum_distance() == 6


def test_trace_table_at_q32_from_the_lowest_weight():
    table = defect_weights(33, 6, 32, 27, 6, {27: 31 * 32736})
    expected = [1014816, 1268520, 20296320, 64609952, 210132384, 399584823, 376835008]
    assert [table[w] for w in range(27, 34)] == expected
    assert table[28] == 31 * 40920


def test_defect_table_at_q64():
    table = defect_weights(65, 59, 64, 5, 59, {5: 63 * 4368, 6: 63 * 1048320})
    assert (table[5], table[6], table[7]) == (275184, 66044160, 39476324160)


def test_defect_table_needs_every_low_weight():
    with pytest.raises(PreconditionError):
        defect_weights(65, 59, 64, 5, 59, {5: 275184})


def test_macwilliams_of_a_repetition_code():
    rep = WeightTable(entries=[1, 0, 0, 1])
    dual = macwilliams(rep, 3, 1, 2)
    assert dual.entries == [1, 0, 3, 0]
    assert macwilliams(dual, 3, 2, 2).entries == rep.entries


def test_macwilliams_rejects_wrong_mass():
    with pytest.raises(PreconditionError):
        macwilliams(WeightTable(entries=[1, 1, 0, 1]), 3, 1, 2)


def test_nmds_and_trace_tables_are_dual():
    bch = nmds_weights(33, 27, 32, 31 * 32736)
    trace = macwilliams(bch, 33, 27, 32)
    assert trace.minimum_distance() == 27
    assert trace[27] == 1014816


def test_krawtchouk_small_values():
    assert krawtchouk(0, 3, 5, 4) == 1
    assert krawtchouk(1, 0, 5, 4) == 5 * 3
    assert sum(krawtchouk(j, 2, 4, 2) for j in range(5)) == 0


def test_weight_table_validation():
    with pytest.raises(ValidationError):
        WeightTable(entries=[1, -2])
    assert WeightTable(entries=[1, 0, 5]).to_json_list() == ["1", "0", "5"]


def test_negative_coefficient_is_a_consistency_error():
    with pytest.raises(ConsistencyError):
        nmds_weights(33, 27, 32, 10 ** 30)
