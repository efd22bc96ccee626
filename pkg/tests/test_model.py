import json
from decimal import Decimal
from fractions import Fraction as F

import pytest

from src import fixtures
from src.model import (
    ChannelMatrix,
    DecompositionMap,
    DimensionMismatchError,
    EmptyVectorError,
    FormatError,
    MapMismatchError,
    NonSquareError,
    PositivePowerExponentError,
    Scheme,
    ZeroDirectLinkError,
    channel_from_dict,
    channel_to_dict,
    format_rational,
    load_channel,
    load_json,
    load_map,
    load_scheme,
    map_from_dict,
    map_to_dict,
    parse_rational,
    scheme_from_dict,
    scheme_to_dict,
    validate_channel,
    validate_scheme,
)


@pytest.mark.parametrize("raw, expected", [
    ("0.3", F(3, 10)),
    (0.3, F(3, 10)),
    ("1/3", F(1, 3)),
    (" -0.25 ", F(-1, 4)),
    (2, F(2)),
    (Decimal("0.1"), F(1, 10)),
    (F(2, 7), F(2, 7)),
    ("1e-3", F(1, 1000)),
])
def test_parse_rational_is_exact(raw, expected):
    assert parse_rational(raw) == expected


@pytest.mark.parametrize("raw", [True, "abc", "1/0", float("nan"), float("inf"), None, [1]])
def test_parse_rational_rejects(raw):
    with pytest.raises(FormatError):
        parse_rational(raw)


@pytest.mark.parametrize("value, text", [
    (F(3, 10), "0.3"),
    (F(1, 3), "1/3"),
    (F(-1, 10), "-0.1"),
    (F(-2, 5), "-0.4"),
    (F(1, 4), "0.25"),
    (F(1, 8), "0.125"),
    (F(-3, 2), "-1.5"),
    (F(5), "5"),
    (F(0), "0"),
    (F(-1, 3), "-1/3"),
    (F(19, 60), "19/60"),
])
def test_format_rational(value, text):
    assert format_rational(value) == text
    assert parse_rational(text) == value


def test_validate_channel_single_user():
    channel = validate_channel([[1.0]])
    assert channel == ChannelMatrix(1, ((F(1),),))


def test_validate_channel_clamps_negative_entries():
    channel = validate_channel([[1.0, -0.3], [0.5, 1.0]])
    assert channel.alpha == ((F(1), F(0)), (F(1, 2), F(1)))
    assert not channel.is_present(0, 1)
    assert channel.cross_links() == [(1, 0)]


def test_validate_channel_is_idempotent(golden):
    assert validate_channel(golden) == golden
    assert validate_channel(validate_channel(golden).alpha) == golden


def test_zero_direct_link_rejected():
    with pytest.raises(ZeroDirectLinkError) as info:
        validate_channel([[1, 0], [0.5, -1]])
    assert info.value.k == 1
    assert "2" in str(info.value)


@pytest.mark.parametrize("raw", [[], [[1, 0]], [[1, 0], [1]], "1", [1, 2]])
def test_non_square_rejected(raw):
    with pytest.raises(NonSquareError):
        validate_channel(raw)


def test_golden_topology_accepted_unchanged(golden):
    assert golden.K == 5
    assert len(golden.cross_links()) == 11
    assert golden.strength(0, 3) == 1
    assert golden.strength(1, 2) == F(1, 2)
    assert validate_channel(golden.alpha) == golden


def test_validate_scheme_accepts_pure_tin_shape(golden):
    scheme = Scheme.build(1, [(k, [1], 0) for k in range(5)])
    assert validate_scheme(scheme, golden) == scheme


def test_validate_scheme_accepts_baseline_scheme(golden, baseline_scheme):
    scheme = validate_scheme(baseline_scheme, golden)
    assert scheme.n == 2
    assert len({s.vector for s in scheme.streams}) == 4


def test_validate_scheme_normalizes_leading_coordinate(single_user):
    scheme = validate_scheme(Scheme.build(2, [(0, [2, 4], 0), (0, [0, -3], "-0.5")]), single_user)
    assert scheme.streams[0].vector == (F(1), F(2))
    assert scheme.streams[1].vector == (F(0), F(1))
    assert scheme.streams[1].power_exp == F(-1, 2)


def test_positive_power_exponent_rejected(single_user):
    with pytest.raises(PositivePowerExponentError):
        validate_scheme(Scheme.build(1, [(0, [1], "0.1")]), single_user)


def test_empty_vector_rejected(single_user):
    with pytest.raises(EmptyVectorError):
        validate_scheme(Scheme.build(2, [(0, [0, 0], 0)]), single_user)


@pytest.mark.parametrize("streams, n", [
    ([(0, [1, 0], 0)], 1),
    ([(1, [1], 0)], 1),
    ([(-1, [1], 0)], 1),
    ([(0, [1], 0)], 0),
])
def test_dimension_mismatch_rejected(single_user, streams, n):
    with pytest.raises(DimensionMismatchError):
        validate_scheme(Scheme.build(n, streams), single_user)


def test_stream_counts(golden):
    scheme = fixtures.example1_scheme()
    assert scheme.stream_counts(3) == [2, 2, 1]
    assert [s.power_exp for s in scheme.streams_of(0)] == [F(0), F(-1, 5)]


def test_serialization_round_trip(golden, baseline_scheme):
    assert channel_from_dict(channel_to_dict(golden)) == golden
    assert scheme_from_dict(scheme_to_dict(baseline_scheme)) == baseline_scheme
    dmap = fixtures.improved_map()
    assert map_from_dict(map_to_dict(dmap)) == dmap


def test_scheme_file_uses_one_based_users(baseline_scheme):
    data = scheme_to_dict(baseline_scheme)
    assert [s["user"] for s in data["streams"]] == [1, 2, 3, 4, 5]
    assert data["streams"][4]["power_exp"] == "-0.4"


def test_channel_dict_declared_size_must_match():
    with pytest.raises(NonSquareError):
        channel_from_dict({"K": 3, "alpha": [["1"]]})


def test_map_bitmask_round_trip(golden):
    for mask in (0, 1, 0b10110, (1 << 11) - 1):
        assert DecompositionMap.from_bitmask(golden, mask).bitmask(golden) == mask


def test_threshold_map_is_baseline(golden):
    assert DecompositionMap.by_threshold(golden, 1) == fixtures.baseline_map()
    dmap = DecompositionMap.by_threshold(golden, "0.5")
    assert dmap.tin_links == frozenset()
    assert dmap.tag(0, 1) == "TIM"
    assert dmap.tag(0, 2) is None


def test_map_with_link_in_both_components_rejected():
    with pytest.raises(MapMismatchError):
        map_from_dict({"tim_links": [[1, 2]], "tin_links": [[1, 2]]})


@pytest.mark.parametrize("data", [{"tim_links": [[1, 2, 3]]}, {"tim_links": [["a", 1]]}, []])
def test_malformed_map_rejected(data):
    with pytest.raises(FormatError):
        map_from_dict(data)


def test_load_json_reads_float_literals_exactly(tmp_path):
    path = tmp_path / "topo.json"
    path.write_text('{"alpha": [[1.0, 0.3], [0.1, 1]]}', encoding="utf-8")
    channel = load_channel(path)
    assert channel.alpha[0][1] == F(3, 10)
    assert channel.alpha[1][0] == F(1, 10)


def test_load_json_invalid_document(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(FormatError):
        load_json(path)


def test_missing_key_is_format_error():
    with pytest.raises(FormatError):
        scheme_from_dict({"streams": []})


def test_shipped_fixture_files_match_builders(fixtures_dir):
    assert load_channel(fixtures_dir / "golden_topology.json") == fixtures.golden_channel()
    assert load_map(fixtures_dir / "baseline_map.json") == fixtures.baseline_map()
    assert load_map(fixtures_dir / "improved_map.json") == fixtures.improved_map()
    assert load_scheme(fixtures_dir / "baseline_scheme.json") == fixtures.baseline_scheme()
    assert load_scheme(fixtures_dir / "improved_scheme.json") == fixtures.improved_scheme()
    assert load_channel(fixtures_dir / "example1_topology.json") == fixtures.example1_channel()
    assert load_scheme(fixtures_dir / "example1_scheme.json") == fixtures.example1_scheme()


def test_fixture_documents_are_json_serializable():
    for name in fixtures.fixture_names():
        json.dumps(fixtures.fixture_document(name))
