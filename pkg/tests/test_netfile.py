import json
import math

import pytest

from teleroute import (
    Link,
    ParseError,
    PureSchmidtChannel,
    ValidationError,
    WernerGenChannel,
    XState,
    link_reports,
    load_network,
    loads_network,
    network_to_data,
    parse_network,
    random_network,
    save_network,
)

from conftest import FIXTURES


def minimal(channel):
    return {
        "format_version": 1,
        "nodes": ["A", "B"],
        "links": [{"id": "e", "u": "A", "v": "B", "channel": channel}],
    }


class TestParsing:
    def test_triangle_fixture(self):
        net = load_network(FIXTURES / "triangle_pure.json")
        assert net.nodes == ("A", "B", "C")
        assert all(isinstance(l.channel, PureSchmidtChannel) for l in net.links)
        assert net.link("ac").channel.theta == pytest.approx(math.asin(0.9) / 2, abs=1e-15)

    def test_bell_literal(self):
        net = parse_network(minimal({"type": "bell"}))
        assert net.link("e").channel == PureSchmidtChannel(math.pi / 4)

    def test_werner_literal(self):
        net = parse_network(minimal({"type": "werner", "p_w": 0.8, "theta": 0.3}))
        assert net.link("e").channel == WernerGenChannel(0.8, 0.3)

    def test_x_literal_defaults_corners_to_zero(self):
        net = parse_network(minimal({"type": "x", "a11": 0.4, "a22": 0.1, "a33": 0.2, "a44": 0.3}))
        ch = net.link("e").channel
        assert ch == XState(0.4, 0.1, 0.2, 0.3, 0j, 0j)

    def test_x_literal_with_corners(self):
        net = parse_network(
            minimal(
                {
                    "type": "x",
                    "a11": 0.4,
                    "a22": 0.1,
                    "a33": 0.2,
                    "a44": 0.3,
                    "a14_re": 0.2,
                    "a14_im": -0.1,
                    "a23_re": 0.05,
                    "a23_im": 0.02,
                }
            )
        )
        ch = net.link("e").channel
        assert ch.a14 == 0.2 - 0.1j
        assert ch.a23 == 0.05 + 0.02j

    def test_integer_numbers_are_accepted(self):
        net = parse_network(minimal({"type": "pure", "theta": 0}))
        assert net.link("e").channel.theta == 0.0


class TestStructuralRejections:
    def test_top_level_must_be_object(self):
        with pytest.raises(ParseError):
            parse_network([1, 2])

    def test_unknown_top_level_field(self):
        data = minimal({"type": "bell"})
        data["comment"] = "hi"
        with pytest.raises(ParseError, match="comment"):
            parse_network(data)

    def test_missing_format_version(self):
        data = minimal({"type": "bell"})
        del data["format_version"]
        with pytest.raises(ParseError, match="format_version"):
            parse_network(data)

    def test_wrong_format_version(self):
        data = minimal({"type": "bell"})
        data["format_version"] = 2
        with pytest.raises(ParseError):
            parse_network(data)

    def test_unknown_link_field(self):
        data = minimal({"type": "bell"})
        data["links"][0]["weight"] = 3
        with pytest.raises(ParseError, match="weight"):
            parse_network(data)

    def test_unknown_channel_field(self):
        with pytest.raises(ParseError, match="phi"):
            parse_network(minimal({"type": "pure", "theta": 0.2, "phi": 0.1}))

    def test_unknown_channel_type(self):
        with pytest.raises(ParseError, match="ghz"):
            parse_network(minimal({"type": "ghz"}))

    def test_missing_channel_parameter(self):
        with pytest.raises(ParseError, match="theta"):
            parse_network(minimal({"type": "pure"}))

    def test_bell_takes_no_parameters(self):
        with pytest.raises(ParseError):
            parse_network(minimal({"type": "bell", "theta": 0.2}))

    def test_non_numeric_parameter(self):
        with pytest.raises(ParseError):
            parse_network(minimal({"type": "pure", "theta": "big"}))

    def test_boolean_is_not_a_number(self):
        with pytest.raises(ParseError):
            parse_network(minimal({"type": "pure", "theta": True}))

    def test_non_finite_numbers_rejected(self):
        text = json.dumps(minimal({"type": "pure", "theta": 0.0})).replace("0.0", "NaN")
        with pytest.raises(ParseError):
            loads_network(text)

    def test_invalid_json_text(self):
        with pytest.raises(ParseError):
            loads_network("{not json")

    def test_bad_node_entry(self):
        data = minimal({"type": "bell"})
        data["nodes"] = ["A", 7]
        with pytest.raises(ParseError):
            parse_network(data)


class TestValueRejections:
    def test_bad_angle_names_the_link(self):
        with pytest.raises(ValidationError, match="'e'"):
            parse_network(minimal({"type": "pure", "theta": 2.0}))

    def test_bad_trace_names_the_link(self):
        with pytest.raises(ValidationError, match="'e'"):
            parse_network(minimal({"type": "x", "a11": 0.5, "a22": 0.0, "a33": 0.0, "a44": 0.4}))

    def test_graph_level_validation_still_applies(self):
        data = minimal({"type": "bell"})
        data["links"][0]["v"] = "A"
        with pytest.raises(ValidationError, match="self-loop"):
            parse_network(data)


class TestLinkReports:
    def test_mixed_verdicts(self):
        data = {
            "format_version": 1,
            "nodes": ["A", "B", "C"],
            "links": [
                {"id": "good", "u": "A", "v": "B", "channel": {"type": "bell"}},
                {"id": "bad", "u": "B", "v": "C", "channel": {"type": "pure", "theta": 3.0}},
            ],
        }
        reports = link_reports(data)
        assert [r.link_id for r in reports] == ["good", "bad"]
        assert reports[0].ok and reports[0].error is None
        assert not reports[1].ok and "theta" in reports[1].error

    def test_structure_errors_still_raise(self):
        with pytest.raises(ParseError):
            link_reports({"format_version": 1, "nodes": [], "links": [{}]})


class TestRoundTrip:
    @pytest.mark.parametrize("family", ["pure", "x", "werner"])
    def test_random_networks_round_trip_exactly(self, family):
        for seed in range(5):
            net = random_network(seed, 5, 0.6, family)
            again = parse_network(network_to_data(net))
            assert again == net

    def test_save_and_load(self, tmp_path, witness_net):
        target = tmp_path / "net.json"
        save_network(witness_net, target)
        assert load_network(target) == witness_net

    def test_witness_fixture_matches_builder(self, witness_net):
        assert load_network(FIXTURES / "witness.json") == witness_net

    def test_complex_corners_survive(self):
        x = XState(0.4, 0.1, 0.2, 0.3, 0.1 - 0.05j, 0.02 + 0.01j)
        net = parse_network(minimal({"type": "bell"})).with_link(Link("A", "B", "xx", x))
        again = parse_network(network_to_data(net))
        assert again.link("xx").channel == x
