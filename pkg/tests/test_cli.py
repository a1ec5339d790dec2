import hashlib
import json

import pytest

from teleroute import FidelityEstimate, check_optimal_substructure, load_network
from teleroute.cli import main

from conftest import FIXTURES

TRIANGLE = str(FIXTURES / "triangle_pure.json")
WITNESS = str(FIXTURES / "witness.json")
SWAP_TRIANGLE = str(FIXTURES / "swap_triangle.json")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), err


class TestValidate:
    def test_good_file(self, capsys):
        code, record, _ = run_json(capsys, "validate", "--network", TRIANGLE)
        assert code == 0
        assert record["command"] == "validate"
        assert record["result"]["valid"] is True
        assert all(l["ok"] for l in record["result"]["links"])
        digest = hashlib.sha256(open(TRIANGLE, "rb").read()).hexdigest()
        assert record["input_digest"] == digest

    def test_bad_values_reported_per_link(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(
            json.dumps(
                {
                    "format_version": 1,
                    "nodes": ["A", "B"],
                    "links": [
                        {"id": "ok", "u": "A", "v": "B", "channel": {"type": "bell"}},
                        {"id": "broken", "u": "A", "v": "B",
                         "channel": {"type": "pure", "theta": 9.0}},
                    ],
                }
            )
        )
        code, record, _ = run_json(capsys, "validate", "--network", str(bad))
        assert code == 2
        assert record["result"]["valid"] is False
        verdicts = {l["id"]: l["ok"] for l in record["result"]["links"]}
        assert verdicts == {"ok": True, "broken": False}

    def test_structural_error_goes_to_stderr(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{\"format_version\": 1, \"nodes\": [], \"links\": [], \"x\": 1}")
        code, out, err = run(capsys, "validate", "--network", str(bad))
        assert code == 2
        assert out == ""
        assert "x" in err

    def test_missing_file(self, capsys):
        code, out, err = run(capsys, "validate", "--network", "/nonexistent.json")
        assert code == 2
        assert "cannot read" in err


class TestRoute:
    def test_auto_picks_dijkstra_on_pure_networks(self, capsys):
        code, record, _ = run_json(
            capsys, "route", "--network", TRIANGLE, "--src", "A", "--dst", "B"
        )
        assert code == 0
        result = record["result"]
        assert result["method"] == "dijkstra"
        assert result["path"]["nodes"] == ["A", "C", "B"]
        assert result["objective"]["fidelity"] == 0.93

    def test_auto_picks_exact_on_mixed_networks(self, capsys):
        code, record, _ = run_json(
            capsys, "route", "--network", WITNESS, "--src", "A", "--dst", "D"
        )
        assert code == 0
        assert record["result"]["method"] == "exact"
        assert record["result"]["objective"]["fidelity"] == 0.6625

    def test_explicit_method(self, capsys):
        code, record, _ = run_json(
            capsys, "route", "--network", TRIANGLE, "--src", "A", "--dst", "B",
            "--method", "exact",
        )
        assert code == 0
        assert record["result"]["method"] == "exact"
        assert record["result"]["objective"]["fidelity"] == 0.93

    def test_dijkstra_on_mixed_network_is_a_domain_error(self, capsys):
        code, out, err = run(
            capsys, "route", "--network", WITNESS, "--src", "A", "--dst", "D",
            "--method", "dijkstra",
        )
        assert code == 1
        assert "not admissible" in err

    def test_unknown_node(self, capsys):
        code, _, err = run(capsys, "route", "--network", TRIANGLE, "--src", "A", "--dst", "Z")
        assert code == 1
        assert "unknown node" in err

    def test_csv_format(self, capsys):
        code, out, _ = run(
            capsys, "--format", "csv", "route", "--network", TRIANGLE,
            "--src", "A", "--dst", "B",
        )
        assert code == 0
        header, values = out.strip().split("\r\n")
        cols = header.split(",")
        vals = values.split(",")
        fid = vals[cols.index("result.objective.fidelity")]
        assert fid == "0.93"


class TestVerify:
    def test_triangle_passes_both_checks(self, capsys):
        code, record, _ = run_json(
            capsys, "verify", "--network", TRIANGLE, "--src", "A", "--dst", "B"
        )
        assert code == 0
        result = record["result"]
        assert result["verified"] is True
        names = {c["name"] for c in result["checks"]}
        assert names == {"simulator-agreement", "method-agreement"}
        assert all(c["ok"] for c in result["checks"])

    def test_mixed_network_uses_simulator_only(self, capsys):
        code, record, _ = run_json(
            capsys, "verify", "--network", WITNESS, "--src", "A", "--dst", "D"
        )
        assert code == 0
        names = [c["name"] for c in record["result"]["checks"]]
        assert names == ["simulator-agreement"]

    def test_discrepancy_exits_three(self, capsys, monkeypatch):
        import teleroute.cli as cli_mod

        monkeypatch.setattr(
            cli_mod,
            "average_azimuthal_fidelity",
            lambda channels, points=8: FidelityEstimate(0.5, 8, "exact-quadrature"),
        )
        code, record, _ = run_json(
            capsys, "verify", "--network", TRIANGLE, "--src", "A", "--dst", "B"
        )
        assert code == 3
        assert record["result"]["verified"] is False


class TestFindViolation:
    def test_finds_and_reports(self, capsys):
        code, record, _ = run_json(capsys, "find-violation", "--seed", "42")
        assert code == 0
        result = record["result"]
        assert result["attempts_used"] >= 1
        w = result["witness"]
        assert w["fidelity_to_mid"] > w["prefix_fidelity"]
        assert w["margin"] > 1e-9
        assert "network" in result

    def test_out_file_replays(self, capsys, tmp_path):
        out_file = tmp_path / "found.json"
        code, record, _ = run_json(
            capsys, "find-violation", "--seed", "42", "--out", str(out_file)
        )
        assert code == 0
        w = record["result"]["witness"]
        net = load_network(out_file)
        replay = check_optimal_substructure(net, w["source"])
        assert replay is not None
        assert replay.mid == w["mid"]
        assert replay.ext == w["ext"]

    def test_budget_exhaustion_is_a_domain_error(self, capsys):
        code, out, err = run(
            capsys, "find-violation", "--seed", "0", "--attempts", "2",
            "--family", "pure",
        )
        assert code == 1
        assert "no violation" in err

    def test_node_range_parsing(self, capsys):
        code, record, _ = run_json(
            capsys, "find-violation", "--seed", "1", "--nodes", "4,4", "--attempts", "100"
        )
        assert code == 0
        assert len(record["result"]["network"]["nodes"]) == 4


class TestSwapPrepare:
    def test_full_accounting(self, capsys):
        code, record, _ = run_json(
            capsys, "swap-prepare", "--network", SWAP_TRIANGLE,
            "--src", "A", "--dst", "B", "--swap-node", "C",
        )
        assert code == 0
        result = record["result"]
        assert result["plan"]["consumed_link_ids"] == ["ac", "cb"]
        assert result["plan"]["new_negativity"] == 0.674595640392
        assert result["fidelity"]["base"] == 0.875
        assert result["fidelity"]["expected"] == 0.896824455049

    def test_conflict_is_a_domain_error(self, capsys):
        code, _, err = run(
            capsys, "swap-prepare", "--network", TRIANGLE,
            "--src", "A", "--dst", "B", "--swap-node", "C",
        )
        assert code == 1
        assert "spare" in err


class TestOutputRecord:
    def test_arguments_are_echoed(self, capsys):
        _, record, _ = run_json(
            capsys, "route", "--network", TRIANGLE, "--src", "A", "--dst", "B"
        )
        assert record["arguments"]["network"] == TRIANGLE
        assert record["arguments"]["src"] == "A"
        assert record["arguments"]["method"] == "auto"
        assert record["runtime_s"] >= 0.0

    def test_floats_are_rounded_to_twelve_digits(self, capsys):
        _, record, _ = run_json(
            capsys, "route", "--network", SWAP_TRIANGLE, "--src", "A", "--dst", "B"
        )
        nu = record["result"]["objective"]["nu_product"]
        assert nu == float(f"{nu:.12g}")
