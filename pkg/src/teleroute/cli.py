"""Command line interface.

Subcommands:
  validate        check a network file and report per-link verdicts
  route           find the best path between two nodes
  verify          route, then cross-check the closed form against the simulator
  find-violation  search random networks for a prefix-optimality violation
  swap-prepare    propose a swap plan at a node and price its fidelity impact

Each run prints a single JSON (default) or CSV record on stdout with the
command, echoed arguments, a digest of the input file, the runtime and
the result. Floats are rounded to 12 significant digits. Exit codes:
0 success, 1 domain error, 2 parse or validation error, 3 verification
discrepancy.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .errors import ParseError, TelerouteError, ValidationError
from .netfile import link_reports, network_to_data, parse_network, save_network
from .netgraph import (
    Network,
    Path as RoutePath,
    additive_model_applies,
    dijkstra_route,
    exact_route,
    find_violation,
    path_channels,
)
from .swapprep import preparation_expected_fidelity, propose_plan
from .telesim import average_azimuthal_fidelity

VERIFY_TOL = 1e-9

_ECHOED = ("network", "src", "dst", "method", "seed", "attempts", "family", "nodes", "swap_node", "out")


@dataclass
class CommandOutcome:
    result: dict
    input_digest: str | None = None
    exit_code: int = 0


def _read_network_file(path: str) -> tuple[dict, str]:
    if not path:
        raise ParseError("network path must not be empty")
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise ParseError(f"cannot read {path!r}: {exc}") from exc
    digest = hashlib.sha256(raw).hexdigest()
    try:
        data = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"invalid JSON in {path!r}: {exc}") from exc
    return data, digest


def _load_network(path: str) -> tuple[Network, str]:
    data, digest = _read_network_file(path)
    return parse_network(data), digest


def _path_data(path: RoutePath) -> dict:
    return {"nodes": list(path.nodes), "link_ids": list(path.link_ids), "hops": path.hops}


def _route_result(network: Network, src: str, dst: str, method: str):
    if method == "auto":
        method = "dijkstra" if additive_model_applies(network) else "exact"
    if method == "dijkstra":
        return dijkstra_route(network, src, dst)
    return exact_route(network, src, dst)


def cmd_validate(args) -> CommandOutcome:
    data, digest = _read_network_file(args.network)
    reports = link_reports(data)
    network_error = None
    try:
        parse_network(data)
    except ValidationError as exc:
        network_error = str(exc)
    valid = network_error is None and all(r.ok for r in reports)
    result = {
        "valid": valid,
        "link_count": len(reports),
        "links": [{"id": r.link_id, "ok": r.ok, "error": r.error} for r in reports],
        "network_error": network_error,
    }
    return CommandOutcome(result, digest, 0 if valid else 2)


def cmd_route(args) -> CommandOutcome:
    network, digest = _load_network(args.network)
    route = _route_result(network, args.src, args.dst, args.method)
    result = {
        "source": args.src,
        "destination": args.dst,
        "method": route.method,
        "path": _path_data(route.path),
        "objective": {
            "mu_product": route.objective.mu_product,
            "nu_product": route.objective.nu_product,
            "fidelity": route.objective.fidelity,
        },
    }
    return CommandOutcome(result, digest)


def cmd_verify(args) -> CommandOutcome:
    network, digest = _load_network(args.network)
    route = _route_result(network, args.src, args.dst, args.method)
    channels = path_channels(network, route.path)
    simulated = average_azimuthal_fidelity(channels)
    checks = [
        {
            "name": "simulator-agreement",
            "reference": simulated.value,
            "difference": abs(simulated.value - route.objective.fidelity),
        }
    ]
    if additive_model_applies(network):
        other = dijkstra_route if route.method == "exact" else exact_route
        twin = other(network, args.src, args.dst)
        checks.append(
            {
                "name": "method-agreement",
                "reference": twin.objective.fidelity,
                "difference": abs(twin.objective.fidelity - route.objective.fidelity),
            }
        )
    for check in checks:
        check["ok"] = check["difference"] <= VERIFY_TOL
    verified = all(c["ok"] for c in checks)
    result = {
        "source": args.src,
        "destination": args.dst,
        "method": route.method,
        "path": _path_data(route.path),
        "fidelity": route.objective.fidelity,
        "checks": checks,
        "verified": verified,
    }
    return CommandOutcome(result, digest, 0 if verified else 3)


def cmd_find_violation(args) -> CommandOutcome:
    lo, hi = args.nodes
    network, witness, attempts_used = find_violation(
        args.seed, args.attempts, args.family, (lo, hi)
    )
    result = {
        "seed": args.seed,
        "attempts_used": attempts_used,
        "family": args.family,
        "witness": {
            "source": witness.source,
            "mid": witness.mid,
            "ext": witness.ext,
            "best_to_mid": _path_data(witness.best_to_mid),
            "best_to_ext": _path_data(witness.best_to_ext),
            "fidelity_to_mid": witness.mid_objective.fidelity,
            "prefix_fidelity": witness.prefix_objective.fidelity,
            "fidelity_to_ext": witness.ext_objective.fidelity,
            "margin": witness.margin,
        },
    }
    if args.out:
        save_network(network, args.out)
        result["network_file"] = args.out
    else:
        result["network"] = network_to_data(network)
    return CommandOutcome(result)


def cmd_swap_prepare(args) -> CommandOutcome:
    network, digest = _load_network(args.network)
    plan = propose_plan(network, args.src, args.dst, args.swap_node)
    assessment = preparation_expected_fidelity(network, args.src, args.dst, plan)
    result = {
        "source": args.src,
        "destination": args.dst,
        "swap_node": plan.swap_node,
        "plan": {
            "consumed_link_ids": list(plan.consumed_link_ids),
            "endpoints": list(plan.endpoints),
            "new_negativity": plan.new_negativity,
            "success_probability": plan.success_probability,
            "success_link_id": assessment.success_link_id,
        },
        "fidelity": {
            "base": assessment.base_fidelity,
            "success": assessment.success_fidelity,
            "failure": assessment.failure_fidelity,
            "expected": assessment.expected_fidelity,
        },
    }
    return CommandOutcome(result, digest)


def _parse_node_range(text: str) -> tuple[int, int]:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            lo = hi = int(parts[0])
        elif len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
        else:
            raise ValueError(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO,HI or a single integer, got {text!r}")
    return lo, hi


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="teleroute", description=__doc__.split("\n\n")[0])
    parser.add_argument("--format", choices=("json", "csv"), default="json", help="output format")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_network(p):
        p.add_argument("--network", required=True, help="path to a network JSON file")

    def add_endpoints(p):
        p.add_argument("--src", required=True, help="source node")
        p.add_argument("--dst", required=True, help="destination node")

    p = sub.add_parser("validate", help="validate a network file")
    add_network(p)
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("route", help="find the best path between two nodes")
    add_network(p)
    add_endpoints(p)
    p.add_argument("--method", choices=("auto", "dijkstra", "exact"), default="auto")
    p.set_defaults(handler=cmd_route)

    p = sub.add_parser("verify", help="route and cross-check against the simulator")
    add_network(p)
    add_endpoints(p)
    p.add_argument("--method", choices=("auto", "dijkstra", "exact"), default="auto")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("find-violation", help="search for a prefix-optimality violation")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--attempts", type=int, default=1000)
    p.add_argument("--family", choices=("pure", "x", "werner"), default="x")
    p.add_argument("--nodes", type=_parse_node_range, default=(4, 6), help="node count range LO,HI")
    p.add_argument("--out", help="write the found network to this file")
    p.set_defaults(handler=cmd_find_violation)

    p = sub.add_parser("swap-prepare", help="propose and price a swap plan")
    add_network(p)
    add_endpoints(p)
    p.add_argument("--swap-node", required=True, dest="swap_node", help="node performing the swap")
    p.set_defaults(handler=cmd_swap_prepare)

    return parser


def _round_floats(value):
    if isinstance(value, float):
        return float(f"{value:.12g}")
    if isinstance(value, dict):
        return {k: _round_floats(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round_floats(v) for v in value]
    return value


def _flatten(prefix: str, value, out: list) -> None:
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, out)
    elif isinstance(value, list):
        for i, v in enumerate(value):
            _flatten(f"{prefix}.{i}", v, out)
    else:
        out.append((prefix, value))


def _emit(record: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(record, indent=2))
        return
    cells: list = []
    _flatten("", record, cells)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow([key for key, _ in cells])
    writer.writerow(["" if v is None else ("true" if v is True else ("false" if v is False else v)) for _, v in cells])
    sys.stdout.write(buf.getvalue())


def _echo_args(args) -> dict:
    echo = {}
    for name in _ECHOED:
        value = getattr(args, name, None)
        if value is not None:
            echo[name] = list(value) if isinstance(value, tuple) else value
    return echo


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        outcome = args.handler(args)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TelerouteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    record = {
        "command": args.command,
        "arguments": _echo_args(args),
        "runtime_s": time.perf_counter() - start,
    }
    if outcome.input_digest is not None:
        record["input_digest"] = outcome.input_digest
    record["result"] = outcome.result
    _emit(_round_floats(record), args.format)
    return outcome.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
