"""Strict JSON network files.

Top level: {"format_version": 1, "nodes": [...], "links": [...]}. Each
link is {"id", "u", "v", "channel"} and a channel literal is one of

    {"type": "pure", "theta": t}
    {"type": "bell"}
    {"type": "werner", "p_w": p, "theta": t}
    {"type": "x", "a11": ..., "a22": ..., "a33": ..., "a44": ...,
     "a14_re": 0, "a14_im": 0, "a23_re": 0, "a23_im": 0}

with the x corner parts optional and 0 by default. Unknown fields are
rejected everywhere: structural problems raise ParseError, value
problems (bad angle, bad trace...) raise ValidationError. Serialising
and re-parsing a network reproduces it exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import ParseError, ValidationError
from .netgraph import Link, Network
from .qcore import (
    PureSchmidtChannel,
    WernerGenChannel,
    XState,
    to_density_matrix,
    validate_density_matrix,
)

FORMAT_VERSION = 1

_CHANNEL_FIELDS = {
    "pure": ({"theta"}, set()),
    "bell": (set(), set()),
    "werner": ({"p_w", "theta"}, set()),
    "x": (
        {"a11", "a22", "a33", "a44"},
        {"a14_re", "a14_im", "a23_re", "a23_im"},
    ),
}


def _require_number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{where} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise ParseError(f"{where} must be finite, got {value!r}")
    return float(value)


def _require_string(value, where: str) -> str:
    if not isinstance(value, str) or not value:
        raise ParseError(f"{where} must be a non-empty string, got {value!r}")
    return value


def _check_keys(obj: dict, required: set, optional: set, where: str) -> None:
    for key in obj:
        if key not in required and key not in optional:
            raise ParseError(f"unknown field {key!r} in {where}")
    for key in required:
        if key not in obj:
            raise ParseError(f"missing field {key!r} in {where}")


def _parse_structure(data):
    if not isinstance(data, dict):
        raise ParseError("top level must be an object")
    _check_keys(data, {"format_version", "nodes", "links"}, set(), "network")
    if data["format_version"] != FORMAT_VERSION:
        raise ParseError(f"unsupported format_version {data['format_version']!r}")
    if not isinstance(data["nodes"], list):
        raise ParseError("'nodes' must be an array")
    nodes = [_require_string(n, "node name") for n in data["nodes"]]
    if not isinstance(data["links"], list):
        raise ParseError("'links' must be an array")
    entries = []
    for index, raw in enumerate(data["links"]):
        where = f"link {index}"
        if not isinstance(raw, dict):
            raise ParseError(f"{where} must be an object")
        _check_keys(raw, {"id", "u", "v", "channel"}, set(), where)
        link_id = _require_string(raw["id"], f"{where} id")
        where = f"link {link_id!r}"
        u = _require_string(raw["u"], f"{where} u")
        v = _require_string(raw["v"], f"{where} v")
        channel = raw["channel"]
        if not isinstance(channel, dict):
            raise ParseError(f"{where} channel must be an object")
        kind = _require_string(channel.get("type", ""), f"{where} channel type")
        if kind not in _CHANNEL_FIELDS:
            raise ParseError(f"{where}: unknown channel type {kind!r}")
        required, optional = _CHANNEL_FIELDS[kind]
        _check_keys(channel, required | {"type"}, optional, f"{where} channel")
        params = {
            key: _require_number(channel[key], f"{where} channel {key}")
            for key in channel
            if key != "type"
        }
        entries.append((link_id, u, v, kind, params))
    return nodes, entries


def _build_channel(kind: str, params: dict):
    if kind == "pure":
        return PureSchmidtChannel(params["theta"])
    if kind == "bell":
        return PureSchmidtChannel(math.pi / 4.0)
    if kind == "werner":
        return WernerGenChannel(params["p_w"], params["theta"])
    a14 = complex(params.get("a14_re", 0.0), params.get("a14_im", 0.0))
    a23 = complex(params.get("a23_re", 0.0), params.get("a23_im", 0.0))
    return XState(params["a11"], params["a22"], params["a33"], params["a44"], a14, a23)


def parse_network(data) -> Network:
    """Parse already-decoded JSON data into a Network."""
    nodes, entries = _parse_structure(data)
    links = []
    for link_id, u, v, kind, params in entries:
        try:
            channel = _build_channel(kind, params)
        except ValidationError as exc:
            raise ValidationError(f"link {link_id!r}: {exc}") from exc
        links.append(Link(u, v, link_id, channel))
    return Network(nodes, links)


@dataclass(frozen=True)
class LinkReport:
    """Per-link validation verdict for reporting."""

    link_id: str
    ok: bool
    error: str | None = None


def link_reports(data) -> list[LinkReport]:
    """Validate each link's channel independently (structure must parse)."""
    _, entries = _parse_structure(data)
    reports = []
    for link_id, _, _, kind, params in entries:
        try:
            channel = _build_channel(kind, params)
            validate_density_matrix(to_density_matrix(channel))
            reports.append(LinkReport(link_id, True))
        except ValidationError as exc:
            reports.append(LinkReport(link_id, False, str(exc)))
    return reports


def loads_network(text: str) -> Network:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return parse_network(data)


def load_network(path) -> Network:
    return loads_network(Path(path).read_text())


def channel_to_data(channel) -> dict:
    if isinstance(channel, PureSchmidtChannel):
        return {"type": "pure", "theta": channel.theta}
    if isinstance(channel, WernerGenChannel):
        return {"type": "werner", "p_w": channel.p_w, "theta": channel.theta}
    if isinstance(channel, XState):
        a14 = complex(channel.a14)
        a23 = complex(channel.a23)
        return {
            "type": "x",
            "a11": channel.a11,
            "a22": channel.a22,
            "a33": channel.a33,
            "a44": channel.a44,
            "a14_re": a14.real,
            "a14_im": a14.imag,
            "a23_re": a23.real,
            "a23_im": a23.imag,
        }
    raise ValidationError(f"cannot serialise channel of type {type(channel).__name__}")


def network_to_data(network: Network) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "nodes": list(network.nodes),
        "links": [
            {"id": l.link_id, "u": l.u, "v": l.v, "channel": channel_to_data(l.channel)}
            for l in network.links
        ],
    }


def save_network(network: Network, path) -> None:
    Path(path).write_text(json.dumps(network_to_data(network), indent=2) + "\n")
