"""Networks of two-qubit channels and fidelity-optimal route search.

Two search modes are provided. The additive mode requires every link to
have empty inner levels (a22 = a33 = 0); then maximising path fidelity is
the same as minimising the sum of -ln N link weights, and a shortest-path
scan is exact. The exact mode works for arbitrary X-shaped links by
enumerating simple paths with a branch-and-bound on the pair of running
products (|mu| and |nu| never exceed 1, so a partial product bounds every
extension).

Ties are always broken the same way: higher fidelity, then fewer hops,
then lexicographically smallest node sequence, then smallest link-id
sequence. The substructure check relies on this canonical choice.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    CapExceededError,
    DomainError,
    GenerationError,
    NoPathError,
    NotAdditiveError,
    ValidationError,
)
from .fidmodel import ADDITIVE_TOL, LinkWeights, PathObjective, link_weights
from .qcore import ChannelState, PureSchmidtChannel, WernerGenChannel, as_x_state, negativity, random_x_state

VIOLATION_MARGIN = 1e-9


@dataclass(frozen=True)
class Link:
    """Undirected channel between two named nodes."""

    u: str
    v: str
    link_id: str
    channel: ChannelState


@dataclass(frozen=True)
class Path:
    """A simple path: node sequence plus the link ids joining it."""

    nodes: tuple[str, ...]
    link_ids: tuple[str, ...]

    def __post_init__(self):
        if len(self.nodes) != len(self.link_ids) + 1:
            raise ValidationError("node/link counts do not line up")
        if len(self.nodes) < 2:
            raise ValidationError("a path needs at least one link")
        if len(set(self.nodes)) != len(self.nodes):
            raise ValidationError("path revisits a node")

    @property
    def hops(self) -> int:
        return len(self.link_ids)


@dataclass(frozen=True)
class RouteResult:
    path: Path
    objective: PathObjective
    method: str


@dataclass(frozen=True)
class ViolationWitness:
    """Evidence that greedy prefix reuse is unsound on a network.

    The canonical best source->ext path passes through mid, but its
    prefix at mid scores strictly worse than the canonical best
    source->mid path.
    """

    source: str
    mid: str
    ext: str
    best_to_mid: Path
    best_to_ext: Path
    mid_objective: PathObjective
    prefix_objective: PathObjective
    ext_objective: PathObjective

    @property
    def margin(self) -> float:
        return self.mid_objective.fidelity - self.prefix_objective.fidelity


class Network:
    """Undirected multigraph whose edges carry two-qubit channels."""

    def __init__(self, nodes, links):
        node_tuple = tuple(sorted(nodes))
        if len(set(node_tuple)) != len(node_tuple):
            raise ValidationError("duplicate node names")
        for name in node_tuple:
            if not isinstance(name, str) or not name:
                raise ValidationError(f"bad node name: {name!r}")
        link_tuple = tuple(sorted(links, key=lambda l: l.link_id))
        ids = [l.link_id for l in link_tuple]
        if len(set(ids)) != len(ids):
            raise ValidationError("duplicate link ids")
        known = set(node_tuple)
        for link in link_tuple:
            if link.u == link.v:
                raise ValidationError(f"link {link.link_id!r} is a self-loop")
            if link.u not in known or link.v not in known:
                raise ValidationError(f"link {link.link_id!r} references unknown nodes")
        self.nodes = node_tuple
        self.links = link_tuple
        self._by_id = {l.link_id: l for l in link_tuple}
        adj: dict[str, list] = {n: [] for n in node_tuple}
        for link in link_tuple:
            adj[link.u].append((link.v, link))
            adj[link.v].append((link.u, link))
        self._adj = {
            n: tuple(sorted(entries, key=lambda e: (e[0], e[1].link_id)))
            for n, entries in adj.items()
        }

    def __repr__(self):
        return f"Network(nodes={len(self.nodes)}, links={len(self.links)})"

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return self.nodes == other.nodes and self.links == other.links

    def link(self, link_id: str) -> Link:
        try:
            return self._by_id[link_id]
        except KeyError:
            raise DomainError(f"unknown link id {link_id!r}") from None

    def neighbors(self, node: str):
        """Sorted (other endpoint, link) pairs incident to a node."""
        try:
            return self._adj[node]
        except KeyError:
            raise DomainError(f"unknown node {node!r}") from None

    def without_links(self, link_ids) -> "Network":
        drop = set(link_ids)
        for link_id in drop:
            self.link(link_id)
        return Network(self.nodes, [l for l in self.links if l.link_id not in drop])

    def with_link(self, link: Link) -> "Network":
        return Network(self.nodes, list(self.links) + [link])


def path_channels(network: Network, path: Path) -> list[ChannelState]:
    """Resolve a path's links to channels, checking it fits the network."""
    channels = []
    for i, link_id in enumerate(path.link_ids):
        link = network.link(link_id)
        if {link.u, link.v} != {path.nodes[i], path.nodes[i + 1]}:
            raise ValidationError(
                f"link {link_id!r} does not join {path.nodes[i]!r} and {path.nodes[i + 1]!r}"
            )
        channels.append(link.channel)
    return channels


def _require_endpoints(network: Network, src: str, dst: str) -> None:
    network.neighbors(src)
    network.neighbors(dst)
    if src == dst:
        raise DomainError("source and destination must differ")


def _link_weight_table(network: Network) -> dict[str, LinkWeights]:
    return {l.link_id: link_weights(l.channel) for l in network.links}


def additive_model_applies(network: Network) -> bool:
    """True when every link has empty inner levels, so the additive
    -ln N model is exact on this network."""
    for link in network.links:
        x = as_x_state(link.channel)
        if x.a22 > ADDITIVE_TOL or x.a33 > ADDITIVE_TOL:
            return False
    return True


def dijkstra_route(network: Network, src: str, dst: str) -> RouteResult:
    """Best route under the additive -ln N model.

    Every link must have empty inner levels or NotAdditiveError is
    raised; separable links (N = 0) cannot carry a route and are skipped.
    The heap key (distance, hops, node sequence, link ids) applies the
    canonical tie-break ordering directly.
    """
    _require_endpoints(network, src, dst)
    usable: dict[str, float] = {}
    for link in network.links:
        x = as_x_state(link.channel)
        if x.a22 > ADDITIVE_TOL or x.a33 > ADDITIVE_TOL:
            raise NotAdditiveError(
                link.link_id,
                f"inner populations a22={x.a22}, a33={x.a33} exceed {ADDITIVE_TOL}",
            )
        n = negativity(x)
        if n > 0.0:
            usable[link.link_id] = max(0.0, -math.log(n))
    heap = [(0.0, 0, (src,), ())]
    done: set[str] = set()
    while heap:
        dist, hops, nodes, link_ids = heapq.heappop(heap)
        node = nodes[-1]
        if node in done:
            continue
        done.add(node)
        if node == dst:
            path = Path(nodes=nodes, link_ids=link_ids)
            mu = 1.0
            nu = 1.0
            for w in (link_weights(c) for c in path_channels(network, path)):
                mu *= w.mu
                nu *= w.nu
            return RouteResult(path=path, objective=PathObjective(mu, nu), method="dijkstra")
        for other, link in network.neighbors(node):
            if other in done or link.link_id not in usable:
                continue
            heapq.heappush(
                heap,
                (dist + usable[link.link_id], hops + 1, nodes + (other,), link_ids + (link.link_id,)),
            )
    raise NoPathError(f"no usable path from {src!r} to {dst!r}")


def exact_route(network: Network, src: str, dst: str) -> RouteResult:
    """Best route over all simple paths, by branch and bound.

    Partial products bound every extension by (2 + |mu| + |nu|) / 4, so a
    branch is dropped only when that bound is strictly below the best
    fidelity found; equal-bound branches must still be explored to keep
    the canonical tie-break.
    """
    _require_endpoints(network, src, dst)
    weights = _link_weight_table(network)
    best_key: tuple | None = None
    best: RouteResult | None = None

    def visit(node, visited, nodes, link_ids, mu, nu):
        nonlocal best_key, best
        if node == dst:
            fid = (2.0 + mu + nu) / 4.0
            key = (-fid, len(link_ids), nodes, link_ids)
            if best_key is None or key < best_key:
                best_key = key
                best = RouteResult(
                    path=Path(nodes=nodes, link_ids=link_ids),
                    objective=PathObjective(mu, nu),
                    method="exact",
                )
            return
        for other, link in network.neighbors(node):
            if other in visited:
                continue
            w = weights[link.link_id]
            mu2 = mu * w.mu
            nu2 = nu * w.nu
            if best_key is not None and (2.0 + abs(mu2) + abs(nu2)) / 4.0 < -best_key[0]:
                continue
            visit(other, visited | {other}, nodes + (other,), link_ids + (link.link_id,), mu2, nu2)

    visit(src, {src}, (src,), (), 1.0, 1.0)
    if best is None:
        raise NoPathError(f"no path from {src!r} to {dst!r}")
    return best


def all_simple_paths(network: Network, src: str, dst: str):
    """Yield every simple path src -> dst as a Path, without pruning."""
    _require_endpoints(network, src, dst)
    out: list[Path] = []

    def visit(node, visited, nodes, link_ids):
        if node == dst:
            out.append(Path(nodes=nodes, link_ids=link_ids))
            return
        for other, link in network.neighbors(node):
            if other in visited:
                continue
            visit(other, visited | {other}, nodes + (other,), link_ids + (link.link_id,))

    visit(src, {src}, (src,), ())
    return out


def check_optimal_substructure(network: Network, source: str, node_cap: int = 12):
    """Search for a prefix-optimality violation from one source.

    Enumerates all simple paths from the source (no pruning), picks the
    canonical best path to every reachable node, and reports the first
    node pair where the best path to ext passes through mid but its
    prefix scores worse than the best path to mid by more than
    VIOLATION_MARGIN. Returns a ViolationWitness or None.
    """
    if len(network.nodes) > node_cap:
        raise CapExceededError(f"network has {len(network.nodes)} nodes, cap is {node_cap}")
    network.neighbors(source)
    weights = _link_weight_table(network)
    best: dict[str, tuple] = {}

    def visit(node, visited, nodes, link_ids, mu, nu):
        if node != source:
            fid = (2.0 + mu + nu) / 4.0
            key = (-fid, len(link_ids), nodes, link_ids)
            cur = best.get(node)
            if cur is None or key < cur[0]:
                best[node] = (key, nodes, link_ids, mu, nu)
        for other, link in network.neighbors(node):
            if other in visited:
                continue
            w = weights[link.link_id]
            visit(other, visited | {other}, nodes + (other,), link_ids + (link.link_id,), mu * w.mu, nu * w.nu)

    visit(source, {source}, (source,), (), 1.0, 1.0)
    for ext in sorted(best):
        _, nodes, link_ids, mu, nu = best[ext]
        prefix_mu = 1.0
        prefix_nu = 1.0
        for i, link_id in enumerate(link_ids[:-1]):
            w = weights[link_id]
            prefix_mu *= w.mu
            prefix_nu *= w.nu
            mid = nodes[i + 1]
            mid_key, mid_nodes, mid_links, mid_mu, mid_nu = best[mid]
            prefix_fid = (2.0 + prefix_mu + prefix_nu) / 4.0
            if -mid_key[0] - prefix_fid > VIOLATION_MARGIN:
                return ViolationWitness(
                    source=source,
                    mid=mid,
                    ext=ext,
                    best_to_mid=Path(nodes=mid_nodes, link_ids=mid_links),
                    best_to_ext=Path(nodes=nodes, link_ids=link_ids),
                    mid_objective=PathObjective(mid_mu, mid_nu),
                    prefix_objective=PathObjective(prefix_mu, prefix_nu),
                    ext_objective=PathObjective(mu, nu),
                )
    return None


def _sample_channel(rng: np.random.Generator, family: str) -> ChannelState:
    if family == "pure":
        return PureSchmidtChannel(math.asin(rng.uniform(0.05, 1.0)) / 2.0)
    if family == "x":
        return random_x_state(rng)
    if family == "werner":
        return WernerGenChannel(rng.uniform(0.4, 1.0), math.asin(rng.uniform(0.3, 1.0)) / 2.0)
    raise DomainError(f"unknown channel family {family!r}")


def _connected(names, edges) -> bool:
    if not names:
        return False
    adj = {n: set() for n in names}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    seen = {names[0]}
    stack = [names[0]]
    while stack:
        for other in adj[stack.pop()]:
            if other not in seen:
                seen.add(other)
                stack.append(other)
    return len(seen) == len(names)


def random_network(
    seed,
    node_count: int,
    link_density: float = 0.6,
    channel_family: str = "x",
) -> Network:
    """Draw a connected random network with one channel per kept pair.

    seed may be an int or a numpy Generator. Node names are N00, N01...
    and link ids L000, L001... in sorted pair order. Gives up after 100
    disconnected draws.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if node_count < 2:
        raise DomainError(f"need at least 2 nodes, got {node_count}")
    if not 0.0 < link_density <= 1.0:
        raise DomainError(f"link_density must be in (0, 1], got {link_density}")
    _sample_channel(np.random.default_rng(0), channel_family)  # reject bad family early
    names = [f"N{i:02d}" for i in range(node_count)]
    pairs = [(names[i], names[j]) for i in range(node_count) for j in range(i + 1, node_count)]
    for _ in range(100):
        kept = [pair for pair in pairs if rng.uniform() < link_density]
        if not _connected(names, kept):
            continue
        links = [
            Link(u, v, f"L{index:03d}", _sample_channel(rng, channel_family))
            for index, (u, v) in enumerate(kept)
        ]
        return Network(names, links)
    raise GenerationError("could not draw a connected network in 100 attempts")


def find_violation(
    seed: int,
    attempts: int = 1000,
    channel_family: str = "x",
    node_range: tuple[int, int] = (4, 6),
    link_density: float = 0.6,
):
    """Search random networks for a prefix-optimality violation.

    Draws networks from a master seed and scans sources in sorted order;
    the first witness wins, so a given seed always reproduces the same
    (network, witness, attempts_used) triple. Raises GenerationError when
    the attempt budget runs out.
    """
    if attempts < 1:
        raise DomainError(f"attempts must be positive, got {attempts}")
    lo, hi = node_range
    if not 2 <= lo <= hi:
        raise DomainError(f"bad node range {node_range}")
    master = np.random.default_rng(seed)
    for attempt in range(1, attempts + 1):
        node_count = int(master.integers(lo, hi + 1))
        net_seed = int(master.integers(0, 2**32))
        network = random_network(net_seed, node_count, link_density, channel_family)
        for source in network.nodes:
            witness = check_optimal_substructure(network, source)
            if witness is not None:
                return network, witness, attempt
    raise GenerationError(f"no violation found in {attempts} attempts")
