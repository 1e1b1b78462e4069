"""
Network model: single-source directed acyclic multigraphs with terminals
"""
import enum
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from netdecode.core.config import settings
from netdecode.core.exceptions import InstanceTooLargeError, ValidationError
from netdecode.utils.logging import get_logger

logger = get_logger(__name__)


class VertexKind(str, enum.Enum):
    """Vertex kind enum"""
    SOURCE = "source"
    INTERMEDIATE = "intermediate"
    TERMINAL = "terminal"


@dataclass(frozen=True)
class Vertex:
    """Network vertex"""
    id: int
    kind: VertexKind


@dataclass(frozen=True)
class Edge:
    """Directed edge; parallel edges differ by multiplicity index"""
    id: int
    tail: int
    head: int
    multiplicity: int = 0

    @property
    def label(self) -> str:
        return f"e{self.id + 1}"

    @property
    def sort_key(self) -> Tuple[int, int, int]:
        return (self.tail, self.head, self.multiplicity)


@dataclass(frozen=True)
class EdgeCut:
    """Set of edges separating the source from one terminal"""
    edges: FrozenSet[int]
    terminal: int

    def sorted_edges(self) -> Tuple[int, ...]:
        return tuple(sorted(self.edges))


@dataclass(frozen=True)
class Network:
    """A network (V, E, S, T) with edge ids following the canonical order"""
    vertices: Tuple[Vertex, ...]
    edges: Tuple[Edge, ...]
    source: int
    terminals: Tuple[int, ...]
    name: str = field(default="custom", compare=False)

    def edge(self, edge_id: int) -> Edge:
        return self.edges[edge_id]

    @cached_property
    def _in_map(self) -> Dict[int, Tuple[int, ...]]:
        incoming: Dict[int, List[int]] = {v.id: [] for v in self.vertices}
        for e in self.edges:
            incoming.setdefault(e.head, []).append(e.id)
        return {v: tuple(sorted(ids)) for v, ids in incoming.items()}

    @cached_property
    def _out_map(self) -> Dict[int, Tuple[int, ...]]:
        outgoing: Dict[int, List[int]] = {v.id: [] for v in self.vertices}
        for e in self.edges:
            outgoing.setdefault(e.tail, []).append(e.id)
        return {v: tuple(sorted(ids)) for v, ids in outgoing.items()}

    def in_edges(self, vertex: int) -> Tuple[int, ...]:
        """in(V), ordered by edge id"""
        return self._in_map.get(vertex, ())

    def out_edges(self, vertex: int) -> Tuple[int, ...]:
        """out(V), ordered by edge id"""
        return self._out_map.get(vertex, ())

    def indegree(self, vertex: int) -> int:
        """deg+(V): number of incoming edges"""
        return len(self.in_edges(vertex))

    def outdegree(self, vertex: int) -> int:
        """deg-(V): number of outgoing edges"""
        return len(self.out_edges(vertex))

    @property
    def intermediate_vertices(self) -> Tuple[int, ...]:
        return tuple(v.id for v in self.vertices if v.kind == VertexKind.INTERMEDIATE)

    @property
    def is_simple(self) -> bool:
        return len(self.terminals) == 1

    def is_two_level(self) -> bool:
        """Simple network in which every source-terminal path has length 2"""
        if not self.is_simple or not self.intermediate_vertices:
            return False
        terminal = self.terminals[0]
        middle = set(self.intermediate_vertices)
        for e in self.edges:
            if not ((e.tail == self.source and e.head in middle) or (e.tail in middle and e.head == terminal)):
                return False
        return all(self.indegree(v) > 0 and self.outdegree(v) > 0 for v in middle)

    def to_digraph(self) -> nx.MultiDiGraph:
        """networkx view keyed by edge id"""
        graph = nx.MultiDiGraph()
        for v in self.vertices:
            graph.add_node(v.id, kind=v.kind.value)
        for e in self.edges:
            graph.add_edge(e.tail, e.head, key=e.id)
        return graph


def make_network(
    pairs: Sequence[Tuple[int, int]],
    terminals: Iterable[int],
    source: int = 0,
    num_vertices: Optional[int] = None,
    name: str = "custom",
) -> Network:
    """Build a network from (tail, head) pairs, assigning canonical edge ids

    Cyclic inputs keep their given edge order so that validate_network can
    report them.
    """
    terminal_ids = tuple(sorted(set(terminals)))
    highest = max([source, *terminal_ids, *(v for pair in pairs for v in pair)], default=0)
    count = max(highest + 1, num_vertices or 0)

    vertices = []
    for vid in range(count):
        if vid == source:
            kind = VertexKind.SOURCE
        elif vid in terminal_ids:
            kind = VertexKind.TERMINAL
        else:
            kind = VertexKind.INTERMEDIATE
        vertices.append(Vertex(vid, kind))

    seen: Counter = Counter()
    raw: List[Edge] = []
    for k, (tail, head) in enumerate(pairs):
        raw.append(Edge(k, int(tail), int(head), seen[(tail, head)]))
        seen[(tail, head)] += 1

    provisional = Network(tuple(vertices), tuple(raw), source, terminal_ids, name)
    try:
        order = edge_order(provisional)
    except ValidationError:
        logger.debug(f"network={name} is cyclic, keeping input edge order")
        return provisional

    edges = tuple(
        Edge(new_id, raw[old].tail, raw[old].head, raw[old].multiplicity)
        for new_id, old in enumerate(order)
    )
    return Network(tuple(vertices), edges, source, terminal_ids, name)


def validate_network(n: Network) -> List[str]:
    """Return one description per violated structural condition"""
    violations: List[str] = []
    graph = n.to_digraph()

    if not n.terminals:
        violations.append("network has no terminal")
    if n.source in n.terminals:
        violations.append(f"source {n.source} is also a terminal")
    if not nx.is_directed_acyclic_graph(graph):
        violations.append("network contains a directed cycle")

    known = {v.id for v in n.vertices}
    for e in n.edges:
        if e.tail not in known or e.head not in known:
            violations.append(f"edge {e.label} joins unknown vertices {e.tail}->{e.head}")
        elif e.tail in n.terminals:
            violations.append(f"edge {e.label} leaves terminal {e.tail}")

    reachable = nx.descendants(graph, n.source) | {n.source}
    coreachable = set()
    for terminal in n.terminals:
        if terminal in graph:
            coreachable |= nx.ancestors(graph, terminal) | {terminal}

    for terminal in n.terminals:
        if terminal not in known:
            violations.append(f"terminal {terminal} is not a vertex")
        elif terminal != n.source and terminal not in reachable:
            violations.append(f"terminal {terminal} is not reachable from source {n.source}")

    for vid in n.intermediate_vertices:
        if vid not in reachable or vid not in coreachable:
            violations.append(f"vertex {vid} does not lie on a source-terminal path")

    return violations


def edge_order(n: Network) -> List[int]:
    """Canonical linear extension of the edge precedence order

    Edges are layered by the topological generation of their tail; ties are
    broken by (tail, head, multiplicity).
    """
    graph = n.to_digraph()
    try:
        generations = list(nx.topological_generations(graph))
    except nx.NetworkXUnfeasible:
        raise ValidationError("Network contains a directed cycle", details={"network": n.name})

    layer = {v: depth for depth, generation in enumerate(generations) for v in generation}
    ordered = sorted(n.edges, key=lambda e: (layer[e.tail], *e.sort_key))
    return [e.id for e in ordered]


def edge_precedes(n: Network, first: int, second: int) -> bool:
    """e1 <= e2: some directed path starts with e1 and ends with e2"""
    if first == second:
        return True
    a, b = n.edge(first), n.edge(second)
    if a.head == b.tail:
        return True
    return nx.has_path(n.to_digraph(), a.head, b.tail)


def _reachable_without(n: Network, removed: Iterable[int]) -> set:
    graph = n.to_digraph()
    graph.remove_edges_from([(n.edge(e).tail, n.edge(e).head, e) for e in removed])
    return nx.descendants(graph, n.source) | {n.source}


def precedes(n: Network, u: Iterable[int], u2: Iterable[int]) -> bool:
    """Every path from the source to an edge of u2 contains an edge of u"""
    first, second = set(u), set(u2)
    if not first or not second:
        raise ValidationError("Edge sets must be non-empty")
    unknown = (first | second) - {e.id for e in n.edges}
    if unknown:
        raise ValidationError("Unknown edge ids", details={"edges": sorted(unknown)})

    reachable = _reachable_without(n, first)
    for e in second - first:
        if n.edge(e).tail in reachable:
            return False
    return True


def is_cut(n: Network, edges: Iterable[int], terminal: int) -> bool:
    """Removing edges disconnects every source-terminal path"""
    return terminal not in _reachable_without(n, edges)


def enumerate_min_cuts(n: Network, terminal: int) -> List[EdgeCut]:
    """All inclusion-minimal source-terminal edge cuts

    Subsets are visited by increasing size; supersets of a known cut are
    skipped, so every cut found is minimal.
    """
    if len(n.edges) > settings.max_cut_edges:
        raise InstanceTooLargeError(
            "Instance too large for cut enumeration",
            details={"edges": len(n.edges), "limit": settings.max_cut_edges},
        )
    if terminal not in n.terminals:
        raise ValidationError("Unknown terminal", details={"terminal": terminal})

    found: List[FrozenSet[int]] = []
    ids = [e.id for e in n.edges]
    for size in range(1, len(ids) + 1):
        for subset in combinations(ids, size):
            candidate = frozenset(subset)
            if any(cut <= candidate for cut in found):
                continue
            if is_cut(n, candidate, terminal):
                found.append(candidate)

    logger.debug(f"network={n.name} terminal={terminal} minimal_cuts={len(found)}")
    return [EdgeCut(cut, terminal) for cut in found]


def isomorphism_certificate(n: Network) -> Tuple:
    """Degree sequence plus parallel-edge multiset, per vertex kind"""
    degrees = sorted((v.kind.value, n.indegree(v.id), n.outdegree(v.id)) for v in n.vertices)
    bundles = Counter((n.vertices[e.tail].kind.value, n.vertices[e.head].kind.value, (e.tail, e.head)) for e in n.edges)
    parallel = sorted((tail_kind, head_kind, count) for (tail_kind, head_kind, _), count in bundles.items())
    return (tuple(degrees), tuple(parallel))


def is_isomorphic(first: Network, second: Network) -> bool:
    """Kind-preserving multigraph isomorphism"""
    if isomorphism_certificate(first) != isomorphism_certificate(second):
        return False
    return nx.is_isomorphic(
        first.to_digraph(),
        second.to_digraph(),
        node_match=lambda a, b: a["kind"] == b["kind"],
    )
