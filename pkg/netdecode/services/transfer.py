"""
Transfer channels of a network under attack, unambiguity and confusability
"""
import dataclasses
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property, reduce
from itertools import combinations, product as cartesian
from typing import Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

import networkx as nx

from netdecode.core.config import settings
from netdecode.core.exceptions import InstanceTooLargeError, PreconditionError, ValidationError
from netdecode.models.channel import Alphabet, ChannelMap, Word, deterministic_channel, product
from netdecode.models.network import Network, VertexKind, edge_precedes, precedes
from netdecode.services.adversary import (
    AdversaryModel,
    ChangeSemantics,
    Regime,
    apply_action,
    enumerate_actions,
)
from netdecode.services.schemes import NetworkCode, OuterCode
from netdecode.utils.logging import get_logger

logger = get_logger(__name__)

# (vertex, in-edges, out-edges) in topological order
Step = Tuple[int, Tuple[int, ...], Tuple[int, ...]]


def run_round(
    steps: Sequence[Step],
    from_edges: Sequence[int],
    from_set: FrozenSet[int],
    functions: Mapping[int, Callable[[Word], Word]],
    word: Sequence[int],
    overrides: Mapping[int, Optional[int]],
) -> Tuple[Dict[int, int], Set[int]]:
    """One round of forward simulation with replacement symbols on some edges"""
    values: Dict[int, int] = {}
    changed: Set[int] = set()

    def put(edge: int, arriving: int) -> None:
        replacement = overrides.get(edge)
        if replacement is None:
            values[edge] = arriving
            return
        if replacement != arriving:
            changed.add(edge)
        values[edge] = replacement

    for edge, symbol in zip(from_edges, word):
        put(edge, symbol)

    for vid, inputs, outputs in steps:
        result = functions[vid](tuple(values[e] for e in inputs))
        for edge, symbol in zip(outputs, result):
            if edge not in from_set:
                put(edge, symbol)
    return values, changed


@dataclass(frozen=True)
class TransferQuery:
    """Channel from the from-set to the to-set of a network under a code and an adversary

    Words are round-major: round 0 values of the edge set in id order, then
    round 1, and so on.
    """
    network: Network
    scheme: NetworkCode
    adversary: AdversaryModel
    alphabet: Alphabet
    shots: int = 1
    from_edges: Optional[Tuple[int, ...]] = None
    to_edges: Optional[Tuple[int, ...]] = None
    terminal: Optional[int] = None
    explicit_to: bool = field(default=False, init=False, compare=False, repr=False)

    def __post_init__(self):
        n = self.network
        self.adversary.check_shots(self.shots)
        self.adversary.check_network(n)
        self.scheme.validate(n, self.shots, self.alphabet)

        terminal = n.terminals[0] if self.terminal is None else int(self.terminal)
        if terminal not in n.terminals:
            raise ValidationError("Unknown terminal", details={"terminal": terminal})
        from_edges = n.out_edges(n.source) if self.from_edges is None else tuple(sorted(set(self.from_edges)))
        to_edges = n.in_edges(terminal) if self.to_edges is None else tuple(sorted(set(self.to_edges)))
        if not precedes(n, from_edges, to_edges):
            raise PreconditionError(
                "From-set does not precede to-set",
                details={"from": list(from_edges), "to": list(to_edges)},
            )

        object.__setattr__(self, "explicit_to", self.to_edges is not None)
        object.__setattr__(self, "terminal", terminal)
        object.__setattr__(self, "from_edges", from_edges)
        object.__setattr__(self, "to_edges", to_edges)
        undefined = [e for e in to_edges if e not in self.defined_edges]
        if undefined:
            raise PreconditionError("To-set edges carry no symbol", details={"edges": undefined})

    def for_terminal(self, terminal: int) -> "TransferQuery":
        return dataclasses.replace(self, terminal=terminal, to_edges=None)

    @property
    def n_in(self) -> int:
        return self.shots * len(self.from_edges)

    @property
    def n_out(self) -> int:
        return self.shots * len(self.to_edges)

    @cached_property
    def _from_set(self) -> FrozenSet[int]:
        return frozenset(self.from_edges)

    @cached_property
    def _plan(self) -> Tuple[Tuple[Step, ...], FrozenSet[int]]:
        """Vertices evaluated per round and the edges that end up carrying a symbol"""
        n = self.network
        defined: Set[int] = set(self.from_edges)
        steps: List[Step] = []
        for vid in nx.lexicographical_topological_sort(n.to_digraph()):
            if n.vertices[vid].kind != VertexKind.INTERMEDIATE:
                continue
            inputs = n.in_edges(vid)
            if inputs and all(e in defined for e in inputs):
                steps.append((vid, inputs, n.out_edges(vid)))
                defined.update(n.out_edges(vid))
        return tuple(steps), frozenset(defined)

    @property
    def steps(self) -> Tuple[Step, ...]:
        return self._plan[0]

    @property
    def defined_edges(self) -> FrozenSet[int]:
        return self._plan[1]

    @cached_property
    def adversary_is_antichain(self) -> bool:
        """No attacked edge lies downstream of another"""
        return not any(
            edge_precedes(self.network, a, b) or edge_precedes(self.network, b, a)
            for a, b in combinations(self.adversary.edges, 2)
        )

    @cached_property
    def channel(self) -> ChannelMap:
        """Memoized ChannelMap view of transfer_set"""
        return ChannelMap(self.alphabet, self.n_in, self.n_out, self.transfer_set, name=self.describe())

    def describe(self) -> str:
        return (
            f"{self.network.name}[{list(self.from_edges)}->{list(self.to_edges)}]"
            f" q={self.alphabet.q} shots={self.shots} {self.adversary.describe()}"
        )

    def split_rounds(self, x: Sequence[int]) -> List[Word]:
        width = len(self.from_edges)
        x = tuple(x)
        if len(x) != self.n_in or not self.alphabet.contains(x):
            raise ValidationError(
                "Word does not match the transfer query",
                details={"word": list(x), "expected_length": self.n_in, "q": self.alphabet.q},
            )
        return [x[r * width:(r + 1) * width] for r in range(self.shots)]

    def simulate_round(
        self, r: int, word: Sequence[int], overrides: Mapping[int, Optional[int]]
    ) -> Tuple[Dict[int, int], Set[int]]:
        """Forward pass of round r in edge order

        Returns the symbol on every defined edge and the edges whose override
        differed from the arriving symbol. Overrides on undefined edges are
        ignored.
        """
        return run_round(self._plan[0], self.from_edges, self._from_set, self.scheme.for_round(r), word, overrides)

    def clean_output(self, x: Sequence[int]) -> Word:
        """To-set word when nothing is attacked"""
        word: List[int] = []
        for r, part in enumerate(self.split_rounds(x)):
            values, _ = self.simulate_round(r, part, {})
            word.extend(values[e] for e in self.to_edges)
        return tuple(word)

    def transfer_set(self, x: Sequence[int]) -> Tuple[Word, ...]:
        """Every to-set word some admissible action can produce from x, sorted"""
        rounds = self.split_rounds(x)
        if self.adversary_is_antichain:
            outputs = self._enumerated_outputs(rounds)
        else:
            outputs = self._dynamic_outputs(rounds)
        return tuple(sorted(outputs))

    def _enumerated_outputs(self, rounds: List[Word]) -> Set[Word]:
        clean = [self.simulate_round(r, part, {})[0] for r, part in enumerate(rounds)]
        transmitted = [{e: values.get(e) for e in self.adversary.edges} for values in clean]

        outputs: Set[Word] = set()
        for action in enumerate_actions(self.adversary, self.shots, transmitted, self.alphabet):
            corrupted = apply_action(action, transmitted, self.adversary)
            word: List[int] = []
            for r, part in enumerate(rounds):
                values, _ = self.simulate_round(r, part, corrupted[r])
                word.extend(values[e] for e in self.to_edges)
            outputs.add(tuple(word))
        return outputs

    def _round_attacks(self, k: int) -> Iterable[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
        for subset in combinations(self.adversary.edges, k):
            for values in cartesian(range(self.alphabet.q), repeat=k):
                yield subset, values

    def _dynamic_outputs(self, rounds: List[Word]) -> Set[Word]:
        """Attacked edges in series: must-change is judged on the arriving symbol"""
        model = self.adversary
        must = model.change == ChangeSemantics.MUST
        defined = self.defined_edges

        def admissible(subset: Sequence[int], changed: Set[int]) -> bool:
            return not must or all(e in changed for e in subset if e in defined)

        if model.regime == Regime.STATIC:
            outputs: Set[Word] = set()
            for k in range(model.t + 1):
                for subset in combinations(model.edges, k):
                    for values in cartesian(cartesian(range(self.alphabet.q), repeat=k), repeat=self.shots):
                        word: List[int] = []
                        for r, part in enumerate(rounds):
                            symbols, changed = self.simulate_round(r, part, dict(zip(subset, values[r])))
                            if not admissible(subset, changed):
                                break
                            word.extend(symbols[e] for e in self.to_edges)
                        else:
                            outputs.add(tuple(word))
            return outputs

        per_round: List[List[Word]] = []
        for r, part in enumerate(rounds):
            seen: Set[Word] = set()
            for k in range(model.t + 1):
                for subset, values in self._round_attacks(k):
                    symbols, changed = self.simulate_round(r, part, dict(zip(subset, values)))
                    if admissible(subset, changed):
                        seen.add(tuple(symbols[e] for e in self.to_edges))
            per_round.append(sorted(seen))
        return {tuple(s for piece in combo for s in piece) for combo in cartesian(*per_round)}


@dataclass(frozen=True)
class UnambiguityResult:
    """Outcome of an unambiguity check, with a witness on failure"""
    unambiguous: bool
    first: Optional[Word] = None
    second: Optional[Word] = None
    output: Optional[Word] = None
    terminal: Optional[int] = None

    def __bool__(self) -> bool:
        return self.unambiguous

    def to_dict(self) -> Dict:
        return {
            "unambiguous": self.unambiguous,
            "first": list(self.first) if self.first is not None else None,
            "second": list(self.second) if self.second is not None else None,
            "output": list(self.output) if self.output is not None else None,
            "terminal": self.terminal,
        }


def terminal_queries(query: TransferQuery) -> List[TransferQuery]:
    """One query per terminal unless the to-set was given explicitly"""
    if query.explicit_to or len(query.network.terminals) == 1:
        return [query]
    return [query.for_terminal(t) for t in query.network.terminals]


def is_unambiguous(code: Iterable[Sequence[int]], query: TransferQuery) -> UnambiguityResult:
    """Transfer sets of distinct codewords are disjoint at every terminal

    Codewords are visited in sorted order; the first shared output found is
    reported.
    """
    words = sorted(set(tuple(w) for w in code))
    for sub in terminal_queries(query):
        owner: Dict[Word, Word] = {}
        for codeword in words:
            for output in sub.channel(codeword):
                holder = owner.setdefault(output, codeword)
                if holder != codeword:
                    logger.debug(f"ambiguous pair first={holder} second={codeword} output={output}")
                    return UnambiguityResult(False, holder, codeword, output, sub.terminal)
    return UnambiguityResult(True)


def transfer_outputs(code: OuterCode, query: TransferQuery) -> Dict[Word, Tuple[Word, ...]]:
    """Codeword -> transfer set, the input of decode_table"""
    return {codeword: query.channel(codeword) for codeword in code.codewords}


@dataclass(frozen=True)
class ConfusabilityGraph:
    """Candidates joined when their outputs intersect at some terminal

    Adjacency rows are bitmasks over the vertex order.
    """
    vertices: Tuple[Word, ...]
    adjacency: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def edges(self) -> List[Tuple[int, int]]:
        pairs = []
        for i, row in enumerate(self.adjacency):
            for j in _bits(row >> (i + 1)):
                pairs.append((i, i + 1 + j))
        return pairs

    def adjacent(self, i: int, j: int) -> bool:
        return bool(self.adjacency[i] >> j & 1)

    def is_independent(self, indices: Iterable[int]) -> bool:
        chosen = list(indices)
        return not any(self.adjacent(i, j) for i, j in combinations(chosen, 2))

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(len(self.vertices)))
        graph.add_edges_from(self.edges)
        return graph


def _bits(mask: int) -> Iterable[int]:
    index = 0
    while mask:
        if mask & 1:
            yield index
        mask >>= 1
        index += 1


def conflict_rows(outputs: Sequence[Iterable[Word]], rows: Optional[List[int]] = None) -> List[int]:
    """Merge output-sharing conflicts into bitmask rows"""
    rows = rows if rows is not None else [0] * len(outputs)
    owners: Dict[Word, int] = {}
    for i, produced in enumerate(outputs):
        bit = 1 << i
        for y in produced:
            owners[y] = owners.get(y, 0) | bit
    for mask in owners.values():
        if mask & (mask - 1):
            for i in _bits(mask):
                rows[i] |= mask
    for i in range(len(rows)):
        rows[i] &= ~(1 << i)
    return rows


def check_candidate_count(count: int) -> None:
    if count > settings.max_candidates:
        raise InstanceTooLargeError(
            "Too many candidate codewords",
            details={"candidates": count, "limit": settings.max_candidates},
        )


def build_confusability(
    candidates: Iterable[Sequence[int]], query: TransferQuery, workers: int = 1
) -> ConfusabilityGraph:
    """Pairwise-conflict graph over the candidates in sorted order"""
    vertices = tuple(sorted(set(tuple(w) for w in candidates)))
    check_candidate_count(len(vertices))

    rows = [0] * len(vertices)
    for sub in terminal_queries(query):
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                outputs = list(pool.map(sub.channel, vertices))
        else:
            outputs = [sub.channel(v) for v in vertices]
        conflict_rows(outputs, rows)

    graph = ConfusabilityGraph(vertices, tuple(rows))
    logger.debug(f"confusability vertices={len(vertices)} query={query.describe()}")
    return graph


def channel_confusability(candidates: Iterable[Sequence[int]], channel: ChannelMap) -> ConfusabilityGraph:
    """Conflict graph for a bare channel"""
    vertices = tuple(sorted(set(tuple(w) for w in candidates)))
    check_candidate_count(len(vertices))
    return ConfusabilityGraph(vertices, tuple(conflict_rows([channel(v) for v in vertices])))


def scheme_channel(query: TransferQuery, r: int = 0) -> ChannelMap:
    """Deterministic map of round r with no attack"""
    width = len(query.from_edges)

    def fn(word):
        values, _ = query.simulate_round(r, word, {})
        return tuple(values[e] for e in query.to_edges)

    return deterministic_channel(query.alphabet, width, len(query.to_edges), fn, name=f"scheme(round={r})")


def network_round_channel(query: TransferQuery, r: int = 0) -> ChannelMap:
    """One-shot transfer channel of round r with that round's network code"""
    model = query.adversary
    single = TransferQuery(
        network=query.network,
        scheme=NetworkCode((query.scheme.rounds[r],)),
        adversary=AdversaryModel(model.edges, model.t, Regime.ONE_SHOT, model.change),
        alphabet=query.alphabet,
        shots=1,
        from_edges=query.from_edges,
        to_edges=query.to_edges,
        terminal=query.terminal,
    )
    return single.channel


def multishot_product_channel(query: TransferQuery) -> ChannelMap:
    """Product of the per-round channels, i uses of the network"""
    return reduce(product, [network_round_channel(query, r) for r in range(query.shots)])
