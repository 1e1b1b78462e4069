"""
Exact maximum unambiguous code search and exhaustive network-code sweeps
"""
import random
import time
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Sequence, Set, Tuple

from tqdm import tqdm

from netdecode.core.config import settings
from netdecode.core.exceptions import InstanceTooLargeError, NetDecodeException, ValidationError
from netdecode.models.channel import Alphabet, ChannelMap, Word, channel_code_is_unambiguous
from netdecode.models.network import Network
from netdecode.services.adversary import AdversaryModel, apply_action, enumerate_actions
from netdecode.services.schemes import (
    NetworkCode,
    VertexFunction,
    code_repetition,
    count_tables,
    tables_from_index,
    word_rank,
)
from netdecode.services.transfer import (
    TransferQuery,
    build_confusability,
    channel_confusability,
    check_candidate_count,
    conflict_rows,
    is_unambiguous,
    run_round,
)
from netdecode.utils.logging import get_logger

logger = get_logger(__name__)


class _StopSearch(Exception):
    pass


class _CliqueSearch:
    """Branch and bound for a maximum clique of the non-conflict graph

    Vertices are colored greedily, lowest index first; the color count bounds
    the clique size reachable from a candidate set.
    """

    def __init__(
        self,
        rows: Sequence[int],
        deadline: Optional[float],
        stop_at: Optional[int],
        floor: int,
    ):
        count = len(rows)
        full = (1 << count) - 1
        self.count = count
        self.compatible = [full & ~rows[i] & ~(1 << i) for i in range(count)]
        self.deadline = deadline
        self.stop_at = stop_at
        self.best: List[int] = []
        self.best_size = floor
        self.timed_out = False
        self.stopped = False
        self.nodes = 0

    def _record(self, chosen: List[int]) -> None:
        self.best = list(chosen)
        self.best_size = len(chosen)
        if self.stop_at is not None and self.best_size >= self.stop_at:
            self.stopped = True
            raise _StopSearch()

    def _greedy(self) -> List[int]:
        chosen: List[int] = []
        pool = (1 << self.count) - 1
        while pool:
            low = pool & -pool
            v = low.bit_length() - 1
            chosen.append(v)
            pool &= self.compatible[v]
        return chosen

    def _color(self, pool: int) -> Tuple[List[int], List[int]]:
        order: List[int] = []
        bounds: List[int] = []
        color = 0
        uncolored = pool
        while uncolored:
            color += 1
            open_set = uncolored
            while open_set:
                low = open_set & -open_set
                v = low.bit_length() - 1
                open_set &= ~low & ~self.compatible[v]
                uncolored &= ~low
                order.append(v)
                bounds.append(color)
        return order, bounds

    def _expand(self, chosen: List[int], pool: int) -> None:
        self.nodes += 1
        if self.deadline is not None and time.monotonic() > self.deadline:
            self.timed_out = True
            raise _StopSearch()

        order, bounds = self._color(pool)
        for k in range(len(order) - 1, -1, -1):
            if len(chosen) + bounds[k] <= self.best_size:
                return
            v = order[k]
            chosen.append(v)
            narrowed = pool & self.compatible[v]
            if narrowed:
                self._expand(chosen, narrowed)
            elif len(chosen) > self.best_size:
                self._record(chosen)
            chosen.pop()
            pool &= ~(1 << v)

    def run(self) -> List[int]:
        if self.count == 0:
            return []
        try:
            seed = self._greedy()
            if len(seed) > self.best_size:
                self._record(seed)
            self._expand([], (1 << self.count) - 1)
        except _StopSearch:
            pass
        return sorted(self.best)


def max_independent_set(
    rows: Sequence[int],
    timeout: Optional[float] = None,
    stop_at: Optional[int] = None,
    floor: int = 0,
) -> Tuple[List[int], bool, int]:
    """Maximum independent set of a conflict graph given as bitmask rows

    Only sets larger than floor are reported. Returns (indices, interrupted,
    search nodes). A search cut short by the timeout or by reaching stop_at is
    interrupted and its indices are only the best found so far.
    """
    deadline = None if timeout is None else time.monotonic() + timeout
    search = _CliqueSearch(rows, deadline, stop_at, floor)
    chosen = search.run()
    return chosen, search.timed_out or search.stopped, search.nodes


@dataclass(frozen=True)
class SearchResult:
    """Largest code found; lower_bound marks an interrupted search"""
    size: int
    code: Tuple[Word, ...]
    lower_bound: bool
    elapsed: float
    nodes: int = 0


@dataclass(frozen=True)
class SweepResult:
    """Best network code of an exhaustive sweep"""
    size: int
    code: Tuple[Word, ...]
    scheme: Tuple[VertexFunction, ...]
    scheme_index: int
    schemes_visited: int
    schemes_total: int
    lower_bound: bool
    elapsed: float


def candidate_words(query: TransferQuery, mode: str = "all") -> List[Word]:
    """Candidate codewords: all words, words avoiding the reserved symbol, or repetition words"""
    a = query.alphabet
    if mode == "all":
        return list(a.words(query.n_in))
    if mode == "no_star":
        return [w for w in a.words(query.n_in) if a.star not in w]
    if mode == "repetition":
        if query.from_edges != query.network.out_edges(query.network.source):
            raise ValidationError("Repetition candidates need the source out-edges as from-set")
        return list(code_repetition(a, query.network, query.shots).codewords)
    raise ValidationError("Unknown candidate restriction", details={"candidates": mode})


def _remaining(deadline: Optional[float]) -> Optional[float]:
    return None if deadline is None else max(deadline - time.monotonic(), 0.0)


def max_unambiguous(
    query: TransferQuery,
    candidates: Optional[Iterable[Sequence[int]]] = None,
    timeout: Optional[float] = None,
    workers: int = 1,
    stop_at: Optional[int] = None,
) -> SearchResult:
    """Largest unambiguous code among the candidates for a fixed network code

    The returned code is re-checked with is_unambiguous.
    """
    started = time.monotonic()
    words = candidate_words(query) if candidates is None else list(candidates)
    if not words:
        raise ValidationError("Candidate set must be non-empty")
    check_candidate_count(len(set(tuple(w) for w in words)))

    graph = build_confusability(words, query, workers=workers)
    remaining = None if timeout is None else max(timeout - (time.monotonic() - started), 0.0)
    chosen, interrupted, nodes = max_independent_set(graph.adjacency, remaining, stop_at)
    code = tuple(graph.vertices[i] for i in chosen)

    verdict = is_unambiguous(code, query)
    if not verdict:
        raise NetDecodeException("Search produced an ambiguous code", details=verdict.to_dict())

    elapsed = time.monotonic() - started
    if interrupted:
        logger.warning(f"search stopped early size>={len(code)} query={query.describe()}")
    else:
        logger.info(f"search size={len(code)} candidates={len(graph)} nodes={nodes} query={query.describe()}")
    return SearchResult(len(code), code, interrupted, elapsed, nodes)


def max_channel_code(
    channel: ChannelMap,
    candidates: Optional[Iterable[Sequence[int]]] = None,
    timeout: Optional[float] = None,
    stop_at: Optional[int] = None,
) -> SearchResult:
    """Largest code with pairwise-disjoint outputs for a bare channel"""
    started = time.monotonic()
    words = list(channel.domain()) if candidates is None else list(candidates)
    if not words:
        raise ValidationError("Candidate set must be non-empty")

    graph = channel_confusability(words, channel)
    chosen, interrupted, nodes = max_independent_set(graph.adjacency, timeout, stop_at)
    code = tuple(graph.vertices[i] for i in chosen)
    if not channel_code_is_unambiguous(code, channel):
        raise NetDecodeException("Search produced an ambiguous code", details={"channel": channel.name})
    logger.debug(f"channel={channel.name} size={len(code)} nodes={nodes}")
    return SearchResult(len(code), code, interrupted, time.monotonic() - started, nodes)


Evaluator = Callable[[Tuple[VertexFunction, ...]], List[int]]


def _source_evaluator(base: TransferQuery, words: Sequence[Word]) -> Evaluator:
    """Attacked edges all leave the source: corrupt once, then map per scheme"""
    a = base.alphabet
    model = base.adversary
    attacked = set(model.edges)
    width = len(base.from_edges)

    corrupted: List[Tuple[Tuple[int, ...], ...]] = []
    for word in words:
        rounds = base.split_rounds(word)
        transmitted = [
            {e: part[k] for k, e in enumerate(base.from_edges) if e in attacked} for part in rounds
        ]
        seen: Set[Tuple[int, ...]] = set()
        for action in enumerate_actions(model, base.shots, transmitted, a):
            applied = apply_action(action, transmitted, model)
            seen.add(tuple(
                word_rank([applied[r].get(e, rounds[r][k]) for k, e in enumerate(base.from_edges)], a.q)
                for r in range(base.shots)
            ))
        corrupted.append(tuple(sorted(seen)))

    round_words = list(a.words(width))
    from_set = frozenset(base.from_edges)

    def evaluate(functions: Tuple[VertexFunction, ...]) -> List[int]:
        lookup = {f.vertex: f for f in functions}
        image = []
        for round_word in round_words:
            values, _ = run_round(base.steps, base.from_edges, from_set, lookup, round_word, {})
            image.append(tuple(values[e] for e in base.to_edges))
        outputs = [
            {tuple(s for r in ranks for s in image[r]) for ranks in options} for options in corrupted
        ]
        return conflict_rows(outputs)

    return evaluate


def _query_evaluator(base: TransferQuery, words: Sequence[Word]) -> Evaluator:
    def evaluate(functions: Tuple[VertexFunction, ...]) -> List[int]:
        query = TransferQuery(
            network=base.network,
            scheme=NetworkCode.repeat(functions, base.shots),
            adversary=base.adversary,
            alphabet=base.alphabet,
            shots=base.shots,
        )
        return list(build_confusability(words, query).adjacency)

    return evaluate


def sweep_schemes(
    network: Network,
    alphabet: Alphabet,
    adversary: AdversaryModel,
    shots: int = 1,
    target: Optional[int] = None,
    timeout: Optional[float] = None,
    seed: int = 0,
    candidates: Optional[Iterable[Sequence[int]]] = None,
    progress: bool = False,
) -> SweepResult:
    """Best code size over every network code (same tables each round)

    Schemes are numbered by a mixed-radix index over the vertex tables. Ties
    go to the lowest index, so the result does not depend on the seed; the
    seed only shuffles the visiting order. Reaching the target ends the sweep
    at the lowest index that reaches it, and the size is then a lower bound.
    """
    started = time.monotonic()
    total = count_tables(network, alphabet)
    if total > settings.max_scheme_tables:
        raise InstanceTooLargeError(
            "Too many network codes for an exhaustive sweep, use fixed-scheme search",
            details={"schemes": total, "limit": settings.max_scheme_tables},
        )

    base = TransferQuery(
        network=network,
        scheme=NetworkCode.repeat(tables_from_index(network, alphabet, 0), shots),
        adversary=adversary,
        alphabet=alphabet,
        shots=shots,
    )
    words = sorted(set(tuple(w) for w in candidates)) if candidates is not None else candidate_words(base)
    if not words:
        raise ValidationError("Candidate set must be non-empty")
    check_candidate_count(len(words))

    from_source = network.is_simple and set(adversary.edges) <= set(base.from_edges)
    evaluate = _source_evaluator(base, words) if from_source else _query_evaluator(base, words)

    order = list(range(total))
    if seed:
        random.Random(seed).shuffle(order)
    deadline = None if timeout is None else started + timeout

    best_size, best_index, best_chosen = 0, -1, []
    seen: Set[int] = set()
    lower_bound = False
    reached = False
    for index in tqdm(order, desc="schemes", disable=not progress):
        if deadline is not None and time.monotonic() > deadline:
            lower_bound = True
            break
        rows = evaluate(tables_from_index(network, alphabet, index))
        floor = best_size if best_index < 0 or index > best_index else best_size - 1
        chosen, interrupted, _ = max_independent_set(rows, _remaining(deadline), target, max(floor, 0))
        seen.add(index)
        if chosen and (len(chosen) > best_size or index < best_index):
            best_size, best_index, best_chosen = len(chosen), index, chosen
        if target is not None and best_size >= target:
            reached = True
            break
        if interrupted:
            lower_bound = True
            break

    if reached:
        # Schemes seen before the stop are below the target; the lowest
        # unseen index that reaches it is the reported scheme.
        lower_bound = True
        for index in range(best_index):
            if index in seen:
                continue
            if deadline is not None and time.monotonic() > deadline:
                break
            rows = evaluate(tables_from_index(network, alphabet, index))
            chosen, _, _ = max_independent_set(rows, _remaining(deadline), target, target - 1)
            seen.add(index)
            if chosen:
                best_index = index
                break
        rows = evaluate(tables_from_index(network, alphabet, best_index))
        best_chosen, _, _ = max_independent_set(rows, None, target, target - 1)
        best_size = len(best_chosen)
    visited = len(seen)

    if best_index < 0:
        logger.warning(f"sweep network={network.name} stopped before the first scheme")
        return SweepResult(0, (), (), -1, visited, total, True, time.monotonic() - started)

    scheme = tables_from_index(network, alphabet, best_index)
    code = tuple(words[i] for i in best_chosen)
    check = TransferQuery(network, NetworkCode.repeat(scheme, shots), adversary, alphabet, shots)
    verdict = is_unambiguous(code, check)
    if not verdict:
        raise NetDecodeException("Sweep produced an ambiguous code", details=verdict.to_dict())

    elapsed = time.monotonic() - started
    logger.info(
        f"sweep network={network.name} q={alphabet.q} shots={shots} best={best_size} "
        f"index={best_index} visited={visited}/{total}"
    )
    return SweepResult(best_size, code, scheme, best_index, visited, total, lower_bound, elapsed)
