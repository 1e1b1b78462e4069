"""
Restricted adversaries: action spaces under one-shot, static and adaptive regimes
"""
import enum
from dataclasses import dataclass
from itertools import combinations, product
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from netdecode.core.exceptions import ValidationError
from netdecode.models.channel import Alphabet
from netdecode.models.network import Network

# (edge id, replacement symbol) pairs, sorted by edge id
Assignment = Tuple[Tuple[int, int], ...]
# per-round mapping edge id -> transmitted symbol (None when the edge carries nothing)
Transmitted = Sequence[Mapping[int, Optional[int]]]


class Regime(str, enum.Enum):
    """How attacked edges may vary across rounds"""
    ONE_SHOT = "one_shot"
    STATIC = "static"
    ADAPTIVE = "adaptive"


class ChangeSemantics(str, enum.Enum):
    """Whether an attacked edge must carry a different symbol"""
    MUST = "must"
    MAY = "may"


@dataclass(frozen=True)
class AdversaryModel:
    """Adversary corrupting up to t edges of a restricted set"""
    edges: Tuple[int, ...]
    t: int
    regime: Regime = Regime.STATIC
    change: Optional[ChangeSemantics] = None

    def __post_init__(self):
        edges = tuple(sorted(set(int(e) for e in self.edges)))
        if len(edges) != len(tuple(self.edges)):
            raise ValidationError("Restricted edges must be distinct", details={"edges": list(self.edges)})
        if self.t < 0 or self.t > len(edges):
            raise ValidationError("Budget must satisfy 0 <= t <= |U|", details={"t": self.t, "edges": list(edges)})
        regime = Regime(self.regime)
        change = self.change
        if change is None:
            change = ChangeSemantics.MUST if regime == Regime.STATIC else ChangeSemantics.MAY
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "regime", regime)
        object.__setattr__(self, "change", ChangeSemantics(change))

    def check_shots(self, shots: int) -> None:
        if shots < 1:
            raise ValidationError("Shots must be >= 1", details={"shots": shots})
        if self.regime == Regime.ONE_SHOT and shots != 1:
            raise ValidationError("One-shot regime forces shots = 1", details={"shots": shots})

    def check_network(self, network: Network) -> None:
        known = {e.id for e in network.edges}
        stray = [e for e in self.edges if e not in known]
        if stray:
            raise ValidationError("Adversary edges not in network", details={"edges": stray})

    def describe(self) -> str:
        return f"U={list(self.edges)} t={self.t} regime={self.regime.value} change={self.change.value}"


@dataclass(frozen=True)
class AdversaryAction:
    """Per-round assignments of replacement symbols"""
    rounds: Tuple[Assignment, ...]

    @property
    def touched_edges(self) -> Tuple[int, ...]:
        return tuple(sorted({edge for assignment in self.rounds for edge, _ in assignment}))

    @property
    def is_noop(self) -> bool:
        return all(len(assignment) == 0 for assignment in self.rounds)

    def overrides(self, round_index: int) -> Dict[int, int]:
        return dict(self.rounds[round_index])


def _alternatives(sent: Optional[int], q: int) -> List[int]:
    return [v for v in range(q) if v != sent]


def _one_round(edges: Sequence[int], t: int, q: int, sent: Mapping[int, Optional[int]]) -> List[Assignment]:
    """Every effective assignment of at most t changed edges in one round"""
    options: List[Assignment] = []
    for k in range(t + 1):
        for subset in combinations(edges, k):
            for values in product(*[_alternatives(sent.get(e), q) for e in subset]):
                options.append(tuple(zip(subset, values)))
    return options


def _static(model: AdversaryModel, shots: int, q: int, transmitted: Transmitted) -> Iterator[AdversaryAction]:
    must = model.change == ChangeSemantics.MUST
    for k in range(model.t + 1):
        for subset in combinations(model.edges, k):
            per_round = []
            for r in range(shots):
                if must:
                    choices = [_alternatives(transmitted[r].get(e), q) for e in subset]
                else:
                    choices = [list(range(q)) for _ in subset]
                per_round.append(list(product(*choices)))

            for values in product(*per_round):
                rounds = []
                changed = set()
                for r, round_values in enumerate(values):
                    assignment = tuple(
                        (e, v) for e, v in zip(subset, round_values) if v != transmitted[r].get(e)
                    )
                    changed.update(e for e, _ in assignment)
                    rounds.append(assignment)
                # may-change keeps one representative per effective support
                if len(changed) == len(subset):
                    yield AdversaryAction(tuple(rounds))


def enumerate_actions(
    model: AdversaryModel, shots: int, transmitted: Transmitted, alphabet: Alphabet
) -> Iterator[AdversaryAction]:
    """Yield every admissible action exactly once

    Actions list effective changes only: an edge is assigned in a round iff
    its symbol differs from the transmitted one. Order is deterministic:
    supports by size then edge id, replacements ascending, rounds outer to
    inner.
    """
    model.check_shots(shots)
    if len(transmitted) != shots:
        raise ValidationError("Transmitted symbols needed for every round", details={"shots": shots})
    q = alphabet.q

    if model.regime == Regime.STATIC:
        yield from _static(model, shots, q, transmitted)
        return

    per_round = [_one_round(model.edges, model.t, q, transmitted[r]) for r in range(shots)]
    for rounds in product(*per_round):
        yield AdversaryAction(tuple(rounds))


def apply_action(
    action: AdversaryAction, transmitted: Transmitted, model: Optional[AdversaryModel] = None
) -> List[Dict[int, Optional[int]]]:
    """Transmitted symbols with the assigned edges overwritten, per round"""
    if len(action.rounds) != len(transmitted):
        raise ValidationError("Round count mismatch", details={"action": len(action.rounds), "rounds": len(transmitted)})
    if model is not None:
        stray = [e for e in action.touched_edges if e not in model.edges]
        if stray:
            raise ValidationError("Action touches edges outside the restricted set", details={"edges": stray})

    result = []
    for assignment, sent in zip(action.rounds, transmitted):
        symbols = dict(sent)
        symbols.update(assignment)
        result.append(symbols)
    return result


def default_edges(network: Network) -> Tuple[int, ...]:
    """out(S), the usual restricted set"""
    return network.out_edges(network.source)


def count_actions(model: AdversaryModel, shots: int, transmitted: Transmitted, alphabet: Alphabet) -> int:
    return sum(1 for _ in enumerate_actions(model, shots, transmitted, alphabet))
