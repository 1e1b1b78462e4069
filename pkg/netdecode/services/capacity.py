"""
Capacity arithmetic, the Singleton cut-set bound and checks of the converse arguments
"""
from dataclasses import dataclass
from itertools import combinations, product as cartesian
from typing import Dict, List, Optional, Sequence

from netdecode.core.config import settings
from netdecode.core.exceptions import InstanceTooLargeError, PreconditionError, ValidationError
from netdecode.models.builders import build_diamond, build_mirrored_diamond
from netdecode.models.channel import (
    Alphabet,
    ChannelMap,
    Word,
    blocks_far_apart,
    power,
    projection,
)
from netdecode.models.network import EdgeCut, Network, enumerate_min_cuts, is_isomorphic
from netdecode.services.adversary import ChangeSemantics, Regime
from netdecode.services.schemes import OuterCode
from netdecode.services.search import max_channel_code, max_independent_set
from netdecode.services.transfer import TransferQuery, is_unambiguous
from netdecode.utils.helpers import log_base, round_value
from netdecode.utils.logging import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class CutSetBound:
    """Minimum of the cut objective, per terminal and overall"""
    per_terminal: Dict[int, int]
    value: int
    cut: EdgeCut


def cut_objective(cut: EdgeCut, restricted: Sequence[int], t: int) -> int:
    """|E' minus U| + max(0, |E' and U| - 2t)"""
    attacked = set(restricted)
    inside = len(cut.edges & attacked)
    return len(cut.edges) - inside + max(0, inside - 2 * t)


def singleton_cut_set_bound(n: Network, u: Sequence[int], t: int) -> CutSetBound:
    """Evaluate the cut objective over all minimal cuts

    The objective cannot decrease when an edge is added to a cut, so minimal
    cuts suffice.
    """
    if t < 0:
        raise ValidationError("Budget must be >= 0", details={"t": t})
    known = {e.id for e in n.edges}
    stray = [e for e in u if e not in known]
    if stray:
        raise ValidationError("Restricted edges not in network", details={"edges": stray})

    per_terminal: Dict[int, int] = {}
    best_cut: Optional[EdgeCut] = None
    best_value: Optional[int] = None
    for terminal in n.terminals:
        values = [(cut_objective(cut, u, t), cut) for cut in enumerate_min_cuts(n, terminal)]
        value, cut = min(values, key=lambda pair: pair[0])
        per_terminal[terminal] = value
        if best_value is None or value < best_value:
            best_value, best_cut = value, cut

    logger.debug(f"cut-set bound network={n.name} t={t} value={best_value} cut={best_cut.sorted_edges()}")
    return CutSetBound(per_terminal, best_value, best_cut)


def capacity_value(size: int, a: Alphabet, shots: int) -> float:
    """log_q(size) / shots, rounded for reporting"""
    if size < 1:
        raise ValidationError("Code size must be >= 1", details={"size": size})
    if shots < 1:
        raise ValidationError("Shots must be >= 1", details={"shots": shots})
    return round_value(log_base(size, a.q) / shots, settings.decimals)


def classify_network(n: Network) -> Optional[str]:
    """'diamond', 'mirrored' or 'family_d' when the network is one of them"""
    if n.name.startswith("family_d") and not is_isomorphic(n, build_mirrored_diamond()):
        return "family_d"
    if is_isomorphic(n, build_diamond()):
        return "diamond"
    if is_isomorphic(n, build_mirrored_diamond()):
        return "mirrored"
    return None


def expected_code_size(
    n: Network, regime: Regime, change: ChangeSemantics, q: int, shots: int
) -> Optional[int]:
    """Closed-form maximum code size where one is known, else None"""
    kind = classify_network(n)
    if kind == "diamond":
        if regime == Regime.ONE_SHOT or shots == 1:
            return q - 1
        if regime == Regime.ADAPTIVE:
            return (q - 1) ** shots
        if change == ChangeSemantics.MUST:
            return q ** shots - 1
        return None
    if kind in ("mirrored", "family_d"):
        return q ** shots
    return None


def expected_capacity(
    n: Network, regime: Regime, change: ChangeSemantics, q: int, shots: int
) -> Optional[float]:
    size = expected_code_size(n, regime, change, q, shots)
    if size is None:
        return None
    return capacity_value(size, Alphabet(q), shots)


@dataclass
class LemmaAudit:
    """Pass/fail per check on an unambiguous Diamond code"""
    lane_injective: bool
    first_vertex_injective: bool
    singleton_outputs: int
    inequality_value: int

    @property
    def singleton_ok(self) -> bool:
        return self.singleton_outputs <= 1

    @property
    def inequality_ok(self) -> bool:
        return self.inequality_value <= 0

    @property
    def passed(self) -> bool:
        return self.lane_injective and self.first_vertex_injective and self.singleton_ok and self.inequality_ok

    def to_dict(self) -> Dict:
        return {
            "lane_injective": self.lane_injective,
            "first_vertex_injective": self.first_vertex_injective,
            "singleton_outputs": self.singleton_outputs,
            "singleton_ok": self.singleton_ok,
            "inequality_value": self.inequality_value,
            "inequality_ok": self.inequality_ok,
            "passed": self.passed,
        }


def _diamond_roles(query: TransferQuery) -> Dict[str, int]:
    n = query.network
    if not is_isomorphic(n, build_diamond()):
        raise PreconditionError("Lemma audit needs the Diamond topology", details={"network": n.name})
    if query.from_edges != n.out_edges(n.source):
        raise PreconditionError("Lemma audit needs the source out-edges as from-set")
    v1 = next(v for v in n.intermediate_vertices if n.indegree(v) == 1)
    v2 = next(v for v in n.intermediate_vertices if n.indegree(v) == 2)
    return {
        "v1": v1,
        "v2": v2,
        "e1": n.in_edges(v1)[0],
        "e5": n.out_edges(v2)[0],
    }


def audit_lemmas(code: OuterCode, query: TransferQuery) -> LemmaAudit:
    """Check the structural consequences of unambiguity on the Diamond

    Lane of e1 injective on C; V1's functions injective on that lane; at
    most one codeword with a single possible e5 word; |C|^2 + |C| - 1 <= q^(2i).
    """
    roles = _diamond_roles(query)
    verdict = is_unambiguous(code, query)
    if not verdict:
        raise PreconditionError("Audit needs an unambiguous code", details=verdict.to_dict())

    width = len(query.from_edges)
    lane = query.from_edges.index(roles["e1"]) + 1
    lanes = [projection(x, lane, width) for x in code.codewords]
    lane_injective = len(set(lanes)) == len(lanes)

    images = set()
    for p in set(lanes):
        images.add(tuple(query.scheme.for_round(r)[roles["v1"]]((p[r],))[0] for r in range(query.shots)))
    first_vertex_injective = len(images) == len(set(lanes))

    to_e5 = TransferQuery(
        network=query.network,
        scheme=query.scheme,
        adversary=query.adversary,
        alphabet=query.alphabet,
        shots=query.shots,
        from_edges=query.from_edges,
        to_edges=(roles["e5"],),
    )
    singletons = sum(1 for x in code.codewords if len(to_e5.channel(x)) == 1)

    size = len(code)
    inequality = size * size + size - 1 - query.alphabet.q ** (2 * query.shots)

    audit = LemmaAudit(lane_injective, first_vertex_injective, singletons, inequality)
    logger.debug(f"lemma audit size={size} result={audit.to_dict()}")
    return audit


@dataclass(frozen=True)
class PigeonholeResult:
    """Largest blockwise-distance code against the size claimed impossible"""
    variant: str
    target: int
    largest: int

    @property
    def confirmed(self) -> bool:
        return self.largest < self.target

    def __bool__(self) -> bool:
        return self.confirmed


def pigeonhole_check(a: Alphabet, shots: int, variant: str) -> PigeonholeResult:
    """Exhaustively confirm that no code of the claimed-impossible size is good for H^i

    diamond: words over the non-reserved symbols, blocks of 3, target
    (q-1)^i + 1. mirrored: all words, blocks of 4, target q^i + 1.
    """
    if shots < 1:
        raise ValidationError("Shots must be >= 1", details={"shots": shots})
    if variant == "diamond":
        width, symbols, target = 3, a.data_symbols, (a.q - 1) ** shots + 1
    elif variant == "mirrored":
        width, symbols, target = 4, tuple(a.symbols), a.q ** shots + 1
    else:
        raise ValidationError("Unknown pigeonhole variant", details={"variant": variant})

    domain = a.q ** (width * shots)
    if domain > settings.max_pigeonhole_domain:
        raise InstanceTooLargeError(
            "Pigeonhole domain too large", details={"domain": domain, "limit": settings.max_pigeonhole_domain}
        )

    words: List[Word] = list(cartesian(symbols, repeat=width * shots))
    rows = [0] * len(words)
    for i, j in combinations(range(len(words)), 2):
        if not blocks_far_apart(words[i], words[j], width, 3):
            rows[i] |= 1 << j
            rows[j] |= 1 << i

    chosen, _, _ = max_independent_set(rows, stop_at=target)
    result = PigeonholeResult(variant, target, len(chosen))
    logger.info(f"pigeonhole variant={variant} q={a.q} shots={shots} largest={result.largest} target={target}")
    return result


@dataclass(frozen=True)
class SuperadditivityResult:
    single: int
    power_size: int
    exponent: int

    @property
    def confirmed(self) -> bool:
        return self.power_size >= self.single ** self.exponent

    def __bool__(self) -> bool:
        return self.confirmed


def superadditivity_check(c: ChannelMap, i: int, timeout: Optional[float] = None) -> SuperadditivityResult:
    """Largest code for c^i is at least the i-th power of the largest code for c"""
    if i < 1:
        raise ValidationError("Exponent must be >= 1", details={"i": i})
    single = max_channel_code(c, timeout=timeout).size
    if i == 1:
        return SuperadditivityResult(single, single, 1)
    powered = max_channel_code(power(c, i), timeout=timeout, stop_at=single ** i)
    return SuperadditivityResult(single, powered.size, i)
