"""
Network codes (per-vertex lookup tables) and outer codes
"""
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from netdecode.core.exceptions import AmbiguousCodeError, ValidationError
from netdecode.models.channel import Alphabet, Word
from netdecode.models.network import Network
from netdecode.models.builders import build_diamond


def word_rank(word: Sequence[int], q: int) -> int:
    """Lexicographic base-q rank of a word"""
    rank = 0
    for symbol in word:
        rank = rank * q + symbol
    return rank


@dataclass(frozen=True)
class VertexFunction:
    """Total lookup table A^deg+(V) -> A^deg-(V), indexed by input rank"""
    vertex: int
    arity_in: int
    arity_out: int
    q: int
    table: Tuple[Word, ...]

    def __post_init__(self):
        if len(self.table) != self.q ** self.arity_in:
            raise ValidationError(
                "Vertex table is not total",
                details={"vertex": self.vertex, "rows": len(self.table), "expected": self.q ** self.arity_in},
            )
        for row in self.table:
            if len(row) != self.arity_out or any(not 0 <= s < self.q for s in row):
                raise ValidationError("Malformed vertex table row", details={"vertex": self.vertex, "row": list(row)})

    @classmethod
    def from_rule(
        cls, vertex: int, arity_in: int, arity_out: int, q: int, rule: Callable[[Word], Sequence[int]]
    ) -> "VertexFunction":
        table = tuple(tuple(rule(inputs)) for inputs in product(range(q), repeat=arity_in))
        return cls(vertex, arity_in, arity_out, q, table)

    def __call__(self, inputs: Sequence[int]) -> Word:
        return self.table[word_rank(inputs, self.q)]


@dataclass(frozen=True)
class NetworkCode:
    """One family of vertex functions per transmission round"""
    rounds: Tuple[Tuple[VertexFunction, ...], ...]

    @classmethod
    def repeat(cls, functions: Iterable[VertexFunction], shots: int) -> "NetworkCode":
        """Same network code in every round"""
        if shots < 1:
            raise ValidationError("Shots must be >= 1", details={"shots": shots})
        fixed = tuple(sorted(functions, key=lambda f: f.vertex))
        return cls(tuple(fixed for _ in range(shots)))

    @property
    def shots(self) -> int:
        return len(self.rounds)

    @cached_property
    def _lookup(self) -> Tuple[Dict[int, VertexFunction], ...]:
        return tuple({f.vertex: f for f in functions} for functions in self.rounds)

    def for_round(self, r: int) -> Dict[int, VertexFunction]:
        return self._lookup[r]

    def validate(self, network: Network, shots: int, alphabet: Alphabet) -> None:
        if self.shots != shots:
            raise ValidationError("Round count mismatch", details={"rounds": self.shots, "shots": shots})
        middle = set(network.intermediate_vertices)
        for r, lookup in enumerate(self._lookup):
            if set(lookup) != middle:
                raise ValidationError(
                    "Network code must cover every intermediate vertex",
                    details={"round": r, "vertices": sorted(lookup), "expected": sorted(middle)},
                )
            for vid, fn in lookup.items():
                if (fn.arity_in, fn.arity_out, fn.q) != (network.indegree(vid), network.outdegree(vid), alphabet.q):
                    raise ValidationError(
                        "Vertex function arity mismatch",
                        details={"round": r, "vertex": vid, "in": fn.arity_in, "out": fn.arity_out},
                    )


@dataclass(frozen=True)
class OuterCode:
    """Source codebook; words are round-major over out(S)"""
    codewords: Tuple[Word, ...]

    def __post_init__(self):
        words = tuple(sorted(set(tuple(w) for w in self.codewords)))
        if not words:
            raise ValidationError("Outer code must be non-empty")
        if len(words) != len(self.codewords):
            raise ValidationError("Outer code words must be distinct")
        if len({len(w) for w in words}) != 1:
            raise ValidationError("Outer code words must have equal length")
        object.__setattr__(self, "codewords", words)

    def __len__(self) -> int:
        return len(self.codewords)

    def __iter__(self):
        return iter(self.codewords)

    @property
    def length(self) -> int:
        return len(self.codewords[0])


def _replicated(value: int, width: int) -> Word:
    return tuple([value] * width)


def scheme_diamond_star(a: Alphabet, network: Optional[Network] = None) -> Tuple[VertexFunction, ...]:
    """V1 forwards; V2 forwards a match and flags a mismatch with the reserved symbol"""
    network = network or build_diamond()
    by_indegree = sorted(network.intermediate_vertices, key=network.indegree)
    v1, v2 = by_indegree[0], by_indegree[-1]
    if network.indegree(v1) != 1 or network.indegree(v2) != 2:
        raise ValidationError("Diamond scheme needs the Diamond topology", details={"network": network.name})
    forward = VertexFunction.from_rule(v1, 1, 1, a.q, lambda x: x)
    compare = VertexFunction.from_rule(v2, 2, 1, a.q, lambda x: (x[0],) if x[0] == x[1] else (a.star,))
    return (forward, compare)


def strict_majority(inputs: Sequence[int], flag: int) -> int:
    """Value held by more than half of the inputs, else flag"""
    value, count = Counter(inputs).most_common(1)[0]
    return value if 2 * count > len(inputs) else flag


def scheme_compare_flag(a: Alphabet, network: Network) -> Tuple[VertexFunction, ...]:
    """Every intermediate vertex emits the strict majority of its inputs, else the reserved symbol"""
    if not network.is_two_level():
        raise ValidationError("compare_flag needs a simple two-level network", details={"network": network.name})
    functions = []
    for vid in network.intermediate_vertices:
        width = network.outdegree(vid)
        functions.append(
            VertexFunction.from_rule(
                vid,
                network.indegree(vid),
                width,
                a.q,
                lambda x, width=width: _replicated(strict_majority(x, a.star), width),
            )
        )
    return tuple(functions)


def scheme_identity(a: Alphabet, network: Network) -> Tuple[VertexFunction, ...]:
    """Out-edge k forwards in-edge min(k, indeg - 1)"""
    functions = []
    for vid in network.intermediate_vertices:
        arity_in, arity_out = network.indegree(vid), network.outdegree(vid)
        functions.append(
            VertexFunction.from_rule(
                vid,
                arity_in,
                arity_out,
                a.q,
                lambda x, k_out=arity_out: tuple(x[min(k, len(x) - 1)] for k in range(k_out)),
            )
        )
    return tuple(functions)


def scheme_from_tables(a: Alphabet, network: Network, tables: Mapping[int, Sequence[Sequence[int]]]) -> Tuple[VertexFunction, ...]:
    """Explicit tables: one row per input tuple, in rank order"""
    functions = []
    for vid in network.intermediate_vertices:
        if vid not in tables:
            raise ValidationError("Missing table for vertex", details={"vertex": vid})
        rows = tuple(tuple(int(s) for s in row) for row in tables[vid])
        functions.append(VertexFunction(vid, network.indegree(vid), network.outdegree(vid), a.q, rows))
    return tuple(functions)


def code_diamond_multishot(a: Alphabet, shots: int) -> OuterCode:
    """(a | a | a) for every a in A^shots except the all-reserved word"""
    if shots < 1:
        raise ValidationError("Shots must be >= 1", details={"shots": shots})
    banned = _replicated(a.star, shots)
    words = []
    for lane in a.words(shots):
        if lane == banned:
            continue
        words.append(tuple(s for symbol in lane for s in (symbol, symbol, symbol)))
    return OuterCode(tuple(words))


def code_repetition(a: Alphabet, network: Network, shots: int, restrict_star: bool = False) -> OuterCode:
    """Each round the source repeats one symbol on every out-edge"""
    if shots < 1:
        raise ValidationError("Shots must be >= 1", details={"shots": shots})
    width = network.outdegree(network.source)
    symbols = a.data_symbols if restrict_star else tuple(a.symbols)
    words = []
    for lane in product(symbols, repeat=shots):
        words.append(tuple(s for symbol in lane for s in _replicated(symbol, width)))
    return OuterCode(tuple(words))


def decode_table(code: OuterCode, outputs: Mapping[Word, Iterable[Word]]) -> Dict[Word, Word]:
    """Inverse lookup output -> codeword; fails on overlapping output sets"""
    table: Dict[Word, Word] = {}
    for codeword in code.codewords:
        for output in sorted(set(tuple(o) for o in outputs[codeword])):
            owner = table.setdefault(output, codeword)
            if owner != codeword:
                raise AmbiguousCodeError(
                    "Ambiguous code: output sets overlap",
                    details={"first": list(owner), "second": list(codeword), "output": list(output)},
                )
    return table


def decode(table: Mapping[Word, Word], output: Sequence[int]) -> Word:
    try:
        return table[tuple(output)]
    except KeyError:
        raise ValidationError("Output not produced by any codeword", details={"output": list(output)})


def count_tables(network: Network, a: Alphabet) -> int:
    """Number of distinct network codes (one table per intermediate vertex)"""
    total = 1
    for vid in network.intermediate_vertices:
        total *= (a.q ** network.outdegree(vid)) ** (a.q ** network.indegree(vid))
    return total


def tables_from_index(network: Network, a: Alphabet, index: int) -> Tuple[VertexFunction, ...]:
    """Decode a mixed-radix scheme index into vertex tables"""
    functions: List[VertexFunction] = []
    for vid in network.intermediate_vertices:
        arity_in, arity_out = network.indegree(vid), network.outdegree(vid)
        row_values = a.q ** arity_out
        rows = []
        for _ in range(a.q ** arity_in):
            index, digit = divmod(index, row_values)
            row = []
            for _ in range(arity_out):
                digit, symbol = divmod(digit, a.q)
                row.append(symbol)
            rows.append(tuple(reversed(row)))
        functions.append(VertexFunction(vid, arity_in, arity_out, a.q, tuple(rows)))
    return tuple(functions)
