"""
Finite set-valued adversarial channels and their algebra
"""
import threading
from dataclasses import dataclass
from functools import reduce
from itertools import combinations, product as cartesian
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from netdecode.core.config import settings
from netdecode.core.exceptions import InstanceTooLargeError, ValidationError

Word = Tuple[int, ...]


@dataclass(frozen=True)
class Alphabet:
    """Unstructured symbol set {0..q-1} with a reserved symbol (default q-1)"""
    q: int
    star: Optional[int] = None

    def __post_init__(self):
        if int(self.q) < 2:
            raise ValidationError("Alphabet size must be >= 2", details={"q": self.q})
        star = self.q - 1 if self.star is None else int(self.star)
        if not 0 <= star < self.q:
            raise ValidationError("Reserved symbol out of range", details={"q": self.q, "star": star})
        object.__setattr__(self, "star", star)

    @property
    def symbols(self) -> range:
        return range(self.q)

    @property
    def data_symbols(self) -> Tuple[int, ...]:
        """Symbols other than the reserved one"""
        return tuple(s for s in range(self.q) if s != self.star)

    def words(self, length: int) -> Iterator[Word]:
        return cartesian(range(self.q), repeat=length)

    def contains(self, word: Sequence[int]) -> bool:
        return all(0 <= s < self.q for s in word)


def hamming_distance(x: Sequence[int], y: Sequence[int]) -> int:
    if len(x) != len(y):
        raise ValidationError("Words of different length", details={"x": list(x), "y": list(y)})
    return sum(1 for a, b in zip(x, y) if a != b)


def hamming_ball(x: Sequence[int], radius: int, q: int) -> List[Word]:
    """All words within Hamming distance radius of x, sorted"""
    x = tuple(x)
    ball = {x}
    for r in range(1, radius + 1):
        for positions in combinations(range(len(x)), r):
            choices = [[v for v in range(q) if v != x[p]] for p in positions]
            for values in cartesian(*choices):
                y = list(x)
                for p, v in zip(positions, values):
                    y[p] = v
                ball.add(tuple(y))
    return sorted(ball)


class ChannelMap:
    """Adversarial channel A^n_in -> 2^(A^n_out) given by an evaluator rule

    Outputs are returned as canonical sorted tuples of words. Evaluations are
    memoized; the memo is shared between threads under a lock.
    """

    def __init__(
        self,
        alphabet: Alphabet,
        n_in: int,
        n_out: int,
        rule: Callable[[Word], Iterable[Word]],
        name: str = "channel",
        memo: bool = True,
    ):
        if n_in < 1 or n_out < 1:
            raise ValidationError("Channel lengths must be >= 1", details={"n_in": n_in, "n_out": n_out})
        self.alphabet = alphabet
        self.n_in = n_in
        self.n_out = n_out
        self.name = name
        self._rule = rule
        self._memo: Optional[Dict[Word, Tuple[Word, ...]]] = {} if memo else None
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return f"ChannelMap({self.name}, q={self.alphabet.q}, {self.n_in}->{self.n_out})"

    def __call__(self, x: Sequence[int]) -> Tuple[Word, ...]:
        x = tuple(x)
        if len(x) != self.n_in or not self.alphabet.contains(x):
            raise ValidationError(
                "Input word outside channel domain",
                details={"channel": self.name, "word": list(x), "n_in": self.n_in},
            )
        if self._memo is not None:
            with self._lock:
                cached = self._memo.get(x)
            if cached is not None:
                return cached

        outputs = tuple(sorted(set(tuple(y) for y in self._rule(x))))
        if not outputs:
            raise ValidationError("Channel produced an empty output set", details={"channel": self.name, "word": list(x)})

        if self._memo is not None:
            with self._lock:
                self._memo.setdefault(x, outputs)
        return outputs

    @property
    def domain_size(self) -> int:
        return self.alphabet.q ** self.n_in

    def domain(self) -> Iterator[Word]:
        return self.alphabet.words(self.n_in)

    def tabulate(self) -> Dict[Word, Tuple[Word, ...]]:
        """Extensional table, only for domains up to the configured limit"""
        if self.domain_size > settings.max_tabulated_domain:
            raise InstanceTooLargeError(
                "Channel domain too large to tabulate",
                details={"channel": self.name, "domain": self.domain_size},
            )
        return {x: self(x) for x in self.domain()}

    def equals(self, other: "ChannelMap") -> bool:
        """Pointwise equality over the whole domain"""
        if (self.alphabet, self.n_in, self.n_out) != (other.alphabet, other.n_in, other.n_out):
            return False
        return all(self(x) == other(x) for x in self.domain())


def hamming_ball_channel(a: Alphabet, n: int, radius: int) -> ChannelMap:
    """Omega(x) = words within distance radius of x; n=3 is H_D, n=4 is H_S"""
    if not 0 <= radius <= n:
        raise ValidationError("Radius must lie in [0, n]", details={"n": n, "radius": radius})
    return ChannelMap(a, n, n, lambda x: hamming_ball(x, radius, a.q), name=f"hamming(n={n},r={radius})")


def identity_channel(a: Alphabet, n: int) -> ChannelMap:
    return ChannelMap(a, n, n, lambda x: [x], name=f"identity({n})")


def deterministic_channel(
    a: Alphabet, n_in: int, n_out: int, fn: Callable[[Word], Sequence[int]], name: str = "deterministic"
) -> ChannelMap:
    """Channel with singleton outputs {fn(x)}"""
    return ChannelMap(a, n_in, n_out, lambda x: [tuple(fn(x))], name=name)


def product(c1: ChannelMap, c2: ChannelMap) -> ChannelMap:
    """(c1 x c2)(x1, x2) = c1(x1) x c2(x2) on concatenated words"""
    if c1.alphabet != c2.alphabet:
        raise ValidationError("Alphabet mismatch in product", details={"left": c1.name, "right": c2.name})
    split = c1.n_in

    def rule(x: Word) -> Iterator[Word]:
        for left, right in cartesian(c1(x[:split]), c2(x[split:])):
            yield left + right

    return ChannelMap(c1.alphabet, c1.n_in + c2.n_in, c1.n_out + c2.n_out, rule, name=f"({c1.name} x {c2.name})")


def power(c: ChannelMap, i: int) -> ChannelMap:
    """i-fold product of c with itself"""
    if i < 1:
        raise ValidationError("Power exponent must be >= 1", details={"i": i})
    if i == 1:
        return c
    result = reduce(product, [c] * i)
    result.name = f"{c.name}^{i}"
    return result


def concatenate(c1: ChannelMap, c2: ChannelMap) -> ChannelMap:
    """(c1 > c2)(x) = union of c2(y) over y in c1(x)"""
    if c1.alphabet != c2.alphabet or c1.n_out != c2.n_in:
        raise ValidationError(
            "Shape mismatch in concatenation",
            details={"left": c1.name, "right": c2.name, "left_out": c1.n_out, "right_in": c2.n_in},
        )

    def rule(x: Word) -> Iterator[Word]:
        for y in c1(x):
            yield from c2(y)

    return ChannelMap(c1.alphabet, c1.n_in, c2.n_out, rule, name=f"({c1.name} > {c2.name})")


def block(x: Sequence[int], j: int, width: int) -> Word:
    """j-th block of the given width (0-indexed)"""
    if width < 1 or j < 0 or (j + 1) * width > len(x):
        raise ValidationError("Block out of range", details={"length": len(x), "j": j, "width": width})
    return tuple(x[j * width:(j + 1) * width])


def projection(x: Sequence[int], s: int, width: int) -> Word:
    """Lane s (1-indexed) of every width-sized block"""
    if width < 1 or len(x) % width != 0:
        raise ValidationError("Word length not divisible by width", details={"length": len(x), "width": width})
    if not 1 <= s <= width:
        raise ValidationError("Lane out of range", details={"s": s, "width": width})
    return tuple(x[s - 1::width])


def blocks_far_apart(x: Sequence[int], y: Sequence[int], width: int, distance: int) -> bool:
    """Some block pair is at Hamming distance >= distance"""
    count = len(x) // width
    return any(
        hamming_distance(block(x, j, width), block(y, j, width)) >= distance for j in range(count)
    )


def is_good_for_power_hamming(code: Sequence[Sequence[int]], width: int, radius: int = 1) -> bool:
    """Blockwise criterion for codes under the power of a Hamming-ball channel"""
    words = [tuple(w) for w in code]
    return all(
        blocks_far_apart(x, y, width, 2 * radius + 1) for x, y in combinations(words, 2) if x != y
    )


def channel_code_is_unambiguous(code: Sequence[Sequence[int]], channel: ChannelMap) -> bool:
    """Pairwise-disjoint channel outputs"""
    owner: Dict[Word, Word] = {}
    for x in sorted(set(tuple(w) for w in code)):
        for y in channel(x):
            if owner.setdefault(y, x) != x:
                return False
    return True
