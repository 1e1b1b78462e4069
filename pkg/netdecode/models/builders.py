"""
Builders for the networks studied by the toolkit
"""
import re
from typing import List, Sequence, Tuple

from netdecode.core.exceptions import ValidationError
from netdecode.models.network import Network, make_network


def build_two_level(x: Sequence[int], y: Sequence[int], name: str = "") -> Network:
    """Simple two-level network ([x1..xj], [y1..yj])

    Vertex 0 is the source, vertices 1..j the intermediate nodes and j+1 the
    terminal; x_k parallel edges run S -> V_k and y_k parallel edges V_k -> T.
    """
    if len(x) == 0 or len(x) != len(y):
        raise ValidationError("Two-level spec needs equal, non-zero lengths", details={"x": list(x), "y": list(y)})
    if any(int(v) < 1 for v in list(x) + list(y)):
        raise ValidationError("Two-level spec entries must be >= 1", details={"x": list(x), "y": list(y)})

    j = len(x)
    terminal = j + 1
    pairs: List[Tuple[int, int]] = []
    for k, count in enumerate(x, start=1):
        pairs.extend([(0, k)] * int(count))
    for k, count in enumerate(y, start=1):
        pairs.extend([(k, terminal)] * int(count))
    label = name or f"two_level({list(x)},{list(y)})"
    return make_network(pairs, terminals=[terminal], source=0, name=label)


def build_diamond() -> Network:
    """Diamond network: e1 = S->V1, e2, e3 = S->V2, e4 = V1->T, e5 = V2->T"""
    return build_two_level([1, 2], [1, 1], name="diamond")


def build_mirrored_diamond() -> Network:
    """Mirrored Diamond: e1, e2 = S->V1, e3, e4 = S->V2, e5 = V1->T, e6 = V2->T"""
    return build_two_level([2, 2], [1, 1], name="mirrored")


def _check_t(t: int) -> None:
    if int(t) < 1:
        raise ValidationError("Family parameter t must be >= 1", details={"t": t})


def build_family_c(t: int) -> Network:
    """Family C: ([t, t+1], [t, t])"""
    _check_t(t)
    return build_two_level([t, t + 1], [t, t], name=f"family_c({t})")


def build_family_d(t: int) -> Network:
    """Family D: ([2t, 2t], [1, 1])"""
    _check_t(t)
    return build_two_level([2 * t, 2 * t], [1, 1], name=f"family_d({t})")


def build_single_edge() -> Network:
    """S -> T with no intermediate vertex"""
    return make_network([(0, 1)], terminals=[1], source=0, name="single_edge")


_CALL = re.compile(r"^\s*(\w+)\s*(?:\((.*)\))?\s*$")


def _int_list(text: str) -> List[int]:
    return [int(tok) for tok in re.findall(r"-?\d+", text)]


def build_builtin(spec: str) -> Network:
    """Resolve 'diamond', 'mirrored', 'family_c(t)', 'family_d(t)',
    'two_level([x..],[y..])' or 'single_edge'"""
    match = _CALL.match(spec or "")
    if not match:
        raise ValidationError("Unrecognized builtin network", details={"builtin": spec})
    kind, args = match.group(1), match.group(2) or ""

    if kind == "diamond" and not args.strip():
        return build_diamond()
    if kind == "mirrored" and not args.strip():
        return build_mirrored_diamond()
    if kind == "single_edge" and not args.strip():
        return build_single_edge()
    if kind in ("family_c", "family_d"):
        values = _int_list(args)
        if len(values) != 1:
            raise ValidationError("Family builders take one parameter", details={"builtin": spec})
        return build_family_c(values[0]) if kind == "family_c" else build_family_d(values[0])
    if kind == "two_level":
        lists = re.findall(r"\[([^\]]*)\]", args)
        if len(lists) != 2:
            raise ValidationError("two_level takes two lists", details={"builtin": spec})
        return build_two_level(_int_list(lists[0]), _int_list(lists[1]))

    raise ValidationError("Unrecognized builtin network", details={"builtin": spec})


def builtin_networks() -> List[Network]:
    """Every named network at small parameters"""
    return [
        build_diamond(),
        build_mirrored_diamond(),
        build_family_c(1),
        build_family_c(2),
        build_family_d(1),
        build_family_d(2),
        build_single_edge(),
    ]
