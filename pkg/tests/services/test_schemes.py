"""
Network code and outer code tests
"""
import pytest

from netdecode.core.exceptions import AmbiguousCodeError, ValidationError
from netdecode.models.builders import build_family_d, build_single_edge, build_two_level
from netdecode.models.channel import Alphabet
from netdecode.services.schemes import (
    NetworkCode,
    OuterCode,
    VertexFunction,
    code_diamond_multishot,
    code_repetition,
    count_tables,
    decode,
    decode_table,
    scheme_compare_flag,
    scheme_diamond_star,
    scheme_from_tables,
    scheme_identity,
    strict_majority,
    tables_from_index,
    word_rank,
)


class TestVertexFunction:
    """Test lookup tables."""

    def test_word_rank(self):
        """Test lexicographic base-q ranks."""
        assert word_rank((0, 0), 3) == 0
        assert word_rank((1, 2), 3) == 5
        assert word_rank((), 3) == 0

    def test_from_rule(self):
        """Test tabulating a rule."""
        fn = VertexFunction.from_rule(2, 2, 1, 2, lambda x: (x[0] ^ x[1],))
        assert fn.table == ((0,), (1,), (1,), (0,))
        assert fn((1, 0)) == (1,)

    def test_not_total(self):
        """Test rejection of partial tables."""
        with pytest.raises(ValidationError):
            VertexFunction(1, 1, 1, 3, ((0,), (1,)))

    def test_bad_row(self):
        """Test rejection of rows with the wrong width or symbols."""
        with pytest.raises(ValidationError):
            VertexFunction(1, 1, 1, 2, ((0,), (2,)))
        with pytest.raises(ValidationError):
            VertexFunction(1, 1, 1, 2, ((0,), (0, 1)))


class TestNamedSchemes:
    """Test the named network codes."""

    def test_diamond_star(self, diamond, q3):
        """Test forward at V1 and compare-or-flag at V2."""
        v1, v2 = scheme_diamond_star(q3, diamond)
        assert (v1.vertex, v2.vertex) == (1, 2)
        assert v1((1,)) == (1,)
        assert v2((0, 0)) == (0,)
        assert v2((0, 1)) == (2,)

    def test_diamond_star_topology(self, mirrored, q3):
        """Test that the Diamond scheme rejects other networks."""
        with pytest.raises(ValidationError):
            scheme_diamond_star(q3, mirrored)

    def test_strict_majority(self):
        """Test strict majority with a flag fallback."""
        assert strict_majority((1, 1, 0), 9) == 1
        assert strict_majority((1, 0), 9) == 9
        assert strict_majority((0, 0, 1, 1), 9) == 9
        assert strict_majority((2,), 9) == 2

    def test_compare_flag(self, mirrored):
        """Test compare_flag on the Mirrored Diamond."""
        a = Alphabet(2)
        functions = scheme_compare_flag(a, mirrored)
        assert [f.vertex for f in functions] == [1, 2]
        assert functions[0]((0, 0)) == (0,)
        assert functions[0]((0, 1)) == (1,)
        with pytest.raises(ValidationError):
            scheme_compare_flag(a, build_single_edge())

    def test_compare_flag_replicates(self):
        """Test that the majority is copied to every out-edge."""
        network = build_two_level([2, 2], [2, 2])
        a = Alphabet(3)
        fn = scheme_compare_flag(a, network)[0]
        assert fn((1, 1)) == (1, 1)
        assert fn((0, 1)) == (2, 2)
        # Family D keeps a single out-edge per vertex
        assert scheme_compare_flag(a, build_family_d(2))[0]((1, 1, 1, 0)) == (1,)

    def test_identity(self, diamond):
        """Test the forwarding scheme."""
        v1, v2 = scheme_identity(Alphabet(2), diamond)
        assert v1((1,)) == (1,)
        assert v2((0, 1)) == (0,)

    def test_from_tables(self, diamond):
        """Test explicit tables and a missing vertex."""
        a = Alphabet(2)
        tables = {1: [[1], [0]], 2: [[0], [0], [1], [1]]}
        v1, v2 = scheme_from_tables(a, diamond, tables)
        assert v1((0,)) == (1,)
        assert v2((1, 0)) == (1,)
        with pytest.raises(ValidationError):
            scheme_from_tables(a, diamond, {1: [[1], [0]]})


class TestNetworkCode:
    """Test per-round network codes."""

    def test_repeat(self, diamond, q3):
        """Test that repeat uses the same functions every round."""
        functions = scheme_diamond_star(q3, diamond)
        code = NetworkCode.repeat(reversed(functions), 3)
        assert code.shots == 3
        assert code.rounds[0] == code.rounds[2]
        assert sorted(code.for_round(1)) == [1, 2]
        code.validate(diamond, 3, q3)

    def test_validate(self, diamond, mirrored, q3):
        """Test round count, coverage and arity checks."""
        code = NetworkCode.repeat(scheme_diamond_star(q3, diamond), 1)
        with pytest.raises(ValidationError):
            code.validate(diamond, 2, q3)
        with pytest.raises(ValidationError):
            code.validate(diamond, 1, Alphabet(2))
        partial = NetworkCode.repeat(scheme_diamond_star(q3, diamond)[:1], 1)
        with pytest.raises(ValidationError):
            partial.validate(diamond, 1, q3)
        with pytest.raises(ValidationError):
            code.validate(mirrored, 1, q3)


class TestOuterCodes:
    """Test outer code constructors."""

    def test_outer_code_normalizes(self):
        """Test sorting of codewords."""
        code = OuterCode(((1, 1), (0, 0)))
        assert code.codewords == ((0, 0), (1, 1))
        assert len(code) == 2
        assert code.length == 2

    def test_outer_code_invalid(self):
        """Test rejected outer codes."""
        with pytest.raises(ValidationError):
            OuterCode(())
        with pytest.raises(ValidationError):
            OuterCode(((0,), (0,)))
        with pytest.raises(ValidationError):
            OuterCode(((0,), (0, 1)))

    def test_diamond_multishot(self, q3):
        """Test q^i - 1 codewords of the form (a | a | a)."""
        code = code_diamond_multishot(q3, 2)
        assert len(code) == 8
        assert code.length == 6
        assert (2, 2, 2, 2, 2, 2) not in code.codewords
        assert (0, 0, 0, 2, 2, 2) in code.codewords
        assert len(code_diamond_multishot(q3, 1)) == 2

    def test_repetition(self, diamond, mirrored, q3):
        """Test repetition codes over out(S)."""
        assert len(code_repetition(q3, diamond, 1)) == 3
        assert len(code_repetition(q3, diamond, 2, restrict_star=True)) == 4
        code = code_repetition(Alphabet(2), mirrored, 2)
        assert len(code) == 4
        assert (0, 0, 0, 0, 1, 1, 1, 1) in code.codewords


class TestDecoding:
    """Test decoding tables."""

    def test_decode(self):
        """Test the inverse lookup."""
        code = OuterCode(((0,), (1,)))
        table = decode_table(code, {(0,): [(0,), (2,)], (1,): [(1,)]})
        assert decode(table, (2,)) == (0,)
        with pytest.raises(ValidationError):
            decode(table, (3,))

    def test_ambiguous(self):
        """Test the witness of an ambiguous code."""
        code = OuterCode(((0,), (1,)))
        with pytest.raises(AmbiguousCodeError) as excinfo:
            decode_table(code, {(0,): [(5,)], (1,): [(5,)]})
        assert excinfo.value.details == {"first": [0], "second": [1], "output": [5]}


class TestSweepIndexing:
    """Test scheme numbering for sweeps."""

    def test_count_tables(self, diamond):
        """Test the number of network codes on the Diamond."""
        assert count_tables(diamond, Alphabet(2)) == 64
        assert count_tables(diamond, Alphabet(3)) == 531441

    def test_index_zero(self, diamond):
        """Test that index 0 is the all-zero scheme."""
        v1, v2 = tables_from_index(diamond, Alphabet(2), 0)
        assert set(v1.table) == {(0,)}
        assert set(v2.table) == {(0,)}

    def test_indices_distinct(self, diamond):
        """Test that every index gives a different scheme."""
        a = Alphabet(2)
        schemes = {tables_from_index(diamond, a, index) for index in range(count_tables(diamond, a))}
        assert len(schemes) == 64

    def test_low_digits(self, diamond):
        """Test that the first vertex's first row is the lowest digit."""
        v1, _ = tables_from_index(diamond, Alphabet(2), 1)
        assert v1.table == ((1,), (0,))
