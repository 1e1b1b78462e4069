"""
Scenario and report schema tests
"""
import pytest
from pydantic import ValidationError

from netdecode.schemas.report import ReportRow, RowStatus, RunMode
from netdecode.schemas.scenario import AlphabetSpec, CodeSpec, NetworkSpec, Scenario, SchemeSpec
from netdecode.services.adversary import ChangeSemantics, Regime


def base(**overrides):
    data = {
        "id": "bound_diamond",
        "command": "bound",
        "network": {"builtin": "diamond"},
        "alphabet": {"q": 3},
        "adversary": {"t": 1},
    }
    data.update(overrides)
    return data


class TestScenario:
    """Test scenario validation."""

    def test_minimal(self):
        """Test defaults of a minimal scenario."""
        scenario = Scenario.model_validate(base())
        assert scenario.version == 1
        assert scenario.shots == 1
        assert scenario.adversary.regime == Regime.STATIC
        assert scenario.adversary.change is None
        assert scenario.options.candidates == "all"
        assert scenario.options.audit is True
        assert scenario.expected is None

    def test_enums_from_strings(self):
        """Test regime and change parsing."""
        scenario = Scenario.model_validate(base(adversary={"t": 1, "regime": "adaptive", "change": "must"}, shots=2))
        assert scenario.adversary.regime == Regime.ADAPTIVE
        assert scenario.adversary.change == ChangeSemantics.MUST

    def test_unknown_field(self):
        """Test that unknown fields are rejected."""
        with pytest.raises(ValidationError):
            Scenario.model_validate(base(colour="red"))
        with pytest.raises(ValidationError):
            Scenario.model_validate(base(options={"sweeep": True}))

    def test_id_whitespace(self):
        """Test that ids may not contain whitespace."""
        with pytest.raises(ValidationError):
            Scenario.model_validate(base(id="two words"))

    def test_version(self):
        """Test that only version 1 is accepted."""
        with pytest.raises(ValidationError):
            Scenario.model_validate(base(version=2))

    def test_verify_needs_code(self):
        """Test command requirements."""
        with pytest.raises(ValidationError):
            Scenario.model_validate(base(command="verify", scheme={"name": "diamond_star"}))
        with pytest.raises(ValidationError):
            Scenario.model_validate(base(command="search"))
        # A sweep needs no scheme
        Scenario.model_validate(base(command="search", options={"sweep": True}))

    def test_one_shot_rounds(self):
        """Test that one-shot scenarios have one round."""
        with pytest.raises(ValidationError):
            Scenario.model_validate(base(adversary={"t": 1, "regime": "one_shot"}, shots=2))

    def test_ranges(self):
        """Test numeric ranges."""
        with pytest.raises(ValidationError):
            Scenario.model_validate(base(alphabet={"q": 1}))
        with pytest.raises(ValidationError):
            Scenario.model_validate(base(adversary={"t": -1}))
        with pytest.raises(ValidationError):
            Scenario.model_validate(base(shots=0))
        with pytest.raises(ValidationError):
            Scenario.model_validate(base(options={"timeout": 0}))

    def test_expected(self):
        """Test expected values and provenance."""
        scenario = Scenario.model_validate(base(expected={"value": 0.946395, "measure": "capacity"}))
        assert scenario.expected.value == pytest.approx(0.946395)
        assert scenario.expected.source == "paper-claim"
        with pytest.raises(ValidationError):
            Scenario.model_validate(base(expected={"value": 1, "source": "guess"}))


class TestParts:
    """Test scenario sub-models."""

    def test_network_forms(self):
        """Test builtin and explicit networks."""
        NetworkSpec(builtin="mirrored")
        spec = NetworkSpec(edges=[[0, 1], [1, 2]], terminals=[2])
        assert spec.edges == [(0, 1), (1, 2)]
        with pytest.raises(ValidationError):
            NetworkSpec()
        with pytest.raises(ValidationError):
            NetworkSpec(builtin="diamond", edges=[[0, 1]], terminals=[1])
        with pytest.raises(ValidationError):
            NetworkSpec(edges=[[0, 1]])

    def test_negative_ids(self):
        """Test that vertex and edge ids must be non-negative."""
        with pytest.raises(ValidationError):
            NetworkSpec(edges=[[0, 1], [-1, 1]], terminals=[1])
        with pytest.raises(ValidationError):
            NetworkSpec(edges=[[0, 1]], terminals=[-1])
        with pytest.raises(ValidationError):
            Scenario.model_validate(base(adversary={"t": 1, "edges": [-1]}))

    def test_alphabet_star(self):
        """Test the reserved symbol range."""
        assert AlphabetSpec(q=3, star=0).star == 0
        with pytest.raises(ValidationError):
            AlphabetSpec(q=3, star=3)

    def test_scheme_forms(self):
        """Test that a scheme has exactly one form."""
        SchemeSpec(name="compare_flag")
        SchemeSpec(tables={1: [[0], [1]]})
        with pytest.raises(ValidationError):
            SchemeSpec()
        with pytest.raises(ValidationError):
            SchemeSpec(name="identity", tables={1: [[0], [1]]})
        with pytest.raises(ValidationError):
            SchemeSpec(name="majority")

    def test_code_forms(self):
        """Test that a code has exactly one form."""
        CodeSpec(builtin="repetition", restrict_star=True)
        CodeSpec(words=[[0, 0, 0]])
        with pytest.raises(ValidationError):
            CodeSpec()
        with pytest.raises(ValidationError):
            CodeSpec(builtin="repetition", words=[[0]])


class TestReportRow:
    """Test report rows."""

    def test_table_values(self):
        """Test the rendered cells."""
        row = ReportRow(
            scenario_id="x",
            claim="c",
            computed=8,
            expected=8,
            status=RowStatus.MATCH,
            mode=RunMode.CONSTRUCTED,
            wall_ms=12.34,
        )
        assert row.table_values() == ["x", "c", "8", "8", "match", "constructed", "12.3"]

    def test_empty_values(self):
        """Test blank cells for missing values."""
        row = ReportRow(scenario_id="x", status=RowStatus.MISMATCH, mode=RunMode.EXHAUSTIVE)
        assert row.table_values()[2:4] == ["", ""]
        assert row.table_values()[5] == "exhaustive-scheme search"
