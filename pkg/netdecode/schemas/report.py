"""
Report models
"""
import enum
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field


class RowStatus(str, enum.Enum):
    """Outcome of one scenario"""
    MATCH = "match"
    MISMATCH = "mismatch"
    LOWER_BOUND_ONLY = "lower-bound-only"
    EXPLORATORY = "exploratory"


class RunMode(str, enum.Enum):
    """How a value was obtained"""
    BOUND = "bound"
    CONSTRUCTED = "constructed"
    FIXED_SCHEME = "fixed-scheme search"
    EXHAUSTIVE = "exhaustive-scheme search"


Number = Union[int, float]

CSV_COLUMNS = ["scenario_id", "claim", "computed", "expected", "status", "mode", "wall_ms"]


class ReportRow(BaseModel):
    """One row of a claims table"""
    scenario_id: str
    claim: str = ""
    computed: Optional[Number] = None
    expected: Optional[Number] = None
    status: RowStatus
    mode: RunMode
    wall_ms: float = 0.0
    details: Dict[str, Any] = Field(default_factory=dict)

    def table_values(self) -> List[str]:
        return [
            self.scenario_id,
            self.claim,
            "" if self.computed is None else str(self.computed),
            "" if self.expected is None else str(self.expected),
            self.status.value,
            self.mode.value,
            f"{self.wall_ms:.1f}",
        ]


class CapacityReport(BaseModel):
    """Code size, capacity and bound for one network, adversary and round count"""
    network: str
    q: int
    edges: List[int]
    t: int
    regime: str
    change: str
    shots: int
    size: Optional[int] = None
    capacity: Optional[float] = None
    bound: Optional[int] = None
    mode: RunMode
    lower_bound: bool = False
    wall_ms: float = 0.0
