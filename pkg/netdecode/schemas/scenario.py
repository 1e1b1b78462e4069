"""
Scenario file models
"""
from typing import Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt, PositiveInt, field_validator, model_validator

from netdecode.services.adversary import ChangeSemantics, Regime


class StrictModel(BaseModel):
    """Unknown fields are rejected"""
    model_config = ConfigDict(extra="forbid")


class NetworkSpec(StrictModel):
    """Builtin name or explicit edge list (source is vertex 0)"""
    builtin: Optional[str] = None
    edges: Optional[List[Tuple[NonNegativeInt, NonNegativeInt]]] = None
    terminals: Optional[List[NonNegativeInt]] = None
    num_vertices: Optional[PositiveInt] = None
    name: Optional[str] = None

    @model_validator(mode="after")
    def check_form(self):
        if (self.builtin is None) == (self.edges is None):
            raise ValueError("network needs exactly one of 'builtin' or 'edges'")
        if self.edges is not None and not self.terminals:
            raise ValueError("explicit networks need 'terminals'")
        return self


class AlphabetSpec(StrictModel):
    q: int = Field(ge=2)
    star: Optional[int] = None

    @model_validator(mode="after")
    def check_star(self):
        if self.star is not None and not 0 <= self.star < self.q:
            raise ValueError("star must lie in 0..q-1")
        return self


class AdversarySpec(StrictModel):
    """edges defaults to the source out-edges; change defaults per regime"""
    edges: Optional[List[NonNegativeInt]] = None
    t: int = Field(ge=0)
    regime: Regime = Regime.STATIC
    change: Optional[ChangeSemantics] = None


VertexTables = Dict[int, List[List[int]]]


class SchemeSpec(StrictModel):
    """Named scheme, one table set for every round, or per-round tables"""
    name: Optional[Literal["diamond_star", "compare_flag", "identity"]] = None
    tables: Optional[VertexTables] = None
    rounds: Optional[List[VertexTables]] = None

    @model_validator(mode="after")
    def check_form(self):
        given = [v for v in (self.name, self.tables, self.rounds) if v is not None]
        if len(given) != 1:
            raise ValueError("scheme needs exactly one of 'name', 'tables' or 'rounds'")
        return self


class CodeSpec(StrictModel):
    builtin: Optional[Literal["diamond_multishot", "repetition"]] = None
    restrict_star: bool = False
    words: Optional[List[List[int]]] = None

    @model_validator(mode="after")
    def check_form(self):
        if (self.builtin is None) == (self.words is None):
            raise ValueError("code needs exactly one of 'builtin' or 'words'")
        return self


class OptionsSpec(StrictModel):
    timeout: Optional[float] = Field(default=None, gt=0)
    workers: Optional[int] = Field(default=None, ge=1)
    candidates: Literal["all", "repetition", "no_star"] = "all"
    sweep: bool = False
    seed: Optional[int] = None
    target: Optional[int] = Field(default=None, ge=1)
    audit: bool = True
    format: Literal["csv", "md", "json"] = "csv"


class ExpectedSpec(StrictModel):
    """Expected value with its provenance"""
    value: Union[int, float]
    measure: Literal["size", "capacity"] = "size"
    source: Literal["paper-claim", "derived-oracle"] = "paper-claim"


class Scenario(StrictModel):
    """One claim to check"""
    version: Literal[1] = 1
    id: str = Field(min_length=1)
    claim: str = ""
    command: Literal["bound", "verify", "search"]
    network: NetworkSpec
    alphabet: AlphabetSpec
    adversary: AdversarySpec
    shots: int = Field(default=1, ge=1)
    scheme: Optional[SchemeSpec] = None
    code: Optional[CodeSpec] = None
    options: OptionsSpec = Field(default_factory=OptionsSpec)
    expected: Optional[ExpectedSpec] = None

    @field_validator("id")
    @classmethod
    def validate_id(cls, v):
        if any(c.isspace() for c in v):
            raise ValueError("id must not contain whitespace")
        return v

    @model_validator(mode="after")
    def check_command(self):
        if self.command == "verify" and (self.code is None or self.scheme is None):
            raise ValueError("verify needs 'scheme' and 'code'")
        if self.command == "search" and not self.options.sweep and self.scheme is None:
            raise ValueError("fixed-scheme search needs 'scheme'")
        if self.adversary.regime == Regime.ONE_SHOT and self.shots != 1:
            raise ValueError("one_shot regime needs shots = 1")
        return self
