"""
Scenario harness: resolve scenario files, run commands, cache results, write reports
"""
import csv
import io
import json
import math
import time
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from pydantic import ValidationError as PydanticValidationError
from tqdm import tqdm

from netdecode.core.config import settings
from netdecode.core.exceptions import (
    CacheError,
    InstanceTooLargeError,
    NetDecodeException,
    ScenarioError,
    ValidationError,
)
from netdecode.models.builders import build_builtin
from netdecode.models.channel import Alphabet
from netdecode.models.network import Network, make_network, validate_network
from netdecode.schemas.report import CSV_COLUMNS, CapacityReport, ReportRow, RowStatus, RunMode
from netdecode.schemas.scenario import CodeSpec, Scenario, SchemeSpec
from netdecode.services.adversary import AdversaryModel, default_edges
from netdecode.services.capacity import (
    audit_lemmas,
    capacity_value,
    classify_network,
    expected_capacity,
    expected_code_size,
    singleton_cut_set_bound,
)
from netdecode.services.schemes import (
    NetworkCode,
    OuterCode,
    code_diamond_multishot,
    code_repetition,
    scheme_compare_flag,
    scheme_diamond_star,
    scheme_from_tables,
    scheme_identity,
)
from netdecode.services.search import candidate_words, max_unambiguous, sweep_schemes
from netdecode.services.transfer import TransferQuery, is_unambiguous
from netdecode.utils.helpers import atomic_write_text, canonical_json, format_word, generate_hash, safe_json_loads
from netdecode.utils.logging import get_logger

logger = get_logger(__name__)


def _line_of(text: str, loc: Sequence[Any]) -> Optional[int]:
    """Best-effort line of the innermost key named in a pydantic error location"""
    keys = [part for part in loc if isinstance(part, str)]
    if not keys:
        return None
    needle = f'"{keys[-1]}"'
    for number, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return number
    return None


def parse_scenario(text: str, source: str = "<string>") -> Scenario:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError(f"Invalid JSON in {source}", details={"line": e.lineno, "column": e.colno, "error": e.msg})
    try:
        return Scenario.model_validate(data)
    except PydanticValidationError as e:
        errors = [
            {"loc": ".".join(str(p) for p in err["loc"]), "msg": err["msg"], "line": _line_of(text, err["loc"])}
            for err in e.errors()
        ]
        raise ScenarioError(f"Invalid scenario {source}", details={"errors": errors})


def load_scenario(path: str) -> Scenario:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ScenarioError(f"Cannot read scenario {path}", details={"error": str(e)})
    return parse_scenario(text, source=str(path))


def dump_scenario(scenario: Scenario) -> str:
    return json.dumps(scenario.model_dump(mode="json", exclude_none=True), indent=2, ensure_ascii=False) + "\n"


def discover_scenarios(paths: Iterable[str]) -> List[Path]:
    """Files as given; directories expand to their *.json files sorted by name"""
    found: List[Path] = []
    for raw in paths:
        path = Path(raw)
        if path.is_dir():
            found.extend(sorted(path.glob("*.json")))
        elif path.exists():
            found.append(path)
        else:
            raise ScenarioError(f"Scenario path not found: {raw}")
    return found


class Resolved:
    """Scenario references resolved against the network"""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.network = resolve_network(scenario)
        self.alphabet = Alphabet(scenario.alphabet.q, scenario.alphabet.star)
        spec = scenario.adversary
        edges = tuple(spec.edges) if spec.edges is not None else default_edges(self.network)
        self.adversary = AdversaryModel(edges, spec.t, spec.regime, spec.change)
        self.adversary.check_network(self.network)
        self.shots = scenario.shots

    def scheme(self) -> NetworkCode:
        return resolve_scheme(self.scenario.scheme, self.network, self.alphabet, self.shots)

    def query(self) -> TransferQuery:
        return TransferQuery(self.network, self.scheme(), self.adversary, self.alphabet, self.shots)

    def code(self) -> OuterCode:
        return resolve_code(self.scenario.code, self.network, self.alphabet, self.shots)

    @property
    def default_adversary(self) -> bool:
        """One or more corruptions on exactly the source out-edges"""
        return self.adversary.edges == default_edges(self.network) and self.adversary.t >= 1

    def bound(self) -> Optional[int]:
        try:
            return singleton_cut_set_bound(self.network, self.adversary.edges, self.adversary.t).value
        except InstanceTooLargeError as e:
            logger.warning(f"scenario={self.scenario.id} no cut-set bound: {e.message}")
            return None

    def reference(self) -> Optional[Dict[str, Any]]:
        """Closed-form size and capacity for the single-corruption builtin cases"""
        if self.adversary.t != 1 or not self.default_adversary:
            return None
        args = (self.network, self.adversary.regime, self.adversary.change, self.alphabet.q, self.shots)
        size = expected_code_size(*args)
        if size is None:
            return None
        return {"size": size, "capacity": expected_capacity(*args), "source": "paper-claim"}

    def audit_applies(self) -> bool:
        return (
            self.scenario.options.audit
            and self.default_adversary
            and classify_network(self.network) == "diamond"
        )

    def capacity_report(self, mode: RunMode, **values) -> CapacityReport:
        values.setdefault("bound", self.bound())
        return CapacityReport(
            network=self.network.name,
            q=self.alphabet.q,
            edges=list(self.adversary.edges),
            t=self.adversary.t,
            regime=self.adversary.regime.value,
            change=self.adversary.change.value,
            shots=self.shots,
            mode=mode,
            **values,
        )


def resolve_network(scenario: Scenario) -> Network:
    spec = scenario.network
    if spec.builtin is not None:
        network = build_builtin(spec.builtin)
    else:
        network = make_network(
            spec.edges, terminals=spec.terminals, source=0, num_vertices=spec.num_vertices, name=spec.name or "custom"
        )
    violations = validate_network(network)
    if violations:
        raise ScenarioError("Invalid network", details={"violations": violations})
    return network


def resolve_scheme(spec: Optional[SchemeSpec], network: Network, a: Alphabet, shots: int) -> NetworkCode:
    if spec is None:
        raise ScenarioError("Scenario has no scheme")
    if spec.rounds is not None:
        if len(spec.rounds) != shots:
            raise ScenarioError("Per-round tables must match shots", details={"rounds": len(spec.rounds), "shots": shots})
        return NetworkCode(tuple(scheme_from_tables(a, network, tables) for tables in spec.rounds))
    if spec.tables is not None:
        functions = scheme_from_tables(a, network, spec.tables)
    elif spec.name == "diamond_star":
        functions = scheme_diamond_star(a, network)
    elif spec.name == "compare_flag":
        functions = scheme_compare_flag(a, network)
    else:
        functions = scheme_identity(a, network)
    return NetworkCode.repeat(functions, shots)


def resolve_code(spec: Optional[CodeSpec], network: Network, a: Alphabet, shots: int) -> OuterCode:
    if spec is None:
        raise ScenarioError("Scenario has no code")
    if spec.words is not None:
        return OuterCode(tuple(tuple(w) for w in spec.words))
    if spec.builtin == "diamond_multishot":
        return code_diamond_multishot(a, shots)
    return code_repetition(a, network, shots, restrict_star=spec.restrict_star)


def judge(computed: Optional[float], expected: Optional[float], lower_bound: bool = False) -> RowStatus:
    """Exact match for integers, tolerance for reals"""
    if computed is None:
        return RowStatus.MISMATCH
    if lower_bound:
        return RowStatus.LOWER_BOUND_ONLY
    if expected is None:
        return RowStatus.EXPLORATORY
    if isinstance(computed, int) and isinstance(expected, int):
        same = computed == expected
    else:
        same = math.isclose(float(computed), float(expected), rel_tol=0.0, abs_tol=settings.capacity_tolerance)
    return RowStatus.MATCH if same else RowStatus.MISMATCH


def _measured(scenario: Scenario, size: int, a: Alphabet) -> Tuple[float, Optional[float]]:
    expected = scenario.expected
    if expected is not None and expected.measure == "capacity":
        return capacity_value(size, a, scenario.shots), expected.value
    return size, None if expected is None else expected.value


def _elapsed_ms(started: float) -> float:
    return round((time.monotonic() - started) * 1000.0, 1)


def _audit_failed(scenario: Scenario, audit: Dict[str, Any]) -> bool:
    if audit["passed"]:
        return False
    logger.error(f"scenario={scenario.id} lemma audit failed: {audit}")
    return True


def cmd_bound(scenario: Scenario) -> ReportRow:
    started = time.monotonic()
    resolved = Resolved(scenario)
    bound = singleton_cut_set_bound(resolved.network, resolved.adversary.edges, resolved.adversary.t)
    expected = None if scenario.expected is None else scenario.expected.value
    wall_ms = _elapsed_ms(started)
    report = resolved.capacity_report(RunMode.BOUND, bound=bound.value, wall_ms=wall_ms)
    logger.info(f"bound scenario={scenario.id} value={bound.value} cut={list(bound.cut.sorted_edges())}")
    return ReportRow(
        scenario_id=scenario.id,
        claim=scenario.claim,
        computed=bound.value,
        expected=expected,
        status=judge(bound.value, expected),
        mode=RunMode.BOUND,
        wall_ms=wall_ms,
        details={
            "report": report.model_dump(mode="json"),
            "per_terminal": {str(k): v for k, v in bound.per_terminal.items()},
            "cut": list(bound.cut.sorted_edges()),
        },
    )


def cmd_verify(scenario: Scenario) -> ReportRow:
    started = time.monotonic()
    resolved = Resolved(scenario)
    query = resolved.query()
    code = resolved.code()
    verdict = is_unambiguous(code.codewords, query)
    details: Dict[str, Any] = {"code_size": len(code)}

    if not verdict:
        star = resolved.alphabet.star
        logger.error(
            f"verify scenario={scenario.id} ambiguous: {format_word(verdict.first, star)} and "
            f"{format_word(verdict.second, star)} share output {format_word(verdict.output, star)}"
        )
        details["witness"] = verdict.to_dict()
        return ReportRow(
            scenario_id=scenario.id,
            claim=scenario.claim,
            computed=None,
            expected=None if scenario.expected is None else scenario.expected.value,
            status=RowStatus.MISMATCH,
            mode=RunMode.CONSTRUCTED,
            wall_ms=_elapsed_ms(started),
            details=details,
        )

    audit_failed = False
    if resolved.audit_applies():
        details["audit"] = audit_lemmas(code, query).to_dict()
        audit_failed = _audit_failed(scenario, details["audit"])
    reference = resolved.reference()
    if reference is not None:
        details["reference"] = reference

    computed, expected = _measured(scenario, len(code), resolved.alphabet)
    wall_ms = _elapsed_ms(started)
    details["report"] = resolved.capacity_report(
        RunMode.CONSTRUCTED,
        size=len(code),
        capacity=capacity_value(len(code), resolved.alphabet, resolved.shots),
        wall_ms=wall_ms,
    ).model_dump(mode="json")
    logger.info(f"verify scenario={scenario.id} unambiguous size={len(code)}")
    return ReportRow(
        scenario_id=scenario.id,
        claim=scenario.claim,
        computed=computed,
        expected=expected,
        status=RowStatus.MISMATCH if audit_failed else judge(computed, expected),
        mode=RunMode.CONSTRUCTED,
        wall_ms=wall_ms,
        details=details,
    )


class ResultCache:
    """Scenario hash -> report row, kept in one JSON file"""

    def __init__(self, path: Optional[str] = None):
        self.path = Path(path or settings.cache_file)
        self._entries: Optional[Dict[str, Dict]] = None

    def _load(self) -> Dict[str, Dict]:
        if self._entries is None:
            if self.path.exists():
                try:
                    text = self.path.read_text(encoding="utf-8")
                except OSError as e:
                    raise CacheError(f"Unreadable cache {self.path}", details={"error": str(e)})
                self._entries = safe_json_loads(text, expected=dict)
                if self._entries is None:
                    raise CacheError(f"Corrupted cache {self.path}")
            else:
                self._entries = {}
        return self._entries

    @staticmethod
    def key(scenario: Scenario) -> str:
        data = scenario.model_dump(mode="json")
        # worker count and timeout change runtime, not results
        data["options"].pop("workers", None)
        data["options"].pop("timeout", None)
        return generate_hash(canonical_json(data))

    def get(self, scenario: Scenario) -> Optional[ReportRow]:
        entry = self._load().get(self.key(scenario))
        return None if entry is None else ReportRow.model_validate(entry)

    def put(self, scenario: Scenario, row: ReportRow) -> None:
        entries = self._load()
        entries[self.key(scenario)] = row.model_dump(mode="json")
        atomic_write_text(str(self.path), json.dumps(entries, indent=2, sort_keys=True) + "\n")


def cmd_search(
    scenario: Scenario,
    cache: Optional[ResultCache] = None,
    timeout: Optional[float] = None,
    workers: Optional[int] = None,
    seed: Optional[int] = None,
) -> ReportRow:
    if cache is not None:
        cached = cache.get(scenario)
        if cached is not None:
            logger.info(f"search scenario={scenario.id} cache hit")
            return cached

    started = time.monotonic()
    options = scenario.options
    timeout = timeout if timeout is not None else (options.timeout or settings.default_timeout)
    workers = workers or options.workers or settings.default_workers
    seed = seed if seed is not None else (options.seed if options.seed is not None else settings.default_seed)
    resolved = Resolved(scenario)

    details: Dict[str, Any] = {}
    audit_failed = False
    if options.sweep:
        mode = RunMode.EXHAUSTIVE
        identity_query = TransferQuery(
            resolved.network,
            NetworkCode.repeat(scheme_identity(resolved.alphabet, resolved.network), resolved.shots),
            resolved.adversary,
            resolved.alphabet,
            resolved.shots,
        )
        result = sweep_schemes(
            resolved.network,
            resolved.alphabet,
            resolved.adversary,
            resolved.shots,
            target=options.target,
            timeout=timeout,
            seed=seed,
            candidates=candidate_words(identity_query, options.candidates),
            progress=True,
        )
        size, code, lower_bound = result.size, result.code, result.lower_bound
        details.update(
            scheme_index=result.scheme_index,
            schemes_visited=result.schemes_visited,
            schemes_total=result.schemes_total,
        )
    else:
        mode = RunMode.FIXED_SCHEME
        query = resolved.query()
        result = max_unambiguous(
            query,
            candidate_words(query, options.candidates),
            timeout=timeout,
            workers=workers,
            stop_at=options.target,
        )
        size, code, lower_bound = result.size, result.code, result.lower_bound
        details["nodes"] = result.nodes
        if size and resolved.audit_applies():
            details["audit"] = audit_lemmas(OuterCode(code), query).to_dict()
            audit_failed = _audit_failed(scenario, details["audit"])

    if size == 0:
        computed, expected = None, None if scenario.expected is None else scenario.expected.value
    else:
        computed, expected = _measured(scenario, size, resolved.alphabet)
    wall_ms = _elapsed_ms(started)
    reference = resolved.reference()
    if reference is not None:
        details["reference"] = reference
    details["code"] = [list(w) for w in code]
    details["report"] = resolved.capacity_report(
        mode,
        size=size or None,
        capacity=capacity_value(size, resolved.alphabet, resolved.shots) if size else None,
        lower_bound=lower_bound,
        wall_ms=wall_ms,
    ).model_dump(mode="json")

    row = ReportRow(
        scenario_id=scenario.id,
        claim=scenario.claim,
        computed=computed,
        expected=expected,
        status=RowStatus.MISMATCH if audit_failed else judge(computed, expected, lower_bound),
        mode=mode,
        wall_ms=wall_ms,
        details=details,
    )
    if cache is not None and not lower_bound and not audit_failed:
        cache.put(scenario, row)
    return row


def run_scenario(
    scenario: Scenario,
    cache: Optional[ResultCache] = None,
    timeout: Optional[float] = None,
    workers: Optional[int] = None,
    seed: Optional[int] = None,
) -> ReportRow:
    if scenario.command == "bound":
        return cmd_bound(scenario)
    if scenario.command == "verify":
        return cmd_verify(scenario)
    return cmd_search(scenario, cache=cache, timeout=timeout, workers=workers, seed=seed)


def failed_row(scenario_id: str, error: NetDecodeException, claim: str = "") -> ReportRow:
    return ReportRow(
        scenario_id=scenario_id,
        claim=claim,
        status=RowStatus.MISMATCH,
        mode=RunMode.CONSTRUCTED,
        details={"error": error.message, "code": error.code, "error_details": error.details or {}},
    )


def cmd_report(
    paths: Iterable[str],
    cache: Optional[ResultCache] = None,
    timeout: Optional[float] = None,
    workers: Optional[int] = None,
    seed: Optional[int] = None,
) -> Tuple[List[ReportRow], int]:
    """Run every scenario; exit code is nonzero iff some row is a mismatch"""
    rows: List[ReportRow] = []
    for path in tqdm(discover_scenarios(paths), desc="scenarios", disable=None):
        try:
            scenario = load_scenario(str(path))
        except NetDecodeException as e:
            logger.error(f"scenario={path} failed to load: {e.message}")
            rows.append(failed_row(path.stem, e))
            continue
        try:
            rows.append(run_scenario(scenario, cache=cache, timeout=timeout, workers=workers, seed=seed))
        except NetDecodeException as e:
            logger.error(f"scenario={scenario.id} failed: {e.message}")
            rows.append(failed_row(scenario.id, e, scenario.claim))
        except Exception as e:
            logger.exception(f"scenario={scenario.id} crashed: {e}")
            wrapped = NetDecodeException(
                f"Unexpected error: {e}", details={"type": type(e).__name__, "scenario": str(path)}
            )
            rows.append(failed_row(scenario.id, wrapped, scenario.claim))

    exit_code = 1 if any(row.status == RowStatus.MISMATCH for row in rows) else 0
    logger.info(f"report rows={len(rows)} mismatches={sum(r.status == RowStatus.MISMATCH for r in rows)}")
    return rows, exit_code


def render_csv(rows: Sequence[ReportRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.table_values())
    return buffer.getvalue()


def render_markdown(rows: Sequence[ReportRow]) -> str:
    lines = ["| " + " | ".join(CSV_COLUMNS) + " |", "|" + "---|" * len(CSV_COLUMNS)]
    for row in rows:
        cells = [value.replace("|", "\\|") for value in row.table_values()]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def render_json(rows: Sequence[ReportRow]) -> str:
    return json.dumps([row.model_dump(mode="json") for row in rows], indent=2, ensure_ascii=False) + "\n"


RENDERERS = {"csv": render_csv, "md": render_markdown, "json": render_json}


def render(rows: Sequence[ReportRow], fmt: str) -> str:
    if fmt not in RENDERERS:
        raise ValidationError("Unknown report format", details={"format": fmt})
    return RENDERERS[fmt](rows)


def write_report(rows: Sequence[ReportRow], out: str, fmt: str) -> List[str]:
    """Write the table; a CSV report also gets a markdown companion"""
    written = [out]
    atomic_write_text(out, render(rows, fmt))
    if fmt == "csv":
        companion = str(Path(out).with_suffix(".md"))
        atomic_write_text(companion, render_markdown(rows))
        written.append(companion)
    return written
