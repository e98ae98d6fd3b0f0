"""
Command Bodies
What each report_cli subcommand computes, prints and writes
"""
import logging
from dataclasses import replace
from pathlib import Path

from rich.table import Table

from src.codes.trace_code import enumerate_trace_code, trace_weight_table
from src.codes.weights import defect_weights, macwilliams, nmds_weights
from src.designs.designs import Design, verify_t_design
from src.designs.esp_blocks import BlockSet, generate_blockset, parse_family
from src.group.group_action import (
    alltop_design,
    fixed_point_profile,
    invariance_check,
    is_three_transitive,
)
from src.report.checks import SUITES, Workspace, property_suite, run_suite, select, slug
from src.report.models import CheckResult, SuiteReport, dump_json
from src.utils.config import Settings
from src.utils.errors import ConsistencyError, PreconditionError
from src.utils.observability import console, observe_check, track_command

logger = logging.getLogger(__name__)

SUPPORTED_Q = (16, 32, 64)


def report_path(settings: Settings, command: str, q: int | None = None) -> Path:
    name = f"{command}-q{q}.json" if q is not None else f"{command}.json"
    return Path(settings.output_dir) / name


def write_report(path: Path, data) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    text = data if isinstance(data, str) else dump_json(data)
    path.write_text(text, encoding="utf-8")
    logger.info("report written to %s", path)
    return path


def print_results(title: str, results: list[CheckResult]) -> None:
    table = Table(title=title)
    table.add_column("check_id")
    table.add_column("status")
    table.add_column("runtime_ms", justify="right")
    for r in results:
        status = "[green]pass[/green]" if r.passed else "[red]fail[/red]"
        table.add_row(r.check_id, status, f"{r.runtime_ms:.0f}")
    console.print(table)
    failed = [r for r in results if not r.passed]
    if failed:
        console.print(f"❌ {len(failed)} of {len(results)} checks failed")
    else:
        console.print(f"✅ all {len(results)} checks passed")


def _check_q(q: int) -> None:
    if q not in SUPPORTED_Q:
        raise PreconditionError(f"q must be one of {SUPPORTED_Q}, got {q}")


@observe_check("cmd-blocks")
def cmd_blocks(q: int, family: str, out_path: str | None, settings: Settings) -> BlockSet:
    """
    Generate a family and write it in the block-set format.

    Raises:
        UnsupportedFamilyError: family tag does not parse
        PreconditionError: q unsupported or family undefined at this parity
    """
    _check_q(q)
    fam = parse_family(family)
    track_command("blocks", q=q, family=fam.tag)
    blocks = generate_blockset(q, fam, settings.jobs)
    path = Path(out_path) if out_path else Path(settings.output_dir) / f"blocks-{slug(fam.tag)}-q{q}.json"
    blocks.save(path)
    console.print(f"{fam.tag} at q={q}: [bold]{blocks.num_blocks}[/bold] blocks -> {path}")
    return blocks


@observe_check("cmd-verify")
def cmd_verify(blocks_path: str, t: int, settings: Settings, lam: int | None = None) -> CheckResult:
    """
    Verify a block-set file as a t-design; with lam the index must match too.

    Raises:
        BlockFileError: the file is malformed (line number attached)
    """
    blocks = BlockSet.load(blocks_path)
    track_command("verify", q=blocks.q, family=blocks.family, t=t)
    verdict = verify_t_design(Design.from_blockset(blocks), t)
    if verdict.is_design:
        console.print(f"{t}-({blocks.v},{blocks.k},{verdict.lambda_}) design with {blocks.num_blocks} blocks")
    else:
        console.print(f"not a {t}-design: {verdict.witness}")
    expected = {"is_design": True}
    observed = {"is_design": verdict.is_design}
    if lam is not None:
        expected["lambda"] = lam
        observed["lambda"] = verdict.lambda_
    result = CheckResult(
        check_id=f"verify-{slug(blocks.family)}-t{t}-q{blocks.q}",
        expected=expected,
        observed=observed,
        detail=None if verdict.is_design else str(verdict.witness),
    )
    write_report(report_path(settings, "verify", blocks.q), {"result": result.model_dump(), "verdict": verdict.to_report()})
    return result


@observe_check("cmd-code")
def cmd_code(q: int, settings: Settings) -> dict:
    """
    Code parameters, low-weight support counts and weight tables.

    The BCH table comes from the closed form fed by support counts; the trace
    table is its MacWilliams dual, also rebuilt from the trace formula at q <= 32
    and by full enumeration at q = 16.

    Raises:
        ConsistencyError: two paths to the same table disagree
    """
    _check_q(q)
    track_command("code", q=q)
    ws = Workspace(settings)
    code = ws.code(q)
    even = (q.bit_length() - 1) % 2 == 0
    d = code.min_distance or 5
    supports = {}
    for k in range(d, 8):
        if q == 64 and k > 6 and not settings.heavy:
            continue
        scan = ws.supports(q, k, count_only=True)
        supports[str(k)] = {"count": scan.count, "kernel_dims": scan.kernel_dims}
    if code.min_distance is None and supports.get("5", {}).get("count"):
        code = replace(code, min_distance=5)

    if even:
        b6 = supports["6"]["count"] if "6" in supports else ws.count(q, "residual63")
        known = {5: (q - 1) * supports["5"]["count"], 6: (q - 1) * b6}
        weights = defect_weights(code.n, code.dimension, q, d, q - 5, known)
    else:
        weights = nmds_weights(code.n, code.dimension, q, (q - 1) * supports["6"]["count"])
    trace = macwilliams(weights, code.n, code.dimension, q)
    report = {
        "q": q,
        "code": code.report(),
        "supports": supports,
        "weights": weights.to_json_list(),
        "trace_weights": trace.to_json_list(),
    }

    if q <= 32:
        a_q_minus_4 = (q - 1) * ws.count(q, "b:5,3") if even else None
        formula = trace_weight_table(q, (q - 1) * ws.count(q, "plain:6,3"), a_q_minus_4, d)
        if formula.entries != trace.entries:
            raise ConsistencyError(f"trace formula and MacWilliams dual differ at q={q}")
    if q == 16:
        enumerated = enumerate_trace_code(q, settings.jobs)
        report["trace_enumeration"] = enumerated.to_json_list()
        if enumerated.entries != trace.entries:
            raise ConsistencyError("trace enumeration and MacWilliams dual differ at q=16")

    table = Table(title=f"[{code.n},{code.dimension},{code.min_distance}] {code.kind} code over GF({q})")
    table.add_column("weight", justify="right")
    table.add_column("A_w (BCH)", justify="right")
    table.add_column("A_w (trace)", justify="right")
    for w in range(code.n + 1):
        if weights[w] or trace[w]:
            table.add_row(str(w), str(weights[w]), str(trace[w]))
    console.print(table)
    write_report(report_path(settings, "code", q), report)
    return report


@observe_check("cmd-group")
def cmd_group(q: int, settings: Settings) -> dict:
    """Closure order, fixed-point profile, 5-subset orbits, Alltop equality and invariance verdicts."""
    _check_q(q)
    track_command("group", q=q, heavy=settings.heavy)
    if q == 64 and not settings.heavy:
        raise PreconditionError("group analysis at q=64 needs --heavy")
    ws = Workspace(settings)
    closure = ws.group(q)
    odd = (q.bit_length() - 1) % 2 == 1
    report = {
        "q": q,
        "order": closure.order,
        "three_transitive": is_three_transitive(closure),
        "fixed_point_profile": fixed_point_profile(closure),
    }
    if q <= 32:
        orbits = ws.orbits(q, 5)
        report["orbits5"] = orbits.to_report()
        report["stabilizer_histogram"] = orbits.stabilizer_histogram()
    if odd and q <= 32:
        try:
            alltop = alltop_design(closure, settings.jobs)
            report["alltop"] = {"equal_to_b53": True, "verdict": verify_t_design(alltop, 4).to_report()}
        except ConsistencyError as e:
            report["alltop"] = {"equal_to_b53": False, "witness": e.witness}
    invariance = {}
    for family in (("b:5,3", "plain:6,3") if odd else ("plain:5,2", "plain:6,3")):
        if q == 64:
            break
        result = invariance_check(closure, ws.blocks(q, family), sample=settings.sample, seed=settings.seed)
        invariance[family] = result.model_dump()
    report["invariance"] = invariance

    console.print(f"PGL(2,{q}) acting on U_{q + 1}: order [bold]{closure.order}[/bold]")
    if "stabilizer_histogram" in report:
        console.print(f"5-subset orbits by stabilizer order: {report['stabilizer_histogram']}")
    write_report(report_path(settings, "group", q), report)
    return report


@observe_check("cmd-paper-suite")
def cmd_paper_suite(q_list: list[int], settings: Settings) -> list[SuiteReport]:
    """Run the named checks for each q and write one report per q."""
    track_command("paper-suite", q_list=q_list, heavy=settings.heavy)
    ws = Workspace(settings)
    reports = []
    for q in q_list:
        _check_q(q)
        checks = select(SUITES[q](), settings.heavy)
        results = run_suite(checks, ws)
        report = SuiteReport(command="paper-suite", q_list=[q], heavy=settings.heavy, results=results)
        write_report(report_path(settings, "paper-suite", q), report.to_json())
        print_results(f"q={q}", results)
        reports.append(report)
    return reports


@observe_check("cmd-properties")
def cmd_properties(settings: Settings) -> SuiteReport:
    """Property suites: conjugation, shift expansion, intersection bounds and u-variant collapses."""
    track_command("properties")
    ws = Workspace(settings)
    results = run_suite(property_suite(), ws)
    report = SuiteReport(command="properties", q_list=[16, 32], heavy=settings.heavy, results=results)
    write_report(report_path(settings, "properties"), report.to_json())
    print_results("properties", results)
    return report
