"""
Named Checks
Every reproducible claim as a check_id with an expected and an observed value
"""
import logging
import re
from dataclasses import dataclass, field
from math import comb
from typing import Any, Callable

import numpy as np
from langfuse.decorators import observe

from src.algebra.finite_field import circle_for_q
from src.codes.bch_codes import CodeSpec, build_code, low_weight_families, minimal_poly, poly_eval, scan_supports
from src.codes.trace_code import (
    dual_orthogonality,
    enumerate_trace_code,
    max_zeros_without_cubic,
    roundtrip_weight_q_minus_4,
    roundtrip_weight_q_minus_5,
    sampled_zero_bound,
    trace_weight_table,
)
from src.codes.weights import defect_weights, macwilliams, nmds_weights
from src.designs.designs import (
    Design,
    block_count,
    claimed_lambda,
    complementary,
    complementary_lambda,
    intersections_of_size,
    max_pairwise_intersection,
    spot_check_lower_strengths,
    supplementary,
    supplementary_lambda,
    verify_t_design,
)
from src.designs.esp_blocks import (
    BlockSet,
    conjugation_identity_holds,
    count_family,
    esp_rows,
    exceptional_sets,
    generate_blockset,
    quintuple_ratio,
    random_blocks,
    shift_paths_agree,
    u_variant_size_formula,
)
from src.group.group_action import (
    GroupClosure,
    OrbitReport,
    alltop_design,
    close_group,
    expected_fixed_points,
    fixed_point_profile,
    fixing_involutions,
    invariance_check,
    is_three_transitive,
    orbit_count_formulas,
    orbit_partition,
    short_orbits_with_symmetric_member,
)
from src.report.models import CheckResult
from src.utils.config import Settings
from src.utils.observability import Stopwatch, track_check_result

logger = logging.getLogger(__name__)

# Printed weight coefficients the tables must reproduce
BCH_WEIGHTS = {
    32: {6: 1014816, 7: 105033456, 8: 11116421316, 9: 948713422800, 10: 70662246969600},
    64: {5: 275184, 6: 66044160, 7: 39476324160},
}
TRACE_WEIGHTS = {
    32: {27: 1014816, 28: 1268520, 29: 20296320, 30: 64609952, 31: 210132384, 32: 399584823, 33: 376835008},
}

PROPERTY_SAMPLES = 10_000
ZERO_SET_DRAWS = 1_000_000


class Workspace:
    """Artifacts shared between the checks of one run, built on first use."""

    def __init__(self, settings: Settings):
        self.settings = settings
        self._memo: dict[tuple, Any] = {}

    def _get(self, key: tuple, build: Callable[[], Any]) -> Any:
        if key not in self._memo:
            self._memo[key] = build()
        return self._memo[key]

    @property
    def jobs(self) -> int:
        return self.settings.jobs

    def blocks(self, q: int, family: str) -> BlockSet:
        """Block set by family tag; comp(...) and supp(...) wrap any other tag."""
        if family.startswith("comp("):
            inner = family[len("comp("):-1]
            return self._get(("blocks", q, family), lambda: complementary(self.design(q, inner)).blocks)
        if family.startswith("supp("):
            inner = family[len("supp("):-1]
            return self._get(("blocks", q, family), lambda: supplementary(self.design(q, inner)).blocks)
        return self._get(("blocks", q, family), lambda: generate_blockset(q, family, self.jobs))

    def definitional(self, q: int, family: str) -> BlockSet:
        return self._get(
            ("definitional", q, family),
            lambda: generate_blockset(q, family, self.jobs, accelerated=False),
        )

    def design(self, q: int, family: str) -> Design:
        return Design.from_blockset(self.blocks(q, family))

    def count(self, q: int, family: str) -> int:
        key = ("blocks", q, family)
        if key in self._memo:
            return self._memo[key].num_blocks
        return self._get(("count", q, family), lambda: count_family(q, family, self.jobs))

    def code(self, q: int) -> CodeSpec:
        # q=64 scans are counted by the checks themselves
        return self._get(("code", q), lambda: build_code(q, establish_distance=q <= 32, jobs=self.jobs))

    def supports(self, q: int, k: int, count_only: bool = False):
        full = ("supports", q, k, False)
        if count_only and full in self._memo:
            return self._memo[full]
        return self._get(
            ("supports", q, k, count_only),
            lambda: scan_supports(self.code(q), k, count_only=count_only, jobs=self.jobs),
        )

    def group(self, q: int) -> GroupClosure:
        return self._get(("group", q), lambda: close_group(circle_for_q(q)))

    def orbits(self, q: int, k: int) -> OrbitReport:
        return self._get(("orbits", q, k), lambda: orbit_partition(self.group(q), k))

    def trace_enumeration(self, q: int):
        return self._get(("trace", q), lambda: enumerate_trace_code(q, self.jobs))

    def rng(self, salt: int) -> np.random.Generator:
        return np.random.default_rng([self.settings.seed, salt])


@dataclass(frozen=True)
class Check:
    """A named claim; run returns (expected, observed) or (expected, observed, detail)."""

    check_id: str
    q: int
    run: Callable[[Workspace], tuple]
    heavy: bool = False
    tags: tuple[str, ...] = field(default=())


@observe(name="named-check", capture_input=False, capture_output=False)
def run_check(check: Check, ws: Workspace) -> CheckResult:
    """Run one check; any exception becomes a failing result carrying the message."""
    watch = Stopwatch()
    detail = None
    try:
        outcome = check.run(ws)
        expected, observed = outcome[0], outcome[1]
        if len(outcome) > 2:
            detail = outcome[2]
    except Exception as e:
        logger.exception("check %s raised", check.check_id)
        expected, observed = "completed", {"error": type(e).__name__}
        detail = str(e)
    result = CheckResult(
        check_id=check.check_id,
        expected=expected,
        observed=observed,
        detail=detail,
        runtime_ms=watch.elapsed_ms,
    )
    track_check_result(check.check_id, check.q, result.status, result.runtime_ms)
    log = logger.info if result.passed else logger.warning
    log("%s: %s (%.0f ms)", check.check_id, result.status, result.runtime_ms)
    return result


def slug(family: str) -> str:
    """Family tag as a filename-safe id fragment: comp(u:7,3) -> comp-u73."""
    text = family.replace(":", "").replace(",", "").replace("(", "-").replace(")", "")
    text = text.replace("*", "x").replace("^", "e")
    return re.sub(r"[^A-Za-z0-9_-]+", "-", text).strip("-")


# ---------------------------------------------------------------------------
# Check builders
# ---------------------------------------------------------------------------

def design_check(
    q: int,
    family: str,
    t: int | None = None,
    lam: int | None = None,
    check_id: str | None = None,
    heavy: bool = False,
) -> Check:
    """t-(q+1, k, lambda) verification of a family against its closed-form index."""

    def run(ws: Workspace):
        strength, index = (t, lam) if t is not None else claimed_lambda(family, q)
        d = ws.design(q, family)
        verdict = verify_t_design(d, strength)
        lower = spot_check_lower_strengths(d, strength, index) if verdict.is_design else {}
        expected = {
            "t": strength,
            "lambda": index,
            "num_blocks": int(block_count(d.v, d.k, strength, index)),
            "lower_strengths": True,
        }
        observed = {
            "t": strength,
            "lambda": verdict.lambda_ if verdict.is_design else verdict.witness,
            "num_blocks": d.num_blocks,
            "lower_strengths": all(lower.values()),
        }
        return expected, observed

    return Check(check_id or f"{slug(family)}-design-q{q}", q, run, heavy, ("design",))


def equality_check(check_id: str, q: int, left: Callable, right: Callable, tags=("identity",)) -> Check:
    """Exact set equality of two block sets, with the first differences as detail."""

    def run(ws: Workspace):
        a, b = left(ws), right(ws)
        witness = a.symmetric_difference_witness(b)
        observed = {"equal": witness is None, "num_blocks": a.num_blocks}
        detail = None if witness is None else str(witness)
        return {"equal": True, "num_blocks": b.num_blocks}, observed, detail

    return Check(check_id, q, run, tags=tags)


def family_equality(check_id: str, q: int, left: str, right: str, tags=("identity",)) -> Check:
    return equality_check(check_id, q, lambda ws: ws.blocks(q, left), lambda ws: ws.blocks(q, right), tags)


def support_check(q: int, k: int, minimum_weight: bool = False) -> Check:
    """B_k(C) equals the block-set family predicted for its weight; minimum-weight kernels are one-dimensional."""
    family = low_weight_families(q)[k]

    def run(ws: Workspace):
        scan = ws.supports(q, k)
        reference = ws.blocks(q, family)
        witness = scan.blocks.symmetric_difference_witness(reference)
        expected = {"equal": True, "count": reference.num_blocks}
        observed = {"equal": witness is None, "count": scan.count}
        if minimum_weight:
            expected["kernel_dims"] = {1: reference.num_blocks}
            observed["kernel_dims"] = scan.kernel_dims
        detail = f"kernel dimensions {scan.kernel_dims}"
        if witness is not None:
            detail += f"; difference {witness}"
        return expected, observed, detail

    return Check(f"bch-supports{k}-q{q}", q, run, tags=("code",))


def size_formula_check(q: int, heavy: bool = False) -> Check:
    def run(ws: Workspace):
        return u_variant_size_formula(q), ws.count(q, "u:7,3")

    return Check(f"u73-size-formula-q{q}", q, run, heavy, ("identity",))


# ---------------------------------------------------------------------------
# Check bodies
# ---------------------------------------------------------------------------

def _b_partition(q: int) -> Check:
    def run(ws: Workspace):
        b, bbar, u = ws.blocks(q, "b:5,3"), ws.blocks(q, "bbar:5,3"), ws.blocks(q, "u:5,3")
        observed = {
            "disjoint": b.intersection(bbar).num_blocks == 0,
            "union_is_u": b.union(bbar).same_blocks(u),
        }
        return {"disjoint": True, "union_is_u": True}, observed

    return Check(f"b-bbar-partition-q{q}", q, run, tags=("identity",))


def _steiner_extension(q: int) -> Check:
    """Every Steiner block plus any outside point is in zero63."""

    def run(ws: Workspace):
        steiner, zero63 = ws.blocks(q, "plain:5,2"), ws.blocks(q, "zero63")
        rows = steiner.blocks.astype(np.int64)
        extended = []
        for p in range(q + 1):
            outside = ~np.any(rows == p, axis=1)
            extended.append(np.sort(np.column_stack([rows[outside], np.full(outside.sum(), p)]), axis=1))
        extended = np.concatenate(extended).astype(np.int16)
        inside = zero63.contains_rows(extended)
        return {"extensions_inside": True}, {"extensions_inside": bool(inside.all())}

    return Check(f"steiner-extension-in-zero63-q{q}", q, run, tags=("identity",))


def _zero73_contains_steiner(q: int) -> Check:
    def run(ws: Workspace):
        zero73, steiner = ws.blocks(q, "zero73"), ws.blocks(q, "plain:5,2")
        rows = zero73.blocks
        hit = np.zeros(rows.shape[0], dtype=bool)
        for drop in [(i, j) for i in range(7) for j in range(i + 1, 7)]:
            keep = [c for c in range(7) if c not in drop]
            hit |= steiner.contains_rows(rows[:, keep])
        return {"every_block_holds_steiner": True}, {"every_block_holds_steiner": bool(hit.all())}

    return Check(f"zero73-holds-steiner-q{q}", q, run, tags=("identity",))


def _intersection_bound(q: int, family: str, bound: int, check_id: str) -> Check:
    def run(ws: Workspace):
        return {"max_intersection": bound}, {"max_intersection": max_pairwise_intersection(ws.design(q, family))}

    return Check(check_id, q, run, tags=("property",))


def _plain63_equality_cases(q: int) -> Check:
    """Blocks of plain:6,3 meeting in five points share a 5-set with vanishing sigma_{5,2}."""

    def run(ws: Workspace):
        d = ws.design(q, "plain:6,3")
        pairs = intersections_of_size(d, 5)
        circle = circle_for_q(q)
        shared = np.array([s for s, _ in pairs], dtype=np.int16).reshape(-1, 5)
        vanish = esp_rows(circle, shared, 2)[:, 2] == 0 if shared.size else np.zeros(0, bool)
        return {"sigma52_vanishes": True}, {"sigma52_vanishes": bool(vanish.all())}, f"{len(pairs)} pairs"

    return Check(f"plain63-intersection-equality-q{q}", q, run, tags=("property",))


def _general_identity(q: int) -> Check:
    return equality_check(
        f"u42-general-identity-q{q}",
        q,
        lambda ws: ws.blocks(q, "u:4,2"),
        lambda ws: ws.blocks(q, "general:4:s4_2^2 + s4_1*s4_3"),
    )


def _u73_paths(q: int) -> Check:
    return equality_check(
        f"u73-paths-agree-q{q}",
        q,
        lambda ws: ws.blocks(q, "u:7,3"),
        lambda ws: ws.definitional(q, "u:7,3"),
    )


def _exceptional_sets(q: int, samples: int = 20) -> Check:
    """Random quadruples: |S1| = 5, |S| = 9, and u5 in S1 iff sigma53/sigma52 of quad + u5 lies in the quintuple."""

    def run(ws: Workspace):
        circle = circle_for_q(q)
        sizes = set()
        agree = True
        for quad in random_blocks(q, 4, samples, ws.rng(41)):
            ex = exceptional_sets(circle, quad)
            sizes.add((len(ex.s1), len(ex.s)))
            for u5 in range(q + 1):
                if u5 in ex.quad:
                    continue
                block = tuple(sorted(ex.quad + (u5,)))
                ratio = quintuple_ratio(circle, block)
                inside = ratio is not None and circle.contains(ratio) and circle.index(ratio) in block
                agree &= inside == (u5 in ex.s1)
        expected = {"sizes": [[5, 9]], "membership_criterion": True}
        return expected, {"sizes": sorted(list(s) for s in sizes), "membership_criterion": bool(agree)}

    return Check(f"exceptional-sets-q{q}", q, run, tags=("identity",))


def _code_params(q: int, expected: dict) -> Check:
    def run(ws: Workspace):
        code = ws.code(q)
        observed = {"n": code.n, "dimension": code.dimension, "min_distance": code.min_distance, "kind": code.kind}
        return expected, observed

    return Check(f"bch-params-q{q}", q, run, tags=("code",))


def _minimal_polys(q: int) -> Check:
    def run(ws: Workspace):
        circle = circle_for_q(q)
        ctx = circle.ctx
        ok = True
        for s in range(q + 1):
            poly = minimal_poly(s, circle)
            ok &= poly_eval(ctx, poly, circle.element(s)) == 0
            ok &= all(ctx.in_subfield(c) for c in poly)
        return {"roots_and_coefficients": True}, {"roots_and_coefficients": bool(ok)}

    return Check(f"bch-minimal-polys-q{q}", q, run, tags=("code",))


def _trace_enumeration(q: int) -> Check:
    def run(ws: Workspace):
        table = ws.trace_enumeration(q)
        return {"mass": q ** 6, "min_distance": q - 5}, {"mass": table.mass, "min_distance": table.minimum_distance()}

    return Check(f"trace-enumeration-q{q}", q, run, tags=("code",))


def _trace_macwilliams(q: int) -> Check:
    """Dual of the enumerated trace code against (q-1) |B_k(C)|."""

    def run(ws: Workspace):
        dual = macwilliams(ws.trace_enumeration(q), q + 1, 6, q)
        expected = {k: (q - 1) * ws.supports(q, k, count_only=True).count for k in (5, 6, 7)}
        return expected, {k: dual[k] for k in (5, 6, 7)}

    return Check(f"trace-macwilliams-q{q}", q, run, tags=("code",))


def _bch_defect_table(q: int) -> Check:
    """Singleton-defect table of C from A_5, A_6 equals MacWilliams of the trace enumeration."""

    def run(ws: Workspace):
        code = ws.code(q)
        known = {k: (q - 1) * ws.supports(q, k, count_only=True).count for k in (5, 6)}
        formula = defect_weights(code.n, code.dimension, q, 5, q - 5, known)
        dual = macwilliams(ws.trace_enumeration(q), q + 1, 6, q)
        return dual.to_json_list(), formula.to_json_list()

    return Check(f"bch-weights-formula-q{q}", q, run, tags=("code",))


def _trace_formula_table(q: int) -> Check:
    def run(ws: Workspace):
        table = trace_weight_table(
            q,
            (q - 1) * ws.count(q, "plain:6,3"),
            (q - 1) * ws.count(q, "b:5,3"),
            5,
        )
        return ws.trace_enumeration(q).to_json_list(), table.to_json_list()

    return Check(f"trace-weights-formula-q{q}", q, run, tags=("code",))


def _dual_orthogonality(q: int) -> Check:
    def run(ws: Workspace):
        return {"orthogonal": True}, {"orthogonal": dual_orthogonality(ws.code(q))}

    return Check(f"trace-dual-orthogonal-q{q}", q, run, tags=("code",))


def _cubic_free_zeros(q: int) -> Check:
    def run(ws: Workspace):
        return {"at_most_4": True}, {"at_most_4": max_zeros_without_cubic(q) <= 4}

    return Check(f"zero-set-cubic-free-q{q}", q, run, tags=("code",))


def _nmds_table(q: int) -> Check:
    def run(ws: Workspace):
        code = ws.code(q)
        a6 = (q - 1) * ws.supports(q, 6, count_only=True).count
        table = nmds_weights(code.n, code.dimension, q, a6)
        weights = BCH_WEIGHTS[q]
        return {str(w): a for w, a in weights.items()}, {str(w): table[w] for w in weights}

    return Check(f"bch-weights-nmds-q{q}", q, run, tags=("code",))


def _trace_table_odd(q: int) -> Check:
    """Trace weights from A_{q-5} alone, with A_{q-4} cross-checked against (q-1)|b:5,3|."""

    def run(ws: Workspace):
        table = trace_weight_table(q, (q - 1) * ws.count(q, "plain:6,3"), None, 6)
        weights = TRACE_WEIGHTS[q]
        expected = {str(w): a for w, a in weights.items()}
        expected["b53_factor"] = weights[q - 4]
        observed = {str(w): table[w] for w in weights}
        observed["b53_factor"] = (q - 1) * ws.count(q, "b:5,3")
        return expected, observed

    return Check(f"trace-weights-q{q}", q, run, tags=("code",))


def _zero_set_roundtrip(q: int) -> Check:
    def run(ws: Workspace):
        b53 = ws.blocks(q, "b:5,3")
        n = b53.num_blocks
        five = roundtrip_weight_q_minus_4(circle_for_q(q), b53.blocks)
        plain = ws.blocks(q, "plain:6,3")
        six = roundtrip_weight_q_minus_5(circle_for_q(q), plain.blocks)
        expected = {
            "five_point": {"pairs": 5 * n, "valid": n, "roundtrip_ok": n},
            "six_point": {"blocks": plain.num_blocks, "roundtrip_ok": plain.num_blocks},
        }
        return expected, {"five_point": five, "six_point": six}

    return Check(f"zero-set-roundtrip-q{q}", q, run, tags=("code",))


def _zero_set_sample(q: int) -> Check:
    def run(ws: Workspace):
        hist = sampled_zero_bound(q, ZERO_SET_DRAWS, ws.settings.seed)
        return {"max_zeros_at_most_6": True}, {"max_zeros_at_most_6": max(hist) <= 6}, f"histogram {hist}"

    return Check(f"zero-set-sampled-bound-q{q}", q, run, tags=("code",))


def _group_order(q: int, heavy: bool = False) -> Check:
    def run(ws: Workspace):
        return q ** 3 - q, ws.group(q).order

    return Check(f"group-order-q{q}", q, run, heavy, ("group",))


def _three_transitive(q: int) -> Check:
    def run(ws: Workspace):
        return True, is_three_transitive(ws.group(q))

    return Check(f"group-3-transitive-q{q}", q, run, tags=("group",))


def _fixed_point_profile(q: int) -> Check:
    def run(ws: Workspace):
        profile = fixed_point_profile(ws.group(q))
        expected = {order: [expected_fixed_points(q, order)] for order in profile}
        return expected, profile

    return Check(f"group-fixed-points-q{q}", q, run, tags=("group",))


def _invariance(q: int, family: str, sample: bool) -> Check:
    def run(ws: Workspace):
        size = ws.settings.sample if sample else None
        result = invariance_check(ws.group(q), ws.blocks(q, family), sample=size, seed=ws.settings.seed)
        return True, result.invariant, None if result.witness is None else str(result.witness)

    return Check(f"{slug(family)}-invariant-q{q}", q, run, tags=("group",))


def _orbits(q: int) -> Check:
    def run(ws: Workspace):
        report = ws.orbits(q, 5)
        formulas = orbit_count_formulas(q)
        hist = report.stabilizer_histogram()
        expected = {
            "total": comb(q + 1, 5),
            "short_orbits": formulas["short"],
            "short_stabilizers": [4],
            "trivial_orbits": formulas["trivial"],
        }
        observed = {
            "total": sum(o.length for o in report.orbits),
            "short_orbits": len(report.short_orbits()),
            "short_stabilizers": sorted({o.stabilizer_order for o in report.short_orbits()}),
            "trivial_orbits": hist.get(1, 0),
        }
        return expected, observed, f"stabilizer histogram {hist}"

    return Check(f"orbits5-q{q}", q, run, tags=("group",))


def _symmetric_representatives(q: int) -> Check:
    def run(ws: Workspace):
        return True, short_orbits_with_symmetric_member(ws.orbits(q, 5))

    return Check(f"short-orbit-symmetric-members-q{q}", q, run, tags=("group",))


def _alltop(q: int) -> Check:
    def run(ws: Workspace):
        d = alltop_design(ws.group(q), ws.jobs)
        verdict = verify_t_design(d, 4)
        t, lam = claimed_lambda("b:5,3", q)
        expected = {"lambda": lam, "num_blocks": int(block_count(q + 1, 5, t, lam))}
        return expected, {"lambda": verdict.lambda_, "num_blocks": d.num_blocks}

    return Check(f"alltop-equals-b53-q{q}", q, run, tags=("group",))


def _involution_fixed(q: int) -> Check:
    def run(ws: Workspace):
        fixed = fixing_involutions(ws.group(q), ws.blocks(q, "b:5,3"))
        return True, bool(fixed.all())

    return Check(f"b53-involution-fixed-q{q}", q, run, tags=("group",))


def _weights_q64() -> Check:
    q = 64

    def run(ws: Workspace):
        known = {5: (q - 1) * ws.count(q, "plain:5,2"), 6: (q - 1) * ws.count(q, "residual63")}
        table = defect_weights(q + 1, q - 5, q, 5, q - 5, known)
        weights = BCH_WEIGHTS[q]
        return {str(w): a for w, a in weights.items()}, {str(w): table[w] for w in weights}

    return Check("bch-weights-defect-q64", q, run, tags=("code",))


def _support_count(q: int, k: int, expected_fn: Callable[[Workspace], int], heavy: bool = False) -> Check:
    def run(ws: Workspace):
        scan = ws.supports(q, k, count_only=True)
        return expected_fn(ws), scan.count

    return Check(f"bch-supports{k}-count-q{q}", q, run, heavy, ("code",))


def _complementary_index(q: int, expected: int) -> Check:
    def run(ws: Workspace):
        t, lam = claimed_lambda("u:7,3", q)
        return expected, complementary_lambda(q + 1, 7, t, lam)

    return Check(f"comp-u73-index-q{q}", q, run, tags=("design",))


def _supplementary_index(q: int, family: str, expected: int) -> Check:
    def run(ws: Workspace):
        t, lam = claimed_lambda(family, q)
        return expected, int(supplementary_lambda(q + 1, int(family.split(":")[1].split(",")[0]), t, lam))

    return Check(f"supp-{slug(family)}-index-q{q}", q, run, tags=("design",))


def _conjugation(m: int) -> Check:
    q = 1 << m

    def run(ws: Workspace):
        rng = ws.rng(100 + m)
        circle = circle_for_q(q)
        ok = all(
            conjugation_identity_holds(circle, random_blocks(q, k, PROPERTY_SAMPLES // 5, rng))
            for k in range(3, 8)
        )
        return True, ok

    return Check(f"esp-conjugation-m{m}", q, run, tags=("property",))


def _shift_paths(m: int) -> Check:
    q = 1 << m

    def run(ws: Workspace):
        rng = ws.rng(200 + m)
        circle = circle_for_q(q)
        ok = True
        for k in range(3, 8):
            rows = random_blocks(q, k, PROPERTY_SAMPLES // 5, rng)
            shifts = rng.integers(0, q * q, size=rows.shape[0])
            ok &= shift_paths_agree(circle, rows, shifts)
        return True, bool(ok)

    return Check(f"esp-shift-paths-m{m}", q, run, tags=("property",))


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

def suite_q16() -> list[Check]:
    q = 16
    designs = [
        design_check(q, "plain:5,2", check_id="steiner-plain52-q16"),
        design_check(q, "u:4,2"),
        design_check(q, "bbar:5,3"),
        design_check(q, "b:6,2"),
        design_check(q, "zero63"),
        design_check(q, "plain:6,3"),
        design_check(q, "u:7,3"),
        design_check(q, "zero73"),
        design_check(q, "residual63"),
        design_check(q, "comp(u:7,3)", t=3, lam=comb(q - 2, 4) - claimed_lambda("u:7,3", q)[1]),
    ]
    identities = [
        _general_identity(q),
        family_equality("u52-collapse-q16", q, "u:5,2", "plain:5,2", ("property",)),
        family_equality("u63-collapse-q16", q, "u:6,3", "plain:6,3", ("property",)),
        family_equality("plain63-equals-zero63-q16", q, "plain:6,3", "zero63"),
        _u73_paths(q),
        size_formula_check(q),
        _b_partition(q),
        _steiner_extension(q),
        _zero73_contains_steiner(q),
        _intersection_bound(q, "plain:5,2", 2, "plain52-intersection-bound-q16"),
        _intersection_bound(q, "plain:6,3", 5, "plain63-intersection-bound-q16"),
        _plain63_equality_cases(q),
    ]
    code = [
        _code_params(q, {"n": 17, "dimension": 11, "min_distance": 5, "kind": "A^2MDS"}),
        _minimal_polys(q),
        support_check(q, 5, minimum_weight=True),
        support_check(q, 6),
        support_check(q, 7),
        _trace_enumeration(q),
        _trace_macwilliams(q),
        _bch_defect_table(q),
        _trace_formula_table(q),
        _dual_orthogonality(q),
        _cubic_free_zeros(q),
    ]
    group = [
        _group_order(q),
        _three_transitive(q),
        _fixed_point_profile(q),
        _invariance(q, "plain:5,2", sample=False),
        _invariance(q, "plain:6,3", sample=False),
    ]
    return designs + identities + code + group


def suite_q32() -> list[Check]:
    q = 32
    designs = [
        design_check(q, "plain:6,3"),
        design_check(q, "b:5,3"),
        design_check(q, "bbar:5,3"),
        design_check(q, "u:5,3"),
        design_check(q, "u:7,3"),
        design_check(q, "comp(u:7,3)", t=4, lam=complementary_lambda(33, 7, 4, claimed_lambda("u:7,3", q)[1])),
        design_check(q, "plain:5,2", t=4, lam=0, check_id="plain52-empty-q32"),
        design_check(q, "supp(b:5,3)", t=4, lam=20475),
        design_check(q, "supp(plain:6,3)", t=4, lam=14040),
    ]
    identities = [
        _supplementary_index(q, "b:5,3", 20475),
        _supplementary_index(q, "plain:6,3", 14040),
        family_equality("u63-collapse-q32", q, "u:6,3", "plain:6,3", ("property",)),
        _u73_paths(q),
        size_formula_check(q),
        _b_partition(q),
        _exceptional_sets(q),
        _intersection_bound(q, "plain:6,3", 4, "plain63-intersection-bound-q32"),
    ]
    code = [
        _code_params(q, {"n": 33, "dimension": 27, "min_distance": 6, "kind": "NMDS"}),
        support_check(q, 6, minimum_weight=True),
        support_check(q, 7),
        _nmds_table(q),
        _trace_table_odd(q),
        _zero_set_roundtrip(q),
        _zero_set_sample(q),
    ]
    group = [
        _group_order(q),
        _fixed_point_profile(q),
        _orbits(q),
        _symmetric_representatives(q),
        _alltop(q),
        _involution_fixed(q),
        _invariance(q, "b:5,3", sample=True),
        _invariance(q, "plain:6,3", sample=True),
    ]
    return designs + identities + code + group


def suite_q64() -> list[Check]:
    q = 64
    return [
        _weights_q64(),
        _support_count(q, 5, lambda ws: ws.count(q, "plain:5,2")),
        _complementary_index(q, 502090),
        _support_count(q, 6, lambda ws: ws.count(q, "residual63")),
        size_formula_check(q, heavy=True),
        _support_count(q, 7, lambda ws: comb(q + 1, 7) - u_variant_size_formula(q), heavy=True),
        _group_order(q, heavy=True),
    ]


def property_suite() -> list[Check]:
    return [
        _conjugation(4),
        _conjugation(5),
        _shift_paths(4),
        _shift_paths(5),
        family_equality("u52-collapse-q16", 16, "u:5,2", "plain:5,2", ("property",)),
        family_equality("u63-collapse-q16", 16, "u:6,3", "plain:6,3", ("property",)),
        family_equality("u63-collapse-q32", 32, "u:6,3", "plain:6,3", ("property",)),
        _intersection_bound(16, "plain:5,2", 2, "plain52-intersection-bound-q16"),
        _intersection_bound(16, "plain:6,3", 5, "plain63-intersection-bound-q16"),
        _plain63_equality_cases(16),
        _intersection_bound(32, "plain:6,3", 4, "plain63-intersection-bound-q32"),
    ]


SUITES: dict[int, Callable[[], list[Check]]] = {16: suite_q16, 32: suite_q32, 64: suite_q64}


def select(checks: list[Check], heavy: bool, tags: set[str] | None = None) -> list[Check]:
    """Drop heavy checks unless enabled; keep only the given tags when set."""
    return [c for c in checks if (heavy or not c.heavy) and (tags is None or tags & set(c.tags))]


def run_suite(checks: list[Check], ws: Workspace) -> list[CheckResult]:
    ids = [c.check_id for c in checks]
    if len(set(ids)) != len(ids):
        raise ValueError(f"duplicate check ids in suite: {sorted({i for i in ids if ids.count(i) > 1})}")
    return [run_check(c, ws) for c in checks]
