"""
Trace Code
Codewords Tr(au + bu^2 + cu^3) over the unit circle, zero-set classification and weight tables
"""
import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from src.algebra.finite_field import UnitCircle, circle_for_q
from src.codes.bch_codes import CodeSpec, code_basis
from src.codes.weights import WeightTable, defect_weights
from src.designs.esp_blocks import as_block, esp, esp_rows
from src.utils.config import get_settings
from src.utils.errors import ConsistencyError, PreconditionError
from src.utils.observability import observe_check
from src.utils.parallel import run_chunks

logger = logging.getLogger(__name__)

MAX_ZEROS = 6
ENUMERABLE_Q = {16}


@dataclass(frozen=True)
class TraceCodeword:
    params: tuple[int, int, int]
    values: tuple[int, ...]

    @property
    def weight(self) -> int:
        return sum(1 for v in self.values if v)


@lru_cache(maxsize=None)
def trace_tables(q: int) -> np.ndarray:
    """T[p-1, x, j] = Tr(x * u_j^p) for p = 1, 2, 3 and every field element x."""
    circle = circle_for_q(q)
    ctx = circle.ctx
    x = ctx.elements()[:, None]
    tables = []
    for p in (1, 2, 3):
        u_p = ctx.pow_arr(circle.elements, p)[None, :]
        tables.append(ctx.trace_arr(ctx.mul_arr(x, u_p)))
    return np.stack(tables).astype(np.int32)


def evaluate_trace(q: int, a, b, c) -> np.ndarray:
    """Evaluation vectors for arrays of coefficients, shape (N, q+1)."""
    t = trace_tables(q)
    return t[0][np.asarray(a)] ^ t[1][np.asarray(b)] ^ t[2][np.asarray(c)]


def trace_codeword(circle: UnitCircle, a: int, b: int, c: int) -> TraceCodeword:
    """(Tr(au + bu^2 + cu^3))_{u in U_{q+1}} in discrete-log order."""
    ctx = circle.ctx
    values = []
    for u in circle.elements:
        u = int(u)
        inner = ctx.mul(a, u) ^ ctx.mul(b, ctx.mul(u, u)) ^ ctx.mul(c, ctx.power(u, 3))
        values.append(ctx.trace(inner))
    return TraceCodeword(params=(a, b, c), values=tuple(values))


def _weight_task(args) -> np.ndarray:
    q, c_start, c_stop = args
    t = trace_tables(q)
    n = t.shape[2]
    pair = (t[0][:, None, :] ^ t[1][None, :, :]).reshape(-1, n)
    counts = np.zeros(n + 1, dtype=np.int64)
    for c in range(c_start, c_stop):
        weights = np.count_nonzero(pair ^ t[2][c][None, :], axis=1)
        counts += np.bincount(weights, minlength=n + 1)
    return counts


@observe_check("trace-enumeration")
def enumerate_trace_code(q: int, jobs: int | None = None, force: bool = False) -> WeightTable:
    """
    Weight table of the trace code by evaluating every (a, b, c).

    Raises:
        PreconditionError: q is not enumerable (q^6 codewords) and force is not set
    """
    if q not in ENUMERABLE_Q and not force:
        raise PreconditionError(f"trace-code enumeration is limited to q in {sorted(ENUMERABLE_Q)}")
    order = q * q
    jobs = jobs or get_settings().jobs
    step = max(order // max(jobs * 4, 1), 1)
    tasks = [(q, s, min(s + step, order)) for s in range(0, order, step)]
    counts = sum(run_chunks(_weight_task, tasks, jobs))
    return WeightTable(entries=[int(x) for x in counts])


def trace_generators(q: int) -> list[tuple[int, int, int]]:
    """A GF(q)-basis of the parameter space: (a, b, c) in {1, alpha} on one coordinate."""
    ctx = circle_for_q(q).ctx
    gens = []
    for position in range(3):
        for scalar in (1, ctx.alpha):
            params = [0, 0, 0]
            params[position] = scalar
            gens.append(tuple(params))
    return gens


def dual_orthogonality(code: CodeSpec) -> bool:
    """Every trace codeword is orthogonal over GF(q) to every row of a basis of C."""
    circle = code.circle
    ctx = circle.ctx
    basis = code_basis(code)
    for params in trace_generators(code.q):
        word = np.array(trace_codeword(circle, *params).values, dtype=np.int64)
        products = ctx.mul_arr(basis, word[None, :])
        if np.any(np.bitwise_xor.reduce(products, axis=1) != 0):
            return False
    return True


def zero_set_classify(circle: UnitCircle, a: int, b: int, c: int) -> tuple[int, ...]:
    """
    Unit-circle indices u with Tr(au + bu^2 + cu^3) = 0.

    Raises:
        PreconditionError: (a, b, c) = (0, 0, 0)
        ConsistencyError: more than six zeros
    """
    if a == b == c == 0:
        raise PreconditionError("the zero triple has every point as a zero")
    values = evaluate_trace(circle.ctx.q, [a], [b], [c])[0]
    zeros = tuple(int(i) for i in np.nonzero(values == 0)[0])
    if len(zeros) > MAX_ZEROS:
        raise ConsistencyError(f"(a,b,c)=({a},{b},{c}) has {len(zeros)} zeros", witness=(a, b, c))
    return zeros


def parameterize_weight_q_minus_4(circle: UnitCircle, block, u_i: int, tau: int = 1) -> tuple[int, int, int]:
    """
    Coefficients whose zero set is the 5-block B with u_i as the double root.

    With w = sqrt(u_i sigma_5): a = tau (sigma_2 + u_i sigma_1)/w, b = tau (sigma_1 + u_i)/w, c = tau/w.

    Args:
        circle: unit circle
        block: five unit-circle indices
        u_i: index of the double root, a member of block
        tau: nonzero scalar in GF(q)

    Raises:
        PreconditionError: u_i not in block, tau outside GF(q)*, or sigma_3 + u_i sigma_2 != 0
    """
    ctx = circle.ctx
    block = as_block(block, ctx.q)
    if len(block) != 5 or u_i not in block:
        raise PreconditionError(f"{u_i} is not a point of the 5-block {block}")
    if tau == 0 or not ctx.in_subfield(tau):
        raise PreconditionError(f"tau={tau} must be a nonzero element of GF(q)")
    s1, s2, s3, s5 = (esp(circle, block, j) for j in (1, 2, 3, 5))
    u = circle.element(u_i)
    if s3 ^ ctx.mul(u, s2):
        raise PreconditionError(f"{u_i} is not a double root for {block}", witness=u_i)
    w = ctx.sqrt(ctx.mul(u, s5))
    return (
        ctx.div(ctx.mul(tau, s2 ^ ctx.mul(u, s1)), w),
        ctx.div(ctx.mul(tau, s1 ^ u), w),
        ctx.div(tau, w),
    )


def parameterize_weight_q_minus_5(circle: UnitCircle, block, tau: int = 1) -> tuple[int, int, int]:
    """
    Coefficients whose zero set is the 6-block B (sigma_{6,3}(B) = 0).

    a = tau sigma_2/sqrt(sigma_6), b = tau sigma_1/sqrt(sigma_6), c = tau/sqrt(sigma_6).
    """
    ctx = circle.ctx
    block = as_block(block, ctx.q)
    if len(block) != 6 or esp(circle, block, 3):
        raise PreconditionError(f"{block} is not a 6-block with vanishing sigma_3")
    if tau == 0 or not ctx.in_subfield(tau):
        raise PreconditionError(f"tau={tau} must be a nonzero element of GF(q)")
    s1, s2, s6 = (esp(circle, block, j) for j in (1, 2, 6))
    w = ctx.sqrt(s6)
    return ctx.div(ctx.mul(tau, s2), w), ctx.div(ctx.mul(tau, s1), w), ctx.div(tau, w)


def sampled_zero_bound(q: int, draws: int, seed: int, batch: int = 100_000) -> dict[int, int]:
    """
    Histogram of |zero(f)| over random nonzero (a, b, c).

    Returns:
        {zero count: occurrences}
    """
    rng = np.random.default_rng(seed)
    order = q * q
    hist = np.zeros(q + 2, dtype=np.int64)
    done = 0
    while done < draws:
        size = min(batch, draws - done)
        abc = rng.integers(0, order, size=(size, 3))
        abc = abc[np.any(abc != 0, axis=1)]
        values = evaluate_trace(q, abc[:, 0], abc[:, 1], abc[:, 2])
        hist += np.bincount(np.count_nonzero(values == 0, axis=1), minlength=q + 2)
        done += size
    return {i: int(c) for i, c in enumerate(hist) if c}


def trace_weight_table(q: int, a_q_minus_5: int, a_q_minus_4: int | None, dual_distance: int) -> WeightTable:
    """
    Full weight table of the [q+1, 6, q-5] trace code from its lowest weights.

    Args:
        q: subfield size
        a_q_minus_5: (q-1) times the number of six-point zero sets
        a_q_minus_4: (q-1) times the number of five-point zero sets (needed when dual_distance = 5)
        dual_distance: minimum distance of the BCH code
    """
    n = q + 1
    known = {q - 5: a_q_minus_5}
    if a_q_minus_4 is not None:
        known[q - 4] = a_q_minus_4
    needed = range(q - 5, n - dual_distance + 1)
    return defect_weights(n, 6, q, q - 5, dual_distance, {w: known[w] for w in needed if w in known})


def _zero_indicator(q: int, blocks: np.ndarray) -> np.ndarray:
    indicator = np.zeros((blocks.shape[0], q + 1), dtype=bool)
    indicator[np.arange(blocks.shape[0])[:, None], blocks.astype(np.intp)] = True
    return indicator


def roundtrip_weight_q_minus_4(circle: UnitCircle, blocks: np.ndarray) -> dict[str, int]:
    """
    Parameterize every (5-block, double root) pair and classify the result again.

    Returns:
        {"pairs": pairs tried, "valid": pairs with the double-root condition,
         "roundtrip_ok": valid pairs whose zero set is exactly the block}
    """
    ctx = circle.ctx
    q = ctx.q
    blocks = np.asarray(blocks)
    sig = esp_rows(circle, blocks, 5)
    values = circle.values(blocks)
    indicator = _zero_indicator(q, blocks)
    valid_total = ok_total = 0
    for j in range(blocks.shape[1]):
        u = values[:, j]
        valid = (sig[:, 3] ^ ctx.mul_arr(u, sig[:, 2])) == 0
        if not valid.any():
            continue
        u, s = u[valid], sig[valid]
        w_inv = ctx.inv_arr(ctx.pow_arr(ctx.mul_arr(u, s[:, 5]), ctx.order // 2))
        a = ctx.mul_arr(s[:, 2] ^ ctx.mul_arr(u, s[:, 1]), w_inv)
        b = ctx.mul_arr(s[:, 1] ^ u, w_inv)
        zero = evaluate_trace(q, a, b, w_inv) == 0
        valid_total += int(valid.sum())
        ok_total += int(np.count_nonzero(np.all(zero == indicator[valid], axis=1)))
    return {"pairs": int(blocks.shape[0] * blocks.shape[1]), "valid": valid_total, "roundtrip_ok": ok_total}


def roundtrip_weight_q_minus_5(circle: UnitCircle, blocks: np.ndarray) -> dict[str, int]:
    """Parameterize every 6-block with vanishing sigma_3 and classify the result again."""
    ctx = circle.ctx
    q = ctx.q
    blocks = np.asarray(blocks)
    sig = esp_rows(circle, blocks, 6)
    w_inv = ctx.inv_arr(ctx.pow_arr(sig[:, 6], ctx.order // 2))
    zero = evaluate_trace(q, ctx.mul_arr(sig[:, 2], w_inv), ctx.mul_arr(sig[:, 1], w_inv), w_inv) == 0
    ok = np.all(zero == _zero_indicator(q, blocks), axis=1)
    return {"blocks": int(blocks.shape[0]), "roundtrip_ok": int(np.count_nonzero(ok))}


def max_zeros_without_cubic(q: int) -> int:
    """Largest zero set over all (a, b, 0) with (a, b) != (0, 0)."""
    order = q * q
    a, b = np.meshgrid(np.arange(order), np.arange(order), indexing="ij")
    a, b = a.ravel()[1:], b.ravel()[1:]
    values = evaluate_trace(q, a, b, np.zeros_like(a))
    return int(np.count_nonzero(values == 0, axis=1).max())
