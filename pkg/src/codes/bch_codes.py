"""
BCH Code over GF(q)
Generator polynomial of the length q+1 code with zeros beta, beta^2, beta^3 and its low-weight supports
"""
import logging
from collections import Counter
from dataclasses import dataclass, field, replace

import numpy as np

from src.algebra.finite_field import FieldCtx, UnitCircle, circle_for_q
from src.designs.esp_blocks import BlockSet
from src.utils.combinatorics import colex_prefix_tasks, materialize_task
from src.utils.config import get_settings
from src.utils.errors import ConsistencyError, PreconditionError
from src.utils.observability import observe_check
from src.utils.parallel import run_chunks

logger = logging.getLogger(__name__)

PARITY_EXPONENTS = (1, 2, 3)
MAX_SUPPORT_K = 7
RREF_BATCH = 50_000


# ---------------------------------------------------------------------------
# Polynomials over GF(q^2), coefficient lists from low to high degree
# ---------------------------------------------------------------------------

def poly_trim(p: list[int]) -> list[int]:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def poly_mul(ctx: FieldCtx, p: list[int], r: list[int]) -> list[int]:
    out = [0] * (len(p) + len(r) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(r):
                out[i + j] ^= ctx.mul(a, b)
    return poly_trim(out)


def poly_divmod(ctx: FieldCtx, num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    num, den = poly_trim(num), poly_trim(den)
    if den == [0]:
        raise PreconditionError("polynomial division by zero")
    rem = list(num)
    quot = [0] * max(len(num) - len(den) + 1, 1)
    lead_inv = ctx.inv(den[-1])
    while len(rem) >= len(den) and rem != [0]:
        shift = len(rem) - len(den)
        factor = ctx.mul(rem[-1], lead_inv)
        quot[shift] = factor
        for i, b in enumerate(den):
            rem[shift + i] ^= ctx.mul(factor, b)
        rem = poly_trim(rem)
        if len(rem) - 1 < len(den) - 1:
            break
    return poly_trim(quot), rem


def poly_gcd(ctx: FieldCtx, p: list[int], r: list[int]) -> list[int]:
    p, r = poly_trim(p), poly_trim(r)
    while r != [0]:
        p, r = r, poly_divmod(ctx, p, r)[1]
    inv = ctx.inv(p[-1])
    return [ctx.mul(c, inv) for c in p]


def poly_lcm(ctx: FieldCtx, p: list[int], r: list[int]) -> list[int]:
    return poly_divmod(ctx, poly_mul(ctx, p, r), poly_gcd(ctx, p, r))[0]


def poly_eval(ctx: FieldCtx, p: list[int], x: int) -> int:
    acc = 0
    for c in reversed(p):
        acc = ctx.mul(acc, x) ^ c
    return acc


def minimal_poly(s: int, circle: UnitCircle) -> list[int]:
    """
    Minimal polynomial over GF(q) of beta^s.

    Returns:
        [1, 1] (x + 1) when beta^s lies in GF(q), else [1, Tr(beta^s), 1]
    """
    ctx = circle.ctx
    if not 0 <= s <= ctx.q:
        raise PreconditionError(f"s={s} outside 0..{ctx.q}")
    root = circle.element(s)
    if ctx.in_subfield(root):
        return [root, 1]
    return [ctx.mul(root, ctx.frobenius(root)), ctx.trace(root), 1]


# ---------------------------------------------------------------------------
# Code construction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CodeSpec:
    """The cyclic code of length q+1 over GF(q) with zeros beta^1, beta^2, beta^3."""

    q: int
    generator_poly: tuple[int, ...]
    parity_exponents: tuple[int, ...] = PARITY_EXPONENTS
    min_distance: int | None = None
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def n(self) -> int:
        return self.q + 1

    @property
    def dimension(self) -> int:
        return self.n - (len(self.generator_poly) - 1)

    @property
    def circle(self) -> UnitCircle:
        return circle_for_q(self.q)

    @property
    def kind(self) -> str:
        if self.min_distance is None:
            return "unknown"
        singleton_defect = self.n - self.dimension + 1 - self.min_distance
        if singleton_defect == 1:
            return "NMDS"
        return f"A^{singleton_defect}MDS"

    def generator_logs(self) -> list[str]:
        """Coefficients as discrete logs base alpha, "0" for the zero coefficient."""
        ctx = self.circle.ctx
        return [str(ctx.discrete_log(c)) if c else "0" for c in self.generator_poly]

    def report(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "dimension": self.dimension,
            "min_distance": self.min_distance,
            "kind": self.kind,
            "generator_poly_logs": self.generator_logs(),
        }


def build_code(q: int, establish_distance: bool = True, jobs: int | None = None) -> CodeSpec:
    """
    g = lcm(M_beta, M_beta^2, M_beta^3) and the resulting [q+1, q-5, d] code.

    Args:
        q: subfield size
        establish_distance: find d as the smallest k with a nonempty support set
        jobs: worker processes for the support scans

    Raises:
        ConsistencyError: g has the wrong degree, leaves GF(q) or does not divide x^(q+1) - 1
    """
    circle = circle_for_q(q)
    ctx = circle.ctx
    g = [1]
    for s in PARITY_EXPONENTS:
        g = poly_lcm(ctx, g, minimal_poly(s, circle))
    if len(g) - 1 != 2 * len(PARITY_EXPONENTS):
        raise ConsistencyError(f"generator degree {len(g) - 1}, expected 6")
    if not all(ctx.in_subfield(c) for c in g):
        raise ConsistencyError("generator polynomial has coefficients outside GF(q)")
    x_n_minus_1 = [1] + [0] * q + [1]
    if poly_divmod(ctx, x_n_minus_1, g)[1] != [0]:
        raise ConsistencyError("generator polynomial does not divide x^(q+1) - 1")
    code = CodeSpec(q=q, generator_poly=tuple(g))
    if establish_distance:
        code = replace(code, min_distance=minimum_distance(code, jobs))
    return code


def code_basis(code: CodeSpec) -> np.ndarray:
    """Rows x^i g(x), i < dimension, as coefficient vectors of length n."""
    rows = np.zeros((code.dimension, code.n), dtype=np.int64)
    g = np.array(code.generator_poly, dtype=np.int64)
    for i in range(code.dimension):
        rows[i, i:i + g.size] = g
    return rows


def is_codeword(code: CodeSpec, word) -> bool:
    """All coordinates in GF(q) and c(beta^i) = 0 for the parity exponents."""
    circle = code.circle
    ctx = circle.ctx
    word = [int(c) for c in word]
    if not all(ctx.in_subfield(c) for c in word):
        return False
    return all(poly_eval(ctx, word, circle.element(i)) == 0 for i in code.parity_exponents)


# ---------------------------------------------------------------------------
# Support enumeration
# ---------------------------------------------------------------------------

def _rref_batch(ctx: FieldCtx, mats: np.ndarray):
    """Row-reduce a batch of matrices over GF(q^2); returns (reduced, rank, pivot column mask)."""
    m = mats.copy()
    n, nrows, ncols = m.shape
    rank = np.zeros(n, dtype=np.intp)
    pivot = np.zeros((n, ncols), dtype=bool)
    row_ids = np.arange(nrows)
    for c in range(ncols):
        candidates = (m[:, :, c] != 0) & (row_ids[None, :] >= rank[:, None])
        idx = np.nonzero(candidates.any(axis=1))[0]
        if idx.size == 0:
            continue
        p = np.argmax(candidates[idx], axis=1)
        r = rank[idx]
        swap = m[idx, p].copy()
        m[idx, p] = m[idx, r]
        m[idx, r] = swap
        inv = ctx.inv_arr(m[idx, r, c])
        m[idx, r] = ctx.mul_arr(m[idx, r], inv[:, None])
        factors = m[idx, :, c].copy()
        factors[np.arange(idx.size), r] = 0
        m[idx] ^= ctx.mul_arr(factors[:, :, None], m[idx, r][:, None, :])
        pivot[idx, c] = True
        rank[idx] += 1
    return m, rank, pivot


def support_kernel(circle: UnitCircle, rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    For each k-subset, whether a codeword with exactly that support exists.

    The conditions sum_j c_j u_j^i = 0 for i in +-{1,2,3} are Frobenius-stable, so the
    GF(q) kernel has the same dimension and the same vanishing coordinates as the
    GF(q^2) kernel computed here.

    Returns:
        (is_support, kernel_dimension) arrays
    """
    ctx = circle.ctx
    size = circle.size
    rows = np.asarray(rows, dtype=np.int64)
    k = rows.shape[1]
    exponents = np.array([-3, -2, -1, 1, 2, 3], dtype=np.int64)
    positions = (exponents[None, :, None] * rows[:, None, :]) % size
    mats = circle.elements[positions]
    reduced, rank, pivot = _rref_batch(ctx, mats)
    free = ~pivot
    row_ids = np.arange(reduced.shape[1])
    reaches_free = ((reduced != 0) & free[:, None, :]).any(axis=2)
    needed = row_ids[None, :] < rank[:, None]
    is_support = (rank < k) & np.all(reaches_free | ~needed, axis=1)
    return is_support, k - rank


def _support_task(args):
    q, k, task, count_only = args
    circle = circle_for_q(q)
    rows = materialize_task(task)
    kept, dims = [], Counter()
    count = 0
    for start in range(0, rows.shape[0], RREF_BATCH):
        part = rows[start:start + RREF_BATCH]
        hit, kernel_dim = support_kernel(circle, part)
        dims.update(int(x) for x in kernel_dim[hit])
        count += int(np.count_nonzero(hit))
        if not count_only:
            kept.append(part[hit])
    if count_only:
        return count, dict(dims)
    return (np.concatenate(kept) if kept else np.zeros((0, k), np.int16)), dict(dims)


@dataclass
class SupportScan:
    k: int
    count: int
    kernel_dims: dict[int, int]
    blocks: BlockSet | None = None


@observe_check("support-scan")
def scan_supports(code: CodeSpec, k: int, count_only: bool = False, jobs: int | None = None) -> SupportScan:
    """
    Enumerate B_k(C) over all k-subsets of U_{q+1}.

    Raises:
        PreconditionError: k outside 1..7
        ConsistencyError: some support has a kernel of dimension above 2
    """
    if not 1 <= k <= MAX_SUPPORT_K:
        raise PreconditionError(f"support enumeration needs 1 <= k <= {MAX_SUPPORT_K}")
    settings = get_settings()
    jobs = jobs or settings.jobs
    tasks = [(code.q, k, t, count_only) for t in colex_prefix_tasks(code.n, k, settings.chunk_size)]
    results = run_chunks(_support_task, tasks, jobs)
    dims = Counter()
    for _, part_dims in results:
        dims.update(part_dims)
    if any(dim > 2 for dim in dims):
        raise ConsistencyError(f"kernel dimension above 2 among weight-{k} supports: {dict(dims)}")
    if count_only:
        return SupportScan(k, sum(c for c, _ in results), dict(sorted(dims.items())))
    rows = np.concatenate([r for r, _ in results]) if results else np.zeros((0, k), np.int16)
    blocks = BlockSet(code.q, k, f"bch-support:{k}", rows)
    return SupportScan(k, blocks.num_blocks, dict(sorted(dims.items())), blocks)


def supports_of_weight(code: CodeSpec, k: int, jobs: int | None = None) -> BlockSet:
    """B_k(C): supports of the weight-k codewords."""
    return scan_supports(code, k, jobs=jobs).blocks


def minimum_distance(code: CodeSpec, jobs: int | None = None) -> int:
    """Smallest k <= 7 with a nonempty support set."""
    for k in range(1, MAX_SUPPORT_K + 1):
        if scan_supports(code, k, count_only=True, jobs=jobs).count:
            return k
    raise ConsistencyError("no codeword of weight <= 7 found")


def low_weight_families(q: int) -> dict[int, str]:
    """Block-set family that B_k(C) coincides with, by weight."""
    m = q.bit_length() - 1
    if m % 2 == 0:
        return {5: "plain:5,2", 6: "residual63", 7: "comp(u:7,3)"}
    return {6: "plain:6,3", 7: "comp(u:7,3)"}
