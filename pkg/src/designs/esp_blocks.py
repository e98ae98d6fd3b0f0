"""
ESP Block Sets
Elementary symmetric polynomials over the unit circle and the block-set families built from them
"""
import json
import logging
import re
from dataclasses import dataclass
from functools import cached_property
from math import comb
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ValidationError, model_validator

from src.algebra.finite_field import FieldCtx, UnitCircle, circle_for_q
from src.designs.expressions import SymmetricExpr, parse_expression
from src.utils.combinatorics import (
    binom_mod2,
    colex_prefix_tasks,
    colex_rank,
    colex_table,
    colex_unrank,
    lex_sort_rows,
    materialize_task,
)
from src.utils.config import get_settings
from src.utils.errors import (
    BlockFileError,
    ConsistencyError,
    PreconditionError,
    UnsupportedFamilyError,
)
from src.utils.observability import observe_check
from src.utils.parallel import run_chunks

logger = logging.getLogger(__name__)

MAX_SCAN_K = 7
U_VARIANT_PAIRS = {(4, 2), (5, 2), (5, 3), (6, 3), (7, 3)}
B_VARIANT_PAIRS = {(5, 3), (6, 2)}
EVEN_ONLY = {"zero63", "zero73", "residual63"}


# ---------------------------------------------------------------------------
# Blocks and ESP evaluation
# ---------------------------------------------------------------------------

def as_block(indices, q: int | None = None) -> tuple[int, ...]:
    """Validate and return a block as a sorted tuple of unit-circle indices."""
    block = tuple(int(i) for i in indices)
    if any(b <= a for a, b in zip(block, block[1:])):
        raise PreconditionError(f"block {block} is not strictly increasing", witness=block)
    if q is not None and block and (block[0] < 0 or block[-1] > q):
        raise PreconditionError(f"block {block} leaves the range 0..{q}", witness=block)
    return block


def esp_values(ctx: FieldCtx, values: np.ndarray, upto: int) -> np.ndarray:
    """
    Elementary symmetric values of each row.

    Args:
        ctx: field context
        values: (N, k) field elements
        upto: highest degree wanted

    Returns:
        (N, upto + 1) array; column l holds sigma_{k,l}
    """
    values = np.asarray(values, dtype=np.int64)
    if values.ndim == 1:
        values = values[None, :]
    n, k = values.shape
    sig = np.zeros((n, upto + 1), dtype=np.int64)
    sig[:, 0] = 1
    for j in range(k):
        x = values[:, j]
        for l in range(min(j + 1, upto), 0, -1):
            sig[:, l] ^= ctx.mul_arr(x, sig[:, l - 1])
    return sig


def esp_rows(circle: UnitCircle, rows: np.ndarray, upto: int) -> np.ndarray:
    """esp_values for rows of unit-circle indices, multiplying in the log domain."""
    ctx = circle.ctx
    rows = np.asarray(rows, dtype=np.intp)
    logs = circle.logs[rows]
    sig = np.zeros((rows.shape[0], upto + 1), dtype=np.int64)
    sig[:, 0] = 1
    for j in range(rows.shape[1]):
        for l in range(min(j + 1, upto), 0, -1):
            sig[:, l] ^= ctx.mul_log(sig[:, l - 1], logs[:, j])
    return sig


def esp(circle: UnitCircle, block, l: int) -> int:
    """
    sigma_{k,l}(B) for a block of unit-circle indices.

    Raises:
        PreconditionError: l outside 0..k
    """
    block = as_block(block, circle.ctx.q)
    if not 0 <= l <= len(block):
        raise PreconditionError(f"degree {l} outside 0..{len(block)}")
    if not block:
        return 1
    return int(esp_rows(circle, np.array([block]), l)[0, l])


def shift_expansion(ctx: FieldCtx, sigmas: np.ndarray, a, k: int, l: int) -> np.ndarray:
    """
    sigma_{k,l}(B - a) from sigma_{k,0..l}(B) via sum_i a^(l-i) C(k-i, l-i) sigma_{k,i}.

    Binomials are reduced mod 2; a may be a scalar or one value per row.
    """
    out = np.zeros(sigmas.shape[0], dtype=np.int64)
    a_power = np.ones(sigmas.shape[0], dtype=np.int64)
    for i in range(l, -1, -1):
        if binom_mod2(k - i, l - i):
            out ^= ctx.mul_arr(a_power, sigmas[:, i])
        a_power = ctx.mul_arr(a_power, a)
    return out


def esp_shifted(circle: UnitCircle, block, a: int, l: int) -> int:
    """
    sigma_{k,l}(B - a), evaluated directly on {b - a} and by the binomial expansion.

    Raises:
        ConsistencyError: the two evaluations differ
    """
    ctx = circle.ctx
    block = as_block(block, ctx.q)
    k = len(block)
    if not 0 <= l <= k:
        raise PreconditionError(f"degree {l} outside 0..{k}")
    values = circle.values(block) ^ a
    direct = int(esp_values(ctx, values[None, :], l)[0, l])
    sig = esp_rows(circle, np.array([block]), l) if k else np.ones((1, 1), dtype=np.int64)
    expanded = int(shift_expansion(ctx, sig, a, k, l)[0])
    if direct != expanded:
        raise ConsistencyError(
            f"shifted ESP mismatch on {block}, a={a}, l={l}: {direct} != {expanded}",
            witness=(block, a, l),
        )
    return direct


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Family:
    """A block-set defining condition, e.g. plain:5,2 or u:7,3."""

    kind: str
    k: int
    l: int | None = None
    expr: str | None = None

    @property
    def tag(self) -> str:
        if self.kind in ("plain", "u", "b", "bbar"):
            return f"{self.kind}:{self.k},{self.l}"
        if self.kind == "general":
            return f"general:{self.k}:{self.expr}"
        return self.kind

    @cached_property
    def expression(self) -> SymmetricExpr | None:
        return parse_expression(self.expr, self.k) if self.kind == "general" else None


def parse_family(text: str) -> Family:
    """
    Parse a family tag.

    Accepted forms: plain:k,l  u:k,l  b:k,l  bbar:k,l  zero63  zero73  residual63
    general:<expr>  general:<k>:<expr>

    Raises:
        UnsupportedFamilyError: unknown tag or unsupported (k, l)
    """
    text = text.strip()
    if text == "zero63":
        return Family("zero63", 6)
    if text == "zero73":
        return Family("zero73", 7)
    if text == "residual63":
        return Family("residual63", 6)
    if text.startswith("general:"):
        body = text[len("general:"):]
        k = None
        head, sep, rest = body.partition(":")
        if sep and head.strip().isdigit():
            k, body = int(head), rest
        expr = parse_expression(body, k)
        if expr.k is None:
            raise UnsupportedFamilyError("❌ general family needs a block size: general:<k>:<expr>")
        if not 1 <= expr.k <= MAX_SCAN_K:
            raise UnsupportedFamilyError(f"❌ block size {expr.k} outside 1..{MAX_SCAN_K}")
        return Family("general", expr.k, expr=expr.text)

    match = re.fullmatch(r"(plain|u|b|bbar):(\d+),(\d+)", text)
    if not match:
        raise UnsupportedFamilyError(f"❌ unknown family {text!r}")
    kind, k, l = match.group(1), int(match.group(2)), int(match.group(3))
    if kind == "plain" and not (1 <= k <= MAX_SCAN_K and 0 <= l <= k):
        raise UnsupportedFamilyError(f"❌ plain family needs 1 <= k <= {MAX_SCAN_K}, 0 <= l <= k")
    if kind == "u" and (k, l) not in U_VARIANT_PAIRS:
        raise UnsupportedFamilyError(f"❌ u-variant not supported for (k,l)=({k},{l})")
    if kind in ("b", "bbar") and (k, l) not in B_VARIANT_PAIRS:
        raise UnsupportedFamilyError(f"❌ {kind}-variant not supported for (k,l)=({k},{l})")
    return Family(kind, k, l)


def _u_definitional(circle: UnitCircle, sig: np.ndarray, k: int, l: int) -> np.ndarray:
    ctx = circle.ctx
    hit = np.zeros(sig.shape[0], dtype=bool)
    for a in circle.elements:
        hit |= shift_expansion(ctx, sig, int(a), k, l) == 0
        if hit.all():
            break
    return hit


def _b_mask(circle: UnitCircle, rows: np.ndarray, sig: np.ndarray, k: int, l: int) -> np.ndarray:
    ctx = circle.ctx
    values = circle.values(rows)
    hit = np.zeros(rows.shape[0], dtype=bool)
    for j in range(k):
        hit |= shift_expansion(ctx, sig, values[:, j], k, l) == 0
    return hit


def _deleted_sigmas(ctx: FieldCtx, sig: np.ndarray, a, upto: int) -> np.ndarray:
    """sigma_{k-1,0..upto}(B minus {a}) from sigma_{k,0..upto}(B), for a in B."""
    out = np.empty((sig.shape[0], upto + 1), dtype=np.int64)
    out[:, 0] = 1
    for i in range(1, upto + 1):
        out[:, i] = sig[:, i] ^ ctx.mul_arr(a, out[:, i - 1])
    return out


def _u73_accelerated(circle: UnitCircle, rows: np.ndarray, sig: np.ndarray) -> np.ndarray:
    ctx = circle.ctx
    values = circle.values(rows)
    hit = np.zeros(rows.shape[0], dtype=bool)
    for j in range(rows.shape[1]):
        hit |= _deleted_sigmas(ctx, sig, values[:, j], 3)[:, 3] == 0
    return hit


def _zero63_mask(circle: UnitCircle, rows: np.ndarray, sig: np.ndarray) -> np.ndarray:
    ctx = circle.ctx
    values = circle.values(rows)
    hit = np.zeros(rows.shape[0], dtype=bool)
    for j in range(rows.shape[1]):
        hit |= _deleted_sigmas(ctx, sig, values[:, j], 2)[:, 2] == 0
    return hit


def _zero73_mask(circle: UnitCircle, rows: np.ndarray, sig: np.ndarray) -> np.ndarray:
    ctx = circle.ctx
    values = circle.values(rows)
    hit = np.zeros(rows.shape[0], dtype=bool)
    for i in range(rows.shape[1]):
        once = _deleted_sigmas(ctx, sig, values[:, i], 2)
        for j in range(i + 1, rows.shape[1]):
            hit |= _deleted_sigmas(ctx, once, values[:, j], 2)[:, 2] == 0
    return hit


def family_mask(family: Family, circle: UnitCircle, rows: np.ndarray, accelerated: bool = True) -> np.ndarray:
    """
    Membership of each row (a k-subset of indices) in the family.

    Args:
        family: parsed family
        circle: unit circle of the field
        rows: (N, k) sorted index rows
        accelerated: use the one-point-deletion test for u:7,3

    Returns:
        Boolean array of length N
    """
    if family.kind in EVEN_ONLY and circle.ctx.m % 2:
        raise PreconditionError(f"family {family.tag} is defined for even m only")
    k = family.k
    if family.kind == "general":
        expr = family.expression
        sig = esp_rows(circle, rows, max(expr.degree_needed(), 0))
        return expr.evaluate(circle.ctx, sig) == 0
    if family.kind == "plain":
        return esp_rows(circle, rows, family.l)[:, family.l] == 0
    if family.kind == "u":
        sig = esp_rows(circle, rows, family.l)
        if accelerated and (k, family.l) == (7, 3):
            return _u73_accelerated(circle, rows, sig)
        return _u_definitional(circle, sig, k, family.l)
    if family.kind in ("b", "bbar"):
        sig = esp_rows(circle, rows, family.l)
        b_hit = _b_mask(circle, rows, sig, k, family.l)
        if family.kind == "b":
            return b_hit
        return _u_definitional(circle, sig, k, family.l) & ~b_hit
    if family.kind == "zero63":
        return _zero63_mask(circle, rows, esp_rows(circle, rows, 2))
    if family.kind == "zero73":
        return _zero73_mask(circle, rows, esp_rows(circle, rows, 2))
    if family.kind == "residual63":
        sig = esp_rows(circle, rows, 3)
        return (sig[:, 3] == 0) & ~_zero63_mask(circle, rows, sig)
    raise UnsupportedFamilyError(f"❌ unknown family kind {family.kind!r}")


# ---------------------------------------------------------------------------
# BlockSet
# ---------------------------------------------------------------------------

class BlockSetFile(BaseModel):
    """On-disk block-set JSON layout."""

    q: int
    k: int
    family: str
    num_blocks: int
    blocks: list[list[int]]

    @model_validator(mode="after")
    def _check_blocks(self):
        previous = None
        for n, block in enumerate(self.blocks):
            if len(block) != self.k:
                raise ValueError(f"block {n} has size {len(block)}, expected {self.k}")
            if any(b <= a for a, b in zip(block, block[1:])):
                raise ValueError(f"block {n} is not strictly increasing")
            if block and (block[0] < 0 or block[-1] > self.q):
                raise ValueError(f"block {n} has an index outside 0..{self.q}")
            if previous is not None and block <= previous:
                raise ValueError(f"block {n} breaks lexicographic order")
            previous = block
        if self.num_blocks != len(self.blocks):
            raise ValueError(f"num_blocks={self.num_blocks} but {len(self.blocks)} blocks listed")
        return self


class BlockSet:
    """Duplicate-free set of sorted k-subsets of {0, ..., q}, stored lexicographically sorted."""

    def __init__(self, q: int, k: int, family: str, blocks):
        rows = np.asarray(blocks, dtype=np.int16).reshape(-1, k) if k else np.zeros((len(blocks), 0), np.int16)
        rows = np.sort(rows, axis=1)
        if rows.size and (rows.min() < 0 or rows.max() > q):
            raise PreconditionError(f"block index outside 0..{q}")
        if k > 1 and rows.shape[0] and np.any(np.diff(rows, axis=1) == 0):
            raise PreconditionError("block with a repeated point")
        self.q = q
        self.k = k
        self.family = family
        self.blocks = lex_sort_rows(rows)
        if self.blocks.shape[0] > 1 and np.any(np.all(self.blocks[1:] == self.blocks[:-1], axis=1)):
            raise PreconditionError("repeated block in block set")

    @property
    def v(self) -> int:
        return self.q + 1

    @property
    def num_blocks(self) -> int:
        return int(self.blocks.shape[0])

    def __len__(self) -> int:
        return self.num_blocks

    def __iter__(self):
        return (tuple(int(x) for x in row) for row in self.blocks)

    def __repr__(self) -> str:
        return f"BlockSet(q={self.q}, k={self.k}, family={self.family!r}, num_blocks={self.num_blocks})"

    @cached_property
    def ranks(self) -> np.ndarray:
        """Sorted colex ranks, used as membership keys."""
        return np.sort(colex_rank(self.blocks)) if self.num_blocks else np.zeros(0, np.int64)

    def contains_rows(self, rows: np.ndarray) -> np.ndarray:
        rows = np.sort(np.asarray(rows, dtype=np.int16), axis=1)
        return np.isin(colex_rank(rows), self.ranks)

    def __contains__(self, block) -> bool:
        block = tuple(sorted(int(i) for i in block))
        if len(block) != self.k:
            return False
        return bool(self.contains_rows(np.array([block]))[0])

    def same_blocks(self, other: "BlockSet") -> bool:
        return self.k == other.k and self.q == other.q and np.array_equal(self.ranks, other.ranks)

    def _from_ranks(self, ranks: np.ndarray, family: str) -> "BlockSet":
        return BlockSet(self.q, self.k, family, colex_unrank(ranks, self.k))

    def difference(self, other: "BlockSet", family: str | None = None) -> "BlockSet":
        ranks = np.setdiff1d(self.ranks, other.ranks, assume_unique=True)
        return self._from_ranks(ranks, family or f"({self.family})-({other.family})")

    def union(self, other: "BlockSet", family: str | None = None) -> "BlockSet":
        ranks = np.union1d(self.ranks, other.ranks)
        return self._from_ranks(ranks, family or f"({self.family})|({other.family})")

    def intersection(self, other: "BlockSet", family: str | None = None) -> "BlockSet":
        ranks = np.intersect1d(self.ranks, other.ranks, assume_unique=True)
        return self._from_ranks(ranks, family or f"({self.family})&({other.family})")

    def symmetric_difference_witness(self, other: "BlockSet") -> dict | None:
        """First block (lexicographically) present in exactly one of the two sets, or None."""
        only_self = self.difference(other)
        only_other = other.difference(self)
        if not only_self.num_blocks and not only_other.num_blocks:
            return None
        return {
            "only_left": [list(b) for b in list(only_self)[:1]],
            "only_right": [list(b) for b in list(only_other)[:1]],
            "left_count": only_self.num_blocks,
            "right_count": only_other.num_blocks,
        }

    def to_json(self) -> str:
        """Canonical text: one block per line, newline terminated."""
        header = [
            "{",
            f'  "q": {self.q},',
            f'  "k": {self.k},',
            f'  "family": {json.dumps(self.family)},',
            f'  "num_blocks": {self.num_blocks},',
        ]
        if not self.num_blocks:
            return "\n".join(header + ['  "blocks": []', "}"]) + "\n"
        lines = ["    [" + ", ".join(str(int(x)) for x in row) + "]" for row in self.blocks]
        return "\n".join(header + ['  "blocks": [', ",\n".join(lines), "  ]", "}"]) + "\n"

    def save(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json(), encoding="utf-8")
        return path

    @classmethod
    def from_json(cls, text: str) -> "BlockSet":
        """
        Parse the block-set JSON format.

        Raises:
            BlockFileError: with the line number of the offending entry when known
        """
        try:
            model = BlockSetFile.model_validate_json(text)
        except ValidationError as e:
            first = e.errors()[0]
            raise BlockFileError(first["msg"], _error_line(text, first)) from e
        return cls(model.q, model.k, model.family, model.blocks or np.zeros((0, model.k), np.int16))

    @classmethod
    def load(cls, path) -> "BlockSet":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise BlockFileError(f"cannot read {path}: {e}") from e
        return cls.from_json(text)


def _error_line(text: str, error: dict) -> int | None:
    """Best-effort line of a pydantic error inside the canonical layout."""
    if error.get("type") == "json_invalid":
        match = re.search(r"line (\d+)", error.get("msg", ""))
        return int(match.group(1)) if match else None
    message = error.get("msg", "")
    loc = error.get("loc", ())
    index = None
    if len(loc) >= 2 and loc[0] == "blocks" and isinstance(loc[1], int):
        index = loc[1]
    else:
        match = re.search(r"block (\d+)", message)
        if match:
            index = int(match.group(1))
    start = text.find('"blocks"')
    if index is None or start < 0:
        if loc:
            key = text.find(f'"{loc[0]}"')
            return text.count("\n", 0, key) + 1 if key >= 0 else None
        return None
    for n, inner in enumerate(re.finditer(r"\[[^\[\]]*\]", text[start:])):
        if n == index:
            return text.count("\n", 0, start + inner.start()) + 1
    return None


# ---------------------------------------------------------------------------
# Generation
# ---------------------------------------------------------------------------

def _scan_task(args) -> np.ndarray | int:
    q, tag, task, count_only, accelerated = args
    rows = materialize_task(task)
    mask = family_mask(parse_family(tag), circle_for_q(q), rows, accelerated)
    if count_only:
        return int(np.count_nonzero(mask))
    return rows[mask]


def _tasks(q: int, family: Family, count_only: bool, accelerated: bool, chunk_size: int | None):
    chunk = chunk_size or get_settings().chunk_size
    return [
        (q, family.tag, task, count_only, accelerated)
        for task in colex_prefix_tasks(q + 1, family.k, chunk)
    ]


def generate_blockset(
    q: int,
    family: Family | str,
    jobs: int | None = None,
    accelerated: bool = True,
    chunk_size: int | None = None,
) -> BlockSet:
    """
    Scan all k-subsets of U_{q+1} and keep those in the family.

    Args:
        q: subfield size
        family: Family or tag string
        jobs: worker processes (defaults to settings)
        accelerated: see family_mask
        chunk_size: rows per task (defaults to settings)

    Returns:
        BlockSet tagged with the family
    """
    if isinstance(family, str):
        family = parse_family(family)
    circle = circle_for_q(q)
    if family.kind in EVEN_ONLY and circle.ctx.m % 2:
        raise PreconditionError(f"family {family.tag} is defined for even m only")
    jobs = jobs or get_settings().jobs
    parts = run_chunks(_scan_task, _tasks(q, family, False, accelerated, chunk_size), jobs)
    rows = np.concatenate(parts) if parts else np.zeros((0, family.k), np.int16)
    logger.debug("family %s at q=%d: %d blocks", family.tag, q, rows.shape[0])
    return BlockSet(q, family.k, family.tag, rows)


@observe_check("count-family")
def count_family(
    q: int,
    family: Family | str,
    jobs: int | None = None,
    accelerated: bool = True,
    chunk_size: int | None = None,
) -> int:
    """Streaming count of family members; nothing is materialized beyond one chunk per worker."""
    if isinstance(family, str):
        family = parse_family(family)
    jobs = jobs or get_settings().jobs
    return sum(run_chunks(_scan_task, _tasks(q, family, True, accelerated, chunk_size), jobs))


def blockset_plain(q: int, k: int, l: int, jobs: int | None = None) -> BlockSet:
    """All k-subsets B with sigma_{k,l}(B) = 0."""
    return generate_blockset(q, parse_family(f"plain:{k},{l}"), jobs)


def blockset_general(q: int, k: int, f: str | SymmetricExpr, jobs: int | None = None) -> BlockSet:
    """All k-subsets B with f(B) = 0 for a polynomial f in the sigma_{k,i}."""
    text = f.text if isinstance(f, SymmetricExpr) else f
    expr = parse_expression(text, k)
    return generate_blockset(q, Family("general", k, expr=expr.text), jobs)


def blockset_u_variant(q: int, k: int, l: int, jobs: int | None = None, accelerated: bool = True) -> BlockSet:
    """All k-subsets B with sigma_{k,l}(B - a) = 0 for some a on the unit circle."""
    return generate_blockset(q, parse_family(f"u:{k},{l}"), jobs, accelerated=accelerated)


def blockset_b_variant(q: int, k: int, l: int, jobs: int | None = None) -> BlockSet:
    """All k-subsets B with sigma_{k,l}(B - a) = 0 for some a in B."""
    return generate_blockset(q, parse_family(f"b:{k},{l}"), jobs)


def blockset_bbar_variant(q: int, k: int, l: int, jobs: int | None = None) -> BlockSet:
    """u-variant minus b-variant."""
    return generate_blockset(q, parse_family(f"bbar:{k},{l}"), jobs)


def blockset_zero63(q: int, jobs: int | None = None) -> BlockSet:
    """6-subsets containing a 5-subset with vanishing sigma_{5,2} (m even)."""
    return generate_blockset(q, parse_family("zero63"), jobs)


def blockset_zero73(q: int, jobs: int | None = None) -> BlockSet:
    """7-subsets containing a 5-subset with vanishing sigma_{5,2} (m even)."""
    return generate_blockset(q, parse_family("zero73"), jobs)


def blockset_bch_residual6(q: int, jobs: int | None = None) -> BlockSet:
    """B_{sigma6,3} minus zero63 (m even); the weight-6 supports of the BCH code."""
    return generate_blockset(q, parse_family("residual63"), jobs)


def u_variant_size_formula(q: int) -> int:
    """Closed-form |B^u_{sigma7,3}| for either parity of m."""
    m = q.bit_length() - 1
    if m % 2 == 0:
        return (q - 4) * (q - 5) * (q - 10) * comb(q + 1, 3) // 120
    return (q - 5) * (q - 8) * comb(q + 1, 4) // 30


# ---------------------------------------------------------------------------
# Exceptional sets of a quadruple
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExceptionalSets:
    """S1 and S = S1 | quad, as sorted unit-circle indices."""

    quad: tuple[int, ...]
    s1: tuple[int, ...]
    s: tuple[int, ...]


def exceptional_sets(circle: UnitCircle, quad) -> ExceptionalSets:
    """
    The exceptional points of a quadruple.

    S1 = {(s3 + u_i s2)/(s2 + u_i s1) : u_i in quad} | {sqrt(s3/s1)} with s_j = sigma_{4,j}(quad).

    Raises:
        PreconditionError: some fifth point u5 gives sigma_{5,2}(quad | {u5}) = 0 (witness u5)
        ConsistencyError: a denominator vanishes, a point leaves the unit circle,
            or the five points are not distinct and outside the quadruple
    """
    ctx = circle.ctx
    quad = as_block(quad, ctx.q)
    if len(quad) != 4:
        raise PreconditionError(f"expected 4 points, got {len(quad)}")
    outside = np.array([u for u in range(circle.size) if u not in quad], dtype=np.int16)
    rows = np.column_stack([np.broadcast_to(np.array(quad, np.int16), (outside.size, 4)), outside])
    vanishing = esp_rows(circle, rows, 2)[:, 2] == 0
    if vanishing.any():
        witness = int(outside[np.argmax(vanishing)])
        raise PreconditionError(f"sigma_5,2 vanishes on {quad} with u5={witness}", witness=witness)

    s1v, s2v, s3v = (esp(circle, quad, j) for j in (1, 2, 3))
    points = []
    for i in quad:
        u = circle.element(i)
        den = s2v ^ ctx.mul(u, s1v)
        if den == 0:
            raise ConsistencyError(f"zero denominator at u={i} for {quad}", witness=(quad, i))
        points.append(ctx.div(s3v ^ ctx.mul(u, s2v), den))
    if s1v == 0:
        raise ConsistencyError(f"sigma_4,1 vanishes on {quad}", witness=quad)
    points.append(ctx.sqrt(ctx.div(s3v, s1v)))

    indices = []
    for p in points:
        if not circle.contains(p):
            raise ConsistencyError(f"exceptional point {p} of {quad} is off the unit circle", witness=(quad, p))
        indices.append(circle.index(p))
    s1 = tuple(sorted(set(indices)))
    if len(s1) != 5:
        raise ConsistencyError(
            f"exceptional points of {quad} are not distinct: {tuple(indices)}", witness=(quad, tuple(indices))
        )
    s = tuple(sorted(set(s1) | set(quad)))
    if len(s) != 9:
        raise ConsistencyError(f"exceptional points {s1} meet the quadruple {quad}", witness=(quad, s1))
    return ExceptionalSets(quad=quad, s1=s1, s=s)


def quintuple_ratio(circle: UnitCircle, block) -> int | None:
    """sigma_{5,3}/sigma_{5,2} of a 5-block, or None when sigma_{5,2} vanishes."""
    ctx = circle.ctx
    s2, s3 = esp(circle, block, 2), esp(circle, block, 3)
    return None if s2 == 0 else ctx.div(s3, s2)


def all_blocks(q: int, k: int) -> BlockSet:
    """Every k-subset of U_{q+1}."""
    return BlockSet(q, k, f"all:{k}", colex_table(q + 1, k))


def random_blocks(q: int, k: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """count uniformly random k-subsets of {0..q} as sorted rows."""
    return np.sort(np.argsort(rng.random((count, q + 1)), axis=1)[:, :k], axis=1).astype(np.int16)


def conjugation_identity_holds(circle: UnitCircle, rows: np.ndarray) -> bool:
    """sigma_{k,l}^q * sigma_{k,k} = sigma_{k,k-l} on every row and every l."""
    ctx = circle.ctx
    k = rows.shape[1]
    sig = esp_rows(circle, rows, k)
    for l in range(k + 1):
        lhs = ctx.mul_arr(ctx.pow_arr(sig[:, l], ctx.q), sig[:, k])
        if np.any(lhs != sig[:, k - l]):
            return False
    return True


def shift_paths_agree(circle: UnitCircle, rows: np.ndarray, shifts: np.ndarray) -> bool:
    """Direct evaluation on {b - a} matches the binomial expansion for every l."""
    ctx = circle.ctx
    k = rows.shape[1]
    shifts = np.asarray(shifts, dtype=np.int64)
    direct = esp_values(ctx, circle.values(rows) ^ shifts[:, None], k)
    sig = esp_rows(circle, rows, k)
    return all(
        np.array_equal(direct[:, l], shift_expansion(ctx, sig, shifts, k, l)) for l in range(k + 1)
    )
