"""
Unit-Circle Stabilizer
Linear fractional maps preserving U_{q+1}, their closure, orbits on k-subsets and the short-orbit design
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from math import lcm

import numpy as np
from pydantic import BaseModel, PrivateAttr

from src.algebra.finite_field import FieldCtx, UnitCircle, circle_for_q
from src.designs.designs import Design
from src.designs.esp_blocks import BlockSet, blockset_b_variant
from src.utils.combinatorics import colex_rank, colex_table
from src.utils.errors import ConsistencyError, PreconditionError
from src.utils.observability import observe_check

logger = logging.getLogger(__name__)

SEED_TYPE3 = 4


@dataclass(frozen=True)
class Moebius:
    """u -> (au + b)/(cu + d), stored normalized (first nonzero entry of (a, b, c, d) equal to 1)."""

    a: int
    b: int
    c: int
    d: int

    @staticmethod
    def make(ctx: FieldCtx, a: int, b: int, c: int, d: int) -> "Moebius":
        if ctx.mul(a, d) == ctx.mul(b, c):
            raise PreconditionError(f"degenerate map ({a},{b},{c},{d})")
        lead = next(x for x in (a, b, c, d) if x)
        inv = ctx.inv(lead)
        return Moebius(*(ctx.mul(x, inv) for x in (a, b, c, d)))

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return self.a, self.b, self.c, self.d

    def compose(self, ctx: FieldCtx, other: "Moebius") -> "Moebius":
        """self after other."""
        a1, b1, c1, d1 = self.entries
        a2, b2, c2, d2 = other.entries
        return Moebius.make(
            ctx,
            ctx.mul(a1, a2) ^ ctx.mul(b1, c2),
            ctx.mul(a1, b2) ^ ctx.mul(b1, d2),
            ctx.mul(c1, a2) ^ ctx.mul(d1, c2),
            ctx.mul(c1, b2) ^ ctx.mul(d1, d2),
        )

    def inverse(self, ctx: FieldCtx) -> "Moebius":
        return Moebius.make(ctx, self.d, self.b, self.c, self.a)

    def apply(self, ctx: FieldCtx, u: int) -> int | None:
        """Image of u; None stands for the point at infinity."""
        den = ctx.mul(self.c, u) ^ self.d
        if den == 0:
            return None
        return ctx.div(ctx.mul(self.a, u) ^ self.b, den)

    def permutation(self, circle: UnitCircle) -> np.ndarray:
        return permutations_of(circle, np.array([self.entries], dtype=np.int64).T)[0]


def identity() -> Moebius:
    return Moebius(1, 0, 0, 1)


def rotation(circle: UnitCircle) -> Moebius:
    """u -> beta u."""
    return Moebius.make(circle.ctx, circle.beta, 0, 0, 1)


def inversion() -> Moebius:
    """u -> 1/u."""
    return Moebius(0, 1, 1, 0)


def type3(circle: UnitCircle, c: int) -> Moebius:
    """u -> (u + c^q)/(cu + 1) for c off the unit circle."""
    ctx = circle.ctx
    if c == 0 or circle.contains(c):
        raise PreconditionError(f"c={c} must be nonzero and off the unit circle")
    return Moebius.make(ctx, 1, ctx.frobenius(c), c, 1)


def stab_generators(circle: UnitCircle, reduced: bool = True) -> list[Moebius]:
    """
    Rotation, inversion and type-3 maps.

    Args:
        circle: unit circle
        reduced: only SEED_TYPE3 type-3 maps (c = alpha^1..alpha^4) instead of all of them
    """
    ctx = circle.ctx
    gens = [rotation(circle), inversion()]
    outside = [c for c in range(1, ctx.order) if not circle.contains(c)]
    if reduced:
        outside = [ctx.power(ctx.alpha, j) for j in range(1, SEED_TYPE3 + 1)]
    gens.extend(type3(circle, c) for c in outside)
    return gens


# ---------------------------------------------------------------------------
# Vectorized maps: arrays of shape (4, N) holding a, b, c, d
# ---------------------------------------------------------------------------

def _normalize(ctx: FieldCtx, mats: np.ndarray) -> np.ndarray:
    a, b, c, d = mats
    lead = np.where(a != 0, a, np.where(b != 0, b, np.where(c != 0, c, d)))
    return ctx.mul_arr(mats, ctx.inv_arr(lead)[None, :])


def _compose(ctx: FieldCtx, f: Moebius, mats: np.ndarray) -> np.ndarray:
    a1, b1, c1, d1 = f.entries
    a2, b2, c2, d2 = mats
    out = np.stack([
        ctx.mul_arr(a2, a1) ^ ctx.mul_arr(c2, b1),
        ctx.mul_arr(b2, a1) ^ ctx.mul_arr(d2, b1),
        ctx.mul_arr(a2, c1) ^ ctx.mul_arr(c2, d1),
        ctx.mul_arr(b2, c1) ^ ctx.mul_arr(d2, d1),
    ])
    return _normalize(ctx, out)


def _keys(ctx: FieldCtx, mats: np.ndarray) -> np.ndarray:
    n = ctx.order
    a, b, c, d = mats.astype(np.int64)
    return ((a * n + b) * n + c) * n + d


def _from_keys(ctx: FieldCtx, keys: np.ndarray) -> np.ndarray:
    n = ctx.order
    d = keys % n
    c = keys // n % n
    b = keys // (n * n) % n
    a = keys // (n * n * n)
    return np.stack([a, b, c, d])


def permutations_of(circle: UnitCircle, mats: np.ndarray) -> np.ndarray:
    """
    Action of each map on unit-circle indices, shape (N, q+1).

    Raises:
        ConsistencyError: some map sends a unit-circle point off the circle
    """
    ctx = circle.ctx
    u = circle.elements[None, :]
    a, b, c, d = (x[:, None] for x in mats)
    num = ctx.mul_arr(a, u) ^ b
    den = ctx.mul_arr(c, u) ^ d
    if np.any(den == 0):
        raise ConsistencyError("map sends a unit-circle point to infinity")
    images = ctx.mul_arr(num, ctx.inv_arr(den))
    perm = circle.index_of[images]
    if np.any(perm < 0):
        raise ConsistencyError("map does not preserve the unit circle")
    return perm.astype(np.int16)


class GroupClosure:
    """All elements generated by a list of maps, sorted by packed key."""

    def __init__(self, circle: UnitCircle, generators: list[Moebius], elements: np.ndarray):
        self.circle = circle
        self.generators = generators
        self.elements = elements

    @property
    def q(self) -> int:
        return self.circle.ctx.q

    @property
    def order(self) -> int:
        return int(self.elements.shape[1])

    def element(self, i: int) -> Moebius:
        return Moebius(*(int(x) for x in self.elements[:, i]))

    @cached_property
    def generator_perms(self) -> np.ndarray:
        return permutations_of(self.circle, np.array([g.entries for g in self.generators], dtype=np.int64).T)

    @cached_property
    def perms(self) -> np.ndarray:
        return permutations_of(self.circle, self.elements)

    @cached_property
    def element_orders(self) -> np.ndarray:
        """Order of every element, from powers of its permutation."""
        perms = self.perms.astype(np.intp)
        ident = np.arange(perms.shape[1])
        orders = np.zeros(self.order, dtype=np.int64)
        current = perms.copy()
        for step in range(1, perms.shape[1] + 2):
            done = (orders == 0) & np.all(current == ident[None, :], axis=1)
            orders[done] = step
            if np.all(orders):
                break
            current = np.take_along_axis(perms, current, axis=1)
        if not np.all(orders):
            raise ConsistencyError("element order exceeds q+1")
        return orders

    def index_of(self, elem: Moebius) -> int:
        key = _keys(self.circle.ctx, np.array([elem.entries], dtype=np.int64).T)[0]
        keys = _keys(self.circle.ctx, self.elements)
        pos = int(np.searchsorted(keys, key))
        if pos >= keys.size or keys[pos] != key:
            raise PreconditionError(f"{elem} is not in the closure")
        return pos


@observe_check("group-closure")
def close_group(circle: UnitCircle, gens: list[Moebius] | None = None) -> GroupClosure:
    """
    Breadth-first closure of the generators under composition.

    Seeds with the reduced generator list and falls back to all type-3 maps on shortfall.

    Raises:
        ConsistencyError: the closure exceeds q^3 - q elements
    """
    ctx = circle.ctx
    q = ctx.q
    target = q ** 3 - q
    candidates = [gens] if gens is not None else [stab_generators(circle), stab_generators(circle, reduced=False)]
    for generators in candidates:
        permutations_of(circle, np.array([g.entries for g in generators], dtype=np.int64).T)
        seen = _keys(ctx, np.array([identity().entries], dtype=np.int64).T)
        frontier = seen.copy()
        while frontier.size:
            mats = _from_keys(ctx, frontier)
            images = np.concatenate([_keys(ctx, _compose(ctx, g, mats)) for g in generators])
            fresh = np.setdiff1d(np.unique(images), seen, assume_unique=True)
            seen = np.union1d(seen, fresh)
            frontier = fresh
            if seen.size > target:
                raise ConsistencyError(f"closure reached {seen.size} elements, more than q^3 - q = {target}")
        logger.info("closure of %d generators at q=%d has order %d", len(generators), q, seen.size)
        if seen.size == target:
            return GroupClosure(circle, generators, _from_keys(ctx, seen))
        if gens is not None:
            break
    raise ConsistencyError(f"closure order {seen.size} short of q^3 - q = {target}")


def fixed_points(closure_or_circle, elem: Moebius) -> int:
    circle = closure_or_circle.circle if isinstance(closure_or_circle, GroupClosure) else closure_or_circle
    perm = elem.permutation(circle)
    return int(np.count_nonzero(perm == np.arange(perm.size)))


def element_order(circle: UnitCircle, elem: Moebius) -> int:
    perm = elem.permutation(circle).astype(np.intp)
    seen = np.zeros(perm.size, dtype=bool)
    result = 1
    for start in range(perm.size):
        if seen[start]:
            continue
        length, i = 0, start
        while not seen[i]:
            seen[i] = True
            i = perm[i]
            length += 1
        result = lcm(result, length)
    return result


def order2_fixed_points(circle: UnitCircle, elem: Moebius) -> int:
    """
    Fixed points on U_{q+1} of an involution.

    Raises:
        PreconditionError: elem does not have order 2
    """
    if element_order(circle, elem) != 2:
        raise PreconditionError(f"{elem} does not have order 2")
    return fixed_points(circle, elem)


def fixed_point_profile(closure: GroupClosure) -> dict[int, list[int]]:
    """Element order -> sorted distinct fixed-point counts."""
    fixed = np.count_nonzero(closure.perms == np.arange(closure.perms.shape[1])[None, :], axis=1)
    profile = {}
    for order in np.unique(closure.element_orders):
        mask = closure.element_orders == order
        profile[int(order)] = sorted(int(x) for x in np.unique(fixed[mask]))
    return profile


def expected_fixed_points(q: int, order: int) -> int | None:
    """Fixed-point count forced by the element order: 1 -> q+1, 2 -> 1, d | q-1 -> 2, d | q+1 -> 0."""
    if order == 1:
        return q + 1
    if order == 2:
        return 1
    if (q - 1) % order == 0:
        return 2
    if (q + 1) % order == 0:
        return 0
    return None


def is_three_transitive(closure: GroupClosure) -> bool:
    """Images of the ordered triple (0, 1, 2) cover all (q+1) q (q-1) ordered triples."""
    q = closure.q
    triples = closure.perms[:, :3].astype(np.int64)
    keys = (triples[:, 0] * (q + 1) + triples[:, 1]) * (q + 1) + triples[:, 2]
    return np.unique(keys).size == (q + 1) * q * (q - 1)


# ---------------------------------------------------------------------------
# Orbits on k-subsets
# ---------------------------------------------------------------------------

class OrbitEntry(BaseModel):
    rep: list[int]
    length: int
    stabilizer_order: int


class OrbitReport(BaseModel):
    q: int
    k: int
    group_order: int
    num_orbits: int
    orbits: list[OrbitEntry]

    _labels: np.ndarray | None = PrivateAttr(default=None)

    @property
    def labels(self) -> np.ndarray:
        """Colex rank of the orbit representative, per colex rank of subset."""
        return self._labels

    def short_orbits(self) -> list[OrbitEntry]:
        return [o for o in self.orbits if o.stabilizer_order > 1]

    def stabilizer_histogram(self) -> dict[int, int]:
        hist = {}
        for o in self.orbits:
            hist[o.stabilizer_order] = hist.get(o.stabilizer_order, 0) + 1
        return dict(sorted(hist.items()))

    def to_report(self) -> dict:
        return {
            "k": self.k,
            "num_orbits": self.num_orbits,
            "orbits": [o.model_dump() for o in self.orbits],
        }


def _image_ranks(perm: np.ndarray, rows: np.ndarray) -> np.ndarray:
    return colex_rank(np.sort(perm[rows.astype(np.intp)], axis=1))


def _connected_components(n: int, edges: list[tuple[np.ndarray, np.ndarray]]) -> np.ndarray:
    """Union-find by min-label hooking and pointer jumping; every label ends as its component minimum."""
    parent = np.arange(n, dtype=np.int64)
    while True:
        changed = False
        for src, dst in edges:
            ps, pd = parent[src], parent[dst]
            lo, hi = np.minimum(ps, pd), np.maximum(ps, pd)
            mask = lo != hi
            if mask.any():
                changed = True
                np.minimum.at(parent, hi[mask], lo[mask])
        while True:
            jumped = parent[parent]
            if np.array_equal(jumped, parent):
                break
            parent = jumped
        if not changed:
            return parent


@observe_check("orbit-partition")
def orbit_partition(closure: GroupClosure, k: int) -> OrbitReport:
    """
    Orbits of the group on k-subsets of U_{q+1}, via generator images only.

    Raises:
        PreconditionError: k not in (4, 5)
        ConsistencyError: an orbit length does not divide the group order
    """
    if k not in (4, 5):
        raise PreconditionError(f"orbit partition is supported for k = 4, 5, not {k}")
    q = closure.q
    rows = colex_table(q + 1, k)
    ranks = np.arange(rows.shape[0], dtype=np.int64)
    edges = [(ranks, _image_ranks(perm, rows)) for perm in closure.generator_perms]
    labels = _connected_components(rows.shape[0], edges)
    reps, lengths = np.unique(labels, return_counts=True)
    orbits = []
    for rep, length in zip(reps, lengths):
        if closure.order % int(length):
            raise ConsistencyError(f"orbit length {length} does not divide {closure.order}")
        orbits.append(OrbitEntry(
            rep=[int(x) for x in rows[rep]],
            length=int(length),
            stabilizer_order=closure.order // int(length),
        ))
    report = OrbitReport(q=q, k=k, group_order=closure.order, num_orbits=len(orbits), orbits=orbits)
    report._labels = labels
    return report


def short_orbit_blocks(report: OrbitReport) -> np.ndarray:
    """All k-subsets lying in orbits with nontrivial stabilizer."""
    short_reps = [colex_rank(np.array([o.rep]))[0] for o in report.short_orbits()]
    members = np.nonzero(np.isin(report.labels, short_reps))[0]
    return colex_table(report.q + 1, report.k)[members]


def short_orbits_with_symmetric_member(report: OrbitReport) -> bool:
    """Every short orbit holds a subset containing index 0 and closed under i -> -i."""
    q = report.q
    rows = colex_table(q + 1, report.k).astype(np.int64)
    has_one = np.any(rows == 0, axis=1)
    closed = np.all(np.sort((-rows) % (q + 1), axis=1) == rows, axis=1)
    good_labels = set(int(x) for x in np.unique(report.labels[has_one & closed]))
    short_reps = {int(colex_rank(np.array([o.rep]))[0]) for o in report.short_orbits()}
    return short_reps <= good_labels


def alltop_design(closure: GroupClosure, jobs: int | None = None) -> Design:
    """
    Union of the short 5-subset orbits, checked equal to the b-variant of sigma_{5,3}.

    Raises:
        PreconditionError: m even
        ConsistencyError: the two block sets differ (witness attached)
    """
    q = closure.q
    if (q.bit_length() - 1) % 2 == 0:
        raise PreconditionError("the short-orbit design is defined for odd m")
    report = orbit_partition(closure, 5)
    union = BlockSet(q, 5, "short-orbits:5", short_orbit_blocks(report))
    reference = blockset_b_variant(q, 5, 3, jobs)
    witness = union.symmetric_difference_witness(reference)
    if witness is not None:
        raise ConsistencyError("short-orbit union differs from b:5,3", witness=witness)
    return Design.from_blockset(union)


class InvarianceResult(BaseModel):
    invariant: bool
    checked_elements: int
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.invariant


def invariance_check(
    closure: GroupClosure,
    bs: BlockSet,
    sample: int | None = None,
    seed: int = 0,
) -> InvarianceResult:
    """
    Whether every (sampled) group element maps every block into bs.

    Args:
        closure: group
        bs: block set over U_{q+1}
        sample: number of random elements, or None for all of them
        seed: RNG seed for the sample
    """
    if bs.q != closure.q:
        raise PreconditionError(f"block set over q={bs.q}, group over q={closure.q}")
    if sample is None or sample >= closure.order:
        chosen = np.arange(closure.order)
    else:
        chosen = np.sort(np.random.default_rng(seed).choice(closure.order, size=sample, replace=False))
    perms = permutations_of(closure.circle, closure.elements[:, chosen])
    for idx, perm in zip(chosen, perms):
        if not bs.num_blocks:
            break
        inside = np.isin(_image_ranks(perm, bs.blocks), bs.ranks)
        if not inside.all():
            bad = int(np.argmin(inside))
            elem = closure.element(int(idx))
            return InvarianceResult(
                invariant=False,
                checked_elements=int(chosen.size),
                witness={"element": list(elem.entries), "block": [int(x) for x in bs.blocks[bad]]},
            )
    return InvarianceResult(invariant=True, checked_elements=int(chosen.size))


def fixing_involutions(closure: GroupClosure, bs: BlockSet) -> np.ndarray:
    """For each block, whether some order-2 element fixes it setwise."""
    ranks = colex_rank(bs.blocks)
    fixed = np.zeros(bs.num_blocks, dtype=bool)
    for perm in closure.perms[closure.element_orders == 2]:
        fixed |= _image_ranks(perm, bs.blocks) == ranks
    return fixed


def orbit_count_formulas(q: int) -> dict[str, int]:
    """Cited short / trivial-stabilizer 5-subset orbit counts for odd m."""
    return {"short": (q - 2) // 6, "trivial": (q - 2) * (q - 8) // 120}


def group_for_q(q: int) -> GroupClosure:
    return close_group(circle_for_q(q))
