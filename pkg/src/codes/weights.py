"""
Weight Distributions
Closed-form weight tables for near-MDS style codes and the MacWilliams transform
"""
from math import comb

from pydantic import BaseModel, model_validator

from src.utils.errors import ConsistencyError, PreconditionError


class WeightTable(BaseModel):
    """A_0..A_n as exact integers."""

    entries: list[int]

    @model_validator(mode="after")
    def _non_negative(self):
        for i, a in enumerate(self.entries):
            if a < 0:
                raise ValueError(f"A_{i} = {a} is negative")
        return self

    @property
    def n(self) -> int:
        return len(self.entries) - 1

    @property
    def mass(self) -> int:
        return sum(self.entries)

    def __getitem__(self, i: int) -> int:
        return self.entries[i]

    def minimum_distance(self) -> int | None:
        for i, a in enumerate(self.entries[1:], start=1):
            if a:
                return i
        return None

    def to_json_list(self) -> list[str]:
        """Decimal strings, safe for any magnitude."""
        return [str(a) for a in self.entries]


def _table(entries: list[int], label: str) -> WeightTable:
    for i, a in enumerate(entries):
        if a < 0:
            raise ConsistencyError(f"{label}: A_{i} = {a} is negative", witness=(i, a))
    return WeightTable(entries=entries)


def nmds_weights(n: int, k: int, q: int, a_n_minus_k: int) -> WeightTable:
    """
    Weight distribution of an [n, k, n-k] NMDS code over GF(q).

    A_{n-k+s} = C(n, k-s) sum_{j<s} (-1)^j C(n-k+s, j)(q^(s-j) - 1) + (-1)^s C(k, s) A_{n-k}

    Args:
        n: length
        k: dimension
        q: alphabet size
        a_n_minus_k: number of minimum weight codewords
    """
    entries = [0] * (n + 1)
    entries[0] = 1
    entries[n - k] = a_n_minus_k
    for s in range(1, k + 1):
        total = sum((-1) ** j * comb(n - k + s, j) * (q ** (s - j) - 1) for j in range(s))
        entries[n - k + s] = comb(n, k - s) * total + (-1) ** s * comb(k, s) * a_n_minus_k
    table = _table(entries, "NMDS formula")
    if table.mass != q ** k:
        raise ConsistencyError(f"NMDS table mass {table.mass} != q^k = {q ** k}")
    return table


def defect_weights(n: int, k: int, q: int, d: int, d_perp: int, known: dict[int, int]) -> WeightTable:
    """
    Weight distribution of an [n, k, d] code whose dual has minimum distance d_perp.

    Needs A_d .. A_{n-d_perp}; the remaining weights follow for r = 1..d_perp from
    A_{n-d_perp+r} = sum_{j=d_perp}^{n-d} C(j, d_perp-r) (sum_{i=d_perp}^{j} (-1)^(i-d_perp+r) C(j-d_perp+r, j-i)) A_{n-j}
                    + C(n, d_perp-r) sum_{i<r} (-1)^i C(n-d_perp+r, i)(q^(k-d_perp+r-i) - 1)

    Args:
        n, k, q: code parameters
        d: minimum distance
        d_perp: dual minimum distance
        known: {weight: A_weight} covering d..n-d_perp

    Raises:
        PreconditionError: a required low weight is missing
        ConsistencyError: a derived coefficient is negative or the mass is wrong
    """
    entries = [0] * (n + 1)
    entries[0] = 1
    for w in range(d, n - d_perp + 1):
        if w not in known:
            raise PreconditionError(f"A_{w} is required (weights {d}..{n - d_perp})")
        entries[w] = known[w]
    for r in range(1, d_perp + 1):
        total = 0
        for j in range(d_perp, n - d + 1):
            inner = sum(
                (-1) ** (i - d_perp + r) * comb(j - d_perp + r, j - i) for i in range(d_perp, j + 1)
            )
            total += comb(j, d_perp - r) * inner * entries[n - j]
        total += comb(n, d_perp - r) * sum(
            (-1) ** i * comb(n - d_perp + r, i) * (q ** (k - d_perp + r - i) - 1) for i in range(r)
        )
        entries[n - d_perp + r] = total
    table = _table(entries, "defect formula")
    if table.mass != q ** k:
        raise ConsistencyError(f"defect-formula table mass {table.mass} != q^k = {q ** k}")
    return table


def krawtchouk(j: int, i: int, n: int, q: int) -> int:
    return sum((-1) ** s * (q - 1) ** (j - s) * comb(i, s) * comb(n - i, j - s) for s in range(j + 1))


def macwilliams(wt: WeightTable, n: int, dim: int, q: int) -> WeightTable:
    """
    Weight distribution of the dual code.

    Raises:
        PreconditionError: sum of A_i differs from q^dim
        ConsistencyError: a dual coefficient is not an integer
    """
    if wt.n != n:
        raise PreconditionError(f"table length {wt.n} does not match n={n}")
    size = q ** dim
    if wt.mass != size:
        raise PreconditionError(f"mass {wt.mass} != q^dim = {size}")
    dual = []
    for j in range(n + 1):
        total = sum(a * krawtchouk(j, i, n, q) for i, a in enumerate(wt.entries) if a)
        if total % size:
            raise ConsistencyError(f"dual coefficient B_{j} = {total}/{size} is not an integer")
        dual.append(total // size)
    return _table(dual, "MacWilliams transform")
