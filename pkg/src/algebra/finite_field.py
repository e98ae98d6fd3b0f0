"""
GF(2^2m) Arithmetic
Log/antilog table field with its Frobenius-fixed subfield GF(2^m) and the unit circle
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache

import galois
import numpy as np

from src.utils.errors import FieldConstructionError, FieldDivisionError, PreconditionError

logger = logging.getLogger(__name__)

# Keyed by m; degree-2m primitive polynomials over GF(2) as bitmasks.
PRIMITIVE_POLYS = {
    4: 0x11D,   # x^8 + x^4 + x^3 + x^2 + 1
    5: 0x409,   # x^10 + x^3 + 1
    6: 0x1053,  # x^12 + x^6 + x^4 + x + 1
    7: 0x4443,  # x^14 + x^10 + x^6 + x + 1
}

SUPPORTED_M = range(4, 8)


def poly_to_str(mask: int) -> str:
    """Render a GF(2) polynomial bitmask, e.g. 0x11D -> 'x^8 + x^4 + x^3 + x^2 + 1'."""
    terms = []
    for e in range(mask.bit_length() - 1, -1, -1):
        if mask >> e & 1:
            terms.append("1" if e == 0 else "x" if e == 1 else f"x^{e}")
    return " + ".join(terms) or "0"


@dataclass(frozen=True, eq=False)
class FieldCtx:
    """GF(q^2), q = 2^m, with elements encoded as int bitmasks in the polynomial basis."""

    m: int
    reduction_poly: int
    exp: np.ndarray = field(repr=False)
    log: np.ndarray = field(repr=False)

    @property
    def q(self) -> int:
        return 1 << self.m

    @property
    def order(self) -> int:
        return 1 << (2 * self.m)

    @property
    def group_order(self) -> int:
        return self.order - 1

    @property
    def alpha(self) -> int:
        return 0b10

    # scalar arithmetic

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[self.log[a] + self.log[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldDivisionError("inverse of zero in GF(2^%d)" % (2 * self.m))
        return int(self.exp[(self.group_order - self.log[a]) % self.group_order])

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise FieldDivisionError("division by zero in GF(2^%d)" % (2 * self.m))
        if a == 0:
            return 0
        return int(self.exp[(self.log[a] - self.log[b]) % self.group_order])

    def power(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise FieldDivisionError("negative power of zero")
            return 1 if k == 0 else 0
        return int(self.exp[(int(self.log[a]) * k) % self.group_order])

    def arith(self, a: int, b: int, op: str) -> int:
        """
        Dispatch a binary operation.

        Args:
            a: left operand
            b: right operand (an integer exponent for pow_k)
            op: one of add, mul, div, pow_k
        """
        if op == "add":
            return self.add(a, b)
        if op == "mul":
            return self.mul(a, b)
        if op == "div":
            return self.div(a, b)
        if op == "pow_k":
            return self.power(a, b)
        raise PreconditionError(f"unknown field operation {op!r}")

    def frobenius(self, x: int) -> int:
        return self.power(x, self.q)

    def trace(self, x: int) -> int:
        """Tr_{q^2/q}(x) = x + x^q."""
        return x ^ self.frobenius(x)

    def sqrt(self, x: int) -> int:
        return self.power(x, self.order // 2)

    def in_subfield(self, x: int) -> bool:
        return self.frobenius(x) == x

    def discrete_log(self, x: int) -> int:
        if x == 0:
            raise FieldDivisionError("discrete log of zero")
        return int(self.log[x])

    # vectorized arithmetic on int64 arrays

    def mul_arr(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self.exp[self.log[a] + self.log[b]].astype(np.int64)
        return np.where((a == 0) | (b == 0), 0, out)

    def mul_log(self, a, log_b) -> np.ndarray:
        """Multiply elements a by the elements whose discrete logs are log_b."""
        a = np.asarray(a, dtype=np.int64)
        out = self.exp[self.log[a] + np.asarray(log_b)].astype(np.int64)
        return np.where(a == 0, 0, out)

    def pow_arr(self, a, k: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        out = self.exp[(self.log[a].astype(np.int64) * k) % self.group_order].astype(np.int64)
        if k == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, out)

    def inv_arr(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise FieldDivisionError("inverse of zero in vectorized call")
        return self.exp[(self.group_order - self.log[a]) % self.group_order].astype(np.int64)

    def trace_arr(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        return a ^ self.pow_arr(a, self.q)

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class UnitCircle:
    """U_{q+1}: position i holds beta^i with beta = alpha^(q-1)."""

    ctx: FieldCtx
    beta: int
    elements: np.ndarray = field(repr=False)
    index_of: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.elements.size

    @property
    def logs(self) -> np.ndarray:
        """Discrete logs base alpha of the listed elements."""
        return (np.arange(self.size, dtype=np.int64) * (self.ctx.q - 1)) % self.ctx.group_order

    def element(self, i: int) -> int:
        return int(self.elements[i % self.size])

    def index(self, u: int) -> int:
        i = int(self.index_of[u]) if 0 <= u < self.index_of.size else -1
        if i < 0:
            raise PreconditionError(f"{u} is not on the unit circle", witness=u)
        return i

    def contains(self, u: int) -> bool:
        return 0 <= u < self.index_of.size and self.index_of[u] >= 0

    def values(self, indices) -> np.ndarray:
        return self.elements[np.asarray(indices, dtype=np.intp)]


def _check_polynomial(m: int, reduction_poly: int) -> None:
    degree = reduction_poly.bit_length() - 1
    if degree != 2 * m:
        raise FieldConstructionError(
            f"❌ reduction polynomial {poly_to_str(reduction_poly)} has degree {degree}, expected {2 * m}"
        )
    poly = galois.Poly.Int(reduction_poly)
    if not poly.is_irreducible():
        raise FieldConstructionError(f"❌ {poly_to_str(reduction_poly)} is not irreducible over GF(2)")
    if not poly.is_primitive():
        raise FieldConstructionError(f"❌ {poly_to_str(reduction_poly)} is not primitive over GF(2)")


def build_field(m: int, reduction_poly: int | None = None) -> FieldCtx:
    """
    Construct GF(2^(2m)) from a primitive reduction polynomial.

    Args:
        m: subfield exponent, 4 <= m <= 7
        reduction_poly: optional override bitmask; defaults to the fixed table

    Returns:
        FieldCtx with alpha = class of x

    Raises:
        FieldConstructionError: m out of range or polynomial not irreducible/primitive
    """
    if m not in SUPPORTED_M:
        raise FieldConstructionError(f"❌ m={m} outside supported range 4..7")
    poly = PRIMITIVE_POLYS[m] if reduction_poly is None else reduction_poly
    _check_polynomial(m, poly)

    size = 1 << (2 * m)
    n = size - 1
    exp = np.zeros(2 * n, dtype=np.int32)
    log = np.zeros(size, dtype=np.int32)
    x = 1
    for e in range(n):
        if e and x == 1:
            raise FieldConstructionError(f"❌ x has order {e} modulo {poly_to_str(poly)}")
        exp[e] = x
        log[x] = e
        x <<= 1
        if x & size:
            x ^= poly
    exp[n:] = exp[:n]
    logger.debug("built GF(2^%d) with %s", 2 * m, poly_to_str(poly))
    return FieldCtx(m=m, reduction_poly=poly, exp=exp, log=log)


def build_unit_circle(ctx: FieldCtx) -> UnitCircle:
    """
    List the (q+1)-th roots of unity in discrete-log order base beta.

    Args:
        ctx: field context

    Returns:
        UnitCircle with elements [beta^0, ..., beta^q]
    """
    q = ctx.q
    beta = ctx.power(ctx.alpha, q - 1)
    logs = (np.arange(q + 1, dtype=np.int64) * (q - 1)) % ctx.group_order
    elements = ctx.exp[logs].astype(np.int64)
    index_of = np.full(ctx.order, -1, dtype=np.int32)
    index_of[elements] = np.arange(q + 1, dtype=np.int32)
    return UnitCircle(ctx=ctx, beta=beta, elements=elements, index_of=index_of)


@lru_cache(maxsize=None)
def field_for_q(q: int) -> FieldCtx:
    """Cached field for subfield size q (a power of two, 16..128)."""
    m = q.bit_length() - 1
    if q != 1 << m:
        raise FieldConstructionError(f"❌ q={q} is not a power of two")
    return build_field(m)


@lru_cache(maxsize=None)
def circle_for_q(q: int) -> UnitCircle:
    return build_unit_circle(field_for_q(q))
