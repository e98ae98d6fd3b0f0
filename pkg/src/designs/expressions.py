"""
Symmetric Expressions
Parser and evaluator for polynomials in the elementary symmetric values of a block
"""
import re
from dataclasses import dataclass

import numpy as np

from src.algebra.finite_field import FieldCtx
from src.utils.errors import UnsupportedFamilyError

TOKEN_RE = re.compile(r"\s*(?:(s(\d+)_(\d+))|(alpha)|(\d+)|(\^)|(\+)|(\*)|(\()|(\)))")


@dataclass(frozen=True)
class SymmetricExpr:
    """
    Polynomial over GF(q^2) in sigma_{k,0..k}.

    Each term is (exponents, alpha_powers): sigma_{k,i} is raised to exponents[i]
    and the product is scaled by alpha^j for every j in alpha_powers.
    """

    k: int | None
    text: str
    terms: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]

    def degree_needed(self) -> int:
        """Largest sigma index that appears."""
        top = 0
        for exps, _ in self.terms:
            for i, e in enumerate(exps):
                if e:
                    top = max(top, i)
        return top

    def evaluate(self, ctx: FieldCtx, sigmas: np.ndarray) -> np.ndarray:
        """
        Evaluate row-wise.

        Args:
            ctx: field context
            sigmas: (N, >=degree_needed+1) array of sigma values

        Returns:
            int64 array of length N
        """
        out = np.zeros(sigmas.shape[0], dtype=np.int64)
        for exps, alpha_powers in self.terms:
            value = np.ones(sigmas.shape[0], dtype=np.int64)
            for i, e in enumerate(exps):
                if e:
                    value = ctx.mul_arr(value, ctx.pow_arr(sigmas[:, i], e))
            for j in alpha_powers:
                value = ctx.mul_arr(value, ctx.power(ctx.alpha, j))
            out ^= value
        return out


def _tokenize(text: str) -> list[tuple[str, object]]:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        match = TOKEN_RE.match(text, pos)
        if not match or match.end() == pos:
            raise UnsupportedFamilyError(f"❌ cannot parse expression near {text[pos:]!r}")
        sym, kk, ii, alpha, num, caret, plus, star, lpar, rpar = match.groups()
        if sym:
            tokens.append(("sigma", (int(kk), int(ii))))
        elif alpha:
            tokens.append(("alpha", None))
        elif num:
            tokens.append(("int", int(num)))
        else:
            tokens.append((caret or plus or star or lpar or rpar, None))
        pos = match.end()
    return tokens


class _Poly:
    """Sparse polynomial: monomial (sigma exponents, alpha exponent) -> coefficient in GF(2)."""

    def __init__(self, terms=None):
        self.terms = {key: 1 for key, c in (terms or {}).items() if c % 2}

    @staticmethod
    def monomial(sigmas=(), alpha=0):
        return _Poly({(tuple(sorted(sigmas)), alpha): 1})

    def __add__(self, other):
        merged = dict(self.terms)
        for key in other.terms:
            merged[key] = merged.get(key, 0) + 1
        return _Poly(merged)

    def __mul__(self, other):
        result = {}
        for (s1, a1) in self.terms:
            for (s2, a2) in other.terms:
                key = (tuple(sorted(s1 + s2)), a1 + a2)
                result[key] = result.get(key, 0) + 1
        return _Poly(result)

    def __pow__(self, e: int):
        result = _Poly.monomial()
        for _ in range(e):
            result = result * self
        return result


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0
        self.ks = set()

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def take(self, kind=None):
        if self.pos >= len(self.tokens):
            raise UnsupportedFamilyError("❌ unexpected end of expression")
        token = self.tokens[self.pos]
        if kind and token[0] != kind:
            raise UnsupportedFamilyError(f"❌ expected {kind!r}, found {token[0]!r}")
        self.pos += 1
        return token

    def expr(self):
        value = self.term()
        while self.peek() == "+":
            self.take("+")
            value = value + self.term()
        return value

    def term(self):
        value = self.factor()
        while self.peek() == "*":
            self.take("*")
            value = value * self.factor()
        return value

    def factor(self):
        base = self.atom()
        if self.peek() == "^":
            self.take("^")
            _, e = self.take("int")
            base = base ** e
        return base

    def atom(self):
        kind, payload = self.take()
        if kind == "sigma":
            k, i = payload
            if i > k:
                raise UnsupportedFamilyError(f"❌ s{k}_{i} has index above block size")
            self.ks.add(k)
            return _Poly.monomial(sigmas=(i,) if i else ())
        if kind == "alpha":
            return _Poly.monomial(alpha=1)
        if kind == "int":
            return _Poly({((), 0): payload})
        if kind == "(":
            value = self.expr()
            self.take(")")
            return value
        raise UnsupportedFamilyError(f"❌ unexpected token {kind!r}")


def parse_expression(text: str, k: int | None = None) -> SymmetricExpr:
    """
    Parse an expression such as "s4_2^2 + s4_1*s4_3".

    Tokens: s<k>_<i> for sigma_{k,i}, alpha, non-negative integers (reduced mod 2),
    +, *, ^ with integer exponent, and parentheses.

    Args:
        text: expression source
        k: block size when no sigma token fixes it

    Returns:
        SymmetricExpr in expanded form
    """
    parser = _Parser(_tokenize(text))
    poly = parser.expr()
    if parser.pos != len(parser.tokens):
        raise UnsupportedFamilyError(f"❌ trailing input in expression {text!r}")
    ks = set(parser.ks) | ({k} if k is not None else set())
    if len(ks) > 1:
        raise UnsupportedFamilyError(f"❌ expression mixes block sizes {sorted(ks)}")
    block_k = ks.pop() if ks else None

    width = (block_k or 0) + 1
    terms = []
    for (sig, alpha_exp) in sorted(poly.terms):
        exps = [0] * width
        for i in sig:
            exps[i] += 1
        terms.append((tuple(exps), (alpha_exp,) if alpha_exp else ()))
    return SymmetricExpr(k=block_k, text=text.strip(), terms=tuple(terms))
