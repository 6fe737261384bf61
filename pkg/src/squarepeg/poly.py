"""Sparse multivariate polynomials with exact rational or complex coefficients.

A :class:`MultiPoly` maps exponent tuples to coefficients.  Coefficients are
``int``/``Fraction`` in exact mode and ``complex`` in numeric mode; the mode is
implied by the coefficients that are stored.  Terms are kept in graded
lexicographic order (highest first) so iteration and printing are
deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Number
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]

DEFAULT_NAMES = {
    2: ("x", "y"),
    4: ("a", "b", "c", "d"),
}


class CurveFormatError(ValueError):
    """Raised when a curve file cannot be parsed."""


def _grlex_key(e: Exponent):
    return (sum(e), e)


def _normalize(c):
    # keep exact values as small as possible: Fraction(3, 1) -> 3
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    return c


class MultiPoly:
    """Immutable sparse polynomial in ``nvars`` variables."""

    __slots__ = ("nvars", "_terms")

    def __init__(self, terms: Mapping[Exponent, Number] | Iterable[tuple[Exponent, Number]],
                 nvars: int):
        if nvars < 1:
            raise ValueError("nvars must be positive")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exponent, Number] = {}
        for exp, coeff in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars:
                raise ValueError(f"exponent {exp} does not have length {nvars}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            acc[exp] = acc.get(exp, 0) + coeff
        ordered = sorted((e for e, c in acc.items() if c != 0), key=_grlex_key, reverse=True)
        self.nvars = nvars
        self._terms = {e: _normalize(acc[e]) for e in ordered}

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> MultiPoly:
        return cls({}, nvars)

    @classmethod
    def constant(cls, c, nvars: int) -> MultiPoly:
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def variable(cls, i: int, nvars: int) -> MultiPoly:
        exp = [0] * nvars
        exp[i] = 1
        return cls({tuple(exp): 1}, nvars)

    @classmethod
    def linear(cls, coeffs: Sequence, constant=0) -> MultiPoly:
        """``sum(coeffs[i] * x_i) + constant``."""
        n = len(coeffs)
        terms = {(0,) * n: constant}
        for i, c in enumerate(coeffs):
            exp = [0] * n
            exp[i] = 1
            terms[tuple(exp)] = c
        return cls(terms, n)

    # -- inspection -----------------------------------------------------
    @property
    def terms(self) -> dict[Exponent, Number]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def support(self) -> set[Exponent]:
        return set(self._terms)

    def coefficient(self, exp: Exponent):
        return self._terms.get(tuple(exp), 0)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, (int, Fraction)) for c in self._terms.values())

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    # -- arithmetic -----------------------------------------------------
    def _check(self, other: MultiPoly):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        if other.nvars != self.nvars:
            raise ValueError(f"nvars mismatch: {self.nvars} vs {other.nvars}")
        return None

    def _lift(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, Number):
            return MultiPoly.constant(other, self.nvars)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        acc = dict(self._terms)
        for e, c in other._terms.items():
            acc[e] = acc.get(e, 0) + c
        return MultiPoly(acc, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({e: -c for e, c in self._terms.items()}, self.nvars)

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, Number):
            return self.scale(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        acc: dict[Exponent, Number] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, 0) + c1 * c2
        return MultiPoly(acc, self.nvars)

    def __rmul__(self, other):
        if isinstance(other, Number):
            return self.scale(other)
        return NotImplemented

    def scale(self, s) -> MultiPoly:
        return MultiPoly({e: c * s for e, c in self._terms.items()}, self.nvars)

    def __truediv__(self, s):
        if not isinstance(s, Number):
            return NotImplemented
        if isinstance(s, int):
            s = Fraction(s)
        return MultiPoly({e: c / s for e, c in self._terms.items()}, self.nvars)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = MultiPoly.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Number):
            other = MultiPoly.constant(other, self.nvars)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        return hash((self.nvars, tuple(self._terms.items())))

    # -- structure ------------------------------------------------------
    def homogeneous_part(self, k: int) -> MultiPoly:
        if k < 0:
            raise ValueError("degree must be nonnegative")
        return MultiPoly({e: c for e, c in self._terms.items() if sum(e) == k}, self.nvars)

    def homogeneous_parts(self) -> dict[int, MultiPoly]:
        return {k: self.homogeneous_part(k) for k in sorted({sum(e) for e in self._terms})}

    def derivative(self, i: int) -> MultiPoly:
        acc = {}
        for e, c in self._terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                acc[tuple(d)] = c * e[i]
        return MultiPoly(acc, self.nvars)

    def substitute(self, exprs: Sequence[MultiPoly]) -> MultiPoly:
        """Compose: replace variable ``i`` with ``exprs[i]``.

        All ``exprs`` must share one ring, which becomes the ring of the result.
        """
        if len(exprs) != self.nvars:
            raise ValueError(f"expected {self.nvars} expressions, got {len(exprs)}")
        n_out = exprs[0].nvars
        if any(x.nvars != n_out for x in exprs):
            raise ValueError("substituted expressions live in different rings")
        powers: list[list[MultiPoly]] = []
        for i, x in enumerate(exprs):
            top = max((e[i] for e in self._terms), default=0)
            pw = [MultiPoly.constant(1, n_out)]
            for _ in range(top):
                pw.append(pw[-1] * x)
            powers.append(pw)
        acc: dict[Exponent, Number] = {}
        for e, c in self._terms.items():
            term = MultiPoly.constant(c, n_out)
            for i, k in enumerate(e):
                if k:
                    term = term * powers[i][k]
            for te, tc in term._terms.items():
                acc[te] = acc.get(te, 0) + tc
        return MultiPoly(acc, n_out)

    def evaluate(self, point: Sequence):
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.nvars}")
        total = 0
        for e, c in self._terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = v * x ** k
            total = total + v
        return total

    __call__ = evaluate

    def to_numeric(self) -> MultiPoly:
        return MultiPoly({e: complex(c) for e, c in self._terms.items()}, self.nvars)

    def coefficient_norm(self) -> float:
        """Sum of absolute values of the coefficients."""
        return float(sum(abs(complex(c)) for c in self._terms.values()))

    # -- printing -------------------------------------------------------
    def format(self, names: Sequence[str] | None = None) -> str:
        names = names or DEFAULT_NAMES.get(self.nvars) or tuple(f"x{i + 1}" for i in range(self.nvars))
        if not self._terms:
            return "0"
        pieces = []
        for e, c in self._terms.items():
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            if isinstance(c, complex):
                cs = f"({c.real:.12g}{c.imag:+.12g}j)"
                neg = False
            else:
                neg = c < 0
                cs = str(abs(c))
                if "/" in cs:
                    cs = f"({cs})"
            if mono:
                body = mono if cs == "1" else f"{cs}*{mono}"
            else:
                body = cs
            if not pieces:
                pieces.append(f"-{body}" if neg else body)
            else:
                pieces.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(pieces)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"MultiPoly({self.format()!r}, nvars={self.nvars})"


@dataclass(frozen=True)
class CurveF:
    """A plane curve ``f(x, y) = 0``."""

    poly: MultiPoly

    def __post_init__(self):
        if self.poly.nvars != 2:
            raise ValueError("a plane curve needs a polynomial in two variables")
        if self.poly.is_zero():
            raise ValueError("the zero polynomial does not define a curve")

    @property
    def degree(self) -> int:
        return self.poly.degree

    @classmethod
    def from_coefficients(cls, coeffs: Mapping[tuple[int, int], Number]) -> CurveF:
        """Build ``sum C[i, j] x^i y^j`` from a ``{(i, j): C}`` table."""
        return cls(MultiPoly(coeffs, 2))

    def coefficient_table(self) -> dict[tuple[int, int], Number]:
        return self.poly.terms

    def __str__(self):
        return self.poly.format()


def _parse_coefficient(tok: str) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError) as exc:
        raise CurveFormatError(f"bad coefficient {tok!r}") from exc


def parse_curve(text: str) -> CurveF:
    """Parse ``<i> <j> <coeff>`` lines into a curve.

    Blank lines and lines starting with ``#`` are ignored.  Repeated exponents
    are summed.  Coefficients may be integers, decimals or ``p/q``.
    """
    terms: dict[tuple[int, int], Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if len(toks) != 3:
            raise CurveFormatError(f"line {lineno}: expected 3 fields, got {len(toks)}")
        try:
            i, j = int(toks[0]), int(toks[1])
        except ValueError as exc:
            raise CurveFormatError(f"line {lineno}: exponents must be integers") from exc
        if i < 0 or j < 0:
            raise CurveFormatError(f"line {lineno}: negative exponent")
        terms[(i, j)] = terms.get((i, j), 0) + _parse_coefficient(toks[2])
    poly = MultiPoly(terms, 2)
    if poly.is_zero():
        raise CurveFormatError("curve polynomial is zero")
    return CurveF(poly)


def format_curve(f: CurveF) -> str:
    lines = []
    for (i, j), c in f.poly.items():
        lines.append(f"{i} {j} {Fraction(c)}")
    return "\n".join(lines) + "\n"
