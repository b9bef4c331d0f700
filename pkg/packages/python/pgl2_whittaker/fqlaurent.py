"""Exact arithmetic in F_p((t)) and F_p[[t]] with per-element absolute precision.

A nonzero :class:`Series` is ``t^val * (c_0 + c_1 t + ... + c_{m-1} t^{m-1})`` with ``c_0 != 0``,
known modulo ``t^abs_prec``. Coefficients between ``val + m`` and ``abs_prec`` are zero.
``abs_prec`` is ``math.inf`` for elements known exactly (finite Laurent polynomials); such
elements acquire a finite precision through parsing and inversion, which both work to the
relative precision of the active :func:`relative_precision` context.

Example:
    >>> x = parse_series("t^-1+2*t", 3)
    >>> x.val, x.coeffs
    (-1, (1, 0, 2))
"""

from __future__ import annotations

import math
import re
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING

from sympy import isprime

from pgl2_whittaker.exceptions import (
    InvertibilityError,
    ModulusMismatchError,
    NotPrimeError,
    PrecisionError,
    SeriesSyntaxError,
)

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator, Mapping

INF = math.inf
MAX_PRIME = 13
DEFAULT_RELATIVE_PRECISION = 8

_relative_precision: ContextVar[int] = ContextVar("relative_precision", default=DEFAULT_RELATIVE_PRECISION)

_TERM = re.compile(r"^(?:(?P<coeff>-?\d+)(?P<star>\*t(?:\^(?P<exp1>-?\d+))?)?|t(?:\^(?P<exp2>-?\d+))?)$")


@lru_cache(maxsize=None)
def check_prime(p: int) -> int:
    """Return ``p`` if it is a supported prime modulus, raise otherwise."""
    if not (2 <= p <= MAX_PRIME and isprime(p)):
        raise NotPrimeError(p)
    return p


def get_relative_precision() -> int:
    return _relative_precision.get()


@contextmanager
def relative_precision(n_rel: int) -> Iterator[int]:
    """Set the session relative precision used by parsing and inversion."""
    token = _relative_precision.set(n_rel)
    try:
        yield n_rel
    finally:
        _relative_precision.reset(token)


@dataclass(frozen=True)
class PrimeField:
    """An element of F_p."""

    p: int
    """Prime modulus."""

    value: int
    """Residue, reduced into [0, p)."""

    def __post_init__(self) -> None:
        check_prime(self.p)
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other: PrimeField | int) -> int:
        if isinstance(other, int):
            return other
        if other.p != self.p:
            raise ModulusMismatchError(self.p, other.p)
        return other.value

    def __add__(self, other: PrimeField | int) -> PrimeField:
        return PrimeField(self.p, self.value + self._coerce(other))

    def __sub__(self, other: PrimeField | int) -> PrimeField:
        return PrimeField(self.p, self.value - self._coerce(other))

    def __mul__(self, other: PrimeField | int) -> PrimeField:
        return PrimeField(self.p, self.value * self._coerce(other))

    def __truediv__(self, other: PrimeField | int) -> PrimeField:
        divisor = PrimeField(self.p, self._coerce(other))
        return self * divisor.inverse()

    def __neg__(self) -> PrimeField:
        return PrimeField(self.p, -self.value)

    def __int__(self) -> int:
        return self.value

    def is_zero(self) -> bool:
        return self.value == 0

    def inverse(self) -> PrimeField:
        if self.value == 0:
            raise InvertibilityError(f"0 in F_{self.p}")
        return PrimeField(self.p, pow(self.value, -1, self.p))


class Series:
    """Element of F_p((t)) known modulo ``t^abs_prec``.

    Instances are immutable. Equality compares coefficients up to the smaller of the two
    precisions, the usual convention for inexact local-field elements.
    """

    __slots__ = ("_abs_prec", "_coeffs", "_p", "_val")

    def __init__(self, p: int, val: int, coeffs: tuple[int, ...], abs_prec: float) -> None:
        self._p = p
        self._val = val
        self._coeffs = coeffs
        self._abs_prec = abs_prec

    @classmethod
    def from_coeffs(cls, p: int, val: int, coeffs: Iterable[int], abs_prec: float = INF) -> Series:
        """Normalize ``t^val * sum(c_i t^i)`` known modulo ``t^abs_prec``."""
        values = [c % p for c in coeffs]
        start = 0
        while start < len(values) and values[start] == 0:
            start += 1
        val += start
        values = values[start:]
        if abs_prec != INF:
            keep = max(0, int(abs_prec) - val)
            values = values[:keep]
        while values and values[-1] == 0:
            values.pop()
        if not values:
            return cls(p, 0, (), abs_prec)
        return cls(p, val, tuple(values), abs_prec)

    @classmethod
    def from_terms(cls, p: int, terms: Mapping[int, int], abs_prec: float = INF) -> Series:
        """Build from an ``{exponent: coefficient}`` mapping."""
        nonzero = {e: c % p for e, c in terms.items() if c % p}
        if not nonzero:
            return cls(p, 0, (), abs_prec)
        low = min(nonzero)
        high = max(nonzero)
        return cls.from_coeffs(p, low, [nonzero.get(e, 0) for e in range(low, high + 1)], abs_prec)

    @classmethod
    def zero(cls, p: int, abs_prec: float = INF) -> Series:
        return cls(p, 0, (), abs_prec)

    @classmethod
    def one(cls, p: int) -> Series:
        return cls(p, 0, (1,), INF)

    @classmethod
    def monomial(cls, p: int, coeff: int, exp: int) -> Series:
        return cls.from_coeffs(p, exp, [coeff])

    @property
    def p(self) -> int:
        return self._p

    @property
    def val(self) -> int:
        if not self._coeffs:
            if self._abs_prec == INF:
                raise ValueError("the exact zero has infinite valuation; use series_val")
            raise PrecisionError("valuation of an element that is zero at current precision", self._abs_prec)
        return self._val

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self._coeffs

    @property
    def abs_prec(self) -> float:
        return self._abs_prec

    @property
    def rel_prec(self) -> float:
        if not self._coeffs:
            return 0
        return self._abs_prec - self._val

    @property
    def lead(self) -> int:
        """Leading coefficient ``c_0`` of a nonzero element."""
        if not self._coeffs:
            raise PrecisionError("leading coefficient of zero", self._abs_prec)
        return self._coeffs[0]

    @property
    def kind(self) -> str:
        if self._coeffs:
            return "nonzero"
        return "exact-zero" if self._abs_prec == INF else "zero-mod"

    def is_exact(self) -> bool:
        return self._abs_prec == INF

    def is_exact_zero(self) -> bool:
        return not self._coeffs and self._abs_prec == INF

    def is_zero(self) -> bool:
        """True for the exact zero and for elements that vanish at their precision."""
        return not self._coeffs

    def is_monomial(self) -> bool:
        return len(self._coeffs) == 1 and self._abs_prec == INF

    def coefficient(self, i: int) -> int:
        if i >= self._abs_prec:
            raise PrecisionError(f"coefficient of t^{i}", self._abs_prec)
        if not self._coeffs or i < self._val:
            return 0
        offset = i - self._val
        return self._coeffs[offset] if offset < len(self._coeffs) else 0

    def in_ring_of_integers(self) -> bool:
        """Whether the element lies in F_p[[t]]; zero-at-precision elements need abs_prec >= 0."""
        if not self._coeffs:
            if self._abs_prec < 0:
                raise PrecisionError("membership in O", self._abs_prec)
            return True
        return self._val >= 0

    def truncate(self, abs_prec: float) -> Series:
        """Forget everything from ``t^abs_prec`` on."""
        if abs_prec >= self._abs_prec:
            return self
        return Series.from_coeffs(self._p, self._val, self._coeffs, abs_prec)

    def shift(self, m: int) -> Series:
        """Multiply by ``t^m``."""
        return Series(self._p, self._val + m if self._coeffs else 0, self._coeffs, self._abs_prec + m)

    def scale(self, c: int) -> Series:
        """Multiply by the constant ``c`` of F_p."""
        c %= self._p
        if c == 0:
            return Series.zero(self._p)
        return Series(self._p, self._val, tuple(x * c % self._p for x in self._coeffs), self._abs_prec)

    def low(self, n: int) -> Series:
        """The exact polynomial ``sum_{i<n} x_i t^i``."""
        if n > self._abs_prec:
            raise PrecisionError(f"coefficients below t^{n}", self._abs_prec)
        if not self._coeffs or n <= self._val:
            return Series.zero(self._p)
        return Series.from_coeffs(self._p, self._val, self._coeffs[: n - self._val])

    def high(self, n: int) -> Series:
        """``sum_{i>=n} x_i t^i`` with the precision of ``self``."""
        if not self._coeffs or n <= self._val:
            return self
        return Series.from_coeffs(self._p, n, self._coeffs[n - self._val :], self._abs_prec)

    def terms(self) -> Iterator[tuple[int, int]]:
        """Nonzero ``(exponent, coefficient)`` pairs in increasing order."""
        for offset, c in enumerate(self._coeffs):
            if c:
                yield self._val + offset, c

    def __add__(self, other: Series) -> Series:
        return series_add(self, other)

    def __sub__(self, other: Series) -> Series:
        return series_add(self, series_neg(other))

    def __mul__(self, other: Series) -> Series:
        return series_mul(self, other)

    def __truediv__(self, other: Series) -> Series:
        return series_mul(self, series_inv(other))

    def __neg__(self) -> Series:
        return series_neg(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        if other.p != self._p:
            return False
        window = min(self._abs_prec, other.abs_prec)
        if window == INF:
            return self._coeffs == other.coeffs and (not self._coeffs or self._val == other.val)
        starts = [s._val for s in (self, other) if s._coeffs]
        if not starts:
            return True
        return all(self.coefficient(i) == other.coefficient(i) for i in range(min(starts), int(window)))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Series({render_series(self)!r}, p={self._p})"

    def __str__(self) -> str:
        return render_series(self)


def _check_modulus(x: Series, y: Series) -> int:
    if x.p != y.p:
        raise ModulusMismatchError(x.p, y.p)
    return x.p


def series_neg(x: Series) -> Series:
    return x.scale(-1) if x.coeffs else x


def series_add(x: Series, y: Series) -> Series:
    """Sum modulo ``t^min(x.abs_prec, y.abs_prec)``; leading cancellation raises the valuation."""
    p = _check_modulus(x, y)
    prec = min(x.abs_prec, y.abs_prec)
    if not x.coeffs:
        return y.truncate(prec)
    if not y.coeffs:
        return x.truncate(prec)
    start = min(x.val, y.val)
    end = max(x.val + len(x.coeffs), y.val + len(y.coeffs))
    if prec != INF:
        end = min(end, int(prec))
    if end <= start:
        return Series.zero(p, prec)
    out = [0] * (end - start)
    for src in (x, y):
        base = src.val - start
        for offset, c in enumerate(src.coeffs):
            idx = base + offset
            if idx >= len(out):
                break
            out[idx] += c
    return Series.from_coeffs(p, start, out, prec)


def series_mul(x: Series, y: Series) -> Series:
    """Product; ``val(xy) = val(x) + val(y)`` and the relative precision is the smaller one."""
    p = _check_modulus(x, y)
    if x.is_exact_zero() or y.is_exact_zero():
        return Series.zero(p)
    if not x.coeffs or not y.coeffs:
        # at least one factor is zero modulo t^P
        if not x.coeffs and not y.coeffs:
            return Series.zero(p, x.abs_prec + y.abs_prec)
        zero, other = (x, y) if not x.coeffs else (y, x)
        return Series.zero(p, zero.abs_prec + other.val)
    val = x.val + y.val
    rel = min(x.rel_prec, y.rel_prec)
    length = len(x.coeffs) + len(y.coeffs) - 1
    if rel != INF:
        length = min(length, int(rel))
    out = [0] * length
    ycs = y.coeffs
    for i, a in enumerate(x.coeffs):
        if i >= length:
            break
        if a == 0:
            continue
        for j in range(min(len(ycs), length - i)):
            out[i + j] += a * ycs[j]
    return Series.from_coeffs(p, val, out, val + rel)


def series_inv(x: Series, rel_prec: int | None = None) -> Series:
    """Inverse with ``val = -val(x)``.

    A monomial known exactly has an exact inverse. Other elements are inverted to their own
    relative precision, or to the session relative precision when they are exact.
    """
    if not x.coeffs:
        raise InvertibilityError("zero" if x.is_exact() else f"an element that is zero modulo t^{x.abs_prec}")
    p = x.p
    if x.is_monomial():
        return Series(p, -x.val, (pow(x.lead, -1, p),), INF)
    rel = x.rel_prec
    if rel == INF:
        rel = rel_prec if rel_prec is not None else get_relative_precision()
    n = int(rel)
    cs = x.coeffs
    inv0 = pow(cs[0], -1, p)
    out = [inv0]
    for j in range(1, n):
        acc = 0
        for i in range(1, min(j, len(cs) - 1) + 1):
            acc += cs[i] * out[j - i]
        out.append(-inv0 * acc % p)
    return Series.from_coeffs(p, -x.val, out, -x.val + n)


def series_coeff(x: Series, i: int) -> PrimeField:
    """Coefficient of ``t^i``; raises :class:`PrecisionError` past the known window."""
    return PrimeField(x.p, x.coefficient(i))


def series_val(x: Series) -> float:
    """Valuation; ``inf`` for the exact zero, an error when only bounded below."""
    if x.is_exact_zero():
        return INF
    return x.val


def parse_series(text: str, p: int, rel_prec: int | None = None) -> Series:
    """Parse a Laurent expression such as ``"t^-1 + 2*t"`` over F_p.

    The result is known to the session relative precision. An expression whose coefficients all
    reduce to zero is the exact zero.
    """
    check_prime(p)
    compact = re.sub(r"\s+", "", text)
    if not compact:
        raise SeriesSyntaxError(text, "empty expression")
    terms: dict[int, int] = {}
    for piece in compact.split("+"):
        match = _TERM.match(piece)
        if piece == "" or match is None:
            raise SeriesSyntaxError(text, f"unexpected term {piece!r}")
        coeff_text = match.group("coeff")
        if coeff_text is None:
            exp_text = match.group("exp2")
            coeff, exp = 1, 1 if exp_text is None else int(exp_text)
        elif match.group("star") is not None:
            exp_text = match.group("exp1")
            coeff, exp = int(coeff_text), 1 if exp_text is None else int(exp_text)
        else:
            coeff, exp = int(coeff_text), 0
        terms[exp] = terms.get(exp, 0) + coeff
    exact = Series.from_terms(p, terms)
    if exact.is_exact_zero():
        return exact
    n_rel = rel_prec if rel_prec is not None else get_relative_precision()
    return exact.truncate(exact.val + n_rel)


def _render_term(exp: int, coeff: int) -> str:
    if exp == 0:
        return str(coeff)
    power = "t" if exp == 1 else f"t^{exp}"
    return power if coeff == 1 else f"{coeff}*{power}"


def render_series(x: Series) -> str:
    """Render in the input grammar, with an ``O(t^P)`` suffix for finite precision."""
    parts = [_render_term(e, c) for e, c in x.terms()]
    if not x.is_exact():
        parts.append(f"O(t^{int(x.abs_prec)})")
    return " + ".join(parts) if parts else "0"


__all__ = [
    "DEFAULT_RELATIVE_PRECISION",
    "INF",
    "PrimeField",
    "Series",
    "check_prime",
    "get_relative_precision",
    "parse_series",
    "relative_precision",
    "render_series",
    "series_add",
    "series_coeff",
    "series_inv",
    "series_mul",
    "series_neg",
    "series_val",
]
