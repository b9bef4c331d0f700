"""Exact scalars in Q(zeta_p) and exact linear algebra over them.

An element is ``(n_0 + n_1 z + ... + n_{p-2} z^{p-2}) / den`` in the basis ``1, z, ..., z^{p-2}``
with the relation ``1 + z + ... + z^{p-1} = 0`` applied eagerly, so equal elements have equal
representations.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING, Literal

from sympy import QQ, Poly, Symbol, cyclotomic_poly

from pgl2_whittaker.exceptions import DimensionError, InvertibilityError, ModulusMismatchError
from pgl2_whittaker.fqlaurent import PrimeField, check_prime

if TYPE_CHECKING:
    from collections.abc import Sequence

_Z = Symbol("z")

CycOp = Literal["add", "sub", "mul", "div"]


def _reduce_full(p: int, full: Sequence[int]) -> list[int]:
    """Map coefficients of ``z^0..z^{p-1}`` onto the basis ``z^0..z^{p-2}``."""
    top = full[p - 1]
    return [full[i] - top for i in range(p - 1)]


@dataclass(frozen=True)
class CycScalar:
    """Element of Q(zeta_p) in canonical form."""

    p: int
    """Prime order of the root of unity."""

    num: tuple[int, ...]
    """Integer coordinates in the basis ``1, z, ..., z^{p-2}``."""

    den: int = 1
    """Positive denominator, coprime to the coordinates."""

    @classmethod
    def make(cls, p: int, num: Sequence[int], den: int = 1) -> CycScalar:
        if den == 0:
            raise InvertibilityError("a scalar with zero denominator")
        coords = list(num)
        if len(coords) == p:
            coords = _reduce_full(p, coords)
        if len(coords) != p - 1:
            raise ValueError(f"expected {p - 1} coordinates, got {len(coords)}")
        if den < 0:
            den = -den
            coords = [-c for c in coords]
        g = math.gcd(den, *coords)
        if g > 1:
            den //= g
            coords = [c // g for c in coords]
        return cls(p, tuple(coords), den)

    @classmethod
    def zero(cls, p: int) -> CycScalar:
        return cls(p, (0,) * (p - 1), 1)

    @classmethod
    def one(cls, p: int) -> CycScalar:
        return cls.from_int(p, 1)

    @classmethod
    def from_int(cls, p: int, n: int) -> CycScalar:
        return cls.make(p, [n] + [0] * (p - 2))

    @classmethod
    def from_fraction(cls, p: int, value: Fraction) -> CycScalar:
        return cls.make(p, [value.numerator] + [0] * (p - 2), value.denominator)

    @classmethod
    def zeta(cls, p: int, power: int) -> CycScalar:
        full = [0] * p
        full[power % p] = 1
        return cls.make(p, full)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def _check(self, other: CycScalar) -> None:
        if other.p != self.p:
            raise ModulusMismatchError(self.p, other.p)

    def _lift(self, other: CycScalar | int) -> CycScalar:
        if isinstance(other, int):
            return CycScalar.from_int(self.p, other)
        self._check(other)
        return other

    def __add__(self, other: CycScalar | int) -> CycScalar:
        b = self._lift(other)
        den = self.den * b.den // math.gcd(self.den, b.den)
        sa, sb = den // self.den, den // b.den
        return CycScalar.make(self.p, [x * sa + y * sb for x, y in zip(self.num, b.num, strict=True)], den)

    __radd__ = __add__

    def __neg__(self) -> CycScalar:
        return CycScalar(self.p, tuple(-x for x in self.num), self.den)

    def __sub__(self, other: CycScalar | int) -> CycScalar:
        return self + (-self._lift(other))

    def __rsub__(self, other: int) -> CycScalar:
        return (-self) + other

    def __mul__(self, other: CycScalar | int) -> CycScalar:
        if isinstance(other, int):
            return CycScalar.make(self.p, [x * other for x in self.num], self.den)
        self._check(other)
        p = self.p
        full = [0] * p
        for i, x in enumerate(self.num):
            if x == 0:
                continue
            for j, y in enumerate(other.num):
                if y:
                    full[(i + j) % p] += x * y
        return CycScalar.make(p, full, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other: CycScalar | int) -> CycScalar:
        if isinstance(other, int):
            if other == 0:
                raise InvertibilityError("0")
            return CycScalar.make(self.p, list(self.num), self.den * other)
        return self * cyc_inv(other)

    def __pow__(self, exponent: int) -> CycScalar:
        base = self if exponent >= 0 else cyc_inv(self)
        result = CycScalar.one(self.p)
        for _ in range(abs(exponent)):
            result = result * base
        return result

    def __str__(self) -> str:
        return render_cyc(self)


@lru_cache(maxsize=None)
def _cyclotomic_modulus(p: int) -> Poly:
    return Poly(cyclotomic_poly(p, _Z), _Z, domain=QQ)


def cyc_inv(a: CycScalar) -> CycScalar:
    """Multiplicative inverse, computed modulo the p-th cyclotomic polynomial."""
    if a.is_zero():
        raise InvertibilityError("0 in Q(zeta)")
    p = a.p
    if a.is_rational():
        return CycScalar.make(p, [a.den] + [0] * (p - 2), a.num[0])
    inverse = Poly(list(reversed(a.num)), _Z, domain=QQ).invert(_cyclotomic_modulus(p))
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(inverse.all_coeffs())]
    coeffs += [Fraction(0)] * (p - 1 - len(coeffs))
    common = math.lcm(*(c.denominator for c in coeffs))
    return CycScalar.make(p, [int(c * common) * a.den for c in coeffs], common)


def psi(x: PrimeField | int, p: int | None = None) -> CycScalar:
    """The additive character ``x -> zeta_p^x`` of F_p."""
    if isinstance(x, PrimeField):
        return CycScalar.zeta(x.p, x.value)
    if p is None:
        raise ValueError("psi of a plain integer needs the modulus p")
    return CycScalar.zeta(check_prime(p), x)


def cyc_ring_ops(a: CycScalar, b: CycScalar, op: CycOp) -> CycScalar:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def cyc_is_zero(a: CycScalar) -> bool:
    return a.is_zero()


def _check_square(matrix: Sequence[Sequence[CycScalar]]) -> int:
    n = len(matrix)
    for row in matrix:
        if len(row) != n:
            raise DimensionError(n, len(row))
    return n


def exact_det(matrix: Sequence[Sequence[CycScalar]], p: int | None = None) -> CycScalar:
    """Determinant by fraction-free (Bareiss) elimination with row pivoting."""
    n = _check_square(matrix)
    if n == 0:
        if p is None:
            raise DimensionError(0, 0)
        return CycScalar.one(p)
    p = matrix[0][0].p
    a = [list(row) for row in matrix]
    sign = 1
    previous = CycScalar.one(p)
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((r for r in range(k + 1, n) if not a[r][k].is_zero()), None)
            if swap is None:
                return CycScalar.zero(p)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        previous_inv = cyc_inv(previous)
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) * previous_inv
        previous = pivot
    return a[n - 1][n - 1] * sign


def leibniz_det(matrix: Sequence[Sequence[CycScalar]]) -> CycScalar:
    """Determinant by expansion over all permutations; only for small matrices."""
    n = _check_square(matrix)
    if n == 0:
        raise DimensionError(0, 0)
    p = matrix[0][0].p
    total = CycScalar.zero(p)
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = CycScalar.one(p)
        for row, col in enumerate(perm):
            term = term * matrix[row][col]
        total = total - term if inversions % 2 else total + term
    return total


def render_cyc(a: CycScalar) -> str:
    """CSV rendering ``n0+n1*z+n2*z^2+.../den``."""
    parts = []
    for i, c in enumerate(a.num):
        if i == 0:
            parts.append(str(c))
        elif i == 1:
            parts.append(f"{c}*z")
        else:
            parts.append(f"{c}*z^{i}")
    return "+".join(parts) + f"/{a.den}"


def cyc_to_json(a: CycScalar) -> dict[str, object]:
    return {"num": list(a.num), "den": a.den}


def cyc_from_json(p: int, payload: dict[str, object]) -> CycScalar:
    num = payload["num"]
    den = payload["den"]
    if not isinstance(num, list) or not isinstance(den, int):
        raise ValueError(f"malformed scalar payload: {payload!r}")
    return CycScalar.make(p, [int(x) for x in num], den)


__all__ = [
    "CycScalar",
    "cyc_from_json",
    "cyc_inv",
    "cyc_is_zero",
    "cyc_ring_ops",
    "cyc_to_json",
    "exact_det",
    "leibniz_det",
    "psi",
    "render_cyc",
]
