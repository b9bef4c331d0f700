"""Elements of PGL_2(F_p((t))), the subgroups B, I0 and A = I0 x| <sigma>, and the character chi.

Matrices are stored unscaled; two matrices are the same group element when they are
proportional, which :func:`projectively_equal` decides by cross-multiplying entries so that
exact inputs are compared exactly.

I0 is the group of matrices ``[[1 + t a, b], [t c, 1 + t d]]`` with ``a, b, c, d`` in O, and
``sigma = [[0, 1], [t, 0]]``. The character is ``chi(i) = psi(b_0 + c_0)`` on I0 and
``chi(sigma) = +-1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import TYPE_CHECKING, Literal

from pgl2_whittaker.cycnum import CycScalar, psi
from pgl2_whittaker.exceptions import InvertibilityError, NotBorelError, PrecisionError, SeriesSyntaxError
from pgl2_whittaker.fqlaurent import PrimeField, Series, parse_series, series_inv

if TYPE_CHECKING:
    from collections.abc import Iterator

    from pgl2_whittaker.options import ChiSigma


@dataclass(frozen=True, eq=False)
class GroupElem:
    """A 2x2 matrix over F_p((t)) read projectively."""

    m11: Series
    m12: Series
    m21: Series
    m22: Series
    canonical: bool = False
    """Whether the matrix is in the canonical form produced by :func:`canonicalize`."""

    @property
    def p(self) -> int:
        return self.m11.p

    @property
    def entries(self) -> tuple[Series, Series, Series, Series]:
        return (self.m11, self.m12, self.m21, self.m22)

    def det(self) -> Series:
        return self.m11 * self.m22 - self.m12 * self.m21

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupElem):
            return NotImplemented
        return projectively_equal(self, other)

    __hash__ = None  # type: ignore[assignment]

    def __matmul__(self, other: GroupElem) -> GroupElem:
        return mat_mul(self, other, canonical=False)

    def __str__(self) -> str:
        return render_matrix(self)


@dataclass(frozen=True)
class Iwahori0Params:
    """Coordinates ``(a, b, c, d)`` of ``[[1 + t a, b], [t c, 1 + t d]]``."""

    a: Series
    b: Series
    c: Series
    d: Series

    @classmethod
    def zero(cls, p: int) -> Iwahori0Params:
        z = Series.zero(p)
        return cls(z, z, z, z)


@dataclass(frozen=True)
class AElem:
    """The element ``sigma^sigma_power * i`` of A."""

    sigma_power: Literal[0, 1]
    iwahori: Iwahori0Params


@dataclass(frozen=True)
class BorelForm:
    """The upper-triangular element ``[[A, B], [0, 1]]``."""

    A: Series
    B: Series

    @property
    def p(self) -> int:
        return self.A.p


def identity(p: int) -> GroupElem:
    one, zero = Series.one(p), Series.zero(p)
    return GroupElem(one, zero, zero, one, canonical=True)


def sigma(p: int) -> GroupElem:
    return GroupElem(Series.zero(p), Series.one(p), Series.monomial(p, 1, 1), Series.zero(p), canonical=True)


def diagonal(x: Series, y: Series | None = None) -> GroupElem:
    zero = Series.zero(x.p)
    return GroupElem(x, zero, zero, Series.one(x.p) if y is None else y)


def unipotent(u: Series) -> GroupElem:
    """``[[1, u], [0, 1]]``."""
    return GroupElem(Series.one(u.p), u, Series.zero(u.p), Series.one(u.p))


def borel_to_group(b: BorelForm) -> GroupElem:
    return GroupElem(b.A, b.B, Series.zero(b.p), Series.one(b.p))


def reassemble_iwahori0(params: Iwahori0Params) -> GroupElem:
    one = Series.one(params.a.p)
    return GroupElem(one + params.a.shift(1), params.b, params.c.shift(1), one + params.d.shift(1))


def reassemble_a(x: AElem) -> GroupElem:
    i = reassemble_iwahori0(x.iwahori)
    return mat_mul(sigma(i.p), i, canonical=False) if x.sigma_power else i


def _min_val(entries: tuple[Series, ...]) -> int:
    """Smallest valuation among the entries, checked against entries that are zero modulo ``t^P``."""
    vals = [e.val for e in entries if not e.is_zero()]
    if not vals:
        raise InvertibilityError("the zero matrix")
    low = min(vals)
    for e in entries:
        if e.is_zero() and e.abs_prec <= low:
            raise PrecisionError("the minimal valuation of a matrix entry", e.abs_prec)
    return low


def check_invertible(g: GroupElem) -> None:
    det = g.det()
    if det.is_zero():
        if det.is_exact():
            raise InvertibilityError("a matrix with zero determinant")
        raise PrecisionError("the determinant is zero at current precision", det.abs_prec)


def canonicalize(g: GroupElem) -> GroupElem:
    """Divide by the first entry (row-major) of minimal valuation; that entry becomes exactly 1."""
    if g.canonical:
        return g
    check_invertible(g)
    low = _min_val(g.entries)
    pivot_index = next(i for i, e in enumerate(g.entries) if not e.is_zero() and e.val == low)
    pivot = g.entries[pivot_index]
    inverse = series_inv(pivot)
    scaled = [Series.one(g.p) if i == pivot_index else e * inverse for i, e in enumerate(g.entries)]
    return GroupElem(*scaled, canonical=True)


def mat_mul(g: GroupElem, h: GroupElem, *, canonical: bool = True) -> GroupElem:
    product = GroupElem(
        g.m11 * h.m11 + g.m12 * h.m21,
        g.m11 * h.m12 + g.m12 * h.m22,
        g.m21 * h.m11 + g.m22 * h.m21,
        g.m21 * h.m12 + g.m22 * h.m22,
    )
    return canonicalize(product) if canonical else product


def mat_inv(g: GroupElem, *, canonical: bool = True) -> GroupElem:
    """Projective inverse, the adjugate."""
    check_invertible(g)
    adjugate = GroupElem(g.m22, -g.m12, -g.m21, g.m11)
    return canonicalize(adjugate) if canonical else adjugate


def projectively_equal(g: GroupElem, h: GroupElem) -> bool:
    if g.p != h.p:
        return False
    ge, he = g.entries, h.entries
    return all((ge[i] * he[j] - ge[j] * he[i]).is_zero() for i in range(4) for j in range(i + 1, 4))


def to_borel_form(g: GroupElem) -> BorelForm:
    if not g.m21.is_zero():
        raise NotBorelError("the lower-left entry is nonzero")
    if g.m22.is_zero():
        raise NotBorelError("the lower-right entry vanishes")
    if g.m22.is_monomial() and g.m22.val == 0 and g.m22.lead == 1:
        return BorelForm(g.m11, g.m12)
    inverse = series_inv(g.m22)
    return BorelForm(g.m11 * inverse, g.m12 * inverse)


def _integral_scaling(g: GroupElem) -> tuple[Series, Series, Series, Series]:
    """The entries multiplied by ``t^-v`` with ``v`` the minimal valuation, so they lie in O."""
    low = _min_val(g.entries)
    m11, m12, m21, m22 = g.entries
    return (m11.shift(-low), m12.shift(-low), m21.shift(-low), m22.shift(-low))


def _iwahori0_shape(m11: Series, m21: Series, m22: Series) -> bool:
    """Whether an integral matrix reduces modulo t to an upper unipotent matrix up to a scalar."""
    d0 = m22.coefficient(0)
    return d0 != 0 and m21.coefficient(0) == 0 and m11.coefficient(0) == d0


def iwahori0_params(g: GroupElem) -> Iwahori0Params | None:
    """Coordinates of the multiple of ``g`` lying in I0 with ``d = 0``, or ``None`` if there is none."""
    m11, m12, m21, m22 = _integral_scaling(g)
    if not _iwahori0_shape(m11, m21, m22):
        return None
    inverse = series_inv(m22)
    a = (m11 * inverse - Series.one(g.p)).shift(-1)
    return Iwahori0Params(a=a, b=m12 * inverse, c=(m21 * inverse).shift(-1), d=Series.zero(g.p))


def a_factor(g: GroupElem) -> AElem | None:
    params = iwahori0_params(g)
    if params is not None:
        return AElem(0, params)
    # sigma^-1 is a scalar multiple of sigma
    params = iwahori0_params(mat_mul(sigma(g.p), g, canonical=False))
    if params is not None:
        return AElem(1, params)
    return None


def chi_eval(x: AElem, *, chi_sigma: ChiSigma = 1) -> CycScalar:
    p = x.iwahori.a.p
    b0 = x.iwahori.b.coefficient(0)
    c0 = x.iwahori.c.coefficient(0)
    value = psi(PrimeField(p, b0 + c0))
    return value * chi_sigma if x.sigma_power else value


def iwahori0_chi_fast(g: GroupElem) -> CycScalar | None:
    """``chi`` of the multiple of ``g`` in I0, or ``None``; no series division is performed.

    For an integral matrix with unit ``m22`` the normalized coordinates satisfy
    ``b_0 = m12_0 / m22_0`` and ``c_0 = m21_1 / m22_0``.
    """
    m11, m12, m21, m22 = _integral_scaling(g)
    if not _iwahori0_shape(m11, m21, m22):
        return None
    p = g.p
    d0 = PrimeField(p, m22.coefficient(0))
    return psi((PrimeField(p, m12.coefficient(0)) + m21.coefficient(1)) / d0)


def a_chi_fast(g: GroupElem, *, chi_sigma: ChiSigma = 1) -> CycScalar | None:
    """``chi`` of ``g`` as an element of A, or ``None`` when ``g`` is not in A."""
    value = iwahori0_chi_fast(g)
    if value is not None:
        return value
    value = iwahori0_chi_fast(mat_mul(sigma(g.p), g, canonical=False))
    if value is None:
        return None
    return value * chi_sigma


def conjugate_by_sigma(g: GroupElem) -> GroupElem:
    """``sigma g sigma^-1``, computed as ``t^-1 sigma g sigma``."""
    s = sigma(g.p)
    product = mat_mul(mat_mul(s, g, canonical=False), s, canonical=False)
    return GroupElem(*(e.shift(-1) for e in product.entries))


def parse_matrix(text: str, p: int) -> GroupElem:
    """Parse ``"e11;e12;e21;e22"`` with each entry a Laurent expression."""
    parts = text.split(";")
    if len(parts) != 4:
        raise SeriesSyntaxError(text, f"expected four entries separated by ';', got {len(parts)}")
    g = GroupElem(*(parse_series(part, p) for part in parts))
    check_invertible(g)
    return g


def render_matrix(g: GroupElem) -> str:
    return "[[{}, {}], [{}, {}]]".format(*(str(e) for e in g.entries))


def iter_truncated(p: int, depth: int, low: int = 0) -> Iterator[Series]:
    """Every exact polynomial ``sum_{low <= i < depth} c_i t^i``, last coefficient varying fastest."""
    width = depth - low
    if width <= 0:
        yield Series.zero(p)
        return
    for digits in itertools.product(range(p), repeat=width):
        yield Series.from_coeffs(p, low, digits)


__all__ = [
    "AElem",
    "BorelForm",
    "GroupElem",
    "Iwahori0Params",
    "a_chi_fast",
    "a_factor",
    "borel_to_group",
    "canonicalize",
    "check_invertible",
    "chi_eval",
    "conjugate_by_sigma",
    "diagonal",
    "identity",
    "iter_truncated",
    "iwahori0_chi_fast",
    "iwahori0_params",
    "mat_inv",
    "mat_mul",
    "parse_matrix",
    "projectively_equal",
    "reassemble_a",
    "reassemble_iwahori0",
    "render_matrix",
    "sigma",
    "to_borel_form",
    "unipotent",
]
