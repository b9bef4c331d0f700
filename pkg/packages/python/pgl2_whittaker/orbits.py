"""Structural algorithms on PGL_2: the B.A decomposition, orbit representatives and stabilizer scans."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Literal

from pgl2_whittaker.cycnum import CycScalar
from pgl2_whittaker.exceptions import EnumerationGuardError, InvertibilityError, LevelMismatchError, PrecisionError
from pgl2_whittaker.fqlaurent import PrimeField, Series, series_inv
from pgl2_whittaker.group import (
    AElem,
    BorelForm,
    GroupElem,
    Iwahori0Params,
    a_chi_fast,
    borel_to_group,
    check_invertible,
    iter_truncated,
    iwahori0_chi_fast,
    mat_mul,
    reassemble_iwahori0,
    to_borel_form,
    unipotent,
)
from pgl2_whittaker.options import ENUMERATION_BOUND, LevelParams, ScanBounds

if TYPE_CHECKING:
    from collections.abc import Iterator

logger = logging.getLogger(__name__)

DecompositionCase = Literal[1, 2, 3]
CosetShape = Literal["diagonal", "antidiagonal"]


@dataclass(frozen=True)
class OrbitRep:
    """The representative ``[[a_lead t^n, sum_j b_j t^j], [0, 1]]`` with ``n - k < j < n``."""

    n: int
    a_lead: PrimeField
    b_window: tuple[PrimeField, ...]
    """Coefficients ``b_{n-k+1}, ..., b_{n-1}``."""

    @property
    def p(self) -> int:
        return self.a_lead.p

    @property
    def k(self) -> int:
        return len(self.b_window) + 1

    @property
    def sort_key(self) -> tuple[int, int, tuple[int, ...]]:
        return (self.n, self.a_lead.value, tuple(b.value for b in self.b_window))

    def b_series(self) -> Series:
        start = self.n - self.k + 1
        return Series.from_coeffs(self.p, start, [b.value for b in self.b_window])

    def to_borel(self) -> BorelForm:
        return BorelForm(Series.monomial(self.p, self.a_lead.value, self.n), self.b_series())

    def to_group(self) -> GroupElem:
        return borel_to_group(self.to_borel())

    def widen(self) -> OrbitRep:
        """The same matrix viewed as a representative at level ``k + 1``."""
        return OrbitRep(self.n, self.a_lead, (PrimeField(self.p, 0), *self.b_window))

    def __str__(self) -> str:
        window = ",".join(str(b.value) for b in self.b_window)
        return f"n={self.n} a={self.a_lead.value} b=({window})"


@dataclass(frozen=True)
class DoubleCosetPoint:
    """``diag(a t^n, 1)`` or ``[[0, a t^n], [1, 0]]``."""

    shape: CosetShape
    n: int
    a_lead: PrimeField

    @property
    def sort_key(self) -> tuple[int, int, int]:
        return (0 if self.shape == "diagonal" else 1, self.n, self.a_lead.value)

    def matrix(self) -> GroupElem:
        p = self.a_lead.p
        x = Series.monomial(p, self.a_lead.value, self.n)
        zero, one = Series.zero(p), Series.one(p)
        if self.shape == "diagonal":
            return GroupElem(x, zero, zero, one)
        return GroupElem(zero, x, one, zero)

    def __str__(self) -> str:
        return f"{self.shape}(n={self.n}, a={self.a_lead.value})"


@dataclass
class PointResult:
    point: DoubleCosetPoint
    passes: bool
    checked: int
    """Number of Iwahori parameters examined before a verdict."""
    in_stabilizer: int
    witness: Iwahori0Params | None = None
    witness_value: CycScalar | None = None


@dataclass
class ScanReport:
    bounds: ScanBounds
    results: list[PointResult] = field(default_factory=list)

    @property
    def passing_points(self) -> list[DoubleCosetPoint]:
        return [r.point for r in self.results if r.passes]

    @property
    def passing_orbits(self) -> list[DoubleCosetPoint]:
        labels = {a_by_a_orbit_label(point) for point in self.passing_points}
        return sorted(labels, key=lambda point: point.sort_key)


@dataclass(frozen=True)
class CuspidalityWitness:
    u: Series
    """The translation ``[[1, u], [0, 1]]`` used, here the upper-left entry of the Borel element."""
    element: GroupElem
    """``g^-1 [[1, u], [0, 1]] g``."""
    chi: CycScalar | None
    """The character value on ``element``, ``None`` if it is not in I0."""


def _val_at_least(x: Series, bound: int) -> bool:
    """Whether ``val(x) >= bound``; exact zero counts as infinite valuation."""
    if x.is_exact_zero():
        return True
    if x.is_zero():
        if x.abs_prec < bound:
            raise PrecisionError(f"whether the valuation reaches {bound}", x.abs_prec)
        return True
    return x.val >= bound


def decomposition_case(g: GroupElem) -> DecompositionCase:
    check_invertible(g)
    if g.m21.is_zero():
        return 1
    if g.m22.is_zero():
        if g.m22.abs_prec <= g.m21.val:
            raise PrecisionError("comparing valuations of the lower row", g.m22.abs_prec)
        return 3
    return 2 if g.m21.val > g.m22.val else 3


def decompose_BA(g: GroupElem) -> tuple[BorelForm, AElem]:  # noqa: N802
    """Write ``g = b a`` projectively with ``b`` upper triangular and ``a`` in A."""
    p = g.p
    zero = Series.zero(p)
    case = decomposition_case(g)
    if case == 1:
        return to_borel_form(g), AElem(0, Iwahori0Params.zero(p))
    m11, m12, m21, m22 = g.entries
    if case == 2:
        inverse = series_inv(m22)
        y = m12 * inverse
        x = (m11 - m12 * m21 * inverse) * inverse
        c = (m21 * inverse).shift(-1)
        return BorelForm(x, y), AElem(0, Iwahori0Params(zero, zero, c, zero))
    # scale so that the lower-left entry is exactly t
    inverse = series_inv(m21.shift(-1))
    n11, n12, n22 = m11 * inverse, m12 * inverse, m22 * inverse
    borel = BorelForm(n12 - (n11 * n22).shift(-1), n11.shift(-1))
    return borel, AElem(1, Iwahori0Params(zero, n22.shift(-1), zero, zero))


def reduce_to_representative(b: BorelForm, level: LevelParams) -> tuple[OrbitRep, AElem] | None:
    """Right-multiply ``b`` by an I0 element into R_{n,k}.

    Returns the representative and the I0 element ``i`` with ``b i`` equal to it, or ``None``
    when the orbit is irrelevant (a coefficient of B at degree ``n - k`` or below is nonzero).
    """
    p, k, n = level.p, level.k, level.n
    if b.A.is_zero():
        raise InvertibilityError("a Borel element with vanishing upper-left entry")
    if b.A.val != n:
        raise LevelMismatchError(n, b.A.val)
    if not _val_at_least(b.B, n - k + 1):
        return None
    a_n = b.A.lead
    window = tuple(PrimeField(p, b.B.coefficient(j)) for j in range(n - k + 1, n))
    rep = OrbitRep(n, PrimeField(p, a_n), window)
    inverse = series_inv(b.A)
    m11 = (Series.monomial(p, a_n, n) * inverse - Series.one(p)).shift(-1)
    m12 = -(b.B.high(n) * inverse)
    zero = Series.zero(p)
    return rep, AElem(0, Iwahori0Params(m11, m12, zero, zero))


def orbit_rep_from_borel(b: BorelForm, k: int) -> OrbitRep | None:
    """Read ``b`` as a point of R_{n,k}; ``None`` unless it already is one."""
    if not b.A.is_monomial():
        return None
    n = b.A.val
    if not b.B.is_exact() or any(not n - k < j < n for j, _ in b.B.terms()):
        return None
    p = b.p
    window = tuple(PrimeField(p, b.B.coefficient(j)) for j in range(n - k + 1, n))
    return OrbitRep(n, PrimeField(p, b.A.lead), window)


def relevance_closed_form(b: BorelForm, k: int) -> bool:
    """``val(B/A) >= 1 - k``, including ``B = 0``."""
    return _val_at_least(b.B, b.A.val - k + 1)


def relevance_obstruction(b: BorelForm, level: LevelParams) -> tuple[Series, CycScalar] | None:
    """Search ``x`` in O/t^M with ``g^-1 z g`` in A and nontrivial character, ``z = diag(1 + t^k x, 1)``.

    The conjugate is formed as ``adj(g) diag(1, 1 + t^k x) g = [[A, -t^k x B], [0, A (1 + t^k x)]]``,
    which stays exact for exact ``b``.
    """
    p, k = level.p, level.k
    size = p**level.depth
    if size > ENUMERATION_BOUND:
        raise EnumerationGuardError(f"O/t^{level.depth}", size, ENUMERATION_BOUND)
    one = CycScalar.one(p)
    zero = Series.zero(p)
    for x in iter_truncated(p, level.depth):
        tkx = x.shift(k)
        conjugate = GroupElem(b.A, -(tkx * b.B), zero, b.A * (Series.one(p) + tkx))
        value = a_chi_fast(conjugate, chi_sigma=level.chi_sigma)
        if value is not None and value != one:
            return x, value
    return None


def relevance_bruteforce(b: BorelForm, level: LevelParams) -> bool:
    return relevance_obstruction(b, level) is None


def _times_monomial(x: Series, coeff: int, exp: int) -> Series:
    return x.shift(exp).scale(coeff)


def conjugate_by_point(point: DoubleCosetPoint, h: GroupElem) -> GroupElem:
    """A scalar multiple of ``g h g^-1`` for the matrix ``g`` of ``point``, using only monomial scalings."""
    a, n = point.a_lead.value, point.n
    h11, h12, h21, h22 = h.entries
    if point.shape == "diagonal":
        # x g h g^-1 = [[x h11, x^2 h12], [h21, x h22]]
        return GroupElem(
            _times_monomial(h11, a, n), _times_monomial(h12, a * a, 2 * n), h21, _times_monomial(h22, a, n)
        )
    # g^-1 is a multiple of g, and g h g = [[x h22, x^2 h21], [h12, x h11]]
    return GroupElem(_times_monomial(h22, a, n), _times_monomial(h21, a * a, 2 * n), h12, _times_monomial(h11, a, n))


def _multiplier(point: DoubleCosetPoint, h: GroupElem) -> CycScalar | None:
    inner = iwahori0_chi_fast(conjugate_by_point(point, h))
    if inner is None:
        return None
    base = iwahori0_chi_fast(h)
    if base is None:
        raise ValueError("the conjugated element h is not in I0")
    return inner / base


def double_coset_multiplier(point: DoubleCosetPoint, h: Iwahori0Params) -> CycScalar | None:
    """``chi(g h g^-1) / chi(h)``, or ``None`` when ``g h g^-1`` is not in I0."""
    return _multiplier(point, reassemble_iwahori0(h))


def a_by_a_orbit_label(point: DoubleCosetPoint) -> DoubleCosetPoint:
    """The diagonal point labelling the A x A double coset of ``point``.

    ``[[0, a t^n], [1, 0]]`` equals ``diag(a t^(n+1), 1) sigma`` and ``sigma diag(x, 1) sigma^-1``
    equals ``diag(1/x, 1)``, so every orbit has a label ``diag(a t^n, 1)`` with ``n >= 0``.
    """
    n, a = point.n, point.a_lead
    if point.shape == "antidiagonal":
        n += 1
    if n < 0 or (n == 0 and a.inverse().value < a.value):
        n, a = -n, a.inverse()
    return DoubleCosetPoint("diagonal", n, a)


def iter_scan_points(bounds: ScanBounds) -> Iterator[DoubleCosetPoint]:
    for shape in ("diagonal", "antidiagonal"):
        for n in bounds.n_range:
            for a in range(1, bounds.p):
                yield DoubleCosetPoint(shape, n, PrimeField(bounds.p, a))  # type: ignore[arg-type]


def _scan_point(task: tuple[DoubleCosetPoint, int]) -> PointResult:
    point, depth = task
    p = point.a_lead.p
    one = Series.one(p)
    polys = list(iter_truncated(p, depth))
    diagonals = [one + x.shift(1) for x in polys]
    lowers = [x.shift(1) for x in polys]
    unit = CycScalar.one(p)
    checked = in_stabilizer = 0
    for h11 in diagonals:
        for h22 in diagonals:
            for h12 in polys:
                for h21 in lowers:
                    checked += 1
                    value = _multiplier(point, GroupElem(h11, h12, h21, h22))
                    if value is None:
                        continue
                    in_stabilizer += 1
                    if value != unit:
                        witness = Iwahori0Params(
                            (h11 - one).shift(-1), h12, h21.shift(-1), (h22 - one).shift(-1)
                        )
                        return PointResult(point, False, checked, in_stabilizer, witness, value)
    return PointResult(point, True, checked, in_stabilizer)


def double_coset_scan(bounds: ScanBounds, *, workers: int = 1) -> ScanReport:
    """Test every scanned double coset for a stabilizer element with nontrivial multiplier.

    Iwahori parameters ``(a, d, b, c)`` run over O/t^M, with ``c`` varying fastest; a point stops
    at its first witness.
    """
    p, depth = bounds.p, bounds.depth
    size = p ** (4 * depth)
    if size > ENUMERATION_BOUND:
        raise EnumerationGuardError(f"Iwahori parameters modulo t^{depth}", size, ENUMERATION_BOUND)
    if bounds.n_range and depth < max(abs(bounds.n_min), abs(bounds.n_max)) + 2:
        logger.debug("scan depth %d is shallow for n in [%d, %d]", depth, bounds.n_min, bounds.n_max)
    points = list(iter_scan_points(bounds))
    logger.debug("scanning %d double cosets with %d Iwahori parameters each", len(points), size)
    tasks = [(point, depth) for point in points]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(_scan_point, tasks))
    else:
        results = [_scan_point(task) for task in tasks]
    report = ScanReport(bounds, results)
    logger.info(
        "scan p=%d n=[%d, %d] depth=%d: %d passing points, %d passing orbits",
        p,
        bounds.n_min,
        bounds.n_max,
        depth,
        len(report.passing_points),
        len(report.passing_orbits),
    )
    return report


def representatives_connected(first: OrbitRep, second: OrbitRep, level: LevelParams) -> Series | None:
    """An ``x`` in O/t^M with ``diag(1 + t^k x, 1) first a = second`` for some ``a`` in A, or ``None``."""
    p, k = level.p, level.k
    m1, m2 = first.to_group(), second.to_group()
    adjugate = GroupElem(m1.m22, -m1.m12, -m1.m21, m1.m11)
    zero = Series.zero(p)
    for x in iter_truncated(p, level.depth):
        z_inverse = GroupElem(Series.one(p), zero, zero, Series.one(p) + x.shift(k))
        candidate = mat_mul(mat_mul(adjugate, z_inverse, canonical=False), m2, canonical=False)
        if a_chi_fast(candidate, chi_sigma=level.chi_sigma) is not None:
            return x
    return None


def cuspidality_witness(b: BorelForm) -> CuspidalityWitness:
    """Conjugate ``[[1, A], [0, 1]]`` by the Borel element ``[[A, B], [0, 1]]``."""
    g = borel_to_group(b)
    adjugate = GroupElem(g.m22, -g.m12, -g.m21, g.m11)
    element = mat_mul(mat_mul(adjugate, unipotent(b.A), canonical=False), g, canonical=False)
    return CuspidalityWitness(b.A, element, iwahori0_chi_fast(element))


__all__ = [
    "CuspidalityWitness",
    "DoubleCosetPoint",
    "OrbitRep",
    "PointResult",
    "ScanReport",
    "a_by_a_orbit_label",
    "conjugate_by_point",
    "cuspidality_witness",
    "decompose_BA",
    "decomposition_case",
    "double_coset_multiplier",
    "double_coset_scan",
    "iter_scan_points",
    "orbit_rep_from_borel",
    "reduce_to_representative",
    "relevance_bruteforce",
    "relevance_closed_form",
    "relevance_obstruction",
    "representatives_connected",
]
