"""The finite-level representation, the Whittaker functional and the transform phi.

Sections are stored on the representatives R_{n,k} and extended to the group by
``f(g a) = chi(a) f(g)``. Haar measures give O volume 1, so integrals over O are averages.

``phi(f)(x)`` integrates ``f([[x, x u], [0, 1]]) psi(-u_0)`` over ``u`` in F_p((t)). The integrand
vanishes unless ``val(u) > -k`` and is unchanged by ``u -> u + v`` with ``v`` in tO, since
``[[1, v], [0, 1]]`` lies in I0 with trivial character. Matrix assembly therefore averages over
``t^(1-k) O / t^depth O`` for a small ``depth``; :func:`phi_apply` always uses ``M_int``.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING

from pgl2_whittaker.cycnum import CycScalar, exact_det, psi
from pgl2_whittaker.exceptions import EnumerationGuardError, LevelMismatchError
from pgl2_whittaker.fqlaurent import PrimeField, Series, series_inv
from pgl2_whittaker.group import BorelForm, GroupElem, chi_eval, iter_truncated, unipotent
from pgl2_whittaker.options import ENUMERATION_BOUND, LevelParams
from pgl2_whittaker.orbits import OrbitRep, decompose_BA, reduce_to_representative

if TYPE_CHECKING:
    from collections.abc import Mapping

logger = logging.getLogger(__name__)

DEFAULT_PHI_DEPTH = 1


@dataclass(frozen=True)
class TorusClass:
    """``a_lead t^n (1 + c_1 t + ... + c_{k-1} t^(k-1))`` modulo ``1 + t^k O``."""

    n: int
    a_lead: PrimeField
    unit_tail: tuple[PrimeField, ...]

    @property
    def p(self) -> int:
        return self.a_lead.p

    @property
    def k(self) -> int:
        return len(self.unit_tail) + 1

    @property
    def sort_key(self) -> tuple[int, int, tuple[int, ...]]:
        return (self.n, self.a_lead.value, tuple(c.value for c in self.unit_tail))

    def lift(self) -> Series:
        a = self.a_lead.value
        return Series.from_coeffs(self.p, self.n, [a] + [a * c.value for c in self.unit_tail])

    def __str__(self) -> str:
        tail = ",".join(str(c.value) for c in self.unit_tail)
        return f"n={self.n} a={self.a_lead.value} u=({tail})"


def torus_class_of(x: Series, k: int) -> TorusClass:
    """The class of a nonzero ``x`` in t^n O^x / (1 + t^k O)."""
    p, n = x.p, x.val
    lead = PrimeField(p, x.lead)
    scale = lead.inverse()
    tail = tuple(scale * x.coefficient(n + i) for i in range(1, k))
    return TorusClass(n, lead, tail)


def torus_mul(x: TorusClass, y: TorusClass) -> TorusClass:
    return torus_class_of(x.lift() * y.lift(), x.k)


def torus_div(x: TorusClass, y: TorusClass) -> TorusClass:
    return torus_class_of(x.lift() * series_inv(y.lift(), rel_prec=x.k), x.k)


@lru_cache(maxsize=256)
def _representatives(level: LevelParams) -> tuple[OrbitRep, ...]:
    p, k, n = level.p, level.k, level.n
    return tuple(
        OrbitRep(n, PrimeField(p, a), tuple(PrimeField(p, b) for b in window))
        for a in range(1, p)
        for window in itertools.product(range(p), repeat=k - 1)
    )


def enumerate_representatives(level: LevelParams) -> list[OrbitRep]:
    """R_{n,k}, ordered by leading coefficient and then by window."""
    return list(_representatives(level))


def enumerate_torus_classes(level: LevelParams) -> list[TorusClass]:
    p, k, n = level.p, level.k, level.n
    return [
        TorusClass(n, PrimeField(p, a), tuple(PrimeField(p, c) for c in tail))
        for a in range(1, p)
        for tail in itertools.product(range(p), repeat=k - 1)
    ]


@dataclass(frozen=True)
class SectionVector:
    """A section at one level, given by its values on the representatives."""

    level: LevelParams
    values: Mapping[OrbitRep, CycScalar]

    def __post_init__(self) -> None:
        expected = _representatives(self.level)
        if len(self.values) != len(expected) or any(rep not in self.values for rep in expected):
            raise LevelMismatchError(len(expected), len(self.values), "number of representatives")

    @classmethod
    def zero(cls, level: LevelParams) -> SectionVector:
        zero = CycScalar.zero(level.p)
        return cls(level, dict.fromkeys(_representatives(level), zero))

    @classmethod
    def delta(cls, level: LevelParams, rep: OrbitRep) -> SectionVector:
        values = dict(cls.zero(level).values)
        if rep not in values:
            raise LevelMismatchError(level.n, rep.n, "representative block")
        values[rep] = CycScalar.one(level.p)
        return cls(level, values)

    def __getitem__(self, rep: OrbitRep) -> CycScalar:
        return self.values[rep]

    def __add__(self, other: SectionVector) -> SectionVector:
        if other.level != self.level:
            raise LevelMismatchError(self.level.n, other.level.n, "section level")
        return SectionVector(self.level, {rep: v + other.values[rep] for rep, v in self.values.items()})

    def scale(self, c: CycScalar) -> SectionVector:
        return SectionVector(self.level, {rep: v * c for rep, v in self.values.items()})

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values.values())


@dataclass
class TransformMatrix:
    """Rows indexed by torus classes, columns by representatives."""

    level: LevelParams
    rows: list[TorusClass]
    cols: list[OrbitRep]
    entries: list[list[CycScalar]]

    def entry(self, x: TorusClass, rep: OrbitRep) -> CycScalar:
        return self.entries[self.rows.index(x)][self.cols.index(rep)]


def evaluate_section(f: SectionVector, g: GroupElem) -> CycScalar:
    """``f(g)`` through ``g = b a1`` and ``b a2 = M`` with ``M`` a representative."""
    level = f.level
    zero = CycScalar.zero(level.p)
    borel, a1 = decompose_BA(g)
    if borel.A.val != level.n:
        return zero
    reduced = reduce_to_representative(borel, level)
    if reduced is None:
        return zero
    rep, a2 = reduced
    value = f.values[rep]
    if value.is_zero():
        return value
    return value * chi_eval(a1, chi_sigma=level.chi_sigma) / chi_eval(a2, chi_sigma=level.chi_sigma)


def section_restrict(f: SectionVector, level: LevelParams) -> SectionVector:
    """Evaluate ``f`` on the representatives of ``level``."""
    return SectionVector(level, {rep: evaluate_section(f, rep.to_group()) for rep in _representatives(level)})


def _guard(what: str, size: int) -> None:
    if size > ENUMERATION_BOUND:
        raise EnumerationGuardError(what, size, ENUMERATION_BOUND)


def whittaker_functional(f: SectionVector) -> CycScalar:
    """Average of ``f([[1, u], [0, 1]]) psi(-u_0)`` over ``u`` in O/t^M."""
    level = f.level
    p, depth = level.p, level.depth
    _guard(f"O/t^{depth}", p**depth)
    total = CycScalar.zero(p)
    for u in iter_truncated(p, depth):
        value = evaluate_section(f, unipotent(u))
        if not value.is_zero():
            total += value * psi(-u.coefficient(0), p)
    return total / p**depth


def phi_apply(f: SectionVector, x: TorusClass, *, lift: Series | None = None) -> CycScalar:
    """``phi(f)(x)`` by direct summation over ``t^(1-k) O / t^M_int O``.

    ``lift`` may be any element of the class ``x``; the canonical lift is used by default.
    """
    level = f.level
    if x.n != level.n:
        raise LevelMismatchError(level.n, x.n, "torus valuation")
    p, k, depth = level.p, level.k, level.depth
    _guard(f"t^{1 - k}O/t^{depth}O", p ** (k - 1 + depth))
    if lift is None:
        lift = x.lift()
    elif torus_class_of(lift, k) != x:
        raise LevelMismatchError(str(x), str(torus_class_of(lift, k)), "torus class of the lift")
    zero = Series.zero(p)
    one = Series.one(p)
    total = CycScalar.zero(p)
    for u in iter_truncated(p, depth, low=1 - k):
        value = evaluate_section(f, GroupElem(lift, lift * u, zero, one))
        if not value.is_zero():
            total += value * psi(-u.coefficient(0), p)
    return total / p**depth


def phi_row(level: LevelParams, x: TorusClass, *, depth: int = DEFAULT_PHI_DEPTH) -> dict[OrbitRep, CycScalar]:
    """``phi(delta_M)(x)`` for every representative M in one pass over the integration box."""
    p, k = level.p, level.k
    row = dict.fromkeys(_representatives(level), CycScalar.zero(p))
    lift = x.lift()
    for u in iter_truncated(p, depth, low=1 - k):
        reduced = reduce_to_representative(BorelForm(lift, lift * u), level)
        if reduced is None:
            continue
        rep, corrector = reduced
        row[rep] += psi(-u.coefficient(0), p) / chi_eval(corrector, chi_sigma=level.chi_sigma)
    return {rep: value / p**depth for rep, value in row.items()}


def _phi_row_task(task: tuple[LevelParams, TorusClass, int]) -> list[CycScalar]:
    level, x, depth = task
    row = phi_row(level, x, depth=depth)
    return [row[rep] for rep in _representatives(level)]


def phi_matrix(level: LevelParams, *, depth: int | None = None, workers: int = 1) -> TransformMatrix:
    """The matrix of phi on the delta basis; ``depth=None`` uses the collapsed box ``t^(1-k)O / tO``."""
    box_depth = DEFAULT_PHI_DEPTH if depth is None else depth
    rows = enumerate_torus_classes(level)
    cols = enumerate_representatives(level)
    _guard("phi matrix integration points", len(rows) * level.p ** (level.k - 1 + box_depth))
    logger.debug("assembling phi matrix p=%d k=%d n=%d depth=%d", level.p, level.k, level.n, box_depth)
    tasks = [(level, x, box_depth) for x in rows]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            entries = list(executor.map(_phi_row_task, tasks))
    else:
        entries = [_phi_row_task(task) for task in tasks]
    return TransformMatrix(level, rows, cols, entries)


def kernel_eval(rep: OrbitRep, x: TorusClass) -> CycScalar:
    """``psi(-(b/x)_0)`` on matching leading coefficients, 0 elsewhere."""
    p = rep.p
    if x.n != rep.n or x.a_lead != rep.a_lead:
        return CycScalar.zero(p)
    b = rep.b_series()
    if b.is_exact_zero():
        return CycScalar.one(p)
    ratio = b * series_inv(x.lift(), rel_prec=rep.k + 1)
    return psi(-ratio.coefficient(0), p)


def kernel_matrix(level: LevelParams) -> TransformMatrix:
    rows = enumerate_torus_classes(level)
    cols = enumerate_representatives(level)
    return TransformMatrix(level, rows, cols, [[kernel_eval(rep, x) for rep in cols] for x in rows])


def matrix_blocks(matrix: TransformMatrix) -> dict[int, list[list[CycScalar]]]:
    """The square blocks on which row and column share a leading coefficient."""
    blocks: dict[int, list[list[CycScalar]]] = {}
    for a in range(1, matrix.level.p):
        row_ids = [i for i, x in enumerate(matrix.rows) if x.a_lead.value == a]
        col_ids = [j for j, rep in enumerate(matrix.cols) if rep.a_lead.value == a]
        blocks[a] = [[matrix.entries[i][j] for j in col_ids] for i in row_ids]
    return blocks


def off_block_zero(matrix: TransformMatrix) -> bool:
    return all(
        matrix.entries[i][j].is_zero()
        for i, x in enumerate(matrix.rows)
        for j, rep in enumerate(matrix.cols)
        if x.a_lead != rep.a_lead
    )


def block_determinants(matrix: TransformMatrix) -> dict[int, CycScalar]:
    return {a: exact_det(block, matrix.level.p) for a, block in matrix_blocks(matrix).items()}


def blocks_invertible(matrix: TransformMatrix) -> bool:
    return all(not det.is_zero() for det in block_determinants(matrix).values())


def translation_map(level: LevelParams, y: TorusClass) -> dict[OrbitRep, tuple[OrbitRep, CycScalar] | None]:
    """For each representative ``M'`` of block ``n + y.n``: the ``M`` and factor with ``y^-1 M' = M a``.

    ``(y.f)(M')`` is then ``f(M) chi(a)``; ``None`` marks points of irrelevant orbits.
    """
    if y.k != level.k:
        raise LevelMismatchError(level.k, y.k, "congruence level")
    target = level.at_block(level.n + y.n)
    lift = y.lift()
    zero = Series.zero(level.p)
    result: dict[OrbitRep, tuple[OrbitRep, CycScalar] | None] = {}
    for rep in _representatives(target):
        borel = rep.to_borel()
        # diag(1, y) [[A, B], [0, 1]] is a multiple of y^-1 [[A, B], [0, 1]]
        shifted, a1 = decompose_BA(GroupElem(borel.A, borel.B, zero, lift))
        reduced = reduce_to_representative(shifted, level)
        if reduced is None:
            result[rep] = None
            continue
        source, a2 = reduced
        factor = chi_eval(a1, chi_sigma=level.chi_sigma) / chi_eval(a2, chi_sigma=level.chi_sigma)
        result[rep] = (source, factor)
    return result


def torus_translate(f: SectionVector, y: TorusClass) -> SectionVector:
    """``(y.f)(g) = f(y^-1 g)``, a section at block ``n + y.n``."""
    level = f.level
    target = level.at_block(level.n + y.n)
    zero = CycScalar.zero(level.p)
    values = {}
    for rep, image in translation_map(level, y).items():
        values[rep] = zero if image is None else f.values[image[0]] * image[1]
    return SectionVector(target, values)


def apply_matrix(matrix: TransformMatrix, f: SectionVector) -> dict[TorusClass, CycScalar]:
    """``phi(f)`` on every torus class, from the matrix on the delta basis."""
    zero = CycScalar.zero(matrix.level.p)
    result = {}
    for x, row in zip(matrix.rows, matrix.entries, strict=True):
        total = zero
        for rep, entry in zip(matrix.cols, row, strict=True):
            value = f.values[rep]
            if not value.is_zero() and not entry.is_zero():
                total += value * entry
        result[x] = total
    return result


__all__ = [
    "SectionVector",
    "TorusClass",
    "TransformMatrix",
    "apply_matrix",
    "block_determinants",
    "blocks_invertible",
    "enumerate_representatives",
    "enumerate_torus_classes",
    "evaluate_section",
    "kernel_eval",
    "kernel_matrix",
    "matrix_blocks",
    "off_block_zero",
    "phi_apply",
    "phi_matrix",
    "phi_row",
    "section_restrict",
    "torus_class_of",
    "torus_div",
    "torus_mul",
    "torus_translate",
    "translation_map",
    "whittaker_functional",
]
