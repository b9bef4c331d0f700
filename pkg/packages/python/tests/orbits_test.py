from __future__ import annotations

from typing import TYPE_CHECKING

import pytest

from pgl2_whittaker.cycnum import CycScalar, psi
from pgl2_whittaker.exceptions import EnumerationGuardError, LevelMismatchError
from pgl2_whittaker.fqlaurent import PrimeField, Series, series_inv
from pgl2_whittaker.group import (
    BorelForm,
    a_factor,
    borel_to_group,
    identity,
    mat_mul,
    parse_matrix,
    reassemble_a,
    sigma,
)
from pgl2_whittaker.harness import random_borel, random_group_elem, random_iwahori0
from pgl2_whittaker.options import LevelParams, ScanBounds
from pgl2_whittaker.orbits import (
    DoubleCosetPoint,
    OrbitRep,
    a_by_a_orbit_label,
    cuspidality_witness,
    decompose_BA,
    decomposition_case,
    double_coset_multiplier,
    double_coset_scan,
    orbit_rep_from_borel,
    reduce_to_representative,
    relevance_bruteforce,
    relevance_closed_form,
    relevance_obstruction,
    representatives_connected,
)

if TYPE_CHECKING:
    import random
    from collections.abc import Callable


def point(shape: str, n: int, a: int, p: int) -> DoubleCosetPoint:
    return DoubleCosetPoint(shape, n, PrimeField(p, a))  # type: ignore[arg-type]


class TestDecomposition:
    def test_lower_right_zero_uses_sigma(self) -> None:
        g = parse_matrix("t;1;t;0", 3)
        assert decomposition_case(g) == 3
        borel, a = decompose_BA(g)
        assert borel.A == Series.one(3)
        assert borel.B == Series.one(3)
        assert a.sigma_power == 1
        assert reassemble_a(a) == sigma(3)

    def test_upper_triangular(self, poly: Callable[..., Series]) -> None:
        g = parse_matrix("t;2;0;1", 5)
        assert decomposition_case(g) == 1
        borel, a = decompose_BA(g)
        assert (borel.A, borel.B) == (poly(5, 1, 1), poly(5, 0, 2))
        assert reassemble_a(a) == identity(5)

    def test_lower_left_of_higher_valuation(self, poly: Callable[..., Series]) -> None:
        g = parse_matrix("1;1;t;1", 2)
        assert decomposition_case(g) == 2
        borel, a = decompose_BA(g)
        assert borel.A == poly(2, 0, 1, 1)
        assert borel.B == Series.one(2)
        assert a.sigma_power == 0
        assert mat_mul(borel_to_group(borel), reassemble_a(a), canonical=False) == g

    @pytest.mark.parametrize("case", [1, 2, 3, None])
    def test_multiplies_back(self, rng: random.Random, case: int | None) -> None:
        for p in (2, 3, 5):
            for _ in range(15):
                g = random_group_elem(rng, p, case)
                if case is not None:
                    assert decomposition_case(g) == case
                borel, a = decompose_BA(g)
                assert a_factor(reassemble_a(a)) is not None
                assert mat_mul(borel_to_group(borel), reassemble_a(a), canonical=False) == g


class TestReduction:
    def test_reduces_into_window(self, poly: Callable[..., Series], rep: Callable[..., OrbitRep]) -> None:
        level = LevelParams(p=3, k=3, n=1)
        b = BorelForm(poly(3, 1, 1, 1), poly(3, -1, 1))
        reduced = reduce_to_representative(b, level)
        assert reduced is not None
        found, corrector = reduced
        assert found == rep(3, 1, 1, 1, 0)
        assert corrector.iwahori.a == -series_inv(poly(3, 0, 1, 1))
        assert corrector.iwahori.b.is_exact_zero()
        assert mat_mul(borel_to_group(b), reassemble_a(corrector), canonical=False) == found.to_group()

    def test_irrelevant_orbit(self, poly: Callable[..., Series]) -> None:
        level = LevelParams(p=3, k=1, n=0)
        assert reduce_to_representative(BorelForm(Series.one(3), poly(3, -1, 1)), level) is None

    def test_representative_is_fixed(self, rep: Callable[..., OrbitRep]) -> None:
        level = LevelParams(p=5, k=3, n=-2)
        r = rep(5, -2, 3, 4, 1)
        reduced = reduce_to_representative(r.to_borel(), level)
        assert reduced is not None
        assert reduced[0] == r
        assert reassemble_a(reduced[1]) == identity(5)
        assert orbit_rep_from_borel(r.to_borel(), 3) == r

    def test_block_mismatch(self, poly: Callable[..., Series]) -> None:
        with pytest.raises(LevelMismatchError):
            reduce_to_representative(BorelForm(poly(3, 2, 1), Series.zero(3)), LevelParams(p=3, k=2, n=0))

    def test_orbit_rep_from_borel_rejects_non_representatives(self, poly: Callable[..., Series]) -> None:
        assert orbit_rep_from_borel(BorelForm(poly(3, 0, 1, 1), Series.zero(3)), 2) is None
        assert orbit_rep_from_borel(BorelForm(poly(3, 0, 1), poly(3, 0, 1)), 2) is None

    def test_widen(self, rep: Callable[..., OrbitRep]) -> None:
        r = rep(3, 0, 2, 1)
        wide = r.widen()
        assert wide.k == 3
        assert wide.to_group() == r.to_group()
        assert str(r) == "n=0 a=2 b=(1)"


class TestRelevance:
    @pytest.mark.parametrize(
        "b_exp,expected",
        [
            (-1, True),
            (-2, False),
            (None, True),
        ],
    )
    def test_closed_form_and_search_agree(self, poly: Callable[..., Series], b_exp: int | None, expected: bool) -> None:
        level = LevelParams(p=3, k=2, n=0)
        b = BorelForm(Series.one(3), Series.zero(3) if b_exp is None else poly(3, b_exp, 1))
        assert relevance_closed_form(b, 2) is expected
        assert relevance_bruteforce(b, level) is expected

    def test_zero_translation_at_level_one(self, poly: Callable[..., Series]) -> None:
        b = BorelForm(poly(2, 1, 1), Series.zero(2))
        assert relevance_bruteforce(b, LevelParams(p=2, k=1, n=1))

    def test_obstruction_is_nontrivial(self, poly: Callable[..., Series]) -> None:
        found = relevance_obstruction(BorelForm(Series.one(5), poly(5, -2, 1)), LevelParams(p=5, k=2, n=0))
        assert found is not None
        x, value = found
        assert value != CycScalar.one(5)
        assert value == psi(-x.coefficient(0), 5)

    def test_random_borel_elements(self, rng: random.Random) -> None:
        level = LevelParams(p=2, k=2, n=0)
        for _ in range(20):
            b = random_borel(rng, 2, n=0)
            assert relevance_closed_form(b, 2) == relevance_bruteforce(b, level)


class TestDoubleCosets:
    def test_identity_has_trivial_multiplier(self, rng: random.Random) -> None:
        for _ in range(10):
            assert double_coset_multiplier(point("diagonal", 0, 1, 3), random_iwahori0(rng, 3)) == CycScalar.one(3)

    def test_labels(self) -> None:
        assert a_by_a_orbit_label(point("antidiagonal", -1, 1, 3)) == point("diagonal", 0, 1, 3)
        assert a_by_a_orbit_label(point("diagonal", -2, 2, 5)) == point("diagonal", 2, 3, 5)
        assert a_by_a_orbit_label(point("diagonal", 0, 3, 5)) == point("diagonal", 0, 2, 5)
        assert a_by_a_orbit_label(point("antidiagonal", 1, 1, 5)) == point("diagonal", 2, 1, 5)

    def test_p2_scan(self) -> None:
        report = double_coset_scan(ScanBounds(p=2, n_min=-2, n_max=2, depth=3))
        assert report.passing_orbits == [point("diagonal", 0, 1, 2)]
        assert point("diagonal", 0, 1, 2) in report.passing_points
        assert len(report.results) == 10

    @pytest.mark.slow
    def test_p3_scan(self) -> None:
        report = double_coset_scan(ScanBounds(p=3, n_min=-1, n_max=1, depth=2))
        assert report.passing_orbits == [point("diagonal", 0, 1, 3)]
        failing = [r for r in report.results if not r.passes]
        assert all(r.witness is not None and r.witness_value != CycScalar.one(3) for r in failing)

    def test_empty_range(self) -> None:
        assert double_coset_scan(ScanBounds(p=3, n_min=1, n_max=0)).results == []

    def test_guard(self) -> None:
        with pytest.raises(EnumerationGuardError):
            double_coset_scan(ScanBounds(p=13, depth=2))


def test_representatives_are_not_connected(rep: Callable[..., OrbitRep]) -> None:
    level = LevelParams(p=2, k=2, n=0)
    assert representatives_connected(rep(2, 0, 1, 0), rep(2, 0, 1, 1), level) is None
    assert representatives_connected(rep(2, 0, 1, 1), rep(2, 0, 1, 1), level) is not None


def test_cuspidality_witness(rng: random.Random) -> None:
    for p in (2, 3, 7):
        for _ in range(10):
            witness = cuspidality_witness(random_borel(rng, p))
            assert witness.chi == psi(1, p)
