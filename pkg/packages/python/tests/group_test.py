from __future__ import annotations

from typing import TYPE_CHECKING

import pytest

from pgl2_whittaker.cycnum import CycScalar, psi
from pgl2_whittaker.exceptions import InvertibilityError, NotBorelError, PrecisionError, SeriesSyntaxError
from pgl2_whittaker.fqlaurent import Series
from pgl2_whittaker.group import (
    AElem,
    GroupElem,
    Iwahori0Params,
    a_chi_fast,
    a_factor,
    canonicalize,
    chi_eval,
    conjugate_by_sigma,
    identity,
    iter_truncated,
    iwahori0_chi_fast,
    iwahori0_params,
    mat_inv,
    mat_mul,
    parse_matrix,
    projectively_equal,
    reassemble_a,
    reassemble_iwahori0,
    sigma,
    to_borel_form,
    unipotent,
)
from pgl2_whittaker.harness import random_group_elem, random_iwahori0

if TYPE_CHECKING:
    import random
    from collections.abc import Callable


def matrix(p: int, *entries: str) -> GroupElem:
    return parse_matrix(";".join(entries), p)


class TestCanonicalize:
    def test_scalar_matrix_is_identity(self, poly: Callable[..., Series]) -> None:
        t = poly(3, 1, 1)
        g = canonicalize(GroupElem(t, Series.zero(3), Series.zero(3), t))
        assert g.entries == identity(3).entries

    def test_divides_by_first_minimal_entry(self, poly: Callable[..., Series]) -> None:
        g = canonicalize(GroupElem(poly(3, 0, 2), Series.zero(3), Series.zero(3), Series.one(3)))
        assert g.m11 == Series.one(3)
        assert g.m22 == poly(3, 0, 2)

    def test_idempotent(self, rng: random.Random) -> None:
        g = canonicalize(random_group_elem(rng, 5))
        assert canonicalize(g) is g

    def test_singular_matrix(self) -> None:
        one = Series.one(3)
        with pytest.raises(InvertibilityError):
            canonicalize(GroupElem(one, one, one, one))


class TestProducts:
    def test_sigma_is_an_involution(self) -> None:
        assert mat_mul(sigma(3), sigma(3)) == identity(3)

    def test_identity_is_neutral(self, rng: random.Random) -> None:
        g = random_group_elem(rng, 3)
        assert mat_mul(identity(3), g) == g

    def test_unipotent_product(self) -> None:
        one = Series.one(3)
        product = mat_mul(unipotent(one), unipotent(one))
        assert product == unipotent(one + one)

    def test_inverse(self, rng: random.Random) -> None:
        for _ in range(10):
            g = random_group_elem(rng, 5)
            assert mat_mul(g, mat_inv(g)) == identity(5)

    def test_projective_equality(self, rng: random.Random, poly: Callable[..., Series]) -> None:
        g = random_group_elem(rng, 3)
        scalar = poly(3, -2, 2, 1)
        scaled = GroupElem(*(e * scalar for e in g.entries))
        assert projectively_equal(g, scaled)
        assert g == scaled
        assert g != mat_mul(g, sigma(3), canonical=False)


class TestBorel:
    def test_to_borel_form(self, poly: Callable[..., Series]) -> None:
        b = to_borel_form(matrix(3, "t", "1", "0", "2"))
        assert b.A == poly(3, 1, 2)
        assert b.B == poly(3, 0, 2)

    def test_identity(self) -> None:
        b = to_borel_form(identity(2))
        assert b.A == Series.one(2)
        assert b.B.is_exact_zero()

    def test_lower_entry_rejected(self) -> None:
        with pytest.raises(NotBorelError):
            to_borel_form(matrix(3, "1", "0", "t", "1"))


class TestIwahori:
    def test_reads_parameters(self, poly: Callable[..., Series]) -> None:
        params = iwahori0_params(matrix(3, "1+t", "1", "2*t", "1"))
        assert params == Iwahori0Params(poly(3, 0, 1), poly(3, 0, 1), poly(3, 0, 2), Series.zero(3))

    def test_projective_rescale(self, poly: Callable[..., Series]) -> None:
        params = iwahori0_params(matrix(5, "2+2*t", "2", "4*t", "2"))
        assert params == Iwahori0Params(poly(5, 0, 1), poly(5, 0, 1), poly(5, 0, 2), Series.zero(5))

    def test_sigma_is_not_in_i0(self) -> None:
        assert iwahori0_params(sigma(3)) is None

    def test_a_factor(self) -> None:
        factor = a_factor(sigma(3))
        assert factor is not None
        assert factor.sigma_power == 1
        assert factor.iwahori == Iwahori0Params.zero(3)

        factor = a_factor(identity(3))
        assert factor == AElem(0, Iwahori0Params.zero(3))

        assert a_factor(matrix(3, "1", "t^-1", "0", "1")) is None

    def test_reassembly_inverts_parameters(self, rng: random.Random) -> None:
        for _ in range(20):
            params = random_iwahori0(rng, 5)
            g = reassemble_iwahori0(params)
            read = iwahori0_params(g)
            assert read is not None
            assert reassemble_iwahori0(read) == g

    def test_sigma_conjugation_swaps_parameters(self, rng: random.Random) -> None:
        for _ in range(20):
            x = random_iwahori0(rng, 3)
            swapped = Iwahori0Params(x.d, x.c, x.b, x.a)
            assert conjugate_by_sigma(reassemble_iwahori0(x)) == reassemble_iwahori0(swapped)


class TestCharacter:
    def test_reads_constant_terms(self, poly: Callable[..., Series]) -> None:
        params = Iwahori0Params(poly(5, 0, 1), poly(5, 0, 1, 2), poly(5, 0, 3), Series.zero(5))
        assert chi_eval(AElem(0, params)) == CycScalar.zeta(5, 4)

    def test_identity_and_sigma(self) -> None:
        assert chi_eval(AElem(0, Iwahori0Params.zero(3))) == CycScalar.one(3)
        assert chi_eval(AElem(1, Iwahori0Params.zero(3))) == CycScalar.one(3)
        assert chi_eval(AElem(1, Iwahori0Params.zero(3)), chi_sigma=-1) == CycScalar.from_int(3, -1)

    def test_fast_path_agrees(self, rng: random.Random) -> None:
        for _ in range(30):
            params = random_iwahori0(rng, 7)
            g = reassemble_iwahori0(params)
            assert iwahori0_chi_fast(g) == chi_eval(AElem(0, params))
            h = reassemble_a(AElem(1, params))
            assert a_chi_fast(h, chi_sigma=-1) == -chi_eval(AElem(0, params))

    def test_homomorphism_on_i0(self, rng: random.Random) -> None:
        for trial in range(1000):
            p = (2, 3, 5, 7)[trial % 4]
            x, y = AElem(0, random_iwahori0(rng, p)), AElem(0, random_iwahori0(rng, p))
            product = a_factor(mat_mul(reassemble_a(x), reassemble_a(y), canonical=False))
            assert product is not None
            assert product.sigma_power == 0
            assert chi_eval(product) == chi_eval(x) * chi_eval(y)

    @pytest.mark.parametrize("chi_sigma", [1, -1])
    def test_homomorphism_on_a(self, rng: random.Random, chi_sigma: int) -> None:
        for _ in range(100):
            x = AElem(rng.choice([0, 1]), random_iwahori0(rng, 3))
            y = AElem(rng.choice([0, 1]), random_iwahori0(rng, 3))
            product = a_factor(mat_mul(reassemble_a(x), reassemble_a(y), canonical=False))
            assert product is not None
            expected = chi_eval(x, chi_sigma=chi_sigma) * chi_eval(y, chi_sigma=chi_sigma)  # type: ignore[arg-type]
            assert chi_eval(product, chi_sigma=chi_sigma) == expected  # type: ignore[arg-type]

    def test_outside_a(self) -> None:
        assert a_chi_fast(matrix(3, "1", "t^-1", "0", "1")) is None
        assert iwahori0_chi_fast(unipotent(Series.one(3))) == psi(1, 3)


class TestParsing:
    def test_parse(self, poly: Callable[..., Series]) -> None:
        g = matrix(3, "t+t^2", "t^-1", "0", "1")
        assert g.m11 == poly(3, 1, 1, 1)
        assert g.m21.is_exact_zero()

    def test_wrong_entry_count(self) -> None:
        with pytest.raises(SeriesSyntaxError):
            parse_matrix("1;0;1", 3)

    def test_singular_at_parse_precision(self) -> None:
        with pytest.raises(PrecisionError):
            parse_matrix("1;1;1;1", 3)


def test_iter_truncated_order(poly: Callable[..., Series]) -> None:
    assert list(iter_truncated(2, 2)) == [Series.zero(2), poly(2, 1, 1), Series.one(2), poly(2, 0, 1, 1)]
    assert len(list(iter_truncated(3, 1, low=-1))) == 9
    assert list(iter_truncated(3, 0)) == [Series.zero(3)]
