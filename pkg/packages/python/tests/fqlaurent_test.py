from __future__ import annotations

import math
from typing import TYPE_CHECKING

import pytest

from pgl2_whittaker.exceptions import (
    InvertibilityError,
    ModulusMismatchError,
    NotPrimeError,
    PrecisionError,
    SeriesSyntaxError,
)
from pgl2_whittaker.fqlaurent import (
    PrimeField,
    Series,
    check_prime,
    get_relative_precision,
    parse_series,
    relative_precision,
    render_series,
    series_add,
    series_coeff,
    series_inv,
    series_mul,
    series_val,
)

if TYPE_CHECKING:
    import random
    from collections.abc import Callable


class TestParse:
    def test_normalizes_terms(self) -> None:
        x = parse_series("t^-1+2*t", 3)
        assert x.val == -1
        assert x.coeffs == (1, 0, 2)

    @pytest.mark.parametrize(
        "text,p",
        [
            ("0", 2),
            ("3*t^2", 3),
            ("5*t^-3", 5),
        ],
    )
    def test_vanishing_coefficients_give_exact_zero(self, text: str, p: int) -> None:
        x = parse_series(text, p)
        assert x.kind == "exact-zero"
        assert series_val(x) == math.inf

    def test_whitespace_and_repeated_exponents(self) -> None:
        x = parse_series(" 1 + t + 2*t ", 3)
        assert x.coeffs == (1,)

    def test_result_carries_session_precision(self) -> None:
        assert parse_series("t^-1", 3).abs_prec == -1 + get_relative_precision()
        with relative_precision(3):
            assert parse_series("1+t", 3).abs_prec == 3
        assert get_relative_precision() == 8

    @pytest.mark.parametrize("text", ["", "t^", "2*", "1-t", "t^x", "1++t"])
    def test_rejects_malformed_input(self, text: str) -> None:
        with pytest.raises(SeriesSyntaxError):
            parse_series(text, 3)

    @pytest.mark.parametrize("p", [1, 4, 9, 17])
    def test_rejects_unsupported_modulus(self, p: int) -> None:
        with pytest.raises(NotPrimeError):
            check_prime(p)

    def test_render_matches_grammar(self) -> None:
        assert render_series(parse_series("t^-1+2*t", 3)) == "t^-1 + 2*t + O(t^7)"
        assert render_series(Series.from_coeffs(3, -1, [1, 0, 2])) == "t^-1 + 2*t"
        assert render_series(Series.zero(2)) == "0"


class TestArithmetic:
    def test_addition(self, poly: Callable[..., Series]) -> None:
        assert poly(3, 0, 1, 1) + poly(3, 0, 1, 2) == poly(3, 0, 2)

    def test_leading_cancellation_raises_valuation(self, poly: Callable[..., Series]) -> None:
        total = poly(3, 0, 1, 1) + poly(3, 0, 2)
        assert total == poly(3, 1, 1)
        assert total.val == 1

    def test_exact_zero_is_additive_identity(self, poly: Callable[..., Series]) -> None:
        x = poly(5, -2, 3, 0, 1)
        assert x + Series.zero(5) == x
        assert x - x == Series.zero(5)

    def test_multiplication(self, poly: Callable[..., Series]) -> None:
        assert poly(3, 1, 1, 1) * poly(3, -1, 1) == poly(3, 0, 1, 1)
        assert poly(3, 0, 1, 1) * poly(3, 0, 1, 2) == poly(3, 0, 1, 0, 2)
        assert poly(3, 2, 2) * Series.one(3) == poly(3, 2, 2)

    def test_product_relative_precision_is_the_smaller_one(self, poly: Callable[..., Series]) -> None:
        x = poly(2, 0, 1, 1).truncate(4)
        product = x * poly(2, 3, 1)
        assert product.val == 3
        assert product.rel_prec == 4

    def test_named_operations(self, poly: Callable[..., Series]) -> None:
        x, y = poly(5, -1, 1, 2), poly(5, 1, 3).truncate(4)
        total = series_add(x, y)
        assert total == poly(5, -1, 1, 2, 3)
        assert total.abs_prec == 4
        assert series_mul(x, y) == poly(5, 0, 3, 1)
        assert series_mul(x, Series.zero(5)).is_exact_zero()

    def test_moduli_must_agree(self) -> None:
        with pytest.raises(ModulusMismatchError):
            Series.one(2) + Series.one(3)


class TestInverse:
    def test_geometric_series(self, poly: Callable[..., Series]) -> None:
        inverse = series_inv(poly(2, 0, 1, 1))
        assert inverse.coeffs == (1,) * 8
        assert inverse * poly(2, 0, 1, 1) == Series.one(2)

    def test_monomials_stay_exact(self, poly: Callable[..., Series]) -> None:
        assert series_inv(poly(3, 2, 1)) == poly(3, -2, 1)
        assert series_inv(poly(3, 2, 1)).is_exact()
        assert series_inv(poly(3, 0, 2)) == poly(3, 0, 2)

    def test_coefficient_of_inverse(self, poly: Callable[..., Series]) -> None:
        assert series_coeff(series_inv(poly(3, 0, 1, 1)), 1) == PrimeField(3, 2)

    def test_explicit_relative_precision(self, poly: Callable[..., Series]) -> None:
        inverse = series_inv(poly(5, 1, 1, 2), rel_prec=3)
        assert inverse.val == -1
        assert inverse.abs_prec == 2

    def test_zero_is_not_invertible(self) -> None:
        with pytest.raises(InvertibilityError):
            series_inv(Series.zero(3))
        with pytest.raises(InvertibilityError):
            series_inv(Series.zero(3, abs_prec=5))


class TestPrecision:
    def test_valuation(self, poly: Callable[..., Series]) -> None:
        assert series_val(poly(5, 2, 1, 1)) == 2
        assert series_val(Series.zero(5)) == math.inf

    def test_zero_modulo_a_power_has_no_valuation(self) -> None:
        with pytest.raises(PrecisionError):
            series_val(Series.zero(3, abs_prec=4))

    def test_coefficient_beyond_precision(self, poly: Callable[..., Series]) -> None:
        x = poly(3, 0, 1, 2).truncate(2)
        assert x.coefficient(1) == 2
        with pytest.raises(PrecisionError):
            x.coefficient(2)

    def test_equality_within_common_precision(self, poly: Callable[..., Series]) -> None:
        assert poly(2, 0, 1, 1, 1).truncate(2) == poly(2, 0, 1, 1)
        assert poly(2, 0, 1, 1, 1).truncate(2) != poly(2, 0, 1)

    def test_windows(self, poly: Callable[..., Series]) -> None:
        x = poly(3, -1, 1, 2, 1)
        assert x.low(0) == poly(3, -1, 1)
        assert x.high(0) == poly(3, 0, 2, 1)
        assert x.shift(2) == poly(3, 1, 1, 2, 1)
        assert x.scale(2) == poly(3, -1, 2, 1, 2)
        assert list(x.terms()) == [(-1, 1), (0, 2), (1, 1)]

    def test_ring_of_integers(self, poly: Callable[..., Series]) -> None:
        assert poly(3, 0, 1).in_ring_of_integers()
        assert not poly(3, -1, 1).in_ring_of_integers()
        assert Series.zero(3, abs_prec=2).in_ring_of_integers()


class TestPrimeField:
    def test_reduction_and_arithmetic(self) -> None:
        assert PrimeField(5, 7).value == 2
        assert PrimeField(5, 2) / 3 == PrimeField(5, 4)
        assert -PrimeField(5, 1) == PrimeField(5, 4)
        assert int(PrimeField(3, 2) * PrimeField(3, 2)) == 1

    def test_zero_has_no_inverse(self) -> None:
        with pytest.raises(InvertibilityError):
            PrimeField(7, 0).inverse()

    def test_moduli_must_agree(self) -> None:
        with pytest.raises(ModulusMismatchError):
            PrimeField(3, 1) + PrimeField(5, 1)


def random_laurent(rng: random.Random, p: int, *, unit: bool = False) -> Series:
    val = 0 if unit else rng.randint(-3, 3)
    coeffs = [rng.randrange(1, p)] + [rng.randrange(p) for _ in range(rng.randint(0, 5))]
    return Series.from_coeffs(p, val, coeffs)


class TestRingAxioms:
    @pytest.mark.parametrize("p", [2, 3, 7])
    def test_commutative_ring(self, rng: random.Random, p: int) -> None:
        for _ in range(200):
            x, y, z = (random_laurent(rng, p) for _ in range(3))
            assert x + y == y + x
            assert x * y == y * x
            assert (x + y) + z == x + (y + z)
            assert (x * y) * z == x * (y * z)
            assert x * (y + z) == x * y + x * z
            assert (x - x).is_exact_zero()

    @pytest.mark.parametrize("p", [2, 5, 13])
    def test_inverse_of_a_thousand_elements(self, rng: random.Random, p: int) -> None:
        for _ in range(1000):
            x = random_laurent(rng, p)
            inverse = series_inv(x)
            assert inverse.val == -x.val
            assert x * inverse == Series.one(p)

    def test_raising_precision_refines_the_inverse(self, rng: random.Random) -> None:
        for _ in range(100):
            x = random_laurent(rng, 3, unit=True)
            coarse, fine = series_inv(x, rel_prec=8), series_inv(x, rel_prec=10)
            assert coarse.abs_prec <= fine.abs_prec
            assert coarse == fine

    def test_raising_precision_refines_parsing(self) -> None:
        text = "2*t^-2 + t + 1"
        with relative_precision(8):
            coarse = parse_series(text, 5)
        with relative_precision(12):
            fine = parse_series(text, 5)
        assert coarse.abs_prec == 6
        assert fine.abs_prec == 10
        assert coarse == fine
        assert series_inv(coarse) == series_inv(fine)
