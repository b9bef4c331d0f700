from __future__ import annotations

import pytest

from pgl2_whittaker.exceptions import NotPrimeError
from pgl2_whittaker.options import ENUMERATION_BOUND, LevelParams, ScanBounds, VerifyOptions


class TestLevelParams:
    def test_defaults(self) -> None:
        level = LevelParams(p=5, k=3, n=-1)
        assert level.N_rel == 8
        assert level.M_int == 5
        assert level.depth == 5
        assert level.chi_sigma == 1
        assert level.block_size == 4 * 25

    @pytest.mark.parametrize(
        "kwargs,match",
        [
            ({"p": 3, "k": 0, "n": 0}, "congruence level"),
            ({"p": 3, "k": 6, "n": 0}, "relative precision"),
            ({"p": 3, "k": 2, "n": 0, "N_rel": 2}, "relative precision"),
            ({"p": 3, "k": 2, "n": 0, "M_int": 2}, "integration depth"),
            ({"p": 3, "k": 2, "n": 0, "chi_sigma": 2}, "chi_sigma"),
        ],
    )
    def test_rejects_invalid_settings(self, kwargs: dict[str, int], match: str) -> None:
        with pytest.raises(ValueError, match=match):
            LevelParams(**kwargs)  # type: ignore[arg-type]

    @pytest.mark.parametrize("p", [4, 15, 17])
    def test_rejects_unsupported_prime(self, p: int) -> None:
        with pytest.raises(NotPrimeError):
            LevelParams(p=p, k=1, n=0)

    def test_variants(self) -> None:
        level = LevelParams(p=3, k=2, n=0)
        raised = level.raised()
        assert (raised.N_rel, raised.M_int) == (10, 6)
        assert level.with_chi_sigma(-1).chi_sigma == -1
        assert level.at_block(2).n == 2
        assert level.to_dict() == {"p": 3, "k": 2, "n": 0, "N_rel": 8, "M_int": 4, "chi_sigma": 1}


class TestScanBounds:
    def test_range_is_inclusive(self) -> None:
        assert list(ScanBounds(p=3, n_min=-1, n_max=1).n_range) == [-1, 0, 1]

    def test_rejects_zero_depth(self) -> None:
        with pytest.raises(ValueError, match="depth"):
            ScanBounds(p=3, depth=0)


class TestVerifyOptions:
    def test_explicit_scan_wins(self) -> None:
        bounds = ScanBounds(p=2, depth=3)
        assert VerifyOptions(scan=bounds).scan_bounds(5) is bounds

    def test_default_scan_fits_the_bound(self) -> None:
        assert VerifyOptions().scan_bounds(7) == ScanBounds(p=7)
        large = VerifyOptions().scan_bounds(11)
        assert large.depth == 1
        assert 11 ** (4 * large.depth) <= ENUMERATION_BOUND

    def test_trials_default_to_each_suite(self) -> None:
        assert VerifyOptions().trials is None
        assert VerifyOptions(trials=5).trials == 5
