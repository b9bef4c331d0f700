from __future__ import annotations

import random
from typing import TYPE_CHECKING

import pytest

from pgl2_whittaker import LevelParams, Series, VerifyOptions
from pgl2_whittaker.fqlaurent import PrimeField
from pgl2_whittaker.orbits import OrbitRep

if TYPE_CHECKING:
    from collections.abc import Callable


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


@pytest.fixture
def level_p2_k2() -> LevelParams:
    return LevelParams(p=2, k=2, n=0)


@pytest.fixture
def level_p3_k2() -> LevelParams:
    return LevelParams(p=3, k=2, n=0)


@pytest.fixture
def quick_options() -> VerifyOptions:
    return VerifyOptions(trials=10, seed=7, stability=False)


@pytest.fixture
def poly() -> Callable[..., Series]:
    """Exact Laurent polynomial ``t^val * sum(c_i t^i)``."""

    def _poly(p: int, val: int, *coeffs: int) -> Series:
        return Series.from_coeffs(p, val, coeffs)

    return _poly


@pytest.fixture
def rep() -> Callable[..., OrbitRep]:
    def _rep(p: int, n: int, a: int, *window: int) -> OrbitRep:
        return OrbitRep(n, PrimeField(p, a), tuple(PrimeField(p, b) for b in window))

    return _rep
