"""Configuration options for level computations, verification runs and scans.

Example:
    >>> level = LevelParams(p=3, k=2, n=0)
    >>> level.M_int
    4
    >>> level.raised().N_rel
    10
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, replace
from typing import Literal

from pgl2_whittaker.fqlaurent import DEFAULT_RELATIVE_PRECISION, check_prime

ChiSigma = Literal[1, -1]

ENUMERATION_BOUND = 10**7
"""Largest enumeration a scan or matrix assembly will attempt."""


@dataclass(frozen=True)
class LevelParams:
    """A finite level ``(p, k, n)`` together with its precision settings."""

    p: int
    """Prime characteristic of the residue field, in [2, 13]."""

    k: int
    """Congruence level: the torus is taken modulo ``1 + t^k O``."""

    n: int
    """Valuation block: representatives have upper-left entry of valuation ``n``."""

    N_rel: int = DEFAULT_RELATIVE_PRECISION
    """Relative precision used by parsing and series inversion."""

    M_int: int | None = None
    """Truncation depth of Haar integrals; ``None`` means ``k + 2``."""

    chi_sigma: ChiSigma = 1
    """Value of the character on sigma."""

    def __post_init__(self) -> None:
        check_prime(self.p)
        if self.k < 1:
            raise ValueError(f"congruence level k must be at least 1, got {self.k}")
        if self.M_int is None:
            object.__setattr__(self, "M_int", self.k + 2)
        if self.N_rel < self.k + 3:
            raise ValueError(f"relative precision N_rel={self.N_rel} must be at least k+3={self.k + 3}")
        if self.depth < self.k + 1:
            raise ValueError(f"integration depth M_int={self.M_int} must be at least k+1={self.k + 1}")
        if self.chi_sigma not in (1, -1):
            raise ValueError(f"chi_sigma must be +1 or -1, got {self.chi_sigma}")

    @property
    def depth(self) -> int:
        """``M_int`` as a plain integer."""
        return self.M_int if self.M_int is not None else self.k + 2

    @property
    def block_size(self) -> int:
        """``(p - 1) p^(k - 1)``, the size of both index sets of the transform."""
        return (self.p - 1) * self.p ** (self.k - 1)

    def raised(self, by: int = 2) -> LevelParams:
        return replace(self, N_rel=self.N_rel + by, M_int=self.depth + by)

    def with_chi_sigma(self, chi_sigma: ChiSigma) -> LevelParams:
        return replace(self, chi_sigma=chi_sigma)

    def at_block(self, n: int) -> LevelParams:
        return replace(self, n=n)

    def to_dict(self) -> dict[str, int]:
        return {"p": self.p, "k": self.k, "n": self.n, "N_rel": self.N_rel, "M_int": self.depth, "chi_sigma": self.chi_sigma}


@dataclass(frozen=True)
class ScanBounds:
    """Range of a double-coset scan."""

    p: int
    """Prime characteristic."""

    n_min: int = -2
    """Smallest valuation of the scanned coset representatives."""

    n_max: int = 2
    """Largest valuation of the scanned coset representatives (inclusive)."""

    depth: int = 2
    """Truncation ``M``: Iwahori parameters are enumerated modulo ``t^M``."""

    def __post_init__(self) -> None:
        check_prime(self.p)
        if self.depth < 1:
            raise ValueError(f"scan depth must be at least 1, got {self.depth}")

    @property
    def n_range(self) -> range:
        return range(self.n_min, self.n_max + 1)

    def to_dict(self) -> dict[str, int]:
        return asdict(self)


@dataclass
class VerifyOptions:
    """Settings of a verification run.

    Example:
        >>> options = VerifyOptions(trials=20, seed=7)
        >>> options.include_timing
        False
    """

    trials: int | None = None
    """Number of random instances drawn by randomized suites; ``None`` uses each suite's default."""

    seed: int = 0
    """Seed of the per-suite ``random.Random`` instance."""

    workers: int = 1
    """Process count for suites and matrix rows; 1 runs everything in-process."""

    include_timing: bool = False
    """Record wall-clock runtimes in reports; off keeps reports byte-identical across runs."""

    scan: ScanBounds | None = None
    """Bounds for the double-coset scan; ``None`` uses the level's prime with default bounds."""

    stability: bool = True
    """Re-run suites at raised precision and under the opposite sigma sign."""

    claims: list[str] | None = None
    """Restrict ``run_all`` to these claim ids; ``None`` means every registered claim."""

    def scan_bounds(self, p: int) -> ScanBounds:
        if self.scan is not None:
            return self.scan
        # depth 2 needs p^8 Iwahori parameters per point
        if p**8 <= ENUMERATION_BOUND:
            return ScanBounds(p=p)
        return ScanBounds(p=p, n_min=-1, n_max=1, depth=1)
