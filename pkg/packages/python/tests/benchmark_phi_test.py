from __future__ import annotations

from typing import TYPE_CHECKING

import pytest

from pgl2_whittaker import LevelParams
from pgl2_whittaker.model import kernel_matrix, phi_matrix
from pgl2_whittaker.options import ScanBounds
from pgl2_whittaker.orbits import double_coset_scan

if TYPE_CHECKING:
    from pytest_benchmark.fixture import BenchmarkFixture


class TestBenchmarkMatrices:
    @pytest.mark.benchmark(group="matrices")
    def test_benchmark_phi_p3_k2(self, benchmark: BenchmarkFixture) -> None:
        matrix = benchmark(phi_matrix, LevelParams(p=3, k=2, n=0))
        assert len(matrix.rows) == 6

    @pytest.mark.benchmark(group="matrices")
    def test_benchmark_phi_p5_k2(self, benchmark: BenchmarkFixture) -> None:
        matrix = benchmark(phi_matrix, LevelParams(p=5, k=2, n=0))
        assert len(matrix.rows) == 20

    @pytest.mark.benchmark(group="matrices")
    def test_benchmark_kernel_p5_k2(self, benchmark: BenchmarkFixture) -> None:
        matrix = benchmark(kernel_matrix, LevelParams(p=5, k=2, n=0))
        assert len(matrix.cols) == 20


class TestBenchmarkScan:
    @pytest.mark.benchmark(group="scan")
    def test_benchmark_scan_p2(self, benchmark: BenchmarkFixture) -> None:
        report = benchmark(double_coset_scan, ScanBounds(p=2, n_min=-1, n_max=1, depth=2))
        assert len(report.passing_orbits) == 1
