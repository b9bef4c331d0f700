"""High-level Python API over the level computations and verification suites."""

from __future__ import annotations

import csv
import io
import json
from typing import TYPE_CHECKING, Literal

from pgl2_whittaker.cycnum import cyc_to_json, render_cyc
from pgl2_whittaker.exceptions import PrecisionError
from pgl2_whittaker.fqlaurent import relative_precision
from pgl2_whittaker.group import a_factor, mat_inv, mat_mul, parse_matrix, reassemble_a
from pgl2_whittaker.harness import ClaimReport, render_params, run_all, run_claim_suite, stability_sweep
from pgl2_whittaker.model import TransformMatrix, kernel_matrix, phi_matrix
from pgl2_whittaker.options import LevelParams, ScanBounds, VerifyOptions
from pgl2_whittaker.orbits import OrbitRep, ScanReport, decompose_BA, double_coset_scan, reduce_to_representative

if TYPE_CHECKING:
    from pgl2_whittaker.group import AElem

MatrixFormat = Literal["json", "csv"]
MatrixKind = Literal["phi", "kernel"]


def verify(claim_id: str, level: LevelParams, options: VerifyOptions | None = None) -> list[ClaimReport]:
    """Run one claim suite, or every suite for ``"all"``.

    Args:
        claim_id: A key of ``harness.SUITES`` or ``"all"``.
        level: The level the suites run at.
        options: Run settings; ``None`` uses the defaults.

    Returns:
        The reports in registry order.

    Raises:
        UnknownClaimError: If ``claim_id`` names no suite.
    """
    options = options if options is not None else VerifyOptions()
    with relative_precision(level.N_rel):
        if claim_id == "all":
            return run_all(level, options)
        if options.stability:
            return [stability_sweep(claim_id, level, options=options)]
        return [run_claim_suite(claim_id, level, options=options)]


def build_matrix(kind: MatrixKind, level: LevelParams, *, workers: int = 1) -> TransformMatrix:
    with relative_precision(level.N_rel):
        if kind == "kernel":
            return kernel_matrix(level)
        return phi_matrix(level, workers=workers)


def dump_matrix(matrix: TransformMatrix, fmt: MatrixFormat = "json") -> str:
    """Serialize a transform matrix.

    JSON is an array of rows, each scalar as ``{"num": [...], "den": d}``. CSV has a header of
    representatives and one line per torus class, scalars rendered as ``n0+n1*z+.../den``.
    """
    if fmt == "json":
        rows = [[cyc_to_json(value) for value in row] for row in matrix.entries]
        return json.dumps(rows) + "\n"
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["x", *(str(rep) for rep in matrix.cols)])
    for x, row in zip(matrix.rows, matrix.entries, strict=True):
        writer.writerow([str(x), *(render_cyc(value) for value in row)])
    return buffer.getvalue()


def reduce_matrix(text: str, level: LevelParams) -> tuple[OrbitRep, AElem] | None:
    """Write the matrix ``"e11;e12;e21;e22"`` as ``M a`` with ``M`` in R_(n,k) and ``a`` in A.

    Returns ``None`` when the Borel part lies in an irrelevant orbit.

    Raises:
        LevelMismatchError: If the Borel part does not lie in block ``level.n``.
        PrecisionError: If the A factor cannot be recognized at ``level.N_rel``.
    """
    with relative_precision(level.N_rel):
        borel, a1 = decompose_BA(parse_matrix(text, level.p))
        reduced = reduce_to_representative(borel, level)
        if reduced is None:
            return None
        rep, a2 = reduced
        # g = b a1 and b a2 = M, so g = M a2^-1 a1
        factor = a_factor(mat_mul(mat_inv(reassemble_a(a2)), reassemble_a(a1), canonical=False))
        if factor is None:
            raise PrecisionError("membership of the A factor", level.N_rel)
        return rep, factor


def scan_double_cosets(bounds: ScanBounds, *, workers: int = 1) -> ScanReport:
    return double_coset_scan(bounds, workers=workers)


def scan_report_payload(report: ScanReport) -> dict[str, object]:
    return {
        "bounds": report.bounds.to_dict(),
        "points": [
            {
                "point": str(result.point),
                "passes": result.passes,
                "checked": result.checked,
                "in_stabilizer": result.in_stabilizer,
                "witness": None if result.witness is None else render_params(result.witness),
                "witness_value": None if result.witness_value is None else render_cyc(result.witness_value),
            }
            for result in report.results
        ],
        "passing_points": [str(point) for point in report.passing_points],
        "passing_orbits": [str(point) for point in report.passing_orbits],
    }


__all__ = [
    "build_matrix",
    "dump_matrix",
    "reduce_matrix",
    "scan_double_cosets",
    "scan_report_payload",
    "verify",
]
