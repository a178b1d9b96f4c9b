"""Cell evaluation, preset table runs and k-sweeps."""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import List, Optional, Sequence

import numpy as np

from .errors import DomainError, HyperAsymError
from .expansions import derive_params, s_asym
from .models import (
    CellReport,
    CellSpec,
    ErrorMeasure,
    Method,
    Number,
    OutputFormat,
    Preset,
    TableSpec,
    Variant,
)
from .presets import MATCH_TOLERANCE, preset_cells
from .series import DEFAULT_MAX_TERMS, DEFAULT_ORACLE_TOL, f_m, s_oracle
from .uniform import f0_uniform

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepRow:
    k: float
    rel_error: float
    local_slope: float


def evaluate_point(
    cell: CellSpec,
    oracle_tol: float = DEFAULT_ORACLE_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
    match_tolerance: float = 0.01,
) -> CellReport:
    """
    Evaluate one cell against its oracle, raising on failure.

    Args:
        cell: Parameters, order, method and optional published error
        oracle_tol: Relative tolerance of the direct-summation oracle
        max_terms: Term budget of every series
        match_tolerance: Allowed |match_ratio - 1| before a cell is flagged

    Returns:
        CellReport; status is "term_cap_hit" when the oracle did not converge
    """
    flags: List[str] = []
    if cell.method is Method.ORACLE:
        oracle = s_oracle(cell.k, cell.x, cell.t, oracle_tol, max_terms)
        variant = "oracle"
        approx = oracle.value
    elif cell.method is Method.ASYM:
        p = derive_params(cell.k, cell.x, cell.t)
        oracle = s_oracle(cell.k, cell.x, cell.t, oracle_tol, max_terms)
        expansion = s_asym(p, cell.order, cell.variant, rel_tol=oracle_tol)
        variant = expansion.variant.value
        approx = expansion.value
        flags.extend(expansion.flags)
    else:
        if cell.order != 0:
            raise DomainError(
                f"uniform expansion is available at M=0 only, got M={cell.order}"
            )
        p = derive_params(cell.k, cell.x, cell.t)
        oracle = f_m(0, p, oracle_tol, max_terms)
        uniform = f0_uniform(p)
        variant = "uniform_d0"
        approx = uniform.value
        flags.append(uniform.regime.value)
        flags.extend(uniform.flags)

    abs_error = abs(approx - oracle.value)
    rel_error = abs_error / abs(oracle.value)
    match_ratio = None
    if cell.paper_value:
        measured = abs_error if cell.measure is ErrorMeasure.ABSOLUTE else rel_error
        match_ratio = measured / cell.paper_value
        if abs(match_ratio - 1.0) > match_tolerance:
            logger.warning(
                "cell k=%s x=%s t=%s M=%d: %s error %.4g vs published %.4g",
                cell.k, cell.x, cell.t, cell.order, cell.measure, measured,
                cell.paper_value,
            )
            flags.append("reference_mismatch")

    return CellReport(
        cell=cell,
        variant=variant,
        oracle_value=oracle.value,
        approx_value=approx,
        rel_error=rel_error,
        abs_error=abs_error,
        paper_value=cell.paper_value,
        match_ratio=match_ratio,
        status="ok" if oracle.converged else oracle.status.value,
        flags=tuple(dict.fromkeys(flags)),
        terms_used=oracle.terms_used,
    )


def evaluate_cell(
    cell: CellSpec,
    oracle_tol: float = DEFAULT_ORACLE_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
    match_tolerance: float = 0.01,
) -> CellReport:
    """Like :func:`evaluate_point`, but failures become a report with a status."""
    try:
        return evaluate_point(cell, oracle_tol, max_terms, match_tolerance)
    except HyperAsymError as e:
        logger.error("cell k=%s x=%s t=%s M=%d failed: %s",
                     cell.k, cell.x, cell.t, cell.order, e)
        return CellReport(
            cell=cell,
            variant=str(cell.variant or cell.method),
            oracle_value=math.nan,
            approx_value=math.nan,
            rel_error=math.nan,
            abs_error=math.nan,
            paper_value=cell.paper_value,
            status=f"error: {type(e).__name__}: {e}",
        )


class TableRunner:
    """Runs preset or custom tables, optionally across worker processes."""

    def __init__(
        self,
        oracle_tol: float = DEFAULT_ORACLE_TOL,
        max_terms: int = DEFAULT_MAX_TERMS,
        jobs: int = 1,
    ):
        """
        Initialize runner.

        Args:
            oracle_tol: Oracle tolerance for every cell
            max_terms: Term budget of every series
            jobs: Worker processes; 1 evaluates in-process
        """
        self.oracle_tol = oracle_tol
        self.max_terms = max_terms
        self.jobs = max(1, jobs)

    def build_spec(
        self,
        preset: Preset,
        cells: Optional[Sequence[CellSpec]] = None,
        fmt: OutputFormat = OutputFormat.CSV,
    ) -> TableSpec:
        if preset is Preset.CUSTOM:
            if not cells:
                raise DomainError("custom table needs at least one cell")
            chosen = list(cells)
        else:
            chosen = preset_cells(preset)
        return TableSpec(
            preset=preset, cells=chosen, format=fmt, oracle_tol=self.oracle_tol
        )

    def run(self, spec: TableSpec) -> List[CellReport]:
        """Evaluate every cell; report order always follows ``spec.cells``."""
        worker = partial(
            evaluate_cell,
            oracle_tol=spec.oracle_tol,
            max_terms=self.max_terms,
            match_tolerance=MATCH_TOLERANCE[spec.preset],
        )
        if self.jobs == 1 or len(spec.cells) < 2:
            reports = [worker(cell) for cell in spec.cells]
        else:
            with ProcessPoolExecutor(max_workers=self.jobs) as pool:
                reports = list(pool.map(worker, spec.cells))

        failed = sum(1 for r in reports if not r.ok)
        logger.info("table %s: %d cells, %d failed", spec.preset, len(reports), failed)
        return reports


def sweep(
    x: Number,
    t: Number,
    order: int,
    k_min: float,
    k_max: float,
    steps: int,
    variant: Optional[Variant] = None,
    oracle_tol: float = DEFAULT_ORACLE_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> List[SweepRow]:
    """Relative error of the order-M expansion on a log-spaced k grid.

    Raises:
        DomainError: k_min < 10/t, k_max <= k_min or fewer than two steps
    """
    if float(k_min) < 10.0 / float(t):
        raise DomainError(f"k_min must be >= 10/t = {10.0 / float(t):.6g}, got {k_min}")
    if not k_max > k_min:
        raise DomainError(f"k_max must exceed k_min, got {k_min}..{k_max}")
    if steps < 2:
        raise DomainError(f"sweep needs at least two steps, got {steps}")

    ks = np.geomspace(float(k_min), float(k_max), steps)
    errors = np.array([
        evaluate_point(
            CellSpec(float(k), x, t, order, variant), oracle_tol, max_terms
        ).rel_error
        for k in ks
    ])
    slopes = np.gradient(np.log(errors), np.log(ks))
    logger.info(
        "fitted order over k in [%g, %g]: %.4f", k_min, k_max, fit_order(ks, errors)
    )
    return [SweepRow(float(k), float(e), float(s)) for k, e, s in zip(ks, errors, slopes)]


def fit_order(ks: Sequence[float], errors: Sequence[float]) -> float:
    """Least-squares slope of ln(error) against ln(k)."""
    slope, _ = np.polyfit(np.log(np.asarray(ks)), np.log(np.asarray(errors)), 1)
    return float(slope)
