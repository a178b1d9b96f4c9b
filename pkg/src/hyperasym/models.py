"""Core data models for the oracle, the expansions and the table harness."""

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple, Union

from .errors import DomainError

# k, x and t may be given exactly; everything numeric downstream is float.
Number = Union[int, float, Fraction]


class Variant(Enum):
    """Which algebraic form of the k^-1 and k^-2 brackets is assembled."""
    EXACT_AM = "exact_Am"        # Pochhammer weights A_m kept exact
    EXPANDED_AM = "expanded_Am"  # A_m replaced by its 1/k expansion
    T_EQUALS_1 = "t_equals_1"    # a = 1, c = 0 reduction

    def __str__(self):
        return self.value


class Regime(Enum):
    """Relative position of the saddle tau = eps and the pole tau = 1/chi."""
    SADDLE_DOMINANT = "saddle_dominant"
    POLE_DOMINANT = "pole_dominant"
    COALESCED = "coalesced"

    def __str__(self):
        return self.value


class SeriesStatus(Enum):
    CONVERGED = "converged"
    TERM_CAP_HIT = "term_cap_hit"

    def __str__(self):
        return self.value


class Method(Enum):
    """Evaluation route for a single point."""
    ORACLE = "oracle"
    ASYM = "asym"
    UNIFORM_F0 = "uniform_f0"

    def __str__(self):
        return self.value


class ErrorMeasure(Enum):
    """Which error a published reference value is compared against."""
    ABSOLUTE = "abs"   # |approx - exact|
    RELATIVE = "rel"   # |approx - exact| / |exact|

    def __str__(self):
        return self.value


class Preset(Enum):
    TABLE1 = "table1"
    TABLE2 = "table2"
    CUSTOM = "custom"

    def __str__(self):
        return self.value


class OutputFormat(Enum):
    CSV = "csv"
    MARKDOWN = "md"
    XLSX = "xlsx"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class DerivedParams:
    """The triple (k, x, t) together with every symbol derived from it.

    ``lam`` is the large parameter lambda = t*k of the uniform regime and
    ``eps_chi`` is the product eps*chi = a^2 x / t, kept separately so that
    the coalescence x = x_star is detected without rounding drift when the
    inputs are exact rationals.
    """
    k: float
    x: float
    t: float
    a: float
    b: float
    c: float
    X: float
    chi: float
    epsilon: float
    lam: float
    x_star: float
    alpha: float
    eps_chi: float


@dataclass(frozen=True)
class SeriesSpec:
    """Parameter tuple of a generalized hypergeometric series pFq(num; den; z)."""
    numerator_params: Tuple[float, ...]
    denominator_params: Tuple[float, ...]
    argument: float
    rel_tol: float
    max_terms: int

    def __post_init__(self):
        """Validate the series parameters."""
        if any(b <= 0 for b in self.denominator_params):
            raise DomainError(
                f"denominator parameters must be positive, got {self.denominator_params}"
            )
        if not 0.0 <= self.argument <= 1.0:
            raise DomainError(f"argument must lie in [0, 1], got {self.argument}")
        if not 1e-30 <= self.rel_tol <= 1e-3:
            raise DomainError(f"rel_tol must lie in [1e-30, 1e-3], got {self.rel_tol}")
        if self.max_terms < 10:
            raise DomainError(f"max_terms must be at least 10, got {self.max_terms}")

    @property
    def parametric_excess(self) -> float:
        """Sum of denominator parameters minus sum of numerator parameters."""
        return sum(self.denominator_params) - sum(self.numerator_params)


@dataclass(frozen=True)
class SeriesResult:
    """Outcome of a direct summation.

    ``tail_bound`` is relative to ``value``. ``tail_estimate`` is the
    extrapolated tail already folded into ``value`` (zero unless the
    argument is 1).
    """
    value: float
    terms_used: int
    tail_bound: float
    status: SeriesStatus
    peak_index: int = 0
    tail_estimate: float = 0.0

    @property
    def converged(self) -> bool:
        return self.status is SeriesStatus.CONVERGED


@dataclass(frozen=True)
class ExpansionResult:
    """Truncated large-k expansion with its per-order contributions."""
    value: float
    order: int
    terms: Tuple[float, ...]  # (T0, T1/k, T2/k^2)[:order + 1]
    variant: Variant
    flags: Tuple[str, ...] = ()


@dataclass(frozen=True)
class SaddleGeometry:
    """Saddle/pole configuration of the integral for F0 in (eps, chi, lambda)."""
    epsilon: float
    chi: float
    lam: float
    phi_at_saddle: float
    phi_at_pole: float
    p: float
    regime: Regime
    eps_chi: float

    @property
    def offset(self) -> float:
        """Signed distance eps*chi - 1 from coalescence."""
        return self.eps_chi - 1.0


@dataclass(frozen=True)
class UniformResult:
    """Order-d0 uniform approximation of F0: value = erfc_term + saddle_term."""
    value: float
    regime: Regime
    d0: float
    erfc_term: float
    saddle_term: float
    flags: Tuple[str, ...] = ()


@dataclass(frozen=True)
class CellSpec:
    """One (k, x, t, M) evaluation request of a table."""
    k: Number
    x: Number
    t: Number
    order: int
    variant: Optional[Variant] = None
    method: Method = Method.ASYM
    paper_value: Optional[float] = None
    measure: ErrorMeasure = ErrorMeasure.RELATIVE

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CellSpec":
        """Create a cell from a loosely typed row (CSV or spreadsheet)."""
        variant = data.get("variant")
        method = data.get("method")
        paper = data.get("paper_value")
        measure = data.get("measure")
        return cls(
            k=parse_number(data["k"]),
            x=parse_number(data["x"]),
            t=parse_number(data["t"]),
            order=int(data.get("M", data.get("order", 0)) or 0),
            variant=Variant(str(variant)) if variant else None,
            method=Method(str(method)) if method else Method.ASYM,
            paper_value=float(paper) if paper not in (None, "") else None,
            measure=ErrorMeasure(str(measure)) if measure else ErrorMeasure.RELATIVE,
        )


@dataclass
class TableSpec:
    """Declarative description of a table run."""
    preset: Preset
    cells: List[CellSpec] = field(default_factory=list)
    format: OutputFormat = OutputFormat.CSV
    oracle_tol: float = 1e-20

    def __post_init__(self):
        """Presets must be backed by an oracle sharp enough for 1e-13 errors."""
        if self.preset is not Preset.CUSTOM and self.oracle_tol > 1e-16:
            raise DomainError(
                f"oracle_tol for preset {self.preset} must be <= 1e-16, "
                f"got {self.oracle_tol}"
            )


@dataclass(frozen=True)
class CellReport:
    """Evaluated table cell."""
    cell: CellSpec
    variant: str
    oracle_value: float
    approx_value: float
    rel_error: float
    abs_error: float = math.nan
    paper_value: Optional[float] = None
    match_ratio: Optional[float] = None
    status: str = "ok"
    flags: Tuple[str, ...] = ()
    terms_used: int = 0

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    @property
    def measured_error(self) -> float:
        """The error the published value of this cell refers to."""
        if self.cell.measure is ErrorMeasure.ABSOLUTE:
            return self.abs_error
        return self.rel_error

    def to_dict(self) -> Dict[str, Any]:
        """Flatten to the CSV column set."""
        return {
            "k": float(self.cell.k),
            "x": float(self.cell.x),
            "t": float(self.cell.t),
            "M": self.cell.order,
            "variant": self.variant,
            "oracle": self.oracle_value,
            "approx": self.approx_value,
            "rel_error": self.rel_error,
            "abs_error": self.abs_error,
            "paper_value": self.paper_value,
            "measure": self.cell.measure.value,
            "match_ratio": self.match_ratio,
            "status": self.status,
        }


def parse_number(text: Any) -> Number:
    """Parse a decimal or a rational ``p/q`` into an exact value where possible.

    Integers and ``p/q`` become :class:`Fraction`; decimals stay ``float`` so
    that 0.333333 is not silently promoted to 1/3.
    """
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, float):
        return text
    s = str(text).strip()
    try:
        if "/" in s:
            return Fraction(s)
        if s.lstrip("+-").isdigit():
            return Fraction(int(s))
        return float(s)
    except (ValueError, ZeroDivisionError) as e:
        raise DomainError(f"cannot parse number {text!r}: {e}") from e
