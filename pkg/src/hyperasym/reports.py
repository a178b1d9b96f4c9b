"""CSV, markdown and xlsx output for table runs; custom cell loading."""

import csv
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO, Tuple

import openpyxl
import xlsxwriter

from .errors import DomainError
from .models import CellReport, CellSpec, Preset
from .presets import MATCH_TOLERANCE, TABLE2, TABLE2_ORDERS
from .tables import SweepRow

CSV_COLUMNS = [
    "k", "x", "t", "M", "variant", "oracle", "approx",
    "rel_error", "abs_error", "paper_value", "measure", "match_ratio", "status",
]
SWEEP_COLUMNS = ["k", "rel_error", "local_slope"]


def format_csv_value(value: Any) -> str:
    """17 significant digits for floats, empty for missing values."""
    if value is None:
        return ""
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def format_md_value(value: Optional[float]) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "n/a"
    return "%.3e" % value


def write_csv(reports: Sequence[CellReport], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for report in reports:
        row = report.to_dict()
        writer.writerow([format_csv_value(row[col]) for col in CSV_COLUMNS])


def write_sweep_csv(rows: Sequence[SweepRow], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow([format_csv_value(row.k), format_csv_value(row.rel_error),
                         format_csv_value(row.local_slope)])


def _column_key(report: CellReport) -> Tuple[float, float, float]:
    return (float(report.cell.k), float(report.cell.x), float(report.cell.t))


def _pivot(reports: Sequence[CellReport]):
    """Columns in first-seen order, {(column, M): report}."""
    columns: List[Tuple[float, float, float]] = []
    cells: Dict[Tuple[Tuple[float, float, float], int], CellReport] = {}
    for report in reports:
        key = _column_key(report)
        if key not in columns:
            columns.append(key)
        cells[(key, report.cell.order)] = report
    return columns, cells


def write_markdown(reports: Sequence[CellReport], preset: Preset, stream: TextIO) -> None:
    """One row per M, one column per (k, x, t), four significant digits.

    Each cell shows the error its published value refers to: absolute for
    the first preset, relative otherwise.

    For the uniform preset, orders that need coefficients beyond d0 are
    printed as "unavailable".
    """
    columns, cells = _pivot(reports)
    orders = sorted({r.cell.order for r in reports})
    if preset is Preset.TABLE2:
        orders = list(range(len(TABLE2[0][1])))

    header = ["M"] + ["k=%g x=%g t=%.4g" % col for col in columns]
    stream.write("| " + " | ".join(header) + " |\n")
    stream.write("|" + "---|" * len(header) + "\n")
    for order in orders:
        row = [str(order)]
        for col in columns:
            report = cells.get((col, order))
            if report is None:
                unavailable = preset is Preset.TABLE2 and order not in TABLE2_ORDERS
                row.append("unavailable" if unavailable else "")
            elif not report.ok:
                row.append(report.status)
            else:
                row.append(format_md_value(report.measured_error))
        stream.write("| " + " | ".join(row) + " |\n")

    if any(r.match_ratio is not None for r in reports):
        stream.write("\n")
        stream.write("| M | " + " | ".join("k=%g x=%g t=%.4g" % c for c in columns) + " |\n")
        stream.write("|" + "---|" * (len(columns) + 1) + "\n")
        for order in sorted({r.cell.order for r in reports}):
            row = ["%d (ratio)" % order]
            for col in columns:
                report = cells.get((col, order))
                ratio = report.match_ratio if report is not None else None
                row.append("%.4f" % ratio if ratio is not None else "")
            stream.write("| " + " | ".join(row) + " |\n")


def write_xlsx(reports: Sequence[CellReport], preset: Preset, output_path: str) -> str:
    """Workbook with the flat cell list and a pivoted error sheet."""
    workbook = xlsxwriter.Workbook(output_path)
    formats = _create_formats(workbook)
    band = MATCH_TOLERANCE[preset]

    sheet = workbook.add_worksheet("cells")
    for col, name in enumerate(CSV_COLUMNS):
        sheet.write(0, col, name, formats["header"])
    for row_idx, report in enumerate(reports, start=1):
        row = report.to_dict()
        for col, name in enumerate(CSV_COLUMNS):
            value = row[name]
            if isinstance(value, float) and math.isnan(value):
                value = None
            if value is None:
                sheet.write_blank(row_idx, col, None, formats["cell"])
            elif name == "match_ratio" and abs(value - 1.0) > band:
                sheet.write_number(row_idx, col, value, formats["mismatch"])
            elif isinstance(value, float):
                sheet.write_number(row_idx, col, value, formats["sci"])
            else:
                sheet.write(row_idx, col, value, formats["cell"])
    sheet.set_column(0, len(CSV_COLUMNS) - 1, 16)
    sheet.freeze_panes(1, 0)

    pivot = workbook.add_worksheet("error")
    columns, cells = _pivot(reports)
    pivot.write(0, 0, "M", formats["header"])
    for c, col in enumerate(columns, start=1):
        pivot.write(0, c, "k=%g x=%g t=%.4g" % col, formats["header"])
    for r, order in enumerate(sorted({rep.cell.order for rep in reports}), start=1):
        pivot.write(r, 0, order, formats["header"])
        for c, col in enumerate(columns, start=1):
            report = cells.get((col, order))
            if report is not None and report.ok:
                pivot.write_number(r, c, report.measured_error, formats["sci"])
    pivot.set_column(0, len(columns), 22)

    workbook.close()
    return output_path


def _create_formats(workbook) -> Dict[str, Any]:
    return {
        "header": workbook.add_format({
            "bold": True, "align": "center", "valign": "vcenter",
            "font_color": "#FFFFFF", "bg_color": "#2E86AB", "border": 1,
        }),
        "cell": workbook.add_format({"align": "center", "border": 1}),
        "sci": workbook.add_format({
            "align": "center", "border": 1, "num_format": "0.000E+00",
        }),
        "mismatch": workbook.add_format({
            "align": "center", "border": 1, "num_format": "0.0000",
            "bg_color": "#F24236", "font_color": "#FFFFFF", "bold": True,
        }),
    }


def parse_cells(text: str) -> List[CellSpec]:
    """Cells from ``"k,x,t,M[,variant]"`` groups separated by ``;``."""
    cells = []
    for group in text.split(";"):
        group = group.strip()
        if not group:
            continue
        parts = [p.strip() for p in group.split(",")]
        if len(parts) not in (4, 5):
            raise DomainError(f"cell {group!r} must be k,x,t,M[,variant]")
        row = dict(zip(["k", "x", "t", "M", "variant"], parts))
        cells.append(_cell_from_row(row))
    return cells


def load_cells(path: str) -> List[CellSpec]:
    """Cells from a .csv or .xlsx file with a header row (k, x, t, M, ...)."""
    suffix = Path(path).suffix.lower()
    if suffix == ".csv":
        with open(path, newline="", encoding="utf-8") as f:
            return [_cell_from_row(row) for row in csv.DictReader(f)]
    if suffix == ".xlsx":
        return _load_cells_xlsx(path)
    raise DomainError(f"unsupported cells file {path!r}; use .csv or .xlsx")


def _load_cells_xlsx(path: str) -> List[CellSpec]:
    workbook = openpyxl.load_workbook(path, read_only=True, data_only=True)
    try:
        sheet = workbook.active
        rows = sheet.iter_rows(values_only=True)
        header = [str(h).strip() if h is not None else None for h in next(rows)]
        cells = []
        for values in rows:
            # Stop at the first blank row
            if not values or all(v is None for v in values):
                break
            row = {key: value for key, value in zip(header, values) if key is not None}
            cells.append(_cell_from_row(row))
        return cells
    finally:
        workbook.close()


def _cell_from_row(row: Dict[str, Any]) -> CellSpec:
    try:
        return CellSpec.from_dict(row)
    except (KeyError, ValueError) as e:
        if isinstance(e, DomainError):
            raise
        raise DomainError(f"malformed cell row {row!r}: {e}") from e
