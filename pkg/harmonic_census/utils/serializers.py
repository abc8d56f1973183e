"""
JSON documents and CSV tables for every result type.

Documents are plain dicts so that the CLI (json.dumps) and the HTTP routes
(FastAPI's encoder) emit the same payload. Floats are written with their
shortest round-trip representation in JSON and with 17 significant digits
in CSV; both are deterministic and exact.
"""

import json
import math
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from harmonic_census.helpers.BoxHelper import Rectangle
from harmonic_census.models.CausticModels import CausticCurve
from harmonic_census.models.CensusModels import CensusReport
from harmonic_census.models.FamilyModels import FamilyParams
from harmonic_census.models.TheoremModels import (
    CriticalValueTable,
    SweepEntry,
    VerificationReport,
)
from harmonic_census.models.WindingModels import WindingReport

SCHEMA_VERSION = 1
CSV_FLOAT_FORMAT = "%.17g"

Document = Dict[str, Any]


def _finite(value: Optional[float]) -> Optional[float]:
    # JSON has no inf/nan
    if value is None or not math.isfinite(value):
        return None
    return float(value)


def _document(params: Optional[FamilyParams] = None, **fields: Any) -> Document:
    doc: Document = {"schema_version": SCHEMA_VERSION}
    if params is not None:
        doc["n"] = params.n
        doc["a"] = params.a
    doc.update(fields)
    return doc


def caustic_document(curve: CausticCurve) -> Document:
    return _document(
        curve.params,
        min_distance=curve.min_distance,
        near_origin=curve.near_origin,
        closure_gap=curve.closure_gap,
        samples=[
            {"phi": phi, "u": u, "v": v} for phi, u, v in zip(curve.phi, curve.u, curve.v)
        ],
    )


def winding_document(
    params: FamilyParams, report: WindingReport, rect: Optional[Rectangle] = None
) -> Document:
    return _document(
        params,
        curve="caustic" if rect is None else "rectangle",
        rect=None if rect is None else list(rect.as_tuple()),
        value=report.value,
        status=report.status,
        min_distance=_finite(report.min_distance),
        refinements=report.refinements,
        points=report.points,
        residual=report.residual,
    )


def critical_values_document(table: CriticalValueTable) -> Document:
    return _document(
        n=table.n,
        N=table.N,
        values=[
            {
                "j": value.j,
                "a": value.a,
                "phi": value.source.phi,
                "c_value": value.source.c_value,
                "multiplicity": value.source.multiplicity,
                "bisected_a": value.bisected_a,
            }
            for value in table.values
        ],
    )


def census_document(report: CensusReport) -> Document:
    return _document(
        report.params,
        zeros=[
            {
                "re": zero.location.real,
                "im": zero.location.imag,
                "order": zero.order,
                "residual": zero.residual,
            }
            for zero in report.zeros
        ],
        z_plus=report.z_plus,
        z_minus=report.z_minus,
        total=report.total,
        order_sum=report.order_sum,
        consistent=report.consistent,
        warnings=list(report.warnings),
        caustic_winding=report.caustic_winding,
        predicted_total=report.predicted_total,
        rho_min=report.rho_min,
        R_max=report.R_max,
        leaf_count=report.leaf_count,
        outside_winding=report.outside_winding,
        inside_winding=report.inside_winding,
        crossing_winding=report.crossing_winding,
    )


def count_document(params: FamilyParams, count: int, regime: str) -> Document:
    return _document(params, predicted_theorem=count, regime=regime)


def verification_fields(report: VerificationReport) -> Document:
    return {
        "predicted_theorem": report.predicted_theorem,
        "predicted_winding": report.predicted_winding,
        "total": report.census_total,
        "caustic_winding": report.caustic_winding,
        "z_plus": report.z_plus,
        "z_minus": report.z_minus,
        "agree": report.agree,
        "regime": report.regime,
    }


def verification_document(report: VerificationReport) -> Document:
    return _document(report.params, **verification_fields(report))


def sweep_document(n: int, entries: Sequence[SweepEntry]) -> Document:
    rows: List[Document] = []
    for entry in entries:
        row: Document = {"a": entry.a, "ok": entry.ok}
        if entry.report is not None:
            row.update(verification_fields(entry.report))
        else:
            row.update({"error_type": entry.error_type, "message": entry.message})
        rows.append(row)
    return _document(n=n, entries=rows)


def sweep_dataframe(entries: Sequence[SweepEntry]) -> pd.DataFrame:
    columns = [
        "a",
        "ok",
        "predicted_theorem",
        "predicted_winding",
        "total",
        "caustic_winding",
        "agree",
        "regime",
        "error_type",
    ]
    rows = []
    for entry in entries:
        row = {"a": entry.a, "ok": entry.ok, "error_type": entry.error_type}
        if entry.report is not None:
            row.update(verification_fields(entry.report))
        rows.append(row)
    return pd.DataFrame(rows, columns=columns)


def critical_values_dataframe(table: CriticalValueTable) -> pd.DataFrame:
    return pd.DataFrame(
        critical_values_document(table)["values"],
        columns=["j", "a", "phi", "c_value", "multiplicity", "bisected_a"],
    )


def to_json(doc: Document) -> str:
    return json.dumps(doc, indent=2, allow_nan=False)


def to_csv(df: pd.DataFrame) -> str:
    # the caller adds the final newline, as for JSON
    text = df.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    return text.rstrip("\n")
