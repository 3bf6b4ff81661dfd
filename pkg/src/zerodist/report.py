"""The full analysis pipeline and its serializable report.

parse -> normalize -> deflate powers of z -> roots -> measures ->
circle projection -> discrepancy -> certificates.  The report is plain
JSON-serializable data; canonical_json below renders it with sorted
keys so parse/serialize round-trips are byte-identical.
"""
from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field

from .certify import CertificateReport, certificate_report
from .equidist import DiscrepancyResult, discrepancy, schur_reduce
from .measures import H_of, MeasureReport, h_of, mahler, measure_report, script_M
from .poly import Polynomial, normalize_monic
from .rootfind import find_roots

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class AnalysisReport:
    schema_version: int
    input: str
    original_degree: int
    degree: int
    deflation_order: int
    lead: tuple[float, float]
    roots: tuple[dict, ...]
    residual_bound: float
    measures: dict
    discrepancy: dict
    certificates: CertificateReport
    timings_ms: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "input": self.input,
            "original_degree": self.original_degree,
            "degree": self.degree,
            "deflation_order": self.deflation_order,
            "lead": list(self.lead),
            "roots": list(self.roots),
            "residual_bound": self.residual_bound,
            "measures": dict(self.measures),
            "discrepancy": dict(self.discrepancy),
            "certificates": self.certificates.to_json_dict(),
            "timings_ms": dict(self.timings_ms),
        }


def canonical_json(payload: dict) -> str:
    """Deterministic rendering; loads() then dumps() reproduces the bytes."""
    return json.dumps(payload, sort_keys=True, indent=2, separators=(",", ": ")) + "\n"


def _deflate_origin(P: Polynomial) -> tuple[Polynomial, int]:
    coeffs = P.coeffs
    v = 0
    while v < coeffs.size and coeffs[v] == 0:
        v += 1
    if v == 0:
        return P, 0
    if coeffs.size - v < 2:
        raise ValueError("all roots at the origin; nothing to analyze after deflation")
    return Polynomial(coeffs[v:]), v


def analyze_polynomial(P: Polynomial, description: str, tol: float = 1e-13,
                       quad_tol: float = 1e-8, k_range: tuple[int, ...] = (1, 2, 3),
                       band_eps: float | None = None) -> AnalysisReport:
    """Run the whole pipeline on one polynomial."""
    timings: dict[str, float] = {}
    original_degree = P.degree
    lead = P.lead

    t0 = time.perf_counter()
    monic, _ = normalize_monic(P)
    work, deflation = _deflate_origin(monic)
    timings["normalize"] = (time.perf_counter() - t0) * 1e3

    t0 = time.perf_counter()
    roots = find_roots(work, tol=tol)
    timings["roots"] = (time.perf_counter() - t0) * 1e3

    t0 = time.perf_counter()
    hres = h_of(work, roots, tol=quad_tol)
    big_h = H_of(work)
    meas = MeasureReport(
        h=hres.real,
        H=big_h,
        log_script_M=script_M(roots),
        log_mahler=math.log(mahler(roots, 1.0)),
        quadrature_error=hres.error_estimate,
    )
    timings["measures"] = (time.perf_counter() - t0) * 1e3

    t0 = time.perf_counter()
    disc = discrepancy(schur_reduce(roots))
    timings["discrepancy"] = (time.perf_counter() - t0) * 1e3

    t0 = time.perf_counter()
    certs = certificate_report(work, roots, band_eps=band_eps, k_range=k_range,
                               quad_tol=quad_tol, h=hres, big_h=big_h)
    timings["certificates"] = (time.perf_counter() - t0) * 1e3

    root_rows = tuple(
        {"rho": e.rho, "theta": e.theta, "multiplicity": e.multiplicity}
        for e in roots.entries
    )
    report = AnalysisReport(
        schema_version=SCHEMA_VERSION,
        input=description,
        original_degree=original_degree,
        degree=work.degree,
        deflation_order=deflation,
        lead=(float(lead.real), float(lead.imag)),
        roots=root_rows,
        residual_bound=roots.residual_bound,
        measures={
            "h": meas.h,
            "H": meas.H,
            "log_script_M": meas.log_script_M,
            "log_mahler": meas.log_mahler,
            "mahler": math.exp(meas.log_mahler) * abs(lead),
            "quadrature_error": meas.quadrature_error,
        },
        discrepancy=_disc_dict(disc),
        certificates=certs,
        timings_ms=timings,
    )
    _require_finite(report.to_json_dict())
    return report


def _disc_dict(d: DiscrepancyResult) -> dict:
    return {
        "value": d.value,
        "witness_start": d.witness.start,
        "witness_length": d.witness.length,
        "side": d.side,
        "limit_witness": d.limit_witness,
    }


def _require_finite(payload) -> None:
    if isinstance(payload, dict):
        for v in payload.values():
            _require_finite(v)
    elif isinstance(payload, (list, tuple)):
        for v in payload:
            _require_finite(v)
    elif isinstance(payload, float) and not math.isfinite(payload):
        raise ValueError("report contains a non-finite float")


def zeros_csv(report: AnalysisReport) -> str:
    """Zero list in RFC-4180 style: rho,theta,multiplicity rows."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["rho", "theta", "multiplicity"])
    for row in report.roots:
        writer.writerow([repr(float(row["rho"])), repr(float(row["theta"])),
                         row["multiplicity"]])
    return buf.getvalue()


ENSEMBLE_HEADER = ["seed", "N", "h", "H", "log_script_M", "D", "bound", "ratio", "status"]


def ensemble_row(P: Polynomial, seed: int) -> list:
    """One summary row: measures, discrepancy, and the theorem-2 ratio."""
    monic, _ = normalize_monic(P)
    work, _ = _deflate_origin(monic)
    roots = find_roots(work)
    meas: MeasureReport = measure_report(work, roots)
    disc = discrepancy(schur_reduce(roots))
    n = work.degree
    bound = (8.0 / math.pi) * math.sqrt(n * max(meas.h, 0.0))
    ratio = disc.value / bound if bound > 0 else float("inf")
    return [seed, n, repr(meas.h), repr(meas.H), repr(meas.log_script_M),
            repr(disc.value), repr(bound), repr(ratio), "ok"]


def ensemble_csv(rows: list[list], failures: list[tuple[int, str]]) -> str:
    """Assemble the ensemble summary with the max-ratio footer row."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(ENSEMBLE_HEADER)
    ratios = []
    for row in rows:
        writer.writerow(row)
        if row[-1] == "ok":
            ratios.append(float(row[7]))
    for seed, message in failures:
        writer.writerow([seed, "", "", "", "", "", "", "", f"error: {message}"])
    max_ratio = repr(max(ratios)) if ratios else ""
    writer.writerow(["max_ratio", "", "", "", "", "", "", max_ratio, ""])
    return buf.getvalue()
