"""Pass/fail certificates for every identity and inequality in scope.

A certificate never proves a theorem; it verifies one instance at a
stated tolerance.  Failures beyond tolerance indicate a defect in this
artifact (the inequalities themselves are proven), which is why the
analyze pipeline treats them as a distinct exit condition.

Items whose name starts with "info_" are diagnostics and do not count
as failures.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .equidist import (
    build_smoothed_indicator,
    damped_power_sum,
    damped_power_sum_integral_many,
    discrepancy,
    power_sum,
    power_sum_integral_many_from_angles,
    schur_reduce,
    smoothed_sum,
)
from .measures import H_of, h_of, script_M, theorem1_identity_residual
from .poly import Arc, Polynomial, normalize_monic
from .quadrature import (
    QuadResult,
    mean_abs_log_from_angles,
    mean_log_plus,
    mean_log_plus_from_angles,
)
from .rootfind import RootSet

EIGHT_OVER_PI = 8.0 / math.pi
CATALAN = 0.9159655941772190
# Classical comparison constant as quoted alongside the Catalan constant;
# note sqrt(2*pi/CATALAN) evaluates to 2.6191, the quoted decimal is kept.
GANELIUS = 2.5619
SQRT2 = math.sqrt(2.0)

CONSTANTS = {
    "eight_over_pi": EIGHT_OVER_PI,
    "ganelius": GANELIUS,
    "catalan": CATALAN,
    "sqrt2": SQRT2,
}

IDENTITY_TOL = 1e-6
INEQUALITY_TOL = 1e-7


@dataclass(frozen=True)
class CertItem:
    """One verified inequality: pass iff measured <= bound + tolerance."""

    name: str
    measured: float
    bound: float
    tolerance: float
    witness: dict | None = None

    @property
    def slack(self) -> float:
        return self.bound - self.measured

    @property
    def passed(self) -> bool:
        return self.measured <= self.bound + self.tolerance

    @property
    def informational(self) -> bool:
        return self.name.startswith("info_")

    def to_json_dict(self) -> dict:
        out = {
            "name": self.name,
            "measured": self.measured,
            "bound": self.bound,
            "slack": self.slack,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass(frozen=True)
class CertificateReport:
    items: tuple[CertItem, ...]
    constants: dict = field(default_factory=lambda: dict(CONSTANTS))

    @property
    def all_passed(self) -> bool:
        return all(i.passed for i in self.items if not i.informational)

    def failing(self) -> list[CertItem]:
        return [i for i in self.items if not i.passed and not i.informational]

    def to_json_dict(self) -> dict:
        return {
            "constants": {k: float(v) for k, v in sorted(self.constants.items())},
            "items": [i.to_json_dict() for i in self.items],
        }


def check_theorem1(P: Polynomial, R: RootSet, quad_tol: float = 1e-9,
                   h: "QuadResult | None" = None) -> CertItem:
    """log script_M <= 2 h: radial spread is controlled by the mean log+ size."""
    hres = h if h is not None else h_of(P, R, tol=quad_tol)
    return CertItem(
        name="theorem1_radial",
        measured=script_M(R),
        bound=2.0 * hres.real,
        tolerance=INEQUALITY_TOL + 2.0 * hres.error_estimate,
    )


def check_theorem2(P: Polynomial, R: RootSet, quad_tol: float = 1e-9,
                   h: "QuadResult | None" = None) -> CertItem:
    """D <= (8/pi) sqrt(N h): discrepancy bound from the mean log+ size."""
    hres = h if h is not None else h_of(P, R, tol=quad_tol)
    angles = schur_reduce(R)
    n = angles.total
    disc = discrepancy(angles)
    bound = EIGHT_OVER_PI * math.sqrt(n * max(hres.real, 0.0))
    if hres.real > 0:
        dbound = EIGHT_OVER_PI * math.sqrt(n) / (2.0 * math.sqrt(hres.real))
    else:
        dbound = 0.0
    return CertItem(
        name="theorem2_discrepancy",
        measured=disc.value,
        bound=bound,
        tolerance=INEQUALITY_TOL + dbound * hres.error_estimate,
        witness={
            "arc_start": disc.witness.start,
            "arc_length": disc.witness.length,
            "side": disc.side,
        },
    )


def check_theorem2_plusminus(P: Polynomial, R: RootSet) -> CertItem:
    """The +-1 coefficient specialization D <= (8/pi) sqrt(N log(N+1))."""
    coeffs = P.coeffs
    if not np.all(np.isclose(np.abs(coeffs), 1.0, rtol=0, atol=0)):
        raise ValueError("specialized bound applies to +-1 coefficient polynomials only")
    n = P.degree
    disc = discrepancy(schur_reduce(R))
    return CertItem(
        name="theorem2_plusminus",
        measured=disc.value,
        bound=EIGHT_OVER_PI * math.sqrt(n * math.log(n + 1.0)),
        tolerance=INEQUALITY_TOL,
    )


def check_band(R: RootSet, eps: float) -> CertItem:
    """At most (log script_M)/eps roots can sit outside e^{-eps} <= |z| <= e^{eps}."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    lo, hi = math.exp(-eps), math.exp(eps)
    outside = sum(e.multiplicity for e in R.entries if e.rho < lo or e.rho > hi)
    return CertItem(
        name="band_count",
        measured=float(outside),
        bound=script_M(R) / eps,
        tolerance=INEQUALITY_TOL,
        witness={"eps": eps, "band": [lo, hi]},
    )


def check_coefficient_bounds(P: Polynomial, R: RootSet | None = None,
                             quad_tol: float = 1e-9,
                             h: "QuadResult | None" = None,
                             big_h: float | None = None) -> tuple[CertItem, ...]:
    """Coefficient sandwich, h <= log H, and H >= 1, all in log scale.

    The upper sandwich is asserted with the safe N+1 constant
    (Cauchy-Schwarz over the N+1 coefficients); an informational item
    records whether the sharper N constant also held.
    """
    monic, _ = normalize_monic(P)
    a0 = abs(monic.constant)
    if a0 == 0:
        raise ValueError("constant coefficient is zero; deflate powers of z first")
    n = monic.degree
    mags = np.abs(monic.coeffs)
    top = float(np.max(mags))
    power_sum_sq = float(np.sum((mags / top) ** 2))
    log_sq_sum = 2.0 * math.log(top) + math.log(power_sum_sq)  # log sum |a_j|^2
    log_parseval = log_sq_sum - math.log(a0)
    big_h = big_h if big_h is not None else H_of(monic)
    log_h2 = 2.0 * math.log(big_h)
    if h is not None:
        hres = h
    elif R is not None:
        hres = h_of(monic, R, tol=quad_tol)
    else:
        hres = mean_log_plus(monic, math.sqrt(a0), _empty_rootset(), tol=quad_tol)
    h_tol = 2e-6 + hres.error_estimate  # H carries a 1e-6 relative certificate
    items = (
        CertItem("coeff_parseval_lower", measured=log_parseval, bound=log_h2,
                 tolerance=3e-6),
        CertItem("coeff_upper_n_plus_1", measured=log_h2,
                 bound=log_parseval + math.log(n + 1.0), tolerance=3e-6),
        CertItem("h_le_log_H", measured=hres.real, bound=math.log(big_h),
                 tolerance=h_tol),
        CertItem("H_ge_1", measured=1.0, bound=big_h, tolerance=1e-9),
        CertItem("info_coeff_upper_n", measured=log_h2,
                 bound=log_parseval + math.log(float(n)), tolerance=3e-6),
    )
    return items


def _empty_rootset() -> RootSet:
    return RootSet(entries=(), residual_bound=0.0)


def check_identities(P: Polynomial, R: RootSet, k_range: tuple[int, ...] = (1, 2, 3),
                     quad_tol: float = 1e-8) -> tuple[CertItem, ...]:
    """Residuals of the power-sum identities and the smoothed-sum bound.

    Power sums of the circle projection Q are checked against the
    boundary-integral form and the 4|k|h bound; the damped variant runs
    on P itself.  The mean |log| identity and the smoothed-sum deviation
    bound close the chain.
    """
    ks = sorted({int(k) for k in k_range if k != 0} | {-int(k) for k in k_range if k != 0})
    if not ks:
        raise ValueError("k_range must contain a nonzero k")
    items: list[CertItem] = []

    # all circle-projection quantities run in stable product form, so the
    # projected polynomial is never expanded into coefficients
    angles = schur_reduce(R)
    hq = mean_log_plus_from_angles(angles.angles, angles.multiplicities, 1.0, tol=quad_tol)

    integrals = power_sum_integral_many_from_angles(angles, ks, tol=quad_tol)
    for k in ks:
        direct = power_sum(angles, k)
        via_integral = integrals[k]
        items.append(CertItem(
            name=f"powersum_integral_k{k}",
            measured=abs(direct - via_integral.value),
            bound=0.0,
            tolerance=IDENTITY_TOL + via_integral.error_estimate,
        ))
        items.append(CertItem(
            name=f"powersum_bound_k{k}",
            measured=abs(direct),
            bound=4.0 * abs(k) * hq.real,
            tolerance=IDENTITY_TOL + 4.0 * abs(k) * hq.error_estimate,
        ))

    damped_int = damped_power_sum_integral_many(P, R, ks, tol=quad_tol)
    for k in ks:
        items.append(CertItem(
            name=f"damped_powersum_k{k}",
            measured=abs(damped_power_sum(R, k) - damped_int[k].value),
            bound=0.0,
            tolerance=IDENTITY_TOL + damped_int[k].error_estimate,
        ))

    # direct quadrature of |log|Q|| against twice the mean log+ of the
    # projection (Jensen kills the plain mean log, so the two must agree)
    abs_log = mean_abs_log_from_angles(angles.angles, angles.multiplicities, tol=quad_tol)
    items.append(CertItem(
        name="mean_abs_log_identity",
        measured=abs(abs_log.real - 2.0 * hq.real),
        bound=0.0,
        tolerance=IDENTITY_TOL + abs_log.error_estimate + 2.0 * hq.error_estimate,
    ))

    items.append(CertItem(
        name="theorem1_identity",
        measured=theorem1_identity_residual(P, R, tol=quad_tol),
        bound=0.0,
        tolerance=INEQUALITY_TOL + 10.0 * quad_tol,
    ))

    sched = delta_schedule(hq.real, angles.total)
    g = build_smoothed_indicator(Arc(0.0, math.pi), sched.delta)
    ssum = smoothed_sum(angles, g)
    items.append(CertItem(
        name="smoothed_sum_bound",
        measured=abs(ssum.value - angles.total * g.g0),
        bound=4.0 * g.Gmax_bound * hq.real,
        tolerance=IDENTITY_TOL + ssum.truncation_bound
                  + 4.0 * g.Gmax_bound * hq.error_estimate,
    ))
    return tuple(items)


@dataclass(frozen=True)
class DeltaSchedule:
    """Kernel width 4 sqrt(h/N) balancing the smoothing and widening terms."""

    delta: float
    term_kernel: float     # 16 h / (pi delta)
    term_widening: float   # N delta / pi
    clamped: bool
    flat: bool             # h = 0: returned the clamp floor


DELTA_FLOOR = 1e-6
DELTA_CEIL = math.pi - 1e-6


def delta_schedule(h: float, N: int) -> DeltaSchedule:
    if h < 0:
        raise ValueError("h must be nonnegative")
    if N < 1:
        raise ValueError("N must be >= 1")
    flat = h == 0.0
    raw = 0.0 if flat else 4.0 * math.sqrt(h / N)
    delta = min(max(raw, DELTA_FLOOR), DELTA_CEIL)
    return DeltaSchedule(
        delta=delta,
        term_kernel=16.0 * h / (math.pi * delta),
        term_widening=N * delta / math.pi,
        clamped=(delta != raw),
        flat=flat,
    )


def certificate_report(P: Polynomial, R: RootSet, band_eps: float | None = None,
                       k_range: tuple[int, ...] = (1, 2, 3),
                       quad_tol: float = 1e-8,
                       h: QuadResult | None = None,
                       big_h: float | None = None) -> CertificateReport:
    """The default certificate battery used by the analyze pipeline.

    h and big_h may be passed in when the caller already computed them;
    they are pure functions of (P, R), so reuse only saves time.
    """
    if h is None:
        h = h_of(P, R, tol=quad_tol)
    items: list[CertItem] = [
        check_theorem1(P, R, h=h),
        check_theorem2(P, R, h=h),
    ]
    monic, _ = normalize_monic(P)
    if np.allclose(np.abs(monic.coeffs), 1.0, rtol=0, atol=1e-12):
        items.append(check_theorem2_plusminus(monic, R))
    if band_eps is None:
        logm = script_M(R)
        band_eps = max(math.sqrt(max(logm, 0.0) / max(R.degree, 1)), 1e-3)
    items.append(check_band(R, band_eps))
    items.extend(check_coefficient_bounds(P, R, h=h, big_h=big_h))
    items.extend(check_identities(P, R, k_range=k_range, quad_tol=quad_tol))
    return CertificateReport(items=tuple(items))
