"""Size measures of a polynomial relative to the unit circle.

All measures are taken on the monic normalization and require a
nonzero constant coefficient (callers deflate powers of z first).

h_of   - mean positive log-magnitude on the circle, scaled by sqrt|a_0|
H_of   - peak magnitude on the circle, scaled by sqrt|a_0|
script_M - log of the product of max(rho, 1/rho) over the roots
mahler - |a_N| times the product of max(1, rho) over the roots
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .poly import Polynomial, eval_circle_many, normalize_monic
from .quadrature import QuadResult, mean_log_abs, mean_log_plus
from .rootfind import RootSet

# Bernstein-style certification target for the circle maximum.
_H_CERT_REL = 1e-6
_H_FFT_FACTOR = 8192
_H_FFT_CAP = 1 << 24


@dataclass(frozen=True)
class MeasureReport:
    h: float
    H: float
    log_script_M: float
    log_mahler: float
    quadrature_error: float


def _require_constant(P: Polynomial) -> float:
    a0 = abs(P.constant)
    if a0 == 0:
        raise ValueError("constant coefficient is zero; deflate powers of z first")
    return a0


def h_of(P: Polynomial, R: RootSet, tol: float = 1e-9) -> QuadResult:
    """Mean of log+ (|P(e^{i theta})| / sqrt|a_0|) on the monic normalization."""
    monic, _ = normalize_monic(P)
    a0 = _require_constant(monic)
    return mean_log_plus(monic, math.sqrt(a0), R, tol=tol)


def _next_pow2(n: int) -> int:
    m = 1
    while m < n:
        m <<= 1
    return m


def H_of(P: Polynomial) -> float:
    """max over the circle of |P(e^{i theta})| / sqrt|a_0|, certified to 1e-6.

    A dense uniform scan (one FFT) pins the maximum: for the trig
    polynomial |P|^2 of degree N, a grid of M points certifies
    max <= best_sample / (1 - (2 pi N / M)^2 / 8) by the Bernstein
    derivative bound, after which golden-section refinement around the
    best sample polishes the value itself.
    """
    monic, _ = normalize_monic(P)
    a0 = _require_constant(monic)
    n = monic.degree
    m = min(_next_pow2(max(4096, _H_FFT_FACTOR * n)), _H_FFT_CAP)
    padded = np.zeros(m, dtype=np.complex128)
    padded[: n + 1] = monic.coeffs
    values = np.abs(np.fft.ifft(padded) * m)
    idx = int(np.argmax(values))
    best = float(values[idx])
    step = 2.0 * math.pi / m
    lo = (idx - 1) * step
    hi = (idx + 1) * step

    def f(theta: float) -> float:
        return float(np.abs(eval_circle_many(monic.coeffs, np.array([theta]))[0]))

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(80):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = f(x1)
        if b - a <= 1e-14 * (1.0 + abs(a)):
            break
    peak = max(best, f1, f2)
    return peak / math.sqrt(a0)


def script_M(R: RootSet) -> float:
    """log of prod max(rho_j, 1/rho_j)^{m_j}; requires every rho > 0."""
    rho = R.moduli()
    if np.any(rho == 0):
        raise ValueError("zero modulus in root set; deflate powers of z first")
    return float(np.sum(R.multiplicities() * np.abs(np.log(rho))))


def mahler(R: RootSet, lead_abs: float) -> float:
    """|a_N| * prod max(1, rho_j)^{m_j}."""
    if lead_abs <= 0:
        raise ValueError("leading coefficient magnitude must be positive")
    rho = R.moduli()
    return lead_abs * math.exp(float(np.sum(R.multiplicities() * np.log(np.maximum(rho, 1.0)))))


def theorem1_identity_residual(P: Polynomial, R: RootSet, tol: float = 1e-9) -> float:
    """|2 * mean log(|P_monic|/sqrt|a_0|) - log script_M|, both sides independent.

    The left side comes from quadrature, the right side from the root
    moduli; the two agree exactly in exact arithmetic (Jensen's formula
    applied inside and outside the disk).  Raises if quadrature fails
    to converge.
    """
    monic, _ = normalize_monic(P)
    a0 = _require_constant(monic)
    mla = mean_log_abs(monic, R, tol=tol)
    if not mla.converged:
        raise ArithmeticError("quadrature did not converge for the identity check")
    lhs = 2.0 * mla.real - math.log(a0)
    return abs(lhs - script_M(R))


def measure_report(P: Polynomial, R: RootSet, tol: float = 1e-9) -> MeasureReport:
    """All measures of the monic normalization in one pass."""
    monic, _ = normalize_monic(P)
    hres = h_of(monic, R, tol=tol)
    return MeasureReport(
        h=hres.real,
        H=H_of(monic),
        log_script_M=script_M(R),
        log_mahler=math.log(mahler(R, 1.0)),
        quadrature_error=hres.error_estimate,
    )
