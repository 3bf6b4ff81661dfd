"""Simultaneous root finding with a residual certificate.

The solver is an Ehrlich-Aberth sweep on the monic normalization with
initial guesses on a circle of radius |a_0/a_N|^(1/N) (the geometric
mean of the root moduli), a small angular offset to break symmetry, and
a trust region to keep stray iterates finite.  Points whose computed
polynomial value sinks below the Horner rounding floor are frozen:
for clustered or multiple roots double precision cannot do better, and
the cluster pass below recovers the multiplicity structure.

Residuals of roots outside the unit disk are measured on the
reciprocal polynomial, i.e. |P(z)| / max(1,|z|)^N.  The plain |P(z)|
of a perfectly rounded root grows like eps * sum|a_j| * |z|^N, so the
scaled quantity is the meaningful backward-error certificate.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .poly import (
    Polynomial,
    derivative_coeffs,
    horner_with_bound,
    normalize_monic,
    reduce_angle,
)

_EPS = float(np.finfo(np.float64).eps)

MAX_SWEEPS = 500
CLUSTER_TOL = 1e-6
DEFAULT_TOL = 1e-13


class RootEntry(NamedTuple):
    rho: float
    theta: float
    multiplicity: int


@dataclass(frozen=True)
class RootSet:
    """Roots in polar form (rho_j, theta_j) with multiplicities.

    entries are sorted by angle; residual_bound is the largest scaled
    residual |P| / max(1,|z|)^N over the returned root centers.
    """

    entries: tuple[RootEntry, ...]
    residual_bound: float

    @property
    def degree(self) -> int:
        return sum(e.multiplicity for e in self.entries)

    def points(self) -> np.ndarray:
        """Root centers as complex numbers, one per entry (not per multiplicity)."""
        return np.array([e.rho * cmath.exp(1j * e.theta) for e in self.entries],
                        dtype=np.complex128)

    def moduli(self) -> np.ndarray:
        return np.array([e.rho for e in self.entries], dtype=np.float64)

    def angles(self) -> np.ndarray:
        return np.array([e.theta for e in self.entries], dtype=np.float64)

    def multiplicities(self) -> np.ndarray:
        return np.array([e.multiplicity for e in self.entries], dtype=np.int64)


class RootFindingError(RuntimeError):
    """Raised when the iteration does not converge within the sweep cap.

    Carries the best iterate and its scaled residual so callers can
    decide whether the partial result is usable.
    """

    def __init__(self, message: str, best: np.ndarray, residual: float) -> None:
        super().__init__(message)
        self.best = best
        self.residual = residual


def _scaled_residual(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    """|P(z)| for |z| <= 1, |reversed P (1/z)| = |P(z)|/|z|^N otherwise."""
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    out = np.empty(z.shape, dtype=np.float64)
    inside = np.abs(z) <= 1.0
    if np.any(inside):
        v, _ = horner_with_bound(coeffs, z[inside])
        out[inside] = np.abs(v)
    if np.any(~inside):
        v, _ = horner_with_bound(coeffs[::-1], 1.0 / z[~inside])
        out[~inside] = np.abs(v)
    return out


def _aberth(cm: np.ndarray, tol: float, maxit: int) -> tuple[np.ndarray, bool]:
    """Ehrlich-Aberth sweeps on a monic coefficient vector. Returns (roots, ok)."""
    n = cm.size - 1
    if n == 1:
        return np.array([-cm[0]], dtype=np.complex128), True
    dcoeffs = derivative_coeffs(cm)
    r0 = abs(cm[0]) ** (1.0 / n) if cm[0] != 0 else 1.0
    if not np.isfinite(r0) or r0 == 0.0:
        r0 = 1.0
    k = np.arange(n)
    z = r0 * np.exp(1j * (2.0 * np.pi * (k + 0.5) / n + 0.5 / n))
    for _ in range(maxit):
        p, floor = horner_with_bound(cm, z)
        at_noise = np.abs(p) <= 4.0 * floor
        dp, _ = horner_with_bound(dcoeffs, z)
        w = p / np.where(dp == 0, 1.0, dp)
        w = np.where(dp == 0, 0.1 * (1.0 + np.abs(z)), w)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        repel = np.sum(1.0 / diff, axis=1)
        denom = 1.0 - w * repel
        small = np.abs(denom) < 1e-30
        corr = w / np.where(small, 1.0, denom)
        corr = np.where(small, w, corr)
        cap = 0.3 * (1.0 + np.abs(z))
        ac = np.abs(corr)
        over = ac > cap
        corr = np.where(over, corr * (cap / np.where(ac == 0, 1.0, ac)), corr)
        corr = np.where(at_noise, 0.0, corr)
        z = z - corr
        done = (np.abs(corr) <= tol * (1.0 + np.abs(z))) | at_noise
        if np.all(done):
            return z, True
    return z, False


def _taylor_coeffs(coeffs: np.ndarray, c: complex, count: int) -> tuple[np.ndarray, np.ndarray]:
    """First ``count`` Taylor coefficients of P at c, with rounding scales.

    b_j = P^{(j)}(c)/j! via repeated synthetic division by (z - c); the
    scale row runs the same recurrence on |coefficients| at |c|, which
    majorizes the rounding noise of each b_j.
    """
    n = coeffs.size
    count = min(count, n)
    work = np.array(coeffs, dtype=np.complex128)
    mag = np.abs(coeffs).astype(np.float64)
    ac = abs(c)
    for j in range(count):
        for i in range(n - 2, j - 1, -1):
            work[i] = work[i] + c * work[i + 1]
            mag[i] = mag[i] + ac * mag[i + 1]
    return work[:count], mag[:count]


def _refine_multiple(coeffs: np.ndarray, c: complex, m: int) -> complex:
    """Polish an m-fold root: Newton on P^{(m-1)}, expressed in Taylor form."""
    for _ in range(60):
        b, _ = _taylor_coeffs(coeffs, c, m + 1)
        if b[m] == 0:
            break
        step = b[m - 1] / (m * b[m])
        c = c - step
        if abs(step) <= 1e-15 * (1.0 + abs(c)):
            break
    return c


def _validate_multiplicity(coeffs: np.ndarray, c: complex, m: int) -> bool:
    """Accept c as an m-fold root when b_0..b_{m-1} sit at rounding scale."""
    n = coeffs.size - 1
    b, scales = _taylor_coeffs(coeffs, c, m)
    tol = 1e4 * n * _EPS
    for j in range(m):
        gate = tol * max(scales[j], _EPS)
        if abs(b[j]) > gate:
            return False
    return True


def _cluster(coeffs: np.ndarray, z: np.ndarray) -> list[tuple[complex, int]]:
    """Group root estimates into (center, multiplicity) entries.

    Estimates within CLUSTER_TOL of each other always merge.  Beyond
    that, Newton-style inclusion disks r_i = n|P/P'| may chain wider
    noise clusters together, but such merges are kept only when the
    Taylor coefficients at the refined center certify the multiplicity.
    """
    n = z.size
    p, _ = horner_with_bound(coeffs, z)
    dp, _ = horner_with_bound(derivative_coeffs(coeffs), z)
    with np.errstate(divide="ignore", invalid="ignore"):
        radii = n * np.abs(p) / np.abs(dp)
    radii = np.where(np.isfinite(radii), radii, np.inf)

    dist = np.abs(z[:, None] - z[None, :])
    hard = dist <= CLUSTER_TOL
    soft = dist <= (radii[:, None] + radii[None, :] + CLUSTER_TOL)

    def components(adj: np.ndarray) -> list[list[int]]:
        seen = np.zeros(n, dtype=bool)
        comps = []
        for i in range(n):
            if seen[i]:
                continue
            stack, comp = [i], []
            seen[i] = True
            while stack:
                j = stack.pop()
                comp.append(j)
                nxt = np.where(adj[j] & ~seen)[0]
                seen[nxt] = True
                stack.extend(nxt.tolist())
            comps.append(sorted(comp))
        return comps

    entries: list[tuple[complex, int]] = []
    for comp in components(soft):
        m = len(comp)
        if m == 1:
            entries.append((complex(z[comp[0]]), 1))
            continue
        center = complex(np.mean(z[comp]))
        refined = _refine_multiple(coeffs, center, m)
        if _validate_multiplicity(coeffs, refined, m):
            entries.append((refined, m))
            continue
        # fall back to the unconditional short-range rule
        sub = np.array(comp)
        for subcomp in components(hard[np.ix_(sub, sub)]):
            idx = sub[subcomp]
            mm = len(idx)
            if mm == 1:
                entries.append((complex(z[idx[0]]), 1))
            else:
                center = complex(np.mean(z[idx]))
                refined = _refine_multiple(coeffs, center, mm)
                if not _validate_multiplicity(coeffs, refined, mm):
                    refined = center
                entries.append((refined, mm))
    return entries


def find_roots(P: Polynomial, tol: float = DEFAULT_TOL) -> RootSet:
    """Compute all roots of P in polar form with a residual certificate.

    Zero roots (from a_0 = 0) are deflated exactly before iteration and
    reported with rho = 0.  Raises RootFindingError if the sweeps do not
    converge or the residual certificate exceeds tol * sum|a_j|.
    """
    monic, _ = normalize_monic(P)
    cm = monic.coeffs
    v = 0
    while cm[v] == 0:
        v += 1
    entries: list[tuple[complex, int]] = []
    if v > 0:
        entries.append((0.0 + 0.0j, v))
        cm = cm[v:]

    residual = 0.0
    if cm.size > 1:
        z, ok = _aberth(cm, tol, MAX_SWEEPS)
        res = float(np.max(_scaled_residual(cm, z)))
        if not ok:
            raise RootFindingError(
                f"root iteration did not converge within {MAX_SWEEPS} sweeps "
                f"(best scaled residual {res:.3e})", z, res)
        clustered = _cluster(cm, z)
        centers = np.array([c for c, _ in clustered], dtype=np.complex128)
        residual = float(np.max(_scaled_residual(cm, centers)))
        sum_abs = float(np.sum(np.abs(cm)))
        limit = tol * sum_abs
        # noise floor: rounding alone costs ~N*eps*sum|a_j| at a true root
        if residual > max(limit, 8.0 * (cm.size - 1) * _EPS * sum_abs):
            raise RootFindingError(
                f"residual certificate {residual:.3e} exceeds {limit:.3e}", centers, residual)
        entries.extend(clustered)

    polar = [RootEntry(abs(c), reduce_angle(cmath.phase(c)) if c != 0 else 0.0, m)
             for c, m in entries]
    polar.sort(key=lambda e: (e.theta, e.rho))
    return RootSet(entries=tuple(polar), residual_bound=residual)


def verify_roots(P: Polynomial, R: RootSet) -> float:
    """Largest scaled residual over claimed roots, relative to 1 + sum|a_j|.

    Also enforces the multiplicity sum and the product invariant
    prod rho_j^{m_j} = |a_0 / a_N| (relative tolerance 1e-6, skipped
    when a_0 = 0 since zero roots make the product legitimately 0).
    """
    if R.degree != P.degree:
        raise ValueError(f"root multiplicities sum to {R.degree}, degree is {P.degree}")
    monic, _ = normalize_monic(P)
    target = abs(monic.constant)
    if target > 0.0:
        logprod = float(np.sum(R.multiplicities() * np.log(np.maximum(R.moduli(), 1e-300))))
        if abs(logprod - math.log(target)) > 1e-6:
            raise ValueError(
                f"product of root moduli (log {logprod:.6e}) disagrees with "
                f"|a_0/a_N| (log {math.log(target):.6e})")
    res = float(np.max(_scaled_residual(monic.coeffs, R.points())))
    return res / (1.0 + monic.sum_abs_coeffs())


def roots_as_complex(R: RootSet) -> list[complex]:
    """Flatten entries to a list with multiplicity repetition."""
    out: list[complex] = []
    for e in R.entries:
        out.extend([e.rho * cmath.exp(1j * e.theta)] * e.multiplicity)
    return out


def roots_from_known(roots: Sequence[complex], residual_bound: float = 0.0) -> RootSet:
    """Build a RootSet from exactly known roots (merging identical values)."""
    counted: dict[complex, int] = {}
    for r in roots:
        counted[complex(r)] = counted.get(complex(r), 0) + 1
    entries = [RootEntry(abs(c), reduce_angle(cmath.phase(c)) if c != 0 else 0.0, m)
               for c, m in counted.items()]
    entries.sort(key=lambda e: (e.theta, e.rho))
    return RootSet(entries=tuple(entries), residual_bound=float(residual_bound))
