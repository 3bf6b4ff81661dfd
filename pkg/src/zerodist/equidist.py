"""Angular statistics of zeros on the unit circle.

Covers the radial-projection reduction (replace rho e^{i theta} by
e^{i theta}, which never increases |P|/sqrt|a_0| on the circle), arc
counts, the exact circle discrepancy, power sums and their boundary
integral form, the triangular smoothing kernel, and smoothed indicator
sums used by the certification layer.

Discrepancy convention: the excess side is the supremum of
count - N|I|/2pi over closed arcs; it is attained at arcs whose
endpoints are angle positions.  The deficit side, a supremum over open
arcs, takes the same values through the exact complementary-arc
identity N(I) - N|I|/2pi = N|I^c|/2pi - N(I^c), so both the sweep and
the brute-force oracle evaluate the one canonical closed-arc formula
per ordered pair and are bitwise comparable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .poly import TWO_PI, Arc, Polynomial, normalize_monic, reduce_angle
from .quadrature import (
    QuadResult,
    _panelize,
    _refine_loop,
    _root_angles,
    _singular_angles,
    integrate_periodic,
    logmag_from_angles,
    stable_logmag,
)
from .rootfind import RootSet

BRUTE_FORCE_LIMIT = 512
_FOURIER_TAIL_MASS = 1e-9


@dataclass(frozen=True)
class UnitAngleSet:
    """Sorted distinct angles in [0, 2*pi) with multiplicities summing to N."""

    angles: np.ndarray
    multiplicities: np.ndarray

    def __post_init__(self) -> None:
        ang = np.asarray(self.angles, dtype=np.float64)
        mul = np.asarray(self.multiplicities, dtype=np.int64)
        if ang.size == 0:
            raise ValueError("angle set must be non-empty")
        if ang.size != mul.size:
            raise ValueError("angles and multiplicities must have equal length")
        if np.any(mul < 1):
            raise ValueError("multiplicities must be >= 1")
        if np.any(np.diff(ang) <= 0):
            raise ValueError("angles must be strictly increasing")
        if ang[0] < 0 or ang[-1] >= TWO_PI:
            raise ValueError("angles must lie in [0, 2*pi)")
        ang = ang.copy(); ang.setflags(write=False)
        mul = mul.copy(); mul.setflags(write=False)
        object.__setattr__(self, "angles", ang)
        object.__setattr__(self, "multiplicities", mul)

    @property
    def total(self) -> int:
        return int(self.multiplicities.sum())

    @classmethod
    def from_values(cls, angles: Iterable[float], multiplicities: Iterable[int] | None = None
                    ) -> "UnitAngleSet":
        ang = [reduce_angle(a) for a in angles]
        mul = list(multiplicities) if multiplicities is not None else [1] * len(ang)
        merged: dict[float, int] = {}
        for a, m in zip(ang, mul):
            merged[a] = merged.get(a, 0) + int(m)
        keys = sorted(merged)
        return cls(np.array(keys), np.array([merged[k] for k in keys]))


def schur_reduce(R: RootSet) -> UnitAngleSet:
    """Project roots to the unit circle, keeping angles and multiplicities."""
    if any(e.rho == 0 for e in R.entries):
        raise ValueError("zero modulus has no angle; deflate powers of z first")
    return UnitAngleSet.from_values([e.theta for e in R.entries],
                                    [e.multiplicity for e in R.entries])


def count_in_arc(A: UnitAngleSet, I: Arc) -> int:
    """Multiplicity-weighted count of angles on the closed arc (wraparound ok)."""
    d = A.angles - I.start
    d = np.where(d < 0.0, d + TWO_PI, d)
    return int(A.multiplicities[d <= I.length].sum())


class DiscrepancyResult(NamedTuple):
    value: float
    witness: Arc
    side: str                 # "excess" or "deficit"
    limit_witness: bool       # True when the witness is a limiting (open/degenerate) arc


def _closed_pair_deviation(count: int, length: float, n_total: float) -> float:
    """Canonical deviation of the closed arc candidate; shared with the oracle."""
    return float(count) - (n_total * length) / TWO_PI


def discrepancy(A: UnitAngleSet) -> DiscrepancyResult:
    """Worst-case deviation of arc counts from the equidistributed expectation.

    Evaluates the canonical closed-arc deviation over all ordered pairs
    of angle positions (i == j is the degenerate point arc).  The
    deficit side over open arcs reuses the same values through the
    complementary-arc identity; the reported witness picks whichever
    representation has the shorter arc.
    """
    ang = A.angles
    mul = A.multiplicities.astype(np.int64)
    n = ang.size
    big_n = int(mul.sum())
    nf = float(big_n)
    prefix = np.concatenate([[0], np.cumsum(mul)])  # prefix[k] = sum of first k

    best = -math.inf
    best_pair = (0, 0)
    block = 1024
    for i0 in range(0, n, block):
        i1 = min(i0 + block, n)
        ii = np.arange(i0, i1)
        # counts: prefix[j+1] - prefix[i] (+N when wrapped, i.e. j < i)
        counts = prefix[None, 1:] - prefix[ii + 1, None] + mul[ii, None]
        counts = counts + big_n * (np.arange(n)[None, :] < ii[:, None])
        lengths = ang[None, :] - ang[ii, None]
        lengths = np.where(lengths < 0.0, lengths + TWO_PI, lengths)
        lengths[np.arange(i1 - i0), ii] = 0.0
        devs = counts.astype(np.float64) - (nf * lengths) / TWO_PI
        local = int(np.argmax(devs))
        li, lj = divmod(local, n)
        if devs[li, lj] > best:
            best = float(devs[li, lj])
            best_pair = (i0 + li, lj)
    i, j = best_pair
    if i == j:
        length = 0.0
    else:
        length = ang[j] - ang[i]
        if length < 0.0:
            length += TWO_PI
    if length <= math.pi:
        return DiscrepancyResult(best, Arc(ang[i], length), "excess", length == 0.0)
    return DiscrepancyResult(best, Arc(ang[j], TWO_PI - length), "deficit", True)


def discrepancy_bruteforce(A: UnitAngleSet) -> float:
    """Exhaustive oracle over the same candidate arcs as discrepancy().

    Pure-Python loops, same canonical per-pair arithmetic, so the two
    agree bitwise.  Refuses sets larger than BRUTE_FORCE_LIMIT points.
    """
    n = A.angles.size
    if A.total > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force limited to N <= {BRUTE_FORCE_LIMIT}")
    ang = [float(a) for a in A.angles]
    mul = [int(m) for m in A.multiplicities]
    big_n = sum(mul)
    nf = float(big_n)
    prefix = [0]
    for m in mul:
        prefix.append(prefix[-1] + m)
    best = -math.inf
    for i in range(n):
        for j in range(n):
            if i == j:
                count = mul[i]
                length = 0.0
            else:
                count = prefix[j + 1] - prefix[i]
                if j < i:
                    count += big_n
                length = ang[j] - ang[i]
                if length < 0.0:
                    length += TWO_PI
            dev = _closed_pair_deviation(count, length, nf)
            if dev > best:
                best = dev
    return best


def power_sum(A: UnitAngleSet, k: int) -> complex:
    """sum of m_j e^{i k theta_j}; k = 0 is excluded by the identity it feeds."""
    if k == 0:
        raise ValueError("k must be nonzero")
    return complex(np.sum(A.multiplicities * np.exp(1j * k * A.angles)))


def _oscillatory_panels(breakpoints: list[float], singular: list[float],
                        k_max: int) -> list[tuple[float, float]]:
    panels = _panelize(breakpoints, singular)
    out: list[tuple[float, float]] = []
    for a, b in panels:
        parts = max(1, math.ceil((b - a) * max(1, k_max) / math.pi))
        if parts == 1:
            out.append((a, b))
        else:
            cuts = np.linspace(a, b, parts + 1)
            out.extend((float(lo), float(hi)) for lo, hi in zip(cuts[:-1], cuts[1:]))
    return out


def _log_integrals_weighted(logmag, breakpoints: list[float], singular: list[float],
                            ks: Sequence[int], subtract: float,
                            tol: float) -> dict[int, QuadResult]:
    """Integrals of e^{ik theta} (log|P| - subtract) for several k at once.

    All k share one adaptive panel set; refinement is driven by the
    worst per-panel error over the k family.
    """
    karr = np.array(list(ks), dtype=np.float64)

    def eval_nodes(thetas: np.ndarray) -> np.ndarray:
        logs = logmag(thetas) - subtract
        weights = np.exp(1j * karr[:, None] * thetas[None, :])
        return weights * logs[None, :]

    panels = _oscillatory_panels(breakpoints, singular, int(np.max(np.abs(karr))))
    values, errors, used, ok = _refine_loop(eval_nodes, panels, tol, 50_000)
    out = {}
    for idx, k in enumerate(ks):
        out[k] = QuadResult(value=complex(values[idx]), error_estimate=float(errors[idx]),
                            panels_used=used, converged=ok)
    return out


def _as_power_sums(raw: dict[int, QuadResult]) -> dict[int, QuadResult]:
    out = {}
    for k, res in raw.items():
        factor = abs(k) / math.pi
        out[k] = QuadResult(value=-factor * res.value,
                            error_estimate=factor * res.error_estimate,
                            panels_used=res.panels_used, converged=res.converged)
    return out


def power_sum_integral_many(P: Polynomial, R: RootSet, ks: Sequence[int],
                            tol: float = 1e-8) -> dict[int, QuadResult]:
    """Boundary-integral power sums -(|k|/pi) int e^{ik theta} log|P| d theta.

    Valid when every root modulus is 1 to within 1e-9 (all the log mass
    sits on the circle); use the damped variant otherwise.
    """
    if any(k == 0 for k in ks):
        raise ValueError("k must be nonzero")
    if any(abs(e.rho - 1.0) > 1e-9 for e in R.entries):
        raise ValueError("roots are off the unit circle; use damped_power_sum instead")
    monic, _ = normalize_monic(P)
    raw = _log_integrals_weighted(stable_logmag(monic, R), _root_angles(R),
                                  _singular_angles(R), ks, 0.0, tol)
    return _as_power_sums(raw)


def power_sum_integral_many_from_angles(A: UnitAngleSet, ks: Sequence[int],
                                        tol: float = 1e-8) -> dict[int, QuadResult]:
    """Boundary-integral power sums of the unit-root polynomial with angles A.

    log|Q| is evaluated in stable product form, so this route works at
    degrees where expanding Q into coefficients would lose precision.
    """
    if any(k == 0 for k in ks):
        raise ValueError("k must be nonzero")
    logmag = logmag_from_angles(A.angles, A.multiplicities)
    breaks = list(A.angles)
    raw = _log_integrals_weighted(logmag, breaks, breaks, ks, 0.0, tol)
    return _as_power_sums(raw)


def power_sum_integral(P: Polynomial, R: RootSet, k: int, tol: float = 1e-8) -> QuadResult:
    """Single-k convenience wrapper around power_sum_integral_many."""
    return power_sum_integral_many(P, R, [k], tol=tol)[k]


def damped_power_sum(R: RootSet, k: int) -> complex:
    """sum of m_j min(rho_j, 1/rho_j)^{|k|} e^{i k theta_j}."""
    if k == 0:
        raise ValueError("k must be nonzero")
    rho = R.moduli()
    if np.any(rho == 0):
        raise ValueError("zero modulus; deflate powers of z first")
    damp = np.minimum(rho, 1.0 / rho) ** abs(k)
    return complex(np.sum(R.multiplicities() * damp * np.exp(1j * k * R.angles())))


def damped_power_sum_integral_many(P: Polynomial, R: RootSet, ks: Sequence[int],
                                   tol: float = 1e-8) -> dict[int, QuadResult]:
    """-(|k|/pi) int e^{ik theta} log(|P(e^{i theta})| / sqrt|a_0|) d theta."""
    if any(k == 0 for k in ks):
        raise ValueError("k must be nonzero")
    monic, _ = normalize_monic(P)
    a0 = abs(monic.constant)
    if a0 == 0:
        raise ValueError("constant coefficient is zero; deflate powers of z first")
    raw = _log_integrals_weighted(stable_logmag(monic, R), _root_angles(R),
                                  _singular_angles(R), ks, 0.5 * math.log(a0), tol)
    return _as_power_sums(raw)


def damped_power_sum_integral(P: Polynomial, R: RootSet, k: int, tol: float = 1e-8) -> QuadResult:
    return damped_power_sum_integral_many(P, R, [k], tol=tol)[k]


@dataclass(frozen=True)
class SmoothingKernel:
    """Triangular hat of half-width delta: nonnegative with nonnegative
    Fourier coefficients and unit mean, peak value 2*pi/delta."""

    delta: float

    def __post_init__(self) -> None:
        if not (0.0 < self.delta < math.pi):
            raise ValueError("delta must lie in (0, pi)")


def kernel_value(K: SmoothingKernel, theta: float) -> float:
    """(2*pi/delta^2) * max(delta - |theta|, 0) on the wrapped angle."""
    w = reduce_angle(theta)
    if w > math.pi:
        w -= TWO_PI
    return (TWO_PI / K.delta ** 2) * max(K.delta - abs(w), 0.0)


def kernel_fourier(K: SmoothingKernel, k: int) -> float:
    """Fourier coefficients: 1 at k = 0, else (sin(k delta/2) / (k delta/2))^2."""
    if k == 0:
        return 1.0
    x = 0.5 * k * K.delta
    s = math.sin(x) / x
    return s * s


@dataclass(frozen=True)
class SmoothedIndicator:
    """Widened-arc indicator convolved with the triangular kernel.

    fourier[k] holds g-hat(k) for k = 0..k_max (negative k by
    conjugation); g majorizes the indicator of the original arc, and
    the derivative-weighted series sum |k| g-hat(k) e^{ik theta} is
    bounded by Gmax_bound = 4/(pi delta).
    """

    arc: Arc
    delta: float
    widened_arc: Arc
    fourier: np.ndarray
    g0: float
    Gmax_bound: float
    tail_mass: float
    full_circle: bool

    def fourier_coeff(self, k: int) -> complex:
        if abs(k) >= self.fourier.size:
            return 0.0 + 0.0j
        if k >= 0:
            return complex(self.fourier[k])
        return complex(np.conj(self.fourier[-k]))

    @property
    def k_max(self) -> int:
        return self.fourier.size - 1

    def values(self, thetas: np.ndarray) -> np.ndarray:
        """g(theta) from the truncated Fourier series (vectorized)."""
        thetas = np.asarray(thetas, dtype=np.float64)
        out = np.full(thetas.shape, self.g0)
        chunk = 8192
        for k0 in range(1, self.fourier.size, chunk):
            k1 = min(k0 + chunk, self.fourier.size)
            karr = np.arange(k0, k1)
            phases = np.exp(1j * karr[:, None] * thetas[None, :])
            out = out + 2.0 * np.real(self.fourier[k0:k1][:, None] * phases).sum(axis=0)
        return out

    def grid_values(self, m: int) -> np.ndarray:
        """g on the uniform grid theta_i = 2*pi*i/m via modular folding + FFT."""
        folded = np.zeros(m, dtype=np.complex128)
        karr = np.arange(1, self.fourier.size)
        np.add.at(folded, karr % m, self.fourier[1:])
        vals = np.fft.ifft(folded) * m
        return self.g0 + 2.0 * np.real(vals)

    def derivative_series_grid(self, m: int) -> np.ndarray:
        """|sum_k |k| g-hat(k) e^{ik theta}| on the uniform m-grid."""
        folded = np.zeros(m, dtype=np.complex128)
        karr = np.arange(1, self.fourier.size)
        np.add.at(folded, karr % m, karr * self.fourier[1:])
        vals = np.fft.ifft(folded) * m
        return np.abs(2.0 * np.real(vals))


def build_smoothed_indicator(I: Arc, delta: float, k_max: int | None = None) -> SmoothedIndicator:
    """Convolve the delta-widened arc indicator with the triangular kernel.

    g-hat(k) is the product of the widened-arc indicator transform
    (e^{-ik alpha} - e^{-ik beta}) / (2 pi i k) and the kernel transform.
    When |I| + 2 delta covers the circle the widened arc clamps to the
    whole circle and g is identically 1.  The automatic k_max makes the
    neglected coefficient mass sum_{|k|>k_max} |g-hat(k)| at most 1e-9.
    """
    if not (0.0 < delta < math.pi):
        raise ValueError("delta must lie in (0, pi)")
    if I.length <= 0.0:
        raise ValueError("arc must have positive length")
    if k_max is not None and k_max < 1:
        raise ValueError("k_max must be >= 1")
    full = I.length + 2.0 * delta >= TWO_PI
    if full:
        widened = Arc(0.0, TWO_PI)
        g0 = 1.0
    else:
        widened = Arc(reduce_angle(I.start - delta), I.length + 2.0 * delta)
        g0 = (I.length + 2.0 * delta) / TWO_PI
    if k_max is None:
        # tail bound sum_{|k|>K} |ghat| <= 4/(pi delta^2 K^2)
        k_max = max(8, math.ceil(2.0 / (delta * math.sqrt(math.pi * _FOURIER_TAIL_MASS))))
    fourier = np.zeros(k_max + 1, dtype=np.complex128)
    fourier[0] = g0
    if not full:
        alpha = widened.start
        beta = widened.start + widened.length
        karr = np.arange(1, k_max + 1, dtype=np.float64)
        ind_hat = (np.exp(-1j * karr * alpha) - np.exp(-1j * karr * beta)) / (TWO_PI * 1j * karr)
        x = 0.5 * karr * delta
        ker_hat = (np.sin(x) / x) ** 2
        fourier[1:] = ind_hat * ker_hat
    tail = 0.0 if full else 4.0 / (math.pi * delta ** 2 * k_max ** 2)
    fourier.setflags(write=False)
    return SmoothedIndicator(arc=I, delta=delta, widened_arc=widened, fourier=fourier,
                             g0=g0, Gmax_bound=4.0 / (math.pi * delta), tail_mass=tail,
                             full_circle=full)


class SmoothedSum(NamedTuple):
    value: float
    truncation_bound: float


def smoothed_sum(A: UnitAngleSet, g: SmoothedIndicator) -> SmoothedSum:
    """sum of m_j g(theta_j) via the truncated Fourier expansion.

    truncation_bound = N * (neglected coefficient mass) bounds the error
    against the untruncated series.
    """
    total = float(A.total) * g.g0
    chunk = 8192
    ang = A.angles
    mul = A.multiplicities.astype(np.float64)
    for k0 in range(1, g.fourier.size, chunk):
        k1 = min(k0 + chunk, g.fourier.size)
        karr = np.arange(k0, k1)
        phases = np.exp(1j * karr[:, None] * ang[None, :])
        ps = phases @ mul
        total += 2.0 * float(np.real(np.sum(g.fourier[k0:k1] * ps)))
    return SmoothedSum(total, A.total * g.tail_mass)


def smoothed_sum_direct(A: UnitAngleSet, g: SmoothedIndicator, tol: float = 1e-12) -> float:
    """Oracle: per-angle convolution integral, no Fourier series involved."""
    kernel = SmoothingKernel(g.delta)
    wid = g.widened_arc
    total = 0.0
    for theta, m in zip(A.angles, A.multiplicities):
        if g.full_circle:
            total += float(m)
            continue

        def integrand(alphas: np.ndarray) -> np.ndarray:
            inside = np.array([wid.contains(float(a)) for a in alphas], dtype=np.float64)
            kv = np.array([kernel_value(kernel, float(theta - a)) for a in alphas])
            return (inside * kv).astype(np.complex128)

        breaks = [wid.start, wid.start + wid.length, theta - g.delta, theta, theta + g.delta]
        res = integrate_periodic(integrand, breakpoints=breaks, tol=tol * TWO_PI)
        total += float(m) * res.real / TWO_PI
    return total


def sin_abs_partial(x: float, L: int) -> float:
    """Partial Fourier sum of |sin x|: 2/pi - (4/pi) sum_{l<=L} cos(2lx)/(4l^2-1)."""
    if L < 1:
        raise ValueError("L must be >= 1")
    ell = np.arange(1, L + 1, dtype=np.float64)
    return 2.0 / math.pi - (4.0 / math.pi) * float(
        np.sum(np.cos(2.0 * ell * x) / (4.0 * ell ** 2 - 1.0)))


def sin_abs_tail_bound(L: int) -> float:
    """Exact neglected mass (4/pi) sum_{l>L} 1/(4l^2-1), telescoped."""
    if L < 1:
        raise ValueError("L must be >= 1")
    return (2.0 / math.pi) / (2.0 * L + 1.0)
