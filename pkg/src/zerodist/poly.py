"""Complex polynomial representation, circle evaluation, and construction from roots.

Coefficients are stored low-to-high (a_0 first, leading coefficient last);
file formats use the same order.  All values are immutable after
construction, so everything here is safe for concurrent use.
"""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi

_EPS = float(np.finfo(np.float64).eps)


def reduce_angle(theta: float) -> float:
    """Reduce an angle into [0, 2*pi) with a single exact fmod reduction.

    fmod is exact for IEEE doubles, so angles that already lie in
    [0, 2*pi) pass through bitwise unchanged and shifts by exactly
    representable multiples of 2*pi cancel without drift.
    """
    r = math.fmod(theta, TWO_PI)
    if r < 0.0:
        r += TWO_PI
    return 0.0 if r == TWO_PI else r


@dataclass(frozen=True, eq=False)
class Polynomial:
    """A complex polynomial a_0 + a_1 z + ... + a_N z^N with a_N != 0.

    Trailing zero coefficients are stripped from the high end at
    construction.  A zero constant coefficient is legal here; callers
    that need a_0 != 0 deflate powers of z first.
    """

    coeffs: np.ndarray

    def __init__(self, coeffs: Iterable[complex]) -> None:
        arr = np.asarray(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs,
                         dtype=np.complex128)
        if arr.ndim != 1:
            raise ValueError("coefficients must be a one-dimensional sequence")
        n = arr.size
        while n > 0 and arr[n - 1] == 0:
            n -= 1
        if n < 2:
            raise ValueError("degree must be at least 1 (after stripping high zeros)")
        arr = arr[:n].copy()
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def constant(self) -> complex:
        return complex(self.coeffs[0])

    @property
    def lead(self) -> complex:
        return complex(self.coeffs[-1])

    def sum_abs_coeffs(self) -> float:
        return float(np.sum(np.abs(self.coeffs)))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Polynomial(degree={self.degree})"


@dataclass(frozen=True)
class Arc:
    """A closed arc {e^{i t} : t in [start, start+length]} on the unit circle.

    ``start`` is reduced into [0, 2*pi).  User-facing arcs have
    length in (0, 2*pi]; length 0 is tolerated only because the
    discrepancy sweep reports degenerate (limit) witness arcs.
    """

    start: float
    length: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.length <= TWO_PI):
            raise ValueError(f"arc length must lie in [0, 2*pi], got {self.length}")
        object.__setattr__(self, "start", reduce_angle(float(self.start)))
        object.__setattr__(self, "length", float(self.length))

    @property
    def end(self) -> float:
        """Angle of the far endpoint, reduced into [0, 2*pi)."""
        return reduce_angle(self.start + self.length)

    def contains(self, theta: float) -> bool:
        """Closed-arc membership of an angle (endpoints included)."""
        if self.length == TWO_PI:
            return True
        d = reduce_angle(theta) - self.start
        if d < 0.0:
            d += TWO_PI
        return d <= self.length


def eval_on_circle(P: Polynomial, theta: float) -> complex:
    """Evaluate P(e^{i theta}) by Horner's rule after angle reduction."""
    t = reduce_angle(theta)
    z = cmath.exp(1j * t)
    acc = complex(P.coeffs[-1])
    for a in P.coeffs[-2::-1]:
        acc = acc * z + complex(a)
    return acc


def eval_circle_many(coeffs: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """Vectorized Horner evaluation of sum a_j e^{i j theta} on an angle grid."""
    z = np.exp(1j * np.asarray(thetas, dtype=np.float64))
    acc = np.full(z.shape, coeffs[-1], dtype=np.complex128)
    for a in coeffs[-2::-1]:
        acc = acc * z + a
    return acc


def horner_with_bound(coeffs: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Horner values plus a running rounding-error bound per point.

    The bound is the standard running majorant for complex Horner: the
    true value differs from the computed one by at most ~2*eps times the
    returned scale.  Used for noise-floor detection in root finding.
    """
    z = np.asarray(z, dtype=np.complex128)
    acc = np.full(z.shape, coeffs[-1], dtype=np.complex128)
    scale = np.full(z.shape, abs(coeffs[-1]), dtype=np.float64)
    az = np.abs(z)
    for a in coeffs[-2::-1]:
        acc = acc * z + a
        scale = scale * az + np.abs(acc)
    return acc, 2.0 * _EPS * scale


def derivative_coeffs(coeffs: np.ndarray) -> np.ndarray:
    """Coefficients of the derivative, low to high."""
    n = coeffs.size - 1
    return coeffs[1:] * np.arange(1, n + 1)


def _leja_order(roots: np.ndarray) -> np.ndarray:
    """Greedy ordering maximizing the distance product to already-chosen roots.

    Multiplying factors in Leja order keeps intermediate coefficients of
    the expansion near their final size; angle-sorted clustered roots
    would otherwise inflate intermediates by binomial factors.
    """
    n = roots.size
    order = np.empty(n, dtype=np.int64)
    chosen = np.zeros(n, dtype=bool)
    first = int(np.argmax(np.abs(roots)))
    order[0] = first
    chosen[first] = True
    logdist = np.full(n, -np.inf)
    logdist[~chosen] = np.log(np.maximum(np.abs(roots[~chosen] - roots[first]), 1e-300))
    for k in range(1, n):
        nxt = int(np.argmax(np.where(chosen, -np.inf, logdist)))
        order[k] = nxt
        chosen[nxt] = True
        upd = ~chosen
        logdist[upd] += np.log(np.maximum(np.abs(roots[upd] - roots[nxt]), 1e-300))
    return order


def from_roots(roots: Sequence[complex], lead: complex = 1.0) -> Polynomial:
    """Expand lead * prod (z - alpha_j) into coefficient form (Leja order)."""
    if lead == 0:
        raise ValueError("leading coefficient must be nonzero")
    arr = np.asarray([complex(r) for r in roots], dtype=np.complex128)
    if arr.size == 0:
        raise ValueError("at least one root is required (degree-0 polynomials unsupported)")
    coeffs = np.array([complex(lead)], dtype=np.complex128)
    for alpha in arr[_leja_order(arr)]:
        nxt = np.zeros(coeffs.size + 1, dtype=np.complex128)
        nxt[1:] += coeffs
        nxt[:-1] += -alpha * coeffs
        coeffs = nxt
    return Polynomial(coeffs)


def normalize_monic(P: Polynomial) -> tuple[Polynomial, complex]:
    """Return (P / a_N, a_N).  The output leading coefficient is exactly 1."""
    lead = P.lead
    if lead == 1.0:
        return P, 1.0
    coeffs = P.coeffs / lead
    coeffs = coeffs.copy()
    coeffs[-1] = 1.0
    return Polynomial(coeffs), lead


def coeffs_to_json_dict(P: Polynomial) -> dict:
    """Coefficient file payload: {"coeffs": [[re, im], ...]} low to high."""
    return {"coeffs": [[float(c.real), float(c.imag)] for c in P.coeffs]}


def coeffs_from_json_dict(payload: dict) -> Polynomial:
    if not isinstance(payload, dict) or "coeffs" not in payload:
        raise ValueError('coefficient file must be a JSON object with a "coeffs" key')
    raw = payload["coeffs"]
    if not isinstance(raw, list) or not raw:
        raise ValueError('"coeffs" must be a non-empty list of [re, im] pairs')
    coeffs = []
    for item in raw:
        if not (isinstance(item, list) and len(item) == 2):
            raise ValueError("each coefficient must be an [re, im] pair")
        coeffs.append(complex(float(item[0]), float(item[1])))
    return Polynomial(coeffs)


def write_coeffs(P: Polynomial, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(coeffs_to_json_dict(P), fh, sort_keys=True, separators=(",", ": "))
        fh.write("\n")


def read_coeffs(path: str) -> Polynomial:
    with open(path, "r", encoding="utf-8") as fh:
        return coeffs_from_json_dict(json.load(fh))
