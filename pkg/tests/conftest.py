"""Shared generators for the test suite.

Random inputs are drawn from seeded numpy Generators so every run sees
the same polynomials.
"""
from __future__ import annotations

import numpy as np
import pytest

from zerodist.poly import TWO_PI, Polynomial, from_roots


def rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_unit_angles(gen: np.random.Generator, n: int, min_sep: float = 1e-4) -> np.ndarray:
    """n angles in [0, 2*pi) with pairwise separation at least min_sep."""
    while True:
        ang = np.sort(gen.uniform(0.0, TWO_PI, n))
        gaps = np.diff(np.concatenate([ang, [ang[0] + TWO_PI]]))
        if n == 1 or np.min(gaps) >= min_sep:
            return ang


def jittered_angles(gen: np.random.Generator, n: int, jitter: float = 0.4) -> np.ndarray:
    """Angles on a jittered uniform grid; gaps stay >= (1 - 2 jitter) * 2 pi / n.

    Use for tests that need the coefficient vector itself to pin the
    angles tightly (well-conditioned instances).
    """
    base = (np.arange(n) + 0.5 + gen.uniform(-jitter, jitter, n)) * (TWO_PI / n)
    return np.sort(np.mod(base, TWO_PI))


def random_unit_root_poly(gen: np.random.Generator, n: int) -> tuple[Polynomial, np.ndarray]:
    """Monic polynomial with all roots on the unit circle, plus its angles."""
    ang = random_unit_angles(gen, n)
    roots = np.exp(1j * ang)
    return from_roots(roots), ang


def random_mixed_poly(gen: np.random.Generator, n: int,
                      lo: float = 0.5, hi: float = 2.0) -> tuple[Polynomial, np.ndarray]:
    """Monic polynomial with root moduli in [lo, hi], plus its roots."""
    ang = random_unit_angles(gen, n)
    rho = gen.uniform(lo, hi, n)
    roots = rho * np.exp(1j * ang)
    return from_roots(roots), roots


@pytest.fixture(scope="session")
def gen() -> np.random.Generator:
    return rng(20240817)
