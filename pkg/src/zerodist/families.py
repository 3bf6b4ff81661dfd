"""Generators for the built-in polynomial families and random ensembles.

Every generator is pure given its parameters; the random family draws
signs from SplitMix64 (Steele, Lea, Flood 2014), a published 64-bit
generator chosen so ensembles reproduce bit-for-bit anywhere.
"""
from __future__ import annotations

from dataclasses import dataclass

from .poly import Polynomial

# First 1024 decimal digits of pi (3 then 1023 fractional digits); the
# test suite validates the prefix against a spigot computation.
PI_DIGITS = (
    "3141592653589793238462643383279502884197169399375105820974944592"
    "3078164062862089986280348253421170679821480865132823066470938446"
    "0955058223172535940812848111745028410270193852110555964462294895"
    "4930381964428810975665933446128475648233786783165271201909145648"
    "5669234603486104543266482133936072602491412737245870066063155881"
    "7488152092096282925409171536436789259036001133053054882046652138"
    "4146951941511609433057270365759591953092186117381932611793105118"
    "5480744623799627495673518857527248912279381830119491298336733624"
    "4065664308602139494639522473719070217986094370277053921717629317"
    "6752384674818467669405132000568127145263560827785771342757789609"
    "1736371787214684409012249534301465495853710507922796892589235420"
    "1995611212902196086403441815981362977477130996051870721134999999"
    "8372978049951059731732816096318595024459455346908302642522308253"
    "3446850352619311881710100031378387528865875332083814206171776691"
    "4730359825349042875546873115956286388235378759375195778185778053"
    "2171226806613001927876611195909216420198938095257201065485863278"
)

_MASK64 = (1 << 64) - 1


def _splitmix64_stream(seed: int, count: int) -> list[int]:
    """SplitMix64: state += golden gamma; output is a finalized mix."""
    state = seed & _MASK64
    out = []
    for _ in range(count):
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        out.append(z ^ (z >> 31))
    return out


def littlewood(N: int, seed: int) -> Polynomial:
    """Random +-1 coefficients below a monic lead; the sign is the draw's high bit."""
    if N < 1:
        raise ValueError("N must be >= 1")
    draws = _splitmix64_stream(seed, N)
    coeffs = [(-1.0 if d >> 63 else 1.0) for d in draws] + [1.0]
    return Polynomial(coeffs)


def digits_pi(N: int) -> Polynomial:
    """Decimal digits of pi as coefficients, leading digit 3 at z^N.

    The coefficient of z^{N-j} is the j-th digit.  Zero digits inside
    the vector stay; a zero constant coefficient (a digit 0 at position
    N) is deflated by the corresponding power of z, lowering the degree.
    """
    if not (1 <= N <= len(PI_DIGITS) - 1):
        raise ValueError(f"N must lie in 1..{len(PI_DIGITS) - 1}")
    coeffs = [float(int(PI_DIGITS[N - i])) for i in range(N + 1)]
    v = 0
    while coeffs[v] == 0.0:
        v += 1
    return Polynomial(coeffs[v:])


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def legendre_symbol(a: int, p: int) -> int:
    """Quadratic residue character mod an odd prime via Euler's criterion."""
    if p < 3 or p % 2 == 0 or not _is_prime(p):
        raise ValueError("p must be an odd prime")
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return -1 if r == p - 1 else 1


def fekete(p: int) -> tuple[Polynomial, int]:
    """Quadratic-character coefficients mod p, with the zero root at z = 0 deflated.

    The raw polynomial sum_{j<p} (j|p) z^j has constant term (0|p) = 0;
    one power of z is divided out, so the result has degree p - 2 and
    constant coefficient (1|p) = 1.  Returns (polynomial, deflation order).
    """
    if not _is_prime(p) or p < 3:
        raise ValueError("p must be an odd prime >= 3")
    coeffs = [float(legendre_symbol(j, p)) for j in range(p)]
    assert coeffs[0] == 0.0
    return Polynomial(coeffs[1:]), 1


def lehmer() -> Polynomial:
    """The degree-10 integer polynomial with the record-small Mahler measure."""
    return Polynomial([1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])


def binomial_pow(N: int) -> Polynomial:
    """(z - 1)^N with binomial coefficients from the Pascal recurrence."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if N > 1000:
        raise ValueError("binomial coefficients overflow doubles beyond N = 1000")
    row = [1]
    for _ in range(N):
        row = [1] + [row[i] + row[i + 1] for i in range(len(row) - 1)] + [1]
    coeffs = [float((-1) ** (N - j) * row[j]) for j in range(N + 1)]
    return Polynomial(coeffs)


def shrunk_power(N: int, c: float) -> Polynomial:
    """z^N - c; for c = 2^-N all roots sit on the circle of radius 1/2."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if c <= 0:
        raise ValueError("c must be positive")
    coeffs = [0.0] * (N + 1)
    coeffs[0] = -c
    coeffs[N] = 1.0
    return Polynomial(coeffs)


def roots_of_unity(N: int) -> Polynomial:
    """z^N - 1."""
    if N < 1:
        raise ValueError("N must be >= 1")
    coeffs = [0.0] * (N + 1)
    coeffs[0] = -1.0
    coeffs[N] = 1.0
    return Polynomial(coeffs)


KINDS = ("littlewood", "digits_pi", "fekete", "lehmer", "binomial_pow",
         "shrunk_power", "roots_of_unity", "custom")


@dataclass(frozen=True)
class FamilySpec:
    """Family selector mirroring the CLI JSON: kind plus N / p / c / seed."""

    kind: str
    N: int | None = None
    p: int | None = None
    c: float | None = None
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}; choose from {KINDS}")

    def to_json_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        for key in ("N", "p", "c", "seed"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        return out

    @classmethod
    def from_json_dict(cls, payload: dict) -> "FamilySpec":
        if "kind" not in payload:
            raise ValueError('family JSON needs a "kind" field')
        return cls(
            kind=payload["kind"],
            N=int(payload["N"]) if payload.get("N") is not None else None,
            p=int(payload["p"]) if payload.get("p") is not None else None,
            c=float(payload["c"]) if payload.get("c") is not None else None,
            seed=int(payload["seed"]) if payload.get("seed") is not None else None,
        )


def build_family(spec: FamilySpec) -> tuple[Polynomial, str]:
    """Instantiate a family member; returns (polynomial, description)."""
    k = spec.kind
    if k == "littlewood":
        if spec.N is None or spec.seed is None:
            raise ValueError("littlewood needs N and seed")
        return littlewood(spec.N, spec.seed), f"littlewood N={spec.N} seed={spec.seed}"
    if k == "digits_pi":
        if spec.N is None:
            raise ValueError("digits_pi needs N")
        return digits_pi(spec.N), f"digits_pi N={spec.N}"
    if k == "fekete":
        if spec.p is None:
            raise ValueError("fekete needs p")
        poly, order = fekete(spec.p)
        return poly, f"fekete p={spec.p} (z^{order} deflated)"
    if k == "lehmer":
        return lehmer(), "lehmer"
    if k == "binomial_pow":
        if spec.N is None:
            raise ValueError("binomial_pow needs N")
        return binomial_pow(spec.N), f"binomial_pow N={spec.N}"
    if k == "shrunk_power":
        if spec.N is None or spec.c is None:
            raise ValueError("shrunk_power needs N and c")
        return shrunk_power(spec.N, spec.c), f"shrunk_power N={spec.N} c={spec.c}"
    if k == "roots_of_unity":
        if spec.N is None:
            raise ValueError("roots_of_unity needs N")
        return roots_of_unity(spec.N), f"roots_of_unity N={spec.N}"
    raise ValueError("custom families are supplied as coefficient files")
