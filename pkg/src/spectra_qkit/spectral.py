"""Patterson-Selberg zeta function of the cyclic group generated by diag(e^z, e^-z).

``Z(s) = prod_{k1,k2>=0} [1 - e^{i beta (k1-k2)} e^{-(k1+k2+s) alpha}]`` is the
defining (entire) representation.  The logarithmic series

    log Z(s) = -1/4 sum_n e^{-n alpha (s-1)} / (n [sinh^2(alpha n/2) + sin^2(beta n/2)])

is an independent route valid for Re s > 0.  The lattice is truncated along
diagonals k1 + k2 <= K because the factor modulus depends on k1 + k2 only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

import mpmath
import numpy as np

from .errors import BudgetError, CutoffError, DomainError, PoleError
from .params import Estimate, ModularParameter, TruncationPolicy, combine, rounding_bound

RATIO_VARIANTS = ("plain", "conjugate", "eta-shifted", "conjugate-eta-shifted")
R_READINGS = ("ratio", "triple")
POLE_TOL = 1e-12


@dataclass(frozen=True, order=True)
class ZeroIndex:
    n: int
    k1: int
    k2: int

    def __post_init__(self) -> None:
        if self.k1 < 0 or self.k2 < 0:
            raise DomainError(f"k1, k2 must be >= 0, got {self.k1}, {self.k2}")

    def location(self, tau: ModularParameter) -> complex:
        """-(k1+k2) + i(k1-k2) beta/alpha + 2 pi i n/alpha."""
        return complex(-(self.k1 + self.k2), (self.k1 - self.k2) * tau.t + self.n / tau.im)


class ZeroResidual(NamedTuple):
    index: ZeroIndex
    zeta: complex
    residual: float
    tail: float
    cutoff: int


@lru_cache(maxsize=32)
def _lattice(cutoff: int) -> tuple[np.ndarray, np.ndarray]:
    """(k1 - k2, k1 + k2) over the triangle k1 + k2 <= cutoff."""
    diffs, totals = [], []
    for total in range(cutoff + 1):
        for k1 in range(total + 1):
            diffs.append(2 * k1 - total)
            totals.append(total)
    d, t = np.array(diffs, dtype=float), np.array(totals, dtype=float)
    d.flags.writeable = False
    t.flags.writeable = False
    return d, t


def _product_log_tail(sigma: float, cutoff: int, alpha: float) -> float:
    """Bound on |log Z - log Z_K|, using |log(1-x)| <= |x|/(1-|x|) on each omitted diagonal."""
    m = cutoff + 1
    if m + sigma <= 0:
        return math.inf
    x = math.exp(-alpha)
    # sum_{d >= m} (d+1) x^d
    diag = x ** m * ((m + 1) / (1 - x) + x / (1 - x) ** 2)
    return math.exp(-sigma * alpha) * diag / (1 - math.exp(-(m + sigma) * alpha))


def _product_cutoff(sigma: float, tau: ModularParameter, policy: TruncationPolicy, minimum: int = 0) -> int:
    if not policy.adaptive:
        if policy.cutoff + 1 + sigma <= 0:
            raise CutoffError(f"cutoff {policy.cutoff} omits growing factors at Re s = {sigma}")
        return max(policy.cutoff, minimum)
    cutoff = max(minimum, 0, math.floor(-sigma - 1) + 1)
    while _product_log_tail(sigma, cutoff, tau.alpha) >= policy.tol:
        cutoff += 1
        if cutoff > policy.cutoff:
            raise BudgetError(f"product tail above {policy.tol:g} at cutoff {policy.cutoff} (Re s = {sigma})")
    return cutoff


def _factors(s: complex, tau: ModularParameter, cutoff: int) -> np.ndarray:
    diff, total = _lattice(cutoff)
    w = 1j * tau.beta * diff - (total + s) * tau.alpha
    return -np.expm1(w)


def z_gamma_product(s: complex, tau: ModularParameter, policy: TruncationPolicy | None = None) -> Estimate:
    """Z(s) from the lattice product, with a bound on the truncation error."""
    policy = policy or TruncationPolicy.default()
    s = complex(s)
    cutoff = _product_cutoff(s.real, tau, policy)
    factors = _factors(s, tau, cutoff)
    value = complex(np.prod(factors))
    log_tail = _product_log_tail(s.real, cutoff, tau.alpha)
    return Estimate(value, abs(value) * (math.expm1(log_tail) + rounding_bound(len(factors))))


def log_abs_z_gamma(s: complex, tau: ModularParameter, policy: TruncationPolicy | None = None) -> Estimate:
    """log|Z(s)| summed factor by factor, so large moduli cannot overflow."""
    policy = policy or TruncationPolicy.default()
    s = complex(s)
    cutoff = _product_cutoff(s.real, tau, policy)
    with np.errstate(divide="ignore"):
        total = float(np.sum(np.log(np.abs(_factors(s, tau, cutoff)))))
    return Estimate(total, _product_log_tail(s.real, cutoff, tau.alpha))


def z_gamma_logseries(s: complex, tau: ModularParameter, policy: TruncationPolicy | None = None) -> Estimate:
    """log Z(s) from the exponential series; needs Re s > 0."""
    policy = policy or TruncationPolicy.default()
    s = complex(s)
    sigma = s.real
    if sigma <= 0:
        raise DomainError(f"log-series diverges for Re s <= 0 (got {sigma})")
    alpha, beta = tau.alpha, tau.beta
    scale = (1 - math.exp(-alpha)) ** 2 * (1 - math.exp(-alpha * sigma))

    def tail(n_terms: int) -> float:
        return math.exp(-(n_terms + 1) * alpha * sigma) / ((n_terms + 1) * scale)

    n_terms = policy.max_terms
    if policy.adaptive:
        n_terms = 1
        while tail(n_terms) >= policy.tol:
            n_terms += 1
            if n_terms > policy.max_terms:
                raise BudgetError(f"log-series tail above {policy.tol:g} after {policy.max_terms} terms")
    n = np.arange(1, n_terms + 1, dtype=float)
    decay = np.exp(-n * alpha)
    # sinh^2(alpha n/2) + sin^2(beta n/2), divided by e^{alpha n} to keep it finite
    denom = n * ((1 - decay) ** 2 / 4 + decay * np.sin(beta * n / 2) ** 2)
    terms = np.exp(-n * alpha * s) / denom
    # sum smallest terms first
    value = -0.25 * complex(np.sum(terms[::-1]))
    rounding = 0.25 * rounding_bound(n_terms) * float(np.sum(np.abs(terms)))
    return Estimate(value, tail(n_terms) + rounding)


def z_gamma_from_logseries(s: complex, tau: ModularParameter, policy: TruncationPolicy | None = None) -> Estimate:
    log_z = z_gamma_logseries(s, tau, policy)
    value = complex(np.exp(log_z.value))
    return Estimate(value, abs(value) * math.expm1(log_z.tail))


def _checked_quotient(nums: Sequence[Estimate], dens: Sequence[Estimate], pole_tol: float) -> Estimate:
    num_mod = math.prod(abs(e.value) for e in nums)
    den_mod = math.prod(abs(e.value) for e in dens)
    if den_mod == 0 or den_mod < pole_tol * num_mod:
        raise PoleError(f"denominator {den_mod:.3g} vanishes relative to numerator {num_mod:.3g}")
    return combine(list(nums), list(dens))


def ruelle(s: complex, tau: ModularParameter, policy: TruncationPolicy | None = None,
           pole_tol: float = POLE_TOL) -> Estimate:
    """R(s) = Z(s) Z(s+2) / Z(s+1), the alternating product for a hyperbolic three-manifold."""
    s = complex(s)
    nums = [z_gamma_product(s, tau, policy), z_gamma_product(s + 2, tau, policy)]
    return _checked_quotient(nums, [z_gamma_product(s + 1, tau, policy)], pole_tol)


def ratio_arguments(s: complex, tau: ModularParameter, variant: str = "plain",
                    eta: complex | None = None) -> tuple[complex, complex]:
    """Numerator and denominator arguments of the two-factor ratio ``variant``."""
    if variant not in RATIO_VARIANTS:
        raise DomainError(f"unknown ratio variant {variant!r}; expected one of {RATIO_VARIANTS}")
    s = complex(s)
    conj = variant.startswith("conjugate")
    if variant.endswith("eta-shifted"):
        s += 1j * (tau.eta if eta is None else eta)
    step = complex(1, -tau.t) if conj else complex(1, tau.t)
    return s, s + step


def z_ratio(s: complex, tau: ModularParameter, variant: str = "plain", policy: TruncationPolicy | None = None,
            eta: complex | None = None, pole_tol: float = POLE_TOL) -> Estimate:
    """Two-factor ratios Z(a)/Z(a + 1 +- it), with a = s or s + i*eta.

    ``plain`` and ``eta-shifted`` step by 1 + it, the ``conjugate`` variants by
    1 - it.  ``eta`` overrides tau.eta for the shifted variants.
    """
    top, bottom = ratio_arguments(s, tau, variant, eta)
    return _checked_quotient([z_gamma_product(top, tau, policy)], [z_gamma_product(bottom, tau, policy)], pole_tol)


def r_factor(s: complex, tau: ModularParameter, variant: str = "plain", reading: str = "ratio",
             policy: TruncationPolicy | None = None, eta: complex | None = None) -> Estimate:
    """A factor written R(...) in a generating-function identity, under one of two readings.

    ``ratio`` takes the two-factor ratio z_ratio(s, variant); ``triple`` takes
    the three-factor ruelle() at the same (possibly eta-shifted) argument.
    """
    if reading == "ratio":
        return z_ratio(s, tau, variant, policy, eta)
    if reading == "triple":
        arg, _ = ratio_arguments(s, tau, variant, eta)
        return ruelle(arg, tau, policy)
    raise DomainError(f"unknown R reading {reading!r}; expected one of {R_READINGS}")


def order_of_vanishing(tau: ModularParameter, scale: float = 0.5, steps: int = 14,
                       policy: TruncationPolicy | None = None) -> list[float]:
    """Successive slope estimates log2(|R(e 2^-k)| / |R(e 2^-k-1)|) as s -> 0 along the reals."""
    values = [abs(ruelle(scale * 2.0 ** -k, tau, policy).value) for k in range(steps + 1)]
    return [math.log2(a / b) if a > 0 and b > 0 else math.nan for a, b in zip(values, values[1:])]


# -- zeros -------------------------------------------------------------------

def zeros_predicted(tau: ModularParameter, box: tuple[float, float, float, float]) -> list[tuple[ZeroIndex, complex]]:
    """All zeros -(k1+k2) + i(k1-k2)t + i n/Im tau inside [re_lo, re_hi] x [im_lo, im_hi]."""
    re_lo, re_hi, im_lo, im_hi = (float(b) for b in box)
    if not all(math.isfinite(b) for b in box) or re_lo > re_hi or im_lo > im_hi:
        raise DomainError(f"box must be finite with lo <= hi, got {box}")
    found = []
    for total in range(max(0, math.ceil(-re_hi)), math.floor(-re_lo) + 1):
        for diff in range(-total, total + 1, 2):
            k1 = (total + diff) // 2
            k2 = total - k1
            centre = diff * tau.t
            n_lo = math.floor((im_lo - centre) * tau.im) - 1
            n_hi = math.ceil((im_hi - centre) * tau.im) + 1
            for n in range(n_lo, n_hi + 1):
                index = ZeroIndex(n, k1, k2)
                zeta = index.location(tau)
                if re_lo <= zeta.real <= re_hi and im_lo <= zeta.imag <= im_hi:
                    found.append((index, zeta))
    return found


def verify_zero(index: ZeroIndex, tau: ModularParameter, policy: TruncationPolicy | None = None,
                dps: int = 50) -> ZeroResidual:
    """|Z_K(zeta)| at a predicted zero, evaluated with ``dps`` decimal digits.

    Left of the imaginary axis the product contains factors of modulus up to
    e^{alpha |Re s|} per diagonal, so double precision cannot resolve the
    cancellation; mpmath carries the location and the product at ``dps`` digits.
    """
    policy = policy or TruncationPolicy.default()
    order = index.k1 + index.k2
    if order > policy.cutoff:
        raise CutoffError(f"k1 + k2 = {order} exceeds the product cutoff {policy.cutoff}")
    sigma = float(-order)
    cutoff = _product_cutoff(sigma, tau, policy, minimum=order)
    with mpmath.workdps(dps):
        alpha = 2 * mpmath.pi * mpmath.mpf(tau.im)
        beta = 2 * mpmath.pi * mpmath.mpf(tau.re)
        zeta = mpmath.mpc(-order, (index.k1 - index.k2) * beta / alpha + 2 * mpmath.pi * index.n / alpha)
        prod = mpmath.mpc(1)
        for total in range(cutoff + 1):
            for j1 in range(total + 1):
                j2 = total - j1
                prod *= 1 - mpmath.exp(mpmath.mpc(0, beta * (j1 - j2)) - (total + zeta) * alpha)
        residual = float(abs(prod))
        location = complex(zeta)
    tail = residual * math.expm1(_product_log_tail(sigma, cutoff, tau.alpha))
    return ZeroResidual(index, location, residual, tail, cutoff)


# -- growth ------------------------------------------------------------------

@dataclass(frozen=True)
class GrowthFit:
    """Envelope log|Z(s)| <= log C1 + C2 |s|^3 fitted to samples."""

    log_c1: float
    c2: float
    samples: tuple[complex, ...]
    log_moduli: tuple[float, ...]
    violations: tuple[complex, ...]
    excluded: tuple[complex, ...]
    majorant_violations: tuple[complex, ...]

    @property
    def c1(self) -> float:
        return math.exp(self.log_c1) if self.log_c1 < 700 else math.inf

    @property
    def passed(self) -> bool:
        finite = math.isfinite(self.log_c1) and math.isfinite(self.c2)
        return finite and not self.violations and not self.majorant_violations


def _distance_to_zeros(s: complex, tau: ModularParameter, margin: float) -> float:
    box = (s.real - margin, s.real + margin, s.imag - margin, s.imag + margin)
    return min((abs(s - z) for _, z in zeros_predicted(tau, box)), default=math.inf)


def growth_samples(tau: ModularParameter, count: int = 100, box: tuple[float, float, float, float] = (-5, 5, -5, 5),
                   margin: float = 0.1, seed: int = 0) -> tuple[complex, ...]:
    """Seeded uniform samples in ``box`` kept at least ``margin`` away from every predicted zero."""
    rng = np.random.default_rng(seed)
    out: list[complex] = []
    while len(out) < count:
        s = complex(rng.uniform(box[0], box[1]), rng.uniform(box[2], box[3]))
        if _distance_to_zeros(s, tau, margin) >= margin:
            out.append(s)
    return tuple(out)


def _log_majorant(s: complex, tau: ModularParameter, policy: TruncationPolicy) -> float:
    # |1 - x| <= 1 + |x| factor by factor, plus the omitted tail
    cutoff = _product_cutoff(s.real, tau, policy)
    _, total = _lattice(cutoff)
    bound = float(np.sum(np.log1p(np.exp(-(total + s.real) * tau.alpha))))
    return bound + _product_log_tail(s.real, cutoff, tau.alpha)


def growth_check(tau: ModularParameter, samples: Sequence[complex], policy: TruncationPolicy | None = None,
                 margin: float = 0.1, slack: float = 1e-9) -> GrowthFit:
    """Fit log|Z| <= log C1 + C2|s|^3 and report samples that violate it.

    C2 is the least-squares slope of log|Z| against |s|^3 (clipped at 0) and
    log C1 is then the smallest intercept lying above every sample.  Samples
    closer than ``margin`` to a predicted zero are excluded.  Each sample is
    also checked against the factorwise majorant sum log(1 + |x_k|).
    """
    policy = policy or TruncationPolicy.default()
    kept, excluded = [], []
    for s in samples:
        s = complex(s)
        (excluded if _distance_to_zeros(s, tau, margin) < margin else kept).append(s)
    if not kept:
        return GrowthFit(0.0, 0.0, (), (), (), tuple(excluded), ())
    y = np.array([log_abs_z_gamma(s, tau, policy).value for s in kept])
    x = np.array([abs(s) ** 3 for s in kept])
    if len(kept) > 1 and np.ptp(x) > 0:
        c2 = max(0.0, float(np.polyfit(x, y, 1)[0]))
    else:
        c2 = 0.0
    log_c1 = float(np.max(y - c2 * x))
    envelope = log_c1 + c2 * x
    violations = tuple(s for s, yi, ei in zip(kept, y, envelope) if yi > ei + slack)
    majorant_violations = tuple(
        s for s, yi in zip(kept, y) if yi > _log_majorant(s, tau, policy) + slack
    )
    return GrowthFit(log_c1, c2, tuple(kept), tuple(float(v) for v in y), violations, tuple(excluded),
                     majorant_violations)


# -- action on H^3 -------------------------------------------------------------

def generator_matrix(tau: ModularParameter) -> np.ndarray:
    """diag(e^{(alpha+i beta)/2}, e^{-(alpha+i beta)/2}): dilation e^alpha composed with rotation beta."""
    z = complex(tau.alpha, tau.beta) / 2
    return np.array([[np.exp(z), 0], [0, np.exp(-z)]], dtype=complex)


def hyperbolic_action(g, point: tuple[float, float, float], det_tol: float = 1e-10) -> tuple[float, float, float]:
    """Action of g in SL(2, C) on the upper half space model of H^3."""
    (a, b), (c, d) = np.asarray(g, dtype=complex)
    x, y, z = (float(v) for v in point)
    if z <= 0:
        raise DomainError(f"point must have z > 0, got {z}")
    det = a * d - b * c
    if abs(det - 1) > det_tol:
        raise DomainError(f"det g must be 1, got {det}")
    r = complex(x, y)
    denom = abs(c * r + d) ** 2 + abs(c) ** 2 * z ** 2
    if denom == 0:
        raise PoleError("action denominator vanishes")
    uv = ((a * r + b) * np.conj(c * r + d) + a * np.conj(c) * z ** 2) / denom
    return float(uv.real), float(uv.imag), z / denom
