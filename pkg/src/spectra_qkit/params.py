"""Modular parameter, truncation policy and the (value, tail) pair."""

from __future__ import annotations

import cmath
import math
import os
import sys
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import NamedTuple

from .errors import DomainError, PoleError

EPS_ENV = "SPECTRA_QKIT_EPS"
DEFAULT_TOL = 1e-15


class Estimate(NamedTuple):
    """A numeric value with a bound on its truncation error plus accumulated rounding."""

    value: complex
    tail: float


@dataclass(frozen=True)
class ModularParameter:
    """A point tau in the upper half plane.

    Every spectral and q-series argument is derived from here: the nome
    ``q = exp(2 pi i tau)``, the dilation length ``alpha = 2 pi Im tau``, the
    rotation angle ``beta = 2 pi Re tau``, ``t = Re tau / Im tau`` and
    ``eta = eta_sign / (2 tau)``.
    """

    re: float
    im: float
    eta_sign: int = 1

    def __post_init__(self) -> None:
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise DomainError(f"tau must be finite, got {self.re}+{self.im}i")
        if self.im <= 0:
            raise DomainError(f"Im tau must be > 0 (|q| < 1), got {self.im}")
        if self.eta_sign not in (1, -1):
            raise DomainError(f"eta_sign must be +1 or -1, got {self.eta_sign}")

    @classmethod
    def from_complex(cls, tau: complex, eta_sign: int = 1) -> ModularParameter:
        tau = complex(tau)
        return cls(tau.real, tau.imag, eta_sign)

    @property
    def tau(self) -> complex:
        return complex(self.re, self.im)

    @property
    def q(self) -> complex:
        return self.qpow(1)

    @property
    def alpha(self) -> float:
        return 2 * math.pi * self.im

    @property
    def beta(self) -> float:
        return 2 * math.pi * self.re

    @property
    def t(self) -> float:
        return self.re / self.im

    @property
    def eta(self) -> complex:
        return self.eta_sign / (2 * self.tau)

    @property
    def half_period_eta(self) -> float:
        """The real eta for which a shift s -> s + i*eta flips the sign of exp(-s*alpha)."""
        return 1 / (2 * self.im)

    def qpow(self, exponent: float | Fraction) -> complex:
        """``q**exponent`` taken as ``exp(2 pi i tau * exponent)``, never as a complex power."""
        return cmath.exp(2j * math.pi * self.tau * float(exponent))

    def reflected(self) -> ModularParameter:
        """The parameter -conj(tau): its nome is conj(q) and beta changes sign."""
        return replace(self, re=-self.re)

    def scaled(self, factor: float) -> ModularParameter:
        """tau -> factor * tau, i.e. q -> q**factor."""
        return replace(self, re=self.re * factor, im=self.im * factor)

    def with_eta_sign(self, sign: int) -> ModularParameter:
        return replace(self, eta_sign=sign)


@dataclass(frozen=True)
class TruncationPolicy:
    """Cutoffs and tolerance for every truncated product or series.

    In adaptive mode ``cutoff`` and ``max_terms`` are upper limits and the
    smallest truncation whose tail bound is below ``tol`` is used; in fixed
    mode they are used as given and the tail bound is only reported.
    """

    cutoff: int = 400
    max_terms: int = 4000
    tol: float = DEFAULT_TOL
    adaptive: bool = True

    def __post_init__(self) -> None:
        if self.cutoff < 0 or self.max_terms < 1:
            raise DomainError("cutoff must be >= 0 and max_terms >= 1")
        if not self.tol > 0:
            raise DomainError(f"tolerance must be > 0, got {self.tol}")

    @classmethod
    def default(cls, **overrides) -> TruncationPolicy:
        """Default policy, with the tolerance taken from ``SPECTRA_QKIT_EPS`` when set."""
        raw = os.environ.get(EPS_ENV)
        if raw is not None and "tol" not in overrides:
            try:
                overrides["tol"] = float(raw)
            except ValueError as exc:
                raise DomainError(f"{EPS_ENV}={raw!r} is not a number") from exc
        return cls(**overrides)


def rounding_bound(operations: int) -> float:
    """Relative rounding error allowance for ``operations`` complex multiplications or additions."""
    return 4 * operations * sys.float_info.epsilon


def combine(numerators: list[Estimate], denominators: list[Estimate] = ()) -> Estimate:
    """Quotient of products of estimates, with a majorant for the propagated error.

    With relative errors r = tail/|value| the bound is
    |V| * (prod(1 + r_num) / prod(1 - r_den) - 1).
    """
    value = 1 + 0j
    log_growth = 0.0
    for est in numerators:
        value *= est.value
        if est.tail:
            if est.value == 0:
                # |prod a'| <= tail * prod of the other (|a| + t); fold into an absolute bound
                rest = math.prod(abs(e.value) + e.tail for e in numerators if e is not est)
                dens = math.prod(abs(e.value) - e.tail for e in denominators)
                return Estimate(0j, est.tail * rest / dens if dens > 0 else math.inf)
            log_growth += math.log1p(est.tail / abs(est.value))
    for est in denominators:
        mod = abs(est.value)
        if mod == 0:
            raise PoleError("denominator vanishes")
        value /= est.value
        if est.tail:
            if est.tail >= mod:
                return Estimate(value, math.inf)
            log_growth -= math.log1p(-est.tail / mod)
    return Estimate(value, abs(value) * math.expm1(log_growth))


ETA_CONVENTIONS = ("+", "-", "half-period")


def eta_value(tau: ModularParameter, convention: str | None = None) -> complex:
    """The eta entering a shift s -> s + i*eta.

    ``+`` and ``-`` give +-1/(2 tau); ``half-period`` gives 1/(2 Im tau), the
    shift that turns exp(-s alpha) into -exp(-s alpha).  ``None`` follows
    ``tau.eta_sign``.
    """
    if convention is None:
        return tau.eta
    if convention == "+":
        return 1 / (2 * tau.tau)
    if convention == "-":
        return -1 / (2 * tau.tau)
    if convention == "half-period":
        return complex(tau.half_period_eta)
    raise DomainError(f"unknown eta convention {convention!r}; expected one of {ETA_CONVENTIONS}")


def eta_label(tau: ModularParameter, convention: str | None = None) -> str:
    if convention is None:
        return "+" if tau.eta_sign > 0 else "-"
    return convention
