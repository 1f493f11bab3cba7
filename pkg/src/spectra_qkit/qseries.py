"""q-products, the Dedekind eta function and the f-functions f1, f2, f3.

Every product comes in two forms: an exact truncated ``FormalSeries`` and a
double-precision value at a ``ModularParameter`` with a tail bound.  Integer
partitions are enumerated directly so that coefficient formulas can be
checked against an independent count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import BudgetError, DomainError, GridError
from .params import Estimate, ModularParameter, TruncationPolicy, combine, rounding_bound
from .series import DEFAULT_GRID, FormalSeries

PARTITION_CONSTRAINTS = ("all", "distinct", "odd", "distinct-odd")


@dataclass(frozen=True)
class QProductSpec:
    """The product ``prod_m (1 + sign*q**(m + shift)) ** (w(m) * power)``.

    ``m`` runs over integers ``>= start`` (odd ones only when ``odd_only``);
    ``w(m)`` is ``m`` when ``weighted`` and 1 otherwise.
    """

    start: int = 1
    shift: Fraction = Fraction(0)
    sign: int = -1
    weighted: bool = False
    odd_only: bool = False
    power: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "shift", Fraction(self.shift))
        if not isinstance(self.start, int) or self.start < 0:
            raise DomainError(f"start must be a nonnegative integer, got {self.start!r}")
        if self.sign not in (1, -1):
            raise DomainError(f"sign must be +1 or -1, got {self.sign}")
        if self.start + self.shift <= 0:
            raise DomainError(f"start + shift must be > 0, got {self.start + self.shift}")

    def indices(self) -> Iterator[int]:
        m = self.start
        if self.odd_only and m % 2 == 0:
            m += 1
        step = 2 if self.odd_only else 1
        while True:
            yield m
            m += step

    def exponent_weight(self, m: int) -> int:
        return (m if self.weighted else 1) * self.power


def series_qproduct(spec: QProductSpec, order, grid: int = DEFAULT_GRID) -> FormalSeries:
    """Exact expansion of the product up to (excluding) ``q**order``."""
    order = Fraction(order)
    if order <= 0:
        raise DomainError(f"order must be > 0, got {order}")
    if (spec.shift * grid).denominator != 1:
        raise GridError(f"shift {spec.shift} is not on the grid (1/{grid})Z")
    unit = spec.shift.denominator
    length = math.ceil(order * unit)
    c = [0] * length
    c[0] = 1
    s = spec.sign
    for m in spec.indices():
        a = int((m + spec.shift) * unit)
        if a >= length:
            break
        e = spec.exponent_weight(m)
        for _ in range(abs(e)):
            if e > 0:
                for i in range(length - 1, a - 1, -1):
                    c[i] += s * c[i - a]
            else:
                for i in range(a, length):
                    c[i] -= s * c[i - a]
    return FormalSeries.from_integer_list(c, step=unit, order=order, grid=grid)


def _tail_sum(first: int, shift: float, step: int, weighted: bool, x: float) -> float:
    """Majorant of sum over m = first, first+step, ... of w(m) * x**(m + shift)."""
    lead = x ** (first + shift)
    xs = x ** step
    if not weighted:
        return lead / (1 - xs)
    return lead * (first / (1 - xs) + step * xs / (1 - xs) ** 2)


def numeric_qproduct(spec: QProductSpec, tau: ModularParameter, policy: TruncationPolicy | None = None) -> Estimate:
    """Value of the product at tau; the cutoff grows until the log-tail bound is below tolerance."""
    policy = policy or TruncationPolicy.default()
    x = abs(tau.q)
    shift = float(spec.shift)
    step = 2 if spec.odd_only else 1
    value = 1 + 0j
    count = 0
    for m in spec.indices():
        log_tail = abs(spec.power) * _tail_sum(m, shift, step, spec.weighted, x) / (1 - x ** (m + shift))
        if policy.adaptive and log_tail < policy.tol:
            break
        if m > policy.cutoff:
            if policy.adaptive:
                raise BudgetError(f"q-product tail {log_tail:.3g} above tolerance at cutoff {policy.cutoff}")
            break
        weight = spec.exponent_weight(m)
        value *= (1 + spec.sign * tau.qpow(m + spec.shift)) ** weight
        count += 1 + abs(weight)
    return Estimate(value, abs(value) * (math.expm1(log_tail) + rounding_bound(count)))


def partition_gf(order) -> FormalSeries:
    """``prod_{n>=1} (1 - q**n)**-1``; the coefficient of ``q**N`` is p(N)."""
    if Fraction(order) < 1:
        raise DomainError(f"order must be >= 1, got {order}")
    return series_qproduct(QProductSpec(start=1, sign=-1, power=-1), order)


def enumerate_partitions(n: int, constraint: str = "all") -> list[tuple[int, ...]]:
    """All partitions of n as non-increasing tuples, largest parts first.

    ``constraint`` is one of ``all``, ``distinct``, ``odd`` (odd parts) or
    ``distinct-odd``.
    """
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    if constraint not in PARTITION_CONSTRAINTS:
        raise DomainError(f"unknown constraint {constraint!r}; expected one of {PARTITION_CONSTRAINTS}")
    distinct = constraint in ("distinct", "distinct-odd")
    odd = constraint in ("odd", "distinct-odd")

    def build(remaining: int, largest: int) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield ()
            return
        for part in range(min(remaining, largest), 0, -1):
            if odd and part % 2 == 0:
                continue
            for rest in build(remaining - part, part - 1 if distinct else part):
                yield (part,) + rest

    return list(build(n, n))


# -- Dedekind eta ------------------------------------------------------------

_EULER = QProductSpec(start=1, sign=-1)


def eta(tau: ModularParameter, policy: TruncationPolicy | None = None) -> Estimate:
    """``q**(1/24) * prod (1 - q**n)`` at tau."""
    prod = numeric_qproduct(_EULER, tau, policy)
    pre = tau.qpow(Fraction(1, 24))
    return Estimate(pre * prod.value, abs(pre) * prod.tail)


def eta_series(order, grid: int = DEFAULT_GRID) -> FormalSeries:
    """Eta as a series; the ``q**(1/24)`` prefactor is carried exactly in the offset."""
    if Fraction(order) < 1:
        raise DomainError(f"order must be >= 1, got {order}")
    return series_qproduct(_EULER, order, grid).shift(Fraction(1, 24))


# -- f1, f2, f3 --------------------------------------------------------------

def _weber_parts(index: int, m_base: int) -> tuple[Fraction, QProductSpec]:
    if m_base not in (0, 1):
        raise DomainError(f"m_base must be 0 or 1, got {m_base}")
    if index == 1:
        return Fraction(-1, 48), QProductSpec(start=m_base, shift=Fraction(1, 2), sign=-1)
    if index == 2:
        return Fraction(-1, 48), QProductSpec(start=m_base, shift=Fraction(1, 2), sign=1)
    if index == 3:
        return Fraction(1, 24), QProductSpec(start=m_base, shift=Fraction(1), sign=1)
    raise DomainError(f"f-function index must be 1, 2 or 3, got {index}")


def weber_f(index: int, tau: ModularParameter, policy: TruncationPolicy | None = None,
            m_base: int = 0) -> Estimate:
    """Product form of f1, f2 or f3 at tau.

    ``m_base`` is the first product index: with 0 the factors start at
    ``q**(1/2)`` (f1, f2) and ``q**1`` (f3), which makes f1*f2*f3 = 1.
    """
    prefactor, spec = _weber_parts(index, m_base)
    prod = numeric_qproduct(spec, tau, policy)
    pre = tau.qpow(prefactor)
    return Estimate(pre * prod.value, abs(pre) * prod.tail)


def weber_f_series(index: int, order, m_base: int = 0, grid: int = DEFAULT_GRID) -> FormalSeries:
    prefactor, spec = _weber_parts(index, m_base)
    return series_qproduct(spec, order, grid).shift(prefactor)


def weber_f_eta_quotient(index: int, tau: ModularParameter, policy: TruncationPolicy | None = None) -> Estimate:
    """f1 = eta(tau/2)/eta(tau), f2 = eta(tau)^2/(eta(tau/2) eta(2 tau)), f3 = eta(2 tau)/eta(tau)."""
    half = eta(tau.scaled(0.5), policy)
    one = eta(tau, policy)
    double = eta(tau.scaled(2.0), policy)
    if index == 1:
        return combine([half], [one])
    if index == 2:
        return combine([one, one], [half, double])
    if index == 3:
        return combine([double], [one])
    raise DomainError(f"f-function index must be 1, 2 or 3, got {index}")


def weber_f_eta_quotient_series(index: int, order, grid: int = DEFAULT_GRID) -> FormalSeries:
    """Exact series of the eta-quotient forms, for comparison with the product forms."""
    order = Fraction(order)
    half = eta_series(2 * order, grid).substitute(Fraction(1, 2))
    one = eta_series(order, grid)
    double = eta_series(order, grid).substitute(2).truncate(order)
    if index == 1:
        return half / one
    if index == 2:
        return one * one / (half * double)
    if index == 3:
        return double / one
    raise DomainError(f"f-function index must be 1, 2 or 3, got {index}")
