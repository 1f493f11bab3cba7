"""Goettsche's generating function for Poincare polynomials of Hilbert schemes of points.

    sum_N q^N P_r(X^[N]) = prod_n (1 + r^{2n-1} q^n)^{b1} (1 + r^{2n+1} q^n)^{b3}
                           / [(1 - r^{2n-2} q^n)^{b0} (1 - r^{2n} q^n)^{b2} (1 - r^{2n+2} q^n)^{b4}]

Everything here is exact integer arithmetic until the spectral cross-check.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, PoleError
from .params import ModularParameter, TruncationPolicy, combine, eta_label, eta_value
from .qseries import QProductSpec, numeric_qproduct, series_qproduct
from .report import IdentityReport, tau_param
from .series import FormalSeries
from .spectral import r_factor


@dataclass(frozen=True)
class BettiVector:
    b0: int
    b1: int
    b2: int
    b3: int
    b4: int

    def __post_init__(self) -> None:
        if any((not isinstance(b, int)) or b < 0 for b in self):
            raise DomainError(f"Betti numbers must be nonnegative integers, got {tuple(self)}")

    def __iter__(self):
        return iter((self.b0, self.b1, self.b2, self.b3, self.b4))

    @classmethod
    def parse(cls, text: str) -> BettiVector:
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 5:
            raise DomainError(f"expected five comma-separated Betti numbers, got {text!r}")
        try:
            return cls(*(int(p) for p in parts))
        except ValueError as exc:
            raise DomainError(f"Betti numbers must be integers, got {text!r}") from exc

    @property
    def euler(self) -> int:
        return self.b0 - self.b1 + self.b2 - self.b3 + self.b4

    def poincare(self) -> tuple[int, ...]:
        return tuple(self)

    def satisfies_duality(self) -> bool:
        """b0 = b4 and b1 = b3, as for a closed oriented surface."""
        return self.b0 == self.b4 and self.b1 == self.b3


@dataclass(frozen=True)
class BivariateSeries:
    """Integer coefficients of q^N r^j for N < order_q, j < order_r."""

    rows: tuple[tuple[int, ...], ...]
    order_q: int
    order_r: int

    def coefficient(self, n: int, j: int) -> int:
        if not (0 <= n < self.order_q and 0 <= j < self.order_r):
            raise IndexError(f"(q^{n}, r^{j}) is outside the truncation ({self.order_q}, {self.order_r})")
        return self.rows[n][j]

    def polynomial(self, n: int) -> tuple[int, ...]:
        """Coefficients of the q^n slice in increasing powers of r, trailing zeros removed."""
        row = list(self.rows[n])
        while len(row) > 1 and row[-1] == 0:
            row.pop()
        return tuple(row)

    def specialize(self, r: int | Fraction) -> list[Fraction]:
        """Substitute a rational r; only meaningful when order_r covers every slice."""
        return [Fraction(sum(c * Fraction(r) ** j for j, c in enumerate(row))) for row in self.rows]

    def to_json(self) -> dict:
        return {
            "order_q": self.order_q,
            "order_r": self.order_r,
            "rows": [{"N": n, "coefficients": list(self.polynomial(n))} for n in range(self.order_q)],
        }

    def to_csv(self) -> str:
        width = max(len(self.polynomial(n)) for n in range(self.order_q))
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["N"] + [f"r^{j}" for j in range(width)])
        for n in range(self.order_q):
            poly = self.polynomial(n)
            writer.writerow([n] + list(poly) + [0] * (width - len(poly)))
        return buf.getvalue()


def _factor_list(betti: BettiVector, n: int) -> list[tuple[int, int, int]]:
    """(r-exponent, sign, multiplicity) for the n-th factor; negative multiplicity divides."""
    b0, b1, b2, b3, b4 = betti
    return [
        (2 * n - 1, 1, b1),
        (2 * n + 1, 1, b3),
        (2 * n - 2, -1, -b0),
        (2 * n, -1, -b2),
        (2 * n + 2, -1, -b4),
    ]


def goettsche_series(betti: BettiVector, order_q: int, order_r: int | None = None) -> BivariateSeries:
    """Exact expansion in q (below ``order_q``) and r (below ``order_r``, default 4*(order_q-1)+1)."""
    if order_q < 1:
        raise DomainError(f"order_q must be >= 1, got {order_q}")
    if order_r is None:
        order_r = 4 * (order_q - 1) + 1
    if order_r < 1:
        raise DomainError(f"order_r must be >= 1, got {order_r}")
    c = [[0] * order_r for _ in range(order_q)]
    c[0][0] = 1
    for n in range(1, order_q):
        for a, s, mult in _factor_list(betti, n):
            for _ in range(abs(mult)):
                if mult > 0:
                    # multiply by (1 + s r^a q^n)
                    for big_n in range(order_q - 1, n - 1, -1):
                        src, dst = c[big_n - n], c[big_n]
                        for j in range(order_r - 1, a - 1, -1):
                            dst[j] += s * src[j - a]
                else:
                    # divide by (1 + s r^a q^n)
                    for big_n in range(n, order_q):
                        src, dst = c[big_n - n], c[big_n]
                        for j in range(a, order_r):
                            dst[j] -= s * src[j - a]
    return BivariateSeries(tuple(tuple(row) for row in c), order_q, order_r)


def poincare_polynomial(betti: BettiVector, n: int) -> tuple[int, ...]:
    """P_r(X^[n]) as integer coefficients of 1, r, r^2, ...; degree at most 4n."""
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    return goettsche_series(betti, n + 1).polynomial(n)


def euler_specialization(betti: BettiVector, order: int) -> FormalSeries:
    """The r = -1 collapse, prod (1 - q^n)^(-e(X)), checked against direct substitution."""
    if order < 1:
        raise DomainError(f"order must be >= 1, got {order}")
    direct = goettsche_series(betti, order).specialize(-1)
    closed = series_qproduct(QProductSpec(start=1, sign=-1, power=-betti.euler), order)
    if closed.coefficients(order) != direct:
        raise ArithmeticError(f"r = -1 substitution disagrees with prod (1-q^n)^(-e) for {betti}")
    return closed


# -- spectral cross-check -----------------------------------------------------

# (betti index, QProductSpec pieces) for r = q^(1/2): r^{2n-1} q^n = q^{2n-1/2}, etc.
_R_HALF_FACTORS = {
    1: dict(start=1, shift=Fraction(1, 2), sign=1, odd_only=True),
    3: dict(start=1, shift=Fraction(3, 2), sign=1, odd_only=True),
    0: dict(start=1, shift=Fraction(0), sign=-1, odd_only=True),
    2: dict(start=1, shift=Fraction(1), sign=-1, odd_only=True),
    4: dict(start=3, shift=Fraction(0), sign=-1, odd_only=True),
}
# xi_{2j-1} = j - 1/2 on the eta-shifted (numerator) factors, xi_{2j-2} = j - 1 on the others
_SPECTRAL_XI = {1: Fraction(1, 2), 3: Fraction(3, 2), 0: Fraction(0), 2: Fraction(1), 4: Fraction(2)}


def goettsche_spectral_check(betti: BettiVector, tau: ModularParameter, policy: TruncationPolicy | None = None,
                             reading: str = "ratio", eta_convention: str | None = None,
                             tol: float = 1e-8) -> IdentityReport:
    """Compare the product at r = exp(i pi tau) with the matching ratio of R factors.

    A vanishing spectral factor (R at xi = 0 whenever b0 > 0) is reported as a
    pole with no residual rather than raised.
    """
    policy = policy or TruncationPolicy.default()
    b = tuple(betti)
    eta = eta_value(tau, eta_convention)
    pieces = []
    for idx, kw in _R_HALF_FACTORS.items():
        if b[idx]:
            power = b[idx] if kw["sign"] > 0 else -b[idx]
            pieces.append(numeric_qproduct(QProductSpec(power=power, **kw), tau, policy))
    lhs = combine(pieces)
    params = {"betti": list(b), "tau": tau_param(tau), "r": "exp(i pi tau)"}
    conventions = {"eta": eta_label(tau, eta_convention), "r_reading": reading}
    t = tau.t
    nums, dens = [], []
    try:
        for idx, xi in _SPECTRAL_XI.items():
            if not b[idx]:
                continue
            arg = xi * complex(1, -t)
            if idx in (1, 3):
                factor = r_factor(arg, tau, "eta-shifted", reading, policy, eta)
                nums += [factor] * b[idx]
            else:
                factor = r_factor(arg, tau, "plain", reading, policy, eta)
                dens += [factor] * b[idx]
        rhs = combine(nums, dens)
    except PoleError as exc:
        return IdentityReport("goettsche-spectral", params, conventions, lhs.value, None, None,
                              lhs.tail, tol, note=f"pole in spectral side: {exc}")
    return IdentityReport("goettsche-spectral", params, conventions, lhs.value, rhs.value,
                          abs(lhs.value - rhs.value), lhs.tail + rhs.tail, tol)
