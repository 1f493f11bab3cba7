"""Characters of Heisenberg and super-Heisenberg Fock spaces and the wreath-product K-theory series.

Group data enters only through integers: an orbifold Euler number, a count
of conjugacy classes, and the dimensions of the even and odd K-groups.
Numeric evaluations also compare against the spectral-function form and
return an IdentityReport, since those forms are not assumed to agree.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, PoleError
from .params import Estimate, ModularParameter, TruncationPolicy, combine, eta_label, eta_value
from .qseries import QProductSpec, numeric_qproduct, series_qproduct
from .report import IdentityReport, tau_param
from .series import FormalSeries
from .spectral import r_factor

PLACEMENTS = ("half", "full")


@dataclass(frozen=True)
class CharacterSpec:
    """dim_even / dim_odd: dim V_even, V_odd (or dim K^0, K^1 for the K-theory series)."""

    dim_even: int
    dim_odd: int

    def __post_init__(self) -> None:
        for name in ("dim_even", "dim_odd"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise DomainError(f"{name} must be a nonnegative integer, got {v!r}")


@dataclass(frozen=True)
class WreathSpec:
    euler: int
    classes: int = 1

    def __post_init__(self) -> None:
        if not isinstance(self.euler, int):
            raise DomainError(f"Euler number must be an integer, got {self.euler!r}")
        if not isinstance(self.classes, int) or self.classes < 1:
            raise DomainError(f"conjugacy class count must be >= 1, got {self.classes!r}")


def _check_order(order: int) -> None:
    if not isinstance(order, int) or order < 1:
        raise DomainError(f"order must be a positive integer, got {order!r}")


def heisenberg_character(order: int) -> FormalSeries:
    """Tr q^D on the bosonic Fock space, counted monomial by monomial.

    The coefficient of q^N is the number of monomials p_1^{m_1} p_2^{m_2} ...
    with sum i*m_i = N, built up one generator p_i at a time.
    """
    _check_order(order)
    counts = [1] + [0] * (order - 1)
    for i in range(1, order):
        for n in range(i, order):
            counts[n] += counts[n - i]
    return FormalSeries.from_integer_list(counts)


def _odd(sign: int, power: int) -> QProductSpec:
    return QProductSpec(start=1, sign=sign, odd_only=True, power=power)


def super_character(spec: CharacterSpec, order: int) -> FormalSeries:
    """prod (1 + q^n)^{dim_odd} / (1 - q^n)^{dim_even}."""
    _check_order(order)
    fermions = series_qproduct(QProductSpec(start=1, sign=1, power=spec.dim_odd), order)
    bosons = series_qproduct(QProductSpec(start=1, sign=-1, power=-spec.dim_even), order)
    return fermions * bosons


def super_supertrace(spec: CharacterSpec, order: int) -> FormalSeries:
    """prod (1 - q^n)^{dim_odd - dim_even}: odd states counted with sign -1."""
    _check_order(order)
    return series_qproduct(QProductSpec(start=1, sign=-1, power=spec.dim_odd - spec.dim_even), order)


def ktheory_euler_series(spec: WreathSpec, order: int) -> FormalSeries:
    """prod (1 - q^{2n-1})^{-e}; the q^N coefficient is the Euler number of the N-th wreath product."""
    _check_order(order)
    return series_qproduct(_odd(-1, -spec.euler), order)


def fock_graded_dim(spec: CharacterSpec, order: int) -> FormalSeries:
    """prod (1 + q^{2n-1})^{dim K^1} / (1 - q^{2n-1})^{dim K^0}."""
    _check_order(order)
    return series_qproduct(_odd(1, spec.dim_odd), order) * series_qproduct(_odd(-1, -spec.dim_even), order)


def point_case_series(classes: int, order: int) -> FormalSeries:
    """The point case: prod (1 - q^{2n-1})^{-|Gamma_*|}."""
    return ktheory_euler_series(WreathSpec(euler=classes, classes=classes), order)


# -- numeric values against the spectral forms --------------------------------

def _spectral_report(identity: str, params: dict, conventions: dict, lhs: Estimate,
                     factors: list[tuple[int, callable]], tol: float) -> IdentityReport:
    """Compare lhs with prod f()^k over ``factors``; a pole leaves the residual empty."""
    nums, dens = [], []
    try:
        for power, make in factors:
            if power:
                value = make()
                (nums if power > 0 else dens).extend([value] * abs(power))
        rhs = combine(nums, dens)
    except PoleError as exc:
        return IdentityReport(identity, params, conventions, lhs.value, None, None, lhs.tail, tol,
                              note=f"pole in spectral side: {exc}")
    return IdentityReport(identity, params, conventions, lhs.value, rhs.value, abs(lhs.value - rhs.value),
                          lhs.tail + rhs.tail, tol)


def super_character_at(spec: CharacterSpec, tau: ModularParameter, policy: TruncationPolicy | None = None,
                       reading: str = "ratio", eta_convention: str | None = None,
                       tol: float = 1e-8) -> IdentityReport:
    """Product value of the character against R(1 - it + i eta)^{dim_odd} / R(1 - it)^{dim_even}."""
    policy = policy or TruncationPolicy.default()
    lhs = combine([numeric_qproduct(QProductSpec(start=1, sign=1, power=spec.dim_odd), tau, policy),
                   numeric_qproduct(QProductSpec(start=1, sign=-1, power=-spec.dim_even), tau, policy)])
    eta = eta_value(tau, eta_convention)
    arg = complex(1, -tau.t)
    params = {"dim_even": spec.dim_even, "dim_odd": spec.dim_odd, "tau": tau_param(tau)}
    conventions = {"eta": eta_label(tau, eta_convention), "r_reading": reading}
    return _spectral_report("character.trace", params, conventions, lhs, [
        (spec.dim_odd, lambda: r_factor(arg, tau, "eta-shifted", reading, policy, eta)),
        (-spec.dim_even, lambda: r_factor(arg, tau, "plain", reading, policy, eta)),
    ], tol)


def super_supertrace_at(spec: CharacterSpec, tau: ModularParameter, policy: TruncationPolicy | None = None,
                        reading: str = "ratio", tol: float = 1e-8) -> IdentityReport:
    """Product value of the supertrace against R(1 - it)^{dim_odd - dim_even}."""
    policy = policy or TruncationPolicy.default()
    power = spec.dim_odd - spec.dim_even
    lhs = numeric_qproduct(QProductSpec(start=1, sign=-1, power=power), tau, policy)
    params = {"dim_even": spec.dim_even, "dim_odd": spec.dim_odd, "tau": tau_param(tau)}
    return _spectral_report("character.supertrace", params, {"r_reading": reading}, lhs, [
        (power, lambda: r_factor(complex(1, -tau.t), tau, "plain", reading, policy)),
    ], tol)


def ktheory_euler_at(spec: WreathSpec, tau: ModularParameter, policy: TruncationPolicy | None = None,
                     reading: str = "ratio", tol: float = 1e-8) -> IdentityReport:
    """prod (1 - q^{2n-1})^{-e} against R(1/2 - it/2)^{-e}."""
    policy = policy or TruncationPolicy.default()
    lhs = numeric_qproduct(_odd(-1, -spec.euler), tau, policy)
    arg = complex(0.5, -0.5 * tau.t)
    params = {"euler": spec.euler, "classes": spec.classes, "tau": tau_param(tau)}
    return _spectral_report("character.ktheory", params, {"r_reading": reading}, lhs, [
        (-spec.euler, lambda: r_factor(arg, tau, "plain", reading, policy)),
    ], tol)


def fock_graded_dim_at(spec: CharacterSpec, tau: ModularParameter, policy: TruncationPolicy | None = None,
                       placement: str = "half", reading: str = "ratio", eta_convention: str | None = None,
                       tol: float = 1e-8) -> IdentityReport:
    """dim_q of the Fock space against R(1/2 - it/2 + c i eta)^{dim K^1} / R(1/2 - it/2)^{dim K^0}.

    ``placement`` picks c: ``half`` is c = 1/2, ``full`` is c = 1 as in the
    shifted rows of the generating-function table.
    """
    if placement not in PLACEMENTS:
        raise DomainError(f"unknown placement {placement!r}; expected one of {PLACEMENTS}")
    policy = policy or TruncationPolicy.default()
    lhs = combine([numeric_qproduct(_odd(1, spec.dim_odd), tau, policy),
                   numeric_qproduct(_odd(-1, -spec.dim_even), tau, policy)])
    eta = eta_value(tau, eta_convention) * (0.5 if placement == "half" else 1.0)
    arg = complex(0.5, -0.5 * tau.t)
    params = {"dim_k0": spec.dim_even, "dim_k1": spec.dim_odd, "tau": tau_param(tau)}
    conventions = {"eta": eta_label(tau, eta_convention), "eta_placement": placement, "r_reading": reading}
    return _spectral_report("character.fock", params, conventions, lhs, [
        (spec.dim_odd, lambda: r_factor(arg, tau, "eta-shifted", reading, policy, eta)),
        (-spec.dim_even, lambda: r_factor(arg, tau, "plain", reading, policy)),
    ], tol)
