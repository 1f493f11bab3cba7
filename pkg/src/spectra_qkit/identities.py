"""Audit harness: every asserted identity is evaluated on both sides and the residual recorded.

Nothing here assumes an identity holds.  A report is ``hard`` or ``audit``
according to the manifest in ``report.HARD_IDENTITIES``; audits never fail a
verification run but their residuals are always reported.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainError, PoleError
from .fock import (CharacterSpec, PLACEMENTS, WreathSpec, fock_graded_dim_at, ktheory_euler_at,
                   super_character_at, super_supertrace_at)
from .hilbert import BettiVector, goettsche_spectral_check
from .params import (ETA_CONVENTIONS, Estimate, ModularParameter, TruncationPolicy, combine, eta_label,
                     eta_value)
from .qseries import QProductSpec, numeric_qproduct, series_qproduct, weber_f, weber_f_series
from .report import IdentityReport, series_residual, tau_param
from .series import FormalSeries
from .spectral import (R_READINGS, ZeroIndex, r_factor, verify_zero, z_gamma_from_logseries,
                       z_gamma_product, zeros_predicted)

STANDARD_TAUS = (ModularParameter(0.25, 1.0), ModularParameter(0.3, 1.1), ModularParameter(0.1, 1.5))
CROSSZ_TAUS = (ModularParameter(0.25, 1.0), ModularParameter(0.3, 1.1), ModularParameter(0.0, 1.0))
ZERO_TAU = ModularParameter(0.3, 1.1)
STANDARD_SHAPES = ((0, Fraction(1, 2)), (1, Fraction(0)), (1, Fraction(1, 2)), (2, Fraction(0)), (2, Fraction(1, 2)))
AUDIT_BETTI = (
    BettiVector(0, 0, 0, 0, 0), BettiVector(1, 0, 0, 0, 0), BettiVector(0, 1, 0, 0, 0),
    BettiVector(0, 0, 1, 0, 0), BettiVector(0, 0, 0, 1, 0), BettiVector(0, 0, 0, 0, 1),
    BettiVector(1, 0, 22, 0, 1), BettiVector(1, 2, 2, 2, 1),
)

TABLE_TOL = 1e-8
FTRIPLE_TOL = 1e-10
CROSSZ_TOL = 1e-9
ZERO_TOL = 1e-10
SERIES_ORDER = 20

SUITES = ("table1", "ftriple", "ruelletriple", "eulerbracket", "crossz", "zeros", "goettsche-spectral",
          "characters")


# -- generating-function table ---------------------------------------------------

# row -> (sign of the q-power, conjugated nome, ratio variant, weight-n product)
_ROWS = {
    1: (-1, False, "plain", False),
    2: (-1, True, "conjugate", False),
    3: (1, False, "eta-shifted", False),
    4: (1, True, "conjugate-eta-shifted", False),
    5: (-1, False, "plain", True),
    6: (-1, True, "conjugate", True),
    7: (1, False, "eta-shifted", True),
    8: (1, True, "conjugate-eta-shifted", True),
}
# variant of the trailing prod_n R((n+eps+1)(1 -+ it)) factors; row 6 takes plain R at 1 + it literally
_ROW_TAIL_VARIANT = {5: "plain", 6: "plain", 7: "eta-shifted", 8: "conjugate-eta-shifted"}


def table_identity_id(row: int, reading: str = "ratio", eta_convention: str | None = None) -> str:
    """``table1.rowN`` for the default reading and eta, with a suffix for every other convention."""
    ident = f"table1.row{row}"
    if reading != "ratio":
        ident += f".{reading}"
    if eta_convention not in (None, "+") and _ROWS[row][2].endswith("eta-shifted"):
        ident += f".eta{eta_convention}" if eta_convention == "-" else f".{eta_convention}"
    return ident


def _r_log_bound(x: float, nome: float, reading: str) -> float:
    # |log R(a)| with x = exp(-alpha Re a): sum_k |q|^k x for the ratio, three lattice sums for the triple
    scale = 1 / (1 - nome) if reading == "ratio" else 3 / (1 - nome) ** 2
    y = scale * x
    return math.inf if y >= 1 else y / (1 - y)


def _tail_product(first: int, make, re_at, tau: ModularParameter, policy: TruncationPolicy,
                  reading: str) -> tuple[list[Estimate], float]:
    """Factors make(n) for n >= first until the bound on the remaining log-sum drops below tol."""
    factors, n = [], first
    nome, decay = abs(tau.q), math.exp(-tau.alpha)
    while True:
        bound = _r_log_bound(math.exp(-tau.alpha * re_at(n)), nome, reading)
        log_tail = bound / (1 - decay) if math.isfinite(bound) else math.inf
        if log_tail < policy.tol or n - first > policy.cutoff:
            return factors, log_tail
        factors.append(make(n))
        n += 1


def verify_table_row(row: int, ell: int, eps, tau: ModularParameter, policy: TruncationPolicy | None = None,
                     reading: str = "ratio", eta_convention: str | None = None,
                     tol: float = TABLE_TOL) -> IdentityReport:
    """One row of the generating-function table at (ell, eps, tau).

    The left side is the q-product over n >= ell of (1 +- q^{n+eps}), raised to
    the n-th power in rows 5 to 8, with q replaced by its conjugate in the even
    rows.  The right side is built from R factors at xi = ell + eps.
    """
    if row not in _ROWS:
        raise DomainError(f"table row must be 1..8, got {row}")
    eps = Fraction(eps)
    if not isinstance(ell, int) or ell < 0 or ell + eps <= 0:
        raise DomainError(f"need integer ell >= 0 and ell + eps > 0, got ell={ell}, eps={eps}")
    policy = policy or TruncationPolicy.default()
    sign, conj, variant, weighted = _ROWS[row]
    xi = ell + eps
    lhs = numeric_qproduct(QProductSpec(start=ell, shift=eps, sign=sign, weighted=weighted),
                           tau.reflected() if conj else tau, policy)
    eta = eta_value(tau, eta_convention)
    slope = complex(1, tau.t) if conj else complex(1, -tau.t)
    params = {"row": row, "ell": ell, "eps": eps, "xi": xi, "tau": tau_param(tau)}
    conventions = {"r_reading": reading, "lhs_nome": "conj(q)" if conj else "q"}
    if variant.endswith("eta-shifted"):
        conventions["eta"] = eta_label(tau, eta_convention)
    ident = table_identity_id(row, reading, eta_convention)
    try:
        head = r_factor(float(xi) * slope, tau, variant, reading, policy, eta)
        if not weighted:
            rhs, log_tail = head, 0.0
        else:
            tail_variant = _ROW_TAIL_VARIANT[row]
            shift_re = (1j * eta).real if tail_variant.endswith("eta-shifted") else 0.0
            factors, log_tail = _tail_product(
                ell,
                lambda n: r_factor(float(n + eps + 1) * slope, tau, tail_variant, reading, policy, eta),
                lambda n: float(n + eps + 1) + shift_re,
                tau, policy, reading)
            rhs = combine([head] * ell + factors)
    except PoleError as exc:
        return IdentityReport(ident, params, conventions, lhs.value, None, None, lhs.tail, tol,
                              note=f"pole in spectral side: {exc}")
    rhs_tail = rhs.tail + abs(rhs.value) * math.expm1(log_tail) if math.isfinite(log_tail) else math.inf
    return IdentityReport(ident, params, conventions, lhs.value, rhs.value, abs(lhs.value - rhs.value),
                          lhs.tail + rhs_tail, tol)


def table_suite(taus: Sequence[ModularParameter] = STANDARD_TAUS, rows: Iterable[int] = range(1, 9),
                readings: Iterable[str] = R_READINGS, eta_conventions: Iterable[str] = ETA_CONVENTIONS,
                policy: TruncationPolicy | None = None) -> list[IdentityReport]:
    """Every row over the standard (ell, eps) shapes and taus; eta conventions only where eta enters."""
    readings, eta_conventions = tuple(readings), tuple(eta_conventions)
    out = []
    for row in rows:
        shifted = _ROWS[row][2].endswith("eta-shifted")
        for reading in readings:
            for conv in (eta_conventions if shifted else ("+",)):
                for tau in taus:
                    for ell, eps in STANDARD_SHAPES:
                        out.append(verify_table_row(row, ell, eps, tau, policy, reading, conv))
    return out


# -- f1 f2 f3 ----------------------------------------------------------------

def verify_f_triple(tau: ModularParameter | None = None, order: int | None = None, m_base: int = 0,
                    policy: TruncationPolicy | None = None, tol: float = FTRIPLE_TOL) -> IdentityReport:
    """f1 f2 f3 = 1, as an exact series when ``order`` is given and numerically at ``tau`` otherwise.

    With m_base = 1 the three products lose their first factors, whose product
    is 1 - q^2, so the series comes out as 1/(1 - q^2); the report records
    whether that closed form matches.
    """
    if (tau is None) == (order is None):
        raise DomainError("give exactly one of tau or order")
    ident = f"ftriple.m{m_base}"
    conventions = {"m_base": m_base}
    if order is not None:
        product = weber_f_series(1, order, m_base) * weber_f_series(2, order, m_base) * weber_f_series(3, order, m_base)
        one = FormalSeries.one(product.order)
        closed = one if m_base == 0 else _one_over_one_minus_q2(product.order)
        return IdentityReport(ident, {"order": order}, conventions, product, one, series_residual(product, one),
                              0.0, 0.0, details={"matches_closed_form": product.agrees_with(closed),
                                                 "closed_form": "1" if m_base == 0 else "1/(1-q^2)"})
    policy = policy or TruncationPolicy.default()
    prod = combine([weber_f(i, tau, policy, m_base) for i in (1, 2, 3)])
    details = {}
    if m_base == 1:
        details["closed_form_value"] = 1 / (1 - tau.qpow(2))
    return IdentityReport(ident, {"tau": tau_param(tau)}, conventions, prod.value, 1 + 0j, abs(prod.value - 1),
                          prod.tail, tol, details=details)


def _one_over_one_minus_q2(order) -> FormalSeries:
    n = math.ceil(order)
    return FormalSeries.from_integer_list([1 if k % 2 == 0 else 0 for k in range(n)], order=order)


# -- triple R product ------------------------------------------------------------

def verify_ruelle_triple(tau: ModularParameter, policy: TruncationPolicy | None = None, reading: str = "ratio",
                         eta_convention: str | None = None, tol: float = TABLE_TOL) -> IdentityReport:
    """R(3/2 (1-it)) R(3/2 (1-it) + i eta) R(2 (1-it) + i eta) against 1.

    Under the ratio reading with the half-period eta the three factors are
    f1, f2, f3 with their first factors removed, so the product is 1/(1 - q^2);
    that value is recorded for comparison.
    """
    policy = policy or TruncationPolicy.default()
    eta = eta_value(tau, eta_convention)
    slope = complex(1, -tau.t)
    params = {"tau": tau_param(tau)}
    conventions = {"eta": eta_label(tau, eta_convention), "r_reading": reading}
    details = {"ratio_half_period_closed_form": 1 / (1 - tau.qpow(2))}
    try:
        prod = combine([
            r_factor(1.5 * slope, tau, "plain", reading, policy, eta),
            r_factor(1.5 * slope, tau, "eta-shifted", reading, policy, eta),
            r_factor(2.0 * slope, tau, "eta-shifted", reading, policy, eta),
        ])
    except PoleError as exc:
        return IdentityReport("ruelletriple", params, conventions, None, 1 + 0j, None, 0.0, tol,
                              note=f"pole in spectral side: {exc}", details=details)
    return IdentityReport("ruelletriple", params, conventions, prod.value, 1 + 0j, abs(prod.value - 1),
                          prod.tail, tol, details=details)


# -- odd-product bracket -----------------------------------------------------------

def _bracket_series(e: int, order: int, m_base: int) -> tuple[FormalSeries, FormalSeries]:
    lhs = series_qproduct(QProductSpec(start=1, sign=-1, odd_only=True, power=-e), order)
    q_minus_one = FormalSeries({0: -1, 1: 1}, order=order)
    bracket = FormalSeries.monomial(Fraction(-25, 24), order) * q_minus_one * weber_f_series(3, order, m_base)
    return lhs, bracket ** e


def _deviation_closed_form(e: int, order, m_base: int) -> FormalSeries:
    # (1 - 1/q)^e for m >= 0 and ((q - 1) / (q (1 + q)))^e for m >= 1
    base = FormalSeries({0: -1, 1: 1}, order=order).shift(-1)
    if m_base == 1:
        base = base / FormalSeries({0: 1, 1: 1}, order=order)
    return base ** e


def audit_euler_bracket(e: int, tau: ModularParameter | None = None, order: int | None = None, m_base: int = 0,
                        policy: TruncationPolicy | None = None, tol: float = TABLE_TOL) -> IdentityReport:
    """prod (1 - q^{2n-1})^{-e} against [q^{-25/24} (q - 1) f3]^e.

    The exact route reports the deviation series rhs/lhs and checks it against
    its closed form; the numeric route reports the deviation value and its
    distance from the same closed form evaluated at q.
    """
    if not isinstance(e, int) or e < 0:
        raise DomainError(f"e must be a nonnegative integer, got {e!r}")
    if (tau is None) == (order is None):
        raise DomainError("give exactly one of tau or order")
    if m_base not in (0, 1):
        raise DomainError(f"m_base must be 0 or 1, got {m_base}")
    conventions = {"m_base": m_base}
    if order is not None:
        lhs, rhs = _bracket_series(e, order, m_base)
        deviation = rhs / lhs
        closed = _deviation_closed_form(e, order, m_base)
        return IdentityReport("eulerbracket", {"e": e, "order": order}, conventions, lhs, rhs,
                              series_residual(lhs, rhs), 0.0, 0.0,
                              details={"deviation": deviation, "deviation_matches_closed_form":
                                       deviation.agrees_with(closed)})
    policy = policy or TruncationPolicy.default()
    lhs = numeric_qproduct(QProductSpec(start=1, sign=-1, odd_only=True, power=-e), tau, policy)
    f3 = weber_f(3, tau, policy, m_base)
    pre = tau.qpow(Fraction(-25, 24)) * (tau.q - 1)
    rhs = combine([Estimate(pre * f3.value, abs(pre) * f3.tail)] * e)
    q = tau.q
    closed = ((q - 1) / q) ** e if m_base == 0 else ((q - 1) / (q * (1 + q))) ** e
    deviation = rhs.value / lhs.value
    return IdentityReport("eulerbracket", {"e": e, "tau": tau_param(tau)}, conventions, lhs.value, rhs.value,
                          abs(lhs.value - rhs.value), lhs.tail + rhs.tail, tol,
                          details={"deviation": deviation, "closed_form_deviation": closed,
                                   "deviation_discrepancy": abs(deviation - closed)})


# -- two representations of Z ----------------------------------------------------

def standard_z_grid(taus: Sequence[ModularParameter] = CROSSZ_TAUS) -> list[tuple[complex, ModularParameter]]:
    """5 x 5 grid Re s in [0.5, 5], Im s in [-2, 2] for each tau."""
    res = [0.5 + 1.125 * i for i in range(5)]
    ims = [-2.0 + 1.0 * j for j in range(5)]
    return [(complex(a, b), tau) for tau in taus for a in res for b in ims]


def cross_check_z(points: Sequence[tuple[complex, ModularParameter]], policy: TruncationPolicy | None = None,
                  tol: float = CROSSZ_TOL) -> IdentityReport:
    """Product against exp(log-series) over the grid.

    The reported residual and budget are those of the point with the largest
    excess over its own budget, so the verdict is pass exactly when every
    point passes.  An empty grid passes vacuously.
    """
    policy = policy or TruncationPolicy.default()
    worst = (-math.inf, 0.0, 0.0, None)
    max_residual = 0.0
    for s, tau in points:
        if complex(s).real <= 0:
            raise DomainError(f"cross-check needs Re s > 0, got s = {s}")
        prod = z_gamma_product(s, tau, policy)
        series = z_gamma_from_logseries(s, tau, policy)
        residual = abs(prod.value - series.value)
        budget = prod.tail + series.tail
        max_residual = max(max_residual, residual)
        if residual - budget > worst[0]:
            worst = (residual - budget, residual, budget, (complex(s), tau))
    _, residual, budget, where = worst
    details = {"points": len(points), "max_residual": max_residual}
    if where is not None:
        details["worst_point"] = {"s": where[0], "tau": tau_param(where[1])}
    return IdentityReport("crossz", {"grid_size": len(points)}, {}, None, None, residual, budget, tol,
                          details=details)


# -- zeros --------------------------------------------------------------------------

def zero_indices(max_total: int = 3, max_n: int = 3) -> list[ZeroIndex]:
    return [ZeroIndex(n, k1, total - k1)
            for total in range(max_total + 1) for k1 in range(total, -1, -1) for n in range(-max_n, max_n + 1)]


def verify_zeros(tau: ModularParameter = ZERO_TAU, indices: Iterable[ZeroIndex] | None = None,
                 box: tuple[float, float, float, float] | None = None, policy: TruncationPolicy | None = None,
                 tol: float = ZERO_TOL) -> list[IdentityReport]:
    """|Z(zeta)| at predicted zeros, from explicit indices or every zero inside ``box``."""
    if indices is None:
        indices = [i for i, _ in zeros_predicted(tau, box)] if box is not None else zero_indices()
    out = []
    for index in indices:
        res = verify_zero(index, tau, policy)
        out.append(IdentityReport("zeros", {"n": index.n, "k1": index.k1, "k2": index.k2, "tau": tau_param(tau)},
                                  {}, res.residual, 0.0, res.residual, res.tail, tol,
                                  details={"zeta": res.zeta, "cutoff": res.cutoff}))
    return out


# -- suites ---------------------------------------------------------------------------

def _choose(value, default):
    return default if value is None else (value,)


def run_suite(name: str, taus: Sequence[ModularParameter] | None = None, policy: TruncationPolicy | None = None,
              m_base: int | None = None, eta_convention: str | None = None, reading: str | None = None,
              box: tuple[float, float, float, float] | None = None) -> list[IdentityReport]:
    """Reports of one suite, or of all of them for ``all``, in a fixed order.

    Any convention left as None is swept over all its values.
    """
    if name == "all":
        out = []
        for suite in SUITES:
            out.extend(run_suite(suite, taus, policy, m_base, eta_convention, reading, box))
        return out
    if name not in SUITES:
        raise DomainError(f"unknown suite {name!r}; expected 'all' or one of {SUITES}")
    m_bases = _choose(m_base, (0, 1))
    etas = _choose(eta_convention, ETA_CONVENTIONS)
    readings = _choose(reading, R_READINGS)
    if name == "table1":
        return table_suite(taus or STANDARD_TAUS, readings=readings, eta_conventions=etas, policy=policy)
    if name == "ftriple":
        out = []
        for m in m_bases:
            out.append(verify_f_triple(order=SERIES_ORDER, m_base=m))
            for tau in (ModularParameter(0.0, 1.0),) + tuple(taus or STANDARD_TAUS):
                out.append(verify_f_triple(tau, m_base=m, policy=policy))
        return out
    if name == "ruelletriple":
        return [verify_ruelle_triple(tau, policy, r, conv)
                for r in readings for conv in etas for tau in (taus or (ModularParameter(0.3, 1.1), ModularParameter(0.0, 1.0)))]
    if name == "eulerbracket":
        out = []
        for m in m_bases:
            for e in (0, 1, 2):
                out.append(audit_euler_bracket(e, order=8, m_base=m))
                out.append(audit_euler_bracket(e, tau=ModularParameter(0.0, 1.0), m_base=m, policy=policy))
        return out
    if name == "crossz":
        return [cross_check_z(standard_z_grid(taus or CROSSZ_TAUS), policy)]
    if name == "zeros":
        out = []
        for tau in (taus or (ZERO_TAU,)):
            out.extend(verify_zeros(tau, box=box, policy=policy))
        return out
    if name == "goettsche-spectral":
        return [goettsche_spectral_check(b, tau, policy, r, conv)
                for tau in (taus or (ModularParameter(0.3, 1.1),)) for b in AUDIT_BETTI
                for r in readings for conv in etas]
    # characters
    out = []
    for tau in (taus or (ModularParameter(0.0, 1.0), ModularParameter(0.3, 1.1))):
        for r in readings:
            for conv in etas:
                out.append(super_character_at(CharacterSpec(1, 1), tau, policy, r, conv))
                for placement in PLACEMENTS:
                    out.append(fock_graded_dim_at(CharacterSpec(1, 1), tau, policy, placement, r, conv))
            out.append(super_supertrace_at(CharacterSpec(1, 2), tau, policy, r))
            out.append(ktheory_euler_at(WreathSpec(1), tau, policy, r))
    return out


def hard_failures(reports: Iterable[IdentityReport]) -> list[IdentityReport]:
    return [r for r in reports if r.kind == "hard" and not r.passed]
