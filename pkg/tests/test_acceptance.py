"""Acceptance gate: one test per criterion, each printing a single PASS/FAIL line.

Tolerances are pinned here rather than read from the library so that a change
of defaults cannot quietly move the gate.
"""

import random
from fractions import Fraction

import pytest

from spectra_qkit import (BettiVector, CharacterSpec, ModularParameter, QProductSpec, WreathSpec,
                          enumerate_partitions, euler_specialization, fock_graded_dim, goettsche_series,
                          growth_check, growth_samples, ktheory_euler_series, partition_gf, series_qproduct,
                          super_character, super_supertrace, verify_f_triple, verify_table_row, verify_zeros,
                          weber_f_series)
from spectra_qkit.identities import cross_check_z, run_suite, standard_z_grid, zero_indices
from spectra_qkit.report import reports_to_json

CROSSZ_TOL = 1e-9
ZERO_TOL = 1e-10
TABLE_TOL = 1e-8
FTRIPLE_TOL = 1e-10
ORDER = 20

TAUS = (ModularParameter(0.25, 1.0), ModularParameter(0.3, 1.1), ModularParameter(0.1, 1.5))
SHAPES = [(ell, eps) for ell in (0, 1, 2) for eps in (Fraction(0), Fraction(1, 2)) if ell + eps > 0]


@pytest.fixture
def verdict(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})")
        assert ok, detail
    return emit


def test_criterion_1_dual_representation(verdict):
    report = cross_check_z(standard_z_grid(), tol=0.0)
    worst = report.details["max_residual"]
    verdict(1, "product vs exp(log-series) on 5x5 grid, three taus", worst < CROSSZ_TOL,
            f"max residual {worst:.2e} < {CROSSZ_TOL:g} over {report.details['points']} points")


def test_criterion_2_zero_formula(verdict):
    reports = verify_zeros(ModularParameter(0.3, 1.1), zero_indices(max_total=3, max_n=3))
    worst = max(r.residual for r in reports)
    verdict(2, "|Z| at predicted zeros, k1+k2<=3, |n|<=3", worst < ZERO_TOL and len(reports) == 70,
            f"max |Z(zeta)| {worst:.2e} < {ZERO_TOL:g} over {len(reports)} zeros")


def test_criterion_3_table_rows_1_to_4(verdict):
    failures, worst = [], 0.0
    for row in (1, 2, 3, 4):
        for tau in TAUS:
            for ell, eps in SHAPES:
                r = verify_table_row(row, ell, eps, tau)
                residual = float("inf") if r.residual is None else r.residual
                worst = max(worst, residual)
                if not residual < TABLE_TOL:
                    failures.append(f"row{row}")
    rows = sorted(set(failures))
    verdict(3, "q-products equal Z ratios, rows 1-4", not failures,
            f"{len(failures)} of {4 * len(TAUS) * len(SHAPES)} cases above {TABLE_TOL:g}"
            + (f" in {', '.join(rows)}; worst {worst:.2e}" if failures else ""))


def test_criterion_4_f_triple(verdict):
    exact = verify_f_triple(order=ORDER, m_base=0)
    product = weber_f_series(1, ORDER) * weber_f_series(2, ORDER) * weber_f_series(3, ORDER)
    numeric = verify_f_triple(ModularParameter(0.0, 1.0), m_base=0)
    ok = product.is_one() and exact.residual == 0 and numeric.residual < FTRIPLE_TOL
    verdict(4, "f1 f2 f3 = 1 (m >= 0)", ok,
            f"exact to order {ORDER}: {product.is_one()}; |f1f2f3 - 1| at tau=i {numeric.residual:.2e}"
            f" < {FTRIPLE_TOL:g}")


def _brute_count(n, allowed, distinct):
    """Count partitions of n into parts from ``allowed`` (descending), by plain recursion."""
    def go(rest, i):
        if rest == 0:
            return 1
        total = 0
        for j in range(i, len(allowed)):
            part = allowed[j]
            if part > rest:
                continue
            if distinct:
                total += go(rest - part, j + 1)
            else:
                total += go(rest - part, j)
        return total
    return go(n, 0)


def test_criterion_5_partition_oracle(verdict):
    n_max = 30
    size = n_max + 1
    products = {
        "all": partition_gf(size),
        "distinct": super_character(CharacterSpec(0, 1), size),
        "odd": ktheory_euler_series(WreathSpec(1), size),
        "distinct-odd": fock_graded_dim(CharacterSpec(0, 1), size),
    }
    mismatches = []
    for constraint, series in products.items():
        parts = list(range(n_max, 0, -1))
        if "odd" in constraint:
            parts = [p for p in parts if p % 2]
        distinct = "distinct" in constraint
        for n in range(size):
            brute = _brute_count(n, parts, distinct)
            if series[n] != brute or len(enumerate_partitions(n, constraint)) != brute:
                mismatches.append((constraint, n))
    euler = products["distinct"] == products["odd"]
    verdict(5, "four products vs brute-force partition counts, N <= 30", not mismatches and euler,
            f"{len(mismatches)} mismatches; distinct = odd: {euler}")


def test_criterion_6_goettsche(verdict):
    rng = random.Random(20240601)
    first_slices = all(
        goettsche_series(b, 2).rows[1] == tuple(b)
        for b in (BettiVector(*(rng.randint(0, 25) for _ in range(5))) for _ in range(10)))
    rng = random.Random(11)
    euler_ok = all(
        euler_specialization(b, 10) == series_qproduct(QProductSpec(start=1, sign=-1, power=-b.euler), 10)
        for b in [BettiVector(1, 0, 22, 0, 1)] + [BettiVector(*(rng.randint(0, 6) for _ in range(5)))
                                                  for _ in range(5)])
    point = goettsche_series(BettiVector(1, 0, 0, 0, 0), 16).specialize(1) == partition_gf(16).coefficients()
    verdict(6, "Goettsche q^1 slice, r = -1 and r = 1 specializations", first_slices and euler_ok and point,
            f"q^1 slices: {first_slices}; r=-1 to order 10: {euler_ok}; r=1 gives p(N), N<=15: {point}")


def test_criterion_7_inverse_pairs_and_multiplicativity(verdict):
    checks = {}
    for sign in (1, -1):
        for odd in (False, True):
            for p in (1, 2, 5):
                a = series_qproduct(QProductSpec(start=1, sign=sign, odd_only=odd, power=p), ORDER)
                b = series_qproduct(QProductSpec(start=1, sign=sign, odd_only=odd, power=-p), ORDER)
                checks[f"inverse s={sign} odd={odd} p={p}"] = (a * b).is_one()
    eta_spec = QProductSpec(start=1, sign=-1)
    checks["euler * partitions"] = (series_qproduct(eta_spec, ORDER) * partition_gf(ORDER)).is_one()
    for a, b in ((1, 0), (0, 2), (3, 1)):
        for c, d in ((0, 1), (2, 2)):
            for name, fn in (("character", super_character), ("fock", fock_graded_dim),
                             ("supertrace", super_supertrace)):
                lhs = fn(CharacterSpec(a, b), ORDER) * fn(CharacterSpec(c, d), ORDER)
                checks[f"{name} ({a},{b})+({c},{d})"] = lhs == fn(CharacterSpec(a + c, b + d), ORDER)
    for e1, e2 in ((1, 2), (-3, 3), (24, -1)):
        lhs = ktheory_euler_series(WreathSpec(e1), ORDER) * ktheory_euler_series(WreathSpec(e2), ORDER)
        checks[f"ktheory {e1}+{e2}"] = lhs == ktheory_euler_series(WreathSpec(e1 + e2), ORDER)
    failed = [k for k, v in checks.items() if not v]
    verdict(7, "inverse pairs and multiplicativity at order 20", not failed,
            f"{len(checks) - len(failed)}/{len(checks)} exact" + (f"; failed {failed}" if failed else ""))


def test_criterion_8_audits_are_deterministic(verdict):
    suites = ("ruelletriple", "eulerbracket", "goettsche-spectral")
    combos = [(m, eta, reading) for m in (0, 1) for eta in ("+", "-", "half-period") for reading in ("ratio", "triple")]
    crashes, unstable, count = [], [], 0
    for suite in suites:
        for m, eta, reading in combos:
            try:
                first = reports_to_json(run_suite(suite, m_base=m, eta_convention=eta, reading=reading))
                second = reports_to_json(run_suite(suite, m_base=m, eta_convention=eta, reading=reading))
            except Exception as exc:  # the criterion is that nothing raises
                crashes.append(f"{suite} {m} {eta} {reading}: {exc!r}")
                continue
            count += 1
            if first != second:
                unstable.append(f"{suite} {m} {eta} {reading}")
    verdict(8, "audit suites under every convention flag", not crashes and not unstable,
            f"{count} runs, {len(crashes)} crashes, {len(unstable)} byte-unstable")


def test_criterion_9_growth_bound(verdict):
    tau = ModularParameter(0.3, 1.1)
    fit = growth_check(tau, growth_samples(tau, 100, margin=0.1), margin=0.1)
    verdict(9, "log|Z| <= log C1 + C2 |s|^3 on 100 samples", fit.passed and len(fit.samples) == 100,
            f"log C1 = {fit.log_c1:.3f}, C2 = {fit.c2:.4f}, {len(fit.violations)} violations")
