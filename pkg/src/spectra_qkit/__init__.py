"""Spectral functions of hyperbolic three-geometry and the q-series they generate."""

from .errors import BudgetError, CutoffError, DomainError, GridError, PoleError, QkitError
from .fock import (CharacterSpec, WreathSpec, fock_graded_dim, fock_graded_dim_at, heisenberg_character,
                   ktheory_euler_at, ktheory_euler_series, point_case_series, super_character, super_character_at,
                   super_supertrace, super_supertrace_at)
from .hilbert import (BettiVector, BivariateSeries, euler_specialization, goettsche_series,
                      goettsche_spectral_check, poincare_polynomial)
from .identities import (audit_euler_bracket, cross_check_z, run_suite, verify_f_triple, verify_ruelle_triple,
                         verify_table_row, verify_zeros)
from .params import Estimate, ModularParameter, TruncationPolicy, combine
from .qseries import (QProductSpec, enumerate_partitions, eta, eta_series, numeric_qproduct, partition_gf,
                      series_qproduct, weber_f, weber_f_eta_quotient, weber_f_eta_quotient_series, weber_f_series)
from .report import IdentityReport
from .series import FormalSeries
from .spectral import (GrowthFit, ZeroIndex, generator_matrix, growth_check, growth_samples, hyperbolic_action,
                       order_of_vanishing, r_factor, ruelle, verify_zero, z_gamma_from_logseries, z_gamma_logseries,
                       z_gamma_product, z_ratio, zeros_predicted)

dedekind_eta = eta

__all__ = [
    "BettiVector", "BivariateSeries", "BudgetError", "CharacterSpec", "CutoffError", "DomainError", "Estimate",
    "FormalSeries", "GridError", "GrowthFit", "IdentityReport", "ModularParameter", "PoleError", "QProductSpec",
    "QkitError", "TruncationPolicy", "WreathSpec", "ZeroIndex",
    "audit_euler_bracket", "combine", "cross_check_z", "dedekind_eta", "enumerate_partitions", "eta", "eta_series",
    "euler_specialization", "fock_graded_dim", "fock_graded_dim_at", "generator_matrix", "goettsche_series",
    "goettsche_spectral_check", "growth_check", "growth_samples", "heisenberg_character", "hyperbolic_action",
    "ktheory_euler_at", "ktheory_euler_series", "numeric_qproduct", "order_of_vanishing", "partition_gf",
    "poincare_polynomial", "point_case_series", "r_factor", "ruelle", "run_suite", "series_qproduct",
    "super_character", "super_character_at", "super_supertrace", "super_supertrace_at", "verify_f_triple",
    "verify_ruelle_triple", "verify_table_row", "verify_zero", "verify_zeros", "weber_f", "weber_f_eta_quotient",
    "weber_f_eta_quotient_series", "weber_f_series", "z_gamma_from_logseries", "z_gamma_logseries",
    "z_gamma_product", "z_ratio", "zeros_predicted",
]
