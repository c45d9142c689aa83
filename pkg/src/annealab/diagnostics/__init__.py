# -*- coding: utf-8 -*-
"""
================================
 Diagnostics
================================

Estimators and oracles that turn the convergence theory into testable numbers:
Gibbs equilibrium, exit-time statistics, Arrhenius and sharpening fits, success
probabilities and finite-difference checks.
"""
from .equilibrium import (
    AngularHistogram,
    equilibrium_histogram,
    gibbs_reference_density,
    total_variation,
)
from .escape import (
    ExitTimeEstimate,
    ExitTimeSample,
    FailurePoint,
    SuccessFraction,
    estimate_exit_times,
    failure_curve,
    is_non_increasing_within_intervals,
    success_fraction,
    success_fraction_at,
    wilson_interval,
)
from .fits import (
    FitResult,
    arrhenius_fit,
    critical_failure_exponent,
    linear_fit,
    loglog_fit,
    sharpening_fit,
    sharpening_norms,
    spectral_norm,
)
from .oracles import (
    OracleInstance,
    central_difference,
    fd_check_gradient,
    fd_check_hessian,
    gradient_errors,
    hessian_errors,
    random_instance,
)
