"""Nonlinear least-squares fits of the two accuracy-versus-cases models.

    M1 model:  y = 1 - exp(-C1 * sqrt(cases))          one coefficient
    M2 model:  y = C2 * exp(-C3 * sqrt(cases))         two coefficients

Fitting is damped Gauss-Newton (Levenberg-Marquardt) with multiplicative
damping on the diagonal of J'J: lambda starts at 1e-3, divides by 10 on an
accepted step and multiplies by 10 on a rejected one. Convergence is declared
when the relative parameter change of an accepted step drops below 1e-8,
within at most 200 iterations.

Reported statistics: R^2 = 1 - RSS/TSS and standard errors from the diagonal
of (J'J)^-1 * RSS / (n - p).
"""

from __future__ import annotations

import csv
import io
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .evaluation import EvaluationRecord, stratify

MAX_ITERATIONS = 200
REL_STEP_TOL = 1e-8
LAMBDA_INIT = 1e-3
LAMBDA_LIMIT = 1e12


class RegressionError(RuntimeError):
    """Fit cannot proceed (singular Jacobian, bad inputs, no variance)."""


@dataclass(frozen=True)
class RegressionFit:
    model_id: str                       # "M1" or "M2"
    stratum: str                        # "all", "ord2", "ord3", ...
    coefficients: tuple[float, ...]
    standard_errors: tuple[float, ...]
    r_squared: float
    iterations: int
    converged: bool
    rss: float
    n_points: int
    rss_trace: tuple[float, ...]        # RSS after each accepted step


@dataclass(frozen=True)
class FitFailure:
    model_id: str
    stratum: str
    reason: str


def _m1_model(c, theta):
    return 1.0 - np.exp(-theta[0] * np.sqrt(c))


def _m1_jacobian(c, theta):
    root = np.sqrt(c)
    return (root * np.exp(-theta[0] * root))[:, None]


def _m2_model(c, theta):
    return theta[0] * np.exp(-theta[1] * np.sqrt(c))


def _m2_jacobian(c, theta):
    root = np.sqrt(c)
    decay = np.exp(-theta[1] * root)
    return np.column_stack([decay, -theta[0] * root * decay])


def _levenberg_marquardt(model, jacobian, x, y, theta0):
    theta = np.array(theta0, dtype=np.float64)
    residual = y - model(x, theta)
    rss = float(residual @ residual)
    trace = [rss]
    lam = LAMBDA_INIT
    converged = False
    iterations = 0
    while iterations < MAX_ITERATIONS:
        iterations += 1
        jac = jacobian(x, theta)
        if not np.all(np.isfinite(jac)):
            raise RegressionError("Jacobian is not finite")
        normal = jac.T @ jac
        diag = np.diag(normal).copy()
        if np.any(diag <= 0.0):
            raise RegressionError("singular Jacobian: a column of J is zero")
        gradient = jac.T @ residual
        try:
            step = np.linalg.solve(normal + lam * np.diag(diag), gradient)
        except np.linalg.LinAlgError as exc:
            raise RegressionError(f"singular normal equations: {exc}") from exc
        candidate = theta + step
        candidate_residual = y - model(x, candidate)
        candidate_rss = float(candidate_residual @ candidate_residual)
        if candidate_rss < rss:
            relative_change = float(
                np.max(np.abs(step) / (np.abs(candidate) + 1e-300))
            )
            theta, residual, rss = candidate, candidate_residual, candidate_rss
            trace.append(rss)
            lam /= 10.0
            if relative_change < REL_STEP_TOL:
                converged = True
                break
        else:
            lam *= 10.0
            if lam > LAMBDA_LIMIT:
                break
    return theta, rss, tuple(trace), iterations, converged


def _finish(model_id, stratum, model, jacobian, x, y, theta, rss, trace, iterations, converged):
    n, p = x.size, theta.size
    jac = jacobian(x, theta)
    normal = jac.T @ jac
    try:
        covariance = np.linalg.inv(normal) * (rss / (n - p))
    except np.linalg.LinAlgError as exc:
        raise RegressionError(f"singular J'J at the solution: {exc}") from exc
    tss = float(np.sum((y - y.mean()) ** 2))
    if tss == 0.0:
        raise RegressionError("responses have zero variance; R^2 undefined")
    return RegressionFit(
        model_id=model_id,
        stratum=stratum,
        coefficients=tuple(float(t) for t in theta),
        standard_errors=tuple(float(s) for s in np.sqrt(np.diag(covariance))),
        r_squared=1.0 - rss / tss,
        iterations=iterations,
        converged=converged,
        rss=rss,
        n_points=n,
        rss_trace=trace,
    )


def _prepare(cases, values, n_params, model_id):
    x = np.asarray(cases, dtype=np.float64)
    y = np.asarray(values, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("cases and values must be one-dimensional and equal length")
    if np.any(x < 0):
        raise ValueError("case counts must be >= 0")
    if x.size < 2:
        raise ValueError(f"{model_id} fit needs at least 2 points")
    if x.size <= n_params:
        raise RegressionError(
            f"{model_id} fit with {x.size} points leaves no degrees of freedom"
        )
    return x, y


def fit_m1(cases, values, init: float = 0.1, stratum: str = "all") -> RegressionFit:
    """Fit y = 1 - exp(-C1 sqrt(cases)); returns the C1 estimate and stats."""
    x, y = _prepare(cases, values, 1, "M1")
    theta, rss, trace, iterations, converged = _levenberg_marquardt(
        _m1_model, _m1_jacobian, x, y, (init,)
    )
    return _finish("M1", stratum, _m1_model, _m1_jacobian, x, y, theta, rss, trace, iterations, converged)


def fit_m2(cases, values, init: tuple[float, float] = (1.0, 0.1), stratum: str = "all") -> RegressionFit:
    """Fit y = C2 exp(-C3 sqrt(cases)); returns (C2, C3) estimates and stats."""
    x, y = _prepare(cases, values, 2, "M2")
    theta, rss, trace, iterations, converged = _levenberg_marquardt(
        _m2_model, _m2_jacobian, x, y, init
    )
    return _finish("M2", stratum, _m2_model, _m2_jacobian, x, y, theta, rss, trace, iterations, converged)


def fit_records(
    records: Sequence[EvaluationRecord],
) -> tuple[list[RegressionFit], list[FitFailure]]:
    """Fit both models on the pooled data and on each ordinality stratum.

    Strata that are empty or whose fit raises are reported as failures
    instead of aborting the batch.
    """
    fits: list[RegressionFit] = []
    failures: list[FitFailure] = []
    for stratum, rs in stratify(records).items():
        cases = [r.cases for r in rs]
        for model_id, values, fitter in (
            ("M1", [r.m1 for r in rs], fit_m1),
            ("M2", [r.m2 for r in rs], fit_m2),
        ):
            if not rs:
                failures.append(FitFailure(model_id, stratum, "empty stratum"))
                continue
            try:
                fits.append(fitter(cases, values, stratum=stratum))
            except (RegressionError, ValueError) as exc:
                failures.append(FitFailure(model_id, stratum, str(exc)))
    return fits, failures


def render_regression(fits: Sequence[RegressionFit], failures: Sequence[FitFailure] = ()) -> str:
    lines = ["model  stratum  n      R^2        coefficients (std. errors)"]
    for f in fits:
        coef = ", ".join(
            f"{c:.6g} (±{se:.2g})" for c, se in zip(f.coefficients, f.standard_errors)
        )
        flag = "" if f.converged else "  [did not converge]"
        lines.append(
            f"{f.model_id:<6} {f.stratum:<8} {f.n_points:<6} {f.r_squared:<10.4f} {coef}{flag}"
        )
    for f in failures:
        lines.append(f"{f.model_id:<6} {f.stratum:<8} failed: {f.reason}")
    return "\n".join(lines) + "\n"


def regression_to_csv(fits: Sequence[RegressionFit], failures: Sequence[FitFailure] = ()) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(
        ["model", "stratum", "n_points", "converged", "iterations",
         "r_squared", "rss", "coef_1", "se_1", "coef_2", "se_2", "note"]
    )
    for f in fits:
        coefs = list(f.coefficients) + [""] * (2 - len(f.coefficients))
        ses = list(f.standard_errors) + [""] * (2 - len(f.standard_errors))
        writer.writerow(
            [f.model_id, f.stratum, f.n_points, int(f.converged), f.iterations,
             repr(f.r_squared), repr(f.rss),
             repr(coefs[0]), repr(ses[0]),
             repr(coefs[1]) if coefs[1] != "" else "",
             repr(ses[1]) if ses[1] != "" else "", ""]
        )
    for f in failures:
        writer.writerow([f.model_id, f.stratum, 0, 0, 0, "", "", "", "", "", "", f.reason])
    return out.getvalue()
