"""Gradient descent with a backtracking (Armijo) line search.

One engine serves both the full embedding fit and the per-axis-point
solves; callers choose the stopping rule. The accepted step size is
doubled before each new search so the effective step adapts in both
directions.
"""

from dataclasses import dataclass

import numpy as np

ARMIJO_C = 1e-4
MIN_STEP = 1e-20


class NumericalError(RuntimeError):
    """Objective or gradient became non-finite during descent."""


@dataclass(frozen=True)
class DescentResult:
    x: np.ndarray
    value: float
    iterations: int
    converged: bool
    status: str


def minimize_descent(
    fun,
    grad,
    x0,
    max_iterations=1000,
    rel_tolerance=None,
    grad_tolerance=None,
    step_rule="backtracking",
    step_size=0.01,
    initial_step=1.0,
):
    """Minimize ``fun`` from ``x0`` by first-order descent.

    Parameters
    ----------
    fun, grad : callables on flat float arrays
    max_iterations : cap on accepted steps
    rel_tolerance : stop once the relative decrease of ``fun`` over one
        accepted step falls below this (or no decreasing step exists)
    grad_tolerance : stop once the gradient 2-norm falls below this
    step_rule : "backtracking" halves the step until the Armijo condition
        f(x - t g) <= f(x) - c t ||g||^2 holds; "fixed" always steps by
        ``step_size`` and stops on the first non-decrease
    """
    if step_rule not in ("backtracking", "fixed"):
        raise ValueError(f"unknown step_rule '{step_rule}'")
    x = np.asarray(x0, dtype=float).copy()
    f = float(fun(x))
    if not np.isfinite(f):
        raise NumericalError("objective is not finite at the starting point")
    step = float(initial_step)
    for it in range(1, max_iterations + 1):
        g = np.asarray(grad(x), dtype=float)
        if not np.all(np.isfinite(g)):
            raise NumericalError(f"gradient became non-finite at iteration {it}")
        gnorm_sq = float(g @ g)
        gnorm = np.sqrt(gnorm_sq)
        if grad_tolerance is not None and gnorm < grad_tolerance:
            return DescentResult(x, f, it - 1, True, "grad_tolerance")
        if gnorm == 0.0:
            return DescentResult(x, f, it - 1, True, "stationary")

        if step_rule == "fixed":
            x_new = x - step_size * g
            f_new = float(fun(x_new))
            if not np.isfinite(f_new) or f_new >= f:
                return DescentResult(x, f, it - 1, rel_tolerance is not None, "stalled")
        else:
            step = min(step * 2.0, 1e12)
            while True:
                x_new = x - step * g
                f_new = float(fun(x_new))
                if np.isfinite(f_new) and f_new <= f - ARMIJO_C * step * gnorm_sq:
                    break
                step *= 0.5
                if step < MIN_STEP:
                    # No decreasing step exists to machine precision.
                    return DescentResult(x, f, it - 1, rel_tolerance is not None, "stalled")

        decrease = f - f_new
        denom = max(abs(f), 1e-300)
        x, f = x_new, f_new
        if rel_tolerance is not None and decrease / denom < rel_tolerance:
            return DescentResult(x, f, it, True, "rel_tolerance")
    return DescentResult(x, f, max_iterations, False, "max_iterations")
