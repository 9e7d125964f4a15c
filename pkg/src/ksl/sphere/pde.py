"""Sobolev quotient, its gradient, and a Newton solver for the model equation.

The equation is -box u + lambda u = u^q for positive u on the unit sphere.
Below the spectral threshold the only positive solution is the constant
lambda^(1/(q-1)); the solver exists to confirm that numerically from many
starting points. Integrals here are raw sphere integrals, not averages: the
quotient is implemented exactly as displayed, and its critical values carry
the resulting volume factors (the constant field scores
lambda * Vol^((q-1)/(q+1))).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse.linalg import LinearOperator, gmres

from ..errors import DomainError
from .field import SphereField
from .grid import AREA, QuadratureGrid
from .ops import avg_square, grad_energy


def _require_positive(u: SphereField, who: str) -> np.ndarray:
    vals = u.values_over()
    if np.min(vals) <= 0.0:
        raise DomainError(f"{who} requires a pointwise positive field")
    return vals


def _power_avg(u: SphereField, p: float, vals_over: np.ndarray | None = None) -> float:
    vals = u.values_over() if vals_over is None else vals_over
    return u.grid.average(np.abs(vals) ** p, u.grid.over)


def quotient(u: SphereField, lam: float, q: float) -> float:
    """(int |del u|^2 + lambda int u^2) / (int |u|^{q+1})^{2/(q+1)}."""
    if lam <= 0:
        raise DomainError(f"spectral parameter must be positive, got {lam}")
    vals = _require_positive(u, "quotient")
    num = 0.5 * AREA * grad_energy(u) + lam * AREA * avg_square(u)
    den = (AREA * _power_avg(u, q + 1.0, vals)) ** (2.0 / (q + 1.0))
    return num / den


def _projected_power(u: SphereField, p: float) -> np.ndarray:
    """Coefficients of u^p, evaluated on the oversampled grid and truncated."""
    grid = u.grid
    vals = u.values_over()
    return grid.analysis(vals**p, grid.over)


def quotient_gradient(u: SphereField, lam: float, q: float) -> SphereField:
    """L^2(dA) gradient of the quotient: the scaled Euler-Lagrange residual.

    The pairing of this field against a direction (as a raw sphere integral)
    equals the derivative of quotient along that direction.
    """
    if lam <= 0:
        raise DomainError(f"spectral parameter must be positive, got {lam}")
    grid = u.grid
    vals = _require_positive(u, "quotient_gradient")
    int_pow = AREA * _power_avg(u, q + 1.0, vals)
    num = 0.5 * AREA * grad_energy(u) + lam * AREA * avg_square(u)
    den = int_pow ** (2.0 / (q + 1.0))
    c = num / int_pow
    uq = grid.analysis(vals**q, grid.over)
    resid = u.coeffs * (grid.minus_box_eigs[None, :, None] + lam) - c * uq
    return SphereField.from_coeffs(grid, (2.0 / den) * resid)


@dataclass(frozen=True)
class SolveReport:
    converged: bool
    iterations: int
    residual_sup: float
    is_constant: bool
    constant_value: float | None
    message: str
    field: SphereField | None


def _residual_coeffs(grid: QuadratureGrid, coeffs: np.ndarray, lam: float, q: float) -> np.ndarray:
    vals = grid.synthesis(coeffs, grid.over)
    return coeffs * (grid.minus_box_eigs[None, :, None] + lam) - grid.analysis(
        vals**q, grid.over
    )


def newton_solve(
    lam: float,
    q: float,
    u0: SphereField,
    tol: float = 1e-10,
    max_iters: int = 40,
) -> SolveReport:
    """Newton iteration on -box u + lambda u - u^q in harmonic space.

    The Jacobian action w -> (-box + lambda) w - q u^{q-1} w is applied
    spectrally (the multiplication runs through the oversampled grid) and
    each linear step is solved iteratively to relative residual 1e-10.
    Steps that lose positivity are halved, at most 30 times; running out of
    halvings or iterations yields a non-converged report, not an exception.
    """
    if lam <= 0:
        raise DomainError(f"spectral parameter must be positive, got {lam}")
    if q <= 1:
        raise DomainError(f"exponent must exceed 1, got q = {q}")
    grid = u0.grid
    _require_positive(u0, "newton_solve")

    shape = grid.coeff_shape()
    size = int(np.prod(shape))
    coeffs = u0.coeffs.copy()

    def finish(converged: bool, iters: int, rsup: float, message: str) -> SolveReport:
        u = SphereField.from_coeffs(grid, coeffs)
        avg = u.mean()
        is_const = float(np.max(np.abs(u.values - avg))) < 10.0 * tol
        return SolveReport(
            converged=converged,
            iterations=iters,
            residual_sup=rsup,
            is_constant=is_const,
            constant_value=avg if is_const else None,
            message=message,
            field=u,
        )

    for it in range(max_iters + 1):
        res = _residual_coeffs(grid, coeffs, lam, q)
        rsup = float(np.max(np.abs(grid.synthesis(res))))
        if rsup < tol:
            return finish(True, it, rsup, "converged")
        if it == max_iters:
            return finish(False, it, rsup, "max iterations exceeded")

        uvals = grid.synthesis(coeffs, grid.over)
        jac_weight = q * uvals ** (q - 1.0)

        def matvec(w_flat: np.ndarray) -> np.ndarray:
            w = w_flat.reshape(shape)
            wvals = grid.synthesis(w, grid.over)
            out = w * (grid.minus_box_eigs[None, :, None] + lam) - grid.analysis(
                jac_weight * wvals, grid.over
            )
            return out.ravel()

        op = LinearOperator((size, size), matvec=matvec)
        step, info = gmres(op, -res.ravel(), rtol=1e-10, atol=0.0, restart=100, maxiter=500)
        if info != 0:
            return finish(False, it, rsup, f"linear solver stalled (info = {info})")
        step = step.reshape(shape)

        scale = 1.0
        for _ in range(31):
            candidate = coeffs + scale * step
            if float(np.min(grid.synthesis(candidate, grid.over))) > 0.0:
                break
            scale *= 0.5
        else:
            return finish(False, it, rsup, "positivity lost after 30 step halvings")
        coeffs = candidate

    raise AssertionError("unreachable")
