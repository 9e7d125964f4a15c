"""Differential and integral operations, inequality checks, eigenvalue measurement."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ..errors import DomainError
from .field import SphereField
from .grid import AREA, QuadratureGrid


def sphere_average(f: SphereField) -> float:
    """Quadrature average (1/Vol) int f dA on the analysis grid."""
    return f.grid.average(f.values)


def box_op(f: SphereField) -> SphereField:
    """The complex Laplacian: coefficient (l, m) is scaled by -l(l+1)/2."""
    grid = f.grid
    return SphereField.from_coeffs(grid, f.coeffs * (-grid.minus_box_eigs)[None, :, None])


def avg_square(f: SphereField) -> float:
    """Average of f^2 via Parseval; exact for band-limited fields."""
    return float(np.sum(f.coeffs**2)) / AREA


def grad_energy(f: SphereField, method: str = "spectral") -> float:
    """Average of |grad f|^2 over the sphere.

    The spectral path sums l(l+1) |f_lm|^2; the quadrature path squares the
    pointwise gradient synthesized from the derivative tables. The two agree
    to transform accuracy and the tests hold them together.
    """
    grid = f.grid
    if method == "spectral":
        return float(np.sum(f.coeffs**2 * grid.grad_eigs[None, :, None])) / AREA
    if method == "quadrature":
        dtheta, dphi_scaled = grid.synth_gradient(f.coeffs)
        return grid.average(dtheta**2 + dphi_scaled**2)
    raise DomainError(f"unknown gradient method {method!r}")


def holo_energy(f: SphereField) -> float:
    """Average of the holomorphic gradient energy, half the real one."""
    return 0.5 * grad_energy(f)


@dataclass(frozen=True)
class IneqReport:
    lhs: float
    rhs: float
    margin: float
    constant: float
    q: float
    trial: str


def sobolev_check(phi: SphereField, q: float, C: float, trial: str = "") -> IneqReport:
    """Compare (avg |phi|^{q+1})^{2/(q+1)} against avg phi^2 + C avg |grad phi|^2."""
    if q <= 1:
        raise DomainError(f"exponent must exceed 1, got q = {q}")
    if C <= 0:
        raise DomainError(f"constant must be positive, got {C}")
    if float(np.max(np.abs(phi.coeffs))) == 0.0:
        raise DomainError("trial function is identically zero")
    vals = phi.values_over()
    powers = np.abs(vals) ** (q + 1.0)
    if not np.all(np.isfinite(powers)):
        raise DomainError("power evaluation produced a non-finite value")
    avg_pow = phi.grid.average(powers, phi.grid.over)
    lhs = avg_pow ** (2.0 / (q + 1.0))
    rhs = avg_square(phi) + C * grad_energy(phi)
    return IneqReport(
        lhs=lhs, rhs=rhs, margin=rhs - lhs, constant=float(C), q=float(q), trial=trial
    )


def _psi_curve(f: SphereField, q: float, t: float) -> float:
    vals = 1.0 + t * f.values_over()
    powers = np.abs(vals) ** (q + 1.0)
    avg = f.grid.average(powers, f.grid.over)
    return avg ** (2.0 / (q + 1.0))


def perturbation_tcoeff(f: SphereField, q: float, C: float) -> tuple[float, float]:
    """Second-order coefficients of both inequality sides along 1 + t*f.

    Requires f to be a first eigenfunction (-box f = f) with zero mean. The
    left side's t^2 coefficient is q * avg f^2; the right side's is
    (2 C lambda_1 + 1) * avg f^2 with lambda_1 measured from f itself. A
    five-point second-difference fit of the left side must reproduce the
    analytic value to 1e-6 relative or the computation refuses to report.
    """
    sup = f.sup_norm()
    eig_defect = (box_op(f) + f).sup_norm()
    if eig_defect > 1e-8 * max(1.0, sup):
        raise DomainError(
            f"not a first eigenfunction: |box f + f| = {eig_defect:.3e} exceeds 1e-8"
        )
    if abs(f.mean()) > 1e-10 * max(1.0, sup):
        raise DomainError(f"eigenfunction must have zero mean, got {f.mean():.3e}")
    af2 = avg_square(f)
    lhs_t2 = q * af2
    lam1 = holo_energy(f) / af2
    rhs_t2 = (2.0 * C * lam1 + 1.0) * af2

    h = 1e-3
    stencil = (
        -_psi_curve(f, q, 2 * h)
        + 16.0 * _psi_curve(f, q, h)
        - 30.0 * _psi_curve(f, q, 0.0)
        + 16.0 * _psi_curve(f, q, -h)
        - _psi_curve(f, q, -2 * h)
    ) / (12.0 * h * h)
    fitted = stencil / 2.0
    if abs(fitted - lhs_t2) > 1e-6 * abs(lhs_t2):
        raise ArithmeticError(
            f"second-difference fit {fitted!r} disagrees with analytic {lhs_t2!r}"
        )
    return lhs_t2, rhs_t2


def measure_lambda1(grid: QuadratureGrid) -> float:
    """Smallest Rayleigh quotient of the holomorphic energy on mean-zero fields.

    Assembles stiffness and mass matrices over the full mean-zero harmonic
    basis by pointwise quadrature (not by the spectral shortcut, so this is
    an actual measurement of the discretization) and solves the generalized
    symmetric eigenproblem.
    """
    sub = grid.base
    L = grid.L
    npts = sub.ntheta * sub.nphi
    nbasis = (L + 1) ** 2 - 1
    V = np.zeros((npts, nbasis))
    Gt = np.zeros((npts, nbasis))
    Gp = np.zeros((npts, nbasis))
    inv_sin = 1.0 / sub.sintheta

    col = 0
    for m in range(L + 1):
        if m == 0:
            # zonal block, l = 1..L
            vals = sub.plm[0][1:] / np.sqrt(2.0 * np.pi)
            dvals = sub.dplm[0][1:] / np.sqrt(2.0 * np.pi)
            for i in range(vals.shape[0]):
                V[:, col] = np.repeat(vals[i], sub.nphi)
                Gt[:, col] = np.repeat(dvals[i], sub.nphi)
                col += 1
            continue
        cos_m = np.cos(m * sub.phi)
        sin_m = np.sin(m * sub.phi)
        vals = sub.plm[m] / np.sqrt(np.pi)
        dvals = sub.dplm[m] / np.sqrt(np.pi)
        for i in range(vals.shape[0]):
            V[:, col] = np.outer(vals[i], cos_m).ravel()
            Gt[:, col] = np.outer(dvals[i], cos_m).ravel()
            Gp[:, col] = np.outer(vals[i] * inv_sin, -m * sin_m).ravel()
            col += 1
            V[:, col] = np.outer(vals[i], sin_m).ravel()
            Gt[:, col] = np.outer(dvals[i], sin_m).ravel()
            Gp[:, col] = np.outer(vals[i] * inv_sin, m * cos_m).ravel()
            col += 1
    assert col == nbasis

    w = sub.area_weights.ravel()
    M = V.T @ (w[:, None] * V)
    K = 0.5 * (Gt.T @ (w[:, None] * Gt) + Gp.T @ (w[:, None] * Gp))
    eigs = scipy.linalg.eigh(K, M, eigvals_only=True)
    return float(eigs[0])


def random_band_limited(
    grid: QuadratureGrid, seed: int, lmax: int | None = None, decay: float = 2.0
) -> SphereField:
    """Gaussian coefficient draw with power-law decay; reproducible by seed."""
    rng = np.random.default_rng(seed)
    lmax = grid.L if lmax is None else min(lmax, grid.L)
    coeffs = np.zeros(grid.coeff_shape())
    for l in range(lmax + 1):
        amp = 1.0 / (1.0 + l) ** decay
        coeffs[0, l, : l + 1] = amp * rng.standard_normal(l + 1)
        if l >= 1:
            coeffs[1, l, 1 : l + 1] = amp * rng.standard_normal(l)
    return SphereField.from_coeffs(grid, coeffs)


def random_positive_field(
    grid: QuadratureGrid, seed: int, lmax: int | None = None, floor: float = 0.5
) -> SphereField:
    """Band-limited draw shifted to stay positive on the oversampled grid."""
    f = random_band_limited(grid, seed, lmax=lmax)
    low = float(np.min(f.values_over()))
    return f + SphereField.constant(grid, floor - min(low, 0.0))
