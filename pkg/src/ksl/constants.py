"""Closed-form constants for the Kahler Sobolev inequality family.

Everything here is a pure function of a :class:`Dimensions` record (complex
dimension ``n``, exponent ``q``) plus the occasional free parameter ``k``,
``x`` or ``lambda1``. All arithmetic runs through mpmath at 50 significant
digits and is rounded to a Python float on the way out; the nested radicals
lose digits near the degenerate exponent otherwise.

Conventions. ``n`` is the complex dimension, ``m = 2n`` the real one. The
admissible exponent range is ``1 < q <= (n+1)/(n-1)`` for ``n >= 2`` (the
equality case is a degenerate boundary that keeps every radicand at exactly
zero) and ``q > 1`` unrestricted for ``n = 1``. ``lambda1`` is a spectral
lower-bound parameter, at least 1 in this normalization.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp

from .errors import DomainError

# Boundary detection tolerance for q against (n+1)/(n-1).
_BOUNDARY_RTOL = 1e-12


@dataclass(frozen=True)
class Dimensions:
    """Complex dimension and exponent, validated at construction."""

    n: int
    q: float

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise DomainError(f"complex dimension must be an integer >= 1, got n = {self.n}")
        if not self.q > 1:
            raise DomainError(f"exponent must satisfy q > 1, got q = {self.q}")
        if self.n >= 2:
            qmax = (self.n + 1) / (self.n - 1)
            if self.q > qmax * (1 + _BOUNDARY_RTOL):
                raise DomainError(
                    f"exponent must satisfy q <= (n+1)/(n-1) = {qmax} for n = {self.n}, "
                    f"got q = {self.q}"
                )

    @property
    def m(self) -> int:
        """Real dimension."""
        return 2 * self.n

    @property
    def boundary(self) -> bool:
        """True when q sits at the degenerate endpoint (n+1)/(n-1)."""
        if self.n == 1:
            return False
        qmax = (self.n + 1) / (self.n - 1)
        return abs(self.q - qmax) <= qmax * _BOUNDARY_RTOL


@dataclass(frozen=True)
class KInterval:
    """Closed feasible range for the interpolation weight k."""

    k_lo: float
    k_hi: float


@dataclass(frozen=True)
class ConstantsReport:
    """Summary record of the headline constants at one (n, q)."""

    c_s: float
    c_riem_bridged: float
    c_conj: float
    lambda1_lower: float


def _require_n2(dims: Dimensions, op: str) -> None:
    if dims.n < 2:
        raise DomainError(f"{op} requires n >= 2")


def _mpq(dims: Dimensions):
    return mp.mpf(dims.n), mp.mpf(dims.q)


def _clamp_tiny(value, scale=mp.mpf(1)):
    # Radicands and differences that vanish identically at the boundary
    # come out as O(10^-49) residue at 50 digits; snap them to zero.
    if abs(value) < abs(scale) * mp.mpf("1e-40"):
        return mp.mpf(0)
    return value


def _boundary_zero(dims: Dimensions, value, scale=mp.mpf(1)):
    # A float q at the critical exponent can sit half an ulp above the real
    # boundary; Dimensions accepts that window, so a small negative residue
    # here is quantization noise, not a sign.
    value = _clamp_tiny(value, scale)
    if value < 0 and dims.boundary:
        return mp.mpf(0)
    return value


def cs_bm(dims: Dimensions) -> float:
    """Sharp-form Sobolev constant for the unit-normalized Ricci bound.

    Evaluates (q-1)(2n+q+2-2*sqrt((n+1)(n+1-(n-1)q)))/(2qn). At n = 1 the
    radicand is the perfect square (n+1)^2 and the value collapses to
    (q-1)/2 exactly.
    """
    with mp.workdps(50):
        n, q = _mpq(dims)
        rad = _boundary_zero(dims, (n + 1) * (n + 1 - (n - 1) * q), (n + 1) ** 2)
        if rad < 0:
            raise DomainError(
                f"radicand negative: requires q <= (n+1)/(n-1), got n = {dims.n}, q = {dims.q}"
            )
        val = (q - 1) * (2 * n + q + 2 - 2 * mp.sqrt(rad)) / (2 * q * n)
        return float(val)


def riemannian_constants(dims: Dimensions) -> tuple[float, float]:
    """Riemannian comparison constants (raw, bridged) in real dimension m = 2n.

    raw = (q-1)/m holds under the Ric >= (m-1)g normalization; rescaling the
    metric by (m-1) converts that hypothesis to Ric >= g and multiplies the
    gradient-term constant by (m-1), giving bridged = (q-1)(m-1)/m.
    """
    m = dims.m
    if m > 2:
        qmax = (m + 2) / (m - 2)
        if dims.q > qmax * (1 + _BOUNDARY_RTOL):
            raise DomainError(
                f"exponent must satisfy q <= (m+2)/(m-2) = {qmax} for m = {m}, got q = {dims.q}"
            )
    with mp.workdps(50):
        q = mp.mpf(dims.q)
        raw = (q - 1) / m
        bridged = (q - 1) * (m - 1) / m
        return float(raw), float(bridged)


def _k_endpoints_mp(dims: Dimensions):
    # Endpoints s -+ s*sqrt(1-(n-1)q/(n+1)) - 1 with s = 2(n+1)/(q(n-1)).
    n, q = _mpq(dims)
    s = 2 * (n + 1) / (q * (n - 1))
    rad = _boundary_zero(dims, 1 - (n - 1) * q / (n + 1))
    if rad < 0:
        raise DomainError(
            f"radicand negative: requires q <= (n+1)/(n-1), got n = {dims.n}, q = {dims.q}"
        )
    root = mp.sqrt(rad)
    return s - s * root - 1, s + s * root - 1


def k_interval(dims: Dimensions) -> KInterval:
    """Feasible closed interval for k; endpoints multiply to exactly 1.

    The endpoints are the two roots of k^2 + (2 - 4(n+1)/((n-1)q))k + 1,
    which is why their product is 1. Degenerates to a single point at the
    boundary exponent.
    """
    if dims.n == 1:
        raise DomainError("interval unbounded at n = 1; use limit semantics")
    with mp.workdps(50):
        lo, hi = _k_endpoints_mp(dims)
        return KInterval(float(lo), float(hi))


def lambda1_coefficient(dims: Dimensions, k: float) -> float:
    """Weight multiplying lambda1 in the generalized threshold.

    1 - (n+(n-1)k)(kn+n-1)q / ((4n^2+4n+q)k). Nonnegative exactly on the
    feasible k interval, zero at both endpoints.
    """
    if not k > 0:
        raise DomainError(f"k must be positive, got k = {k}")
    with mp.workdps(50):
        n, q = _mpq(dims)
        kk = mp.mpf(k)
        val = 1 - (n + (n - 1) * kk) * (kk * n + n - 1) * q / ((4 * n**2 + 4 * n + q) * kk)
        return float(val)


def _f_of_k_mp(dims: Dimensions, kk, lam1):
    n, q = _mpq(dims)
    coef = 1 - (n + (n - 1) * kk) * (kk * n + n - 1) * q / ((4 * n**2 + 4 * n + q) * kk)
    return (coef * lam1 + q * n * (kk * n + n - 1) / ((4 * n**2 + 4 * n + q) * kk)) / (q - 1)


def _require_k_feasible(dims: Dimensions, k: float) -> None:
    iv = k_interval(dims)
    tol = 1e-9 * max(1.0, iv.k_hi)
    if not (iv.k_lo - tol <= k <= iv.k_hi + tol):
        raise DomainError(
            f"k = {k} outside feasible interval [{iv.k_lo}, {iv.k_hi}] for "
            f"n = {dims.n}, q = {dims.q}"
        )


def f_of_k(dims: Dimensions, k: float, lambda1: float) -> float:
    """Threshold objective F(k); reciprocal of twice the generalized constant."""
    _require_k_feasible(dims, k)
    with mp.workdps(50):
        return float(_f_of_k_mp(dims, mp.mpf(k), mp.mpf(lambda1)))


def cs_general(dims: Dimensions, k: float, lambda1: float) -> float:
    """Generalized Sobolev constant 1/(2 F(k)).

    At k equal to the lower interval endpoint the lambda1 weight vanishes and
    the value reduces to cs_bm regardless of lambda1.
    """
    if lambda1 < 1:
        raise DomainError(f"lambda1 must be >= 1, got {lambda1}")
    _require_k_feasible(dims, k)
    with mp.workdps(50):
        return float(1 / (2 * _f_of_k_mp(dims, mp.mpf(k), mp.mpf(lambda1))))


def optimize_k(dims: Dimensions, lambda1: float) -> tuple[float, float]:
    """Maximize F(k) over the feasible interval.

    Grid scan (10^4 points including both endpoints) followed by a
    golden-section polish of the best bracket; the objective can fail
    concavity for large lambda1, so the grid pass is not optional.
    Ties within 1e-9 of the maximum resolve to the smallest k.
    Returns (k_star, lambda_threshold) with lambda_threshold = F(k_star).
    """
    if dims.n == 1:
        raise DomainError("interval unbounded at n = 1; use limit semantics")
    if lambda1 < 1:
        raise DomainError(f"lambda1 must be >= 1, got {lambda1}")
    with mp.workdps(50):
        lo, hi = _k_endpoints_mp(dims)
        lam1 = mp.mpf(lambda1)

        def F(kk):
            return _f_of_k_mp(dims, kk, lam1)

        if hi - lo < mp.mpf("1e-30"):
            mid = (lo + hi) / 2
            return float(mid), float(F(mid))

        npts = 10_000
        step = (hi - lo) / (npts - 1)
        ks = [lo + i * step for i in range(npts)]
        vals = [F(kk) for kk in ks]
        imax = max(range(npts), key=lambda i: vals[i])

        a = ks[max(imax - 1, 0)]
        b = ks[min(imax + 1, npts - 1)]
        invphi = (mp.sqrt(5) - 1) / 2
        c = b - invphi * (b - a)
        d = a + invphi * (b - a)
        fc, fd = F(c), F(d)
        for _ in range(200):
            if fc > fd:
                b, d, fd = d, c, fc
                c = b - invphi * (b - a)
                fc = F(c)
            else:
                a, c, fc = c, d, fd
                d = a + invphi * (b - a)
                fd = F(d)
            if b - a < mp.mpf("1e-30"):
                break
        polished = (a + b) / 2

        candidates = [lo, hi, polished]
        best_val = max(F(kk) for kk in candidates)
        tie = mp.mpf("1e-9")
        k_star = min(kk for kk in candidates if F(kk) >= best_val - tie)
        return float(k_star), float(F(k_star))


def epsilon_max(dims: Dimensions) -> float:
    """Largest slack parameter keeping the quadratic discriminant nonnegative.

    (4n(n+1) - 2q(n-1) - 2(n-1)*sqrt(q^2+4qn(n+1))) / (n(n-1)q); zero at the
    boundary exponent where the radicand is a perfect square.
    """
    _require_n2(dims, "epsilon_max")
    with mp.workdps(50):
        n, q = _mpq(dims)
        num = 4 * n * (n + 1) - 2 * q * (n - 1) - 2 * (n - 1) * mp.sqrt(q**2 + 4 * q * n * (n + 1))
        val = _boundary_zero(dims, num, n * n) / (n * (n - 1) * q)
        return float(val)


def k_lower_bound_eps0(dims: Dimensions) -> float:
    """Lower k bound at zero slack; agrees with k_interval(...).k_lo.

    (2n^2+2n - q(n^2-n) - 2*sqrt((n^2+n)^2 - (n^2-n)q(n^2+n))) / (n(n-1)q).
    The radicand is n^2 times the one in cs_bm, so the two derivations of the
    bound coincide identically.
    """
    _require_n2(dims, "k_lower_bound_eps0")
    with mp.workdps(50):
        n, q = _mpq(dims)
        rad = _boundary_zero(dims, (n**2 + n) ** 2 - (n**2 - n) * q * (n**2 + n), (n**2 + n) ** 2)
        if rad < 0:
            raise DomainError(
                f"radicand negative: requires q <= (n+1)/(n-1), got n = {dims.n}, q = {dims.q}"
            )
        val = (2 * n**2 + 2 * n - q * (n**2 - n) - 2 * mp.sqrt(rad)) / (n * (n - 1) * q)
        return float(val)


def base_threshold(dims: Dimensions) -> float:
    """Rigidity threshold from the zero-slack chain: 1/((q-1)(1+((n-1)/n)k_lo)).

    Identical to 1/(2 cs_bm) although the two closed forms look nothing
    alike; the acceptance tests pin that agreement.
    """
    _require_n2(dims, "base_threshold")
    with mp.workdps(50):
        n, q = _mpq(dims)
        rad = _boundary_zero(dims, (n**2 + n) ** 2 - (n**2 - n) * q * (n**2 + n), (n**2 + n) ** 2)
        k_lo = (2 * n**2 + 2 * n - q * (n**2 - n) - 2 * mp.sqrt(rad)) / (n * (n - 1) * q)
        val = 1 / ((q - 1) * (1 + (n - 1) / n * k_lo))
        return float(val)


def x_bounds(dims: Dimensions, k: float) -> tuple[float, float]:
    """Feasible range for the auxiliary ratio x at a given k.

    x_lo = (kn+n-k)q/(2(n+1)) comes from the sign condition on the linear
    coefficient, x_hi = (4n^2+4n+q)k/(2(n+1)(kn+n-1)) from the discriminant;
    x_lo <= x_hi exactly when k lies in the feasible interval.
    """
    _require_n2(dims, "x_bounds")
    if not k > 0:
        raise DomainError(f"k must be positive, got k = {k}")
    with mp.workdps(50):
        n, q = _mpq(dims)
        kk = mp.mpf(k)
        denom = kk * n + n - 1
        if denom <= 0:
            raise DomainError(f"kn + n - 1 must be positive, got {float(denom)}")
        x_lo = (kk * n + n - kk) * q / (2 * (n + 1))
        x_hi = (4 * n**2 + 4 * n + q) * kk / (2 * (n + 1) * denom)
        return float(x_lo), float(x_hi)


def spectral_lambda_bound(dims: Dimensions, k: float, x: float, lambda1: float) -> float:
    """Lower bound on lambda forced by a nonconstant solution, as a function of x.

    lambda1/(q-1) + (1 - lambda1(1+(n-1)k/n)) * qn/(2(q-1)(n+1)x). The second
    term is nonpositive for lambda1 >= 1 and feasible k, so the bound is
    maximized at x = x_hi, where it equals f_of_k.
    """
    x_lo, x_hi = x_bounds(dims, k)
    tol = 1e-9 * max(1.0, abs(x_hi))
    if not (x_lo - tol <= x <= x_hi + tol):
        raise DomainError(
            f"x = {x} outside feasible range [{x_lo}, {x_hi}] for k = {k}, "
            f"n = {dims.n}, q = {dims.q}"
        )
    with mp.workdps(50):
        n, q = _mpq(dims)
        kk, xx, lam1 = mp.mpf(k), mp.mpf(x), mp.mpf(lambda1)
        val = lam1 / (q - 1) + (1 - lam1 * (1 + (n - 1) * kk / n)) * q * n / (
            2 * (q - 1) * (n + 1) * xx
        )
        return float(val)


def constants_report(dims: Dimensions) -> ConstantsReport:
    """Headline constants at one (n, q): sharp, bridged Riemannian, conjectured."""
    c_s = cs_bm(dims)
    _, bridged = riemannian_constants(dims)
    with mp.workdps(50):
        c_conj = float((mp.mpf(dims.q) - 1) / 2)
        lam_lower = float((mp.mpf(dims.q) - 1) / (2 * mp.mpf(c_s)))
    return ConstantsReport(
        c_s=c_s,
        c_riem_bridged=bridged,
        c_conj=c_conj,
        lambda1_lower=lam_lower,
    )
