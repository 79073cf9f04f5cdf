"""Appell F2: double power series, Euler double integral, PDE residuals.

Three mutually independent routes to the same function are kept side by side
on purpose: the Pochhammer double series, the double-exponential evaluation of
the Euler integral, and the residual of the defining second-order system
checked with Cauchy-integral derivatives.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, SingularityError
from .quadrature import cauchy_derivs_2d, integrate_01_2d
from .special import SeriesControl, _is_nonpositive_integer, gamma_fn

__all__ = [
    "F2Params",
    "ModuliPoint",
    "QuadratureControl",
    "f2_series",
    "f2_series_on_arrays",
    "f2_euler_integral",
    "f2_pde_residual",
    "quadratic_criterion",
]


@dataclass(frozen=True)
class F2Params:
    alpha: complex
    beta1: complex
    beta2: complex
    gamma1: complex
    gamma2: complex

    def __post_init__(self):
        for g in (self.gamma1, self.gamma2):
            if _is_nonpositive_integer(g):
                raise DomainError("gamma1/gamma2 must not be non-positive integers")

    @property
    def conformal(self) -> bool:
        ref = (0.5, 0.5, 0.5, 1.0, 1.0)
        vals = (self.alpha, self.beta1, self.beta2, self.gamma1, self.gamma2)
        return all(abs(complex(v) - r) < 1e-12 for v, r in zip(vals, ref))

    @classmethod
    def conformal_case(cls) -> "F2Params":
        return cls(0.5, 0.5, 0.5, 1.0, 1.0)

    def swapped(self) -> "F2Params":
        return F2Params(self.alpha, self.beta2, self.beta1, self.gamma2, self.gamma1)


@dataclass(frozen=True)
class ModuliPoint:
    """Point (x, y) in the two-parameter base; x = z1, y = 1 - z2."""

    x: complex
    y: complex

    @property
    def series_norm(self) -> float:
        return abs(self.x) + abs(self.y)


@dataclass(frozen=True)
class QuadratureControl:
    level_max: int = 8
    target_tol: float = 1e-11

    def __post_init__(self):
        if not 1 <= self.level_max <= 14:
            raise ValueError("level_max must lie in 1..14")
        if self.target_tol <= 0:
            raise ValueError("target_tol must be positive")


def _estimate_terms(rho: float, ctrl: SeriesControl) -> int:
    if rho < 0.05:
        return 16
    n = int(np.ceil(np.log(ctrl.rel_tol * 1e-2) / np.log(rho))) + 16
    return max(16, min(n, ctrl.max_terms))


def f2_series_on_arrays(p: F2Params, x, y, c: SeriesControl | None = None):
    """Double Pochhammer series, vectorized over broadcastable x, y arrays.

    Rows of constant first index are summed with a cumulative-product
    recurrence; convergence requires |x| + |y| < 1 everywhere.
    """
    c = c or SeriesControl()
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    shape = np.broadcast_shapes(x.shape, y.shape)
    xf = np.broadcast_to(x, shape).ravel()
    yf = np.broadcast_to(y, shape).ravel()
    rho = float(np.max(np.abs(xf) + np.abs(yf))) if xf.size else 0.0
    if rho >= 1.0:
        raise DomainError(f"F2 series diverges: max(|x|+|y|) = {rho:.4f} >= 1")
    a, b1, b2, g1, g2 = (
        complex(p.alpha),
        complex(p.beta1),
        complex(p.beta2),
        complex(p.gamma1),
        complex(p.gamma2),
    )
    n_total = _estimate_terms(rho, c)
    total = np.zeros_like(xf)
    t0 = np.ones_like(xf)  # term at (m, 0)
    below = 0
    for m in range(n_total):
        length = max(8, n_total - m)
        n = np.arange(length - 1)
        coef = (a + m + n) * (b2 + n) / ((g2 + n) * (n + 1.0))
        cp = np.cumprod(coef[:, None] * yf[None, :], axis=0)
        total += t0 * (1.0 + cp.sum(axis=0))
        row_mag = max(np.max(np.abs(t0)), np.max(np.abs(t0[None, :] * cp)))
        if row_mag <= c.rel_tol * np.max(np.abs(total)) + c.abs_floor:
            below += 1
            if below >= 3:
                return total.reshape(shape)
        else:
            below = 0
        t0 = t0 * ((a + m) * (b1 + m) / ((g1 + m) * (m + 1.0))) * xf
    raise ConvergenceError("F2 series tail bound not met within max_terms")


def f2_series(p: F2Params, pt: ModuliPoint, c: SeriesControl | None = None) -> complex:
    """F2 at a single point via the double power series (|x|+|y| < 1)."""
    return complex(f2_series_on_arrays(p, pt.x, pt.y, c))


def _euler_prefactor(p: F2Params) -> complex:
    return (
        gamma_fn(p.gamma1)
        * gamma_fn(p.gamma2)
        / (
            gamma_fn(p.beta1)
            * gamma_fn(p.gamma1 - p.beta1)
            * gamma_fn(p.beta2)
            * gamma_fn(p.gamma2 - p.beta2)
        )
    )


def f2_euler_integral(
    p: F2Params, pt: ModuliPoint, q: QuadratureControl | None = None
) -> complex:
    """F2 via the Euler double integral over the unit square.

    Requires Re(gamma_i) > Re(beta_i) > 0 and the linear factor
    1 - x t2 - y t1 to be zero-free on the closed square.
    """
    q = q or QuadratureControl()
    for b, g in ((p.beta1, p.gamma1), (p.beta2, p.gamma2)):
        if not (complex(g).real > complex(b).real > 0):
            raise DomainError("Euler integral needs Re(gamma) > Re(beta) > 0")
    x, y = complex(pt.x), complex(pt.y)
    tt = np.linspace(0.0, 1.0, 201)
    lin = 1.0 - x * tt[None, :] - y * tt[:, None]
    if np.min(np.abs(lin)) < 1e-9:
        raise SingularityError("1 - x t2 - y t1 vanishes on the unit square")
    a, b1, b2, g1, g2 = p.alpha, p.beta1, p.beta2, p.gamma1, p.gamma2

    def integrand(t1, omt1, t2, omt2):
        return (
            t1 ** (b2 - 1.0)
            * omt1 ** (g2 - b2 - 1.0)
            * t2 ** (b1 - 1.0)
            * omt2 ** (g1 - b1 - 1.0)
            * (1.0 - x * t2 - y * t1) ** (-a)
        )

    val, _ = integrate_01_2d(
        integrand, target_tol=q.target_tol, level_max=q.level_max
    )
    return complex(_euler_prefactor(p) * val)


def default_pde_radii(pt: ModuliPoint, scale: float = 0.4):
    """Bi-circle radii keeping clear of the singular locus x,y in {0,1}, x+y=1."""
    x, y = complex(pt.x), complex(pt.y)
    margin = min(abs(x), abs(1 - x), abs(y), abs(1 - y), abs(1 - x - y))
    if margin <= 0:
        raise SingularityError("point lies on the singular locus")
    r = scale * margin
    return r, r


def f2_pde_residual(F, p: F2Params, pt: ModuliPoint, radius=None, n_nodes: int = 32):
    """Normalized residuals of the two defining PDEs at pt.

    F must be analytic on the bi-circle of the given radii (a pair, or one
    float used for both); derivatives are taken by Cauchy-integral
    differentiation, and each residual is divided by the largest term
    magnitude entering its equation.
    """
    x, y = complex(pt.x), complex(pt.y)
    if radius is None:
        rx, ry = default_pde_radii(pt)
    elif np.isscalar(radius):
        rx = ry = float(radius)
    else:
        rx, ry = radius
    d = cauchy_derivs_2d(F, x, y, rx, ry, n_nodes=n_nodes, max_order=2)
    f, fx, fy = d[0, 0], d[1, 0], d[0, 1]
    fxx, fyy, fxy = d[2, 0], d[0, 2], d[1, 1]
    a, b1, b2, g1, g2 = p.alpha, p.beta1, p.beta2, p.gamma1, p.gamma2
    terms1 = [
        x * (1 - x) * fxx,
        -x * y * fxy,
        (g1 - (a + b1 + 1) * x) * fx,
        -b1 * y * fy,
        -a * b1 * f,
    ]
    terms2 = [
        y * (1 - y) * fyy,
        -x * y * fxy,
        (g2 - (a + b2 + 1) * y) * fy,
        -b2 * x * fx,
        -a * b2 * f,
    ]
    s1 = max(max(abs(t) for t in terms1), 1e-300)
    s2 = max(max(abs(t) for t in terms2), 1e-300)
    return sum(terms1) / s1, sum(terms2) / s2


def quadratic_criterion(p: F2Params, tol: float = 1e-12) -> bool:
    """True iff alpha = beta1 + beta2 - 1/2, gamma1 = 2 beta1, gamma2 = 2 beta2."""
    a, b1, b2 = complex(p.alpha), complex(p.beta1), complex(p.beta2)
    g1, g2 = complex(p.gamma1), complex(p.gamma2)
    return (
        abs(a - (b1 + b2 - 0.5)) <= tol
        and abs(g1 - 2 * b1) <= tol
        and abs(g2 - 2 * b2) <= tol
    )
