"""The pseudo-Kahler family (g_f, I, omega_f) on the coordinate model H^2 x C.

Matrices are written in the coordinate frame (d/dx, d/dy, d/du, d/dv).  The intrinsic
metric is built from tangent data and serves as an independent check on the matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .jspace import J0
from .quartic import ModuliPoint, norm_sq_U
from .tangent import (
    ModuliTangent,
    coordinate_basis,
    complex_structure,
    inner_jdot,
    inner_u0,
    inner_utr,
)

SIGNATURE_TOL = 1e-12
FD_STEP = 1e-4


@dataclass(frozen=True)
class DeformationFunction:
    """f with f(0) = 0 and f' < 0 on [0, inf)."""

    name: str
    value: Callable[[float], float]
    derivative: Callable[[float], float]
    params: tuple = field(default=())

    def __call__(self, t):
        return self.value(t)

    def check(self, ts=None, h: float = 1e-5) -> float:
        """Raise ValueError if the contract fails at the sample points; return the worst derivative defect."""
        ts = np.linspace(0.0, 50.0, 41) if ts is None else np.asarray(ts, dtype=float)
        if abs(self.value(0.0)) > 1e-14:
            raise ValueError(f"{self.name}: f(0) = {self.value(0.0)!r}, expected 0")
        worst = 0.0
        for t in ts:
            d = self.derivative(t)
            if not d < 0:
                raise ValueError(f"{self.name}: f'({t}) = {d!r} is not negative")
            if t >= h:
                fd = (self.value(t + h) - self.value(t - h)) / (2 * h)
                worst = max(worst, abs(fd - d))
        if worst > 1e-6:
            raise ValueError(f"{self.name}: derivative inconsistent with value (defect {worst:.3e})")
        return worst


def linear(slope: float = 1.0) -> DeformationFunction:
    if not slope > 0:
        raise ValueError("slope must be positive")
    return DeformationFunction("linear", lambda t: -slope * t, lambda t: -slope + 0.0 * t, (slope,))


def sqrt(scale: float = 1.0) -> DeformationFunction:
    if not scale > 0:
        raise ValueError("scale must be positive")
    return DeformationFunction(
        "sqrt",
        lambda t: 1.0 - np.sqrt(1.0 + scale * t),
        lambda t: -0.5 * scale / np.sqrt(1.0 + scale * t),
        (scale,),
    )


REGISTRY: dict[str, Callable[..., DeformationFunction]] = {"linear": linear, "sqrt": sqrt}


def deformation(name: str, *params: float) -> DeformationFunction:
    try:
        factory = REGISTRY[name]
    except KeyError:
        raise ValueError(f"unknown deformation function {name!r}; choose from {sorted(REGISTRY)}") from None
    f = factory(*params)
    f.check()
    return f


def _coeffs(p: ModuliPoint, f: DeformationFunction):
    y = p.y
    s = p.fiber_norm_sq()
    fv, fp = f.value(s), f.derivative(s)
    a = (1.0 - fv + 4.0 * s * fp) / y**2
    c = 2.0 * fp * y**3
    d = fp * y**4
    return a, c, d, fv, fp


def metric_matrix(p: ModuliPoint, f: DeformationFunction) -> np.ndarray:
    a, c, d, _, _ = _coeffs(p, f)
    u, v = p.u, p.v
    return np.array(
        [
            [a, 0.0, c * v, -c * u],
            [0.0, a, c * u, c * v],
            [c * v, c * u, d, 0.0],
            [-c * u, c * v, 0.0, d],
        ]
    )


def _wedge(i: int, j: int) -> np.ndarray:
    m = np.zeros((4, 4))
    m[i, j], m[j, i] = 1.0, -1.0
    return m


X, Y, U, V = range(4)


def symplectic_matrix(p: ModuliPoint, f: DeformationFunction) -> np.ndarray:
    """omega_f as an antisymmetric matrix, assembled term by term from its wedge expansion."""
    y, u, v = p.y, p.u, p.v
    s = p.fiber_norm_sq()
    fv, fp = f.value(s), f.derivative(s)
    return (
        (-1.0 + fv - 4.0 * fp * s) / y**2 * _wedge(X, Y)
        - fp * y**4 * _wedge(U, V)
        - 2.0 * y**3 * fp * (u * (_wedge(X, U) + _wedge(Y, V)) + v * (_wedge(U, Y) - _wedge(V, X)))
    )


def complex_structure_matrix(p: ModuliPoint | None = None) -> np.ndarray:
    out = np.zeros((4, 4))
    out[:2, :2] = J0
    out[2:, 2:] = J0
    return out


def det_closed_form(p: ModuliPoint, f: DeformationFunction) -> float:
    s = p.fiber_norm_sq()
    return p.y**4 * f.derivative(s) ** 2 * (1.0 - f.value(s)) ** 2


def signature(G: np.ndarray, tol: float = SIGNATURE_TOL) -> tuple[int, int]:
    ev = np.linalg.eigvalsh(0.5 * (G + G.T))
    return int(np.sum(ev > tol)), int(np.sum(ev < -tol))


def intrinsic_metric(a: ModuliTangent, b: ModuliTangent, f: DeformationFunction) -> float:
    """(1 - f(s)) <Jdot, Jdot'> + f'(s)/2 (<Udot_0, Udot_0'> - <Udot_tr, Udot_tr'>), s = |U|^2 / 2."""
    s = 0.5 * norm_sq_U(a.base)
    return (1.0 - f.value(s)) * inner_jdot(a, b) + 0.5 * f.derivative(s) * (inner_u0(a, b) - inner_utr(a, b))


def intrinsic_omega(a: ModuliTangent, b: ModuliTangent, f: DeformationFunction) -> float:
    return intrinsic_metric(a, complex_structure(b), f)


def intrinsic_metric_matrix(p: ModuliPoint, f: DeformationFunction) -> np.ndarray:
    basis = coordinate_basis(p)
    return np.array([[intrinsic_metric(a, b, f) for b in basis] for a in basis])


def exterior_derivative(omega: Callable[[np.ndarray], np.ndarray], q, h: float = FD_STEP) -> np.ndarray:
    """Central-difference d(omega) at q; returns the coefficients of dx^i^dx^j^dx^k for i<j<k."""
    if not h > 0:
        raise ValueError("finite-difference step must be positive")
    q = np.asarray(q, dtype=float)
    dO = []
    for i in range(4):
        e = np.zeros(4)
        e[i] = h
        dO.append((omega(q + e) - omega(q - e)) / (2 * h))
    triples = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
    return np.array([dO[i][j, k] - dO[j][i, k] + dO[k][i, j] for i, j, k in triples])


def exterior_derivative_residual(p: ModuliPoint, f: DeformationFunction, h: float = FD_STEP, omega=None) -> float:
    if not h > 0:
        raise ValueError("finite-difference step must be positive")
    if p.y <= h:
        raise ValueError("point is within one step of the boundary y = 0")
    if omega is None:
        def omega(q):
            return symplectic_matrix(ModuliPoint.from_array(q), f)
    return float(np.max(np.abs(exterior_derivative(omega, p.as_array(), h))))
