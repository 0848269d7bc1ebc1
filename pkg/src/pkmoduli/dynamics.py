"""Hamiltonian circle and SL(2, R) actions, the integrable pair (H1, H2), and their flows.

Convention: the Hamiltonian vector field of H satisfies omega(X_H, Y) = dH(Y), i.e.
Omega^T X_H = grad H in coordinates (x, y, u, v).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import FlowError
from .jspace import J0, check_sl2, mobius, sl2_inverse, uhp_to_J
from .kahler import DeformationFunction, symplectic_matrix
from .quartic import ModuliPoint, UTensor, sl2_act_point

XI1 = J0.copy()
XI2 = np.diag([1.0, -1.0])
XI3 = np.array([[0.0, 1.0], [1.0, 0.0]])

W_EXPONENT = -4
FLOW_EXPONENT_NOTE = (
    "xi_2 flow: integrating the generator 2(x d/dx + y d/dy) - 4(u d/du + v d/dv) gives "
    "(e^{2t} z, e^{-4t} w), matching diag(e^t, e^-t).(z, w) = (e^{2t} z, e^{-4t} w); "
    "the closed form (e^{2t} z, e^{-3t} w) is inconsistent with this generator and is not used"
)


@dataclass(frozen=True, eq=False)
class LieAlgebraElement:
    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=float)
        if m.shape != (2, 2) or abs(np.trace(m)) > 1e-12 * max(1.0, float(np.max(np.abs(m)))):
            raise ValueError("sl(2, R) elements are trace-free 2x2 matrices")
        object.__setattr__(self, "m", m)

    @classmethod
    def from_basis(cls, c1: float, c2: float, c3: float) -> "LieAlgebraElement":
        return cls(c1 * XI1 + c2 * XI2 + c3 * XI3)


def _mat(X) -> np.ndarray:
    return X.m if isinstance(X, LieAlgebraElement) else LieAlgebraElement(X).m


# ---- circle action ---------------------------------------------------------


def circle_act_point(theta: float, p: ModuliPoint) -> ModuliPoint:
    return ModuliPoint(p.z, np.exp(1j * theta) * p.w)


def circle_act_U(theta: float, U: UTensor) -> UTensor:
    """(J, cos(theta) U - sin(theta) U J)."""
    c, s = np.cos(theta), np.sin(theta)
    return UTensor(U.base, U.frame, c * U.u1 - s * U.u1 @ J0, c * U.u2 - s * U.u2 @ J0)


def circle_generator_U(U: UTensor) -> UTensor:
    """d/dtheta at theta = 0 of the circle orbit: the U-part -U J (the J-part is 0)."""
    return UTensor(U.base, U.frame, -U.u1 @ J0, -U.u2 @ J0)


def circle_pushforward(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    R = np.eye(4)
    R[2:, 2:] = [[c, -s], [s, c]]
    return R


def circle_invariance_residual(theta: float, p: ModuliPoint, f: DeformationFunction, form) -> float:
    """max |R^T M(Psi p) R - M(p)| for a coordinate matrix field ``form(p, f)``."""
    R = circle_pushforward(theta)
    return float(np.max(np.abs(R.T @ form(circle_act_point(theta, p), f) @ R - form(p, f))))


# ---- Hamiltonians and moment map -------------------------------------------


def hamiltonian_h1(p: ModuliPoint, f: DeformationFunction) -> float:
    return 0.5 * float(f.value(p.fiber_norm_sq()))


def hamiltonian_h2(p: ModuliPoint, f: DeformationFunction) -> float:
    return 2.0 * p.x / p.y * (1.0 - float(f.value(p.fiber_norm_sq())))


def _ds(p: ModuliPoint) -> np.ndarray:
    y, u, v = p.y, p.u, p.v
    return np.array([0.0, 4 * y**3 * (u * u + v * v), 2 * y**4 * u, 2 * y**4 * v])


def grad_h1(p: ModuliPoint, f: DeformationFunction) -> np.ndarray:
    return 0.5 * f.derivative(p.fiber_norm_sq()) * _ds(p)


def grad_h2(p: ModuliPoint, f: DeformationFunction) -> np.ndarray:
    x, y = p.x, p.y
    s = p.fiber_norm_sq()
    one_f, fp = 1.0 - f.value(s), f.derivative(s)
    g = -2.0 * x / y * fp * _ds(p)
    g[0] += 2.0 / y * one_f
    g[1] += -2.0 * x / y**2 * one_f
    return g


def fd_gradient(H: Callable[[ModuliPoint], float], p: ModuliPoint, h: float = 1e-6) -> np.ndarray:
    q = p.as_array()
    out = np.zeros(4)
    for i in range(4):
        e = np.zeros(4)
        e[i] = h
        out[i] = (H(ModuliPoint.from_array(q + e)) - H(ModuliPoint.from_array(q - e))) / (2 * h)
    return out


def moment_map_sl2(X, p: ModuliPoint, f: DeformationFunction) -> float:
    """mu^X(z, w) = (1 - f(|w|_z^2)) tr(j(z) X)."""
    return (1.0 - float(f.value(p.fiber_norm_sq()))) * float(np.trace(uhp_to_J(p.z).m @ _mat(X)))


def moment_equivariance_residual(A, X, p: ModuliPoint, f: DeformationFunction) -> float:
    """|mu_{A.p}(X) - mu_p(A^-1 X A)|."""
    A = check_sl2(A)
    Xm = _mat(X)
    return abs(moment_map_sl2(Xm, sl2_act_point(A, p), f) - moment_map_sl2(sl2_inverse(A) @ Xm @ A, p, f))


def fundamental_field(X, p: ModuliPoint) -> np.ndarray:
    """V_X(p) = d/dt exp(tX).p at t = 0, in (x, y, u, v) components."""
    (a, b), (c, _) = _mat(X)
    z, w = p.z, p.w
    zd = b + 2 * a * z - c * z * z
    wd = 4 * (c * z - a) * w
    return np.array([zd.real, zd.imag, wd.real, wd.imag])


# ---- Hamiltonian vector fields ----------------------------------------------


def hamiltonian_vector_field(H, p: ModuliPoint, f: DeformationFunction, omega=None) -> np.ndarray:
    """Solve Omega^T X = grad H.

    ``H`` is either a gradient callable ``(p, f) -> 4-vector`` or, when it returns a scalar,
    a Hamiltonian whose gradient is taken by central differences.
    """
    Om = symplectic_matrix(p, f) if omega is None else omega(p, f)
    grad = np.asarray(H(p, f), dtype=float)
    if grad.shape == ():
        grad = fd_gradient(lambda q: H(q, f), p)
    if abs(np.linalg.det(Om)) < 1e-300:
        raise np.linalg.LinAlgError("symplectic matrix is singular")
    return np.linalg.solve(Om.T, grad)


def xh1_closed(p: ModuliPoint) -> np.ndarray:
    """u d/dv - v d/du."""
    return np.array([0.0, 0.0, -p.v, p.u])


def xh2_closed(p: ModuliPoint) -> np.ndarray:
    """2(x d/dx + y d/dy) - 4(u d/du + v d/dv)."""
    return np.array([2 * p.x, 2 * p.y, -4 * p.u, -4 * p.v])


FIELDS = {"H1": grad_h1, "H2": grad_h2}


# ---- flows -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    points: list
    h1: np.ndarray
    h2: np.ndarray

    def __post_init__(self):
        if len(self.times) > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("trajectory times must increase strictly")
        if any(q.y <= 0 for q in self.points):
            raise ValueError("trajectory left the upper half-plane")

    def as_array(self) -> np.ndarray:
        """Rows t, x, y, u, v, H1, H2."""
        pts = np.array([q.as_array() for q in self.points])
        return np.column_stack([self.times, pts, self.h1, self.h2])

    @property
    def end(self) -> ModuliPoint:
        return self.points[-1]


def _field(which: str, f: DeformationFunction, omega=None):
    try:
        grad = FIELDS[which]
    except KeyError:
        raise ValueError(f"unknown Hamiltonian {which!r}; choose H1 or H2") from None

    def F(q: np.ndarray) -> np.ndarray:
        if not (np.all(np.isfinite(q)) and q[1] > 0):
            raise FlowError(f"integration left the domain at {q}")
        return hamiltonian_vector_field(grad, ModuliPoint.from_array(q), f, omega)

    return F


def _rk4(F, q, dt):
    k1 = F(q)
    k2 = F(q + 0.5 * dt * k1)
    k3 = F(q + 0.5 * dt * k2)
    k4 = F(q + dt * k3)
    return q + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def _midpoint(F, q, dt, tol=1e-14, max_iter=50):
    nxt = q + dt * F(q)
    for _ in range(max_iter):
        new = q + dt * F(0.5 * (q + nxt))
        if np.max(np.abs(new - nxt)) <= tol * max(1.0, float(np.max(np.abs(new)))):
            return new
        nxt = new
    raise FlowError("implicit midpoint iteration did not converge")


STEPPERS = {"rk4": _rk4, "midpoint": _midpoint}


def flow(
    which: str,
    start: ModuliPoint,
    t_end: float,
    steps: int,
    f: DeformationFunction,
    method: str = "rk4",
    omega=None,
) -> Trajectory:
    """Integrate the Hamiltonian field of H1 or H2 with a fixed step."""
    if int(steps) != steps or steps < 1:
        raise ValueError("steps must be a positive integer")
    if not (np.isfinite(t_end) and t_end > 0):
        raise ValueError("t_end must be positive and finite")
    if method not in STEPPERS:
        raise ValueError(f"unknown method {method!r}")
    F = _field(which, f, omega)
    step = STEPPERS[method]
    dt = t_end / steps
    q = start.as_array()
    states = [q]
    for _ in range(int(steps)):
        try:
            with np.errstate(over="raise", invalid="raise"):
                q = step(F, q, dt)
        except (OverflowError, FloatingPointError, np.linalg.LinAlgError) as exc:
            raise FlowError(f"integration broke down near {states[-1]}: {exc}") from None
        if not (np.all(np.isfinite(q)) and q[1] > 0):
            raise FlowError(f"integration left the domain at {q}")
        states.append(q)
    points = [ModuliPoint.from_array(s) for s in states]
    return Trajectory(
        np.linspace(0.0, t_end, int(steps) + 1),
        points,
        np.array([hamiltonian_h1(p, f) for p in points]),
        np.array([hamiltonian_h2(p, f) for p in points]),
    )


def closed_form_flow(which: str, p: ModuliPoint, t: float) -> ModuliPoint:
    if which == "H1":
        return circle_act_point(t, p)
    if which == "H2":
        A = np.diag([np.exp(t), np.exp(-t)])
        return ModuliPoint(mobius(A, p.z), np.exp(W_EXPONENT * t) * p.w)
    raise ValueError(f"unknown Hamiltonian {which!r}; choose H1 or H2")


# ---- fibration -------------------------------------------------------------


@dataclass(frozen=True)
class FibrationValue:
    h1: float
    h2: float


def fibration(p: ModuliPoint, f: DeformationFunction) -> FibrationValue:
    if p.w == 0:
        raise ValueError("the fibration is defined for w != 0 only")
    return FibrationValue(hamiltonian_h1(p, f), hamiltonian_h2(p, f))


def fiber_probe(p: ModuliPoint, f: DeformationFunction) -> dict:
    """Local checks that the level set of (H1, H2) through p is Lagrangian."""
    fibration(p, f)
    Om = symplectic_matrix(p, f)
    X1 = hamiltonian_vector_field(grad_h1, p, f)
    X2 = hamiltonian_vector_field(grad_h2, p, f)
    grads = [grad_h1(p, f), grad_h2(p, f)]
    tangency = max(abs(float(g @ X)) for g in grads for X in (X1, X2))
    sv = np.linalg.svd(np.column_stack([X1, X2]), compute_uv=False)
    return {
        "tangency": tangency,
        "omega_on_fiber": abs(float(X1 @ Om @ X2)),
        "rank": int(np.sum(sv > 1e-10 * sv[0])),
        "min_singular_value": float(sv[-1]),
    }
