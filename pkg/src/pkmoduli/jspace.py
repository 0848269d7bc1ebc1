"""Linear complex structures on R^2 compatible with the area form.

The space of such structures is a copy of the hyperbolic plane. ``uhp_to_J``
is the SL(2, R)-equivariant Kahler isometry sending ``i`` to the standard
structure ``J0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BaseMismatchError, NonUnimodularError

J0 = np.array([[0.0, -1.0], [1.0, 0.0]])
# rho0(v, w) = v^T RHO0 w = det[v | w]
RHO0 = np.array([[0.0, 1.0], [-1.0, 0.0]])

BASE_TOL = 1e-12
STRUCTURE_TOL = 1e-10
UNIMODULAR_TOL = 1e-10


def rho0(v, w) -> float:
    return float(v[0] * w[1] - v[1] * w[0])


def _scale(m: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(m))))


@dataclass(frozen=True, eq=False)
class LinearComplexStructure:
    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=float)
        if m.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
        defect = np.max(np.abs(m @ m + np.eye(2)))
        if defect > STRUCTURE_TOL * _scale(m) ** 2:
            raise ValueError(f"J^2 != -1 (defect {defect:.3e})")
        # orientation test vector e1: rho0(e1, J e1) = J[1, 0]
        if m[1, 0] <= 0:
            raise ValueError("J is not compatible with the orientation of rho0")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    def same_as(self, other: "LinearComplexStructure") -> bool:
        if self is other:
            return True
        return bool(np.max(np.abs(self.m - other.m)) <= BASE_TOL * _scale(self.m))

    def gram(self) -> np.ndarray:
        """Gram matrix of g_J = rho0(., J .) in the standard basis."""
        return RHO0 @ self.m

    def frame(self) -> np.ndarray:
        """Deterministic g_J-orthonormal frame (columns e1, J e1), e1 along the x-axis."""
        e1 = np.array([1.0, 0.0]) / np.sqrt(self.m[1, 0])
        return np.column_stack([e1, self.m @ e1])


@dataclass(frozen=True, eq=False)
class TangentAtJ:
    base: LinearComplexStructure
    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=float)
        J = self.base.m
        defect = np.max(np.abs(J @ m + m @ J))
        if defect > STRUCTURE_TOL * _scale(J) * _scale(m):
            raise ValueError(f"tangent does not anticommute with its base (defect {defect:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)


def require_same_base(*tangents) -> LinearComplexStructure:
    base = tangents[0].base
    for t in tangents[1:]:
        if not base.same_as(t.base):
            raise BaseMismatchError("tangent vectors are attached to different complex structures")
    return base


def check_sl2(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {A.shape}")
    det = np.linalg.det(A)
    if abs(det - 1.0) >= UNIMODULAR_TOL:
        raise NonUnimodularError(f"det A = {det!r}, expected 1")
    return A


def sl2_inverse(A: np.ndarray) -> np.ndarray:
    (a, b), (c, d) = A
    return np.array([[d, -b], [-c, a]])


def metric_gJ(J: LinearComplexStructure, v, w) -> float:
    return rho0(v, J.m @ np.asarray(w, dtype=float))


def _check_uhp(z: complex) -> tuple[float, float]:
    z = complex(z)
    if not z.imag > 0:
        raise ValueError(f"point {z!r} is not in the upper half-plane")
    return z.real, z.imag


def uhp_to_J(z: complex) -> LinearComplexStructure:
    x, y = _check_uhp(z)
    return LinearComplexStructure(np.array([[x / y, -(x * x + y * y) / y], [1.0 / y, -x / y]]))


def uhp_to_J_partials(z: complex) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form partial derivatives of ``uhp_to_J`` in x and in y."""
    x, y = _check_uhp(z)
    dx = np.array([[1.0 / y, -2.0 * x / y], [0.0, -1.0 / y]])
    dy = np.array([[-x / y**2, (x * x - y * y) / y**2], [-1.0 / y**2, x / y**2]])
    return dx, dy


def uhp_tangent(z: complex, zdot: complex) -> TangentAtJ:
    dx, dy = uhp_to_J_partials(z)
    zdot = complex(zdot)
    return TangentAtJ(uhp_to_J(z), zdot.real * dx + zdot.imag * dy)


def J_to_uhp(J: LinearComplexStructure) -> complex:
    (a, _), (c, _) = J.m
    return complex(a / c, 1.0 / c)


def mobius(A, z: complex) -> complex:
    (a, b), (c, d) = np.asarray(A, dtype=float)
    return (a * z + b) / (c * z + d)


def inner_J(a: TangentAtJ, b: TangentAtJ) -> float:
    require_same_base(a, b)
    return 0.5 * float(np.trace(a.m @ b.m))


def complex_structure_J(a: TangentAtJ) -> TangentAtJ:
    return TangentAtJ(a.base, -a.base.m @ a.m)


def omega_J(a: TangentAtJ, b: TangentAtJ) -> float:
    require_same_base(a, b)
    return -0.5 * float(np.trace(a.m @ a.base.m @ b.m))


def kahler_at_J(J: LinearComplexStructure, Jdot: TangentAtJ, Jdot2: TangentAtJ):
    """Return the inner product, the symplectic pairing and the image of ``Jdot`` under I."""
    if not (J.same_as(Jdot.base) and J.same_as(Jdot2.base)):
        raise BaseMismatchError("tangent vectors are not based at J")
    return inner_J(Jdot, Jdot2), omega_J(Jdot, Jdot2), complex_structure_J(Jdot)


def lemma_dotJ_check(J: LinearComplexStructure, Jdot: TangentAtJ, Jdot2: TangentAtJ, Jdot3: TangentAtJ):
    """Residuals of the product and triple-trace identities for tangents at J.

    Returns ``(product, triple, triple_twisted)`` where ``product`` is the max-norm of
    ``Jdot Jdot2 - <Jdot, Jdot2> 1 + <J Jdot, Jdot2> J`` and the other two are
    ``|tr(Jdot Jdot2 Jdot3)|`` and ``|tr(J Jdot Jdot2 Jdot3)|``.
    """
    if not all(J.same_as(t.base) for t in (Jdot, Jdot2, Jdot3)):
        raise BaseMismatchError("tangent vectors are not based at J")
    a, b, c = Jdot.m, Jdot2.m, Jdot3.m
    rhs = 0.5 * np.trace(a @ b) * np.eye(2) - 0.5 * np.trace(J.m @ a @ b) * J.m
    product = float(np.max(np.abs(a @ b - rhs)))
    return product, abs(float(np.trace(a @ b @ c))), abs(float(np.trace(J.m @ a @ b @ c)))


def sl2_act_J(A, J: LinearComplexStructure) -> LinearComplexStructure:
    A = check_sl2(A)
    return LinearComplexStructure(A @ J.m @ sl2_inverse(A))


def sl2_act_tangent(A, Jdot: TangentAtJ) -> TangentAtJ:
    A = check_sl2(A)
    Ai = sl2_inverse(A)
    return TangentAtJ(LinearComplexStructure(A @ Jdot.base.m @ Ai), A @ Jdot.m @ Ai)
