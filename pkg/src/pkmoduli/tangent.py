"""Tangent vectors (Jdot, Udot) to the bundle of pairs (J, U).

Udot = g_J^{-1} Tdot is split by endomorphism part into a trace-free piece Udot_0 and a
trace piece Udot_tr = (-J Jdot U)_tr.  Udot_0 is stored as the three blocks
(Udot_1)_0, (Udot_2)_0 and 2E - (Udot_1)_0, paired against e1*e1*, sigma_2 and
e2*e2*, so that its scalar product is a literal three-trace sum.  All blocks are
matrices in the frame of the base U tensor (where g_J = 1 and J = J0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BaseMismatchError, MalformedTensorError
from .jspace import (
    J0,
    LinearComplexStructure,
    TangentAtJ,
    check_sl2,
    sl2_inverse,
    uhp_tangent,
    uhp_to_J,
)
from .quartic import (
    ModuliPoint,
    UTensor,
    full_from_components,
    pull4,
    raise_index,
    reframe_blocks,
    sl2_act_U,
    tensor_from_coordinates,
    tensor_partials,
)

TANGENT_TOL = 1e-10
REFLECT = np.diag([-1.0, 1.0])


def _tl(M: np.ndarray) -> np.ndarray:
    return M - 0.5 * np.trace(M) * np.eye(2)


def _trpart(M: np.ndarray) -> np.ndarray:
    return 0.5 * np.trace(M) * np.eye(2)


def _same_base(a: UTensor, b: UTensor) -> bool:
    if a is b:
        return True
    if not a.base.same_as(b.base):
        return False
    scale = max(1.0, float(np.max(np.abs(a.u1))))
    Bb = reframe_blocks(b.frame_blocks(), b.frame, a.frame)
    return bool(np.max(np.abs(a.frame_blocks() - Bb)) <= 1e-12 * scale)


@dataclass(frozen=True, eq=False)
class ModuliTangent:
    base: UTensor
    jdot: TangentAtJ
    u0_1: np.ndarray
    u0_2: np.ndarray
    u0_corr: np.ndarray
    utr_1: np.ndarray
    utr_2: np.ndarray

    def __post_init__(self):
        if not self.base.base.same_as(self.jdot.base):
            raise BaseMismatchError("Jdot is not based at the base complex structure")
        res = self.residuals()
        scale = max(
            1.0,
            float(np.max(np.abs(self.frame_udot()))),
            float(np.max(np.abs(self.jdot_frame()))) * max(1.0, float(np.max(np.abs(self.base.u1)))),
        )
        for name, r in res.items():
            if r > TANGENT_TOL * scale:
                raise MalformedTensorError(f"tangent violates {name} (residual {r:.3e})")

    @property
    def J(self) -> LinearComplexStructure:
        return self.base.base

    def jdot_frame(self) -> np.ndarray:
        P = self.base.frame
        return np.linalg.solve(P, self.jdot.m @ P)

    def E(self) -> np.ndarray:
        return 0.5 * (self.u0_1 + self.u0_corr)

    def frame_udot(self) -> np.ndarray:
        """F[a, b] = Udot(e_a, e_b) in frame coordinates."""
        d12 = self.u0_2 + self.utr_2
        return np.array([[self.u0_1 + self.utr_1, d12], [d12, self.u0_corr - self.utr_1]])

    def residuals(self) -> dict[str, float]:
        Jd = self.jdot_frame()
        U = self.base.frame_blocks()
        F = self.frame_udot()
        trace = max(
            abs(np.trace(F[a, b]) + np.trace(J0 @ Jd @ U[a, b])) for a in range(2) for b in range(2)
        )
        blocks = (self.u0_1, self.u0_2, self.u0_corr)
        return {
            "trace constraint": float(trace),
            "E correction": float(np.max(np.abs(self.E() - self.base.u1 @ J0 @ Jd @ REFLECT))),
            "trace part": float(
                max(
                    np.max(np.abs(self.utr_1 - _trpart(-J0 @ Jd @ self.base.u1))),
                    np.max(np.abs(self.utr_2 - _trpart(-J0 @ Jd @ self.base.u2))),
                )
            ),
            "trace-free blocks": float(max(abs(np.trace(b)) for b in blocks)),
        }

    @classmethod
    def from_frame_udot(cls, base: UTensor, jdot: TangentAtJ, F: np.ndarray) -> "ModuliTangent":
        return cls(
            base,
            jdot,
            _tl(F[0, 0]),
            _tl(F[0, 1]),
            _tl(F[1, 1]),
            _trpart(F[0, 0]),
            _trpart(F[0, 1]),
        )


def from_variation(base: UTensor, jdot: TangentAtJ, tdot: np.ndarray) -> ModuliTangent:
    """Tangent from the variation (Jdot, Tdot), Tdot a full 2x2x2x2 array in the standard basis."""
    Tf = pull4(np.asarray(tdot, dtype=float), base.frame)
    return ModuliTangent.from_frame_udot(base, jdot, np.swapaxes(Tf, 2, 3))


def base_at(p: ModuliPoint) -> UTensor:
    return raise_index(uhp_to_J(p.z), tensor_from_coordinates(p))


def _udot_at_i(u, v, xd, yd, ud, vd) -> np.ndarray:
    a = ud + u * yd + v * xd
    b = -u * xd + vd + v * yd
    u01 = np.array([[a, b], [b, -a]])
    c = -ud - 2 * (u * yd + v * xd)
    u02 = np.array([[vd + 2 * (v * yd - u * xd), c], [c, -vd + 2 * (u * xd - v * yd)]])
    d = -ud - 3 * u * yd - 3 * v * xd
    e = -vd - 3 * v * yd + 3 * u * xd
    corr = np.array([[d, e], [e, -d]])
    tr1 = -(u * yd + v * xd) * np.eye(2)
    tr2 = (u * xd - v * yd) * np.eye(2)
    return np.array([[u01 + tr1, u02 + tr2], [u02 + tr2, corr - tr1]])


def coordinate_tangent(p: ModuliPoint, xdot: float, ydot: float, udot: float, vdot: float) -> ModuliTangent:
    """Tangent to the coordinate curve through p with velocity (xdot, ydot, udot, vdot).

    The closed forms are those at (i, w'); a general point is reached by the SL(2, R)
    element A with A.i = z, which carries the frame at i to the frame at z.
    """
    x, y = p.x, p.y
    s = np.sqrt(y)
    A = np.array([[s, x / s], [0.0, 1.0 / s]])
    w_i = y * y * p.w
    zd_i = complex(xdot, ydot) / y
    wd_i = y * y * complex(udot, vdot)
    F = _udot_at_i(w_i.real, w_i.imag, zd_i.real, zd_i.imag, wd_i.real, wd_i.imag)
    jdot_i = zd_i.real * np.diag([1.0, -1.0]) + zd_i.imag * np.array([[0.0, -1.0], [-1.0, 0.0]])
    base = base_at(p)
    jdot = TangentAtJ(base.base, A @ jdot_i @ sl2_inverse(A))
    return ModuliTangent.from_frame_udot(base, jdot, reframe_blocks(F, A, base.frame))


def coordinate_tangent_direct(
    p: ModuliPoint, xdot: float, ydot: float, udot: float, vdot: float
) -> ModuliTangent:
    """Same tangent as ``coordinate_tangent``, from closed-form derivatives of j and T at p."""
    vel = np.array([xdot, ydot, udot, vdot], dtype=float)
    tdot = full_from_components(vel @ tensor_partials(p))
    jdot = uhp_tangent(p.z, complex(xdot, ydot))
    return from_variation(base_at(p), jdot, tdot)


def sl2_act_tangent(A, t: ModuliTangent) -> ModuliTangent:
    A = check_sl2(A)
    base = sl2_act_U(A, t.base)
    jdot = TangentAtJ(base.base, A @ t.jdot.m @ sl2_inverse(A))
    F = reframe_blocks(t.frame_udot(), A @ t.base.frame, base.frame)
    return ModuliTangent.from_frame_udot(base, jdot, F)


def complex_structure(t: ModuliTangent) -> ModuliTangent:
    """I(Jdot, Udot) = (-J Jdot, -Udot J - U Jdot)."""
    Jd = t.jdot_frame()
    F = -t.frame_udot() @ J0 - t.base.frame_blocks() @ Jd
    jdot = TangentAtJ(t.J, -t.J.m @ t.jdot.m)
    return ModuliTangent.from_frame_udot(t.base, jdot, F)


def _aligned(a: ModuliTangent, b: ModuliTangent) -> ModuliTangent:
    if not _same_base(a.base, b.base):
        raise BaseMismatchError("tangent vectors are attached to different points")
    if np.array_equal(a.base.frame, b.base.frame):
        return b
    F = reframe_blocks(b.frame_udot(), b.base.frame, a.base.frame)
    return ModuliTangent.from_frame_udot(a.base, b.jdot, F)


def inner_jdot(a: ModuliTangent, b: ModuliTangent) -> float:
    _aligned(a, b)
    return 0.5 * float(np.trace(a.jdot.m @ b.jdot.m))


def inner_u0(a: ModuliTangent, b: ModuliTangent) -> float:
    b = _aligned(a, b)
    return 0.25 * float(
        np.trace(a.u0_1 @ b.u0_1) + 2 * np.trace(a.u0_2 @ b.u0_2) + np.trace(a.u0_corr @ b.u0_corr)
    )


def inner_utr(a: ModuliTangent, b: ModuliTangent) -> float:
    b = _aligned(a, b)
    return 0.5 * float(np.trace(a.utr_1 @ b.utr_1) + np.trace(a.utr_2 @ b.utr_2))


def inner_U_u0(t: ModuliTangent) -> float:
    """<U, Udot_0> with U paired blockwise as (U1, U2, -U1)."""
    U = t.base
    return 0.25 * float(
        np.trace(U.u1 @ t.u0_1) + 2 * np.trace(U.u2 @ t.u0_2) - np.trace(U.u1 @ t.u0_corr)
    )


def decomposition_lemma_check(t: ModuliTangent) -> float:
    """Max-norm of Udot J + U Jdot - (Udot_0 J + Udot_tr(., J.)) over frame pairs."""
    Jd = t.jdot_frame()
    F = t.frame_udot()
    U = t.base.frame_blocks()
    F0 = np.array([[t.u0_1, t.u0_2], [t.u0_2, t.u0_corr]])
    Ftr = np.array([[t.utr_1, t.utr_2], [t.utr_2, -t.utr_1]])
    # Udot_tr(e_a, J e_b) = sum_c J0[c, b] Ftr[a, c]
    Ftr_J = np.einsum("cb,ackl->abkl", J0, Ftr)
    return float(np.max(np.abs(F @ J0 + U @ Jd - (F0 @ J0 + Ftr_J))))


def coordinate_basis(p: ModuliPoint) -> list[ModuliTangent]:
    """Tangents of the coordinate vector fields d/dx, d/dy, d/du, d/dv at p."""
    return [coordinate_tangent(p, *e) for e in np.eye(4)]


def _flatten(t: ModuliTangent) -> np.ndarray:
    return np.concatenate([t.jdot.m.ravel(), t.frame_udot().ravel()])


def tangent_coordinates(p: ModuliPoint, t: ModuliTangent) -> np.ndarray:
    """Components of t in the coordinate basis at p (least-squares, with the residual checked)."""
    basis = coordinate_basis(p)
    t = _aligned(basis[0], t)
    M = np.column_stack([_flatten(b) for b in basis])
    target = _flatten(t)
    coef, *_ = np.linalg.lstsq(M, target, rcond=None)
    defect = float(np.max(np.abs(M @ coef - target)))
    if defect > 1e-8 * max(1.0, float(np.max(np.abs(target)))):
        raise MalformedTensorError(f"tangent is not in the coordinate span (defect {defect:.3e})")
    return coef
