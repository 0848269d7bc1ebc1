"""Pairs (J, T) of a complex structure and a quartic tensor, and the coordinate model H^2 x C.

A point (z, w) of H^2 x C corresponds to J = j(z) and T = Re(q) with
q = conj(w) (dx0 - conj(z) dy0)^4.  U is T with one index raised by g_J; it is
stored through its two blocks U1 = U(e1, e1), U2 = U(e1, e2) in a g_J-orthonormal
frame with J e1 = e2.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import BaseMismatchError, MalformedTensorError, NonPeriodicError
from .jspace import (
    J0,
    LinearComplexStructure,
    check_sl2,
    sl2_inverse,
    uhp_to_J,
)

TENSOR_TOL = 1e-10
_INDICES = list(itertools.product(range(2), repeat=4))


@dataclass(frozen=True)
class ModuliPoint:
    z: complex
    w: complex

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        object.__setattr__(self, "w", complex(self.w))
        if not self.z.imag > 0:
            raise ValueError(f"Im z must be positive, got z = {self.z!r}")

    @property
    def x(self) -> float:
        return self.z.real

    @property
    def y(self) -> float:
        return self.z.imag

    @property
    def u(self) -> float:
        return self.w.real

    @property
    def v(self) -> float:
        return self.w.imag

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.u, self.v])

    @classmethod
    def from_array(cls, a) -> "ModuliPoint":
        return cls(complex(a[0], a[1]), complex(a[2], a[3]))

    def fiber_norm_sq(self) -> float:
        """|w|_z^2 = Im(z)^4 |w|^2, the argument at which f and f' are evaluated."""
        return self.y**4 * abs(self.w) ** 2


def full_from_components(c) -> np.ndarray:
    """Totally symmetric 2x2x2x2 array from (t1111, t1112, t1122, t1222, t2222)."""
    T = np.empty((2, 2, 2, 2))
    for idx in _INDICES:
        T[idx] = c[sum(idx)]
    return T


def components_from_full(T: np.ndarray) -> tuple[float, ...]:
    return tuple(float(T[(0,) * (4 - k) + (1,) * k]) for k in range(5))


def pull4(T: np.ndarray, P: np.ndarray) -> np.ndarray:
    """Components of T evaluated on the columns of P."""
    return np.einsum("abcd,ai,bj,ck,dl->ijkl", T, P, P, P, P)


def _membership_defect(J: np.ndarray, T: np.ndarray) -> float:
    return float(np.max(np.abs(np.einsum("abcd,ai,bj->ijcd", T, J, J) + T)))


@dataclass(frozen=True, eq=False)
class QuarticTensor:
    """Totally symmetric (0,4) tensor with T(J., J., ., .) = -T, in the standard basis."""

    base: LinearComplexStructure
    t1111: float
    t1112: float
    t1122: float
    t1222: float
    t2222: float

    def __post_init__(self):
        T = self.full()
        scale = float(np.max(np.abs(T))) * max(1.0, float(np.max(np.abs(self.base.m)))) ** 2
        defect = _membership_defect(self.base.m, T)
        if defect > TENSOR_TOL * scale:
            raise MalformedTensorError(f"T(J., J., ., .) != -T (defect {defect:.3e})")

    def components(self) -> tuple[float, ...]:
        return (self.t1111, self.t1112, self.t1122, self.t1222, self.t2222)

    def full(self) -> np.ndarray:
        return full_from_components(self.components())

    @classmethod
    def from_full(cls, base: LinearComplexStructure, T: np.ndarray) -> "QuarticTensor":
        return cls(base, *components_from_full(T))


@dataclass(frozen=True, eq=False)
class UTensor:
    base: LinearComplexStructure
    frame: np.ndarray
    u1: np.ndarray
    u2: np.ndarray

    def __post_init__(self):
        u1 = np.array(self.u1, dtype=float)
        u2 = np.array(self.u2, dtype=float)
        scale = max(1e-300, float(np.max(np.abs(u1))), float(np.max(np.abs(u2))))
        checks = {
            "trace": max(abs(np.trace(u1)), abs(np.trace(u2))),
            "symmetry": max(abs(u1[0, 1] - u1[1, 0]), abs(u2[0, 1] - u2[1, 0])),
            "anticommutation": float(np.max(np.abs(J0 @ u1 + u1 @ J0))),
            "J U2 = U1": float(np.max(np.abs(J0 @ u2 - u1))),
        }
        for name, defect in checks.items():
            if defect > TENSOR_TOL * scale:
                raise MalformedTensorError(f"U violates {name} (defect {defect:.3e})")
        object.__setattr__(self, "u1", u1)
        object.__setattr__(self, "u2", u2)
        object.__setattr__(self, "frame", np.array(self.frame, dtype=float))

    def frame_blocks(self) -> np.ndarray:
        """B[a, b] = U(e_a, e_b) as a matrix in frame coordinates."""
        return np.array([[self.u1, self.u2], [self.u2, -self.u1]])

    def full(self) -> np.ndarray:
        """S[i, j] = U(E_i, E_j) as a matrix in the standard basis E."""
        return frame_to_standard(self.frame_blocks(), self.frame)


def frame_to_standard(B: np.ndarray, P: np.ndarray) -> np.ndarray:
    Pi = np.linalg.inv(P)
    return np.einsum("ai,bj,abkl->ijkl", Pi, Pi, P @ B @ Pi)


def standard_to_frame(S: np.ndarray, P: np.ndarray) -> np.ndarray:
    Pi = np.linalg.inv(P)
    return np.einsum("ia,jb,ijkl->abkl", P, P, Pi @ S @ P)


def reframe_blocks(B: np.ndarray, P_old: np.ndarray, P_new: np.ndarray) -> np.ndarray:
    """Re-express endomorphism-valued bilinear blocks from frame P_old in frame P_new."""
    R = np.linalg.solve(P_old, P_new)
    Ri = np.linalg.inv(R)
    return np.einsum("ca,db,cdkl->abkl", R, R, Ri @ B @ R)


def canonical(U: UTensor) -> UTensor:
    P = U.base.frame()
    B = reframe_blocks(U.frame_blocks(), U.frame, P)
    return UTensor(U.base, P, B[0, 0], B[0, 1])


def raise_index(J: LinearComplexStructure, T: QuarticTensor) -> UTensor:
    if not J.same_as(T.base):
        raise BaseMismatchError("T is not based at J")
    P = J.frame()
    Tf = pull4(T.full(), P)
    # g_J is the identity in the frame, so U(e_a, e_b) has matrix Tf[a, b]^T
    return UTensor(J, P, Tf[0, 0].T, Tf[0, 1].T)


def lower_index(J: LinearComplexStructure, U: UTensor) -> QuarticTensor:
    if not J.same_as(U.base):
        raise BaseMismatchError("U is not based at J")
    Tf = np.swapaxes(U.frame_blocks(), 2, 3)
    T = pull4(Tf, np.linalg.inv(U.frame))
    return QuarticTensor.from_full(J, T)


def tensor_from_coordinates(p: ModuliPoint) -> QuarticTensor:
    x, y, u, v = p.as_array()
    comps = (
        u,
        -x * u + y * v,
        u * (x * x - y * y) - 2 * x * y * v,
        -u * x**3 - v * y**3 + 3 * (u * y * y * x + x * x * y * v),
        u * (x**4 - 6 * x * x * y * y + y**4) + 4 * v * (x * y**3 - x**3 * y),
    )
    return QuarticTensor(uhp_to_J(p.z), *comps)


def tensor_partials(p: ModuliPoint) -> np.ndarray:
    """Closed-form partials of the five coordinate components in (x, y, u, v); shape (4, 5)."""
    z, w = p.z, p.w
    c = np.conj(z)
    # component k is Re(conj(w) (-conj z)^k)
    d_dz = [0j] + [np.conj(w) * k * (-1) ** k * c ** (k - 1) for k in range(1, 5)]
    base = [(-c) ** k for k in range(5)]
    rows = [
        [d.real for d in d_dz],  # d/dx: d conj(z)/dx = 1
        [(-1j * d).real for d in d_dz],  # d/dy: d conj(z)/dy = -i
        [b.real for b in base],  # d/du
        [(-1j * b).real for b in base],  # d/dv: d conj(w)/dv = -i
    ]
    return np.array(rows)


class QuarticForm:
    """The complex quartic q = T(., ., ., .) - i T(., ., ., J.) attached to (J, T)."""

    def __init__(self, J: LinearComplexStructure, T: QuarticTensor):
        if not J.same_as(T.base):
            raise BaseMismatchError("T is not based at J")
        self.J = J.m
        self.T = T.full()

    def __call__(self, a, b, c, d) -> complex:
        ev = lambda last: float(np.einsum("ijkl,i,j,k,l->", self.T, a, b, c, last))
        d = np.asarray(d, dtype=float)
        return complex(ev(d), -ev(self.J @ d))

    def tau(self, v) -> complex:
        return self(v, v, v, v)


def quartic_from_tensor(J: LinearComplexStructure, T: QuarticTensor) -> QuarticForm:
    return QuarticForm(J, T)


def fibre_map_phi(p: ModuliPoint, v) -> complex:
    return np.conj(p.w) * (v[0] - np.conj(p.z) * v[1]) ** 4


def inner_U(U: UTensor, U2: UTensor) -> float:
    if not U.base.same_as(U2.base):
        raise BaseMismatchError("U tensors have different base points")
    B2 = reframe_blocks(U2.frame_blocks(), U2.frame, U.frame)
    return 0.5 * float(np.trace(U.u1 @ B2[0, 0]) + np.trace(U.u2 @ B2[0, 1]))


def norm_sq_U(U: UTensor) -> float:
    """||U||_J^2 = tr(U1^2)."""
    return float(np.trace(U.u1 @ U.u1))


def sl2_act_point(A, p: ModuliPoint) -> ModuliPoint:
    (a, b), (c, d) = check_sl2(A)
    k = c * p.z + d
    return ModuliPoint((a * p.z + b) / k, k**4 * p.w)


def sl2_pushforward(A, p: ModuliPoint) -> np.ndarray:
    """Real 4x4 Jacobian of (z, w) -> A.(z, w) in the coordinates (x, y, u, v)."""
    (_, _), (c, d) = check_sl2(A)
    k = c * p.z + d

    def block(a: complex) -> np.ndarray:
        return np.array([[a.real, -a.imag], [a.imag, a.real]])

    D = np.zeros((4, 4))
    D[:2, :2] = block(1.0 / k**2)
    D[2:, :2] = block(4.0 * c * k**3 * p.w)
    D[2:, 2:] = block(k**4)
    return D


def sl2_act_U(A, U: UTensor) -> UTensor:
    A = check_sl2(A)
    J = LinearComplexStructure(A @ U.base.m @ sl2_inverse(A))
    # in the transported frame A.P the blocks are unchanged
    return canonical(UTensor(J, A @ U.frame, U.u1, U.u2))


def sl2_act_T(A, T: QuarticTensor) -> QuarticTensor:
    A = check_sl2(A)
    Ai = sl2_inverse(A)
    J = LinearComplexStructure(A @ T.base.m @ Ai)
    return QuarticTensor.from_full(J, pull4(T.full(), Ai))


def codazzi_residual(field, h: float, periodic: bool = True) -> float:
    """Max-norm of the discrete Codazzi system for a tensor field on a flat square grid.

    ``field`` has shape (nx, ny, 5): components (t1111, ..., t2222) with respect to the
    standard structure J0 at each grid point, first axis along x.  Central differences
    wrap around when ``periodic`` (the grid is then one full period without the
    duplicated endpoint); otherwise only interior points are used.
    """
    F = np.asarray(field, dtype=float)
    if F.ndim != 3 or F.shape[2] != 5 or min(F.shape[:2]) < 3:
        raise ValueError(f"expected a field of shape (nx>=3, ny>=3, 5), got {F.shape}")
    if not h > 0:
        raise ValueError("grid spacing must be positive")
    a, b = F[..., 0], F[..., 1]
    defect = np.max(np.abs(np.stack([F[..., 2] + a, F[..., 3] + b, F[..., 4] - a])))
    if defect > TENSOR_TOL * max(1.0, float(np.max(np.abs(F)))):
        raise MalformedTensorError(f"field leaves the J0 fibre (defect {defect:.3e})")

    if periodic:
        for axis in (0, 1):
            interior = np.max(np.abs(np.diff(F, axis=axis)))
            seam = np.max(np.abs(np.take(F, 0, axis=axis) - np.take(F, -1, axis=axis)))
            if seam > 10.0 * interior + 1e-12 * max(1.0, float(np.max(np.abs(F)))):
                raise NonPeriodicError(f"field jumps across the seam along axis {axis}")

        def d(g, axis):
            return (np.roll(g, -1, axis=axis) - np.roll(g, 1, axis=axis)) / (2 * h)

        ax, ay, bx, by = d(a, 0), d(a, 1), d(b, 0), d(b, 1)
    else:
        ax = (a[2:, 1:-1] - a[:-2, 1:-1]) / (2 * h)
        ay = (a[1:-1, 2:] - a[1:-1, :-2]) / (2 * h)
        bx = (b[2:, 1:-1] - b[:-2, 1:-1]) / (2 * h)
        by = (b[1:-1, 2:] - b[1:-1, :-2]) / (2 * h)
    # Cauchy-Riemann for the coefficient t1111 - i t1112
    return float(max(np.max(np.abs(bx - ay)), np.max(np.abs(ax + by))))


def field_from_coefficient(values) -> np.ndarray:
    """J0-fibre tensor field whose quartic differential is ``values * dz^4``."""
    q = np.asarray(values, dtype=complex)
    a, b = q.real, -q.imag
    return np.stack([a, b, -a, -b, a], axis=-1)


def tensor_lemma_residuals(J: LinearComplexStructure, T: QuarticTensor) -> dict[str, float]:
    """Residuals of the algebraic identities satisfied by a pair (J, T) and its U tensor.

    (i) T(J., J., J., J.) = T; (ii) a single J may move between slots; (iii) and (iv) the
    same for U, with J acting on the output anti-commuting; (v) U is trace-free; plus J U2 = U1.
    """
    Jm = J.m
    Tf = T.full()
    slot = [
        np.einsum("abcd,ai->ibcd", Tf, Jm),
        np.einsum("abcd,bi->aicd", Tf, Jm),
        np.einsum("abcd,ci->abid", Tf, Jm),
        np.einsum("abcd,di->abci", Tf, Jm),
    ]
    U = raise_index(J, T)
    S = U.full()
    SJx = np.einsum("abkl,ai->ibkl", S, Jm)
    SJy = np.einsum("abkl,bi->aikl", S, Jm)
    out = {
        "i": float(np.max(np.abs(pull4(Tf, Jm) - Tf))),
        "ii": float(max(np.max(np.abs(s - slot[0])) for s in slot[1:])),
        "iii": float(max(np.max(np.abs(SJx - SJy)), np.max(np.abs(SJx - S @ Jm)))),
        "iv": float(np.max(np.abs(Jm @ S + S @ Jm))),
        "v": float(np.max(np.abs(np.trace(S, axis1=2, axis2=3)))),
        "JU2=U1": float(np.max(np.abs(J0 @ U.u2 - U.u1))),
    }
    return out
