"""Extrinsic geometry of the Barbot surface in the quadric model of H^{2,2}.

The ambient form is eta = diag(+1, +1, -1, -1, -1) on R^5 and H^{2,2} is the level set
eta(p, p) = -1.  The surface f0(x, y) is flat, conformal (induced metric 2(dx^2 + dy^2))
and maximal, with constant quartic differential.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFrameError
from .jspace import J0, LinearComplexStructure
from .quartic import QuarticTensor

ETA = np.diag([1.0, 1.0, -1.0, -1.0, -1.0])
SQRT2 = np.sqrt(2.0)
GRAM_DET_MIN = 1e-14
FRAME_TOL = 1e-12
# e4 and e5 first: f0(0, 0) = e3 makes an e3 seed degenerate at the origin
NORMAL_SEEDS = (3, 4, 2, 0, 1)


def eta_form(a, b) -> float:
    return float(np.asarray(a, dtype=float) @ ETA @ np.asarray(b, dtype=float))


def barbot_embed(x: float, y: float) -> np.ndarray:
    c2x, c2y = np.cosh(2 * x), np.cosh(2 * y)
    return 0.5 * np.array([SQRT2 * np.sinh(2 * y), SQRT2 * np.sinh(2 * x), c2x + c2y, c2x - c2y, 0.0])


def barbot_partials(x: float, y: float) -> tuple[np.ndarray, np.ndarray]:
    s2x, s2y = np.sinh(2 * x), np.sinh(2 * y)
    fx = np.array([0.0, SQRT2 * np.cosh(2 * x), s2x, s2x, 0.0])
    fy = np.array([SQRT2 * np.cosh(2 * y), 0.0, s2y, -s2y, 0.0])
    return fx, fy


def barbot_second_partials(x: float, y: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(f_xx, f_xy, f_yy); note f_xx + f_yy = 4 f0."""
    c2x, c2y = np.cosh(2 * x), np.cosh(2 * y)
    fxx = np.array([0.0, 2 * SQRT2 * np.sinh(2 * x), 2 * c2x, 2 * c2x, 0.0])
    fyy = np.array([2 * SQRT2 * np.sinh(2 * y), 0.0, 2 * c2y, -2 * c2y, 0.0])
    return fxx, np.zeros(5), fyy


@dataclass(frozen=True, eq=False)
class ExtrinsicFrame:
    position: np.ndarray
    tangent1: np.ndarray
    tangent2: np.ndarray
    normal1: np.ndarray
    normal2: np.ndarray

    def normals(self) -> np.ndarray:
        return np.array([self.normal1, self.normal2])

    def tangents(self) -> np.ndarray:
        return np.array([self.tangent1, self.tangent2])

    def induced_metric(self) -> np.ndarray:
        T = self.tangents()
        return T @ ETA @ T.T

    def residuals(self) -> dict[str, float]:
        P, T, N = self.position, self.tangents(), self.normals()
        return {
            "position": abs(eta_form(P, P) + 1.0),
            "position-tangent": float(np.max(np.abs(T @ ETA @ P))),
            "position-normal": float(np.max(np.abs(N @ ETA @ P))),
            "tangent-normal": float(np.max(np.abs(T @ ETA @ N.T))),
            "normal gram": float(np.max(np.abs(N @ ETA @ N.T + np.eye(2)))),
        }


def extrinsic_frame(x: float, y: float) -> ExtrinsicFrame:
    """Frame at f0(x, y): closed-form tangents and an eta-orthonormal normal pair.

    Normals come from eta-Gram-Schmidt of standard basis seeds against span(f0, f_x, f_y),
    seeds tried in a fixed order so the frame is reproducible.
    """
    pos = barbot_embed(x, y)
    fx, fy = barbot_partials(x, y)
    basis = [pos, fx, fy]
    norms = [eta_form(v, v) for v in basis]
    normals = []
    for k in NORMAL_SEEDS:
        v = np.zeros(5)
        v[k] = 1.0
        for b, nb in zip(basis, norms):
            v = v - eta_form(v, b) / nb * b
        n = eta_form(v, v)
        if n < -GRAM_DET_MIN:
            v = v / np.sqrt(-n)
            basis.append(v)
            norms.append(-1.0)
            normals.append(v)
        if len(normals) == 2:
            break
    G = np.array([[eta_form(a, b) for b in basis] for a in basis])
    if len(normals) < 2 or abs(np.linalg.det(G)) < GRAM_DET_MIN:
        raise DegenerateFrameError(f"could not complete the normal frame at ({x}, {y})")
    return ExtrinsicFrame(pos, fx, fy, normals[0], normals[1])


def second_fundamental_form(x: float, y: float, frame: ExtrinsicFrame | None = None) -> np.ndarray:
    """II(d_i, d_j) in the normal frame: out[i, j, k] = component along normal k.

    The ambient connection of H^{2,2} differs from the flat one by a term along the
    position vector, which the normal projection removes.
    """
    frame = extrinsic_frame(x, y) if frame is None else frame
    fxx, fxy, fyy = barbot_second_partials(x, y)
    second = np.array([[fxx, fxy], [fxy, fyy]])
    # normal component: n_k has eta(n_k, n_k) = -1
    return -np.einsum("ijm,mn,kn->ijk", second, ETA, frame.normals())


def g_normal(a, b) -> float:
    """g_N on normal-frame coefficient vectors."""
    return -float(np.dot(a, b))


def unit_frame_II(x: float, y: float) -> np.ndarray:
    """II on the induced-orthonormal frame e_i = d_i / sqrt(2)."""
    return 0.5 * second_fundamental_form(x, y)


def maximality_trace(x: float, y: float) -> np.ndarray:
    II = second_fundamental_form(x, y)
    g = extrinsic_frame(x, y).induced_metric()
    return np.einsum("ij,ijk->k", np.linalg.inv(g), II)


def II_norm_sq(x: float, y: float) -> float:
    """-sum_ij g_N(II(e_i, e_j), II(e_i, e_j)) over an induced-orthonormal frame."""
    IIu = unit_frame_II(x, y)
    return float(-sum(g_normal(IIu[i, j], IIu[i, j]) for i in range(2) for j in range(2)))


def II_norm_sq_two_term(x: float, y: float) -> float:
    """The shortened norm -g_N(II(e1,e1),II(e1,e1)) - g_N(II(e1,e2),II(e1,e2)); half the full one."""
    IIu = unit_frame_II(x, y)
    return float(-g_normal(IIu[0, 0], IIu[0, 0]) - g_normal(IIu[0, 1], IIu[0, 1]))


def gaussian_curvature(x: float, y: float, h: float = 1e-3) -> float:
    """Curvature of the induced metric via the Brioschi formula on central differences."""

    def fff(a, b):
        fx, fy = barbot_partials(a, b)
        return eta_form(fx, fx), eta_form(fx, fy), eta_form(fy, fy)

    E, F, G = fff(x, y)
    Ex = (fff(x + h, y)[0] - fff(x - h, y)[0]) / (2 * h)
    Ey = (fff(x, y + h)[0] - fff(x, y - h)[0]) / (2 * h)
    Gx = (fff(x + h, y)[2] - fff(x - h, y)[2]) / (2 * h)
    Gy = (fff(x, y + h)[2] - fff(x, y - h)[2]) / (2 * h)
    Fx = (fff(x + h, y)[1] - fff(x - h, y)[1]) / (2 * h)
    Fy = (fff(x, y + h)[1] - fff(x, y - h)[1]) / (2 * h)
    Eyy = (fff(x, y + h)[0] - 2 * E + fff(x, y - h)[0]) / h**2
    Gxx = (fff(x + h, y)[2] - 2 * G + fff(x - h, y)[2]) / h**2
    Fxy = (
        fff(x + h, y + h)[1] - fff(x + h, y - h)[1] - fff(x - h, y + h)[1] + fff(x - h, y - h)[1]
    ) / (4 * h * h)
    M1 = np.array(
        [
            [-0.5 * Eyy + Fxy - 0.5 * Gxx, 0.5 * Ex, Fx - 0.5 * Ey],
            [Fy - 0.5 * Gx, E, F],
            [0.5 * Gy, F, G],
        ]
    )
    M2 = np.array([[0.0, 0.5 * Ey, 0.5 * Gx], [0.5 * Ey, E, F], [0.5 * Gx, F, G]])
    return float((np.linalg.det(M1) - np.linalg.det(M2)) / (E * G - F * F) ** 2)


def gauss_residual(x: float, y: float) -> float:
    return abs(gaussian_curvature(x, y) - (-1.0 + 0.5 * II_norm_sq(x, y)))


def shape_operator(x: float, y: float, frame: ExtrinsicFrame | None = None) -> np.ndarray:
    """B(d_i, n_k) = (D_{d_i} n_k)^T, from II and the defining relation.

    Returned with shape (2, 2, 2): out[i, k, l] = d_l-component of B(d_i, n_k).
    """
    frame = extrinsic_frame(x, y) if frame is None else frame
    II = second_fundamental_form(x, y, frame)
    g = frame.induced_metric()
    # g_N(II(X, Y), n_k) = -g_T(Y, B(X, n_k)) and g_N(a, n_k) = -a_k
    return np.einsum("jik,jl->ikl", II, np.linalg.inv(g))


def shape_relation_residual(x: float, y: float, B: np.ndarray | None = None) -> float:
    frame = extrinsic_frame(x, y)
    II = second_fundamental_form(x, y, frame)
    B = shape_operator(x, y, frame) if B is None else B
    g = frame.induced_metric()
    worst = 0.0
    for i in range(2):
        for j in range(2):
            for k in range(2):
                # g_N(II(d_i, d_j), n_k) + g_T(d_j, B(d_i, n_k))
                worst = max(worst, abs(-II[i, j, k] + g[j] @ B[i, k]))
    return worst


def shape_operator_fd(x: float, y: float, h: float = 1e-5) -> np.ndarray:
    """Oracle: tangential part of d(n_k)/dx_i by central differences of the normal frame."""
    frame = extrinsic_frame(x, y)
    T = frame.tangents()
    g = frame.induced_metric()
    out = np.zeros((2, 2, 2))
    for i in range(2):
        d = np.zeros(2)
        d[i] = h
        plus, minus = extrinsic_frame(x + d[0], y + d[1]), extrinsic_frame(x - d[0], y - d[1])
        for k in range(2):
            dn = (plus.normals()[k] - minus.normals()[k]) / (2 * h)
            out[i, k] = np.linalg.solve(g, T @ ETA @ dn)
    return out


def quartic_from_embedding(x: float, y: float) -> tuple[QuarticTensor, complex]:
    """T = g_N(II, II) - g_N(II(., J.), II(., J.)) on the induced unit frame, and q(e1, e1, e1, e1).

    The tensor is returned on the unit frame, where the induced complex structure is J0.
    """
    IIu = unit_frame_II(x, y)
    IIJ = np.einsum("jl,ilk->ijk", J0.T, IIu)  # IIJ[i, j] = II(e_i, J e_j)
    T = -np.einsum("abk,cdk->abcd", IIu, IIu) + np.einsum("abk,cdk->abcd", IIJ, IIJ)
    tensor = QuarticTensor.from_full(LinearComplexStructure(J0), T)
    q = tensor.t1111 - 1j * tensor.t1112
    return tensor, complex(q)


def boundary_points() -> np.ndarray:
    return np.array(
        [
            [0.0, SQRT2, 1.0, 1.0, 0.0],
            [0.0, -SQRT2, 1.0, 1.0, 0.0],
            [SQRT2, 0.0, 1.0, -1.0, 0.0],
            [-SQRT2, 0.0, 1.0, -1.0, 0.0],
        ]
    )
