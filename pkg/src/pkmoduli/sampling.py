"""Seeded samplers for points, tangent velocities and group elements."""

from __future__ import annotations

import numpy as np

from .quartic import ModuliPoint

X_RANGE = (-2.0, 2.0)
Y_RANGE = (0.2, 3.0)
W_RADII = (1e-3, 3.0)

_S = np.array([[0.0, -1.0], [1.0, 0.0]])
_T = np.array([[1.0, 1.0], [0.0, 1.0]])
_T_INV = np.array([[1.0, -1.0], [0.0, 1.0]])


def rng_from(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_point(rng: np.random.Generator, w_zero: bool = False) -> ModuliPoint:
    z = complex(rng.uniform(*X_RANGE), rng.uniform(*Y_RANGE))
    if w_zero:
        return ModuliPoint(z, 0j)
    # uniform in area on the annulus
    r = np.sqrt(rng.uniform(W_RADII[0] ** 2, W_RADII[1] ** 2))
    return ModuliPoint(z, complex(r * np.exp(1j * rng.uniform(0.0, 2 * np.pi))))


def random_points(rng: np.random.Generator, n: int) -> list[ModuliPoint]:
    return [random_point(rng) for _ in range(n)]


def random_velocity(rng: np.random.Generator) -> np.ndarray:
    return rng.normal(size=4)


def _rot(t: float) -> np.ndarray:
    c, s = np.cos(t), np.sin(t)
    return np.array([[c, -s], [s, c]])


def random_sl2(rng: np.random.Generator, spread: float = 0.7) -> np.ndarray:
    """K A K decomposition with a log-normal diagonal part."""
    lam = np.exp(rng.normal(scale=spread))
    return _rot(rng.uniform(0, 2 * np.pi)) @ np.diag([lam, 1.0 / lam]) @ _rot(rng.uniform(0, 2 * np.pi))


def random_sl2z(rng: np.random.Generator, max_len: int = 4) -> np.ndarray:
    """Random word in S, T, T^-1 (integer entries, determinant 1)."""
    A = np.eye(2)
    for _ in range(int(rng.integers(1, max_len + 1))):
        A = A @ (_S, _T, _T_INV)[int(rng.integers(0, 3))]
    return A


def random_group_elements(rng: np.random.Generator, n: int) -> list[np.ndarray]:
    """n elements, every fifth drawn from SL(2, Z)."""
    return [random_sl2z(rng) if k % 5 == 4 else random_sl2(rng) for k in range(n)]
