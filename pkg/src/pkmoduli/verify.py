"""Verification sweep: every checkable identity as a seeded, toleranced record.

Each check returns ``(samples, value)``; a record passes when ``value <= tolerance``
(or ``value >= tolerance`` for the few lower-bound checks).  A perturbation may be
injected into the metric to confirm that the sweep can fail.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import ambient, dynamics, kahler, quartic, tangent
from .config import LabConfig, tolerance_scale
from .jspace import (
    TangentAtJ,
    inner_J,
    lemma_dotJ_check,
    mobius,
    sl2_act_J,
    sl2_act_tangent,
    uhp_tangent,
    uhp_to_J,
)
from .quartic import ModuliPoint
from .sampling import random_group_elements, random_point, random_points, random_velocity, rng_from

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Model:
    """The metric and symplectic matrix fields under test."""

    f: kahler.DeformationFunction
    metric: Callable
    omega: Callable


def make_model(cfg: LabConfig) -> Model:
    f = cfg.deformation()
    if cfg.perturb is None:
        return Model(f, kahler.metric_matrix, kahler.symplectic_matrix)
    _, eps = cfg.perturb

    def metric(p, f):
        return kahler.metric_matrix(p, f) + eps * np.diag([1.0 + p.u, p.u, 0.0, 0.0])

    def omega(p, f):
        W = metric(p, f) @ kahler.complex_structure_matrix()
        return 0.5 * (W - W.T)

    return Model(f, metric, omega)


@dataclass
class CheckRecord:
    check_id: str
    anchor: str
    samples: int
    max_residual: float
    tolerance: float
    comparison: str
    passed: bool


@dataclass
class VerificationReport:
    schema_version: int
    config: dict
    records: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    passed: bool = True

    def to_json(self) -> str:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        for r in d["records"]:
            r["pass"] = r.pop("passed")
        return json.dumps(d, sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def summary(self) -> str:
        lines = []
        for r in self.records:
            flag = "PASS" if r.passed else "FAIL"
            lines.append(
                f"{flag}  {r.check_id:<34} {r.max_residual:.3e} {r.comparison} {r.tolerance:.1e}  (n={r.samples})"
            )
        n_ok = sum(r.passed for r in self.records)
        lines.append(f"{n_ok}/{len(self.records)} checks passed")
        lines.extend(f"note: {n}" for n in self.notes)
        return "\n".join(lines)

    def failed(self) -> list[str]:
        return [r.check_id for r in self.records if not r.passed]


def _rel(a, b) -> float:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b)) / max(1.0, float(np.max(np.abs(b)))))


def _max(values) -> tuple[int, float]:
    values = list(values)
    return len(values), float(max(values))


def _functions(cfg: LabConfig):
    f0 = cfg.deformation()
    other = "sqrt" if cfg.f_name == "linear" else "linear"
    return [f0, kahler.deformation(other)]


# ---- ambient ---------------------------------------------------------------

GRID = [(x, y) for x in np.linspace(-1, 1, 5) for y in np.linspace(-1, 1, 5)]


def chk_eta_level(cfg, model, rng):
    def res(x, y):
        p = ambient.barbot_embed(x, y)
        return abs(ambient.eta_form(p, p) + 1.0) / max(1.0, float(p @ p))

    return _max(res(*rng.uniform(-3, 3, 2)) for _ in range(cfg.sample_count))


def chk_induced_metric(cfg, model, rng):
    return _max(_rel(ambient.extrinsic_frame(x, y).induced_metric(), 2 * np.eye(2)) for x, y in GRID)


def chk_frame(cfg, model, rng):
    return _max(max(ambient.extrinsic_frame(x, y).residuals().values()) for x, y in GRID)


def chk_maximality(cfg, model, rng):
    return _max(float(np.max(np.abs(ambient.maximality_trace(x, y)))) for x, y in GRID)


def chk_II_norm(cfg, model, rng):
    return _max(abs(ambient.II_norm_sq(x, y) - 2.0) for x, y in GRID)


def chk_gauss(cfg, model, rng):
    return _max(ambient.gauss_residual(x, y) for x, y in GRID)


def chk_shape(cfg, model, rng):
    return _max(ambient.shape_relation_residual(x, y) for x, y in GRID)


def chk_quartic_constancy(cfg, model, rng):
    qs = np.array([ambient.quartic_from_embedding(x, y)[1] for x, y in GRID])
    return len(qs), float(np.max(np.abs(qs - qs[0])) / abs(qs[0]))


def chk_laplacian(cfg, model, rng):
    def res(x, y):
        fxx, _, fyy = ambient.barbot_second_partials(x, y)
        return _rel(fxx + fyy, 4 * ambient.barbot_embed(x, y))

    return _max(res(*rng.uniform(-3, 3, 2)) for _ in range(cfg.sample_count))


# ---- jspace ----------------------------------------------------------------


def chk_j_equivariance(cfg, model, rng):
    def res(A, p):
        return _rel(uhp_to_J(mobius(A, p.z)).m, sl2_act_J(A, uhp_to_J(p.z)).m)

    gs = random_group_elements(rng, 50)
    return _max(res(A, random_point(rng)) for A in gs)


def chk_j_isometry(cfg, model, rng):
    def res():
        p = random_point(rng)
        zd = complex(*rng.normal(size=2))
        t = uhp_tangent(p.z, zd)
        return abs(inner_J(t, t) - abs(zd) ** 2 / p.y**2) / max(1.0, abs(zd) ** 2 / p.y**2)

    return _max(res() for _ in range(20))


def chk_j_lemma(cfg, model, rng):
    def res():
        J = uhp_to_J(random_point(rng).z)
        ts = []
        for _ in range(3):
            M = rng.normal(size=(2, 2))
            ts.append(TangentAtJ(J, 0.5 * (M + J.m @ M @ J.m)))
        scale = max(1.0, *(float(np.max(np.abs(t.m))) for t in ts)) ** 3 * max(1.0, float(np.max(np.abs(J.m))))
        return max(lemma_dotJ_check(J, *ts)) / scale

    return _max(res() for _ in range(cfg.sample_count))


def chk_j_invariance(cfg, model, rng):
    def res(A):
        p = random_point(rng)
        a, b = (uhp_tangent(p.z, complex(*rng.normal(size=2))) for _ in range(2))
        Aa, Ab = sl2_act_tangent(A, a), sl2_act_tangent(A, b)
        return abs(inner_J(Aa, Ab) - inner_J(a, b)) / max(1.0, abs(inner_J(a, b)))

    return _max(res(A) for A in random_group_elements(rng, 50))


# ---- quartic ---------------------------------------------------------------


def chk_tensor_lemma(cfg, model, rng):
    def res(p):
        T = quartic.tensor_from_coordinates(p)
        scale = max(1.0, float(np.max(np.abs(T.full())))) * max(1.0, float(np.max(np.abs(T.base.m)))) ** 4
        return max(quartic.tensor_lemma_residuals(T.base, T).values()) / scale

    return _max(res(p) for p in random_points(rng, cfg.sample_count))


def chk_phi_expansion(cfg, model, rng):
    def res(p):
        T = quartic.tensor_from_coordinates(p).full()
        worst = 0.0
        for _ in range(4):
            v = rng.normal(size=2)
            direct = float(np.einsum("ijkl,i,j,k,l->", T, v, v, v, v))
            worst = max(worst, abs(direct - quartic.fibre_map_phi(p, v).real) / max(1.0, abs(direct)))
        return worst

    return _max(res(p) for p in random_points(rng, cfg.sample_count))


def chk_quartic_linearity(cfg, model, rng):
    def res(p):
        T = quartic.tensor_from_coordinates(p)
        q = quartic.quartic_from_tensor(T.base, T)
        v = rng.normal(size=2)
        al, be = rng.normal(size=2)
        lhs = q.tau(al * v + be * (T.base.m @ v))
        rhs = complex(al, be) ** 4 * q.tau(v)
        return abs(lhs - rhs) / max(1.0, abs(rhs))

    return _max(res(p) for p in random_points(rng, cfg.sample_count))


def chk_tensor_equivariance(cfg, model, rng):
    def res(A):
        p = random_point(rng)
        lhs = quartic.tensor_from_coordinates(quartic.sl2_act_point(A, p)).full()
        return _rel(lhs, quartic.sl2_act_T(A, quartic.tensor_from_coordinates(p)).full())

    return _max(res(A) for A in random_group_elements(rng, 50))


def chk_U_invariance(cfg, model, rng):
    def res(A):
        p = random_point(rng)
        q = ModuliPoint(p.z, complex(*rng.normal(size=2)))
        U, V = tangent.base_at(p), tangent.base_at(q)
        ref = quartic.inner_U(U, V)
        act = quartic.inner_U(quartic.sl2_act_U(A, U), quartic.sl2_act_U(A, V))
        return abs(act - ref) / max(1.0, abs(ref))

    return _max(res(A) for A in random_group_elements(rng, 50))


def chk_fibre_isometry(cfg, model, rng):
    def res(p):
        s = 0.5 * quartic.norm_sq_U(tangent.base_at(p))
        return abs(s - p.fiber_norm_sq()) / max(1.0, p.fiber_norm_sq())

    return _max(res(p) for p in random_points(rng, cfg.sample_count))


def _grid(n: int = 64):
    h = 1.0 / (n - 1)
    x = np.linspace(0.0, 1.0, n)
    X, Y = np.meshgrid(x, x, indexing="ij")
    return X + 1j * Y, h


def chk_codazzi_holomorphic(cfg, model, rng):
    """Observed order of the residual for exp(z) between 33 and 65 point grids (the z probe is exact)."""
    res = []
    for n in (33, 65):
        Z, h = _grid(n)
        res.append(quartic.codazzi_residual(quartic.field_from_coefficient(np.exp(Z)), h, periodic=False))
    Z, h = _grid(65)
    linear = quartic.codazzi_residual(quartic.field_from_coefficient(Z), h, periodic=False)
    order = np.log2(res[0] / res[1])
    return 3, float(order) if linear < 1e-10 else 0.0


def chk_codazzi_antiholomorphic(cfg, model, rng):
    Z, h = _grid()
    return 1, quartic.codazzi_residual(quartic.field_from_coefficient(np.conj(Z)), h, periodic=False)


# ---- tangent ---------------------------------------------------------------


def _tangent_samples(cfg, rng):
    for p in random_points(rng, cfg.sample_count):
        yield p, random_velocity(rng)


def chk_transport(cfg, model, rng):
    def res(p, v):
        a, b = tangent.coordinate_tangent(p, *v), tangent.coordinate_tangent_direct(p, *v)
        return max(_rel(a.frame_udot(), b.frame_udot()), _rel(a.jdot.m, b.jdot.m))

    return _max(res(p, v) for p, v in _tangent_samples(cfg, rng))


def chk_trace_constraint(cfg, model, rng):
    def res(p, v):
        t = tangent.coordinate_tangent(p, *v)
        r = t.residuals()
        scale = max(1.0, float(np.max(np.abs(t.frame_udot()))))
        return max(r["trace constraint"], r["E correction"], r["trace part"]) / scale

    return _max(res(p, v) for p, v in _tangent_samples(cfg, rng))


def chk_decomposition(cfg, model, rng):
    def res(p, v):
        t = tangent.coordinate_tangent(p, *v)
        return tangent.decomposition_lemma_check(t) / max(1.0, float(np.max(np.abs(t.frame_udot()))))

    return _max(res(p, v) for p, v in _tangent_samples(cfg, rng))


def chk_tangent_invariance(cfg, model, rng):
    def res(A):
        p = random_point(rng)
        a, b = (tangent.coordinate_tangent(p, *random_velocity(rng)) for _ in range(2))
        Aa, Ab = tangent.sl2_act_tangent(A, a), tangent.sl2_act_tangent(A, b)
        return max(
            abs(g(Aa, Ab) - g(a, b)) / max(1.0, abs(g(a, b)))
            for g in (tangent.inner_u0, tangent.inner_utr, tangent.inner_jdot)
        )

    return _max(res(A) for A in random_group_elements(rng, 50))


def chk_variation(cfg, model, rng, h=1e-5):
    def res(p, v):
        t = tangent.coordinate_tangent(p, *v)
        q = p.as_array()

        def N(s):
            return quartic.norm_sq_U(tangent.base_at(ModuliPoint.from_array(q + s * v)))

        fd = (N(h) - N(-h)) / (2 * h)
        exact = 2 * tangent.inner_U_u0(t)
        return abs(fd - exact) / max(1.0, abs(exact))

    return _max(res(p, v) for p, v in _tangent_samples(cfg, rng))


def chk_fiber_block(cfg, model, rng):
    f = kahler.linear()

    def res(w):
        p = ModuliPoint(1j, w)
        B = tangent.coordinate_basis(p)[2:]
        half_fp = 0.5 * f.derivative(p.fiber_norm_sq())
        d = np.array([[half_fp * (tangent.inner_u0(a, b) - tangent.inner_utr(a, b)) for b in B] for a in B])
        return max(_rel(d, -np.eye(2)), _rel(kahler.metric_matrix(p, f)[2:, 2:], -np.eye(2)))

    return _max(res(complex(*rng.normal(size=2))) for _ in range(20))


# ---- kahler ----------------------------------------------------------------


def _kahler_points(cfg, rng, n=None):
    n = cfg.sample_count if n is None else n
    for f in _functions(cfg):
        for p in random_points(rng, n):
            yield f, p


def chk_det(cfg, model, rng):
    def res(f, p):
        return abs(np.linalg.det(model.metric(p, f)) / kahler.det_closed_form(p, f) - 1.0)

    return _max(res(f, p) for f, p in _kahler_points(cfg, rng))


def chk_signature(cfg, model, rng):
    return _max(float(kahler.signature(model.metric(p, f)) != (2, 2)) for f, p in _kahler_points(cfg, rng))


def chk_restrictions(cfg, model, rng):
    def res(f, p):
        G0 = model.metric(ModuliPoint(p.z, 0j), f)[:2, :2]
        Gi = model.metric(ModuliPoint(1j, p.w), f)[2:, 2:]
        return float(not (np.all(np.linalg.eigvalsh(G0) > 0) and np.all(np.linalg.eigvalsh(Gi) < 0)))

    return _max(res(f, p) for f, p in _kahler_points(cfg, rng))


def chk_closedness(cfg, model, rng):
    def res(f, p):
        def om(q):
            return model.omega(ModuliPoint.from_array(q), f)

        return kahler.exterior_derivative_residual(p, f, omega=om)

    return _max(res(f, p) for f, p in _kahler_points(cfg, rng, max(1, cfg.sample_count // 2)))


def chk_I_squared(cfg, model, rng):
    I = kahler.complex_structure_matrix()
    m = float(np.max(np.abs(I @ I + np.eye(4))))

    def res(p, v):
        t = tangent.coordinate_tangent(p, *v)
        tt = tangent.complex_structure(tangent.complex_structure(t))
        return max(m, _rel(tt.frame_udot(), -t.frame_udot()), _rel(tt.jdot.m, -t.jdot.m))

    return _max(res(p, v) for p, v in _tangent_samples(cfg, rng))


def chk_compatibility(cfg, model, rng):
    I = kahler.complex_structure_matrix()

    def res(f, p):
        G = model.metric(p, f)
        return _rel(I.T @ G @ I, G)

    return _max(res(f, p) for f, p in _kahler_points(cfg, rng))


def chk_omega_triangle(cfg, model, rng):
    I = kahler.complex_structure_matrix()
    return _max(_rel(model.omega(p, f), model.metric(p, f) @ I) for f, p in _kahler_points(cfg, rng))


def chk_intrinsic_metric(cfg, model, rng):
    return _max(
        _rel(kahler.intrinsic_metric_matrix(p, f), model.metric(p, f)) for f, p in _kahler_points(cfg, rng)
    )


def chk_intrinsic_I(cfg, model, rng):
    I = kahler.complex_structure_matrix()

    def res(p, v):
        t = tangent.coordinate_tangent(p, *v)
        return _rel(tangent.tangent_coordinates(p, tangent.complex_structure(t)), I @ v)

    return _max(res(p, v) for p, v in _tangent_samples(cfg, rng))


def chk_sl2_invariance(cfg, model, rng):
    fs = _functions(cfg)

    def res(k, A):
        f = fs[k % 2]
        p = random_point(rng)
        D = quartic.sl2_pushforward(A, p)
        q = quartic.sl2_act_point(A, p)
        return max(
            _rel(D.T @ model.metric(q, f) @ D, model.metric(p, f)),
            _rel(D.T @ model.omega(q, f) @ D, model.omega(p, f)),
        )

    return _max(res(k, A) for k, A in enumerate(random_group_elements(rng, 50)))


# ---- dynamics --------------------------------------------------------------


def _ham_points(cfg, rng):
    for f in _functions(cfg):
        for p in random_points(rng, cfg.sample_count):
            yield f, p


def chk_xh1(cfg, model, rng):
    return _max(
        _rel(dynamics.hamiltonian_vector_field(dynamics.grad_h1, p, f, model.omega), dynamics.xh1_closed(p))
        for f, p in _ham_points(cfg, rng)
    )


def chk_xh2(cfg, model, rng):
    return _max(
        _rel(dynamics.hamiltonian_vector_field(dynamics.grad_h2, p, f, model.omega), dynamics.xh2_closed(p))
        for f, p in _ham_points(cfg, rng)
    )


def chk_iota(cfg, model, rng):
    def res(f, p):
        Om = model.omega(p, f)
        return max(
            _rel(Om.T @ dynamics.xh1_closed(p), dynamics.grad_h1(p, f)),
            _rel(Om.T @ dynamics.xh2_closed(p), dynamics.grad_h2(p, f)),
        )

    return _max(res(f, p) for f, p in _ham_points(cfg, rng))


def chk_involution(cfg, model, rng):
    def res(f, p):
        X1 = dynamics.hamiltonian_vector_field(dynamics.grad_h1, p, f, model.omega)
        X2 = dynamics.hamiltonian_vector_field(dynamics.grad_h2, p, f, model.omega)
        return abs(float(X1 @ model.omega(p, f) @ X2))

    return _max(res(f, p) for f, p in _ham_points(cfg, rng))


def chk_gradients(cfg, model, rng):
    def res(f, p):
        return max(
            _rel(dynamics.fd_gradient(lambda q: dynamics.hamiltonian_h1(q, f), p), dynamics.grad_h1(p, f)),
            _rel(dynamics.fd_gradient(lambda q: dynamics.hamiltonian_h2(q, f), p), dynamics.grad_h2(p, f)),
        )

    return _max(res(f, p) for f, p in _ham_points(cfg, rng))


def chk_moment_h2(cfg, model, rng):
    def res(f, p):
        h2 = dynamics.hamiltonian_h2(p, f)
        return abs(dynamics.moment_map_sl2(dynamics.XI2, p, f) - h2) / max(1.0, abs(h2))

    return _max(res(f, p) for f, p in _ham_points(cfg, rng))


def chk_moment_equivariance(cfg, model, rng):
    def res(A):
        X = dynamics.LieAlgebraElement.from_basis(*rng.normal(size=3))
        return dynamics.moment_equivariance_residual(A, X, random_point(rng), model.f)

    return _max(res(A) for A in random_group_elements(rng, 50))


def chk_moment_identity(cfg, model, rng):
    def res(f, p):
        worst = 0.0
        for X in (dynamics.XI1, dynamics.XI2, dynamics.XI3):
            dmu = dynamics.fd_gradient(lambda q: dynamics.moment_map_sl2(X, q, f), p)
            worst = max(worst, _rel(model.omega(p, f).T @ dynamics.fundamental_field(X, p), dmu))
        return worst

    return _max(res(f, p) for f, p in _ham_points(cfg, rng))


def _flow_cases(cfg, rng):
    starts = [ModuliPoint(1j, 1 + 0j), random_point(rng)]
    for f in _functions(cfg):
        for which in ("H1", "H2"):
            for p in starts:
                yield f, which, p


def chk_flow_endpoint(cfg, model, rng):
    def res(f, which, p):
        tr = dynamics.flow(which, p, 1.0, cfg.flow_steps, f, omega=model.omega)
        return _rel(tr.end.as_array(), dynamics.closed_form_flow(which, p, 1.0).as_array())

    return _max(res(*c) for c in _flow_cases(cfg, rng))


def chk_flow_drift(cfg, model, rng):
    def res(f, which, p):
        tr = dynamics.flow(which, p, 1.0, cfg.flow_steps, f, omega=model.omega)
        return max(float(np.ptp(tr.h1)), float(np.ptp(tr.h2)))

    return _max(res(*c) for c in _flow_cases(cfg, rng))


def chk_circle_metric(cfg, model, rng):
    def res(f, p):
        th = rng.uniform(0, 2 * np.pi)
        R = dynamics.circle_pushforward(th)
        q = dynamics.circle_act_point(th, p)
        return max(
            _rel(R.T @ model.metric(q, f) @ R, model.metric(p, f)),
            _rel(R.T @ model.omega(q, f) @ R, model.omega(p, f)),
        )

    return _max(res(f, p) for f, p in _ham_points(cfg, rng))


def chk_circle_h1(cfg, model, rng):
    def res(f, p):
        h = dynamics.hamiltonian_h1(p, f)
        return max(abs(dynamics.hamiltonian_h1(dynamics.circle_act_point(t, p), f) - h) for t in np.linspace(0, 2 * np.pi, 9))

    return _max(res(f, p) for f, p in _ham_points(cfg, rng))


def chk_circle_models(cfg, model, rng):
    def res(p):
        th = rng.uniform(0, 2 * np.pi)
        lhs = tangent.base_at(dynamics.circle_act_point(th, p)).full()
        return _rel(lhs, dynamics.circle_act_U(th, tangent.base_at(p)).full())

    return _max(res(p) for p in random_points(rng, cfg.sample_count))


def chk_fiber(cfg, model, rng):
    def res(f, p):
        r = dynamics.fiber_probe(p, f)
        scale = max(1.0, float(np.max(np.abs(kahler.symplectic_matrix(p, f)))))
        return max(r["tangency"] / scale, r["omega_on_fiber"] / scale, float(r["rank"] != 2))

    return _max(res(f, p) for f, p in _ham_points(cfg, rng))


def chk_image(cfg, model, rng):
    # counts sampled points with h1 >= 0
    return _max(float(dynamics.fibration(p, f).h1 >= 0) for f, p in _ham_points(cfg, rng))


CHECKS = [
    ("ambient.eta_level", "eta(f0, f0) = -1", 1e-10, "<=", chk_eta_level),
    ("ambient.laplacian", "f_xx + f_yy = 4 f0", 1e-12, "<=", chk_laplacian),
    ("ambient.frame", "tangent/normal splitting is eta-orthonormal", 1e-12, "<=", chk_frame),
    ("ambient.induced_metric", "induced metric = 2 Id", 1e-10, "<=", chk_induced_metric),
    ("ambient.maximality", "tr II = 0", 1e-10, "<=", chk_maximality),
    ("ambient.II_norm", "|II|^2 = 2", 1e-8, "<=", chk_II_norm),
    ("ambient.gauss", "K = -1 + |II|^2 / 2", 1e-8, "<=", chk_gauss),
    ("ambient.shape_operator", "g_N(II(X, Y), n) = -g_T(Y, B(X, n))", 1e-10, "<=", chk_shape),
    ("ambient.quartic_constancy", "q constant on the surface", 1e-9, "<=", chk_quartic_constancy),
    ("jspace.equivariance", "j(A.z) = A j(z) A^-1", 1e-9, "<=", chk_j_equivariance),
    ("jspace.isometry", "j^* <.,.> = (dx^2 + dy^2) / y^2", 1e-9, "<=", chk_j_isometry),
    ("jspace.product_lemma", "Jd Jd' = <Jd, Jd'> 1 - <J Jd, Jd'> J; triple traces vanish", 1e-12, "<=", chk_j_lemma),
    ("jspace.invariance", "<A.Jd, A.Jd'> = <Jd, Jd'>", 1e-9, "<=", chk_j_invariance),
    ("quartic.tensor_lemma", "J-symmetries of T and U, JU2 = U1", 1e-10, "<=", chk_tensor_lemma),
    ("quartic.phi_expansion", "T = Re conj(w) (v1 - conj(z) v2)^4", 1e-10, "<=", chk_phi_expansion),
    ("quartic.complex_quartic", "tau(a v + b J v) = (a + ib)^4 tau(v)", 1e-10, "<=", chk_quartic_linearity),
    ("quartic.equivariance", "T(A.(z, w)) = A.T(z, w)", 1e-9, "<=", chk_tensor_equivariance),
    ("quartic.U_invariance", "<A.U, A.U'> = <U, U'>", 1e-9, "<=", chk_U_invariance),
    ("quartic.fibre_isometry", "|U|^2 / 2 = y^4 |w|^2", 1e-9, "<=", chk_fibre_isometry),
    ("quartic.codazzi_holomorphic", "holomorphic coefficient: Codazzi residual O(h^2)", 1.9, ">=", chk_codazzi_holomorphic),
    ("quartic.codazzi_antiholomorphic", "anti-holomorphic coefficient: Codazzi residual bounded below", 0.5, ">=", chk_codazzi_antiholomorphic),
    ("tangent.transport", "SL(2) transport of (i, w) formulas = direct derivative", 1e-10, "<=", chk_transport),
    ("tangent.trace_constraint", "tr Ud(X, Y) = -tr(J Jd U(X, Y)); E = U1 J Jd diag(-1, 1)", 1e-12, "<=", chk_trace_constraint),
    ("tangent.decomposition", "Ud J + U Jd = Ud_0 J + Ud_tr(., J.)", 1e-10, "<=", chk_decomposition),
    ("tangent.invariance", "tangent scalar products are SL(2) invariant", 1e-9, "<=", chk_tangent_invariance),
    ("tangent.variation", "(|U|^2)' = 2 <U, Ud_0>", 1e-6, "<=", chk_variation),
    ("tangent.fiber_block", "fibre block of g at (i, w) = f' y^4 Id", 1e-10, "<=", chk_fiber_block),
    ("kahler.det", "det g_f = y^4 f'^2 (1 - f)^2", 1e-10, "<=", chk_det),
    ("kahler.signature", "signature (2, 2)", 0.0, "<=", chk_signature),
    ("kahler.restrictions", "definite on the slices w = 0 and z = i", 0.0, "<=", chk_restrictions),
    ("kahler.closedness", "d omega_f = 0", 1e-6, "<=", chk_closedness),
    ("kahler.I_squared", "I^2 = -1", 1e-12, "<=", chk_I_squared),
    ("kahler.compatibility", "g_f(I., I.) = g_f", 1e-9, "<=", chk_compatibility),
    ("kahler.omega_triangle", "omega_f = g_f(., I.)", 1e-12, "<=", chk_omega_triangle),
    ("kahler.intrinsic_metric", "intrinsic g_f = coordinate matrix", 1e-9, "<=", chk_intrinsic_metric),
    ("kahler.intrinsic_I", "I(Jd, Ud) = (-J Jd, -Ud J - U Jd) matches the matrix", 1e-9, "<=", chk_intrinsic_I),
    ("kahler.sl2_invariance", "g_f and omega_f are SL(2, R) invariant", 1e-9, "<=", chk_sl2_invariance),
    ("dynamics.gradients", "closed-form dH = finite differences", 1e-7, "<=", chk_gradients),
    ("dynamics.xh1", "X_H1 = u d/dv - v d/du", 1e-8, "<=", chk_xh1),
    ("dynamics.xh2", "X_H2 = 2(x d/dx + y d/dy) - 4(u d/du + v d/dv)", 1e-8, "<=", chk_xh2),
    ("dynamics.iota", "dH_i = omega(X_Hi, .)", 1e-8, "<=", chk_iota),
    ("dynamics.involution", "omega(X_H1, X_H2) = 0", 1e-10, "<=", chk_involution),
    ("dynamics.moment_h2", "mu^{xi_2} = H2", 1e-14, "<=", chk_moment_h2),
    ("dynamics.moment_equivariance", "mu_{A.p}(X) = mu_p(A^-1 X A)", 1e-9, "<=", chk_moment_equivariance),
    ("dynamics.moment_identity", "d mu^X = omega(V_X, .)", 1e-7, "<=", chk_moment_identity),
    ("dynamics.flow_endpoint", "flows end at (z, e^{it} w) and (e^{2t} z, e^{-4t} w)", 1e-6, "<=", chk_flow_endpoint),
    ("dynamics.flow_drift", "H1 and H2 conserved along both flows", 1e-8, "<=", chk_flow_drift),
    ("dynamics.circle_isometry", "circle action preserves g_f and omega_f", 1e-9, "<=", chk_circle_metric),
    ("dynamics.circle_h1", "H1 constant on circle orbits", 1e-12, "<=", chk_circle_h1),
    ("dynamics.circle_models", "w -> e^{i theta} w realises (J, cos U - sin U J)", 1e-10, "<=", chk_circle_models),
    ("dynamics.fiber", "fibres of (H1, H2) are Lagrangian, rank 2", 1e-10, "<=", chk_fiber),
    ("dynamics.image", "H1 < 0 for w != 0", 0.0, "<=", chk_image),
]


def run_verification(cfg: LabConfig, only: list[str] | None = None) -> VerificationReport:
    scale = tolerance_scale()
    model = make_model(cfg)
    report = VerificationReport(SCHEMA_VERSION, cfg.to_dict())
    for k, (cid, anchor, tol, cmp, fn) in enumerate(CHECKS):
        if only is not None and cid not in only:
            continue
        rng = rng_from([cfg.seed, k])
        samples, value = fn(cfg, model, rng)
        tol = float(cfg.tolerances.get(cid, tol))
        if cmp == "<=":
            tol *= scale
            ok = bool(np.isfinite(value) and value <= tol)
        else:
            ok = bool(np.isfinite(value) and value >= tol)
        report.records.append(CheckRecord(cid, anchor, samples, float(value), tol, cmp, ok))
    report.passed = all(r.passed for r in report.records)
    report.notes.append(dynamics.FLOW_EXPONENT_NOTE)
    if cfg.perturb is not None:
        report.notes.append(f"fault injection active: {cfg.perturb[0]} perturbed by {cfg.perturb[1]!r}")
    return report
