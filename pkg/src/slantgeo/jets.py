"""Immersion 2-jets, moving frames, fundamental forms and slant diagnostics.

An Immersion wraps a chart (u, v) -> R^{2m} whose first and second
partials are exact: catalog entries carry closed-form derivatives and
DSL-defined entries propagate second-order dual numbers.  Finite
differences never enter this path; they exist only as test oracles.

Frame convention: e1 = x_u / |x_u|, e2 = Gram-Schmidt of x_v (so the
tangent frame is positive for the chart order), normal frame by
orthonormal completion with the 4x4 determinant sign fixed to +1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import dsl
from .cxstruct import ComplexStructure

IMMERSION_TOL = 1e-12
SLANT_SPREAD_TOL = 1e-6
DEGENERATE_THETA_TOL = 1e-6
N_THETA_DIRECTIONS = 16


class GeometryError(ValueError):
    pass


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class Jet2:
    point: np.ndarray
    xu: np.ndarray
    xv: np.ndarray
    xuu: np.ndarray
    xuv: np.ndarray
    xvv: np.ndarray


@dataclass(frozen=True)
class Immersion:
    """Parametrized surface patch with exact 2-jet evaluation."""

    name: str
    ambient_dim: int
    domain: tuple  # ((u0, u1), (v0, v1))
    chart_jet: object  # callable (u, v) -> Jet2
    params: dict = field(default_factory=dict)
    period_loops: dict = field(default_factory=dict)  # loop id -> spec dict
    convention: str = ""  # J id under which the catalog angle is confirmed
    notes: str = ""

    def jet(self, u, v):
        return self.chart_jet(u, v)

    def in_domain(self, u, v, slack=1e-9):
        (u0, u1), (v0, v1) = self.domain
        return (u0 - slack <= u <= u1 + slack) and (v0 - slack <= v <= v1 + slack)


def immersion_from_components(name, components, params, domain, ambient_dim=None,
                              period_loops=None, convention=""):
    """Build an Immersion from DSL expression strings (dual-number jets)."""
    asts = [dsl.parse(c) if isinstance(c, str) else c for c in components]
    for a in asts:
        dsl.check_free_names(a, params)
    dim = ambient_dim or len(asts)
    if dim != len(asts):
        raise DomainError(f"ambient_dim {dim} != number of components {len(asts)}")

    def chart_jet(u, v):
        vals = [dsl.eval_jet2(a, u, v, params) for a in asts]
        return Jet2(
            point=np.array([j.value for j in vals]),
            xu=np.array([j.du for j in vals]),
            xv=np.array([j.dv for j in vals]),
            xuu=np.array([j.duu for j in vals]),
            xuv=np.array([j.duv for j in vals]),
            xvv=np.array([j.dvv for j in vals]),
        )

    return Immersion(name=name, ambient_dim=dim, domain=tuple(map(tuple, domain)),
                     chart_jet=chart_jet, params=dict(params),
                     period_loops=period_loops or {}, convention=convention)


def jet_at(imm, u, v):
    """Evaluate the 2-jet; rejects out-of-domain and non-immersion points."""
    if not imm.in_domain(u, v):
        raise DomainError(f"({u}, {v}) outside domain {imm.domain} of {imm.name}")
    jet = imm.jet(u, v)
    g11 = jet.xu @ jet.xu
    g12 = jet.xu @ jet.xv
    g22 = jet.xv @ jet.xv
    if g11 * g22 - g12 * g12 <= IMMERSION_TOL:
        raise GeometryError(f"immersion condition fails at ({u}, {v}) on {imm.name}")
    return jet


def grid_points(domain, nu, nv):
    (u0, u1), (v0, v1) = domain
    us = np.linspace(u0, u1, nu)
    vs = np.linspace(v0, v1, nv)
    return us, vs


def tangent_frame(jet):
    """Orthonormal (e1, e2) from (x_u, x_v) plus chart coefficients.

    Returns e1, e2 and (a, b, c) with e1 = a x_u, e2 = b x_u + c x_v.
    """
    nu = np.linalg.norm(jet.xu)
    e1 = jet.xu / nu
    a = 1.0 / nu
    proj = jet.xv @ e1
    w = jet.xv - proj * e1
    nw = np.linalg.norm(w)
    if nw < 1e-12:
        raise GeometryError("degenerate metric")
    e2 = w / nw
    b = -proj * a / nw
    c = 1.0 / nw
    return e1, e2, (a, b, c)


def normal_completion(e1, e2):
    """Deterministic orthonormal completion with det(e1,e2,e3,e4) = +1."""
    M = np.column_stack([e1, e2])
    q, _ = np.linalg.qr(np.column_stack([M, np.eye(4)]))
    e3, e4 = q[:, 2], q[:, 3]
    if np.linalg.det(np.column_stack([e1, e2, e3, e4])) < 0:
        e4 = -e4
    return e3, e4


@dataclass
class PointGeometry:
    u: float
    v: float
    point: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    e3: np.ndarray
    e4: np.ndarray
    h3: np.ndarray  # 2x2, <h(e_i, e_j), e3>
    h4: np.ndarray
    H: np.ndarray
    H_norm: float
    G: float
    GD: float
    theta_samples: np.ndarray
    theta_mean: float
    theta_spread: float
    P: np.ndarray  # 2x2 tangential block of J
    F: np.ndarray  # 2x2 normal-from-tangent block
    t: np.ndarray  # 2x2 tangent-from-normal block
    f: np.ndarray  # 2x2 normal block
    J: ComplexStructure

    def block_matrix(self):
        """J in the adapted basis, assembled from (P, t; F, f)."""
        top = np.hstack([self.P, self.t])
        bot = np.hstack([self.F, self.f])
        return np.vstack([top, bot])


def second_fundamental(jet, e1, e2, coeffs, e3, e4):
    """h^r_{ij} via the Gauss formula, from exact chart second derivatives."""
    a, b, c = coeffs
    h11 = a * a * jet.xuu
    h12 = a * (b * jet.xuu + c * jet.xuv)
    h22 = b * b * jet.xuu + 2.0 * b * c * jet.xuv + c * c * jet.xvv
    h3 = np.array([[h11 @ e3, h12 @ e3], [h12 @ e3, h22 @ e3]])
    h4 = np.array([[h11 @ e4, h12 @ e4], [h12 @ e4, h22 @ e4]])
    return h3, h4


def wirtinger_angle(J, e1, e2, direction):
    """Angle between J X and the tangent plane for X = cos(t) e1 + sin(t) e2."""
    X = math.cos(direction) * e1 + math.sin(direction) * e2
    JX = J.apply(X)
    tangential = (JX @ e1) ** 2 + (JX @ e2) ** 2
    c = math.sqrt(min(1.0, max(0.0, tangential)))
    return math.acos(c)


def point_geometry(imm, u, v, J):
    if imm.ambient_dim != 4:
        raise GeometryError("point geometry requires ambient dimension 4")
    jet = jet_at(imm, u, v)
    e1, e2, coeffs = tangent_frame(jet)
    e3, e4 = normal_completion(e1, e2)
    h3, h4 = second_fundamental(jet, e1, e2, coeffs, e3, e4)

    H = 0.5 * ((h3[0, 0] + h3[1, 1]) * e3 + (h4[0, 0] + h4[1, 1]) * e4)
    G = h3[0, 0] * h3[1, 1] - h3[0, 1] ** 2 + h4[0, 0] * h4[1, 1] - h4[0, 1] ** 2
    GD = (h3[0, 0] * h4[0, 1] + h3[0, 1] * h4[1, 1]
          - h3[0, 1] * h4[0, 0] - h3[1, 1] * h4[0, 1])

    frame = (e1, e2, e3, e4)
    Jm = J.matrix
    P = np.array([[frame[i] @ Jm @ frame[j] for j in range(2)] for i in range(2)])
    F = np.array([[frame[2 + r] @ Jm @ frame[j] for j in range(2)] for r in range(2)])
    t = np.array([[frame[i] @ Jm @ frame[2 + s] for s in range(2)] for i in range(2)])
    f = np.array([[frame[2 + r] @ Jm @ frame[2 + s] for s in range(2)] for r in range(2)])

    thetas = np.array([wirtinger_angle(J, e1, e2, math.pi * k / N_THETA_DIRECTIONS)
                       for k in range(N_THETA_DIRECTIONS)])
    return PointGeometry(
        u=u, v=v, point=jet.point, e1=e1, e2=e2, e3=e3, e4=e4,
        h3=h3, h4=h4, H=H, H_norm=float(np.linalg.norm(H)),
        G=float(G), GD=float(GD),
        theta_samples=thetas, theta_mean=float(np.mean(thetas)),
        theta_spread=float(np.max(thetas) - np.min(thetas)),
        P=P, F=F, t=t, f=f, J=J,
    )


# ---------------------------------------------------------------------------
# Field-level diagnostics
# ---------------------------------------------------------------------------

@dataclass
class WirtingerStats:
    theta_min: float
    theta_max: float
    theta_mean: float
    spread: float
    is_slant: bool
    is_purely_real: bool
    n_points: int


def wirtinger_field(imm, grid, J, spread_tol=SLANT_SPREAD_TOL):
    """Wirtinger angle statistics over a grid; spread <= tol declares slant."""
    us, vs = grid
    lo, hi, count = math.inf, -math.inf, 0
    sums = []
    for u in us:
        for v in vs:
            jet = jet_at(imm, u, v)
            e1, e2, _ = tangent_frame(jet)
            for k in range(N_THETA_DIRECTIONS):
                th = wirtinger_angle(J, e1, e2, math.pi * k / N_THETA_DIRECTIONS)
                lo = min(lo, th)
                hi = max(hi, th)
                sums.append(th)
                count += 1
    mean = math.fsum(sums) / count
    return WirtingerStats(
        theta_min=lo, theta_max=hi, theta_mean=mean, spread=hi - lo,
        is_slant=(hi - lo) <= spread_tol,
        is_purely_real=lo > DEGENERATE_THETA_TOL,
        n_points=count,
    )


@dataclass
class OperatorChecks:
    af_symmetry_residual: float      # max |A_{Fe1} e2 - A_{Fe2} e1|
    austere_max_trace: float         # max |tr A_{e_r}|; zero iff austere
    austere: bool
    parallel_f_residual: float       # max |A_{f xi} X + A_xi (P X)|
    q_residual: float                # max |P^2 + cos^2(theta) I|
    theta_mean: float


def _weingarten_matrix(pg, xi):
    """A_xi as a 2x2 matrix over (e1, e2) for a normal vector xi."""
    c3 = xi @ pg.e3
    c4 = xi @ pg.e4
    return c3 * pg.h3 + c4 * pg.h4


def slant_operator_checks(imm, grid, J, austere_tol=1e-8):
    """Shape-operator identities characteristic of slant surfaces."""
    us, vs = grid
    af_res = 0.0
    tr_res = 0.0
    pf_res = 0.0
    q_res = 0.0
    thetas = []
    for u in us:
        for v in vs:
            pg = point_geometry(imm, u, v, J)
            thetas.append(pg.theta_mean)
            frame_n = (pg.e3, pg.e4)
            # F e_i as ambient normal vectors.
            Fe = [pg.F[0, i] * pg.e3 + pg.F[1, i] * pg.e4 for i in range(2)]
            A_f1 = _weingarten_matrix(pg, Fe[0])
            A_f2 = _weingarten_matrix(pg, Fe[1])
            d = A_f1 @ np.array([0.0, 1.0]) - A_f2 @ np.array([1.0, 0.0])
            af_res = max(af_res, float(np.linalg.norm(d)))
            tr_res = max(tr_res, abs(float(np.trace(pg.h3))), abs(float(np.trace(pg.h4))))
            # Lemma: parallel F forces A_{f xi} X = -A_xi (P X).
            for s in range(2):
                fxi = pg.f[0, s] * pg.e3 + pg.f[1, s] * pg.e4
                A_fxi = _weingarten_matrix(pg, fxi)
                A_xi = _weingarten_matrix(pg, frame_n[s])
                for i in range(2):
                    X = np.eye(2)[i]
                    r = A_fxi @ X + A_xi @ (pg.P @ X)
                    pf_res = max(pf_res, float(np.linalg.norm(r)))
            c2 = math.cos(pg.theta_mean) ** 2
            q_res = max(q_res, float(np.max(np.abs(pg.P @ pg.P + c2 * np.eye(2)))))
    return OperatorChecks(
        af_symmetry_residual=af_res,
        austere_max_trace=tr_res,
        austere=tr_res <= austere_tol,
        parallel_f_residual=pf_res,
        q_residual=q_res,
        theta_mean=float(np.mean(thetas)),
    )


# ---------------------------------------------------------------------------
# Adapted slant frame
# ---------------------------------------------------------------------------

@dataclass
class AdaptedSlantFrame:
    theta: float
    e1: np.ndarray
    e2: np.ndarray
    e3: np.ndarray
    e4: np.ndarray


def adapted_frame_at(imm, u, v, J, tol=DEGENERATE_THETA_TOL):
    """Adapted slant frame e2 = sec(theta) P e1, e3 = csc(theta) F e1, e4 = csc(theta) F e2.

    e1 is the normalized x_u (smooth over the chart).  Refuses within tol
    of the complex (theta = 0) and totally real (theta = pi/2)
    degeneracies, where the sec/csc directions break down.
    """
    jet = jet_at(imm, u, v)
    return adapted_frame_of_jet(jet, J, tol)


def adapted_frame_of_jet(jet, J, tol=DEGENERATE_THETA_TOL):
    e1b, e2b, _ = tangent_frame(jet)
    e1 = e1b
    Je1 = J.apply(e1)
    P1 = (Je1 @ e1b) * e1b + (Je1 @ e2b) * e2b
    cos_t = np.linalg.norm(P1)
    theta = math.acos(min(1.0, cos_t))
    if theta < tol:
        raise GeometryError("complex point: theta ~ 0, adapted frame undefined")
    if math.pi / 2.0 - theta < tol:
        raise GeometryError("totally real point: theta ~ pi/2, adapted frame undefined")
    e2 = P1 / cos_t
    F1 = Je1 - P1
    Je2 = J.apply(e2)
    P2 = (Je2 @ e1b) * e1b + (Je2 @ e2b) * e2b
    F2 = Je2 - P2
    sin_t = math.sin(theta)
    return AdaptedSlantFrame(theta=theta, e1=e1, e2=e2, e3=F1 / sin_t, e4=F2 / sin_t)


def adapted_frame(pg):
    """Adapted slant frame from a PointGeometry (proper slant points only)."""
    theta = pg.theta_mean
    if theta < DEGENERATE_THETA_TOL:
        raise GeometryError("complex point: theta ~ 0, adapted frame undefined")
    if math.pi / 2.0 - theta < DEGENERATE_THETA_TOL:
        raise GeometryError("totally real point: theta ~ pi/2, adapted frame undefined")
    J = pg.J
    Je1 = J.apply(pg.e1)
    P1 = (Je1 @ pg.e1) * pg.e1 + (Je1 @ pg.e2) * pg.e2
    cos_t = float(np.linalg.norm(P1))
    theta = math.acos(min(1.0, cos_t))
    e2 = P1 / cos_t
    Je2 = J.apply(e2)
    P2 = (Je2 @ pg.e1) * pg.e1 + (Je2 @ pg.e2) * pg.e2
    sin_t = math.sin(theta)
    return AdaptedSlantFrame(
        theta=theta, e1=pg.e1, e2=e2,
        e3=(Je1 - P1) / sin_t, e4=(Je2 - P2) / sin_t,
    )


def adapted_h(imm, u, v, J):
    """(frame, h3, h4) with the second fundamental form in the adapted frame."""
    jet = jet_at(imm, u, v)
    fr = adapted_frame_of_jet(jet, J)
    e1b, e2b, coeffs = tangent_frame(jet)
    h3b, h4b = second_fundamental(jet, e1b, e2b, coeffs, fr.e3, fr.e4)
    # Rotate tangent indices from (e1b, e2b) to (fr.e1, fr.e2).
    R = np.array([[fr.e1 @ e1b, fr.e1 @ e2b], [fr.e2 @ e1b, fr.e2 @ e2b]])
    h3 = R @ h3b @ R.T
    h4 = R @ h4b @ R.T
    return fr, h3, h4
