"""Gauss map into G(2,4) = S^2_+ x S^2_- and the slant-structure detector.

nu(p) = e1 ^ e2 with the oriented tangent frame of the chart; nu_+ and
nu_- are its projections onto the sqrt(1/2)-spheres of the self-dual and
anti-self-dual eigenspaces.  A surface is slant for some J in a given
orientation class exactly when the corresponding projected image lies in
a circle; the circle's axis is zeta_J / sqrt2 and the angular distance
to the axis is the slant angle.  The detector turns that dichotomy into
a least-squares plane fit plus thresholds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import cxstruct, exterior
from .jets import jet_at, tangent_frame

SINGLETON_SPREAD = 1e-7
CIRCLE_RESIDUAL_COEFF = 1e-6
MIN_DETECT_SAMPLES = 100


@dataclass
class GaussSample:
    u: float
    v: float
    nu: np.ndarray        # 6 coords, unit decomposable
    nu_plus: np.ndarray   # 6 coords, norm 1/sqrt2
    nu_minus: np.ndarray

    def plus3(self):
        return exterior.plus_coords(self.nu_plus)

    def minus3(self):
        return exterior.minus_coords(self.nu_minus)


def gauss_field(imm, grid):
    us, vs = grid
    samples = []
    for u in us:
        for v in vs:
            jet = jet_at(imm, u, v)
            e1, e2, _ = tangent_frame(jet)
            nu = exterior.wedge2(e1, e2)
            p, m = exterior.project_pm(nu)
            samples.append(GaussSample(u=u, v=v, nu=nu, nu_plus=p, nu_minus=m))
    return samples


@dataclass
class CircleFit:
    axis: np.ndarray       # unit 3-vector in eta coordinates
    offset: float          # plane <axis, x> = offset, offset >= 0
    residual: float        # RMS distance to the plane
    classification: str    # singleton | circle | not_circular
    spread: float          # max distance from the mean point
    arc_extent: float      # angular extent of the fitted arc (radians)


def fit_circle(points, singleton_spread=SINGLETON_SPREAD,
               circle_residual_coeff=CIRCLE_RESIDUAL_COEFF):
    """Least-squares plane fit of points on S^2(1/sqrt2) via the scatter matrix.

    The axis is the smallest-eigenvalue eigenvector of the centered
    second-moment matrix, oriented so the plane offset is >= 0.
    """
    P = np.asarray(points, dtype=float)
    n = len(P)
    if n < 3:
        raise ValueError("need at least 3 points to classify a circle")
    mean = P.mean(axis=0)
    spread = float(np.max(np.linalg.norm(P - mean, axis=1)))
    centered = P - mean
    moment = centered.T @ centered
    evals, evecs = np.linalg.eigh(moment)
    axis = evecs[:, 0]
    offset = float(axis @ mean)
    if offset < 0.0:
        axis = -axis
        offset = -offset
    residual = float(math.sqrt(max(0.0, evals[0]) / n))

    if spread < singleton_spread:
        cls = "singleton"
    elif residual < circle_residual_coeff * math.sqrt(n):
        cls = "circle"
    else:
        cls = "not_circular"

    arc = 0.0
    if cls == "circle":
        center = offset * axis
        rel = P - center
        radial = rel - (rel @ axis)[:, None] * axis
        norms = np.linalg.norm(radial, axis=1)
        if np.min(norms) > 0.0:
            b1 = radial[0] / norms[0]
            b2 = np.cross(axis, b1)
            ang = np.arctan2(radial @ b2, radial @ b1)
            arc = float(np.max(ang) - np.min(ang))
    return CircleFit(axis=axis, offset=offset, residual=residual,
                     classification=cls, spread=spread, arc_extent=arc)


@dataclass
class RecoveredStructure:
    J: cxstruct.ComplexStructure
    alpha: float
    residual: float


@dataclass
class ClassDetection:
    orientation_class: str
    classification: str
    structures: list = field(default_factory=list)
    all_structures_slant: bool = False
    fit: CircleFit = None


@dataclass
class SlantDetection:
    plus: ClassDetection
    minus: ClassDetection
    doubly_slant: bool

    def all_structures(self):
        return self.plus.structures + self.minus.structures


def _detect_class(points3, cls_name, from_coords, **fit_kwargs):
    fit = fit_circle(points3, **fit_kwargs)
    det = ClassDetection(orientation_class=cls_name,
                         classification=fit.classification, fit=fit)
    if fit.classification == "singleton":
        # Minimal case: the image point is pi_pm(V); its zeta-inverse is the
        # structure making the surface holomorphic, and the surface is slant
        # for every structure in this class.
        mean = np.asarray(points3).mean(axis=0)
        mean = mean / (math.sqrt(2.0) * np.linalg.norm(mean))
        zeta = math.sqrt(2.0) * from_coords(math.sqrt(2.0) * mean)
        J = cxstruct.structure_from_zeta(zeta)
        det.structures = [RecoveredStructure(J=J, alpha=0.0, residual=fit.spread)]
        det.all_structures_slant = True
    elif fit.classification == "circle":
        zeta = math.sqrt(2.0) * from_coords(fit.axis)
        J = cxstruct.structure_from_zeta(zeta)
        cos_a = min(1.0, max(-1.0, math.sqrt(2.0) * fit.offset))
        alpha = math.acos(cos_a)
        det.structures = [
            RecoveredStructure(J=J, alpha=alpha, residual=fit.residual),
            RecoveredStructure(J=J.negated(), alpha=math.pi - alpha,
                               residual=fit.residual),
        ]
    return det


def detect_slant_structures(imm, grid, min_samples=MIN_DETECT_SAMPLES, **fit_kwargs):
    """Recover every compatible complex structure making the surface slant.

    Per orientation class: a singleton Gauss image means slant for the
    whole class (the holomorphic structure is reported); a circle yields
    the +-J pair with angles alpha and pi - alpha; anything else yields
    no structures in that class.
    """
    samples = gauss_field(imm, grid)
    if len(samples) < min_samples:
        raise ValueError(f"need >= {min_samples} grid samples, got {len(samples)}")
    plus_pts = np.array([s.plus3() for s in samples])
    minus_pts = np.array([s.minus3() for s in samples])
    plus = _detect_class(plus_pts, "plus", exterior.from_plus_coords, **fit_kwargs)
    minus = _detect_class(minus_pts, "minus", exterior.from_minus_coords, **fit_kwargs)
    doubly = bool(plus.structures) and bool(minus.structures)
    return SlantDetection(plus=plus, minus=minus, doubly_slant=doubly)


# ---------------------------------------------------------------------------
# Jacobians of nu_pm versus (G, G^D)
# ---------------------------------------------------------------------------

@dataclass
class JacobianSample:
    u: float
    v: float
    det_plus: float
    det_minus: float
    G: float
    GD: float

    @property
    def residual_plus(self):
        return abs(self.det_plus - 0.5 * (self.G + self.GD))

    @property
    def residual_minus(self):
        return abs(self.det_minus - 0.5 * (self.G - self.GD))


def gauss_jacobians(imm, grid, J=None):
    """Signed area determinants of nu_pm at interior grid points.

    Central differences of the 3-coordinate eta fields give the chart
    Jacobians; pushing forward the orthonormal tangent frame converts
    them to area-normalized determinants.  Sign convention: S^2_+ is
    oriented by its outward normal, S^2_- by the inward one; with that
    choice det(d nu_+) = (G + G^D)/2 and det(d nu_-) = (G - G^D)/2 for
    the positively-oriented-frame G^D used throughout this package.
    """
    from .jets import point_geometry

    if J is None:
        J = cxstruct.standard_structures()["J0"]
    us, vs = grid
    nu_p = np.empty((len(us), len(vs), 3))
    nu_m = np.empty((len(us), len(vs), 3))
    for i, u in enumerate(us):
        for j, v in enumerate(vs):
            jet = jet_at(imm, u, v)
            e1, e2, _ = tangent_frame(jet)
            nu = exterior.wedge2(e1, e2)
            nu_p[i, j] = exterior.plus_coords(nu)
            nu_m[i, j] = exterior.minus_coords(nu)
    du = us[1] - us[0]
    dv = vs[1] - vs[0]
    out = []
    for i in range(1, len(us) - 1):
        for j in range(1, len(vs) - 1):
            u, v = us[i], vs[j]
            jet = jet_at(imm, u, v)
            _, _, (a, b, c) = tangent_frame(jet)
            pg = point_geometry(imm, u, v, J)
            dets = []
            for field3, sign in ((nu_p, 1.0), (nu_m, -1.0)):
                gu = (field3[i + 1, j] - field3[i - 1, j]) / (2.0 * du)
                gv = (field3[i, j + 1] - field3[i, j - 1]) / (2.0 * dv)
                d1 = a * gu              # pushforward of e1
                d2 = b * gu + c * gv     # pushforward of e2
                nrm = field3[i, j] * math.sqrt(2.0)
                dets.append(sign * float(np.linalg.det(np.column_stack([nrm, d1, d2]))))
            out.append(JacobianSample(u=u, v=v, det_plus=dets[0],
                                      det_minus=dets[1], G=pg.G, GD=pg.GD))
    return out
