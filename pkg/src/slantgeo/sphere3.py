"""Quaternionic geometry of S^3: translations, helices, helical cylinders.

S^3 is the unit quaternions with identity 1 = (1,0,0,0).  X_1, X_2, X_3
are i, j, k at the identity and X~_i their left-invariant extensions
(X~_i(q) = q * e_i).  The Frenet frame of a curve uses the covariant
derivative of S^3 (ambient derivative projected off the position) and
the binormal b = t x n taken in the orientation induced by the outward
normal, which makes the left-invariant frame cross product the standard
one.  With that convention the closed-form helices with k = -2/b have
tau = -1 and <b, X~_1> = a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .jets import Immersion, Jet2

UNIT_TOL = 1e-12
HELIX_STEPS = 8192


class Sphere3Error(ValueError):
    pass


# ---------------------------------------------------------------------------
# Quaternions
# ---------------------------------------------------------------------------

def qmul(p, q):
    a, b, c, d = p
    x, y, z, w = q
    return np.array([
        a * x - b * y - c * z - d * w,
        a * y + b * x + c * w - d * z,
        a * z - b * w + c * x + d * y,
        a * w + b * z - c * y + d * x,
    ])


def qconj(p):
    return np.array([p[0], -p[1], -p[2], -p[3]])


def left_matrix(p):
    """Matrix of q -> p * q."""
    a, b, c, d = p
    return np.array([[a, -b, -c, -d],
                     [b, a, -d, c],
                     [c, d, a, -b],
                     [d, -c, b, a]])


def right_matrix(p):
    """Matrix of q -> q * p."""
    a, b, c, d = p
    return np.array([[a, -b, -c, -d],
                     [b, a, d, -c],
                     [c, -d, a, b],
                     [d, c, -b, a]])


def _check_unit(q):
    if abs(np.linalg.norm(q) - 1.0) > 1e-9:
        raise Sphere3Error("expected a unit quaternion")


def left_translate(p, q):
    _check_unit(p)
    _check_unit(q)
    return qmul(p, q)


def right_translate(p, q):
    _check_unit(p)
    _check_unit(q)
    return qmul(q, p)


def left_pushforward(p, vec):
    """dL_p applied to a tangent vector (same matrix as the translation)."""
    return left_matrix(p) @ np.asarray(vec, dtype=float)


def right_pushforward(p, vec):
    return right_matrix(p) @ np.asarray(vec, dtype=float)


X1 = np.array([0.0, 1.0, 0.0, 0.0])
X2 = np.array([0.0, 0.0, 1.0, 0.0])
X3 = np.array([0.0, 0.0, 0.0, 1.0])


def invariant_frame(q):
    """Left-invariant orthonormal frame (X~_1, X~_2, X~_3) at q."""
    return qmul(q, X1), qmul(q, X2), qmul(q, X3)


def phi_map(q):
    """Orientation-reversing isometry (a, b, c, d) -> (a, b, d, c)."""
    return np.array([q[0], q[1], q[3], q[2]])


def sphere_cross(q, x, y):
    """Cross product in T_q S^3 for the outward-normal orientation."""
    z = np.empty(4)
    for l in range(4):
        e = np.zeros(4)
        e[l] = 1.0
        z[l] = np.linalg.det(np.column_stack([q, x, y, e]))
    return z


# ---------------------------------------------------------------------------
# Helices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HelixParams:
    a: float
    b: float
    s0: float = 0.0

    def __post_init__(self):
        if abs(self.a ** 2 + self.b ** 2 - 1.0) > UNIT_TOL:
            raise Sphere3Error("helix parameters need a^2 + b^2 = 1")

    @property
    def k(self):
        if self.b == 0.0:
            raise Sphere3Error("k = -2/b undefined for b = 0")
        return -2.0 / self.b

    def f(self, s):
        th = self.k * s + self.s0
        return np.array([self.b, self.a * math.cos(th), self.a * math.sin(th)])

    def f_prime(self, s):
        th = self.k * s + self.s0
        return np.array([0.0, -self.a * self.k * math.sin(th),
                         self.a * self.k * math.cos(th)])

    def f_second(self, s):
        th = self.k * s + self.s0
        k2 = self.k * self.k
        return np.array([0.0, -self.a * k2 * math.cos(th), -self.a * k2 * math.sin(th)])


class HelixIntegrator:
    """Fixed-step RK4 for c' = c * (0, f(s)) with per-step renormalization.

    Integrates forward and backward from s = 0 (the curve passes through
    the identity) and answers arbitrary-s queries by finishing from the
    nearest cached node.
    """

    def __init__(self, params: HelixParams, s_lo, s_hi, n_steps=HELIX_STEPS):
        self.params = params
        self.step = (s_hi - s_lo) / n_steps
        self._table = {0: np.array([1.0, 0.0, 0.0, 0.0])}
        self._lo_index = math.floor(s_lo / self.step) - 1
        self._hi_index = math.ceil(s_hi / self.step) + 1
        self._fill()

    def _deriv(self, s, c):
        f = self.params.f(s)
        return qmul(c, np.array([0.0, f[0], f[1], f[2]]))

    def _rk4(self, s, c, h):
        k1 = self._deriv(s, c)
        k2 = self._deriv(s + 0.5 * h, c + 0.5 * h * k1)
        k3 = self._deriv(s + 0.5 * h, c + 0.5 * h * k2)
        k4 = self._deriv(s + h, c + h * k3)
        out = c + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        return out / np.linalg.norm(out)

    def _fill(self):
        c = self._table[0]
        for i in range(0, self._hi_index):
            c = self._rk4(i * self.step, c, self.step)
            self._table[i + 1] = c
        c = self._table[0]
        for i in range(0, -self._lo_index):
            c = self._rk4(-i * self.step, c, -self.step)
            self._table[-i - 1] = c

    def position(self, s):
        i = int(round(s / self.step))
        i = max(self._lo_index, min(self._hi_index, i))
        c = self._table[i]
        rem = s - i * self.step
        if abs(rem) > 1e-15:
            for j in range(4):
                c = self._rk4(i * self.step + rem * j / 4.0, c, rem / 4.0)
        return c


@dataclass
class Curve3Sphere:
    s: np.ndarray
    position: np.ndarray   # (n, 4)
    tangent: np.ndarray    # (n, 4)
    normal: np.ndarray
    binormal: np.ndarray
    kappa: np.ndarray
    tau: np.ndarray
    f: np.ndarray          # (n, 3) components of c' in the left-invariant frame

    def binormal_axis_pairing(self):
        """<b(s), X~_1(c(s))> per sample."""
        return np.array([b @ qmul(c, X1)
                         for b, c in zip(self.binormal, self.position)])


def helix(params: HelixParams, s_range=(0.0, 2.0 * math.pi), n_samples=257):
    """Integrate the helix ODE and attach closed-form Frenet data."""
    s_lo, s_hi = s_range
    integ = HelixIntegrator(params, s_lo, s_hi)
    ss = np.linspace(s_lo, s_hi, n_samples)
    pos = np.array([integ.position(s) for s in ss])

    n = len(ss)
    tangent = np.empty((n, 4))
    normal = np.empty((n, 4))
    binormal = np.empty((n, 4))
    kappa = np.empty(n)
    tau = np.empty(n)
    fcomp = np.empty((n, 3))
    for i, s in enumerate(ss):
        c = pos[i]
        f = params.f(s)
        fp = params.f_prime(s)
        k = float(np.linalg.norm(fp))
        fcomp[i] = f
        kappa[i] = k
        tangent[i] = qmul(c, np.array([0.0, *f]))
        if k < 1e-14:
            # geodesic (a = 0): principal normal and torsion undefined
            normal[i] = np.nan
            binormal[i] = np.nan
            tau[i] = np.nan
            continue
        nf = fp / k
        bf = np.cross(f, nf)
        # nabla_t n in frame coordinates is n' + t x n; tau = <that, b>.
        nfp = params.f_second(s) / k
        tau[i] = float((nfp + np.cross(f, nf)) @ bf)
        normal[i] = qmul(c, np.array([0.0, *nf]))
        binormal[i] = qmul(c, np.array([0.0, *bf]))
    return Curve3Sphere(s=ss, position=pos, tangent=tangent, normal=normal,
                        binormal=binormal, kappa=kappa, tau=tau, f=fcomp)


def frenet_from_positions(ss, pos):
    """5-point-stencil Frenet data for a sampled unit-speed curve on S^3.

    Each differentiation trims two samples per side, so results cover the
    original indices 6 .. n-7 (n >= 13 samples required).
    """
    ss = np.asarray(ss, dtype=float)
    pos = np.asarray(pos, dtype=float)
    if len(ss) < 13:
        raise Sphere3Error("need at least 13 samples for stencil Frenet data")
    h = ss[1] - ss[0]

    def d1(arr):
        return (-arr[4:] + 8.0 * arr[3:-1] - 8.0 * arr[1:-3] + arr[:-4]) / (12.0 * h)

    cp = d1(pos)        # indices 2 .. n-3
    cpp = d1(cp)        # indices 4 .. n-5
    q2 = pos[4:-4]
    nab = cpp - np.einsum("ij,ij->i", cpp, q2)[:, None] * q2
    kappa2 = np.linalg.norm(nab, axis=1)
    normal2 = nab / kappa2[:, None]
    npr = d1(normal2)   # indices 6 .. n-7

    q3 = pos[6:-6]
    t3 = cp[4:-4]
    n3 = normal2[2:-2]
    kappa3 = kappa2[2:-2]
    tau = np.empty(len(npr))
    binormal = np.empty((len(npr), 4))
    for i in range(len(npr)):
        b = sphere_cross(q3[i], t3[i], n3[i])
        dn = npr[i] - (npr[i] @ q3[i]) * q3[i]
        tau[i] = dn @ b
        binormal[i] = b
    idx = np.arange(6, len(ss) - 6)
    return {
        "index": idx,
        "s": ss[idx],
        "position": q3,
        "tangent": t3,
        "normal": n3,
        "binormal": binormal,
        "kappa": kappa3,
        "tau": tau,
    }


def generalized_helix_pairing(positions, tangents):
    """<c', X~_1(c)> per sample; constant iff the curve is a generalized helix."""
    return np.array([t @ qmul(c, X1) for c, t in zip(positions, tangents)])


# ---------------------------------------------------------------------------
# Helical cylinders f(s, t) = gamma(t) * c(s)
# ---------------------------------------------------------------------------

def helical_cylinder_immersion(params, domain=None, compose_phi=False):
    """Immersion (s, t) -> gamma(t) * c(s) per the helical-cylinder definition.

    c is the helix with k = -2/b (requires ab < 0); gamma is the geodesic
    through the identity in the direction of the principal normal of c at
    s = 0, which lies in the osculating plane and differs from c'(0).
    """
    p = {"a": 0.6, "b": -0.8, "s0": 0.0}
    p.update(params or {})
    hp = HelixParams(a=float(p["a"]), b=float(p["b"]), s0=float(p["s0"]))
    if hp.a * hp.b >= 0.0:
        raise Sphere3Error("helical cylinder requires ab < 0")
    dom = tuple(map(tuple, domain or ((-0.7, 0.7), (-1.5, 1.5))))
    (s_lo, s_hi), _ = dom
    integ = HelixIntegrator(hp, min(s_lo, 0.0), max(s_hi, 0.0))

    # gamma'(0) = principal normal of c at 0 (in the osculating plane).
    fp0 = hp.f_prime(0.0)
    nf0 = fp0 / np.linalg.norm(fp0)
    w_gamma = np.array([0.0, *nf0])

    phi_mat = np.eye(4)[[0, 1, 3, 2]] if compose_phi else None

    def chart_jet(u, v):
        c = integ.position(u)
        f = hp.f(u)
        w = np.array([0.0, *f])
        wp = np.array([0.0, *hp.f_prime(u)])
        cp = qmul(c, w)
        cpp = qmul(c, qmul(w, w) + wp)
        g = math.cos(v) * np.array([1.0, 0.0, 0.0, 0.0]) + math.sin(v) * w_gamma
        gp = -math.sin(v) * np.array([1.0, 0.0, 0.0, 0.0]) + math.cos(v) * w_gamma
        jet = Jet2(point=qmul(g, c), xu=qmul(g, cp), xv=qmul(gp, c),
                   xuu=qmul(g, cpp), xuv=qmul(gp, cp), xvv=-qmul(g, c))
        if phi_mat is not None:
            jet = Jet2(point=phi_mat @ jet.point, xu=phi_mat @ jet.xu,
                       xv=phi_mat @ jet.xv, xuu=phi_mat @ jet.xuu,
                       xuv=phi_mat @ jet.xuv, xvv=phi_mat @ jet.xvv)
        return jet

    name = "helical-cylinder-phi" if compose_phi else "helical-cylinder"
    return Immersion(name=name, ambient_dim=4, domain=dom, chart_jet=chart_jet,
                     params=dict(a=hp.a, b=hp.b, s0=hp.s0),
                     period_loops={}, convention="J1" if compose_phi else "J1m")


def surface_normal_in_sphere(imm, u, v):
    """Positive unit normal of the surface within S^3 (for spherical charts)."""
    jet = imm.jet(u, v)
    q = jet.point / np.linalg.norm(jet.point)
    xu = jet.xu - (jet.xu @ q) * q
    xv = jet.xv - (jet.xv @ q) * q
    e1 = xu / np.linalg.norm(xu)
    w = xv - (xv @ e1) * e1
    e2 = w / np.linalg.norm(w)
    return sphere_cross(q, e1, e2), q


# ---------------------------------------------------------------------------
# Flat ruled generators: cylinder, cone, tangent developable
# ---------------------------------------------------------------------------

def ruled_generators(kind, params=None, domain=None):
    """Parametrized flat ruled surfaces whose slantness the Gauss-map detector confirms.

    cylinder: {c(s) + t e4} over a circular helix in span{e1,e2,e3} with
    axis e3 = -J1 e4 and pitch angle beta.  cone: {t c(s)} over a circle
    of angular radius chi on the unit sphere of that hyperplane.
    tangent_developable: {c(s) + t c'(s)} over a circular helix (radius
    r, pitch), reparametrized so the chart domain is a rectangle away
    from the singular edge.
    """
    p = dict(params or {})
    if kind == "cylinder":
        beta = float(p.get("beta", 0.9272952180016122))
        r = float(p.get("r", 1.0))
        sb = math.sin(beta)
        if not (0.0 < beta < math.pi / 2.0):
            raise Sphere3Error("cylinder pitch angle beta must be in (0, pi/2)")
        omega = sb / r
        cb = math.cos(beta)
        dom = tuple(map(tuple, domain or ((0.0, 2.0 * math.pi), (-1.0, 1.0))))

        def chart_jet(u, v):
            cw, sw = math.cos(omega * u), math.sin(omega * u)
            return Jet2(
                point=np.array([r * cw, r * sw, cb * u, v]),
                xu=np.array([-sb * sw, sb * cw, cb, 0.0]),
                xv=np.array([0.0, 0.0, 0.0, 1.0]),
                xuu=np.array([-sb * omega * cw, -sb * omega * sw, 0.0, 0.0]),
                xuv=np.zeros(4), xvv=np.zeros(4))

        return Immersion(name="cylinder", ambient_dim=4, domain=dom,
                         chart_jet=chart_jet, params={"beta": beta, "r": r},
                         convention="J1")

    if kind == "cone":
        chi = float(p.get("chi", 0.6))
        if not (0.0 < chi < math.pi / 2.0):
            raise Sphere3Error("cone half-angle chi must be in (0, pi/2)")
        sc, cc = math.sin(chi), math.cos(chi)
        psi = 1.0 / sc
        dom = tuple(map(tuple, domain or ((0.0, 2.0 * math.pi), (0.5, 2.0))))

        def chart_jet(u, v):
            cw, sw = math.cos(psi * u), math.sin(psi * u)
            c = np.array([sc * cw, sc * sw, cc, 0.0])
            cp = np.array([-sw, cw, 0.0, 0.0])
            cpp = psi * np.array([-cw, -sw, 0.0, 0.0])
            return Jet2(point=v * c, xu=v * cp, xv=c, xuu=v * cpp,
                        xuv=cp, xvv=np.zeros(4))

        return Immersion(name="cone", ambient_dim=4, domain=dom,
                         chart_jet=chart_jet, params={"chi": chi},
                         convention="J1")

    if kind == "tangent_developable":
        r = float(p.get("r", 1.0))
        pitch = float(p.get("pitch", 0.5))
        if r <= 0.0:
            raise Sphere3Error("tangent developable needs r > 0 (kappa != 0)")
        omega = 1.0 / math.sqrt(r * r + pitch * pitch)
        dom = tuple(map(tuple, domain or ((0.0, 2.0 * math.pi), (0.3, 1.5))))

        def c_jets(s):
            cw, sw = math.cos(omega * s), math.sin(omega * s)
            c = np.array([r * cw, r * sw, pitch * omega * s, 0.0])
            c1 = np.array([-r * omega * sw, r * omega * cw, pitch * omega, 0.0])
            c2 = np.array([-r * omega ** 2 * cw, -r * omega ** 2 * sw, 0.0, 0.0])
            c3 = np.array([r * omega ** 3 * sw, -r * omega ** 3 * cw, 0.0, 0.0])
            return c, c1, c2, c3

        def chart_jet(u, v):
            c, c1, c2, c3 = c_jets(u)
            return Jet2(point=c + v * c1, xu=c1 + v * c2, xv=c1,
                        xuu=c2 + v * c3, xuv=c2, xvv=np.zeros(4))

        return Immersion(name="tandev", ambient_dim=4, domain=dom,
                         chart_jet=chart_jet, params={"r": r, "pitch": pitch},
                         convention="J1")

    raise Sphere3Error(f"unknown ruled generator kind {kind!r}")
