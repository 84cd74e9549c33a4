"""Catalog of fixture surfaces with closed-form 2-jets.

Each entry records the complex-structure id under which its slant angle
was numerically confirmed ("convention"), because the same chart can be
slant for one pairing convention of coordinates and not for another.
Period loops (for holonomy/loop integrals) are declared per entry.

Higher-dimensional fixtures (Kaehlerian slant submanifolds of C^4) are
exposed as tangent-basis constructors rather than surface charts; only
pairing checks run on them.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .exterior import j0_block_matrix
from .jets import Immersion, Jet2, immersion_from_components

TWO_PI = 2.0 * math.pi


class CatalogError(KeyError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    description: str
    factory: object
    defaults: dict = field(default_factory=dict)
    default_domain: tuple = ((0.0, 1.0), (0.0, 1.0))
    convention: str = ""
    period_loops: dict = field(default_factory=dict)
    surface: bool = True
    notes: str = ""


def _entry(name, description, jetfn, defaults, domain, convention="",
           period_loops=None, notes=""):
    def factory(params=None, domain_override=None):
        p = dict(defaults)
        if params:
            unknown = set(params) - set(defaults)
            if unknown:
                raise CatalogError(f"{name}: unknown parameter(s) {sorted(unknown)}")
            p.update(params)
        dom = tuple(map(tuple, domain_override or domain))
        return Immersion(
            name=name, ambient_dim=4, domain=dom,
            chart_jet=lambda u, v: jetfn(u, v, p), params=p,
            period_loops=dict(period_loops or {}), convention=convention,
            notes=notes,
        )
    return CatalogEntry(name=name, description=description, factory=factory,
                        defaults=defaults, default_domain=domain,
                        convention=convention, period_loops=period_loops or {},
                        notes=notes)


# --- closed-form jets -------------------------------------------------------

def _jet_ex21(u, v, p):
    ca, sa = math.cos(p["alpha"]), math.sin(p["alpha"])
    z = np.zeros(4)
    return Jet2(point=np.array([u * ca, v, u * sa, 0.0]),
                xu=np.array([ca, 0.0, sa, 0.0]),
                xv=np.array([0.0, 1.0, 0.0, 0.0]),
                xuu=z, xuv=z, xvv=z)


def _jet_ex22(u, v, p):
    return Jet2(point=np.array([u, 0.5 * (u * u - v * v), v, u * v]),
                xu=np.array([1.0, u, 0.0, v]),
                xv=np.array([0.0, -v, 1.0, u]),
                xuu=np.array([0.0, 1.0, 0.0, 0.0]),
                xuv=np.array([0.0, 0.0, 0.0, 1.0]),
                xvv=np.array([0.0, -1.0, 0.0, 0.0]))


def _jet_ex23(u, v, p):
    k = p["k"]
    E = math.exp(k * u)
    cu, su, cv, sv = math.cos(u), math.sin(u), math.cos(v), math.sin(v)
    A = k * cu - su
    B = k * su + cu
    point = E * np.array([cu * cv, su * cv, cu * sv, su * sv])
    xu = E * np.array([A * cv, B * cv, A * sv, B * sv])
    xuu = E * np.array([(k * A - B) * cv, (k * B + A) * cv,
                        (k * A - B) * sv, (k * B + A) * sv])
    xv = E * np.array([-cu * sv, -su * sv, cu * cv, su * cv])
    xuv = E * np.array([-A * sv, -B * sv, A * cv, B * cv])
    return Jet2(point=point, xu=xu, xv=xv, xuu=xuu, xuv=xuv, xvv=-point)


def _jet_ex24(u, v, p):
    k = p["k"]
    cv, sv = math.cos(v), math.sin(v)
    z = np.zeros(4)
    return Jet2(point=np.array([u, k * cv, v, k * sv]),
                xu=np.array([1.0, 0.0, 0.0, 0.0]),
                xv=np.array([0.0, -k * sv, 1.0, k * cv]),
                xuu=z, xuv=z,
                xvv=np.array([0.0, -k * cv, 0.0, -k * sv]))


def _jet_ex25(u, v, p):
    k = p["k"]
    cu, su, cv, sv = math.cos(u), math.sin(u), math.cos(v), math.sin(v)
    return Jet2(point=np.array([-k * v * su, cv, k * v * cu, sv]),
                xu=np.array([-k * v * cu, 0.0, -k * v * su, 0.0]),
                xv=np.array([-k * su, -sv, k * cu, cv]),
                xuu=np.array([k * v * su, 0.0, -k * v * cu, 0.0]),
                xuv=np.array([-k * cu, 0.0, -k * su, 0.0]),
                xvv=np.array([0.0, -cv, 0.0, -sv]))


def _jet_ex26(u, v, p):
    pp, q = p["p"], p["q"]
    cu, su = math.cos(u), math.sin(u)
    cq, sq = math.cos(q * u), math.sin(q * u)
    return Jet2(point=np.array([pp * v * su, pp * v * cu, v * sq, v * cq]),
                xu=np.array([pp * v * cu, -pp * v * su, q * v * cq, -q * v * sq]),
                xv=np.array([pp * su, pp * cu, sq, cq]),
                xuu=np.array([-pp * v * su, -pp * v * cu,
                              -q * q * v * sq, -q * q * v * cq]),
                xuv=np.array([pp * cu, -pp * su, q * cq, -q * sq]),
                xvv=np.zeros(4))


def _jet_ex28(u, v, p):
    E = math.exp(u)
    cv, sv = math.cos(v), math.sin(v)
    return Jet2(point=np.array([u, E * cv, v, E * sv]),
                xu=np.array([1.0, E * cv, 0.0, E * sv]),
                xv=np.array([0.0, -E * sv, 1.0, E * cv]),
                xuu=np.array([0.0, E * cv, 0.0, E * sv]),
                xuv=np.array([0.0, -E * sv, 0.0, E * cv]),
                xvv=np.array([0.0, -E * cv, 0.0, -E * sv]))


def _jet_whitney(u, v, p):
    cu, su, cv, sv = math.cos(u), math.sin(u), math.cos(v), math.sin(v)
    S, C = math.sin(2 * v), math.cos(2 * v)
    return Jet2(point=np.array([cv * cu, cv * su, S * cu, S * su]),
                xu=np.array([-cv * su, cv * cu, -S * su, S * cu]),
                xv=np.array([-sv * cu, -sv * su, 2 * C * cu, 2 * C * su]),
                xuu=np.array([-cv * cu, -cv * su, -S * cu, -S * su]),
                xuv=np.array([sv * su, -sv * cu, -2 * C * su, 2 * C * cu]),
                xvv=np.array([-cv * cu, -cv * su, -4 * S * cu, -4 * S * su]))


def _jet_ex32(u, v, p):
    k = p["k"]
    cv, sv = math.cos(v), math.sin(v)
    z = np.zeros(4)
    return Jet2(point=np.array([u, v, k * cv, k * sv]),
                xu=np.array([1.0, 0.0, 0.0, 0.0]),
                xv=np.array([0.0, 1.0, -k * sv, k * cv]),
                xuu=z, xuv=z,
                xvv=np.array([0.0, 0.0, -k * cv, -k * sv]))


def _jet_sphere(u, v, p):
    r = p["r"]
    cu, su, cv, sv = math.cos(u), math.sin(u), math.cos(v), math.sin(v)
    return Jet2(point=r * np.array([cu * cv, su * cv, sv, 0.0]),
                xu=r * np.array([-su * cv, cu * cv, 0.0, 0.0]),
                xv=r * np.array([-cu * sv, -su * sv, cv, 0.0]),
                xuu=r * np.array([-cu * cv, -su * cv, 0.0, 0.0]),
                xuv=r * np.array([su * sv, -cu * sv, 0.0, 0.0]),
                xvv=r * np.array([-cu * cv, -su * cv, -sv, 0.0]))


def _jet_catenoid(u, v, p):
    ch, sh = math.cosh(u), math.sinh(u)
    cv, sv = math.cos(v), math.sin(v)
    return Jet2(point=np.array([ch * cv, ch * sv, u, 0.0]),
                xu=np.array([sh * cv, sh * sv, 1.0, 0.0]),
                xv=np.array([-ch * sv, ch * cv, 0.0, 0.0]),
                xuu=np.array([ch * cv, ch * sv, 0.0, 0.0]),
                xuv=np.array([-sh * sv, sh * cv, 0.0, 0.0]),
                xvv=np.array([-ch * cv, -ch * sv, 0.0, 0.0]))


def _jet_torus(u, v, p):
    s = 1.0 / math.sqrt(2.0)
    cu, su, cv, sv = math.cos(u), math.sin(u), math.cos(v), math.sin(v)
    z = np.zeros(4)
    return Jet2(point=s * np.array([cu, su, cv, sv]),
                xu=s * np.array([-su, cu, 0.0, 0.0]),
                xv=s * np.array([0.0, 0.0, -sv, cv]),
                xuu=s * np.array([-cu, -su, 0.0, 0.0]),
                xuv=z,
                xvv=s * np.array([0.0, 0.0, -cv, -sv]))


# --- registry ---------------------------------------------------------------

_V_LOOP = {"period-v": {"var": "v", "period": TWO_PI}}
_U_LOOP = {"period-u": {"var": "u", "period": TWO_PI}}

_ENTRIES = {}


def _register(entry):
    _ENTRIES[entry.name] = entry


_register(_entry(
    "ex2.1", "slant plane, angle alpha (printed 5-component chart corrected to 4)",
    _jet_ex21, {"alpha": math.pi / 4}, ((-1.0, 1.0), (-1.0, 1.0)), convention="J1",
    notes="angle verified numerically under J1"))
_register(_entry(
    "ex2.2", "complex curve w = z^2/2 under block J0; slant w.r.t. Jalpha family",
    _jet_ex22, {}, ((-1.0, 1.0), (-1.0, 1.0)), convention="Jalpha:0.7853981633974483"))
_register(_entry(
    "ex2.3", "logarithmic-spiral cone over the Clifford direction (GVV), slant angle acos(k/sqrt(1+k^2))",
    _jet_ex23, {"k": 1.0}, ((0.0, 1.0), (0.0, TWO_PI)), convention="J0",
    period_loops=_V_LOOP))
_register(_entry(
    "ex2.4", "line x circular helix product, slant angle acos(1/sqrt(1+k^2)), |H| = k/(2(1+k^2))",
    _jet_ex24, {"k": 1.0}, ((0.0, 1.0), (0.0, TWO_PI)), convention="J0",
    period_loops=_V_LOOP))
_register(_entry(
    "ex2.5", "cone over a plane circle, slant cosine k/sqrt(1+k^2)",
    _jet_ex25, {"k": 1.0}, ((0.0, TWO_PI), (0.5, 2.0)), convention="J0",
    period_loops=_U_LOOP,
    notes="printed slant value is the cosine of the Wirtinger angle; verified under J0"))
_register(_entry(
    "ex2.6", "double spiral surface, slant w.r.t. J1 with cos = (p^2+q)/sqrt((p^2+q^2)(p^2+1))",
    _jet_ex26, {"p": 1.0, "q": 1.0}, ((0.0, TWO_PI), (0.5, 2.0)), convention="J1",
    period_loops=_U_LOOP,
    notes="slant under the interleaved convention J1, not block J0 (measured)"))
_register(_entry(
    "ex2.8", "complex curve w = exp(z) under block J0; Kaehlerian slant w.r.t. Jalpha",
    _jet_ex28, {}, ((-1.0, 1.0), (-1.0, 1.0)), convention="Jalpha:0.7853981633974483"))
_register(_entry(
    "ex3.1-whitney", "Whitney sphere patch (totally real w.r.t. exactly two structures)",
    _jet_whitney, {}, ((0.2, 1.2), (0.15, 0.75))))
_register(_entry(
    "ex3.2", "line x helix in a hyperplane; slant exactly for +-J1, +-J2",
    _jet_ex32, {"k": 1.0}, ((0.0, 1.0), (0.0, TWO_PI)), convention="J1",
    period_loops=_V_LOOP))
_register(_entry(
    "sphere", "round 2-sphere of radius r in E^3 c E^4 (not slant for any J)",
    _jet_sphere, {"r": 1.0}, ((0.3, 1.2), (-0.5, 0.5))))
_register(_entry(
    "catenoid-e3", "catenoid patch in E^3 c E^4 (minimal, not slant for any J)",
    _jet_catenoid, {}, ((-0.8, 0.8), (0.0, TWO_PI))))
_register(_entry(
    "torus-flat", "Clifford torus in S^3 (mass-symmetric Gauss map fixture)",
    _jet_torus, {}, ((0.0, TWO_PI), (0.0, TWO_PI)),
    period_loops={**_V_LOOP, **_U_LOOP}))


def _register_generators():
    # sphere3 imports jets only; importing it here keeps module import light.
    from . import sphere3

    _register(CatalogEntry(
        name="helical-cylinder",
        description="gamma(t).c(s) for the tau = -1 helix; slant w.r.t. J1m, angle acos(a)",
        factory=lambda params=None, domain_override=None:
            sphere3.helical_cylinder_immersion(params or {}, domain_override),
        defaults={"a": 0.6, "b": -0.8, "s0": 0.0},
        default_domain=((-0.7, 0.7), (-1.5, 1.5)),
        convention="J1m",
        period_loops={},
    ))
    _register(CatalogEntry(
        name="helical-cylinder-phi",
        description="phi-composed helical cylinder; slant w.r.t. J1 with the same angle",
        factory=lambda params=None, domain_override=None:
            sphere3.helical_cylinder_immersion(params or {}, domain_override, compose_phi=True),
        defaults={"a": 0.6, "b": -0.8, "s0": 0.0},
        default_domain=((-0.7, 0.7), (-1.5, 1.5)),
        convention="J1",
        period_loops={},
    ))
    _register(CatalogEntry(
        name="cylinder",
        description="cylinder over a circular helix with axis -J1 e; slant angle beta under J1",
        factory=lambda params=None, domain_override=None:
            sphere3.ruled_generators("cylinder", params or {}, domain_override),
        defaults={"beta": 0.9272952180016122, "r": 1.0},
        default_domain=((0.0, TWO_PI), (-1.0, 1.0)),
        convention="J1",
    ))
    _register(CatalogEntry(
        name="cone",
        description="circular cone of half-angle chi in a hyperplane; proper slant under J1",
        factory=lambda params=None, domain_override=None:
            sphere3.ruled_generators("cone", params or {}, domain_override),
        defaults={"chi": 0.6},
        default_domain=((0.0, TWO_PI), (0.5, 2.0)),
        convention="J1",
    ))
    _register(CatalogEntry(
        name="tandev",
        description="tangent developable of a Euclidean generalized helix; proper slant under J1",
        factory=lambda params=None, domain_override=None:
            sphere3.ruled_generators("tangent_developable", params or {}, domain_override),
        defaults={"r": 1.0, "pitch": 0.5},
        default_domain=((0.0, TWO_PI), (0.3, 1.5)),
        convention="J1",
    ))


_register_generators()


def catalog_ids():
    return sorted(_ENTRIES)


def entry(name):
    if name not in _ENTRIES:
        raise CatalogError(f"unknown catalog id {name!r}; known: {catalog_ids()}")
    return _ENTRIES[name]


def build(name, params=None, domain=None):
    return entry(name).factory(params, domain)


# --- higher-dimensional point fixtures (pairing checks only) ----------------

def ex27_tangent_basis(k=0.5, w=0.3, z=0.7):
    """Tangent 4-plane basis of the C^4 fixture x = (u,v,k sin w,k sin z,kw,kz,k cos w,k cos z).

    The printed slant angle in the source is inconsistent with this chart;
    the measured Wirtinger angle is pi/4 for every k (see notes in tests).
    """
    xu = np.zeros(8); xu[0] = 1.0
    xv = np.zeros(8); xv[1] = 1.0
    xw = np.zeros(8)
    xw[2] = k * math.cos(w); xw[4] = k; xw[6] = -k * math.sin(w)
    xz = np.zeros(8)
    xz[3] = k * math.cos(z); xz[5] = k; xz[7] = -k * math.sin(z)
    return [xu, xv, xw, xz]


def ex28_tangent_basis(z1=0.4 + 0.3j, z2=-0.2 + 0.5j):
    """Tangent 4-plane of the complex surface (z1, z2, z1^2/2, z1 z2) in C^4.

    Returned in J0-aligned order (X1, J0 X1, X2, J0 X2); coordinates are
    (a1..a4, b1..b4) with z_j = a_j + i b_j under the block convention.
    """
    w1_d1, w1_d2 = z1, 0.0
    w2_d1, w2_d2 = z2, z1

    def real_tangent(dz1, dz2):
        dw1 = w1_d1 * dz1 + w1_d2 * dz2
        dw2 = w2_d1 * dz1 + w2_d2 * dz2
        a = [dz1.real, dz2.real, dw1.real, dw2.real]
        b = [dz1.imag, dz2.imag, dw1.imag, dw2.imag]
        return np.array(a + b)

    return [real_tangent(1 + 0j, 0j), real_tangent(1j, 0j),
            real_tangent(0j, 1 + 0j), real_tangent(0j, 1j)]


def slant_plane_basis_4d(alpha):
    """An alpha-slant 2-plane in E^4 w.r.t. block J0: span{e1, cos(a) J0 e1 + sin(a) e2}."""
    J = j0_block_matrix(4)
    e1 = np.array([1.0, 0.0, 0.0, 0.0])
    e2 = np.array([0.0, 1.0, 0.0, 0.0])
    return [e1, math.cos(alpha) * (J @ e1) + math.sin(alpha) * e2]


def slant_plane_basis_8d(alpha):
    """An alpha-slant 4-plane in E^8 w.r.t. block J0 (orthonormal, J-aligned order)."""
    J = j0_block_matrix(8)
    eye = np.eye(8)
    e1, e2, e3, e4 = eye[0], eye[1], eye[2], eye[3]
    return [e1, math.cos(alpha) * (J @ e1) + math.sin(alpha) * e3,
            e2, math.cos(alpha) * (J @ e2) + math.sin(alpha) * e4]


# --- DSL config files -------------------------------------------------------

def load_config(source):
    """Immersion from a config record: name, ambient_dim, components, params, domain."""
    if isinstance(source, (str,)):
        with open(source, "r", encoding="utf-8") as fh:
            record = json.load(fh)
    else:
        record = dict(source)
    for key in ("name", "components", "domain"):
        if key not in record:
            raise CatalogError(f"config record missing field {key!r}")
    components = record["components"]
    params = record.get("params", {})
    dim = record.get("ambient_dim", len(components))
    loops = record.get("period_loops", {})
    return immersion_from_components(
        record["name"], components, params, record["domain"],
        ambient_dim=dim, period_loops=loops,
        convention=record.get("convention", ""),
    )
