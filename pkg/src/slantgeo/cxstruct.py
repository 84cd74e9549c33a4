"""Compatible complex structures on E^4 and their zeta 2-vectors.

A compatible J is an orthogonal 4x4 matrix with J^2 = -I.  Its Kaehler
form Omega_J(X, Y) = <X, JY> dualizes to the 2-vector zeta_J with
<zeta_J, X^Y> = -Omega_J(X, Y); zeta_J has norm sqrt2 and lies entirely
in one eigenspace of the Hodge star.  That eigenspace (not a hand-chosen
basis orientation) defines the orientation class here: under this rule
the interleaved J1 is in class plus and the block-convention J0 is in
class minus.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from . import exterior
from .exterior import OrientedPlane

MATRIX_TOL = 1e-12
ZETA_TOL = 1e-9


class StructureError(ValueError):
    pass


@dataclass(frozen=True)
class ComplexStructure:
    matrix: np.ndarray
    zeta: np.ndarray
    orientation_class: str  # "plus" | "minus"
    name: str = ""

    def apply(self, x):
        return self.matrix @ np.asarray(x, dtype=float)

    def negated(self):
        nm = self.name[1:] if self.name.startswith("-") else ("-" + self.name if self.name else "")
        return ComplexStructure(-self.matrix, -self.zeta, self.orientation_class, nm)


def _classify_zeta(zeta, tol=ZETA_TOL):
    plus, minus = exterior.project_pm(zeta)
    np_, nm = np.linalg.norm(plus), np.linalg.norm(minus)
    if np_ > tol and nm > tol:
        raise StructureError(f"zeta is of mixed type (|plus|={np_:.3g}, |minus|={nm:.3g})")
    return "plus" if np_ >= nm else "minus"


def from_matrix(J, name="", tol=MATRIX_TOL):
    """Validate J and package it with its zeta and orientation class."""
    J = np.asarray(J, dtype=float)
    if J.shape != (4, 4):
        raise StructureError("J must be 4x4")
    if np.max(np.abs(J @ J + np.eye(4))) > tol:
        raise StructureError("J^2 != -I")
    if np.max(np.abs(J.T @ J - np.eye(4))) > tol:
        raise StructureError("J is not orthogonal")
    zeta = zeta_of(J)
    return ComplexStructure(matrix=J, zeta=zeta, orientation_class=_classify_zeta(zeta), name=name)


def zeta_of(J):
    """zeta coordinates (zeta)_{ij} = -<e_i, J e_j> over the fixed pair order."""
    if isinstance(J, ComplexStructure):
        J = J.matrix
    J = np.asarray(J, dtype=float)
    return np.array([-J[i, j] for (i, j) in exterior.PAIRS])


def structure_from_zeta(zeta, name=""):
    """Inverse of zeta_of on the two radius-sqrt2 spheres.

    Rejects mixed-type or wrong-norm input (upstream circle fits that did
    not land on a pure eigenspace must not silently produce a J).
    """
    zeta = np.asarray(zeta, dtype=float)
    n = np.linalg.norm(zeta)
    if abs(n - math.sqrt(2.0)) > ZETA_TOL:
        raise StructureError(f"|zeta| = {n:.12g}, expected sqrt(2)")
    cls = _classify_zeta(zeta)
    J = np.zeros((4, 4))
    for k, (i, j) in enumerate(exterior.PAIRS):
        J[i, j] = -zeta[k]
        J[j, i] = zeta[k]
    if np.max(np.abs(J @ J + np.eye(4))) > 1e-8:
        raise StructureError("zeta does not induce a complex structure")
    return ComplexStructure(matrix=J, zeta=zeta.copy(), orientation_class=cls, name=name)


# ---------------------------------------------------------------------------
# Named catalog
# ---------------------------------------------------------------------------

def _j0_matrix():
    return exterior.j0_block_matrix(4)


def _j1_matrix():
    # (a,b,c,d) -> (-b, a, -d, c)
    return np.array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]], dtype=float)


def _j1m_matrix():
    # (a,b,c,d) -> (-b, a, d, -c)
    return np.array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]], dtype=float)


def _j2_matrix():
    # (a,b,c,d) -> (b, -a, -d, c)
    return np.array([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]], dtype=float)


def jalpha(alpha):
    """One-parameter family J_alpha = cos(alpha) J0 + sin(alpha) J1m (all in class minus)."""
    J = math.cos(alpha) * _j0_matrix() + math.sin(alpha) * _j1m_matrix()
    return from_matrix(J, name=f"Jalpha:{alpha:.12g}")


def standard_structures():
    out = {}
    for name, M in (("J0", _j0_matrix()), ("J1", _j1_matrix()),
                    ("J1m", _j1m_matrix()), ("J2", _j2_matrix())):
        cs = from_matrix(M, name=name)
        out[name] = cs
        out["-" + name] = cs.negated()
    return out


_JALPHA_RE = re.compile(r"^Jalpha:(-?[0-9.eE+]+)$")


def by_name(name):
    """Resolve a structure id: J0, J1, J1m, J2, their -variants, Jalpha:<radians>."""
    cat = standard_structures()
    if name in cat:
        return cat[name]
    m = _JALPHA_RE.match(name)
    if m:
        return jalpha(float(m.group(1)))
    if name.startswith("-"):
        m = _JALPHA_RE.match(name[1:])
        if m:
            return jalpha(float(m.group(1))).negated()
    raise StructureError(f"unknown complex structure id: {name!r}")


# ---------------------------------------------------------------------------
# Angles
# ---------------------------------------------------------------------------

def alpha_of_plane(J, plane):
    """Angle alpha_J(V) in [0, pi]: the angle of pi_pm(V) against zeta_J.

    Equals arccos <J e1, e2> = arccos <zeta_J, V>, but evaluated with
    atan2 in the 3-coordinate eigenspace of J's class, which stays
    accurate at the holomorphic (0) and anti-holomorphic (pi) ends where
    arccos loses half the working precision.
    """
    if not isinstance(J, ComplexStructure):
        J = from_matrix(J)
    pl = plane.plucker if isinstance(plane, OrientedPlane) else np.asarray(plane, dtype=float)
    n = np.linalg.norm(pl)
    if n == 0.0:
        raise StructureError("degenerate plane")
    pl = pl / n
    if J.orientation_class == "plus":
        z3 = exterior.plus_coords(J.zeta)
        p3 = exterior.plus_coords(pl)
    else:
        z3 = exterior.minus_coords(J.zeta)
        p3 = exterior.minus_coords(pl)
    z3 = z3 / math.sqrt(2.0)
    p3 = p3 * math.sqrt(2.0)  # pi_pm of a unit decomposable has norm 1/sqrt2
    return math.atan2(float(np.linalg.norm(np.cross(p3, z3))), float(p3 @ z3))


def wirtinger_of_plane(J, plane):
    a = alpha_of_plane(J, plane)
    return min(a, math.pi - a)


def j_v_plus_minus(plane):
    """The two structures making the oriented plane holomorphic (one per class)."""
    pl = plane.plucker if isinstance(plane, OrientedPlane) else np.asarray(plane, dtype=float)
    plus, minus = exterior.project_pm(pl)
    # pi_pm(V) has norm 1/sqrt2; the zeta spheres have radius sqrt2.
    jp = structure_from_zeta(2.0 * plus, name="J_V+")
    jm = structure_from_zeta(2.0 * minus, name="J_V-")
    return jp, jm


# ---------------------------------------------------------------------------
# Higher-dimensional constructions for the E^{4m} fixtures
# ---------------------------------------------------------------------------

def j1m_block_matrix(four_m):
    """J1m on E^{4m} per the pairwise-interleaved convention (m even in E^{2m} terms).

    (a1..am, b1..bm) -> (-a2, a1, ..., -am, a_{m-1}, b2, -b1, ..., bm, -b_{m-1}).
    """
    if four_m % 4 != 0:
        raise StructureError("dimension must be a multiple of 4")
    m = four_m // 2
    J = np.zeros((four_m, four_m))
    for i in range(0, m, 2):
        J[i, i + 1] = -1.0
        J[i + 1, i] = 1.0
        J[m + i, m + i + 1] = 1.0
        J[m + i + 1, m + i] = -1.0
    return J


def jalpha_block_matrix(alpha, four_m):
    J = math.cos(alpha) * exterior.j0_block_matrix(four_m) + math.sin(alpha) * j1m_block_matrix(four_m)
    if np.max(np.abs(J @ J + np.eye(four_m))) > 1e-12:
        raise StructureError("J_alpha construction failed")
    return J
