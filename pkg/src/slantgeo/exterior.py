"""Exterior algebra of E^4 and a small dense Lambda^{2k}E^{2m} facility.

2-vectors are stored as 6 coordinates over the ordered basis
e_i ^ e_j, i < j, with index order (12, 13, 14, 23, 24, 34).  The inner
product makes this basis orthonormal (it is the Gram-determinant pairing
<x1^x2, y1^y2> = det <x_i, y_j>).  The Hodge star splits Lambda^2 into
self-dual and anti-self-dual 3-planes; eta_1..eta_3 and eta_4..eta_6 are
the canonical orthonormal bases of the two eigenspaces.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

# Ordered index pairs for the Lambda^2 E^4 basis.
PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
PAIR_INDEX = {p: k for k, p in enumerate(PAIRS)}

# Hodge star in the pair basis: *(e12)=e34, *(e13)=-e24, *(e14)=e23.
STAR = np.zeros((6, 6))
STAR[0, 5] = STAR[5, 0] = 1.0
STAR[1, 4] = STAR[4, 1] = -1.0
STAR[2, 3] = STAR[3, 2] = 1.0

_S = 1.0 / math.sqrt(2.0)
# Rows are eta_1..eta_6 expressed in the pair basis.
ETA = np.array([
    [_S, 0, 0, 0, 0, _S],    # eta1 = (e12 + e34)/sqrt2
    [0, _S, 0, 0, -_S, 0],   # eta2 = (e13 - e24)/sqrt2
    [0, 0, _S, _S, 0, 0],    # eta3 = (e14 + e23)/sqrt2
    [_S, 0, 0, 0, 0, -_S],   # eta4 = (e12 - e34)/sqrt2
    [0, _S, 0, 0, _S, 0],    # eta5 = (e13 + e24)/sqrt2
    [0, 0, _S, -_S, 0, 0],   # eta6 = (e14 - e23)/sqrt2
])
ETA_PLUS = ETA[:3]
ETA_MINUS = ETA[3:]

DECOMPOSABLE_TOL = 1e-9


def wedge2(x, y):
    """Wedge of two E^4 vectors as a 6-coordinate 2-vector."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = np.empty(6)
    for k, (i, j) in enumerate(PAIRS):
        out[k] = x[i] * y[j] - x[j] * y[i]
    return out


def hodge_star(xi):
    return STAR @ np.asarray(xi, dtype=float)


def project_pm(xi):
    """Self-dual and anti-self-dual parts (each returned in full 6 coords)."""
    xi = np.asarray(xi, dtype=float)
    s = STAR @ xi
    return 0.5 * (xi + s), 0.5 * (xi - s)


def plus_coords(xi):
    """Coordinates of the self-dual part in the eta_1..eta_3 basis."""
    return ETA_PLUS @ np.asarray(xi, dtype=float)


def minus_coords(xi):
    """Coordinates of the anti-self-dual part in the eta_4..eta_6 basis."""
    return ETA_MINUS @ np.asarray(xi, dtype=float)


def from_plus_coords(c):
    return ETA_PLUS.T @ np.asarray(c, dtype=float)


def from_minus_coords(c):
    return ETA_MINUS.T @ np.asarray(c, dtype=float)


def star_pairing(xi):
    """<*xi, xi>, which vanishes exactly on decomposable 2-vectors."""
    xi = np.asarray(xi, dtype=float)
    return float((STAR @ xi) @ xi)


def is_decomposable(xi, tol=DECOMPOSABLE_TOL):
    xi = np.asarray(xi, dtype=float)
    n2 = float(xi @ xi)
    if n2 == 0.0:
        return True
    return abs(star_pairing(xi)) <= tol * n2


def skew_matrix_of(xi):
    """The skew 4x4 matrix A with A[i,j] = xi_{ij} (i<j)."""
    A = np.zeros((4, 4))
    for k, (i, j) in enumerate(PAIRS):
        A[i, j] = xi[k]
        A[j, i] = -xi[k]
    return A


@dataclass(frozen=True)
class OrientedPlane:
    """Oriented 2-plane in E^4: positively ordered orthonormal basis + Plucker image."""

    basis: tuple
    plucker: np.ndarray

    @classmethod
    def from_vectors(cls, x, y, tol=1e-12):
        """Gram-Schmidt the (ordered, independent) pair; orientation follows input order."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        nx = np.linalg.norm(x)
        if nx < tol:
            raise ValueError("degenerate first basis vector")
        e1 = x / nx
        y2 = y - (y @ e1) * e1
        ny = np.linalg.norm(y2)
        if ny < tol:
            raise ValueError("basis vectors are collinear")
        e2 = y2 / ny
        return cls(basis=(e1, e2), plucker=wedge2(e1, e2))

    @classmethod
    def from_twovector(cls, xi, tol=1e-9):
        """Factor a unit decomposable 2-vector into an oriented orthonormal basis."""
        xi = np.asarray(xi, dtype=float)
        if abs(np.linalg.norm(xi) - 1.0) > 1e-6:
            raise ValueError("expected a unit 2-vector")
        if not is_decomposable(xi, tol):
            raise ValueError("2-vector is not decomposable")
        A = skew_matrix_of(xi)
        # -A^2 is the orthogonal projector onto the plane carried by xi.
        P = -A @ A
        k = int(np.argmax(np.diag(P)))
        e1 = P[:, k]
        e1 = e1 / np.linalg.norm(e1)
        e2 = -A @ e1
        pl = wedge2(e1, e2)
        if pl @ xi < 0:
            e2 = -e2
            pl = -pl
        return cls(basis=(e1, e2), plucker=pl)

    def reversed(self):
        e1, e2 = self.basis
        return OrientedPlane(basis=(e2, e1), plucker=-self.plucker)


# ---------------------------------------------------------------------------
# Dense Lambda^{2k} E^{2m} (2m <= 8, k <= 2) and Kaehler-form power pairings.
# ---------------------------------------------------------------------------

def _basis_tuples(two_m, two_k):
    return list(itertools.combinations(range(two_m), two_k))


@dataclass(frozen=True)
class MultiVector2k:
    """Dense multivector of degree 2k on E^{2m} (2m <= 8, k <= 2)."""

    dim: int
    degree: int
    coords: np.ndarray

    def __post_init__(self):
        if self.dim > 8 or self.degree > 4:
            raise ValueError("supported sizes: 2m <= 8, 2k <= 4")
        n = math.comb(self.dim, self.degree)
        if len(self.coords) != n:
            raise ValueError(f"expected {n} coordinates, got {len(self.coords)}")

    @classmethod
    def from_wedge(cls, vectors):
        """Wedge of 2k vectors in E^{2m}; coordinate I is det of the I-rows submatrix."""
        M = np.asarray(vectors, dtype=float)  # rows are vectors
        two_k, two_m = M.shape
        idx = _basis_tuples(two_m, two_k)
        coords = np.array([np.linalg.det(M[:, list(I)]) for I in idx])
        return cls(dim=two_m, degree=two_k, coords=coords)

    def norm(self):
        return float(np.linalg.norm(self.coords))

    def unit(self):
        return MultiVector2k(self.dim, self.degree, self.coords / self.norm())


def j0_block_matrix(two_m):
    """Block convention J0 on E^{2m}: (a, b) -> (-b, a)."""
    m = two_m // 2
    J = np.zeros((two_m, two_m))
    J[:m, m:] = -np.eye(m)
    J[m:, :m] = np.eye(m)
    return J


def omega_power_pairing(omega, vectors):
    """Omega^k evaluated on the wedge of 2k vectors via the signed permutation sum.

    omega is the matrix of a skew bilinear form (Omega(X, Y) = X^T omega Y);
    the value is (1/(2k)!) sum_sigma sign(sigma) prod Omega(X_s(2i-1), X_s(2i)).
    """
    omega = np.asarray(omega, dtype=float)
    vs = [np.asarray(v, dtype=float) for v in vectors]
    two_k = len(vs)
    if two_k % 2 != 0 or two_k > 4:
        raise ValueError("need 2k vectors with k <= 2")
    if len(vs[0]) > 8:
        raise ValueError("vector dimension 2m <= 8 required")
    G = np.array([[vi @ omega @ vj for vj in vs] for vi in vs])
    total = 0.0
    for sigma in itertools.permutations(range(two_k)):
        sign = _perm_sign(sigma)
        prod = 1.0
        for i in range(0, two_k, 2):
            prod *= G[sigma[i], sigma[i + 1]]
        total += sign * prod
    return total / math.factorial(two_k)


def _perm_sign(sigma):
    sign = 1
    n = len(sigma)
    for i in range(n):
        for j in range(i + 1, n):
            if sigma[i] > sigma[j]:
                sign = -sign
    return sign


def zeta_hat_pairing(V: MultiVector2k):
    """<zeta_hat_0, V> = (-1)^k Omega_0^k(V) with the block J0 Kaehler form on E^{2m}.

    On alpha-slant 2k-planes this equals mu_k cos^k(alpha), mu_k = 2^k k!/(2k)!.
    """
    k = V.degree // 2
    omega = j0_block_matrix(V.dim)
    idx = _basis_tuples(V.dim, V.degree)
    eye = np.eye(V.dim)
    total = 0.0
    for c, I in zip(V.coords, idx):
        if c == 0.0:
            continue
        total += c * omega_power_pairing(omega, [eye[i] for i in I])
    return ((-1) ** k) * total


def mu_constant(k):
    """mu_k = 2^k k! / (2k)!"""
    return (2.0 ** k) * math.factorial(k) / math.factorial(2 * k)
