"""WK-numbers, the modified spinor connection and its curvature.

For constant scalar curvature S the connection reads

    nabla^lam_X psi = nabla_X psi - lam ((2/S) Ric(X) - X) . psi

and in the invariant frame it is ``e_a(psi) + A_a psi`` with constant
2x2 matrices ``A_a``.  Its curvature on frame pairs is then purely
algebraic: ``Omega(e_a, e_b) = [A_a, A_b] - sum_c c^c_ab A_c``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .clifford import as_spinor, clifford_basis, cross
from .errors import NoRealWK, ScalarFlat, SignUndefined, ZeroLambda
from .space import (
    PAIRS,
    ModuliParams,
    connection_forms,
    nabla_ricci,
    ricci_from_params,
    structure_constants,
    t_endomorphism,
    volume,
)

FLAT_TOL = 1e-9


@dataclass(frozen=True)
class WKNumber:
    lam: float
    sign: int  # orientation sign: +1 if -K < M, -1 if M < -K

    def __float__(self) -> float:
        return float(self.lam)

    def __neg__(self) -> "WKNumber":
        return WKNumber(-self.lam, -self.sign)


Lambda = Union[WKNumber, float]


def _lam(lam: Lambda) -> float:
    return float(lam)


def _require_s(p: ModuliParams) -> float:
    S = ricci_from_params(p).S
    if S == 0.0:
        raise ScalarFlat(f"S = 0 at {p}")
    return S


def wk_number(p: ModuliParams) -> WKNumber:
    """The unique WK-number of N^3(K, L, M), with the orientation sign rule.

    ``lam = sign * S / (2 sqrt 2) * sqrt(S / (S^2 - 2 |Ric|^2))`` where
    sign = +1 for -K < M and -1 for M < -K.
    """
    r = ricci_from_params(p)
    if r.S == 0.0:
        raise ScalarFlat(f"S = 0 at {p}")
    denom = r.S ** 2 - 2.0 * r.ric_norm_sq
    if denom == 0.0 or r.S / denom <= 0.0:
        raise NoRealWK(f"S/(S^2-2|Ric|^2) = {r.S}/{denom} is not positive")
    if p.M == -p.K:
        raise SignUndefined("M = -K")
    sign = 1 if -p.K < p.M else -1
    magnitude = r.S / (2.0 * math.sqrt(2.0)) * math.sqrt(r.S / denom)
    return WKNumber(float(sign * magnitude), sign)


class IntegrabilityResiduals(NamedTuple):
    r1: float
    r2: float               # max over a of |vector condition at e_a|
    r3: tuple[float, float, float]  # per frame pair (e1,e2), (e1,e3), (e2,e3)
    r2_vectors: np.ndarray  # row a is the vector condition at e_a

    def max(self) -> float:
        return max(abs(self.r1), self.r2, *self.r3)


def pair_condition_sides(p: ModuliParams, lam: Lambda, x: int, y: int):
    """Left and right hand sides of the third integrability condition at (e_x, e_y).

    The right hand side sum ``sum_{i<j} (R_{jY} d_{iX} + R_{iX} d_{jY}) e_i x e_j``
    is read with ``R_{kZ} = Ric_{k z}`` and ``d_{kZ} = delta_{k z}`` for Z = e_z.
    """
    lam = _lam(lam)
    r = ricci_from_params(p)
    S, Ric = r.S, r.matrix()
    D = nabla_ricci(p)
    I = np.eye(3)
    X, Y = I[x], I[y]
    lhs = (
        8 * lam ** 2 * cross(2 * Ric @ X - S * X, 2 * Ric @ Y - S * Y)
        + 8 * lam * S * (D[x] @ Y - D[y] @ X)
        + S ** 3 * cross(X, Y)
    )
    rhs = np.zeros(3)
    for i in range(3):
        for j in range(i + 1, 3):
            coeff = Ric[j, y] * (i == x) + Ric[i, x] * (j == y)
            rhs += coeff * cross(I[i], I[j])
    return lhs, 2 * S ** 2 * rhs


def integrability_residuals(p: ModuliParams, lam: Lambda) -> IntegrabilityResiduals:
    lam = _lam(lam)
    r = ricci_from_params(p)
    S = _require_s(p)
    Ric = r.matrix()
    T = t_endomorphism(p)
    r1 = 8 * lam ** 2 * (S ** 2 - 2 * r.ric_norm_sq) - S ** 3
    # columns of the matrices are images of the frame vectors
    r2_mat = 8 * lam ** 2 * (S * Ric - 2 * Ric @ Ric) - 4 * lam * S * T - S ** 2 * Ric
    r2_vectors = r2_mat.T
    r3 = []
    for x, y in PAIRS:
        lhs, rhs = pair_condition_sides(p, lam, x, y)
        r3.append(float(np.linalg.norm(lhs - rhs)))
    return IntegrabilityResiduals(
        float(r1),
        float(np.max(np.linalg.norm(r2_vectors, axis=1))),
        tuple(r3),
        r2_vectors,
    )


@dataclass(frozen=True)
class SpinorConnection:
    A1: np.ndarray
    A2: np.ndarray
    A3: np.ndarray

    @property
    def mats(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.A1, self.A2, self.A3)


def spinor_connection(p: ModuliParams, lam: Lambda) -> SpinorConnection:
    """Connection matrices of nabla^lam in the invariant frame.

    ``A_a = 1/2 sum_{i<j} omega_ij(e_a) E_i E_j - lam (2 R_a / S - 1) E_a``.
    """
    lam = _lam(lam)
    S = _require_s(p)
    R = ricci_from_params(p).diagonal
    E = clifford_basis().E
    w = connection_forms(p)
    mats = []
    for a in range(3):
        spin = sum(0.5 * w[a, i, j] * (E[i] @ E[j]) for i, j in PAIRS)
        mats.append(spin - lam * (2.0 * R[a] / S - 1.0) * E[a])
    return SpinorConnection(*mats)


@dataclass(frozen=True)
class CurvatureReport:
    omega12: np.ndarray
    omega13: np.ndarray
    omega23: np.ndarray
    max_norm: float
    tol: float

    @property
    def flat(self) -> bool:
        return self.max_norm < self.tol


def flatness_tolerance(p: ModuliParams, lam: Lambda, rel: float = FLAT_TOL) -> float:
    return rel * (1.0 + p.norm() ** 2 + _lam(lam) ** 2)


def curvature_omega(p: ModuliParams, lam: Lambda, rel_tol: float = FLAT_TOL) -> CurvatureReport:
    A = spinor_connection(p, lam).mats
    c = structure_constants(p).tensor()
    omegas = [
        A[a] @ A[b] - A[b] @ A[a] - sum(c[a, b, k] * A[k] for k in range(3))
        for a, b in PAIRS
    ]
    max_norm = max(float(np.max(np.abs(o))) for o in omegas)
    return CurvatureReport(*omegas, max_norm=max_norm, tol=flatness_tolerance(p, lam, rel_tol))


class EinsteinResidual(NamedTuple):
    residual: float
    sign: int  # the sign s in Ric - S/2 g = s/4 T_psi that fits best


def wk_derivative(p: ModuliParams, lam: Lambda, psi) -> np.ndarray:
    """Row a is ``nabla_{e_a} psi`` prescribed by the constant-S WK equation (n = 3)."""
    lam = _lam(lam)
    S = _require_s(p)
    R = ricci_from_params(p).diagonal
    E = clifford_basis().E
    psi = as_spinor(psi)
    return np.array([lam * (2.0 * R[a] / S - 1.0) * (E[a] @ psi) for a in range(3)])


def energy_momentum(p: ModuliParams, lam: Lambda, psi) -> np.ndarray:
    """``T_psi(e_a, e_b) = Re <e_a . nabla_b psi + e_b . nabla_a psi, psi>``."""
    E = clifford_basis().E
    psi = as_spinor(psi)
    nab = wk_derivative(p, lam, psi)
    T = np.empty((3, 3))
    for a in range(3):
        for b in range(3):
            v = E[a] @ nab[b] + E[b] @ nab[a]
            T[a, b] = np.real(np.vdot(psi, v))
    return T


def verify_einstein_from_wk(p: ModuliParams, lam: Lambda, psi0) -> EinsteinResidual:
    """Check ``Ric - S/2 g = +-1/4 T_psi`` for the normalised WK-spinor value.

    psi0 is rescaled to ``|psi|^2 = |S| / |lam|`` before use.
    """
    lam_v = _lam(lam)
    if lam_v == 0.0:
        raise ZeroLambda("lambda = 0")
    S = _require_s(p)
    psi0 = as_spinor(psi0)
    n2 = float(np.real(np.vdot(psi0, psi0)))
    if n2 == 0.0:
        raise ValueError("psi0 must be non-zero")
    psi = math.sqrt(abs(S) / (abs(lam_v) * n2)) * psi0
    einstein = ricci_from_params(p).matrix() - 0.5 * S * np.eye(3)
    T = energy_momentum(p, lam_v, psi)
    res = {s: float(np.linalg.norm(einstein - s * 0.25 * T)) for s in (1, -1)}
    best = min(res, key=res.get)
    return EinsteinResidual(res[best], best)


def homothety_invariant(p: ModuliParams, lam: Lambda) -> float:
    """``lam^2 vol^(2/3)``, unchanged under (K, L, M) -> mu (K, L, M)."""
    _require_s(p)
    return _lam(lam) ** 2 * volume(p) ** (2.0 / 3.0)


def homothety_invariant_closed_form(p: ModuliParams) -> float:
    r = ricci_from_params(p)
    if r.S == 0.0:
        raise ScalarFlat(f"S = 0 at {p}")
    prod = abs(p.K - p.L) * abs(p.M - p.L) * abs(p.K + p.M)
    volume(p)  # raises DegenerateMetric when prod == 0
    return (
        (2 * math.pi ** 2) ** (2.0 / 3.0) / 8.0
        * r.S ** 3 / (r.S ** 2 - 2 * r.ric_norm_sq)
        / prod ** (2.0 / 3.0)
    )
