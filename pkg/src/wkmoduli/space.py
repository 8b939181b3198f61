"""The homogeneous model spaces N^3(K, L, M).

The orthonormal invariant frame e1, e2, e3 has connection forms
``omega_12 = K s3, omega_13 = L s2, omega_23 = M s1`` (s = dual coframe).
Brackets follow ``d s^k(X, Y) = -s^k([X, Y])``, which gives

    [e2, e3] = (K - L) e1,  [e1, e3] = -(M + K) e2,  [e1, e2] = (M - L) e3.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .clifford import cross
from .errors import DegenerateMetric

# frame pairs (a, b) with a < b, in the order used throughout the package
PAIRS = ((0, 1), (0, 2), (1, 2))


@dataclass(frozen=True)
class ModuliParams:
    K: float
    L: float
    M: float

    def __post_init__(self):
        for name in ("K", "L", "M"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.K, self.L, self.M], dtype=float)

    def norm(self) -> float:
        return math.sqrt(self.K ** 2 + self.L ** 2 + self.M ** 2)

    def scaled(self, mu: float) -> "ModuliParams":
        return ModuliParams(mu * self.K, mu * self.L, mu * self.M)

    def is_zero(self) -> bool:
        return self.K == 0 and self.L == 0 and self.M == 0


@dataclass(frozen=True)
class RicciData:
    A: float
    B: float
    C: float
    S: float
    ric_norm_sq: float

    @property
    def diagonal(self) -> np.ndarray:
        return np.array([self.A, self.B, self.C])

    def matrix(self) -> np.ndarray:
        return np.diag(self.diagonal)


@dataclass(frozen=True)
class StructureConstants:
    """``c = (c^1_23, c^2_13, c^3_12)``."""
    c: tuple[float, float, float]

    def tensor(self) -> np.ndarray:
        """Array ``t[a, b, k]`` with ``[e_a, e_b] = sum_k t[a, b, k] e_k``."""
        t = np.zeros((3, 3, 3))
        c1, c2, c3 = self.c
        t[1, 2, 0], t[2, 1, 0] = c1, -c1
        t[0, 2, 1], t[2, 0, 1] = c2, -c2
        t[0, 1, 2], t[1, 0, 2] = c3, -c3
        return t


def ricci_from_params(p: ModuliParams) -> RicciData:
    A = -2.0 * p.K * p.L
    B = 2.0 * p.K * p.M
    C = -2.0 * p.L * p.M
    return RicciData(A, B, C, A + B + C, A * A + B * B + C * C)


def structure_constants(p: ModuliParams) -> StructureConstants:
    return StructureConstants((p.K - p.L, -(p.M + p.K), p.M - p.L))


def connection_forms(p: ModuliParams) -> np.ndarray:
    """``w[a, i, j] = omega_ij(e_a)``, antisymmetric in (i, j)."""
    w = np.zeros((3, 3, 3))
    w[2, 0, 1], w[2, 1, 0] = p.K, -p.K
    w[1, 0, 2], w[1, 2, 0] = p.L, -p.L
    w[0, 1, 2], w[0, 2, 1] = p.M, -p.M
    return w


def nabla_ricci(p: ModuliParams) -> np.ndarray:
    """Slices ``D[a] = nabla_{e_a} Ric`` as symmetric 3x3 matrices.

    For diagonal Ric with constant eigenvalues R_i the off-diagonal
    entries are ``(R_i - R_j) omega_ij(e_a)``.
    """
    R = ricci_from_params(p).diagonal
    w = connection_forms(p)
    return (R[None, :, None] - R[None, None, :]) * w


def t_endomorphism(p: ModuliParams) -> np.ndarray:
    """Matrix of ``T(X) = sum_i e_i x (nabla_{e_i} Ric)(X)``; column x is T(e_x)."""
    D = nabla_ricci(p)
    frame = np.eye(3)
    T = np.zeros((3, 3))
    for x in range(3):
        T[:, x] = sum(cross(frame[i], D[i] @ frame[x]) for i in range(3))
    return T


def _metric_factors(p: ModuliParams) -> tuple[float, float, float]:
    f = (abs(p.K - p.L), abs(p.M - p.L), abs(p.K + p.M))
    if min(f) == 0.0:
        raise DegenerateMetric(f"|K-L|, |M-L|, |K+M| = {f}")
    return f


def metric_matrix(p: ModuliParams) -> np.ndarray:
    """Left-invariant metric in the standard basis of so(3)."""
    kl, ml, km = _metric_factors(p)
    return np.diag([1.0 / (ml * km), 1.0 / (kl * ml), 1.0 / (kl * km)])


def volume(p: ModuliParams) -> float:
    """``2 pi^2 / (|K-L| |M-L| |K+M|)``, i.e. 2 pi^2 sqrt(det g)."""
    kl, ml, km = _metric_factors(p)
    return 2.0 * math.pi ** 2 / (kl * ml * km)


def structure_equation_residuals(p: ModuliParams) -> np.ndarray:
    """Scalar residuals of the three ``d omega_ij`` structure equations.

    With constant-coefficient connection forms each equation collapses to
    one identity between (K, L, M) and (A, B, C), e.g.
    ``K (L - M) = L M + (C - A - B) / 2`` for ``d omega_12``.
    """
    r = ricci_from_params(p)
    K, L, M = p.K, p.L, p.M
    return np.array([
        K * (L - M) - (L * M + (r.C - r.A - r.B) / 2),
        L * (K + M) - (-K * M + (r.B - r.A - r.C) / 2),
        M * (L - K) - (K * L + (r.A - r.B - r.C) / 2),
    ])


# --- independent oracle -----------------------------------------------------

def levi_civita_koszul(p: ModuliParams) -> np.ndarray:
    """``G[a, b] = nabla_{e_a} e_b`` from the Koszul formula on invariant fields.

    ``2 <nabla_X Y, Z> = <[X,Y],Z> - <[Y,Z],X> + <[Z,X],Y>``.
    """
    c = structure_constants(p).tensor()
    return 0.5 * (c - np.einsum("bka->abk", c) + np.einsum("kab->abk", c))


def riemann_from_brackets(p: ModuliParams) -> np.ndarray:
    """``Rm[a, b, d] = R(e_a, e_b) e_d`` for the invariant Levi-Civita connection."""
    c = structure_constants(p).tensor()
    G = levi_civita_koszul(p)
    Rm = np.zeros((3, 3, 3, 3))
    for a in range(3):
        for b in range(3):
            for d in range(3):
                # nabla_a nabla_b e_d - nabla_b nabla_a e_d - nabla_[a,b] e_d
                Rm[a, b, d] = G[b, d] @ G[a] - G[a, d] @ G[b] - c[a, b] @ G[:, d, :]
    return Rm


def ricci_oracle_via_curvature(p: ModuliParams) -> np.ndarray:
    """Ricci tensor ``Ric(Y, Z) = sum_i <R(e_i, Y) Z, e_i>`` from first principles."""
    Rm = riemann_from_brackets(p)
    return np.einsum("iyzi->yz", Rm)
