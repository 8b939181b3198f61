"""Small linear algebra for three-dimensional spin geometry.

Vectors are real numpy arrays of shape (3,) in the orthonormal frame
e1, e2, e3; spinors are complex arrays of shape (2,).  Clifford
multiplication is realised by a fixed triple of 2x2 complex matrices
with ``E_i E_j + E_j E_i = -2 delta_ij`` and volume element
``E1 E2 E3 = +Id``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ID2 = np.eye(2, dtype=complex)

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def as_vec3(x) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("non-finite vector component")
    return v


def as_spinor(psi) -> np.ndarray:
    s = np.asarray(psi, dtype=complex)
    if s.shape != (2,):
        raise ValueError(f"expected a 2-spinor, got shape {s.shape}")
    if not np.all(np.isfinite(s)):
        raise ValueError("non-finite spinor component")
    return s


def cross(X, Y) -> np.ndarray:
    """Right-handed cross product, ``e1 x e2 = e3``."""
    x, y = as_vec3(X), as_vec3(Y)
    return np.array([
        x[1] * y[2] - x[2] * y[1],
        x[2] * y[0] - x[0] * y[2],
        x[0] * y[1] - x[1] * y[0],
    ])


def hermitian(u, v) -> complex:
    """``<u, v> = sum u_k conj(v_k)``, antilinear in the second slot."""
    return complex(np.sum(np.asarray(u) * np.conj(np.asarray(v))))


@dataclass(frozen=True)
class CliffordRep:
    E1: np.ndarray
    E2: np.ndarray
    E3: np.ndarray

    @property
    def E(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.E1, self.E2, self.E3)

    def vector(self, X) -> np.ndarray:
        """Matrix of Clifford multiplication by the real vector X."""
        x = as_vec3(X)
        return x[0] * self.E1 + x[1] * self.E2 + x[2] * self.E3

    def volume_element(self) -> np.ndarray:
        return self.E1 @ self.E2 @ self.E3


def clifford_basis() -> CliffordRep:
    # -i sigma_k has E1E2E3 = -Id; flipping E3 selects the other
    # irreducible representation, the one whose orientation matches the
    # sign rule for lambda (checked against the Sasakian points).
    return CliffordRep(-1j * _SX, -1j * _SY, 1j * _SZ)


def quaternionic_map(psi) -> np.ndarray:
    """Antilinear J(a, b) = (conj b, -conj a); J^2 = -Id, J E_k = E_k J."""
    s = as_spinor(psi)
    return np.array([np.conj(s[1]), -np.conj(s[0])])


def commutes_with_j(A: np.ndarray) -> float:
    """Max deviation of ``A J - J A`` over the standard complex basis of C^2.

    J is only real-linear, so the check runs over the real basis
    {(1,0), (i,0), (0,1), (0,i)}.
    """
    basis = [np.array(v, dtype=complex) for v in ((1, 0), (1j, 0), (0, 1), (0, 1j))]
    return max(
        float(np.max(np.abs(A @ quaternionic_map(b) - quaternionic_map(A @ b))))
        for b in basis
    )
