"""Elliptic parametrisation of the moduli curve in the chart K = 1.

With ``a = M - L - LM = z^2 - 1`` and ``b = (L - M) L M = (z^2 - 1)^3 / (4 z^2)``
the pair (L, M) is

    L(z) = -(1 + z) ((z - 1)^2 + w) / (4 z)
    M(z) =  (1 + z) ((z - 1)^2 - w) / (4 z)

where ``w^2 = R(z) = (z + 1)(1 + 3z - 5z^2 + z^3)``.  The opposite signs
in front of w are what make ``L - M = -(1+z)(z-1)^2/(2z)`` and
``L M = -(1+z)^2 (z-1)/(2z)`` hold, because ``(z-1)^4 - R(z) = 8z(z-1)``.
The sheet s = +-1 picks ``w = s * sqrt(R(z))`` with the principal root.
"""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .errors import NoConvergence, PoleAtZero, PoleOfPsi
from .moduli import q_poly, q_scale, solve_L_given_M

log = logging.getLogger(__name__)

SQRT5 = math.sqrt(5.0)
# (z + 1)(z - 1)(z^2 - 4z - 1); the cubic factor has the root z = 1
RADICAND_ROOTS = (-1.0, 1.0, 2.0 + SQRT5, 2.0 - SQRT5)


@dataclass(frozen=True)
class EllipticPoint:
    z: complex
    sheet: int = 1

    def __post_init__(self):
        if self.sheet not in (1, -1):
            raise ValueError("sheet must be +1 or -1")

    @property
    def w(self) -> complex:
        return self.sheet * cmath.sqrt(radicand(self.z))


@dataclass(frozen=True)
class ParamPair:
    L: complex
    M: complex

    @property
    def q_residual(self) -> float:
        """|Q(1, L, M)| normalised by ``max(1, |(1, L, M)|^6)``."""
        return abs(q_poly(1.0, self.L, self.M)) / q_scale(1.0, self.L, self.M)


def radicand(z):
    return (z + 1) * (1 + 3 * z - 5 * z ** 2 + z ** 3)


def _radicand_d1(z):
    return 4 * z ** 3 - 12 * z ** 2 - 4 * z + 4


def _radicand_d2(z):
    return 12 * z ** 2 - 24 * z - 4


def lm_from_z(pt: EllipticPoint, w: Optional[complex] = None) -> ParamPair:
    """(L, M) at z; ``w`` overrides the sheet's square root (analytic continuation)."""
    z = complex(pt.z)
    if z == 0:
        raise PoleAtZero("z = 0 is a pole of L and M")
    if w is None:
        w = pt.w
    sq = (z - 1) ** 2
    L = -(1 + z) * (sq + w) / (4 * z)
    M = (1 + z) * (sq - w) / (4 * z)
    return ParamPair(L, M)


def identity_residuals(pt: EllipticPoint) -> tuple[float, float]:
    """Deviations of L - M and L M from their closed forms in z."""
    z = complex(pt.z)
    lm = lm_from_z(pt)
    diff = -(1 + z) * (z - 1) ** 2 / (2 * z)
    prod = -(1 + z) ** 2 * (z - 1) / (2 * z)
    return abs((lm.L - lm.M) - diff), abs(lm.L * lm.M - prod)


def ab_from_z(z):
    return z ** 2 - 1, (z ** 2 - 1) ** 3 / (4 * z ** 2)


def z_preimages(L: float, M: float, tol: float = 1e-9) -> list[EllipticPoint]:
    """All (z, sheet) with ``lm_from_z == (L, M)``; z runs over +-sqrt(1 + a)."""
    a = M - L - L * M
    root = cmath.sqrt(1 + a)
    out = []
    for z in (root, -root):
        if z == 0:
            continue
        for sheet in (1, -1):
            pt = EllipticPoint(z, sheet)
            lm = lm_from_z(pt)
            if abs(lm.L - L) < tol * (1 + abs(L)) and abs(lm.M - M) < tol * (1 + abs(M)):
                out.append(pt)
    return out


def psi(p) -> complex:
    """``Psi = L^2 / (K M)`` for a ModuliParams or any (K, L, M) triple."""
    K, L, M = (p.K, p.L, p.M) if hasattr(p, "K") else p
    if K * M == 0:
        raise PoleOfPsi(f"K M = 0 at {(K, L, M)}")
    return L ** 2 / (K * M)


def psi_z_derivatives(z: complex, w: complex) -> tuple[complex, complex, complex]:
    """(Psi, dPsi/dz, d2Psi/dz2) along the parametrisation, in closed form.

    ``w`` is the chosen square root of R(z); it must be non-zero.
    """
    z = complex(z)
    if z == 0:
        raise PoleAtZero("z = 0")
    R, R1, R2 = radicand(z), _radicand_d1(z), _radicand_d2(z)
    w1 = R1 / (2 * w)
    w2 = (2 * R * R2 - R1 ** 2) / (4 * w ** 3)
    u, u1, u2 = (1 + z) / (4 * z), -1 / (4 * z ** 2), 1 / (2 * z ** 3)
    sq, sq1 = (z - 1) ** 2, 2 * (z - 1)
    P, P1, P2 = sq + w, sq1 + w1, 2 + w2
    N, N1, N2 = sq - w, sq1 - w1, 2 - w2
    L, L1, L2 = -u * P, -(u1 * P + u * P1), -(u2 * P + 2 * u1 * P1 + u * P2)
    M, M1, M2 = u * N, u1 * N + u * N1, u2 * N + 2 * u1 * N1 + u * N2
    if M == 0:
        raise PoleOfPsi(f"M(z) = 0 at z = {z}")
    f = L ** 2 / M
    f1 = 2 * L * L1 / M - L ** 2 * M1 / M ** 2
    f2 = (
        2 * (L1 ** 2 + L * L2) / M
        - 4 * L * L1 * M1 / M ** 2
        - L ** 2 * M2 / M ** 2
        + 2 * L ** 2 * M1 ** 2 / M ** 3
    )
    return f, f1, f2


def _continue_sqrt(z: complex, w_prev: complex) -> complex:
    w = cmath.sqrt(radicand(z))
    return w if abs(w - w_prev) <= abs(w + w_prev) else -w


def _sheet_of(z: complex, w: complex) -> int:
    w0 = cmath.sqrt(radicand(z))
    return 1 if abs(w - w0) <= abs(w + w0) else -1


def psi_limits_at_flat_point(h: float = 1e-6) -> tuple[float, float]:
    """Limits of ``L^2/M`` and ``d/dM (L^2/M)`` as M -> 0 along the plus branch.

    The plus branch leaves [1:0:0] along L ~ M, the smooth branch of the
    singular point.  Both limits are Richardson-extrapolated from
    difference quotients at M = h, 2h, 4h (the errors are O(M)).
    """
    def f(M):
        return solve_L_given_M(M, "plus") ** 2 / M

    f1, f2, f4 = f(h), f(2 * h), f(4 * h)
    value = 2 * f1 - f2
    # forward differences starting at 0, extrapolated: f(0) = value ~ 0
    d_h = (f2 - f1) / h
    d_2h = (f4 - f2) / (2 * h)
    deriv = 2 * d_h - d_2h
    return value, deriv


@dataclass(frozen=True)
class CriticalPoint:
    z: complex
    sheet: int
    L: complex
    M: complex
    psi: complex
    dpsi: complex
    d2psi: complex
    order: int  # 2 when the second derivative vanishes as well, else 1


def _newton_critical(z0: complex, w0: complex, excluded: list[complex], exclusion: float,
                     bounds: tuple[float, float, float, float],
                     max_iter: int = 80, step_tol: float = 1e-13):
    z, w = complex(z0), complex(w0)
    x0, x1, y0, y1 = bounds
    for _ in range(max_iter):
        _, f1, f2 = psi_z_derivatives(z, w)
        if f2 == 0:
            raise NoConvergence("vanishing second derivative during Newton")
        step = f1 / f2
        dist = min(abs(z - e) for e in excluded)
        if abs(step) > 0.5 * dist:
            step *= 0.5 * dist / abs(step)
        z_new = z - step
        if min(abs(z_new - e) for e in excluded) < exclusion:
            raise NoConvergence(f"iterate approached an excluded point near {z_new}")
        if not (x0 <= z_new.real <= x1 and y0 <= z_new.imag <= y1):
            raise NoConvergence(f"iterate left the search window at {z_new}")
        w = _continue_sqrt(z_new, w)
        z = z_new
        if abs(step) < step_tol * (1 + abs(z)):
            return z, w
    raise NoConvergence(f"no convergence from z0 = {z0}")


def psi_ramification_scan(
    region: tuple[float, float, float, float] = (-2.5, 2.5, -1.5, 1.5),
    grid: tuple[int, int] = (24, 16),
    sheets: Iterable[int] = (1, -1),
    tol: float = 1e-6,
    order_tol: float = 1e-6,
    exclusion: float = 1e-3,
) -> list[CriticalPoint]:
    """Critical points of Psi(z) seeded from a grid over a complex rectangle.

    ``region = (re_min, re_max, im_min, im_max)``.  Seeds closer than
    ``exclusion`` to z = 0 or to a zero of R are skipped, as are limits
    landing there.  A point is kept when ``|Psi'| < tol`` and classified
    order two when additionally ``|Psi''| < order_tol``.
    """
    x0, x1, y0, y1 = region
    nx, ny = grid
    excluded = [0j] + [complex(r) for r in RADICAND_ROOTS]
    # Newton may wander a little outside the rectangle, not off to infinity
    # where Psi flattens out on one sheet
    pad_x = 0.25 * max(x1 - x0, 1.0)
    pad_y = 0.25 * max(y1 - y0, 1.0)
    window = (x0 - pad_x, x1 + pad_x, y0 - pad_y, y1 + pad_y)
    found: list[CriticalPoint] = []
    # cell centres, so a degenerate (flat) rectangle still yields seeds
    xs = x0 + (np.arange(nx) + 0.5) * (x1 - x0) / nx
    ys = y0 + (np.arange(ny) + 0.5) * (y1 - y0) / ny if ny > 1 or y1 != y0 else np.array([y0])
    for sheet in sheets:
        for x in xs:
            for y in ys:
                z0 = complex(x, y)
                if min(abs(z0 - e) for e in excluded) < exclusion:
                    continue
                w0 = sheet * cmath.sqrt(radicand(z0))
                try:
                    z, w = _newton_critical(z0, w0, excluded, exclusion, window)
                    f, f1, f2 = psi_z_derivatives(z, w)
                except (NoConvergence, PoleOfPsi, ZeroDivisionError) as exc:
                    log.debug("seed %s dropped: %s", z0, exc)
                    continue
                if abs(f1) >= tol:
                    continue
                s = _sheet_of(z, w)
                if any(c.sheet == s and abs(c.z - z) < 1e-7 * (1 + abs(z)) for c in found):
                    continue
                lm = lm_from_z(EllipticPoint(z, s), w)
                order = 2 if abs(f2) < order_tol else 1
                found.append(CriticalPoint(z, s, lm.L, lm.M, f, f1, f2, order))
    return found
