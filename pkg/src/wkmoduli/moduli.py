"""The sextic moduli variety Q(K, L, M) = 0 and its two real branches.

In the chart K = 1 the variety is the cubic in L

    Q(1, L, M) = L^3 (M-1)^2 (M+1) + L^2 M (1+M)^2 - L M^2 (1+M) - M^3.

For M > 0 the cubic has exactly one positive root (the ``plus`` branch,
increasing from 0 to 1) and, away from M = 1, two negative roots.  The
``minus`` branch is the negative root closest to zero; it decreases
from 0 towards -1.  The other negative root escapes to infinity at M = 1,
where the leading coefficient vanishes.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np

from .errors import GeometryError, NoRealRoot
from .space import ModuliParams, ricci_from_params, volume

log = logging.getLogger(__name__)

Branch = Literal["plus", "minus"]

ON_VARIETY_TOL = 1e-9
SQRT5 = math.sqrt(5.0)


def q_poly(K, L, M):
    return (
        -K ** 2 * L * (L - M) ** 2 * M
        + L ** 3 * M ** 3
        + K * L ** 2 * M ** 2 * (M - L)
        + K ** 3 * (L - M) * (L + M) ** 2
    )


def q_via_symmetric(K, L, M):
    """Q through the elementary symmetric functions of {K, -L, M}."""
    g1 = K - L + M
    g2 = -K * L + K * M - L * M
    g3 = -K * L * M
    return 4 * g1 * g2 * g3 - g2 ** 3 - 4 * g3 ** 2


def p_polys(K, L, M):
    p1 = (-K * L ** 2 + L ** 2 * M + K ** 2 * (L + M)) ** 2
    p2 = (K * M ** 2 + L * M ** 2 + K ** 2 * (L + M)) ** 2
    p3 = (L * M * (M - L) + K * (L ** 2 + M ** 2)) ** 2
    return p1, p2, p3


def q_scale(K, L, M) -> float:
    """Normalisation ``max(1, |(K, L, M)|^6)`` for residuals of the sextic."""
    return max(1.0, float(abs(K) ** 2 + abs(L) ** 2 + abs(M) ** 2) ** 3)


def scaled_q_residual(K, L, M) -> float:
    return float(abs(q_poly(K, L, M))) / q_scale(K, L, M)


def cubic_coefficients(M: float) -> tuple[float, float, float, float]:
    """Coefficients of Q(1, L, M) as a cubic in L, highest degree first."""
    return (
        (M - 1.0) ** 2 * (M + 1.0),
        M * (1.0 + M) ** 2,
        -M ** 2 * (1.0 + M),
        -M ** 3,
    )


def real_cubic_roots(a: float, b: float, c: float, d: float, rel_tol: float = 1e-12) -> list[float]:
    """Real roots of ``a x^3 + b x^2 + c x + d``, sorted ascending.

    The root of largest magnitude comes from the closed form (Cardano or
    the trigonometric form), the remaining ones from the deflated
    quadratic; every root gets Newton-polished on the full cubic.  A
    leading coefficient below ``rel_tol * |coeffs|`` is treated as zero and
    the problem drops to a quadratic (or linear) equation.
    """
    scale = max(abs(a), abs(b), abs(c), abs(d))
    if scale == 0.0:
        raise ValueError("all coefficients vanish")
    a, b, c, d = a / scale, b / scale, c / scale, d / scale
    coeffs = (a, b, c, d)
    if abs(a) < rel_tol:
        return sorted(_cubic_newton(coeffs, x, 8) for x in _real_quadratic_roots(b, c, d, rel_tol))
    bn, cn, dn = b / a, c / a, d / a
    # rescale x = k y so the monic cubic in y has O(1) coefficients;
    # keeps the discriminant away from underflow and overflow
    k = max(abs(bn), math.sqrt(abs(cn)), abs(dn) ** (1.0 / 3.0))
    if k == 0.0:
        return [0.0]
    bn, cn, dn = bn / k, cn / k / k, dn / k / k / k
    # x = t - b/3 gives t^3 + p t + q
    shift = bn / 3.0
    p = cn - bn * bn / 3.0
    q = 2.0 * bn ** 3 / 27.0 - bn * cn / 3.0 + dn
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    r = math.sqrt(-p / 3.0) if p < 0.0 else 0.0
    if p == 0.0 and q == 0.0:
        ts = [0.0]
        single = False
    elif disc > 0.0 or r ** 3 == 0.0:
        # covers p > 0 and |p| so small that (p/3)^3 underflowed
        s = math.sqrt(max(disc, 0.0))
        ts = [float(np.cbrt(-q / 2.0 + s) + np.cbrt(-q / 2.0 - s))]
        single = True
    else:
        arg = max(-1.0, min(1.0, (-q / 2.0) / r ** 3))
        phi = math.acos(arg)
        ts = [2.0 * r * math.cos((phi - 2.0 * math.pi * k) / 3.0) for k in range(3)]
        single = False
    # only the largest root is taken from the closed form: the others lose
    # relative accuracy when the roots are widely separated (M near 1)
    x1 = k * max((t - shift for t in ts), key=abs)
    x1 = _cubic_newton(coeffs, x1, 8)
    if single and disc > 1e-12 * max(abs(q / 2.0), abs(p / 3.0) ** 1.5) ** 2:
        # clearly one real root; the other two are a complex pair
        return [x1]
    # divide out (x - x1): from the leading term when |x1| <= 1, from the
    # constant term otherwise, so rounding errors are never amplified
    if abs(x1) <= 1.0:
        q1 = b + a * x1
        q0 = c + q1 * x1
    else:
        q0 = -d / x1
        q1 = (q0 - c) / x1
    rest = _real_quadratic_roots(a, q1, q0, rel_tol)
    return sorted([x1] + [_cubic_newton(coeffs, x, 3) for x in rest])


def _real_quadratic_roots(a: float, b: float, c: float, rel_tol: float) -> list[float]:
    scale = max(abs(a), abs(b), abs(c))
    if scale == 0.0:
        return []
    a, b, c = a / scale, b / scale, c / scale
    if abs(a) < rel_tol:
        if b == 0.0 or abs(c) > abs(b) * 1e300:
            return []  # no root, or none representable
        return [-c / b]
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return []
    s = math.sqrt(disc)
    # cancellation-free form
    qq = -0.5 * (b + math.copysign(s, b))
    if qq == 0.0:
        return [0.0, 0.0]
    return sorted([qq / a, c / qq])


def _cubic_newton(coeffs, x: float, steps: int = 1) -> float:
    a, b, c, d = coeffs

    def f(t):
        return ((a * t + b) * t + c) * t + d

    fx = f(x)
    for _ in range(steps):
        df = (3.0 * a * x + 2.0 * b) * x + c
        if df == 0.0 or fx == 0.0:
            break
        step = fx / df
        x_new = x - step
        f_new = f(x_new)
        # never accept a step that makes the residual worse
        if not math.isfinite(x_new) or abs(f_new) > abs(fx):
            break
        x, fx = x_new, f_new
        if abs(step) <= 4e-16 * max(1.0, abs(x)):
            break
    return x


def _pick_branch(roots: list[float], branch: Branch, seed: Optional[float]) -> float:
    if branch == "plus":
        cands = [r for r in roots if r > 0.0]
    else:
        cands = [r for r in roots if r < 0.0]
    if not cands:
        raise NoRealRoot(f"no real root on the {branch} branch")
    if seed is not None:
        return min(cands, key=lambda r: abs(r - seed))
    return min(cands, key=abs)


def solve_L_given_M(M: float, branch: Branch, seed: Optional[float] = None) -> float:
    """Root L of Q(1, L, M) = 0 on the requested branch.

    ``seed`` (the previous root during continuation) selects the nearest
    root of the right sign; otherwise the branch rule of the module
    docstring applies.  The closed-form root is Newton-polished.
    """
    if branch not in ("plus", "minus"):
        raise ValueError(f"unknown branch {branch!r}")
    if not math.isfinite(M) or M < 0.0:
        raise ValueError(f"M must be finite and >= 0, got {M}")
    if M == 0.0:
        return 0.0
    coeffs = cubic_coefficients(M)
    roots = real_cubic_roots(*coeffs)
    L = _pick_branch(roots, branch, seed)
    L = _cubic_newton(coeffs, L, steps=2)
    if scaled_q_residual(1.0, L, M) > ON_VARIETY_TOL:
        raise NoRealRoot(f"root polish failed at M={M}: L={L}")
    return L


@dataclass(frozen=True)
class ModuliPoint:
    params: ModuliParams
    q_residual: float

    @classmethod
    def at(cls, p: ModuliParams) -> "ModuliPoint":
        return cls(p, float(q_poly(p.K, p.L, p.M)))

    def on_variety(self, tol: float = ON_VARIETY_TOL) -> bool:
        p = self.params
        return abs(self.q_residual) <= tol * q_scale(p.K, p.L, p.M)


@dataclass(frozen=True)
class BranchSample:
    M: float
    L: float
    A: float = math.nan
    B: float = math.nan
    C: float = math.nan
    S: float = math.nan
    lam: float = math.nan
    vol: float = math.nan
    invariant: float = math.nan
    error: Optional[str] = None

    @property
    def params(self) -> ModuliParams:
        return ModuliParams(1.0, self.L, self.M)


@dataclass
class CurveBranch:
    branch_id: Branch
    samples: list[BranchSample] = field(default_factory=list)

    def Ls(self) -> np.ndarray:
        return np.array([s.L for s in self.samples])

    def Ms(self) -> np.ndarray:
        return np.array([s.M for s in self.samples])

    def is_monotone(self) -> bool:
        d = np.diff(self.Ls())
        return bool(np.all(d > 0) or np.all(d < 0))


def branch_sample(M: float, L: float) -> BranchSample:
    """All invariants of the point (1, L, M); failures are recorded, not raised."""
    from .spin import homothety_invariant, wk_number

    p = ModuliParams(1.0, L, M)
    r = ricci_from_params(p)
    fields = dict(M=M, L=L, A=r.A, B=r.B, C=r.C, S=r.S)
    try:
        lam = wk_number(p)
        fields["lam"] = lam.lam
        fields["vol"] = volume(p)
        fields["invariant"] = homothety_invariant(p, lam)
    except GeometryError as exc:
        log.info("sample M=%g flagged: %s", M, exc)
        fields["error"] = f"{type(exc).__name__}: {exc}"
    return BranchSample(**fields)


def trace_branch(m_min: float, m_max: float, n: int, branch: Branch,
                 grid: Optional[np.ndarray] = None) -> CurveBranch:
    """Sample a branch on ``n`` equispaced M values in [m_min, m_max].

    Each solve is seeded with the previous root.  An explicit ``grid``
    (increasing, non-negative) replaces the equispaced one.
    """
    if grid is None:
        if not (0.0 <= m_min < m_max) or n < 2:
            raise ValueError("need 0 <= m_min < m_max and n >= 2")
        grid = np.linspace(m_min, m_max, n)
    out = CurveBranch(branch)
    seed = None
    for M in grid:
        M = float(M)
        try:
            L = solve_L_given_M(M, branch, seed)
        except NoRealRoot as exc:
            log.info("sample M=%g flagged: %s", M, exc)
            out.samples.append(BranchSample(M=M, L=math.nan, error=f"NoRealRoot: {exc}"))
            continue
        seed = L
        out.samples.append(branch_sample(M, L))
    return out


def ab_coords(L, M):
    """``a = M - L - L M``, ``b = (L - M) L M``; Q(1, L, M) = -a^3 + 4 b (1 + a)."""
    return M - L - L * M, (L - M) * L * M


def lambda_free_residuals(p: ModuliParams) -> np.ndarray:
    """Residuals of the three equations obtained by eliminating lambda.

    ``2S(S^2-2|Ric|^2){(A-C)L+(B-A)K}^2 - [S(SA-2A^2) - A(S^2-2|Ric|^2)]^2``
    and its two companions for B and C.  The bracket is squared: both sides
    are then homogeneous of degree 12 in (K, L, M).
    """
    r = ricci_from_params(p)
    A, B, C, S = r.A, r.B, r.C, r.S
    K, L, M = p.K, p.L, p.M
    D = S ** 2 - 2 * r.ric_norm_sq
    lin = ((A - C) * L + (B - A) * K, (C - B) * M + (A - B) * K, (B - C) * M + (C - A) * L)
    rhs = (S * (S * X - 2 * X ** 2) - X * D for X in (A, B, C))
    return np.array([2 * S * D * t ** 2 - h ** 2 for t, h in zip(lin, rhs)])


def special_points() -> list[tuple[str, ModuliParams]]:
    return [
        ("flat [1:0:0]", ModuliParams(1.0, 0.0, 0.0)),
        ("flat [0:1:0]", ModuliParams(0.0, 1.0, 0.0)),
        ("flat [0:0:1]", ModuliParams(0.0, 0.0, 1.0)),
        ("sasakian minus", ModuliParams(1.0, (1.0 - SQRT5) / 4.0, 1.0)),
        ("sasakian plus", ModuliParams(1.0, (1.0 + SQRT5) / 4.0, 1.0)),
        ("round sphere", ModuliParams(1.0, -1.0, 1.0)),
    ]
