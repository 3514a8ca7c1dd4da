"""Reflection-pair analysis of the hyperbolic-point parameter gamma.

For ``gamma > 1`` the two totally real planes pulled back under the branched
covering ``H(z, w) = (z, z w + (gamma/2)(z^2 + w^2))`` carry anti-holomorphic
involutions whose matrix parts are

    tau1 = [[0, 1], [1, 0]],
    tau2 = [[-a, -1], [a^2 - 1, a]],       a = 2 / gamma.

Conjugating ``tau2`` by a matrix commuting with ``tau1`` whose parameter
solves ``a x^2 + 4 x + a = 0`` turns it into an orthogonal reflection;
``tau1`` reflects across the line spanned by (1, 1).  The pair generates a
finite dihedral group exactly when the angle between the two reflection axes
is a rational multiple of pi.  ``analyze_gamma`` decides this by continued
fractions; ``group_closure`` is the independent oracle that simply multiplies
matrices until the generated set closes (or a budget is exhausted).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import OutOfRange
from .jets import model_psi

_ORTHOGONALITY_TOL = 1e-10


@dataclass(frozen=True)
class ReflectionPair:
    """Matrix parts of the two involutions, with ``a = 2 / gamma``."""

    tau1: np.ndarray
    tau2: np.ndarray
    a: float

    @property
    def gamma(self) -> float:
        return 2.0 / self.a


@dataclass(frozen=True)
class GammaReport:
    """Full output of the good-hyperbolic-point decision procedure.

    ``angle`` is the angle in radians between the axis vectors (1, 1) and
    (nu, 1).  ``nu`` is None when the second axis is horizontal (the
    (nu, 1) normalization degenerates; the angle is then reported as pi/4).
    ``axis_angle`` is the same data folded to the angle between the axis
    *lines*, in [0, pi/2]; it is a continuous, strictly increasing function
    of gamma and is what scans and root-finding should use.
    """

    gamma: float
    a: float
    x_root: float
    nu: Optional[float]
    angle: float
    axis_angle: float
    rational: Optional[tuple[int, int]]
    dihedral_order: Optional[int]
    in_Lambda: bool
    fixed_vector_residual: float
    other_root: float

    def to_json_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "a": self.a,
            "x_root": self.x_root,
            "nu": self.nu,
            "angle": self.angle,
            "angle_over_pi": self.angle / math.pi,
            "axis_angle": self.axis_angle,
            "rational": list(self.rational) if self.rational else None,
            "dihedral_order": self.dihedral_order,
            "in_Lambda": self.in_Lambda,
            "fixed_vector_residual": self.fixed_vector_residual,
            "other_root": self.other_root,
        }


def build_reflections(gamma: float) -> ReflectionPair:
    """Reflection matrices for a hyperbolic parameter ``gamma > 1``."""
    if not gamma > 1.0:
        raise OutOfRange("gamma must exceed 1", gamma=gamma)
    a = 2.0 / gamma
    tau1 = np.array([[0.0, 1.0], [1.0, 0.0]])
    tau2 = np.array([[-a, -1.0], [a * a - 1.0, a]])
    return ReflectionPair(tau1=tau1, tau2=tau2, a=a)


def symmetrizing_roots(a: float) -> tuple[float, float]:
    """Real roots of ``a x^2 + 4 x + a = 0`` for ``0 < a < 2``.

    Both roots are negative with product 1; the first returned is the
    canonical one in (-1, 0), the second is its reciprocal.
    """
    disc = math.sqrt(4.0 - a * a)
    inner = (-2.0 + disc) / a
    return inner, 1.0 / inner


def orthogonal_reflection(pair: ReflectionPair) -> np.ndarray:
    """Conjugate ``tau2`` into an orthogonal reflection.

    Uses ``C = [[x, 1], [1, x]]`` (which commutes with ``tau1``) at the
    canonical root x, then a diagonal rescaling as a safety net, and checks
    orthogonality to 1e-10.
    """
    x, _ = symmetrizing_roots(pair.a)
    C = np.array([[x, 1.0], [1.0, x]])
    t = np.linalg.solve(C, pair.tau2 @ C)
    # diagonal conjugation diag(d, 1) symmetrizes residual off-diagonal skew
    m12, m21 = t[0, 1], t[1, 0]
    if abs(m12 - m21) > 1e-13 and m12 * m21 > 0:
        d = math.sqrt(m12 / m21)
        D = np.diag([d, 1.0])
        t = np.linalg.solve(D, t @ D)
    defect = np.abs(t.T @ t - np.eye(2)).max()
    if defect > _ORTHOGONALITY_TOL:
        raise OutOfRange(
            "conjugated reflection failed the orthogonality check",
            gamma=pair.gamma, defect=float(defect),
        )
    return t


def _axis_data(t: np.ndarray) -> tuple[float, Optional[float], float, float]:
    """Reflection-axis geometry of an orthogonal reflection matrix.

    Returns (beta, nu, vector_angle, line_angle): beta is the axis angle to
    the x-axis; nu the slope parameter of the axis written as (nu, 1) or None
    when horizontal; the two angles are measured against the (1, 1) axis.
    """
    beta = 0.5 * math.atan2(t[0, 1], t[0, 0])
    s, c = math.sin(beta), math.cos(beta)
    if abs(s) < 1e-154:
        nu = None
        vector_angle = math.pi / 4.0
    else:
        nu = c / s
        beta_up = beta if s > 0 else beta + math.pi
        vector_angle = abs(beta_up - math.pi / 4.0)
    d = (beta - math.pi / 4.0) % math.pi
    line_angle = min(d, math.pi - d)
    return beta, nu, vector_angle, line_angle


def analyze_gamma(
    gamma: float, angle_tol: float = 1e-9, max_denominator: int = 60
) -> GammaReport:
    """Decide membership of gamma in the dense good set.

    The report is ``in_Lambda`` when ``angle / pi`` is within ``angle_tol``
    of a reduced fraction n/m with ``m <= max_denominator`` (detected via
    continued-fraction convergents); the generated group is then dihedral of
    order 2 m.
    """
    if max_denominator < 2:
        raise ValueError("max_denominator must be at least 2")
    if angle_tol <= 0:
        raise ValueError("angle_tol must be positive")
    pair = build_reflections(gamma)
    x_root, other_root = symmetrizing_roots(pair.a)
    t = orthogonal_reflection(pair)
    _, nu, vector_angle, line_angle = _axis_data(t)

    if nu is None:
        axis = np.array([1.0, 0.0])
    else:
        axis = np.array([nu, 1.0]) / math.hypot(nu, 1.0)
    residual = float(np.abs(t @ axis - axis).max())

    x = vector_angle / math.pi
    frac = Fraction(x).limit_denominator(max_denominator)
    rational = None
    dihedral_order = None
    in_lambda = abs(x - float(frac)) <= angle_tol
    if in_lambda:
        rational = (frac.numerator, frac.denominator)
        dihedral_order = 2 * frac.denominator

    return GammaReport(
        gamma=float(gamma), a=pair.a, x_root=x_root, nu=nu,
        angle=vector_angle, axis_angle=line_angle,
        rational=rational, dihedral_order=dihedral_order,
        in_Lambda=in_lambda, fixed_vector_residual=residual,
        other_root=other_root,
    )


def group_closure(
    pair: ReflectionPair, max_elements: int = 400, tol: float = 1e-9
) -> Optional[int]:
    """Order of the group generated by the reflections, by brute enumeration.

    Multiplies words in ``tau1`` and the orthogonalized ``tau2``, identifying
    matrices within ``tol``.  Returns the order when the set closes within
    ``max_elements``, otherwise None.  Absence is a value, not an error.
    """
    g1 = pair.tau1
    g2 = orthogonal_reflection(pair)
    elements = np.eye(2)[None, :, :]
    frontier = [np.eye(2)]
    while frontier:
        new_frontier = []
        for m in frontier:
            for g in (g1, g2):
                p = m @ g
                if np.abs(elements - p).max(axis=(1, 2)).min() > tol:
                    elements = np.concatenate([elements, p[None]], axis=0)
                    if elements.shape[0] > max_elements:
                        return None
                    new_frontier.append(p)
        frontier = new_frontier
    return int(elements.shape[0])


@dataclass(frozen=True)
class CoveringModel:
    """Two-fold branched covering ``H(z, w) = (z, z w + (gamma/2)(z^2 + w^2))``.

    Its preimage of the model surface near the origin is the union of the
    totally real planes E1 = {w = conj z} and E2 = {w = -conj z - (2/gamma) z}.
    """

    gamma: float

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise OutOfRange("gamma must exceed 1", gamma=self.gamma)

    def plane_w(self, z: complex | np.ndarray, which: str) -> complex | np.ndarray:
        z = np.asarray(z, dtype=complex)
        if which == "E1":
            return np.conj(z)
        if which == "E2":
            return -np.conj(z) - (2.0 / self.gamma) * z
        raise ValueError("which must be 'E1' or 'E2'")


def covering_image(
    model: CoveringModel, z: complex | np.ndarray, which: str = "E1"
) -> tuple[complex | np.ndarray, complex | np.ndarray]:
    """Image under H of the point of plane E1 or E2 over z.

    The second coordinate equals ``model_psi(gamma, z)`` identically; this
    algebraic identity is what makes the planes the lift of the surface.
    """
    z = np.asarray(z, dtype=complex)
    w = model.plane_w(z, which)
    second = z * w + (model.gamma / 2.0) * (z * z + w * w)
    if second.shape == ():
        return complex(z), complex(second)
    return z, second


def covering_identity_defect(
    model: CoveringModel, z: complex | np.ndarray, which: str = "E1"
) -> float:
    """Max deviation of the covering image from the model graph over z."""
    _, second = covering_image(model, z, which)
    return float(np.abs(second - model_psi(model.gamma, z)).max())


def axis_angle_over_pi(gamma: float) -> float:
    """Angle between the two reflection axes as lines, divided by pi.

    Continuous and strictly increasing from 0 to 1/2 on gamma in (1, inf).
    """
    pair = build_reflections(gamma)
    t = orthogonal_reflection(pair)
    return _axis_data(t)[3] / math.pi


def find_gamma_for_angle(
    target_over_pi: float,
    bracket: tuple[float, float] = (1.0 + 1e-9, 1e6),
    iterations: int = 200,
) -> float:
    """Gamma whose axis-line angle equals ``target_over_pi * pi``, by bisection.

    ``target_over_pi`` must lie strictly between the axis angles at the
    bracket endpoints (the function is increasing in gamma).
    """
    lo, hi = bracket
    f_lo = axis_angle_over_pi(lo) - target_over_pi
    f_hi = axis_angle_over_pi(hi) - target_over_pi
    if f_lo > 0 or f_hi < 0:
        raise OutOfRange(
            "target angle not bracketed",
            target_over_pi=target_over_pi, bracket=list(bracket),
        )
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if axis_angle_over_pi(mid) < target_over_pi:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * max(1.0, abs(hi)):
            break
    return 0.5 * (lo + hi)
