"""Characteristic-foliation dynamics near a hyperbolic complex point.

The foliation cut on the model surface by the ambient hypersurface projects,
near the origin, to trajectories of the linear system

    Re z' = (2 gamma + 1) Re z + alpha1 (2 gamma - 1) Im z
    Im z' = alpha1 (2 gamma + 1) Re z - (2 gamma - 1) Im z

whose origin is a saddle: the determinant of the linear part equals
``-(2 gamma + 1)(2 gamma - 1)(1 + alpha1^2) < 0``.  The separatrices split a
neighborhood into four regions Omega_1..Omega_4, numbered counterclockwise
from the unstable direction.  Only the linear part is modeled; a
user-supplied quadratic correction can be attached to a field as a hook.

The admissible regions D+ and D- are the two sectors where the model graph
function is negative; their half-angle is ``mu = arccos(1/gamma) / 2``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import OriginQuery, OutOfRange, StepTooLarge, UndersampledCurve
from .jets import model_chi, model_psi


class Region(enum.Enum):
    OMEGA1 = "omega1"
    OMEGA2 = "omega2"
    OMEGA3 = "omega3"
    OMEGA4 = "omega4"
    SEPARATRIX = "separatrix"


class Approach(enum.Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    NOT_MONOTONE = "not_monotone"


@dataclass(frozen=True)
class FoliationField:
    """Projected characteristic foliation field near a hyperbolic point.

    ``correction``, when given, is added to the linear right-hand side; it
    receives and returns a complex number.  All conclusions drawn by the
    analysis functions (saddle type, tangencies, regions) are linear-part
    phenomena.
    """

    gamma: float
    alpha1: float = 0.0
    correction: Optional[Callable[[complex], complex]] = None

    def __post_init__(self):
        a = self.matrix
        det = float(np.linalg.det(a))
        if not det < 0.0:
            raise OutOfRange(
                "linear part is not a saddle (needs gamma > 1/2)",
                gamma=self.gamma, det=det,
            )

    @property
    def matrix(self) -> np.ndarray:
        g, a1 = self.gamma, self.alpha1
        return np.array([
            [2.0 * g + 1.0, a1 * (2.0 * g - 1.0)],
            [a1 * (2.0 * g + 1.0), -(2.0 * g - 1.0)],
        ])

    def velocity(self, z: complex | np.ndarray) -> complex | np.ndarray:
        z = np.asarray(z, dtype=complex)
        a = self.matrix
        vx = a[0, 0] * z.real + a[0, 1] * z.imag
        vy = a[1, 0] * z.real + a[1, 1] * z.imag
        v = vx + 1j * vy
        if self.correction is not None:
            v = v + np.vectorize(self.correction)(z) if v.shape else v + self.correction(complex(z))
        if v.shape == ():
            return complex(v)
        return v


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    points: np.ndarray  # complex samples z(t)


def linear_analysis(field: FoliationField) -> tuple[tuple[float, float], tuple[np.ndarray, np.ndarray]]:
    """Eigenvalues and eigendirections of the linear part.

    Returns ((lam_unstable, lam_stable), (v_unstable, v_stable)): two real
    eigenvalues of opposite sign with unit eigenvectors.  The basis is
    oriented (det > 0) so that region numbering is consistent.
    """
    vals, vecs = np.linalg.eig(field.matrix)
    vals = vals.real
    vecs = vecs.real
    order = np.argsort(-vals)
    vals = vals[order]
    vecs = vecs[:, order]
    out = []
    for j in range(2):
        v = vecs[:, j]
        i = int(np.argmax(np.abs(v)))
        if v[i] < 0:
            v = -v
        out.append(v / np.linalg.norm(v))
    v_u, v_s = out
    if v_u[0] * v_s[1] - v_u[1] * v_s[0] < 0:
        v_s = -v_s
    return (float(vals[0]), float(vals[1])), (v_u, v_s)


def integrate_leaf(
    field: FoliationField,
    z0: complex,
    t_span: tuple[float, float] = (0.0, 1.0),
    step: float = 1e-3,
    divergence_bound: float = 1e12,
) -> Trajectory:
    """Integrate one leaf with a fixed-step 4th-order scheme.

    For the linear field the error against the exact matrix-exponential flow
    is O(step^4) per unit time.  Raises :class:`StepTooLarge` when the state
    passes the divergence guard.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    t0, t1 = t_span
    if not t1 > t0:
        raise ValueError("t_span must be increasing")
    n = int(np.ceil((t1 - t0) / step))
    times = [t0]
    points = [complex(z0)]
    z = complex(z0)
    t = t0
    for _ in range(n):
        h = min(step, t1 - t)
        k1 = field.velocity(z)
        k2 = field.velocity(z + 0.5 * h * k1)
        k3 = field.velocity(z + 0.5 * h * k2)
        k4 = field.velocity(z + h * k3)
        z = z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = t + h
        if not np.isfinite(z.real) or not np.isfinite(z.imag) or abs(z) > divergence_bound:
            raise StepTooLarge("trajectory diverged; reduce the step or span",
                               t=t, magnitude=abs(z))
        times.append(t)
        points.append(z)
    return Trajectory(times=np.asarray(times), points=np.asarray(points))


def region_of(field: FoliationField, z: complex, tol: float = 1e-9) -> Region:
    """Saddle region containing z, by signs of eigen-coordinates.

    Omega_1 is the sector between the unstable and stable directions,
    continuing counterclockwise through Omega_4.  Points within relative
    ``tol`` of an eigenline classify as SEPARATRIX.  Region labels are
    invariant along trajectories.
    """
    z = complex(z)
    if z == 0:
        raise OriginQuery("the origin is the fixed point, not in any region")
    _, (v_u, v_s) = linear_analysis(field)
    basis = np.column_stack([v_u, v_s])
    c = np.linalg.solve(basis, np.array([z.real, z.imag]))
    scale = np.abs(c).max()
    if np.abs(c).min() <= tol * scale:
        return Region.SEPARATRIX
    if c[0] > 0 and c[1] > 0:
        return Region.OMEGA1
    if c[0] < 0 and c[1] > 0:
        return Region.OMEGA2
    if c[0] < 0 and c[1] < 0:
        return Region.OMEGA3
    return Region.OMEGA4


def detect_tangency(
    field: FoliationField,
    curve: np.ndarray,
    max_spacing: Optional[float] = None,
    angle_tol: float = 1e-9,
    closed: bool = False,
) -> Optional[complex]:
    """First point where the field is tangent to a sampled curve, if any.

    Tangency means the field direction and the discrete curve tangent are
    parallel: their normalized cross product either vanishes within
    ``angle_tol`` at a sample or changes sign between adjacent samples.
    Raises :class:`UndersampledCurve` for sparse input.
    """
    curve = np.asarray(curve, dtype=complex)
    if curve.size < 3:
        raise UndersampledCurve("need at least 3 samples", size=int(curve.size))
    gaps = np.abs(np.diff(curve))
    if closed:
        gaps = np.append(gaps, abs(curve[0] - curve[-1]))
    if max_spacing is not None and gaps.max() > max_spacing:
        raise UndersampledCurve("adjacent samples too far apart",
                                max_gap=float(gaps.max()), bound=max_spacing)

    if closed:
        tangent = np.roll(curve, -1) - np.roll(curve, 1)
    else:
        tangent = np.empty_like(curve)
        tangent[1:-1] = curve[2:] - curve[:-2]
        tangent[0] = curve[1] - curve[0]
        tangent[-1] = curve[-1] - curve[-2]

    vel = np.asarray(field.velocity(curve))
    norm = np.abs(vel) * np.abs(tangent)
    valid = norm > 1e-300
    cross = np.zeros(curve.shape)
    cross[valid] = (np.conj(vel[valid]) * tangent[valid]).imag / norm[valid]

    hit = valid & (np.abs(cross) <= angle_tol)
    if np.any(hit):
        return complex(curve[int(np.flatnonzero(hit)[0])])

    idx = np.arange(curve.size - 1)
    if closed:
        idx = np.arange(curve.size)
    for k in idx:
        k2 = (k + 1) % curve.size
        if not (valid[k] and valid[k2]):
            continue
        if cross[k] * cross[k2] < 0:
            w = abs(cross[k]) / (abs(cross[k]) + abs(cross[k2]))
            return complex(curve[k] + w * (curve[k2] - curve[k]))
    return None


def points_in_polygon(points: np.ndarray, polygon: np.ndarray) -> np.ndarray:
    """Boolean mask of points strictly inside a closed polygon (winding rule)."""
    points = np.asarray(points, dtype=complex).ravel()
    poly = np.asarray(polygon, dtype=complex).ravel()
    px, py = points.real, points.imag
    wn = np.zeros(points.size, dtype=int)
    for k in range(poly.size):
        ax, ay = poly[k].real, poly[k].imag
        b = poly[(k + 1) % poly.size]
        bx, by = b.real, b.imag
        is_left = (bx - ax) * (py - ay) - (px - ax) * (by - ay)
        up = (ay <= py) & (by > py) & (is_left > 0)
        down = (ay > py) & (by <= py) & (is_left < 0)
        wn += up.astype(int) - down.astype(int)
    return wn != 0


def _contains(outer: np.ndarray, inner: np.ndarray) -> bool:
    return bool(np.all(points_in_polygon(inner, outer)))


def classify_approach(domains: list[np.ndarray]) -> Approach:
    """Monotonicity of a family of closed boundary curves.

    INSIDE when the enclosed regions strictly increase along the list,
    OUTSIDE when they strictly decrease, NOT_MONOTONE otherwise (this is a
    returned value, not an error).
    """
    if len(domains) < 2:
        raise ValueError("need at least two curves")
    increasing = True
    decreasing = True
    for a, b in zip(domains, domains[1:]):
        a = np.asarray(a, dtype=complex)
        b = np.asarray(b, dtype=complex)
        a_in_b = _contains(b, a)
        b_in_a = _contains(a, b)
        if not (a_in_b and not b_in_a):
            increasing = False
        if not (b_in_a and not a_in_b):
            decreasing = False
        if not increasing and not decreasing:
            return Approach.NOT_MONOTONE
    if increasing:
        return Approach.INSIDE
    return Approach.OUTSIDE


def admissible_mu(gamma: float) -> float:
    """Half-angle mu of the admissible sectors: chi(pi/2 ± mu) = 0.

    Strictly between 0 and pi/4 for gamma > 1.
    """
    if not gamma > 1.0:
        raise OutOfRange("gamma must exceed 1", gamma=gamma)
    return 0.5 * float(np.arccos(1.0 / gamma))


@dataclass(frozen=True)
class AdmissibleRegions:
    """The two sectors D+ and D- where the model graph function is negative.

    D+ meets the upper imaginary axis, D- the lower.  Both are of the form
    {|Re z| < tan(mu') |Im z|} near the origin.
    """

    gamma: float

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise OutOfRange("gamma must exceed 1", gamma=self.gamma)

    @property
    def mu(self) -> float:
        return admissible_mu(self.gamma)

    def region_of(self, z: complex) -> Optional[str]:
        """'D+', 'D-' or None for a point outside both sectors."""
        z = complex(z)
        if z == 0 or model_psi(self.gamma, z) >= 0:
            return None
        return "D+" if z.imag > 0 else "D-"

    def boundary_angles(self) -> tuple[float, float]:
        """Angles of the two boundary rays of D+ (D- is the reflection)."""
        mu = self.mu
        return (np.pi / 2.0 - mu, np.pi / 2.0 + mu)


def chi_zero_defect(gamma: float) -> float:
    """|chi(pi/2 ± mu)| for mu = admissible_mu(gamma); should be ~0."""
    mu = admissible_mu(gamma)
    vals = model_chi(gamma, np.array([np.pi / 2.0 - mu, np.pi / 2.0 + mu]))
    return float(np.abs(vals).max())
