"""Explicit geometry of the model quadric surfaces ``w = |z|^2 + gamma Re z^2``.

Provides the level-set disc families (ellipses below gamma = 1, hyperbola
sections above), the smooth cut-off that truncates higher-order tails, the
bump-perturbed gluing level set whose zero curve bounds the disc passing
above a hyperbolic point, and random sphere inventories obeying the index
identities.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DeltaTooLarge, NotSecondOrderSmall, OutOfRange, WrongKind
from .foliation import admissible_mu
from .indices import SphereInventory
from .jets import PointKind, model_chi, model_psi


@dataclass(frozen=True)
class ModelQuadric:
    """Model surface with Bishop invariant gamma (gamma != 1)."""

    gamma: float

    def __post_init__(self):
        if self.gamma < 0 or self.gamma == 1.0:
            raise OutOfRange("gamma must be nonnegative and different from 1",
                             gamma=self.gamma)

    @property
    def kind(self) -> PointKind:
        return PointKind.ELLIPTIC if self.gamma < 1.0 else PointKind.HYPERBOLIC

    def psi(self, z: complex | np.ndarray) -> float | np.ndarray:
        return model_psi(self.gamma, z)


@dataclass(frozen=True)
class EllipticDisc:
    """One member of the elliptic family: the level disc at Re w = t.

    ``boundary`` is the ellipse sampled counterclockwise, the orientation
    for which the family orientation (increasing t, increasing angle) agrees
    with the surface orientation, making the family positive.
    """

    t: float
    gamma: float
    boundary: np.ndarray

    @property
    def semi_axes(self) -> tuple[float, float]:
        return (np.sqrt(self.t / (1.0 + self.gamma)),
                np.sqrt(self.t / (1.0 - self.gamma)))

    def disc_point(self, u: complex | np.ndarray) -> complex | np.ndarray:
        """Map the closed unit disc onto the enclosed region (affinely)."""
        u = np.asarray(u, dtype=complex)
        a, b = self.semi_axes
        out = a * u.real + 1j * b * u.imag
        if out.shape == ():
            return complex(out)
        return out

    @property
    def w_level(self) -> float:
        return self.t


def elliptic_disc_family(
    q: ModelQuadric, t: float, n_samples: int = 256
) -> EllipticDisc:
    """Level disc of an elliptic model at height t > 0.

    The boundary is the ellipse (1 + gamma) x^2 + (1 - gamma) y^2 = t;
    boundaries for different t are disjoint and nested.
    """
    if q.kind is not PointKind.ELLIPTIC:
        raise WrongKind("elliptic family needs 0 <= gamma < 1", gamma=q.gamma)
    if t <= 0:
        raise OutOfRange("level t must be positive", t=t)
    s = np.linspace(0.0, 2.0 * np.pi, n_samples, endpoint=False)
    a = np.sqrt(t / (1.0 + q.gamma))
    b = np.sqrt(t / (1.0 - q.gamma))
    boundary = a * np.cos(s) + 1j * b * np.sin(s)
    return EllipticDisc(t=t, gamma=q.gamma, boundary=boundary)


def hyperbolic_section_family(
    q: ModelQuadric, t: float, n_samples: int = 256, r_max: float = 2.0
) -> list[np.ndarray]:
    """Level curves of a hyperbolic model at height t, clipped to |z| <= r_max.

    For t < 0 the two branches lie inside the admissible sectors D+ and D-
    (returned in that order) with asymptote angles pi/2 ± mu.  For t = 0 the
    degenerate level set is the pair of lines theta = pi/2 ± mu.  For t > 0
    the branches lie in the complementary sectors around the real axis.
    """
    if q.kind is not PointKind.HYPERBOLIC:
        raise WrongKind("hyperbolic sections need gamma > 1", gamma=q.gamma)
    g = q.gamma
    mu = admissible_mu(g)
    if t == 0.0:
        s = np.linspace(-r_max, r_max, n_samples)
        line1 = s * np.exp(1j * (np.pi / 2.0 - mu))
        line2 = s * np.exp(1j * (np.pi / 2.0 + mu))
        return [line1, line2]

    if t < 0:
        centers = [np.pi / 2.0, -np.pi / 2.0]
        half = mu
    else:
        centers = [0.0, np.pi]
        half = np.pi / 2.0 - mu

    # clip each branch where r(theta) = sqrt(t / chi(theta)) <= r_max
    cos_bound = (t / r_max**2 - 1.0) / g
    if abs(cos_bound) >= 1.0:
        raise OutOfRange("no part of the level set lies within r_max",
                         t=t, r_max=r_max)
    spread = 0.5 * float(np.arccos(cos_bound))
    curves = []
    for c in centers:
        if t < 0:
            theta = np.linspace(c - (np.pi / 2.0 - spread), c + (np.pi / 2.0 - spread),
                                n_samples)
        else:
            theta = np.linspace(c - spread, c + spread, n_samples)
        chi = model_chi(g, theta)
        r = np.sqrt(t / chi)
        curves.append(r * np.exp(1j * theta))
    return curves


def section_domain_boundary(
    q: ModelQuadric, t: float, r_max: float = 1.0, n_samples: int = 256,
    region: str = "D+",
) -> np.ndarray:
    """Closed boundary of {psi < t} within |z| < r_max, one sector component.

    Built from the hyperbola branch plus the closing circular arc, oriented
    counterclockwise.  These nested domains are what the approach classifier
    consumes: they increase as t rises toward 0.
    """
    if q.kind is not PointKind.HYPERBOLIC:
        raise WrongKind("sector domains need gamma > 1", gamma=q.gamma)
    if t >= 0:
        raise OutOfRange("sector domains exist for t < 0 only", t=t)
    g = q.gamma
    center = np.pi / 2.0 if region == "D+" else -np.pi / 2.0
    cos_bound = (t / r_max**2 - 1.0) / g
    if cos_bound <= -1.0:
        raise OutOfRange("level set does not reach radius r_max", t=t, r_max=r_max)
    spread = 0.5 * float(np.arccos(np.clip(cos_bound, -1.0, 1.0)))
    half = np.pi / 2.0 - spread
    n_arc = max(n_samples // 2, 16)
    theta_b = np.linspace(center - half, center + half, n_arc)
    r_b = np.sqrt(t / model_chi(g, theta_b))
    branch = r_b * np.exp(1j * theta_b)
    # close along the circle |z| = r_max, returning to the branch start
    theta_c = np.linspace(center + half, center - half, n_arc)[1:-1]
    circle = r_max * np.exp(1j * theta_c)
    curve = np.concatenate([branch, circle])
    # counterclockwise: the branch runs with increasing theta below the arc;
    # signed area decides the final orientation
    if _signed_area(curve) < 0:
        curve = curve[::-1]
    return curve


def _signed_area(curve: np.ndarray) -> float:
    x, y = curve.real, curve.imag
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def smooth_step(t: float | np.ndarray) -> float | np.ndarray:
    """C-infinity step: 0 for t <= 1, 1 for t >= 2."""
    t = np.asarray(t, dtype=float)

    def h(u):
        out = np.zeros_like(u)
        positive = u > 0
        out[positive] = np.exp(-1.0 / u[positive])
        return out

    a = h(t - 1.0)
    b = h(2.0 - t)
    out = a / (a + b)
    if out.shape == ():
        return float(out)
    return out


def second_order_slope(z: np.ndarray, values: np.ndarray) -> float:
    """Log-log growth exponent of |values| against |z| near 0."""
    r = np.abs(np.asarray(z))
    v = np.abs(np.asarray(values))
    keep = (r > 0) & (v > 0)
    if keep.sum() < 2:
        return np.inf
    slope, _ = np.polyfit(np.log(r[keep]), np.log(v[keep]), 1)
    return float(slope)


def truncate_tail(
    z: np.ndarray, phi: np.ndarray, epsilon: float, slope_margin: float = 0.1
) -> np.ndarray:
    """Multiply a sampled higher-order tail by the cut-off chi(|z| / epsilon).

    The factor vanishes for |z| < epsilon and is 1 for |z| > 2 epsilon, so
    the suppressed part (1 - chi) phi tends to 0 in C^2 norm as epsilon
    shrinks.  Raises :class:`NotSecondOrderSmall` unless phi decays strictly
    faster than |z|^2 (measured by log-log slope on the samples).
    """
    z = np.asarray(z, dtype=complex)
    phi = np.asarray(phi, dtype=float)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if np.any(phi != 0.0):
        slope = second_order_slope(z, phi)
        if slope <= 2.0 + slope_margin:
            raise NotSecondOrderSmall(
                "sampled tail does not vanish to second order",
                slope=slope,
            )
    return phi * smooth_step(np.abs(z) / epsilon)


def c2_norm_estimate(values: np.ndarray, spacing: float) -> float:
    """Empirical C^2 norm of a function sampled on a regular 2-d grid.

    Max of the function, its gradient and its second divided differences.
    """
    values = np.asarray(values, dtype=float)
    gx, gy = np.gradient(values, spacing, spacing)
    gxx, gxy = np.gradient(gx, spacing, spacing)
    gyx, gyy = np.gradient(gy, spacing, spacing)
    return float(
        np.abs(values).max()
        + max(np.abs(gx).max(), np.abs(gy).max())
        + max(np.abs(gxx).max(), np.abs(gxy).max(),
              np.abs(gyx).max(), np.abs(gyy).max())
    )


@dataclass(frozen=True)
class GluingPerturbation:
    """Radial bump profile scaled by delta, subtracted from the model graph.

    ``radii``/``values`` sample the bump; evaluation interpolates linearly
    and is zero beyond the last radius (compact support).  The bump must be
    nonnegative with a positive value at 0.  ``delta = 0`` encodes the
    unperturbed limit configuration.
    """

    delta: float
    radii: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        radii = np.asarray(self.radii, dtype=float)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "values", values)
        if self.delta < 0:
            raise OutOfRange("delta must be nonnegative", delta=self.delta)
        if radii.ndim != 1 or radii.size < 2 or np.any(np.diff(radii) <= 0):
            raise ValueError("radii must be strictly increasing")
        if values.shape != radii.shape or np.any(values < 0):
            raise ValueError("bump values must be nonnegative, matching radii")
        if values[0] <= 0:
            raise ValueError("bump must be positive at r = 0")
        if values[-1] != 0.0:
            raise ValueError("bump must vanish at its support radius")

    @property
    def support_radius(self) -> float:
        return float(self.radii[-1])

    def bump(self, r: float | np.ndarray) -> float | np.ndarray:
        out = np.interp(np.asarray(r, dtype=float), self.radii, self.values,
                        left=self.values[0], right=0.0)
        if out.shape == ():
            return float(out)
        return out


def default_bump(delta: float, radius: float = 0.3, n: int = 257) -> GluingPerturbation:
    """Polynomial bump (1 - (r/R)^2)^3 on r < R, the default gluing profile."""
    r = np.linspace(0.0, radius, n)
    v = (1.0 - (r / radius) ** 2) ** 3
    v[-1] = 0.0
    return GluingPerturbation(delta=delta, radii=r, values=v)


def _polar_root(q: ModelQuadric, pert: GluingPerturbation, theta: float,
                r_view: float, tol: float = 1e-12) -> float:
    """Radius where r^2 chi(theta) = delta * bump(r), for chi(theta) >= 0."""
    chi = float(model_chi(q.gamma, theta))
    R = pert.support_radius

    def f(r: float) -> float:
        return r * r * chi - pert.delta * pert.bump(r)

    if pert.delta == 0.0:
        return 0.0 if chi > 0 else R
    if chi <= 0:
        return R
    hi = R
    while f(hi) <= 0:
        hi *= 2.0
        if hi > 1e6 * max(R, 1.0):
            raise DeltaTooLarge("no bounded zero curve for this delta",
                                delta=pert.delta, theta=theta)
    lo = 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def glued_boundary_curve(
    q: ModelQuadric,
    pert: GluingPerturbation,
    n_samples: int = 720,
    r_view: float = 1.0,
) -> np.ndarray:
    """Boundary of {psi < delta * bump} within the viewing disc |z| < r_view.

    This is the zero curve of the bump-perturbed graph in the plane {w = 0}:
    a simple closed curve that coincides with the boundary of the two
    admissible-sector domains outside the bump support and smooths across
    the origin region, staying at distance about sqrt(delta bump(0)/(1+gamma))
    from the hyperbolic point.  With delta = 0 it degenerates to the limit
    configuration (sector rays meeting at the origin).  As delta decreases,
    the curves shrink toward the limit (outside approach).
    """
    if q.kind is not PointKind.HYPERBOLIC:
        raise WrongKind("gluing needs gamma > 1", gamma=q.gamma)
    g = q.gamma
    mu = admissible_mu(g)
    R = pert.support_radius
    if not r_view > R:
        raise OutOfRange("viewing radius must exceed the bump support",
                         r_view=r_view, support=R)

    n_arc = max(n_samples // 4, 32)
    n_ray = max(n_samples // 16, 8)
    n_win = max(n_samples // 8, 16)

    pieces = []
    # pairs of (sector start, sector end) with chi > 0 inside, plus the
    # cone edge rays and the window arcs crossing D+ / D-
    right_lo, right_hi = -np.pi / 2.0 + mu, np.pi / 2.0 - mu
    left_lo, left_hi = np.pi / 2.0 + mu, 3.0 * np.pi / 2.0 - mu

    for lo, hi in ((right_lo, right_hi), (left_lo, left_hi)):
        theta = np.linspace(lo, hi, n_arc)
        r = np.array([_polar_root(q, pert, th, r_view) for th in theta])
        pieces.append(r * np.exp(1j * theta))
        # outgoing edge ray
        edge = hi
        rr = np.linspace(r[-1], r_view, n_ray)[1:]
        pieces.append(rr * np.exp(1j * edge))
        # window arc across the admissible cone
        theta_w = np.linspace(edge, edge + 2.0 * mu, n_win)[1:]
        pieces.append(r_view * np.exp(1j * theta_w))
        # incoming edge ray toward the next sector arc
        r_next = _polar_root(q, pert, edge + 2.0 * mu, r_view)
        rr = np.linspace(r_view, r_next, n_ray)[1:-1]
        pieces.append(rr * np.exp(1j * (edge + 2.0 * mu)))

    curve = np.concatenate(pieces)
    if not is_simple_closed(curve):
        raise DeltaTooLarge("zero curve is not a simple closed curve",
                            delta=pert.delta)
    return curve


def is_simple_closed(curve: np.ndarray, tol: float = 1e-12) -> bool:
    """Check a closed polyline for self-intersections (brute force)."""
    curve = np.asarray(curve, dtype=complex)
    n = curve.size
    a = curve
    b = np.roll(curve, -1)
    for i in range(n):
        # vectorized segment-vs-segment orientation test against segment i
        js = np.arange(i + 2, n if i > 0 else n - 1)
        if js.size == 0:
            continue
        p, r = a[i], b[i] - a[i]
        qs, ss = a[js], b[js] - a[js]
        denom = (r * np.conj(ss)).imag * -1.0  # cross(r, s)
        dq = qs - p
        t_num = (dq * np.conj(ss)).imag * -1.0
        u_num = (dq * np.conj(r)).imag * -1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            t = t_num / denom
            u = u_num / denom
        crossing = (np.abs(denom) > tol) & (t > tol) & (t < 1 - tol)
        crossing &= (u > tol) & (u < 1 - tol)
        if np.any(crossing):
            return False
    return True


def hausdorff_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Symmetric Hausdorff distance between two sampled curves."""
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    d = np.abs(a[:, None] - b[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def random_inventory(seed: Optional[int], h_total_max: int) -> SphereInventory:
    """Random sphere census satisfying e_pm = h_pm + 1 with chern value 0.

    The total hyperbolic count is uniform on 0..h_total_max and each
    hyperbolic point's sign is a fair coin.
    """
    if h_total_max < 0:
        raise ValueError("h_total_max must be nonnegative")
    rng = random.Random(seed)
    h_total = rng.randint(0, h_total_max)
    h_plus = sum(rng.random() < 0.5 for _ in range(h_total))
    h_minus = h_total - h_plus
    inventory = SphereInventory(
        e_plus=h_plus + 1, e_minus=h_minus + 1,
        h_plus=h_plus, h_minus=h_minus, chern_value=0,
    )
    inventory.validate()
    return inventory
