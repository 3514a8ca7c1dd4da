"""Puiseux fitting and boundary asymptotics of hyperbolic disc data.

A disc approaching a hyperbolic point is a graph ``w = g(z)`` over a sector
domain, with ``g`` given by a ramified expansion

    g(z) = sum over k of  g_k z^{k/m},     k ranging over integers > 2 m.

The absence of the ``k = 2m`` term (exponent exactly 2) is what makes the
approach "good": it forces ``g(0) = g'(0) = g''(0) = 0`` and pins the
boundary rays of the domain to the admissible-sector angles ``pi/2 ± mu``.
The boundary angle obeys

    theta(r) = pi/2 ± mu - (|a| / nu) r^{k/m - 2} + O(r^{(k+1)/m - 2}),

and the uniqueness of such discs reduces to a sector-width count: the real
part of the first differing term ``c_q z^{q/m}`` is positive only on a
sector of width ``pi m / q``, smaller than the domain's asymptotic angle.

All fractional powers use one fixed branch with the cut along the negative
imaginary axis, so evaluation is single-valued on a sector containing the
admissible regions around the positive imaginary axis.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    IllConditioned,
    InsufficientSamples,
    InvalidSeries,
    UndersampledCurve,
)
from .foliation import admissible_mu

_SELECT_FACTOR = 10.0  # residual slack when picking the smallest ramification
_COND_LIMIT = 1e13


def branch_power(z: complex | np.ndarray, p: float) -> complex | np.ndarray:
    """z**p on the branch cut along the negative imaginary axis.

    Arguments are taken in [-pi/2, 3 pi/2), so the positive imaginary axis
    (where the admissible regions live) is far from the cut.
    """
    z = np.asarray(z, dtype=complex)
    theta = np.angle(z)
    theta = np.where(theta < -np.pi / 2.0, theta + 2.0 * np.pi, theta)
    out = np.abs(z) ** p * np.exp(1j * theta * p)
    if out.shape == ():
        return complex(out)
    return out


@dataclass(frozen=True)
class PuiseuxSeries:
    """Ramified expansion ``sum g_k z^{k/m}`` with integer numerators k.

    ``coeffs`` maps the numerator k to the coefficient; stored numerators
    satisfy k >= 2 m.  ``branch`` documents the power branch in use.
    """

    m: int
    coeffs: dict[int, complex]
    branch: str = "principal, cut along the negative imaginary axis"
    residual: float = 0.0

    def __post_init__(self):
        if self.m < 1:
            raise InvalidSeries("ramification m must be a positive integer", m=self.m)
        for k in self.coeffs:
            if k < 2 * self.m:
                raise InvalidSeries("exponent numerator below 2m", k=k, m=self.m)

    def evaluate(self, z: complex | np.ndarray) -> complex | np.ndarray:
        z = np.asarray(z, dtype=complex)
        total = np.zeros(z.shape, dtype=complex)
        for k, c in sorted(self.coeffs.items()):
            total = total + c * branch_power(z, k / self.m)
        if total.shape == ():
            return complex(total)
        return total

    def max_coefficient(self) -> float:
        if not self.coeffs:
            return 0.0
        return max(abs(c) for c in self.coeffs.values())

    def leading_index(self, rel_tol: float = 1e-9) -> Optional[int]:
        """Smallest numerator whose coefficient is non-negligible."""
        top = self.max_coefficient()
        if top == 0.0:
            return None
        for k in sorted(self.coeffs):
            if abs(self.coeffs[k]) > rel_tol * top:
                return k
        return None

    def leading_coefficient(self, rel_tol: float = 1e-9) -> complex:
        k = self.leading_index(rel_tol)
        return self.coeffs[k] if k is not None else 0.0

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "branch": self.branch,
            "residual": self.residual,
            "coefficients": {
                str(k): [c.real, c.imag] for k, c in sorted(self.coeffs.items())
            },
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "PuiseuxSeries":
        coeffs = {int(k): complex(v[0], v[1]) for k, v in data["coefficients"].items()}
        return cls(m=int(data["m"]), coeffs=coeffs,
                   residual=float(data.get("residual", 0.0)))


def fit_puiseux(
    samples: Sequence[tuple[complex, complex]],
    m_max: int = 4,
    k_max: int = 12,
    cond_limit: float = _COND_LIMIT,
) -> PuiseuxSeries:
    """Least-squares fit of a ramified series over candidate exponent grids.

    For each candidate ramification m the exponents k/m, k = 2m .. k_max, are
    fitted by column-scaled least squares; the returned series is the one
    with the smallest ramification among those whose relative residual is
    within a factor of the best.  Samples must avoid z = 0 and should sit in
    a sector away from the branch cut.
    """
    zs = np.asarray([z for z, _ in samples], dtype=complex)
    ws = np.asarray([w for _, w in samples], dtype=complex)
    if zs.size == 0 or np.any(zs == 0):
        raise InsufficientSamples("samples must be nonempty with z != 0")
    w_norm = float(np.linalg.norm(ws))

    fits: dict[int, tuple[dict[int, complex], float]] = {}
    skipped_cond = 0
    candidates = 0
    for m in range(1, m_max + 1):
        ks = np.arange(2 * m, k_max + 1)
        if ks.size == 0:
            continue
        candidates += 1
        if zs.size < 2 * ks.size:
            continue
        columns = np.stack([branch_power(zs, k / m) for k in ks], axis=1)
        scale = np.linalg.norm(columns, axis=0)
        scaled = columns / scale
        if np.linalg.cond(scaled) > cond_limit:
            skipped_cond += 1
            continue
        sol, *_ = np.linalg.lstsq(scaled, ws, rcond=None)
        resid = float(np.linalg.norm(scaled @ sol - ws)) / max(w_norm, 1e-300)
        fits[m] = ({int(k): complex(c) for k, c in zip(ks, sol / scale)}, resid)

    if not fits:
        if skipped_cond == candidates and candidates > 0:
            raise IllConditioned("every candidate design matrix is ill-conditioned",
                                 cond_limit=cond_limit)
        raise InsufficientSamples(
            "not enough samples for any candidate exponent grid",
            n_samples=int(zs.size), m_max=m_max, k_max=k_max,
        )

    best = min(resid for _, resid in fits.values())
    threshold = max(_SELECT_FACTOR * best, 1e-12)
    m_chosen = min(m for m, (_, resid) in fits.items() if resid <= threshold)
    coeffs, resid = fits[m_chosen]
    return PuiseuxSeries(m=m_chosen, coeffs=coeffs, residual=resid)


def validate_leading_term(series: PuiseuxSeries, tol: float = 1e-6) -> bool:
    """True when the exponent-2 term (numerator 2m) is absent.

    The test is relative: |g_{2m}| must not exceed ``tol`` times the largest
    coefficient magnitude, which makes the predicate invariant under
    rescaling of the graph function.
    """
    top = series.max_coefficient()
    if top == 0.0:
        return True
    return abs(series.coeffs.get(2 * series.m, 0.0)) <= tol * top


class BranchSide(enum.Enum):
    PLUS = "plus"     # boundary ray at pi/2 + mu
    MINUS = "minus"   # boundary ray at pi/2 - mu


@dataclass(frozen=True)
class AsymptoticProfile:
    """Boundary-angle law theta(r) = pi/2 ± mu - (|a|/nu_const) r^{k/m - 2}.

    The exponent and the sector half-angle are tied by ``k/m = pi / (2 mu)``;
    the constructor enforces this and ``k/m > 2``.  ``nu_const`` is an opaque
    fitted constant.
    """

    mu: float
    k_over_m: float
    abs_a: float
    nu_const: float
    side: BranchSide

    def __post_init__(self):
        if not self.k_over_m > 2.0:
            raise InvalidSeries("leading exponent must exceed 2",
                                k_over_m=self.k_over_m)
        expected = math.pi / (2.0 * self.mu)
        if abs(self.k_over_m - expected) > 1e-9 * expected:
            raise InvalidSeries(
                "exponent and sector half-angle violate pi m / k = 2 mu",
                k_over_m=self.k_over_m, mu=self.mu,
            )
        if self.abs_a < 0 or self.nu_const <= 0:
            raise InvalidSeries("|a| must be >= 0 and nu_const > 0")

    @classmethod
    def from_exponent(cls, k: int, m: int, abs_a: float, nu_const: float,
                      side: BranchSide) -> "AsymptoticProfile":
        return cls(mu=math.pi * m / (2.0 * k), k_over_m=k / m,
                   abs_a=abs_a, nu_const=nu_const, side=side)

    @classmethod
    def from_gamma(cls, gamma: float, abs_a: float, nu_const: float,
                   side: BranchSide) -> "AsymptoticProfile":
        mu = admissible_mu(gamma)
        return cls(mu=mu, k_over_m=math.pi / (2.0 * mu),
                   abs_a=abs_a, nu_const=nu_const, side=side)


def theta_asymptote(profile: AsymptoticProfile, r: float | np.ndarray) -> float | np.ndarray:
    """Boundary angle at radius r; valid for small r (documented r < 0.1)."""
    r = np.asarray(r, dtype=float)
    base = math.pi / 2.0 + (profile.mu if profile.side is BranchSide.PLUS else -profile.mu)
    out = base - (profile.abs_a / profile.nu_const) * r ** (profile.k_over_m - 2.0)
    if out.shape == ():
        return float(out)
    return out


def fit_profile(
    r: np.ndarray,
    theta: np.ndarray,
    k_over_m: float,
    abs_a: float,
    side: BranchSide,
) -> AsymptoticProfile:
    """Recover nu_const from sampled boundary angles theta(r).

    Fits the deviation from the limiting ray against r^{k/m - 2} by least
    squares and solves |a| / nu = slope.
    """
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    mu = math.pi / (2.0 * k_over_m)
    base = math.pi / 2.0 + (mu if side is BranchSide.PLUS else -mu)
    basis = r ** (k_over_m - 2.0)
    slope = float(basis @ (base - theta) / (basis @ basis))
    if slope <= 0:
        raise InvalidSeries("boundary data inconsistent with an inward-bent ray",
                            slope=slope)
    return AsymptoticProfile(mu=mu, k_over_m=k_over_m, abs_a=abs_a,
                             nu_const=abs_a / slope if abs_a > 0 else 1.0,
                             side=side)


def good_approach_check(
    domain_boundary: tuple[np.ndarray, np.ndarray],
    g_data: Sequence[tuple[complex, complex]],
    gamma: float,
    tol: float = 1e-2,
    m_max: int = 4,
    k_max: int = 12,
) -> bool:
    """Decide whether graph data over a sector domain approaches well.

    True when (a) the two boundary curves' innermost tangent angles converge
    to pi/2 - mu and pi/2 + mu (one each) within ``tol``, and (b) the series
    fitted to the graph data has vanishing value and first and second
    derivatives at 0, i.e. leading exponent > 2.  Data on the lower sector
    is normalized by z -> -z first.
    """
    curves = [np.asarray(c, dtype=complex) for c in domain_boundary]
    for c in curves:
        if c.size < 8:
            raise UndersampledCurve("boundary curves need >= 8 samples",
                                    size=int(c.size))
    mu = admissible_mu(gamma)

    inner_im = np.mean([c[np.argmin(np.abs(c))].imag for c in curves])
    if inner_im < 0:
        curves = [-c for c in curves]
        g_data = [(-z, w) for z, w in g_data]

    targets = np.array([math.pi / 2.0 - mu, math.pi / 2.0 + mu])
    matched = []
    for c in curves:
        order = np.argsort(np.abs(c))
        take = max(2, c.size // 10)
        inner = c[order[:take]]
        ang = np.angle(inner)
        ang = np.where(ang < -np.pi / 2.0, ang + 2.0 * np.pi, ang)
        mean_angle = float(np.mean(ang))
        dev = np.abs(targets - mean_angle)
        j = int(np.argmin(dev))
        if dev[j] > tol:
            return False
        matched.append(j)
    if sorted(matched) != [0, 1]:
        return False

    series = fit_puiseux(g_data, m_max=m_max, k_max=k_max)
    return validate_leading_term(series, tol=1e-6)


def sector_positivity_width(q: int, m: int) -> float:
    """Width pi m / q of a maximal sector where Re(c z^{q/m}) can be positive."""
    if q <= 0 or m <= 0:
        raise ValueError("q and m must be positive integers")
    return math.pi * m / q


def measured_positive_arc(
    c: complex, q: int, m: int, n_samples: int = 720
) -> float:
    """Width of the largest positive arc of Re(c z^{q/m}) on the unit circle.

    Sampled on the branch window [-pi/2, 3 pi/2); the companion bound is
    ``sector_positivity_width(q, m)`` up to one sampling step.
    """
    theta = np.linspace(-np.pi / 2.0, 3.0 * np.pi / 2.0, n_samples, endpoint=False)
    z = np.exp(1j * theta)
    values = (c * branch_power(z, q / m)).real
    positive = values > 0
    best = 0
    run = 0
    for flag in positive:
        run = run + 1 if flag else 0
        best = max(best, run)
    step = 2.0 * np.pi / n_samples
    return best * step


class DomainRelation(enum.Enum):
    EQUAL = "equal"
    FIRST_INSIDE_SECOND = "first_inside_second"


class VerdictKind(enum.Enum):
    FORCED_EQUAL = "forced_equal"
    CONTRADICTION_WITNESS = "contradiction_witness"
    HYPOTHESES_EXCLUDED = "hypotheses_excluded"


@dataclass(frozen=True)
class UniquenessVerdict:
    kind: VerdictKind
    detail: str
    q: Optional[int] = None
    positivity_width: Optional[float] = None
    domain_angle: Optional[float] = None


def _common_grid(s1: PuiseuxSeries, s2: PuiseuxSeries) -> tuple[int, dict[int, complex], dict[int, complex]]:
    m = math.lcm(s1.m, s2.m)
    c1 = {k * (m // s1.m): v for k, v in s1.coeffs.items()}
    c2 = {k * (m // s2.m): v for k, v in s2.coeffs.items()}
    return m, c1, c2


def uniqueness_hypotheses(
    series1: PuiseuxSeries,
    series2: PuiseuxSeries,
    domain_relation: DomainRelation,
    tol: float = 1e-9,
) -> UniquenessVerdict:
    """Apply the uniqueness mechanism to two fitted expansions.

    FORCED_EQUAL when the series agree.  When they differ beyond their
    matching leading term, the first differing numerator q witnesses the
    contradiction: Re of that term is positive only on a sector of width
    pi m / q, strictly smaller than the domain's asymptotic angle pi m / k.
    Series whose leading terms already disagree cannot jointly satisfy the
    hypotheses (the boundary-angle law forces equal leading data) and are
    reported HYPOTHESES_EXCLUDED.
    """
    for s in (series1, series2):
        if not validate_leading_term(s):
            raise InvalidSeries("series has a nonvanishing exponent-2 term",
                                m=s.m)
    m, c1, c2 = _common_grid(series1, series2)
    scale = max(series1.max_coefficient(), series2.max_coefficient())
    if scale == 0.0:
        return UniquenessVerdict(VerdictKind.FORCED_EQUAL, "both series vanish")

    keys = sorted(set(c1) | set(c2))
    diffs = [(k, c2.get(k, 0.0) - c1.get(k, 0.0)) for k in keys]
    nonzero = [(k, d) for k, d in diffs if abs(d) > tol * scale]
    if not nonzero:
        return UniquenessVerdict(VerdictKind.FORCED_EQUAL,
                                 "series coincide; graphs are equal")

    lead1 = series1.leading_index()
    lead2 = series2.leading_index()
    k1 = lead1 * (m // series1.m) if lead1 is not None else None
    k2 = lead2 * (m // series2.m) if lead2 is not None else None
    q, _ = nonzero[0]

    if k1 is None or k2 is None or k1 != k2 or q <= min(k1, k2):
        return UniquenessVerdict(
            VerdictKind.HYPOTHESES_EXCLUDED,
            "leading terms disagree; the boundary-angle law forces equal "
            "leading data, so the containment hypotheses cannot hold",
            q=q,
        )
    if domain_relation is DomainRelation.EQUAL:
        return UniquenessVerdict(
            VerdictKind.HYPOTHESES_EXCLUDED,
            "equal domains share boundary values, so differing series are "
            "inconsistent input",
            q=q,
        )
    width = math.pi * m / q
    domain_angle = math.pi * m / k1
    return UniquenessVerdict(
        VerdictKind.CONTRADICTION_WITNESS,
        "first differing term is positive on a sector narrower than the "
        "domain angle, forcing equality",
        q=q, positivity_width=width, domain_angle=domain_angle,
    )
