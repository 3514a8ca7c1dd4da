"""Second-order jets of real surfaces at complex points.

A surface that is locally a graph ``w = g(z)`` with ``g(z) = O(|z|^2)`` has a
complex point at the origin.  The quadratic part

    g(z) = A z^2 + B z conj(z) + C conj(z)^2

is all the data needed to classify the point.  Holomorphic coordinate changes
(absorb the ``z^2`` term into ``w``, rotate ``z``, rescale ``w``, then
symmetrize the remaining anti-holomorphic term by another holomorphic shear)
bring a nondegenerate jet to the canonical form

    w = z conj(z) + gamma * Re(z^2),      gamma = 2|C| / |B| >= 0,

with the point elliptic for ``gamma < 1`` and hyperbolic for ``gamma > 1``.
The reduction is validated against an independent oracle: the winding number
of ``dbar_field`` around the origin is +1 exactly for elliptic points and -1
for hyperbolic ones (see :mod:`levikit.indices`).
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateJet


class PointKind(enum.Enum):
    ELLIPTIC = "elliptic"
    HYPERBOLIC = "hyperbolic"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class LocalJet:
    """Quadratic part of a local graph ``w = A z^2 + B z z̄ + C z̄^2 + o(|z|^2)``.

    Higher-order tails are not stored; they are handled by the cut-off
    truncation in :func:`levikit.surfaces.truncate_tail`.
    """

    A: complex
    B: complex
    C: complex

    def is_nondegenerate(self, tol: float = 1e-9) -> bool:
        b, c = abs(self.B), abs(self.C)
        return b > 0.0 and abs(b - 2.0 * c) > tol * b

    def rotated(self, theta: float) -> "LocalJet":
        """Jet of the same surface after the reparameterization z -> e^{i theta} z."""
        ph = np.exp(1j * theta)
        return LocalJet(self.A * ph**2, self.B, self.C * np.conj(ph) ** 2)

    def scaled(self, lam: float) -> "LocalJet":
        """Jet after the reparameterization w -> lam * w, lam > 0."""
        return LocalJet(self.A * lam, self.B * lam, self.C * lam)

    def to_json_dict(self) -> dict:
        return {
            "A": [self.A.real, self.A.imag],
            "B": [self.B.real, self.B.imag],
            "C": [self.C.real, self.C.imag],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "LocalJet":
        def c(v):
            return complex(v[0], v[1])

        return cls(c(data["A"]), c(data["B"]), c(data["C"]))

    @classmethod
    def from_json(cls, text: str) -> "LocalJet":
        return cls.from_json_dict(json.loads(text))


@dataclass(frozen=True)
class CanonicalJet:
    """Canonical form ``w = z z̄ + gamma Re z^2`` with its classification."""

    gamma: float
    kind: PointKind

    def to_json_dict(self) -> dict:
        return {"gamma": self.gamma, "kind": self.kind.value}


@dataclass(frozen=True)
class LocalDefiningFunction:
    """Defining function of the ambient hypersurface near a hyperbolic point.

    rho(z, w) = -Re w + alpha1 Im w + |z|^2 + alpha2 |w|^2 + gamma Re z^2
                + Re[(alpha3 + i alpha4) z conj(w)]  + o(|z|^2)

    No constraints are imposed on the alpha_j beyond finiteness.
    """

    alpha1: float
    alpha2: float
    alpha3: float
    alpha4: float
    gamma: float

    def evaluate(self, z: complex, w: complex) -> float:
        z = complex(z)
        w = complex(w)
        value = -w.real + self.alpha1 * w.imag + abs(z) ** 2
        value += self.alpha2 * abs(w) ** 2 + self.gamma * (z * z).real
        value += ((self.alpha3 + 1j * self.alpha4) * z * np.conj(w)).real
        return float(value)


def normalize_jet(jet: LocalJet, tol: float = 1e-9) -> CanonicalJet:
    """Reduce a jet to canonical form and classify the complex point.

    The Bishop invariant is ``gamma = 2|C| / |B|``.  A jet is degenerate when
    ``B = 0`` or when ``| |B| - 2|C| |  <= tol * |B|`` (gamma within relative
    tolerance of 1); degeneracy raises :class:`DegenerateJet`.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    b = abs(jet.B)
    c = abs(jet.C)
    if b == 0.0:
        raise DegenerateJet("jet has B = 0; no Bishop normal form", B=0.0)
    if abs(b - 2.0 * c) <= tol * b:
        raise DegenerateJet(
            "jet is degenerate: |B| and 2|C| coincide within tolerance",
            abs_B=b, abs_2C=2.0 * c, tol=tol,
        )
    gamma = 2.0 * c / b
    kind = PointKind.ELLIPTIC if gamma < 1.0 else PointKind.HYPERBOLIC
    return CanonicalJet(gamma=float(gamma), kind=kind)


def dbar_field(jet: LocalJet, z: complex | np.ndarray) -> complex | np.ndarray:
    """d/d(conj z) of the jet graph function: ``B z + 2 C conj(z)``.

    Its winding number around an isolated complex point is the index of the
    point; the holomorphic ``A z^2`` term does not contribute.
    """
    result = jet.B * np.asarray(z) + 2.0 * jet.C * np.conj(z)
    if np.isscalar(z) or np.asarray(z).shape == ():
        return complex(result)
    return result


def model_psi(gamma: float, z: complex | np.ndarray) -> float | np.ndarray:
    """Canonical graph function ``psi(z) = |z|^2 + gamma Re z^2``.

    In polar form ``psi(r e^{i theta}) = r^2 (1 + gamma cos 2 theta)``.
    """
    z = np.asarray(z)
    value = (z * np.conj(z)).real + gamma * (z * z).real
    if value.shape == ():
        return float(value)
    return value


def model_chi(gamma: float, theta: float | np.ndarray) -> float | np.ndarray:
    """Angular factor ``chi(theta) = 1 + gamma cos(2 theta)`` of ``model_psi``."""
    return 1.0 + gamma * np.cos(2.0 * np.asarray(theta))
