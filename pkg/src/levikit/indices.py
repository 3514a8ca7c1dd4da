"""Winding numbers, Maslov indices and index bookkeeping for surfaces.

The two computational primitives are the topological degree of a discrete
loop of nonzero complex numbers (:func:`winding`) and the degree of the
kappa map ``B -> det(B)^2 / det(B* B)`` along a loop of totally real frames
(:func:`maslov_of_frames`).  On top of them sit the index of a loop on a
surface given by tangent frames, the split of a surface index into positive
and negative halves, and the boundary balance law
``I_plus(E) - I_minus(E) = I_E(boundary E)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateFrame,
    InconsistentInventory,
    ParityError,
    SingularFrame,
    UndersampledLoop,
    ZeroSample,
)

#: sample count used by convenience constructors for model loops
DEFAULT_SAMPLES = 256


@dataclass(frozen=True)
class SampledLoop:
    """Closed discrete loop of nonzero complex scalars.

    The last sample connects back to the first.  Winding is well defined
    only when consecutive samples subtend an angle < pi; that adequacy
    condition is checked by :func:`winding`.
    """

    samples: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=complex)
        object.__setattr__(self, "samples", samples)
        if samples.ndim != 1 or samples.size == 0:
            raise ValueError("samples must be a nonempty 1-d array")
        if np.any(samples == 0):
            raise ZeroSample("loop contains a zero sample",
                             index=int(np.flatnonzero(samples == 0)[0]))

    def __len__(self) -> int:
        return int(self.samples.size)

    @classmethod
    def from_function(cls, f, n_samples: int = DEFAULT_SAMPLES) -> "SampledLoop":
        """Sample ``f(theta)`` over one period ``theta in [0, 2 pi)``."""
        theta = np.linspace(0.0, 2.0 * np.pi, n_samples, endpoint=False)
        return cls(np.asarray(f(theta), dtype=complex))

    def __mul__(self, other: "SampledLoop") -> "SampledLoop":
        if len(other) != len(self):
            raise ValueError("pointwise product needs equal sample counts")
        return SampledLoop(self.samples * other.samples)


def winding(loop: SampledLoop, step_tol: float = 1e-9) -> int:
    """Topological degree of ``loop / |loop|`` around the origin.

    Sums principal-branch angle increments between consecutive samples; the
    result is an exact integer once every increment is < pi in magnitude.
    Raises :class:`UndersampledLoop` when an increment reaches ``pi - step_tol``.
    """
    s = loop.samples
    ratios = np.roll(s, -1) / s
    steps = np.angle(ratios)
    bad = np.abs(steps) >= np.pi - step_tol
    if np.any(bad):
        raise UndersampledLoop(
            "angle step between consecutive samples reaches pi",
            index=int(np.flatnonzero(bad)[0]),
            step=float(np.abs(steps).max()),
        )
    total = float(steps.sum()) / (2.0 * np.pi)
    degree = int(round(total))
    return degree


@dataclass(frozen=True)
class FrameLoop:
    """Closed loop of invertible matrices representing totally real frames.

    ``frames`` has shape (N,) for scalar frames (n = 1) or (N, n, n) with
    n <= 2.  Only sizes used by the index calculus are supported.
    """

    frames: np.ndarray

    def __post_init__(self):
        frames = np.asarray(self.frames, dtype=complex)
        if frames.ndim == 1:
            frames = frames.reshape(-1, 1, 1)
        if frames.ndim != 3 or frames.shape[1] != frames.shape[2]:
            raise ValueError("frames must have shape (N,) or (N, n, n)")
        if frames.shape[1] > 2:
            raise ValueError("only frame sizes n <= 2 are supported")
        object.__setattr__(self, "frames", frames)
        dets = np.linalg.det(frames)
        scale = np.abs(frames).max(axis=(1, 2)) ** frames.shape[1]
        tiny = np.abs(dets) <= 1e-12 * np.maximum(scale, 1e-300)
        if np.any(tiny):
            raise SingularFrame("frame loop contains a singular matrix",
                                index=int(np.flatnonzero(tiny)[0]))

    def __len__(self) -> int:
        return int(self.frames.shape[0])

    def kappa(self) -> np.ndarray:
        """Unit-circle values ``det(B)^2 / det(B* B)`` per frame."""
        dets = np.linalg.det(self.frames)
        return dets**2 / np.abs(dets) ** 2


def maslov_of_frames(loop: FrameLoop, step_tol: float = 1e-9) -> int:
    """Degree of the kappa map along the frame loop.

    Normalisation: the scalar loop ``B(theta) = e^{i k theta / 2}`` over one
    period has index k.  Conjugating every frame by a fixed invertible matrix
    leaves the result unchanged (isomorphism axiom), and block-diagonal
    frames add their blockwise indices (direct-sum axiom).
    """
    return winding(SampledLoop(loop.kappa()), step_tol=step_tol)


def loop_index_on_surface(
    X1: np.ndarray, X2: np.ndarray, det_tol: float = 1e-12, step_tol: float = 1e-9
) -> int:
    """Index of a loop on a surface from a tangent frame along the loop.

    ``X1``, ``X2`` are (N, 2) complex arrays: bases of the tangent planes at
    the loop samples.  The index is the winding of ``det(X1, X2)``, which is
    invariant under pointwise real-invertible frame changes and negates when
    the loop orientation is reversed.
    """
    X1 = np.asarray(X1, dtype=complex)
    X2 = np.asarray(X2, dtype=complex)
    if X1.shape != X2.shape or X1.ndim != 2 or X1.shape[1] != 2:
        raise ValueError("X1, X2 must both have shape (N, 2)")
    dets = X1[:, 0] * X2[:, 1] - X1[:, 1] * X2[:, 0]
    scale = max(float(np.abs(X1).max() * np.abs(X2).max()), 1e-300)
    if np.any(np.abs(dets) <= det_tol * scale):
        raise DegenerateFrame(
            "frame determinant vanishes at a sample",
            index=int(np.flatnonzero(np.abs(dets) <= det_tol * scale)[0]),
        )
    return winding(SampledLoop(dets), step_tol=step_tol)


def lai_split(total_index: int, chern_value: int) -> tuple[int, int]:
    """Split a surface index as ``I_pm = (I ± c) / 2``.

    Raises :class:`ParityError` when ``I ± c`` is odd, which signals
    inconsistent input data.
    """
    if (total_index + chern_value) % 2 != 0:
        raise ParityError("total index and Chern value have different parity",
                          total_index=total_index, chern_value=chern_value)
    return ((total_index + chern_value) // 2, (total_index - chern_value) // 2)


def boundary_index_balance(
    I_plus: int, I_minus: int, boundary_loop_indices: list[int]
) -> bool:
    """Check ``I_plus - I_minus == sum(boundary loop indices)``.

    The loop indices must be taken with the orientations induced by the
    surface on its boundary components.
    """
    return I_plus - I_minus == sum(boundary_loop_indices)


def glued_disc_loop_index(
    index_E_plus: int, index_E_minus: int, existing_loop_indices: list[int]
) -> int:
    """Solve the boundary balance law for one unknown boundary index.

    A result of +1 for a disc boundary certifies Maslov index 0 of the disc.
    """
    return (index_E_plus - index_E_minus) - sum(existing_loop_indices)


@dataclass(frozen=True)
class SphereInventory:
    """Signed census of the complex points of an embedded two-sphere."""

    e_plus: int
    e_minus: int
    h_plus: int
    h_minus: int
    chern_value: int = 0

    def __post_init__(self):
        for name in ("e_plus", "e_minus", "h_plus", "h_minus"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")

    @property
    def I_plus(self) -> int:
        return self.e_plus - self.h_plus

    @property
    def I_minus(self) -> int:
        return self.e_minus - self.h_minus

    @property
    def total_index(self) -> int:
        return self.I_plus + self.I_minus

    def validate(self) -> None:
        """Enforce the sphere identities ``I_pm = (2 ± c)/2`` (so I = 2).

        With ``chern_value = 0`` this is ``e_pm - h_pm = 1``.
        """
        want_plus, want_minus = lai_split(2, self.chern_value)
        if self.I_plus != want_plus or self.I_minus != want_minus:
            raise InconsistentInventory(
                "census violates the sphere index identities",
                I_plus=self.I_plus, I_minus=self.I_minus,
                expected=(want_plus, want_minus),
            )

    def to_json_dict(self) -> dict:
        return {
            "e_plus": self.e_plus, "e_minus": self.e_minus,
            "h_plus": self.h_plus, "h_minus": self.h_minus,
            "chern_value": self.chern_value,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "SphereInventory":
        return cls(
            e_plus=int(data["e_plus"]), e_minus=int(data["e_minus"]),
            h_plus=int(data["h_plus"]), h_minus=int(data["h_minus"]),
            chern_value=int(data.get("chern_value", 0)),
        )

    @classmethod
    def from_json(cls, text: str) -> "SphereInventory":
        return cls.from_json_dict(json.loads(text))


def loop_from_csv(text: str) -> SampledLoop:
    """Parse a loop from CSV with columns ``re, im`` (header optional)."""
    values = []
    for lineno, line in enumerate(text.splitlines()):
        line = line.strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        if lineno == 0 and not _is_number(parts[0]):
            continue
        values.append(complex(float(parts[0]), float(parts[1])))
    return SampledLoop(np.asarray(values, dtype=complex))


def loop_to_csv(loop: SampledLoop) -> str:
    lines = ["re,im"]
    lines += [f"{z.real!r},{z.imag!r}" for z in loop.samples]
    return "\n".join(lines) + "\n"


def _is_number(token: str) -> bool:
    try:
        float(token)
        return True
    except ValueError:
        return False
