"""Exception types shared across the library.

Every error carries a machine-readable ``code`` and an optional ``context``
dict so the CLI can serialize failures as ``{code, message, context}``.
"""

from __future__ import annotations


class LevikitError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "error"

    def __init__(self, message: str, **context):
        super().__init__(message)
        self.context = context

    def to_json_dict(self) -> dict:
        return {
            "code": self.code,
            "message": str(self),
            "context": {k: _plain(v) for k, v in self.context.items()},
        }


def _plain(value):
    try:
        import numpy as np

        if isinstance(value, np.generic):
            return value.item()
    except ImportError:  # pragma: no cover
        pass
    return value


# --- jet normalization ---

class DegenerateJet(LevikitError):
    code = "degenerate_jet"


# --- loops and indices ---

class ZeroSample(LevikitError):
    code = "zero_sample"


class UndersampledLoop(LevikitError):
    code = "undersampled_loop"


class SingularFrame(LevikitError):
    code = "singular_frame"


class DegenerateFrame(LevikitError):
    code = "degenerate_frame"


class ParityError(LevikitError):
    code = "parity_error"


# --- dihedral / reflection analysis ---

class OutOfRange(LevikitError):
    code = "out_of_range"


# --- foliation ---

class StepTooLarge(LevikitError):
    code = "step_too_large"


class OriginQuery(LevikitError):
    code = "origin_query"


class UndersampledCurve(LevikitError):
    code = "undersampled_curve"


# --- Puiseux fitting ---

class InsufficientSamples(LevikitError):
    code = "insufficient_samples"


class IllConditioned(LevikitError):
    code = "ill_conditioned"


class InvalidSeries(LevikitError):
    code = "invalid_series"


# --- model surfaces ---

class WrongKind(LevikitError):
    code = "wrong_kind"


class NotSecondOrderSmall(LevikitError):
    code = "not_second_order_small"


class DeltaTooLarge(LevikitError):
    code = "delta_too_large"


# --- chains and filling ---

class UnsaturatedPoint(LevikitError):
    code = "unsaturated_point"


class SelfLoopGluing(LevikitError):
    code = "self_loop_gluing"


class InconsistentInventory(LevikitError):
    code = "inconsistent_inventory"


class StuckState(LevikitError):
    code = "stuck_state"


class BudgetExceeded(LevikitError):
    code = "budget_exceeded"


class InvalidChain(LevikitError):
    code = "invalid_chain"
