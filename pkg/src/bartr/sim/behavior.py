"""Parametric synthetic participant behavior.

The generator is deliberately simple so every quantity it induces has a
closed form usable as a test oracle:

* hand choice: logistic in the lateral direction of the target, with a
  constant rightward dominance offset and a severity shift away from the
  affected arm;
* reach time: affine in reach distance and target height plus Gaussian
  noise, so success (beating the 3.1 s deadline) is a Gaussian tail.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import expit, ndtr

from ..errors import ValidationError
from ..session_log import DEADLINE_S
from ..workspace import points_to_array

# Rightward dominance offset of the choice log-odds, tuned so the
# neurotypical preset picks the right hand over 60% of the workspace.
RIGHT_HAND_BIAS = 0.455

SIDES = ("left", "right")


@dataclass(frozen=True)
class BehaviorModel:
    """Ground-truth behavior parameters for one synthetic participant."""

    handedness_bias: float  # scales lateral preference in the choice log-odds
    nonuse_severity: float  # shifts choice log-odds away from the affected arm
    base_speed: float  # cm/s
    reaction_latency: float  # s, added to every reach
    vertical_penalty: float  # s per cm of target height
    time_noise: float  # s, sd of the reach-time noise
    affected_side: str

    def __post_init__(self):
        if self.nonuse_severity < 0:
            raise ValidationError("nonuse severity must be >= 0")
        if self.base_speed <= 0:
            raise ValidationError("base speed must be > 0")
        if self.time_noise < 0:
            raise ValidationError("time noise must be >= 0")
        if self.affected_side not in SIDES:
            raise ValidationError(f"affected side must be one of {SIDES}")


def lateral_direction(X) -> np.ndarray:
    """Unit rightward component of each target: -1 far left, +1 far right."""
    arr = points_to_array(X)
    return arr[:, 0] / np.hypot(arr[:, 0], arr[:, 1])


def choice_right_probability(bm: BehaviorModel, X) -> np.ndarray:
    """P(reach with the right hand | target), spontaneous phase."""
    side_sign = 1.0 if bm.affected_side == "right" else -1.0
    u = lateral_direction(X)
    return expit(
        bm.handedness_bias * (u + RIGHT_HAND_BIAS) - bm.nonuse_severity * side_sign
    )


def choice_affected_probability(bm: BehaviorModel, X) -> np.ndarray:
    """P(reach with the affected-side hand | target), spontaneous phase."""
    p_right = choice_right_probability(bm, X)
    return p_right if bm.affected_side == "right" else 1.0 - p_right


def mean_reach_time(bm: BehaviorModel, X) -> np.ndarray:
    """Noise-free reach time: latency + distance/speed + height penalty."""
    arr = points_to_array(X)
    dist = np.linalg.norm(arr, axis=1)
    return bm.reaction_latency + dist / bm.base_speed + bm.vertical_penalty * arr[:, 2]


def success_probability(bm: BehaviorModel, X) -> np.ndarray:
    """P(reach completes before the deadline | target)."""
    mu = mean_reach_time(bm, X)
    if bm.time_noise == 0.0:
        return (mu <= DEADLINE_S).astype(float)
    return ndtr((DEADLINE_S - mu) / bm.time_noise)


@dataclass(frozen=True)
class GroundTruthFields:
    """Closed-form fields implied by a behavior model."""

    choice: Callable[[np.ndarray], np.ndarray]  # P(affected-side hand | x)
    choice_right: Callable[[np.ndarray], np.ndarray]
    success: Callable[[np.ndarray], np.ndarray]
    time: Callable[[np.ndarray], np.ndarray]  # mean reach seconds


def ground_truth_fields(bm: BehaviorModel) -> GroundTruthFields:
    return GroundTruthFields(
        choice=lambda X: choice_affected_probability(bm, X),
        choice_right=lambda X: choice_right_probability(bm, X),
        success=lambda X: success_probability(bm, X),
        time=lambda X: mean_reach_time(bm, X),
    )


def neurotypical_preset() -> BehaviorModel:
    """Normative behavior: 60-40 rightward bias, no severity effects."""
    return BehaviorModel(
        handedness_bias=1.0,
        nonuse_severity=0.0,
        base_speed=44.0,
        reaction_latency=0.32,
        vertical_penalty=0.008,
        time_noise=0.1,
        affected_side="right",
    )


def stroke_preset(severity: float, affected_side: str = "left") -> BehaviorModel:
    """A post-stroke participant at the given nonuse severity.

    Severity both shifts hand choice away from the affected arm and slows
    reaches (longer latency, lower speed), mirroring how reduced use and
    reduced performance co-occur.
    """
    return BehaviorModel(
        handedness_bias=1.0,
        nonuse_severity=severity,
        base_speed=44.0 / (1.0 + 0.55 * severity),
        reaction_latency=0.32 + 0.30 * severity,
        vertical_penalty=0.008,
        time_noise=0.1,
        affected_side=affected_side,
    )
