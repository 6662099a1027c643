"""Trial state machine.

One reaching trial walks Idle -> ArmMoving -> AwaitHome -> CueScheduled
-> Reaching -> Logged. The cue may only fire once the robot arm has
arrived and both home contacts are touched; a home release before the cue
resets the trial to AwaitHome. The reaching hand is the side released
first after the cue; reach time is button press minus that release. A
press after the 3.1 s deadline is a protocol violation - the driver must
deliver deadline_elapsed instead, which logs a timeout with hand = none.

All times are integer milliseconds on the session's logical clock.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..errors import ProtocolError, StateError
from ..session_log import DEADLINE_MS, TrialRecord
from ..workspace import Point3

CUE_DELAY_MAX_MS = 2000


class TrialStage(Enum):
    IDLE = "Idle"
    ARM_MOVING = "ArmMoving"
    AWAIT_HOME = "AwaitHome"
    CUE_SCHEDULED = "CueScheduled"
    REACHING = "Reaching"
    LOGGED = "Logged"


@dataclass(frozen=True)
class Event:
    t_ms: int


@dataclass(frozen=True)
class ArmArrived(Event):
    pass


@dataclass(frozen=True)
class HomeBothTouched(Event):
    pass


@dataclass(frozen=True)
class CueFired(Event):
    pass


@dataclass(frozen=True)
class HomeReleased(Event):
    side: str = "left"


@dataclass(frozen=True)
class ButtonPressed(Event):
    pass


@dataclass(frozen=True)
class DeadlineElapsed(Event):
    pass


class TrialMachine:
    """Drives one trial at a time; reusable across trials via take_record."""

    def __init__(self):
        self.stage = TrialStage.IDLE
        self._last_t = -1
        self._reset_trial_fields()

    def _reset_trial_fields(self):
        self._trial = None
        self._phase = None
        self._target = None
        self._t_ready = None
        self._t_cue = None
        self._release_side = None
        self._t_release = None
        self._record = None

    def begin(self, trial: int, phase: str, target: Point3) -> None:
        """Start a trial: the robot arm departs for the target."""
        if self.stage is not TrialStage.IDLE:
            raise StateError(f"cannot begin a trial in stage {self.stage.value}")
        self._reset_trial_fields()
        self._trial = trial
        self._phase = phase
        self._target = target
        self.stage = TrialStage.ARM_MOVING

    def _reject(self, event: Event):
        raise ProtocolError(
            f"event {type(event).__name__} is illegal in stage {self.stage.value}"
        )

    def feed(self, event: Event) -> None:
        """Apply one device event; raises ProtocolError when out of order."""
        if event.t_ms < self._last_t:
            raise ProtocolError(
                f"event {type(event).__name__} at t={event.t_ms}ms precedes "
                f"previous event at t={self._last_t}ms"
            )
        stage = self.stage
        if stage is TrialStage.ARM_MOVING:
            if isinstance(event, ArmArrived):
                self.stage = TrialStage.AWAIT_HOME
            else:
                self._reject(event)
        elif stage is TrialStage.AWAIT_HOME:
            if isinstance(event, HomeBothTouched):
                self._t_ready = event.t_ms
                self.stage = TrialStage.CUE_SCHEDULED
            else:
                self._reject(event)
        elif stage is TrialStage.CUE_SCHEDULED:
            if isinstance(event, CueFired):
                delay = event.t_ms - self._t_ready
                if not 0 <= delay <= CUE_DELAY_MAX_MS:
                    raise ProtocolError(
                        f"cue delay {delay}ms outside [0, {CUE_DELAY_MAX_MS}]ms"
                    )
                self._t_cue = event.t_ms
                self.stage = TrialStage.REACHING
            elif isinstance(event, HomeReleased):
                # Early release: trial resets to waiting for the home position.
                self._t_ready = None
                self.stage = TrialStage.AWAIT_HOME
            else:
                self._reject(event)
        elif stage is TrialStage.REACHING:
            self._feed_reaching(event)
        else:
            self._reject(event)
        self._last_t = event.t_ms

    def _feed_reaching(self, event: Event) -> None:
        if isinstance(event, HomeReleased):
            if self._release_side is None:
                self._release_side = event.side
                self._t_release = event.t_ms
            elif event.side == self._release_side:
                raise ProtocolError(f"{event.side} home contact released twice")
            # The other hand lifting later does not change the reaching hand.
        elif isinstance(event, ButtonPressed):
            if self._release_side is None:
                raise ProtocolError("button press with both hands still on home")
            if event.t_ms > self._t_cue + DEADLINE_MS:
                raise ProtocolError(
                    "button press after the deadline; expected deadline_elapsed"
                )
            reach_ms = event.t_ms - self._t_release
            if reach_ms <= 0:
                raise ProtocolError("button press not after the home release")
            self._record = TrialRecord(
                trial=self._trial,
                phase=self._phase,
                target=self._target,
                cue_delay=(self._t_cue - self._t_ready) / 1000.0,
                reach_time=reach_ms / 1000.0,
                success=True,
                hand=self._release_side,
            )
            self.stage = TrialStage.LOGGED
        elif isinstance(event, DeadlineElapsed):
            if event.t_ms != self._t_cue + DEADLINE_MS:
                raise ProtocolError(
                    f"deadline event at t={event.t_ms}ms; expected "
                    f"t={self._t_cue + DEADLINE_MS}ms"
                )
            self._record = TrialRecord(
                trial=self._trial,
                phase=self._phase,
                target=self._target,
                cue_delay=(self._t_cue - self._t_ready) / 1000.0,
                reach_time=None,
                success=False,
                hand="none",
            )
            self.stage = TrialStage.LOGGED
        else:
            self._reject(event)

    def take_record(self) -> TrialRecord:
        """Collect the logged trial and return to Idle."""
        if self.stage is not TrialStage.LOGGED:
            raise StateError(f"no record available in stage {self.stage.value}")
        record = self._record
        self._reset_trial_fields()
        self.stage = TrialStage.IDLE
        return record

    def legal_events(self) -> tuple[type, ...]:
        """Event types currently accepted (for property tests)."""
        return {
            TrialStage.IDLE: (),
            TrialStage.ARM_MOVING: (ArmArrived,),
            TrialStage.AWAIT_HOME: (HomeBothTouched,),
            TrialStage.CUE_SCHEDULED: (CueFired, HomeReleased),
            TrialStage.REACHING: (HomeReleased, ButtonPressed, DeadlineElapsed),
            TrialStage.LOGGED: (),
        }[self.stage]
