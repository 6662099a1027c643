"""On-disk session logs: one JSON-Lines file per (participant, session,
phase), a header line followed by one trial record per line.

Header: {"participant":...,"session":...,"phase":...,"seed":...}
Trial:  {"trial":...,"phase":...,"target":{"x":..,"y":..,"z":..},
         "cue_delay":...,"reach_time":...,"success":...,"hand":...}

Reach times are in seconds and must lie in (0, 3.1]; targets are
serialized at 2-decimal precision.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import IngestError, ValidationError
from .workspace import Point3

DEADLINE_S = 3.1
DEADLINE_MS = 3100

PHASES = ("spontaneous", "constrained")
HANDS = ("left", "right", "none")


@dataclass(frozen=True)
class TrialRecord:
    """One reach attempt."""

    trial: int
    phase: str
    target: Point3
    cue_delay: float
    reach_time: float | None
    success: bool
    hand: str

    def __post_init__(self):
        if not 0 <= self.trial <= 99:
            raise ValidationError(f"trial index must be 0..99 (got {self.trial})")
        if self.phase not in PHASES:
            raise ValidationError(f"phase must be one of {PHASES} (got {self.phase!r})")
        if self.hand not in HANDS:
            raise ValidationError(f"hand must be one of {HANDS} (got {self.hand!r})")
        if not (0.0 <= self.cue_delay <= 2.0):
            raise ValidationError(
                f"cue delay must be within [0, 2] s (got {self.cue_delay})"
            )
        if self.success:
            if self.reach_time is None:
                raise ValidationError("successful trial must carry a reach time")
            if not (0.0 < self.reach_time <= DEADLINE_S) or not math.isfinite(
                self.reach_time
            ):
                raise ValidationError(
                    f"reach time must lie in (0, {DEADLINE_S}] s "
                    f"(got {self.reach_time})"
                )
            if self.hand == "none":
                raise ValidationError("successful trial must name the reaching hand")
        else:
            if self.reach_time is not None:
                raise ValidationError("timeout trial cannot carry a reach time")
            if self.hand != "none":
                raise ValidationError("timeout trial must record hand = none")

    def to_json(self) -> dict:
        return {
            "trial": self.trial,
            "phase": self.phase,
            "target": self.target.to_json(),
            "cue_delay": self.cue_delay,
            "reach_time": self.reach_time,
            "success": self.success,
            "hand": self.hand,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TrialRecord":
        try:
            return cls(
                trial=int(obj["trial"]),
                phase=obj["phase"],
                target=Point3.from_json(obj["target"]),
                cue_delay=float(obj["cue_delay"]),
                reach_time=None if obj["reach_time"] is None else float(obj["reach_time"]),
                success=bool(obj["success"]),
                hand=obj["hand"],
            )
        except KeyError as exc:
            raise ValidationError(f"trial record missing key {exc}") from exc


@dataclass
class SessionLog:
    """All trials of one phase of one session."""

    participant: str
    session: int
    phase: str
    seed: int
    trials: list[TrialRecord] = field(default_factory=list)
    apparatus_digest: str | None = field(default=None, compare=False, repr=False)
    trace: list[bytes] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not 1 <= self.session <= 3:
            raise ValidationError(f"session index must be 1..3 (got {self.session})")
        if self.phase not in PHASES:
            raise ValidationError(f"phase must be one of {PHASES} (got {self.phase!r})")
        self.validate_trials()

    def validate_trials(self) -> None:
        if len(self.trials) > 100:
            raise ValidationError(
                f"at most 100 trials per phase (got {len(self.trials)})"
            )
        seen: set[tuple[float, float, float]] = set()
        for i, rec in enumerate(self.trials):
            if rec.phase != self.phase:
                raise ValidationError(
                    f"trial {rec.trial} has phase {rec.phase!r}; log is {self.phase!r}"
                )
            if rec.trial != i:
                raise ValidationError(
                    f"trial indices must be sequential (expected {i}, got {rec.trial})"
                )
            key = (round(rec.target.x, 2), round(rec.target.y, 2), round(rec.target.z, 2))
            if key in seen:
                raise ValidationError(
                    f"duplicate target {key} within phase (targets are sampled "
                    "without replacement)"
                )
            seen.add(key)

    def header(self) -> dict:
        return {
            "participant": self.participant,
            "session": self.session,
            "phase": self.phase,
            "seed": self.seed,
        }


def write_session_log(log: SessionLog, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(json.dumps(log.header(), separators=(",", ":")) + "\n")
        for rec in log.trials:
            fh.write(json.dumps(rec.to_json(), separators=(",", ":")) + "\n")
    return path


def read_session_log(path: str | Path) -> SessionLog:
    """Parse and validate a session-log file.

    Schema violations raise IngestError carrying the 1-based line number.
    """
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise IngestError("file is empty", line=1)
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise IngestError(f"bad header JSON: {exc.msg}", line=1) from exc
    for key in ("participant", "session", "phase", "seed"):
        if key not in header:
            raise IngestError(f"header missing key {key!r}", line=1)
    try:
        log = SessionLog(
            participant=str(header["participant"]),
            session=int(header["session"]),
            phase=header["phase"],
            seed=int(header["seed"]),
        )
    except ValidationError as exc:
        raise IngestError(str(exc), line=1) from exc

    trials: list[TrialRecord] = []
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            raise IngestError("blank line in trial section", line=lineno)
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise IngestError(f"bad trial JSON: {exc.msg}", line=lineno) from exc
        try:
            rec = TrialRecord.from_json(obj)
        except ValidationError as exc:
            raise IngestError(str(exc), line=lineno) from exc
        trials.append(rec)
        log.trials = trials
        try:
            log.validate_trials()
        except ValidationError as exc:
            raise IngestError(str(exc), line=lineno) from exc
    return log
