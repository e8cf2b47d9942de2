from __future__ import annotations

import enum
from dataclasses import dataclass, field

EVAL_BUDGET = 1e-9


class Status(str, enum.Enum):
    HOLDS_SAMPLED = "HOLDS_SAMPLED"
    FAILS = "FAILS"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass
class Verdict:
    """Outcome of a sampled check.

    ``margin`` is the worst slack of the inequality over the samples (negative
    when violated); ``witness`` is the offending point for FAILS.
    """

    status: Status
    margin: float
    samples: int
    witness: complex | None = None
    witness_value: float | None = None
    reason: str = ""
    exploratory: bool = False
    details: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS_SAMPLED

    @property
    def fails(self) -> bool:
        return self.status is Status.FAILS

    def to_dict(self) -> dict:
        out = {
            "status": self.status.value,
            "margin": self.margin,
            "samples": self.samples,
            "exploratory": self.exploratory,
        }
        if self.witness is not None:
            out["witness"] = [self.witness.real, self.witness.imag]
            out["witness_value"] = self.witness_value
        if self.reason:
            out["reason"] = self.reason
        if self.details:
            out["details"] = self.details
        return out


def holds(margin: float, samples: int, **kw) -> Verdict:
    return Verdict(Status.HOLDS_SAMPLED, margin, samples, **kw)


def inconclusive(reason: str, margin: float = float("nan"), samples: int = 0, **kw) -> Verdict:
    return Verdict(Status.INCONCLUSIVE, margin, samples, reason=reason, **kw)


def fails(margin: float, samples: int, witness: complex, value: float, **kw) -> Verdict:
    return Verdict(Status.FAILS, margin, samples, witness=complex(witness), witness_value=float(value), **kw)
