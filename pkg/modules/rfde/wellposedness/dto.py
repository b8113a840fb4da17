from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PROBE_NAMES = ("uniqueness", "dependence", "semiflow", "cocycle", "escape", "identity", "extension")


@dataclass
class ProbeReport:
    """Outcome of one numerical probe; every threshold it used is echoed in ``measured``."""

    probe: str
    passed: bool
    measured: dict[str, float] = field(default_factory=dict)
    samples: int = 0
    seed: int = 0
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": 1,
            "probe": self.probe,
            "passed": bool(self.passed),
            "measured": {k: float(v) for k, v in self.measured.items()},
            "samples": int(self.samples),
            "seed": int(self.seed),
            "notes": list(self.notes),
        }


def failed_report(probe: str, exc: BaseException, *, samples: int = 0, seed: int = 0) -> ProbeReport:
    return ProbeReport(probe, False, samples=samples, seed=seed, notes=[f"{type(exc).__name__}: {exc}"])
