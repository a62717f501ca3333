"""Verdict and report types shared across modules, with JSON serialization.

Every JSON report the CLI emits validates against the schema shipped in
``schemas/report.schema.json``; :func:`validate_report` runs that check.
Serialization is deterministic: keys are sorted and floats use repr.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

HOLDS = "holds"
FAILS = "fails"
LOG_CONCAVE = "log-concave"
NOT_LOG_CONCAVE = "not-log-concave"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Witness:
    """A violating pair of probes: interval 1 vs interval 2 and their values.

    For point-wise sign checks the two intervals coincide and ``var1``
    carries the offending value.
    """

    a1: float
    b1: float
    a2: float
    b2: float
    var1: float
    var2: float
    margin: float

    def to_dict(self) -> dict:
        return {
            "a1": self.a1, "b1": self.b1, "a2": self.a2, "b2": self.b2,
            "var1": self.var1, "var2": self.var2, "margin": self.margin,
        }


@dataclass
class MonotonicityReport:
    claim: str
    verdict: str
    tolerance: float
    grid_spec: str
    witnesses: list[Witness] = field(default_factory=list)
    n_skipped: int = 0
    n_checked: int = 0

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def to_dict(self) -> dict:
        return {
            "claim": self.claim,
            "verdict": self.verdict,
            "tolerance": self.tolerance,
            "n_violations": len(self.witnesses),
            "witnesses": [w.to_dict() for w in self.witnesses],
            "grid": self.grid_spec,
            "n_skipped": self.n_skipped,
            "n_checked": self.n_checked,
        }


@dataclass(frozen=True)
class ConcavityWitness:
    x_minus: float
    x_0: float
    x_plus: float
    second_diff: float

    def to_dict(self) -> dict:
        return {
            "x_minus": self.x_minus, "x_0": self.x_0,
            "x_plus": self.x_plus, "second_diff": self.second_diff,
        }


@dataclass
class ConcavityVerdict:
    verdict: str
    tolerance: float
    witness: ConcavityWitness | None = None
    n_excluded: int = 0

    @property
    def is_log_concave(self) -> bool:
        return self.verdict == LOG_CONCAVE

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "tol": self.tolerance,
            "n_excluded": self.n_excluded,
        }


@dataclass
class OrderVerdict:
    order: str
    verdict: str
    tolerance: float
    grid_spec: str = ""
    witness: dict | None = None

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "verdict": self.verdict,
            "tolerance": self.tolerance,
            "grid": self.grid_spec,
            "witness": self.witness,
        }


@dataclass(frozen=True)
class TruncatedMoments:
    """Conditional mass, mean and variance of X on an interval."""

    mass: float
    mean: float
    variance: float
    route: str  # "antiderivative" or "direct"

    def to_dict(self) -> dict:
        return {
            "mass": self.mass, "mean": self.mean,
            "variance": self.variance, "route": self.route,
        }


@dataclass(frozen=True)
class InequalityCheck:
    name: str
    lhs: float
    rhs: float
    margin: float
    holds: bool

    def to_dict(self) -> dict:
        return {
            "name": self.name, "lhs": self.lhs, "rhs": self.rhs,
            "margin": self.margin, "holds": self.holds,
        }


@dataclass
class ChainReport:
    b1: float
    b2: float
    tolerance: float
    checks: list[InequalityCheck]

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "b1": self.b1, "b2": self.b2, "tolerance": self.tolerance,
            "checks": [c.to_dict() for c in self.checks],
            "all_hold": self.all_hold,
        }


def dumps(payload: dict) -> str:
    """Deterministic JSON text for report payloads."""
    return json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _schema() -> dict:
    text = resources.files("uncorder.schemas").joinpath("report.schema.json").read_text()
    return json.loads(text)


def validate_report(payload: dict) -> None:
    """Raise jsonschema.ValidationError if the payload is not a known report."""
    import jsonschema

    jsonschema.validate(payload, _schema())
