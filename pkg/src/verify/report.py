"""
Identity report structures.

Failures are data: evaluators never raise for a failing identity, they
record the residual and the verdict.
"""

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

SCHEMA_VERSION = "1.0"


@dataclass
class IdentityResult:
    """
    Outcome of one identity on one metric.

    Attributes:
        name: manifest name
        description: the identity in words
        residual: max residual (pointwise sup or integral, per identity)
        tolerance: pass threshold
        status: "pass", "fail" or "skipped" (conditional identity on a
            metric that does not meet its hypothesis)
        vacuous: both sides vanish identically (e.g. torsion identities on
            a Kähler metric)
        control_residual: residual on the deliberately broken metric
        control_threshold: the control must reach at least this
        control_behaved: control residual ≥ threshold
        note: free text (skip reason, evaluator error)
    """
    name: str
    description: str
    residual: float
    tolerance: float
    status: str
    vacuous: bool = False
    control_residual: Optional[float] = None
    control_threshold: Optional[float] = None
    control_behaved: Optional[bool] = None
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class IdentityReport:
    """
    Residual report for one metric, ordered by the manifest.

    Attributes:
        fingerprint: recipe fingerprint of the metric
        seed: seed of the auxiliary random fields
        grid: grid spec as a dict
        results: one entry per manifest identity
        resolution: relative Fourier tail of the metric components beyond ⌊N/3⌋
        metadata: torsion and pluriclosed sizes, wall time, mode
    """
    fingerprint: str
    seed: int
    grid: Dict[str, Any]
    results: List[IdentityResult] = field(default_factory=list)
    resolution: float = 0.0
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def controls_behaved(self) -> bool:
        return all(r.control_behaved is not False for r in self.results)

    def failures(self) -> List[IdentityResult]:
        return [r for r in self.results if not r.passed]

    def result(self, name: str) -> IdentityResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "fingerprint": self.fingerprint,
            "seed": self.seed,
            "grid": self.grid,
            "resolution": self.resolution,
            "all_passed": self.all_passed,
            "controls_behaved": self.controls_behaved,
            "metadata": self.metadata,
            "results": [r.to_dict() for r in self.results],
        }
