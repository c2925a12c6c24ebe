"""Shared tolerances and run configuration."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

# Closed form vs brute-force minimization of f.
ORACLE_TOL = 1e-8
# Analytic derivative vs central differences.
DERIV_TOL = 1e-6
# Ratio gaps on extremal / sampled jets.
JET_TOL = 1e-9
# Slack on sign tests that are exact in real arithmetic (A >= 0 at a tangency).
GATE_TOL = 1e-12
# Accepting a zw-discriminant as zero.
DISCRIMINANT_TOL = 1e-9
# |grad |grad u|| below this makes the Kato ratio undefined.
DEGENERATE_NORM_TOL = 1e-14

DEFAULT_SEED = 20240917


def default_tolerances() -> dict[str, float]:
    return {"ORACLE_TOL": ORACLE_TOL, "JET_TOL": JET_TOL, "GATE_TOL": GATE_TOL}


@dataclass
class RunConfig:
    seed: int = DEFAULT_SEED
    tolerances: dict[str, float] = field(default_factory=default_tolerances)
    output_path: Path | None = None
    format: str = "json"

    def __post_init__(self):
        if self.format not in ("json", "csv"):
            raise ValueError(f"unknown format {self.format!r}")
        for name, tol in self.tolerances.items():
            if not tol > 0:
                raise ValueError(f"tolerance {name} must be positive, got {tol}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")
