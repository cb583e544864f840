from __future__ import annotations

from lilrates.lab.distributions import (
    Distribution,
    DistKind,
    Normal,
    Rademacher,
    TwoSidedPareto,
    UniformSym,
    build_distribution,
)
from lilrates.lab.empirical import assemble_empirical_series
from lilrates.lab.moments import MomentReport, Verdict, moment_report
from lilrates.lab.truncation import (
    TruncationParams,
    TruncationReport,
    effective_drift,
    truncation_diagnostics,
)
from lilrates.lab.walks import (
    TailEstimate,
    WalkSummary,
    estimate_tail,
    fit_empirical_tail,
    sample_walk,
    walk_statistics,
)

__all__ = [
    "DistKind",
    "Distribution",
    "MomentReport",
    "Normal",
    "Rademacher",
    "TailEstimate",
    "TruncationParams",
    "TruncationReport",
    "TwoSidedPareto",
    "UniformSym",
    "Verdict",
    "WalkSummary",
    "assemble_empirical_series",
    "build_distribution",
    "effective_drift",
    "estimate_tail",
    "fit_empirical_tail",
    "moment_report",
    "sample_walk",
    "truncation_diagnostics",
    "walk_statistics",
]
