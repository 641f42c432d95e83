from .engine import (
    BUDGET,
    EXHAUSTED,
    FOUND,
    Checkpoint,
    SearchOutcome,
    SearchRequest,
    find_realization,
)
from .oracle import DEFAULT_CAP, exhaustive_oracle, orbit_members
from .cases import CaseResult, Cell, TwelveXReport, prove_12x, run_case_algorithm
