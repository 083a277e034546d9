"""Two-stage signature matching: exact metadata, thresholded cell overlap.

Verification first requires every extras-region cell (color slot, technique
slot, padding) to match exactly; only then is the drawing region compared,
as a Jaccard score over active-cell sets. Set comparison makes matching
independent of stroke order and direction, and a threshold of 1.0
degenerates to exact cell equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import InputError
from .grid import CellBitmap
from .encoding import ExtendedMatrix


class MatchReason(str, Enum):
    METADATA_MISMATCH = "metadata-mismatch"
    BELOW_THRESHOLD = "below-threshold"
    ACCEPTED = "accepted"


@dataclass(frozen=True)
class MatchPolicy:
    """Acceptance threshold and the registration-time minimum signature size."""

    theta: float = 1.0
    min_active_cells: int = 3

    def __post_init__(self) -> None:
        if not (0.0 <= self.theta <= 1.0):
            raise InputError("theta must be in [0, 1]")
        if self.min_active_cells < 1:
            raise InputError("min_active_cells must be >= 1")


@dataclass(frozen=True)
class MatchOutcome:
    accepted: bool
    score: float
    reason: MatchReason


def metadata_match(a: ExtendedMatrix, b: ExtendedMatrix) -> bool:
    """True iff the two extras regions are bitwise identical."""
    if a.spec != b.spec:
        raise InputError("matrices use different grid specs")
    return a.extras_values() == b.extras_values()


def similarity(a: CellBitmap, b: CellBitmap) -> float:
    """Jaccard index of the active-cell sets: |A n B| / |A u B|.

    Symmetric, 1.0 exactly when the active sets are equal; two empty bitmaps
    score 1.0 (unreachable in practice given min_active_cells).
    """
    if a.cols != b.cols or a.rows != b.rows:
        raise InputError("bitmaps have different dimensions")
    sa, sb = a.active_cells(), b.active_cells()
    union = sa | sb
    if not union:
        return 1.0
    return len(sa & sb) / len(union)


def verify_match(
    candidate: ExtendedMatrix, stored: ExtendedMatrix, policy: MatchPolicy
) -> MatchOutcome:
    """Apply the two-stage rule.

    A metadata mismatch rejects at every theta, with score reported as 0 and
    no drawing comparison performed. Otherwise the drawing score decides.
    """
    if not metadata_match(candidate, stored):
        return MatchOutcome(False, 0.0, MatchReason.METADATA_MISMATCH)
    score = similarity(candidate.drawing_bitmap(), stored.drawing_bitmap())
    if score >= policy.theta:
        return MatchOutcome(True, score, MatchReason.ACCEPTED)
    return MatchOutcome(False, score, MatchReason.BELOW_THRESHOLD)
