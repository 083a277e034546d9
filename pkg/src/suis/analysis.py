"""Security arithmetic: credential-space size and random-guess acceptance.

The bitmap space over n drawing cells is exactly 2^n; color choice and
technique choice multiply it further. All space figures are exact big
integers, and reports state the true power-of-ten bounds of each figure so
readers get verifiable decades rather than rounded claims. The empirical
side measures how often uniformly random drawings are accepted against a
fixed stored one, which at an exact-match threshold converges to 2^-n.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InputError
from .grid import CellBitmap, GridSpec
from .matching import MatchPolicy, similarity


@dataclass(frozen=True)
class SpaceReport:
    grid_cells: int
    palette_size: int
    technique_count: int
    bitmap_space: int
    total_space: int


def password_space(grid_cells: int, palette_size: int, technique_count: int) -> SpaceReport:
    """Exact credential-space sizes: 2^n, and 2^n * N * T."""
    if grid_cells < 0:
        raise InputError("grid_cells must be >= 0")
    if palette_size < 1 or technique_count < 1:
        raise InputError("palette_size and technique_count must be >= 1")
    bitmap_space = 1 << grid_cells
    return SpaceReport(
        grid_cells=grid_cells,
        palette_size=palette_size,
        technique_count=technique_count,
        bitmap_space=bitmap_space,
        total_space=bitmap_space * palette_size * technique_count,
    )


def decade_bounds(value: int) -> tuple[int, int]:
    """Exponents (lo, hi) with 10^lo <= value < 10^hi, by exact arithmetic."""
    if value < 1:
        raise InputError("decade bounds need a positive integer")
    lo = len(str(value)) - 1
    return lo, lo + 1


def format_space_report(report: SpaceReport) -> str:
    """Human-readable report with exact values and true power-of-ten bounds."""
    bit_lo, bit_hi = decade_bounds(report.bitmap_space)
    tot_lo, tot_hi = decade_bounds(report.total_space)
    lines = [
        f"grid cells (n)              : {report.grid_cells}",
        f"bitmap space (2^n)          : {report.bitmap_space:,}",
        f"  bounds                    : 10^{bit_lo} <= 2^{report.grid_cells} < 10^{bit_hi}",
        f"palette size (N)            : {report.palette_size}",
        f"technique count (T)         : {report.technique_count}",
        f"total space (2^n * N * T)   : {report.total_space:,}",
        f"  bounds                    : 10^{tot_lo} <= total < 10^{tot_hi}",
    ]
    return "\n".join(lines)


@dataclass(frozen=True)
class FarEstimate:
    trials: int
    accepted: int
    theta: float

    @property
    def rate(self) -> float:
        return self.accepted / self.trials

    @property
    def standard_error(self) -> float:
        p = self.rate
        return math.sqrt(p * (1.0 - p) / self.trials)


def random_bitmap(spec: GridSpec, rng: random.Random) -> CellBitmap:
    n = spec.drawing_cells
    pattern = rng.getrandbits(n)
    bits = tuple((pattern >> i) & 1 for i in range(n))
    return CellBitmap(spec.drawing_cols, spec.drawing_rows, bits)


def random_guess_far(
    spec: GridSpec,
    policy: MatchPolicy,
    trials: int,
    rng: random.Random,
    stored: CellBitmap | None = None,
) -> FarEstimate:
    """Fraction of uniform random drawings accepted against a stored one.

    Metadata is held equal on purpose: this isolates the drawing-grid space,
    whose acceptance probability at theta=1.0 is exactly 2^-n.
    """
    if trials < 1:
        raise InputError("trials must be >= 1")
    if stored is None:
        stored = random_bitmap(spec, rng)
    accepted = 0
    for _ in range(trials):
        candidate = random_bitmap(spec, rng)
        if similarity(candidate, stored) >= policy.theta:
            accepted += 1
    return FarEstimate(trials=trials, accepted=accepted, theta=policy.theta)


def exhaustive_guess_far(
    spec: GridSpec, policy: MatchPolicy, stored: CellBitmap
) -> tuple[int, int]:
    """Exact acceptance count over every possible drawing bitmap.

    Only feasible on small grids; guards at 2^20 candidates.
    """
    n = spec.drawing_cells
    if n > 20:
        raise InputError("exhaustive enumeration is limited to 20 cells")
    accepted = 0
    total = 1 << n
    for pattern in range(total):
        bits = tuple((pattern >> i) & 1 for i in range(n))
        candidate = CellBitmap(spec.drawing_cols, spec.drawing_rows, bits)
        if similarity(candidate, stored) >= policy.theta:
            accepted += 1
    return accepted, total


def far_sweep(
    spec: GridSpec,
    thetas: Sequence[float],
    trials: int,
    rng: random.Random,
    min_active_cells: int = 1,
) -> list[tuple[float, float]]:
    """Estimate the random-guess acceptance rate at each threshold.

    The same candidate stream is replayed against every threshold so the
    sweep is monotone by construction, not by luck.
    """
    stored = random_bitmap(spec, rng)
    scores = []
    for _ in range(trials):
        scores.append(similarity(random_bitmap(spec, rng), stored))
    results = []
    for theta in sorted(thetas):
        MatchPolicy(theta=theta, min_active_cells=min_active_cells)  # range check
        accepted = sum(1 for s in scores if s >= theta)
        results.append((theta, accepted / trials))
    return results


def format_far_report(estimate: FarEstimate, spec: GridSpec) -> str:
    n = spec.drawing_cells
    lines = [
        f"grid                        : {spec.drawing_cols}x{spec.drawing_rows} ({n} cells)",
        f"threshold (theta)           : {estimate.theta}",
        f"trials                      : {estimate.trials:,}",
        f"accepted                    : {estimate.accepted:,}",
        f"acceptance rate             : {estimate.rate:.6g}",
        f"standard error              : {estimate.standard_error:.3g}",
    ]
    if estimate.theta == 1.0:
        lines.append(f"analytic rate at theta=1.0  : 2^-{n} = {2.0 ** -n:.6g}")
    return "\n".join(lines)


def sweep_csv_lines(results: Iterable[tuple[float, float]]) -> list[str]:
    lines = ["theta,acceptance_rate"]
    lines.extend(f"{theta:.6g},{rate:.8g}" for theta, rate in results)
    return lines
