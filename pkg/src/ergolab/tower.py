"""Exact cutting-and-stacking towers over the rationals.

A construction is described stage by stage: the stage-j tower of height h_j
is cut into r_j columns of equal width, column k receives s_j(k) spacer
levels on top, and the columns are restacked left to right.  All widths and
measures are `fractions.Fraction`, so every quantity here is exact; any
uncertainty coming from finite depth is carried explicitly as an interval.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Optional

Q = Fraction

__all__ = [
    "ConstructionExhaustedError",
    "InsufficientDepthError",
    "GenerationError",
    "ConstructionParams",
    "TowerStage",
    "LevelSet",
    "RationalInterval",
    "FinitarySwap",
    "ScanEntry",
    "build_stage",
    "level_width",
    "refine_set",
    "level_set_measure",
    "correlation_interval",
    "symdiff_interval",
    "depth_for",
    "rigidity_scan",
    "wh_defect",
    "supp_level_set",
    "apply_swap",
]


class ConstructionExhaustedError(Exception):
    """Raised when a stage is requested beyond the described construction."""


class InsufficientDepthError(Exception):
    """Raised when the requested shift cannot be resolved at the given depth."""


class GenerationError(Exception):
    """Raised when a generated construction cannot satisfy its constraints."""


StageRule = Callable[[int], tuple[int, tuple[int, ...]]]


@dataclass(frozen=True)
class ConstructionParams:
    """Immutable description of a cutting-and-stacking construction.

    Stages are either materialized up front (`stages`) or produced on demand
    by `rule(j) -> (r_j, spacers_j)`.  `rule_spec` keeps a JSON-able
    description of the rule when one exists, so parameters can round-trip
    through config files; closure-backed rules simply cannot be serialized.
    """

    measure_mode: str
    initial_width: Fraction = Q(1)
    initial_height: int = 1
    stages: Optional[tuple[tuple[int, tuple[int, ...]], ...]] = None
    rule: Optional[StageRule] = None
    rule_spec: Optional[str] = None
    name: str = "custom"

    def __post_init__(self) -> None:
        if self.measure_mode not in ("finite", "infinite"):
            raise ValueError(f"unknown measure mode {self.measure_mode!r}")
        if self.initial_width <= 0:
            raise ValueError("initial width must be positive")
        if self.initial_height < 1:
            raise ValueError("initial height must be at least 1")
        if self.stages is None and self.rule is None:
            raise ValueError("either explicit stages or a rule is required")

    def stage_data(self, j: int) -> tuple[int, tuple[int, ...]]:
        """Cut count and spacer tuple for stage j, validating shape."""
        if self.stages is not None:
            if j >= len(self.stages):
                raise ConstructionExhaustedError(
                    f"construction {self.name!r} describes {len(self.stages)} "
                    f"stages, stage {j} requested"
                )
            r, spacers = self.stages[j]
        else:
            r, spacers = self.rule(j)
        spacers = tuple(int(s) for s in spacers)
        if r < 2:
            raise ValueError(f"stage {j}: need at least 2 cuts, got {r}")
        if len(spacers) != r:
            raise ValueError(f"stage {j}: expected {r} spacer counts, got {len(spacers)}")
        if any(s < 0 for s in spacers):
            raise ValueError(f"stage {j}: spacer counts must be non-negative")
        return r, spacers


@dataclass(frozen=True)
class TowerStage:
    """Materialized stage-j tower data.

    `column_bases` are offsets of the stage-j columns inside the stage-(j+1)
    index space: stage-j level i refines to {base + i for base in
    column_bases}, and consecutive bases differ by h_j + s_j(k).
    """

    index: int
    height: int
    level_width: Fraction
    cuts: int
    spacers: tuple[int, ...]
    column_bases: tuple[int, ...]

    @property
    def total_tower_measure(self) -> Fraction:
        return self.height * self.level_width

    @property
    def next_height(self) -> int:
        return self.column_bases[-1] + self.height + self.spacers[-1]


@lru_cache(maxsize=None)
def build_stage(params: ConstructionParams, j: int) -> TowerStage:
    """Tower data at stage j (heights, widths and next-stage column bases)."""
    if j < 0:
        raise ValueError("stage index must be non-negative")
    if j == 0:
        height, width = params.initial_height, params.initial_width
    else:
        prev = build_stage(params, j - 1)
        height = prev.next_height
        width = prev.level_width / prev.cuts
    r, spacers = params.stage_data(j)
    bases = [0]
    for k in range(r - 1):
        bases.append(bases[-1] + height + spacers[k])
    return TowerStage(j, height, width, r, spacers, tuple(bases))


def level_width(params: ConstructionParams, j: int) -> Fraction:
    return build_stage(params, j).level_width


@dataclass(frozen=True)
class LevelSet:
    """A finite union of stage-`stage` levels, stored as sorted indices."""

    stage: int
    indices: tuple[int, ...]

    def __post_init__(self) -> None:
        idx = tuple(sorted(set(self.indices)))
        if idx != self.indices:
            object.__setattr__(self, "indices", idx)

    def __len__(self) -> int:
        return len(self.indices)


def refine_set(params: ConstructionParams, levels: LevelSet, to_stage: int) -> LevelSet:
    """Rewrite a level set in stage-`to_stage` indices (measure unchanged)."""
    if to_stage < levels.stage:
        raise ValueError("cannot coarsen a level set")
    idx: Iterable[int] = levels.indices
    for t in range(levels.stage, to_stage):
        stage = build_stage(params, t)
        if any(i >= stage.height or i < 0 for i in idx):
            raise ValueError(f"index out of range for stage-{t} tower")
        idx = [b + i for i in idx for b in stage.column_bases]
    return LevelSet(to_stage, tuple(idx))


def level_set_measure(params: ConstructionParams, levels: LevelSet) -> Fraction:
    return len(levels) * level_width(params, levels.stage)


@dataclass(frozen=True)
class RationalInterval:
    """Closed interval [lo, hi] with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def scaled(self, c) -> "RationalInterval":
        c = Q(c)
        if c < 0:
            raise ValueError("negative scaling would flip the interval")
        return RationalInterval(self.lo * c, self.hi * c)


def _shift_counts(height: int, a_idx: frozenset, b_idx: frozenset, n: int) -> tuple[int, int, int]:
    """Resolved hit count plus unresolved counts on the A and B sides.

    An A-index is unresolved when i + n leaves [0, height): those points exit
    through the top (or bottom) of the tower and their image is only pinned
    down by deeper stages.  The B-side count is the mirror image under n -> -n.
    """
    hits = 0
    lost_a = 0
    for i in a_idx:
        t = i + n
        if 0 <= t < height:
            hits += t in b_idx
        else:
            lost_a += 1
    lost_b = 0
    for i in b_idx:
        t = i - n
        if not 0 <= t < height:
            lost_b += 1
    return hits, lost_a, lost_b


def correlation_interval(
    params: ConstructionParams,
    n: int,
    a: LevelSet,
    b: LevelSet,
    depth: int,
) -> RationalInterval:
    """Exact two-sided bound for mu(T^n A intersect B) at the given depth.

    Within the depth-J tower T^n acts as the index shift i -> i + n; mass of
    either set whose shift leaves the tower is unresolved and can only
    contribute to the upper endpoint.  Taking the smaller of the two
    unresolved masses keeps the answer symmetric under (n, A, B) ->
    (-n, B, A), and the width never exceeds |n| * level_width(J).
    """
    stage = build_stage(params, depth)
    if abs(n) >= stage.height:
        raise InsufficientDepthError(
            f"|n|={abs(n)} does not fit in the stage-{depth} tower "
            f"(height {stage.height}); increase the depth"
        )
    a_idx = frozenset(refine_set(params, a, depth).indices)
    b_idx = frozenset(refine_set(params, b, depth).indices)
    hits, lost_a, lost_b = _shift_counts(stage.height, a_idx, b_idx, n)
    w = stage.level_width
    lo = hits * w
    return RationalInterval(lo, lo + min(lost_a, lost_b) * w)


def symdiff_interval(
    params: ConstructionParams,
    n: int,
    a: LevelSet,
    depth: int,
) -> RationalInterval:
    """Exact two-sided bound for mu(T^n A symdiff A) at the given depth."""
    corr = correlation_interval(params, n, a, a, depth)
    mu = level_set_measure(params, a)
    return RationalInterval(2 * (mu - corr.hi), 2 * (mu - corr.lo))


def depth_for(params: ConstructionParams, n_max: int, extra: int = 2) -> int:
    """Smallest stage whose tower is taller than n_max, plus a safety margin."""
    j = 0
    while build_stage(params, j).height <= n_max:
        j += 1
    return j + extra


def _as_threshold(theta) -> Fraction:
    theta = Q(str(theta)) if isinstance(theta, float) else Q(theta)
    if not 0 < theta < Q(1, 2):
        raise ValueError("classification threshold must lie in (0, 1/2)")
    return theta


@dataclass(frozen=True)
class ScanEntry:
    """Classification of a single shift in a rigidity scan."""

    n: int
    kind: str  # "rigid" | "partially-rigid" | "none"
    alpha: Optional[Fraction]
    correlation: RationalInterval
    symdiff: RationalInterval


def rigidity_scan(
    params: ConstructionParams,
    a: LevelSet,
    n_max: int,
    depth: Optional[int] = None,
    theta=Q(1, 20),
) -> list[ScanEntry]:
    """Classify shifts 1..n_max against A as rigid / partially-rigid / none.

    A shift is rigid when the certified symmetric difference stays below
    theta * mu(A); otherwise the certified lower correlation bound yields the
    partial-rigidity coefficient alpha, clipped into [theta, 1 - theta].
    The verdict is always relative to the given set and depth.
    """
    theta = _as_threshold(theta)
    if depth is None:
        depth = depth_for(params, n_max)
    mu = level_set_measure(params, a)
    if mu == 0:
        raise ValueError("cannot classify against a null set")
    stage = build_stage(params, depth)
    a_idx = frozenset(refine_set(params, a, depth).indices)
    w = stage.level_width
    out = []
    for n in range(1, n_max + 1):
        if n >= stage.height:
            raise InsufficientDepthError(
                f"n={n} does not fit in the stage-{depth} tower"
            )
        hits, lost_a, lost_b = _shift_counts(stage.height, a_idx, a_idx, n)
        lo = hits * w
        corr = RationalInterval(lo, lo + min(lost_a, lost_b) * w)
        sym = RationalInterval(2 * (mu - corr.hi), 2 * (mu - corr.lo))
        if sym.hi <= theta * mu:
            kind, alpha = "rigid", None
        else:
            ratio = corr.lo / mu
            if ratio >= theta:
                kind, alpha = "partially-rigid", min(ratio, 1 - theta)
            else:
                kind, alpha = "none", None
        out.append(ScanEntry(n, kind, alpha, corr, sym))
    return out


@dataclass(frozen=True)
class FinitarySwap:
    """Exchange of two same-stage levels by the width-preserving translation.

    The swap is an involution supported on exactly two levels; away from its
    support it is the identity, so it perturbs any deeper tower only along
    the refined copies of those two levels.
    """

    stage: int
    pair: tuple[int, int]

    def __post_init__(self) -> None:
        i, k = self.pair
        if i == k:
            raise ValueError("swap levels must be distinct")
        if i < 0 or k < 0:
            raise ValueError("swap levels must be non-negative")
        if i > k:
            object.__setattr__(self, "pair", (k, i))


def supp_level_set(params: ConstructionParams, swap: FinitarySwap) -> LevelSet:
    """Support of the swap as a two-level set (measure 2 * level width)."""
    height = build_stage(params, swap.stage).height
    if swap.pair[1] >= height:
        raise ValueError(f"swap level {swap.pair[1]} exceeds stage height {height}")
    return LevelSet(swap.stage, swap.pair)


def swap_index_map(
    params: ConstructionParams, swap: FinitarySwap, depth: int
) -> tuple[frozenset, frozenset, int]:
    """Refined supports and index offset realizing the swap at `depth`."""
    i, k = swap.pair
    lo = refine_set(params, LevelSet(swap.stage, (i,)), depth)
    hi = refine_set(params, LevelSet(swap.stage, (k,)), depth)
    return frozenset(lo.indices), frozenset(hi.indices), k - i


def apply_swap(params: ConstructionParams, swap: FinitarySwap, levels: LevelSet) -> LevelSet:
    """Image of a level set under the swap (stage must be >= swap stage)."""
    if levels.stage < swap.stage:
        raise ValueError("refine the level set at least to the swap stage first")
    lo, hi, delta = swap_index_map(params, swap, levels.stage)
    moved = []
    for i in levels.indices:
        if i in lo:
            moved.append(i + delta)
        elif i in hi:
            moved.append(i - delta)
        else:
            moved.append(i)
    return LevelSet(levels.stage, tuple(moved))


def wh_defect(
    params: ConstructionParams,
    swap: FinitarySwap,
    a: LevelSet,
    n_terms: int,
    depth: int,
) -> RationalInterval:
    """Exact interval for (1/N) sum_{i=1..N} mu(T^i A intersect supp S).

    Twice this value majorizes the L2 Cesaro defect of the conjugates
    T^{-i} S T^i applied to the indicator of A, so a certified decay here is
    a certificate of weak homoclinicity of the swap for the construction.
    """
    if n_terms < 1:
        raise ValueError("need at least one Cesaro term")
    stage = build_stage(params, depth)
    if n_terms >= stage.height:
        raise InsufficientDepthError(
            f"N={n_terms} does not fit in the stage-{depth} tower"
        )
    supp = supp_level_set(params, swap)
    a_idx = frozenset(refine_set(params, a, depth).indices)
    s_idx = frozenset(refine_set(params, supp, depth).indices)
    w = stage.level_width
    lo_sum = Q(0)
    hi_sum = Q(0)
    for n in range(1, n_terms + 1):
        hits, lost_a, lost_b = _shift_counts(stage.height, a_idx, s_idx, n)
        lo_sum += hits * w
        hi_sum += (hits + min(lost_a, lost_b)) * w
    return RationalInterval(lo_sum / n_terms, hi_sum / n_terms)
