"""Removal instances, solution checking and bounded-charge minimality."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Sequence

from .core import EPS, INF, CrystalGraph, remaining_energy
from .errors import InvalidGraphError, MinimalityUndecidable

DEFAULT_MAX_ABS_CHARGE = 10**6


class Variant(str, enum.Enum):
    EXACT_K = "exact"
    AT_LEAST_K = "at_least"
    MINIMAL_AT_LEAST_K = "minimal_at_least"


@dataclass(frozen=True)
class RemovalInstance:
    graph: CrystalGraph
    variant: Variant
    k: int
    goal: float = INF

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if int(self.k) != self.k or self.k < 0:
            raise InvalidGraphError(f"k must be a non-negative integer, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "goal", float(self.goal))


@dataclass(frozen=True)
class RemovalSolution:
    removed: FrozenSet[int]

    def __post_init__(self):
        object.__setattr__(self, "removed", frozenset(self.removed))


@dataclass(frozen=True)
class Verdict:
    valid: bool
    remaining: float
    reason: Optional[str] = None


def _charges(g: CrystalGraph, s: Iterable[int]) -> List[int]:
    return [g.ion(i).charge for i in s]


def is_neutral(g: CrystalGraph, s: Iterable[int]) -> bool:
    return sum(_charges(g, s)) == 0


def positive_charge_sum(g: CrystalGraph, s: Iterable[int]) -> int:
    return sum(q for q in _charges(g, s) if q > 0)


def achievable_sums(values: Sequence[int], limit: int) -> int:
    """Bitset of subset sums of ``values`` that are <= ``limit`` (bit t set iff t reachable)."""
    mask = (1 << (limit + 1)) - 1
    reach = 1
    for v in values:
        reach = (reach | (reach << v)) & mask
    return reach


def is_minimal_charges(
    charges: Sequence[int], k: int, max_abs_charge: int = DEFAULT_MAX_ABS_CHARGE
) -> bool:
    """Minimality test on a bare multiset of charges.

    The set is not minimal iff some balanced, non-empty sub-multiset with
    positive part t, 1 <= t <= (positive sum - k), can be peeled off.
    """
    if any(abs(q) > max_abs_charge for q in charges):
        raise MinimalityUndecidable(
            f"a charge exceeds the configured bound {max_abs_charge}"
        )
    if sum(charges) != 0:
        raise ValueError("minimality is only defined for neutral sets")
    pos = [q for q in charges if q > 0]
    neg = [-q for q in charges if q < 0]
    slack = sum(pos) - k
    if slack < 0:
        raise ValueError("set carries fewer than k positive charges")
    if slack == 0:
        return True
    common = achievable_sums(pos, slack) & achievable_sums(neg, slack)
    # bit 0 is the empty peel, which never disqualifies
    return common >> 1 == 0


def is_minimal(
    g: CrystalGraph, r: Iterable[int], k: int, max_abs_charge: int = DEFAULT_MAX_ABS_CHARGE
) -> bool:
    return is_minimal_charges(_charges(g, r), k, max_abs_charge)


def check_charges(
    g: CrystalGraph,
    removed: Iterable[int],
    variant: Variant,
    k: int,
    max_abs_charge: int = DEFAULT_MAX_ABS_CHARGE,
) -> Optional[str]:
    """Return the first failed charge condition, or None when all hold."""
    removed = list(removed)
    charges = _charges(g, removed)
    if sum(charges) != 0:
        return "neutrality"
    pos = sum(q for q in charges if q > 0)
    if variant is Variant.EXACT_K:
        return None if pos == k else "charge-sum"
    if pos < k:
        return "charge-sum"
    if variant is Variant.MINIMAL_AT_LEAST_K and not is_minimal_charges(
        charges, k, max_abs_charge
    ):
        return "minimality"
    return None


def verify_solution(
    inst: RemovalInstance,
    sol: RemovalSolution,
    max_abs_charge: int = DEFAULT_MAX_ABS_CHARGE,
    eps: float = EPS,
) -> Verdict:
    """Check a removal against the instance's variant, k and goal."""
    g = inst.graph
    remaining = remaining_energy(g, sol.removed)
    reason = check_charges(g, sol.removed, inst.variant, inst.k, max_abs_charge)
    if reason is not None:
        return Verdict(False, remaining, reason)
    if not meets_goal(remaining, inst.goal, eps):
        return Verdict(False, remaining, "energy")
    return Verdict(True, remaining)


def meets_goal(energy: float, goal: float, eps: float = EPS) -> bool:
    return energy <= goal + eps
