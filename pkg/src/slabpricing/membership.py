"""Graded desirability of consumption levels and consistency of choices.

A consumer's attitude toward a consumption quantity is expressed as a degree
in [0, 1]: 0 below the fully unacceptable level, 1 above the fully desirable
level, and a monotone ramp in between. Three ramp shapes are supported. The
same degrees drive a choice rule (pick the item with the highest degree) and
a two-way consistency check between nested choice sets.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from .errors import InvalidParameterError


class MembershipForm(enum.Enum):
    """Shape of the ramp between the unacceptable and desirable levels."""

    LINEAR = "linear"
    PARABOLIC = "parabolic"
    REVERSED_PARABOLIC = "reversed_parabolic"


@dataclass(frozen=True)
class MembershipSpec:
    """One graded criterion.

    Attributes:
        form: ramp shape between the two anchor levels.
        unacceptable_level: largest value with degree 0.
        desirable_level: smallest value with degree 1; must exceed
            ``unacceptable_level``.
    """

    form: MembershipForm
    unacceptable_level: float
    desirable_level: float

    def __post_init__(self) -> None:
        if not self.desirable_level > self.unacceptable_level:
            raise InvalidParameterError(
                "desirable_level must exceed unacceptable_level: "
                f"got {self.desirable_level} <= {self.unacceptable_level}"
            )


def eval_membership(spec: MembershipSpec, value: float) -> float:
    """Degree of ``value`` under ``spec``, clamped to [0, 1].

    The linear form is the ramp (value - lo) / (hi - lo). The parabolic form
    squares the ramp (slow takeoff, fast approach to 1); the reversed
    parabolic form is 1 - (1 - t)^2 (fast takeoff, slow approach). All three
    agree at the anchors and are nondecreasing in ``value``.
    """
    t = (value - spec.unacceptable_level) / (
        spec.desirable_level - spec.unacceptable_level
    )
    t = min(1.0, max(0.0, t))
    if spec.form is MembershipForm.LINEAR:
        return t
    if spec.form is MembershipForm.PARABOLIC:
        return t * t
    return 1.0 - (1.0 - t) * (1.0 - t)


def aggregate_degree(degrees: Iterable[float]) -> float:
    """Combine individual degrees into a market-level degree with max.

    The union of individual attitudes is graded by its strongest member, so
    a market wants a commodity as much as its keenest consumer does. Raises
    on an empty collection or any degree outside [0, 1].
    """
    pool = tuple(degrees)
    if not pool:
        raise InvalidParameterError("aggregate_degree requires at least one degree")
    for d in pool:
        if not 0.0 <= d <= 1.0:
            raise InvalidParameterError(f"degree {d} outside [0, 1]")
    return max(pool)


class ConsistencyVerdict(enum.Enum):
    CONSISTENT = "consistent"
    INCONSISTENT = "inconsistent"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class ChoiceProblem:
    """A finite universe of items with a degree attached to each.

    ``degrees`` must assign a degree to every universe member. Item
    identifiers are strings; ties in degree resolve to the lexicographically
    smallest identifier, which keeps every choice deterministic.
    """

    universe: frozenset[str]
    degrees: Mapping[str, float]

    def __post_init__(self) -> None:
        if not self.universe:
            raise InvalidParameterError("universe must be non-empty")
        missing = self.universe - set(self.degrees)
        if missing:
            raise InvalidParameterError(
                f"degrees missing for items: {sorted(missing)}"
            )


def choose(
    problem: ChoiceProblem,
    subset: frozenset[str] | set[str],
    degrees: Mapping[str, float] | None = None,
) -> str:
    """Best item of ``subset``: highest degree, ties to the smallest id."""
    if not subset:
        raise InvalidParameterError("cannot choose from an empty subset")
    extra = set(subset) - problem.universe
    if extra:
        raise InvalidParameterError(f"items outside the universe: {sorted(extra)}")
    table = problem.degrees if degrees is None else degrees
    missing = set(subset) - set(table)
    if missing:
        raise InvalidParameterError(f"degrees missing for items: {sorted(missing)}")
    return max(sorted(subset), key=lambda item: table[item])


def two_way_consistency_check(
    problem: ChoiceProblem,
    s1: frozenset[str] | set[str],
    s2: frozenset[str] | set[str],
    degrees_s2: Mapping[str, float] | None = None,
) -> ConsistencyVerdict:
    """Compare the choice from a subset with the choice from a superset.

    ``s1`` must be a subset of ``s2``. The verdict is CONSISTENT when both
    sets elect the same item, NOT_APPLICABLE when the superset's choice lies
    outside ``s1`` (so no comparison binds), and INCONSISTENT otherwise.

    ``degrees_s2`` optionally evaluates the superset under a different degree
    table, modeling a consumer whose grading shifted between the two
    decisions. With a single fixed table the verdict can never be
    INCONSISTENT: if the superset's maximizer lies in ``s1`` it is also the
    subset's maximizer (same ordering, same tie-break).
    """
    s1, s2 = frozenset(s1), frozenset(s2)
    if not s1:
        raise InvalidParameterError("s1 must be non-empty")
    if not s1 <= s2:
        raise InvalidParameterError("s1 must be a subset of s2")
    if not s2 <= problem.universe:
        raise InvalidParameterError("s2 must lie within the universe")
    c2 = choose(problem, s2, degrees_s2)
    if c2 not in s1:
        return ConsistencyVerdict.NOT_APPLICABLE
    c1 = choose(problem, s1)
    if c1 == c2:
        return ConsistencyVerdict.CONSISTENT
    return ConsistencyVerdict.INCONSISTENT
