"""
Minimum-edit alignment of two entity sequences.

Substituting two entities costs 0 when their categories agree and 1 otherwise;
an insertion or deletion costs 1. Among minimum-cost alignments the one with
the most category matches wins, then the one with the most exact value
matches. The objective is symmetric, so swapping the sides swaps the counts.
"""

from enum import Enum
from typing import NamedTuple

from ..alphabet.tags import Entity
from ..core.exceptions import EvaluationError


class Op(str, Enum):
    MATCH = "match"
    SUBSTITUTION = "substitution"
    DELETION = "deletion"
    INSERTION = "insertion"


class AlignedPair(NamedTuple):
    op: Op
    ref: Entity | None
    hyp: Entity | None

    @property
    def category_hit(self) -> bool:
        return self.op is Op.MATCH

    @property
    def value_hit(self) -> bool:
        return self.op is Op.MATCH and self.ref.value == self.hyp.value


def check_ordered(entities: list[Entity], side: str) -> None:
    for a, b in zip(entities, entities[1:]):
        if b.start < a.end:
            raise EvaluationError(
                f"{side} entities are unordered or overlapping",
                {"first": a.word_span, "second": b.word_span},
            )


def _pair_cost(r: Entity, h: Entity) -> tuple[int, int, int]:
    if r.category is h.category:
        return (0, -1, -int(r.value == h.value))
    return (1, 0, 0)


def _plus(a: tuple[int, int, int], b: tuple[int, int, int]) -> tuple[int, int, int]:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def align_entities(ref: list[Entity], hyp: list[Entity]) -> list[AlignedPair]:
    """Optimal alignment; among equal-cost alignments, entities pair up earliest first."""
    check_ordered(ref, "reference")
    check_ordered(hyp, "hypothesis")
    n, m = len(ref), len(hyp)
    gap = (1, 0, 0)

    # cost[i][j] = (edits, -category matches, -value matches) for ref[i:] vs hyp[j:]
    cost = [[(0, 0, 0)] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        cost[i][m] = (n - i, 0, 0)
    for j in range(m - 1, -1, -1):
        cost[n][j] = (m - j, 0, 0)
    for i in range(n - 1, -1, -1):
        for j in range(m - 1, -1, -1):
            cost[i][j] = min(
                _plus(_pair_cost(ref[i], hyp[j]), cost[i + 1][j + 1]),
                _plus(gap, cost[i + 1][j]),
                _plus(gap, cost[i][j + 1]),
            )

    # walk forward, pairing before skipping
    pairs: list[AlignedPair] = []
    i, j = 0, 0
    while i < n or j < m:
        here = cost[i][j]
        if i < n and j < m:
            r, h = ref[i], hyp[j]
            if _plus(_pair_cost(r, h), cost[i + 1][j + 1]) == here:
                op = Op.MATCH if r.category is h.category else Op.SUBSTITUTION
                pairs.append(AlignedPair(op, r, h))
                i, j = i + 1, j + 1
                continue
        if i < n and _plus(gap, cost[i + 1][j]) == here:
            pairs.append(AlignedPair(Op.DELETION, ref[i], None))
            i += 1
            continue
        pairs.append(AlignedPair(Op.INSERTION, None, hyp[j]))
        j += 1
    return pairs
