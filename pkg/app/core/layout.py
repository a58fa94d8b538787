"""Cyclic layouts (spine orders drawn on a circle) and the chord crossing test."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from app.core.errors import ErrorDetail, MalformedInputError
from app.core.graph import Edge


@dataclass(frozen=True)
class CyclicLayout:
    """Vertices 1..n read counter-clockwise; position 0 is an arbitrary cut."""
    order: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.order) != list(range(1, len(self.order) + 1)):
            missing = sorted(set(range(1, len(self.order) + 1)) - set(self.order))
            raise MalformedInputError(
                "Layout is not a permutation of 1..n.",
                details=[ErrorDetail(
                    code="NOT_A_PERMUTATION",
                    message=f"Missing vertices: {missing}" if missing else "Duplicate vertices.",
                    field="layout",
                )],
            )

    @classmethod
    def of(cls, order: Iterable[int]) -> CyclicLayout:
        return cls(tuple(int(v) for v in order))

    @classmethod
    def identity(cls, n: int) -> CyclicLayout:
        return cls(tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.order)

    @cached_property
    def position(self) -> dict[int, int]:
        return {v: p for p, v in enumerate(self.order)}

    def rotate(self, r: int) -> CyclicLayout:
        if not self.order:
            return self
        r %= self.n
        return CyclicLayout(self.order[r:] + self.order[:r])

    def reflect(self) -> CyclicLayout:
        return CyclicLayout(tuple(reversed(self.order)))

    def variants(self) -> Iterator[CyclicLayout]:
        """All 2n rotations and reflections."""
        for base in (self, self.reflect()):
            for r in range(max(self.n, 1)):
                yield base.rotate(r)

    def canonical(self) -> CyclicLayout:
        """Lexicographically least variant; it always starts with vertex 1."""
        return min(self.variants(), key=lambda layout: layout.order)

    def is_canonical(self) -> bool:
        return self.canonical() == self

    def equivalent(self, other: CyclicLayout) -> bool:
        return self.canonical() == other.canonical()


def enumerate_layouts(n: int) -> Iterator[CyclicLayout]:
    """One canonical representative per rotation/reflection class.

    Vertex 1 is pinned to position 0 and reflections are removed by
    requiring order[1] < order[-1].
    """
    if n <= 2:
        yield CyclicLayout.identity(n)
        return
    for rest in itertools.permutations(range(2, n + 1)):
        if rest[0] < rest[-1]:
            yield CyclicLayout((1,) + rest)


def _require_positions(layout: CyclicLayout, edge: Edge) -> tuple[int, int]:
    pos = layout.position
    try:
        return pos[edge[0]], pos[edge[1]]
    except KeyError as exc:
        raise MalformedInputError(
            f"Edge {edge[0]}-{edge[1]} has an endpoint missing from the layout.",
            details=[ErrorDetail(
                code="ENDPOINT_NOT_IN_LAYOUT",
                message=f"Vertex {exc.args[0]} is not placed.",
                field="layout",
            )],
        ) from exc


def chords_cross(a: int, b: int, c: int, d: int) -> bool:
    """Positions a-b and c-d alternate around the circle (all four distinct)."""
    if a > b:
        a, b = b, a
    return (a < c < b) != (a < d < b)


def edges_conflict(layout: CyclicLayout, e1: Edge, e2: Edge) -> bool:
    """True iff the four endpoints are distinct and alternate around the circle.

    Edges sharing a vertex never conflict; they are adjacent instead.
    """
    a, b = _require_positions(layout, e1)
    c, d = _require_positions(layout, e2)
    if len({e1[0], e1[1], e2[0], e2[1]}) < 4:
        return False
    return chords_cross(a, b, c, d)
