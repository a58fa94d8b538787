"""Resumable depth-first search engine shared by all searches.

A search problem exposes the options at the current state and applies or
undoes one option at a time. The engine keeps an explicit stack of frames
(options + cursor), so its position is fully described by the list of
cursors - the DFS prefix. A checkpoint is that prefix plus the statistics;
resuming replays the prefix and continues exactly where the run stopped.

Problems must be deterministic: the same applied prefix yields the same
option list.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Callable, Literal, Protocol

from app.core.errors import ErrorDetail, MalformedInputError

logger = logging.getLogger(__name__)

RunStatus = Literal["found", "exhausted", "budget"]


@dataclass
class SearchStatistics:
    nodes: int = 0
    prunes_adjacency: int = 0
    prunes_crossing: int = 0
    prunes_symmetry: int = 0
    prunes_capacity: int = 0
    prunes_seed: int = 0
    prunes_forward: int = 0
    elapsed: float = field(default=0.0, compare=False)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> SearchStatistics:
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in known})

    def merge(self, other: SearchStatistics) -> None:
        for f in fields(self):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))

    def restore(self, other: SearchStatistics) -> None:
        """Overwrite in place; the engine holds a reference to this object."""
        for f in fields(self):
            setattr(self, f.name, getattr(other, f.name))


class SearchProblem(Protocol):
    stats: SearchStatistics

    def options(self) -> list[Any]: ...

    def apply(self, option: Any) -> None: ...

    def undo(self, option: Any) -> None: ...

    def is_complete(self) -> bool: ...

    def solution(self) -> Any: ...


@dataclass
class _Frame:
    options: list[Any]
    cursor: int = -1


@dataclass
class Subtree:
    """A DFS position that must not backtrack above its first `floor` frames."""
    prefix: list[int]
    floor: int = 0


@dataclass
class Checkpoint:
    """DFS position plus statistics.

    A sequential run stores its `prefix`; a parallel run stores one
    `frontier` entry per subtree its budget interrupted.
    """
    prefix: list[int]
    stats: dict
    config_hash: str
    frontier: list[Subtree] = field(default_factory=list)

    def save(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text(json.dumps(asdict(self), sort_keys=True))
        tmp.replace(path)
        logger.info(f"Checkpoint written: {path} (depth {len(self.prefix)}, "
                    f"frontier {len(self.frontier)}, nodes {self.stats.get('nodes')})")
        return path

    @classmethod
    def load(cls, path: str | Path) -> Checkpoint:
        try:
            data = json.loads(Path(path).read_text())
            frontier = [Subtree([int(c) for c in item["prefix"]], int(item["floor"]))
                        for item in data.get("frontier", [])]
            return cls(prefix=[int(c) for c in data["prefix"]], stats=dict(data["stats"]),
                       config_hash=str(data["config_hash"]), frontier=frontier)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise MalformedInputError(
                f"Cannot read checkpoint {path}.",
                details=[ErrorDetail(code="BAD_CHECKPOINT", message=str(exc), field="resume")],
            ) from exc


class DepthFirstSearch:
    """Iterative DFS with node/time budgets, checkpoints and a subtree floor.

    floor > 0 pins the first `floor` frames: the run ends as exhausted
    instead of backtracking above them (used by parallel workers).
    """

    poll_every = 1024

    def __init__(
        self,
        problem: SearchProblem,
        node_budget: int | None = None,
        time_budget: float | None = None,
        checkpoint_interval: int | None = None,
        on_checkpoint: Callable[[list[int]], None] | None = None,
        should_stop: Callable[[], bool] | None = None,
    ):
        self.problem = problem
        self.stats = problem.stats
        self.node_budget = node_budget
        self.time_budget = time_budget
        self.checkpoint_interval = checkpoint_interval
        self.on_checkpoint = on_checkpoint
        self.should_stop = should_stop
        self.floor = 0
        self._stack: list[_Frame] | None = None
        self._pending_found = False
        self._next_poll = 0

    def prefix(self) -> list[int]:
        return [frame.cursor for frame in self._stack or []]

    def start(self, prefix: list[int] | None = None, floor: int = 0) -> None:
        """Replay a stack prefix; the last cursor may be -1 (options listed, none tried)."""
        self._stack = []
        for cursor in prefix or [-1]:
            options = self.problem.options()
            if cursor >= len(options):
                raise MalformedInputError(
                    "Checkpoint prefix does not match the search problem.",
                    details=[ErrorDetail(code="PREFIX_MISMATCH",
                                         message=f"cursor {cursor} at depth {len(self._stack)}",
                                         field="prefix")],
                )
            if cursor >= 0:
                self.problem.apply(options[cursor])
            self._stack.append(_Frame(options, cursor))
            if cursor >= 0 and self.problem.is_complete():
                break
        last = self._stack[-1]
        self._pending_found = last.cursor >= 0 and self.problem.is_complete()
        self.floor = floor

    def start_subtree(self, path: list[int]) -> None:
        """Explore only below an applied option path."""
        self.start(path + [-1], floor=len(path))

    def run(self) -> RunStatus:
        if self._stack is None:
            self.start()
        if self._pending_found:
            self._pending_found = False
            return "found"
        began = time.monotonic()
        elapsed0 = self.stats.elapsed
        try:
            while len(self._stack) > self.floor:
                if self._out_of_budget(began):
                    return "budget"
                frame = self._stack[-1]
                if frame.cursor >= 0:
                    self.problem.undo(frame.options[frame.cursor])
                frame.cursor += 1
                if frame.cursor >= len(frame.options):
                    self._stack.pop()
                    continue
                self.problem.apply(frame.options[frame.cursor])
                self.stats.nodes += 1
                if self.problem.is_complete():
                    return "found"
                self._stack.append(_Frame(self.problem.options()))
                # Saved after the push so the snapshot already counts this frame.
                if (self.checkpoint_interval and self.on_checkpoint
                        and self.stats.nodes % self.checkpoint_interval == 0):
                    self.on_checkpoint(self.prefix())
            return "exhausted"
        finally:
            self.stats.elapsed = elapsed0 + time.monotonic() - began

    def unwind(self) -> None:
        """Undo every applied option, leaving the problem at its root state."""
        for frame in reversed(self._stack or []):
            if frame.cursor >= 0:
                self.problem.undo(frame.options[frame.cursor])
        self._stack = None

    def _out_of_budget(self, began: float) -> bool:
        if self.node_budget is not None and self.stats.nodes >= self.node_budget:
            return True
        if self.time_budget is not None and time.monotonic() - began >= self.time_budget:
            return True
        if self.should_stop is not None and self.stats.nodes >= self._next_poll:
            self._next_poll = self.stats.nodes + self.poll_every
            return self.should_stop()
        return False


def split_prefixes(problem: SearchProblem, min_count: int, max_depth: int = 6) -> list[list[int]]:
    """Disjoint option paths whose subtrees cover the whole tree."""
    paths: list[list[int]] = [[]]
    for _ in range(max_depth):
        if len(paths) >= min_count:
            break
        expanded: list[list[int]] = []
        for path in paths:
            engine = DepthFirstSearch(problem)
            engine.start_subtree(path)
            if engine._pending_found:
                expanded.append(path)
            else:
                expanded.extend(path + [i] for i in range(len(engine._stack[-1].options)))
            engine.unwind()
        paths = expanded
    return paths
