"""Pebbling moves, re-iterable (possibly lazy) schedules, and the simulator.

A schedule is replayed move by move from a starting configuration. The
simulator keeps O(1) state per vertex and never stores the move sequence, so
schedules far longer than memory can still be checked.
"""

from __future__ import annotations

import enum
import itertools
import json
from collections.abc import Callable, Iterable, Iterator, Mapping
from dataclasses import dataclass
from typing import NamedTuple, Union

from pebbling.errors import PebblingError, UnknownVertexError
from pebbling.graph import Dag


class _Kinded:
    """Tuple equality that also compares the move kind, so that
    ``Place(1) != Remove(1)``."""

    __slots__ = ()

    def __eq__(self, other):
        return type(self) is type(other) and tuple.__eq__(self, other)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((type(self).__name__, *self))


class _PlaceFields(NamedTuple):
    v: int


class _SlideFields(NamedTuple):
    src: int
    dst: int


class _RemoveFields(NamedTuple):
    v: int


class Place(_Kinded, _PlaceFields):
    __slots__ = ()

    def __str__(self) -> str:
        return f"P {self.v}"


class Slide(_Kinded, _SlideFields):
    __slots__ = ()

    def __new__(cls, src: int, dst: int):
        if src == dst:
            raise ValueError(f"slide endpoints must differ (got {src})")
        return super().__new__(cls, src, dst)

    def __str__(self) -> str:
        return f"S {self.src} {self.dst}"


class Remove(_Kinded, _RemoveFields):
    __slots__ = ()

    def __str__(self) -> str:
        return f"R {self.v}"


Move = Union[Place, Slide, Remove]


def target(move: Move) -> int:
    """The vertex whose pebble state a move changes (slide: its destination)."""
    return move.dst if type(move) is Slide else move.v


class Schedule:
    """An ordered, re-iterable sequence of moves.

    Backed either by a tuple or by a zero-argument factory returning a fresh
    iterator, so exponentially long constructions stay lazy.
    """

    __slots__ = ("_moves", "_factory")

    def __init__(self, moves: Iterable[Move] = ()) -> None:
        self._moves: tuple[Move, ...] | None = tuple(moves)
        self._factory: Callable[[], Iterator[Move]] | None = None

    @classmethod
    def lazy(cls, factory: Callable[[], Iterable[Move]]) -> Schedule:
        s = cls.__new__(cls)
        s._moves = None
        s._factory = lambda: iter(factory())
        return s

    @property
    def is_materialized(self) -> bool:
        return self._moves is not None

    def __iter__(self) -> Iterator[Move]:
        if self._moves is not None:
            return iter(self._moves)
        return self._factory()

    def __len__(self) -> int:
        if self._moves is None:
            raise TypeError("length of a lazy schedule is unknown; use simulate()")
        return len(self._moves)

    def __add__(self, other: Schedule) -> Schedule:
        if not isinstance(other, Schedule):
            return NotImplemented
        if self.is_materialized and other.is_materialized:
            return Schedule(self._moves + other._moves)
        return Schedule.lazy(lambda: itertools.chain(self, other))

    def __getitem__(self, index):
        if isinstance(index, slice):
            if self._moves is not None:
                return Schedule(self._moves[index])
            start, stop, step = index.start, index.stop, index.step
            if any(x is not None and x < 0 for x in (start, stop, step)):
                raise ValueError("negative slices need a materialized schedule")
            return Schedule.lazy(lambda: itertools.islice(self, start, stop, step))
        if self._moves is not None:
            return self._moves[index]
        raise TypeError("index a materialized schedule, or slice a lazy one")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Schedule):
            return NotImplemented
        return all(a == b for a, b in itertools.zip_longest(self, other))

    def materialize(self, limit: int | None = None) -> Schedule:
        """Tuple-backed copy, or ``self`` when longer than ``limit`` moves."""
        if self._moves is not None:
            return self
        if limit is None:
            return Schedule(self)
        buf = list(itertools.islice(self, limit + 1))
        return self if len(buf) > limit else Schedule(buf)

    def __repr__(self) -> str:
        if self._moves is None:
            return "Schedule(<lazy>)"
        return f"Schedule({len(self._moves)} moves)"


class Reason(str, enum.Enum):
    MISSING_PREDECESSOR = "missing-predecessor"
    NOT_A_PREDECESSOR = "not-a-predecessor"
    NOT_PEBBLED = "not-pebbled"
    ALREADY_PEBBLED = "already-pebbled"
    UNKNOWN_VERTEX = "unknown-vertex"


class IllegalMoveError(PebblingError):
    def __init__(self, index: int, move: Move, reason: Reason) -> None:
        self.index = index
        self.move = move
        self.reason = reason
        super().__init__(f"illegal move #{index} ({move}): {reason.value}")


@dataclass(frozen=True)
class PebbleMetrics:
    peak: int
    moves: int
    covered: frozenset[int]
    final: frozenset[int]

    def to_json(self, names: Mapping[int, str] | None = None) -> dict:
        label = (lambda v: names.get(v, str(v))) if names else (lambda v: v)
        return {
            "peak": self.peak,
            "moves": self.moves,
            "covered": sorted(label(v) for v in self.covered),
            "final": sorted(label(v) for v in self.final),
        }


def simulate(
    dag: Dag,
    schedule: Iterable[Move],
    initial: Iterable[int] = (),
    on_move: Callable[[int, Move, int], None] | None = None,
) -> PebbleMetrics:
    """Replay ``schedule`` under the pebble-game rules.

    Starts from ``initial`` (empty by default). ``on_move(index, move, count)``
    is called after every legal move with the resulting pebble count. Raises
    :class:`IllegalMoveError` at the first illegal move.
    """
    preds = dag.pred_map
    pebbled = set(initial)
    stray = pebbled.difference(preds)
    if stray:
        raise UnknownVertexError(stray)
    covered = set(pebbled)
    count = len(pebbled)
    peak = count
    index = -1
    for index, mv in enumerate(schedule):
        kind = type(mv)
        if kind is Remove:
            v = mv.v
            if v not in pebbled:
                raise IllegalMoveError(index, mv, _why_absent(v, preds))
            pebbled.remove(v)
            count -= 1
        else:
            if kind is Place:
                v = mv.v
            elif kind is Slide:
                v, u = mv.dst, mv.src
                if u not in preds:
                    raise IllegalMoveError(index, mv, Reason.UNKNOWN_VERTEX)
            else:
                raise TypeError(f"not a move: {mv!r}")
            ps = preds.get(v)
            if ps is None:
                raise IllegalMoveError(index, mv, Reason.UNKNOWN_VERTEX)
            if kind is Slide and u not in ps:
                raise IllegalMoveError(index, mv, Reason.NOT_A_PREDECESSOR)
            if v in pebbled:
                raise IllegalMoveError(index, mv, Reason.ALREADY_PEBBLED)
            for p in ps:
                if p not in pebbled:
                    raise IllegalMoveError(index, mv, Reason.MISSING_PREDECESSOR)
            pebbled.add(v)
            covered.add(v)
            if kind is Slide:
                pebbled.remove(u)
            else:
                count += 1
                if count > peak:
                    peak = count
        if on_move is not None:
            on_move(index, mv, count)
    return PebbleMetrics(peak, index + 1, frozenset(covered), frozenset(pebbled))


def _why_absent(v: int, preds: Mapping) -> Reason:
    return Reason.NOT_PEBBLED if v in preds else Reason.UNKNOWN_VERTEX


class Status(str, enum.Enum):
    LEGAL_AND_FULL = "legal-and-full"
    LEGAL_NOT_FULL = "legal-not-full"
    ILLEGAL = "illegal"


@dataclass(frozen=True)
class Verdict:
    status: Status
    metrics: PebbleMetrics | None = None
    index: int | None = None
    reason: Reason | None = None

    @property
    def ok(self) -> bool:
        return self.status is Status.LEGAL_AND_FULL

    def __str__(self) -> str:
        if self.status is Status.ILLEGAL:
            return f"illegal({self.index}, {self.reason.value})"
        return self.status.value


def verify_full(dag: Dag, schedule: Iterable[Move]) -> Verdict:
    """Classify a schedule as legal-and-full, legal-not-full or illegal."""
    try:
        metrics = simulate(dag, schedule)
    except IllegalMoveError as exc:
        return Verdict(Status.ILLEGAL, None, exc.index, exc.reason)
    if len(metrics.covered) == dag.n:
        return Verdict(Status.LEGAL_AND_FULL, metrics)
    return Verdict(Status.LEGAL_NOT_FULL, metrics)


# -- text format ---------------------------------------------------------

def format_moves(schedule: Iterable[Move], names: Mapping[int, str] | None = None) -> Iterator[str]:
    """One move per line: ``P <v>``, ``S <u> <v>``, ``R <v>``."""
    label = (lambda v: names.get(v, str(v))) if names else str
    for mv in schedule:
        if type(mv) is Slide:
            yield f"S {label(mv.src)} {label(mv.dst)}"
        elif type(mv) is Place:
            yield f"P {label(mv.v)}"
        else:
            yield f"R {label(mv.v)}"


def parse_moves(text: str, ids: Mapping[str, int]) -> Schedule:
    """Inverse of :func:`format_moves`; ``ids`` maps vertex names to ids."""
    from pebbling.errors import ParseError

    moves: list[Move] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        op, args = tok[0].upper(), tok[1:]
        want = {"P": 1, "R": 1, "S": 2}.get(op)
        if want is None:
            raise ParseError(lineno, f"unknown move {tok[0]!r}")
        if len(args) != want:
            raise ParseError(lineno, f"move {op} takes {want} vertex name(s)")
        try:
            vs = [ids[a] for a in args]
        except KeyError as exc:
            raise ParseError(lineno, f"unknown vertex {exc.args[0]!r}") from None
        if op == "P":
            moves.append(Place(vs[0]))
        elif op == "R":
            moves.append(Remove(vs[0]))
        else:
            if vs[0] == vs[1]:
                raise ParseError(lineno, "slide endpoints must differ")
            moves.append(Slide(vs[0], vs[1]))
    return Schedule(moves)


def metrics_json(metrics: PebbleMetrics, names: Mapping[int, str] | None = None) -> str:
    return json.dumps(metrics.to_json(names))
