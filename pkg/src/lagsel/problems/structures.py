"""Feasibility structures: each one defines a lower ideal over element ids.

A structure answers three questions: is a set feasible, can a feasible set
be extended by one more element, and what does the domain look like once a
set ``T`` has been committed (the residual domain).  Residual domains are
again structures of the same kind.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from ..core import as_fraction
from ..errors import PreconditionError, UnknownElementError


class Structure:
    kind = "abstract"

    def validate(self, ids: Iterable):
        """Check that the structure covers exactly the given element ids."""

    def feasible(self, ids: Iterable) -> bool:
        raise NotImplementedError

    def can_extend(self, chosen, x) -> bool:
        return self.feasible([*chosen, x])

    def narrow(self, chosen, candidates) -> list:
        """Candidates that can join ``chosen``, given that each could join ``chosen[:-1]``."""
        return [x for x in candidates if self.can_extend(chosen, x)]

    def restrict(self, ids) -> "Structure":
        raise NotImplementedError

    def residual(self, committed, ids):
        """Domain left once ``committed`` is fixed.

        Returns ``(structure, kept_ids)`` where ``kept_ids`` are the elements
        of ``ids`` outside ``committed`` that can join it, and ``structure``
        accepts ``S`` exactly when ``S | committed`` is feasible.
        """
        raise NotImplementedError


@dataclass(frozen=True)
class FreeStructure(Structure):
    """Every subset is feasible."""

    kind = "free"

    def feasible(self, ids):
        return True

    def can_extend(self, chosen, x):
        return True

    def narrow(self, chosen, candidates):
        return list(candidates)

    def restrict(self, ids):
        return self

    def residual(self, committed, ids):
        committed = set(committed)
        return self, [i for i in ids if i not in committed]


@dataclass(frozen=True)
class Slot:
    """One schedulable instance: half-open interval ``[start, end)``."""

    activity: object
    start: Fraction
    end: Fraction

    def __post_init__(self):
        start = as_fraction(self.start, "start")
        end = as_fraction(self.end, "end")
        if not start < end:
            raise PreconditionError(f"interval [{start}, {end}) is empty")
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "end", end)

    def conflicts(self, other: "Slot") -> bool:
        return self.activity == other.activity or (
            self.start < other.end and other.start < self.end
        )


@dataclass(frozen=True)
class IntervalStructure(Structure):
    """At most one instance per activity, no two scheduled instances overlap."""

    kind = "interval"
    slots: dict = field(default_factory=dict)

    def validate(self, ids):
        ids = set(ids)
        if ids != set(self.slots):
            missing = sorted(map(str, ids ^ set(self.slots)))
            raise PreconditionError(f"interval slots do not match elements: {missing[:5]}")

    def _slot(self, i):
        try:
            return self.slots[i]
        except KeyError:
            raise UnknownElementError(f"unknown element id {i!r}") from None

    def feasible(self, ids):
        chosen = sorted((self._slot(i) for i in ids), key=lambda s: (s.start, s.end))
        activities = set()
        for a, b in zip(chosen, chosen[1:]):
            if b.start < a.end:
                return False
        for s in chosen:
            if s.activity in activities:
                return False
            activities.add(s.activity)
        return True

    def can_extend(self, chosen, x):
        sx = self._slot(x)
        return not any(sx.conflicts(self._slot(c)) for c in chosen)

    def narrow(self, chosen, candidates):
        last = self._slot(chosen[-1])
        return [x for x in candidates if not self._slot(x).conflicts(last)]

    def restrict(self, ids):
        return IntervalStructure({i: s for i, s in self.slots.items() if i in ids})

    def residual(self, committed, ids):
        fixed = [self._slot(c) for c in committed]
        committed = set(committed)
        kept = [
            i for i in ids
            if i not in committed and not any(self._slot(i).conflicts(f) for f in fixed)
        ]
        return self.restrict(set(kept)), kept

    @property
    def activities(self):
        return sorted({s.activity for s in self.slots.values()}, key=str)


@dataclass(frozen=True)
class Placement:
    """Item ``item`` placed in bin ``bin`` occupying ``size`` capacity."""

    item: object
    bin: object
    size: Fraction

    def __post_init__(self):
        size = as_fraction(self.size, "size")
        if size < 0:
            raise PreconditionError("item size must be >= 0")
        object.__setattr__(self, "size", size)


@dataclass(frozen=True)
class GapStructure(Structure):
    """Generalized assignment: elements are item-bin pairs.

    Feasible sets use each item at most once and respect every bin capacity.
    """

    kind = "gap"
    capacities: dict = field(default_factory=dict)
    placements: dict = field(default_factory=dict)

    def __post_init__(self):
        caps = {b: as_fraction(c, f"capacity of bin {b!r}") for b, c in self.capacities.items()}
        if any(c < 0 for c in caps.values()):
            raise PreconditionError("bin capacities must be >= 0")
        object.__setattr__(self, "capacities", caps)

    def validate(self, ids):
        ids = set(ids)
        if ids != set(self.placements):
            raise PreconditionError("gap placements do not match elements")
        for i, p in self.placements.items():
            if p.bin not in self.capacities:
                raise PreconditionError(f"element {i!r} refers to unknown bin {p.bin!r}")

    def _placement(self, i):
        try:
            return self.placements[i]
        except KeyError:
            raise UnknownElementError(f"unknown element id {i!r}") from None

    def feasible(self, ids):
        items = set()
        load = defaultdict(Fraction)
        for i in ids:
            p = self._placement(i)
            if p.item in items:
                return False
            items.add(p.item)
            load[p.bin] += p.size
        return all(load[b] <= self.capacities[b] for b in load)

    def can_extend(self, chosen, x):
        px = self._placement(x)
        load = px.size
        for c in chosen:
            pc = self._placement(c)
            if pc.item == px.item:
                return False
            if pc.bin == px.bin:
                load += pc.size
        return load <= self.capacities[px.bin]

    def restrict(self, ids):
        return GapStructure(
            dict(self.capacities),
            {i: p for i, p in self.placements.items() if i in ids},
        )

    def residual(self, committed, ids):
        committed = set(committed)
        caps = dict(self.capacities)
        items = set()
        for c in committed:
            p = self._placement(c)
            caps[p.bin] -= p.size
            items.add(p.item)
        kept = []
        for i in ids:
            if i in committed:
                continue
            p = self._placement(i)
            if p.item not in items and p.size <= caps[p.bin]:
                kept.append(i)
        return GapStructure(caps, {i: self.placements[i] for i in kept}), kept


@dataclass(frozen=True)
class GraphStructure(Structure):
    """Independent sets of an undirected graph."""

    kind = "graph"
    vertices: frozenset = frozenset()
    edges: frozenset = frozenset()
    _adj: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        vertices = frozenset(self.vertices)
        edges = set()
        adj = {v: set() for v in vertices}
        for e in self.edges:
            u, v = tuple(e)
            if u == v:
                raise PreconditionError(f"self-loop on vertex {u!r}")
            if u not in adj or v not in adj:
                raise PreconditionError(f"edge {u!r}-{v!r} uses an unknown vertex")
            edges.add(frozenset((u, v)))
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", frozenset(edges))
        object.__setattr__(self, "_adj", {v: frozenset(n) for v, n in adj.items()})

    def validate(self, ids):
        if set(ids) != set(self.vertices):
            raise PreconditionError("graph vertices do not match elements")

    def neighbors(self, v):
        try:
            return self._adj[v]
        except KeyError:
            raise UnknownElementError(f"unknown element id {v!r}") from None

    def degree(self, v) -> int:
        return len(self.neighbors(v))

    @property
    def max_degree(self) -> int:
        return max((len(n) for n in self._adj.values()), default=0)

    def feasible(self, ids):
        ids = set(ids)
        for v in ids:
            self.neighbors(v)
        return not any(u in ids and v in ids for u, v in map(tuple, self.edges))

    def can_extend(self, chosen, x):
        nx = self.neighbors(x)
        return not any(c in nx for c in chosen)

    def narrow(self, chosen, candidates):
        blocked = self.neighbors(chosen[-1])
        return [x for x in candidates if x not in blocked and x != chosen[-1]]

    def restrict(self, ids):
        ids = frozenset(ids) & self.vertices
        return GraphStructure(ids, frozenset(e for e in self.edges if e <= ids))

    def residual(self, committed, ids):
        committed = set(committed)
        blocked = set(committed)
        for c in committed:
            blocked |= self.neighbors(c)
        kept = [i for i in ids if i not in blocked]
        return self.restrict(kept), kept


@dataclass(frozen=True)
class GroupedStructure(Structure):
    """A set is feasible when it lies inside a single named group."""

    kind = "grouped"
    groups: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "groups", {g: frozenset(m) for g, m in self.groups.items()})

    def validate(self, ids):
        covered = set().union(*self.groups.values()) if self.groups else set()
        if covered != set(ids):
            raise PreconditionError("every element must belong to some group, and only elements")

    def feasible(self, ids):
        ids = set(ids)
        if not ids:
            return True
        return any(ids <= m for m in self.groups.values())

    def can_extend(self, chosen, x):
        need = {*chosen, x}
        return any(need <= m for m in self.groups.values())

    def narrow(self, chosen, candidates):
        need = set(chosen)
        allowed = set().union(*(m for m in self.groups.values() if need <= m))
        return [x for x in candidates if x in allowed and x not in need]

    def restrict(self, ids):
        ids = set(ids)
        return GroupedStructure({g: m & ids for g, m in self.groups.items()})

    def residual(self, committed, ids):
        committed = set(committed)
        groups = {g: m - committed for g, m in self.groups.items() if committed <= m}
        kept = [i for i in ids if i not in committed and any(i in m for m in groups.values())]
        keep = set(kept)
        return GroupedStructure({g: m & keep for g, m in groups.items()}), kept
