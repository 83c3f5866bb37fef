"""Knot diagrams as combinatorial maps.

A diagram is a 4-valent rotation system: each crossing is a cyclic
(counterclockwise) 4-tuple of semiarc ids, with ports 0 and 2 carrying the
under-strand and ports 1 and 3 the over-strand.  Semiarc endpoints are
derived from the port slots; a semiarc id listed in ``loops`` is a closed
circle with no endpoints (only the 0-crossing unknot uses this).

Faces come from the rotation system: walking a directed semiarc and turning
to the next counterclockwise port traces the face on the right-hand side.
Planarity is checked (Euler characteristic 2), never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

Dart = tuple[int, int]  # (crossing id, port index)

UNDER_PORTS = (0, 2)
OVER_PORTS = (1, 3)


class DiagramError(ValueError):
    """Raised when an operation is given a structurally invalid diagram."""


@dataclass(frozen=True)
class Crossing:
    id: int
    ports: tuple[int, int, int, int]


@dataclass(frozen=True)
class SemiArc:
    id: int
    endpoints: tuple[Dart, ...]  # two darts, or empty for a closed loop


@dataclass(frozen=True)
class Arc:
    """Maximal over-passing path; the unit that carries a color."""

    id: int
    semiarcs: tuple[int, ...]


def _fresh_ids(used: set[int], n: int) -> list[int]:
    """Smallest n non-negative ids not in `used` (reproducible allocation)."""
    out: list[int] = []
    candidate = 0
    while len(out) < n:
        if candidate not in used:
            out.append(candidate)
        candidate += 1
    return out


class Diagram:
    """Immutable knot diagram.  All rewriting produces new values."""

    def __init__(self, crossings: dict[int, tuple[int, int, int, int]],
                 loops: frozenset[int] = frozenset()):
        self._crossings = {c: tuple(ports) for c, ports in crossings.items()}
        self._loops = frozenset(loops)

    @property
    def crossings(self) -> dict[int, tuple[int, int, int, int]]:
        return dict(self._crossings)

    @property
    def loops(self) -> frozenset[int]:
        return self._loops

    def __eq__(self, other) -> bool:
        return (isinstance(other, Diagram)
                and self._crossings == other._crossings
                and self._loops == other._loops)

    def __repr__(self) -> str:
        return f"Diagram({len(self._crossings)} crossings, {len(self.semiarc_ids)} semiarcs)"

    # -- derived structure ------------------------------------------------

    @cached_property
    def endpoint_slots(self) -> dict[int, list[Dart]]:
        """semiarc id -> the port slots where it appears (0 or 2 darts)."""
        slots: dict[int, list[Dart]] = {s: [] for s in self._loops}
        for c, ports in sorted(self._crossings.items()):
            for p, s in enumerate(ports):
                slots.setdefault(s, []).append((c, p))
        return slots

    @cached_property
    def semiarc_ids(self) -> tuple[int, ...]:
        return tuple(sorted(self.endpoint_slots))

    def semiarc(self, s: int) -> SemiArc:
        return SemiArc(s, tuple(self.endpoint_slots[s]))

    def crossing(self, c: int) -> Crossing:
        return Crossing(c, self._crossings[c])

    def port(self, c: int, p: int) -> int:
        return self._crossings[c][p % 4]

    def alpha(self, dart: Dart) -> Dart:
        """The other endpoint of the semiarc attached at `dart`."""
        c, p = dart
        s = self._crossings[c][p]
        ends = self.endpoint_slots[s]
        if len(ends) != 2:
            raise DiagramError(f"semiarc {s} does not have two endpoints")
        if ends[0] == dart:
            return ends[1]
        if ends[1] == dart:
            return ends[0]
        # same semiarc occupying both slots at equal darts cannot happen;
        # a loop edge at one crossing has two distinct (c, p) slots
        raise DiagramError(f"dart {dart} not an endpoint of semiarc {s}")

    # -- validation --------------------------------------------------------

    def validate(self) -> list[str]:
        """All invariant violations; empty iff the diagram is a valid knot."""
        problems: list[str] = []
        counts: dict[int, int] = {}
        for c, ports in self._crossings.items():
            if len(ports) != 4:
                problems.append(f"crossing {c}: expected 4 ports, got {len(ports)}")
                continue
            for s in ports:
                counts[s] = counts.get(s, 0) + 1
        for s, n in sorted(counts.items()):
            if s in self._loops:
                problems.append(f"semiarc {s}: closed loop also attached to a port")
            elif n != 2:
                problems.append(f"semiarc {s}: port multiplicity {n}, expected 2")
        if self._loops and self._crossings:
            problems.append("closed loop semiarc in a diagram with crossings")
        if len(self._loops) > 1:
            problems.append(f"{len(self._loops)} closed loops, expected at most 1")
        if problems:
            return problems

        n_components = self.component_count()
        if n_components != 1:
            problems.append(f"component count = {n_components}")
        chi = self.euler_characteristic()
        if chi != 2:
            problems.append(f"euler characteristic = {chi}, non-planar rotation system")
        return problems

    def check(self) -> "Diagram":
        problems = self.validate()
        if problems:
            raise DiagramError("; ".join(problems))
        return self

    def component_count(self) -> int:
        """Knot components under straight-through traversal at crossings."""
        if not self._crossings:
            return len(self._loops)
        unseen = set(self.semiarc_ids)
        components = 0
        while unseen:
            start_dart = self.endpoint_slots[min(unseen)][0]
            components += 1
            d = start_dart
            while True:
                unseen.discard(self._crossings[d[0]][d[1]])
                c, p = self.alpha(d)  # arrive at the far end of the semiarc
                d = (c, (p + 2) % 4)  # pass straight through the crossing
                if d == start_dart:
                    break
        return components

    # -- faces and planarity ------------------------------------------------

    @cached_property
    def face_orbits(self) -> tuple[tuple[Dart, ...], ...]:
        """Faces as orbits of sigma(alpha(d)); deterministic order."""
        if not self._crossings:
            # a bare circle bounds two disk faces by convention
            return ((), ())
        darts = [(c, p) for c in sorted(self._crossings) for p in range(4)]
        seen: set[Dart] = set()
        faces: list[tuple[Dart, ...]] = []
        for d0 in darts:
            if d0 in seen:
                continue
            orbit = []
            d = d0
            while True:
                orbit.append(d)
                seen.add(d)
                c, p = self.alpha(d)
                d = (c, (p + 1) % 4)
                if d == d0:
                    break
            faces.append(tuple(orbit))
        return tuple(faces)

    def faces(self) -> tuple[tuple[Dart, ...], ...]:
        return self.face_orbits

    def face_of(self, dart: Dart) -> tuple[Dart, ...]:
        for face in self.face_orbits:
            if dart in face:
                return face
        raise DiagramError(f"dart {dart} not on any face")

    def euler_characteristic(self) -> int:
        if not self._crossings:
            return 2  # circle on the sphere
        v = len(self._crossings)
        e = len(self.semiarc_ids)
        f = len(self.face_orbits)
        return v - e + f

    # -- arcs ----------------------------------------------------------------

    @cached_property
    def arc_list(self) -> tuple[Arc, ...]:
        """Partition of semiarcs into maximal over-passing paths."""
        if not self._crossings:
            return tuple(Arc(i, (s,)) for i, s in enumerate(sorted(self._loops)))
        # adjacency through over-ports: at an odd port, the strand continues
        # at the opposite (odd) port of the same crossing
        remaining = set(self.semiarc_ids)
        raw_arcs: list[tuple[int, ...]] = []
        while remaining:
            s0 = min(remaining)
            chain = [s0]
            remaining.discard(s0)
            ends = self.endpoint_slots[s0]
            # extend from each endpoint while it sits on an over-port
            for direction, dart in enumerate(ends):
                while True:
                    c, p = dart
                    if p % 2 == 0:
                        break  # under-port terminates the arc
                    nxt_port = (p + 2) % 4
                    s = self._crossings[c][nxt_port]
                    if s in chain and s not in remaining:
                        break  # closed over-cycle (cannot occur in a knot)
                    if direction == 0:
                        chain.insert(0, s)
                    else:
                        chain.append(s)
                    remaining.discard(s)
                    e0, e1 = self.endpoint_slots[s]
                    dart = e1 if e0 == (c, nxt_port) else e0
            raw_arcs.append(tuple(chain))
        raw_arcs.sort(key=min)
        return tuple(Arc(i, sas) for i, sas in enumerate(raw_arcs))

    def arcs(self) -> tuple[Arc, ...]:
        return self.arc_list

    @cached_property
    def arc_of_semiarc(self) -> dict[int, int]:
        return {s: arc.id for arc in self.arc_list for s in arc.semiarcs}

    def over_arc_at(self, c: int) -> int:
        """Arc id of the over-strand at crossing c."""
        return self.arc_of_semiarc[self._crossings[c][1]]

    def under_arcs_at(self, c: int) -> tuple[int, int]:
        """Arc ids of the two under-strand branches at crossing c."""
        return (self.arc_of_semiarc[self._crossings[c][0]],
                self.arc_of_semiarc[self._crossings[c][2]])

    # -- id management -------------------------------------------------------

    def fresh_semiarc_ids(self, n: int, freed: set[int] | None = None) -> list[int]:
        used = set(self.semiarc_ids) - (freed or set())
        return _fresh_ids(used, n)

    def fresh_crossing_ids(self, n: int, freed: set[int] | None = None) -> list[int]:
        used = set(self._crossings) - (freed or set())
        return _fresh_ids(used, n)


def unknot() -> Diagram:
    """The 0-crossing unknot: a single closed semiarc."""
    return Diagram({}, loops=frozenset({0}))
