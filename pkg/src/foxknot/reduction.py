"""Palette reduction for 17-colored diagrams.

Any nontrivially 17-colored diagram can be transformed, by Reidemeister
moves that keep the coloring valid, into an equivalent diagram whose
coloring uses only the six colors {0, 2, 3, 4, 8, 12}.  The scheduled
colors (16, 15, 9, 10, 6, 7, 5, 1, 11, 14, 13) are eliminated one at a
time; each elimination is realized by a bounded deterministic local
search over the primitive moves, and every step asserts that no
previously eliminated color reappears.

The module also exposes the closed-form color bookkeeping behind the
schedule: the new colors created when a `c`-colored strand is pushed off
a neighbor (`case2_colors`, `case3_*_colors`), the neighbor values that
must be avoided so no eliminated color is recreated (`exclusions_for_a`,
`exclusions_for_b`, `alt_exclusion_pairs`), and the residual special-case
tables those exclusions generate (`special_case_tables`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .coloring import (
    FoxColoring,
    count_colorings,
    semiarc_colors,
    validate_coloring,
)
from .diagram import Diagram
from .moves import (
    Move,
    MoveError,
    MoveTrace,
    NotApplicableError,
    apply_move,
    apply_sequence,
    enumerate_moves,
)

P = 17
SCHEDULE: tuple[int, ...] = (16, 15, 9, 10, 6, 7, 5, 1, 11, 14, 13)
TARGET: frozenset[int] = frozenset({0, 2, 3, 4, 8, 12})

DEFAULT_DEPTH_CAP = 8
DEFAULT_NODE_CAP = 50_000
DEFAULT_MOVE_CAP = 10_000


class ReductionError(RuntimeError):
    """Raised when an elimination step cannot be completed within budget."""

    def __init__(self, message: str, occurrence: "Occurrence | None" = None,
                 stats: dict | None = None):
        super().__init__(message)
        self.occurrence = occurrence
        self.stats = stats or {}


# -- derived-color formulas (all mod 17) ------------------------------------


def _m(x: int) -> int:
    return x % P


def case2_colors(a: int, c: int) -> tuple[int, int]:
    """New colors created when a c-colored over-arc is pushed off an
    a-colored neighbor: (2a - c, 3a - 2c)."""
    if _m(a) == _m(c):
        raise ValueError("neighbor color equals the eliminated color")
    return _m(2 * a - c), _m(3 * a - 2 * c)


def case3_equal_colors(a: int, c: int) -> tuple[int, int]:
    """New colors for a c-colored under-arc with equal flanking colors a:
    (3a - 2c, 4a - 3c)."""
    if _m(a) == _m(c):
        raise ValueError("neighbor color equals the eliminated color")
    return _m(3 * a - 2 * c), _m(4 * a - 3 * c)


def case3_diff_colors(a: int, b: int, c: int) -> tuple[int, int]:
    """New colors for a c-colored under-arc with distinct flanking colors
    a and b: (2a - b, 2a - 2b + c)."""
    if _m(a) == _m(b):
        raise ValueError("flanking colors coincide")
    return _m(2 * a - b), _m(2 * a - 2 * b + c)


def case3_alt_colors(a: int, b: int, c: int) -> tuple[int, int]:
    """Mirror variant of `case3_diff_colors`, pushing off the other
    neighbor: (2b - a, 2b - 2a + c)."""
    if _m(a) == _m(b):
        raise ValueError("flanking colors coincide")
    return _m(2 * b - a), _m(2 * b - 2 * a + c)


def exclusions_for_a(c: int, forbidden) -> frozenset[int]:
    """Neighbor colors `a` for which the direct deformations would recreate
    c or an already-eliminated color."""
    out = {_m(c)}
    for f in forbidden:
        out.add(_m(9 * (c + f)))
        out.add(_m(6 * (f + 2 * c)))
        out.add(_m(13 * (f + 3 * c)))
    return frozenset(out)


def exclusions_for_b(a: int, c: int, forbidden) -> frozenset[int]:
    """Second-neighbor colors `b` excluded once `a` is fixed."""
    out = {_m(2 * a - c)}
    for f in forbidden:
        out.add(_m(2 * a - f))
        out.add(_m(a + 9 * c - 9 * f))
    return frozenset(out)


def alt_exclusion_pairs(c: int, forbidden) -> frozenset[tuple[int, int]]:
    """(a, b) pairs for which even the mirror deformation recreates a
    forbidden color, parameterized over the eliminated prefix."""
    out: set[tuple[int, int]] = set()
    fs = sorted(set(forbidden))
    for ck in fs:
        out.add((_m(6 * ck + 12 * c), _m(12 * ck + 6 * c)))
        out.add((_m(6 * c + 12 * ck), _m(12 * c + 6 * ck)))
        out.add((_m(10 * ck + 8 * c), _m(2 * ck - c)))
        out.add((_m(2 * ck - c), _m(10 * ck + 8 * c)))
        for cl in fs:
            if cl == ck:
                continue
            out.add((_m(6 * cl + 12 * ck), _m(12 * cl + 6 * ck)))
            out.add((_m(cl + ck - c), _m(cl + 9 * ck + 8 * c)))
            out.add((_m(9 * cl + ck + 8 * c), _m(cl + ck - c)))
    return frozenset(out)


# -- special-case tables ------------------------------------------------------


def _legal(x: int, c: int, forbidden) -> bool:
    return x != c and x not in forbidden


def _single_a_ok(a: int, c: int, forbidden) -> bool:
    """Would pushing off an a-colored neighbor keep all colors legal?

    The flanking crossing {2a-c | a | c} must itself carry legal colors;
    a must be a legal color of the ambient diagram.
    """
    return (_legal(a, c, forbidden)
            and _legal(_m(2 * a - c), c, forbidden))


def _pair_ok(a: int, b: int, c: int, forbidden) -> bool:
    """Is (a, b) a realizable flanking pair that still needs a bespoke
    deformation?  Both flanking crossings carry legal colors, and the
    direct two-color formulas fail for every admissible orientation."""
    if a == b or not _legal(a, c, forbidden) or not _legal(b, c, forbidden):
        return False
    if not _legal(_m(2 * a - c), c, forbidden):
        return False
    if not _legal(_m(2 * b - c), c, forbidden):
        return False
    # the direct deformation succeeds unless b collides with an exclusion
    if b == _m(2 * a - c):
        return True
    for ck in forbidden:
        if b == _m(2 * a - ck) or b == _m(a + 9 * c - 9 * ck):
            return True
    return False


def special_case_tables() -> dict[str, dict]:
    """Regenerate the residual special cases of the elimination schedule.

    Returns one table per derived-value family:

    - ``"single_a_6"``:  {(step, c, ck): a} with a = 6(ck + 2c)
    - ``"single_a_13"``: {(step, c, ck): a} with a = 13(ck + 3c)
    - ``"pair_6_12"``:   {(step, c, ck): (a, b)} with (6ck + 12c, 12ck + 6c)
    - ``"pair_10_2"``:   {(step, c, ck): (a, b)} with (10ck + 8c, 2ck - c)
    - ``"triple_9_1_8"``: {(step, c, ck, cl): (a, b)} with
      (9cl + ck + 8c, cl + ck - c)
    - ``"triple_6_12"``: {(step, c, ck, cl): (a, b)} with
      (6cl + 12ck, 12cl + 6ck); both orderings of (ck, cl) are listed

    Pair/triple families share a per-step duplicate filter: an unordered
    value pair already produced by an earlier family (or earlier row of
    the same family, for the first three) is not listed again.
    """
    single_a6: dict[tuple[int, int, int], int] = {}
    single_a13: dict[tuple[int, int, int], int] = {}
    pair_6_12: dict[tuple[int, int, int], tuple[int, int]] = {}
    pair_10_2: dict[tuple[int, int, int], tuple[int, int]] = {}
    triple_9_1_8: dict[tuple[int, int, int, int], tuple[int, int]] = {}
    triple_6_12: dict[tuple[int, int, int, int], tuple[int, int]] = {}

    for i in range(2, len(SCHEDULE) + 1):
        c = SCHEDULE[i - 1]
        prefix = SCHEDULE[: i - 1]
        forbidden = set(prefix)

        for ck in prefix:
            a = _m(6 * (ck + 2 * c))
            if _single_a_ok(a, c, forbidden):
                single_a6[(i, c, ck)] = a
            a = _m(13 * (ck + 3 * c))
            if _single_a_ok(a, c, forbidden):
                single_a13[(i, c, ck)] = a

        seen: set[frozenset[int]] = set()

        def emit(table, key, a, b, dedupe=True):
            if not _pair_ok(a, b, c, forbidden):
                return
            if frozenset((a, b)) in seen:
                return
            table[key] = (a, b)
            if dedupe:
                seen.add(frozenset((a, b)))

        for ck in sorted(prefix):
            emit(pair_6_12, (i, c, ck), _m(6 * ck + 12 * c), _m(12 * ck + 6 * c))
        for ck in sorted(prefix):
            emit(pair_10_2, (i, c, ck), _m(10 * ck + 8 * c), _m(2 * ck - c))
        for ck in sorted(prefix):
            for cl in sorted(prefix):
                if cl != ck:
                    emit(triple_9_1_8, (i, c, ck, cl),
                         _m(9 * cl + ck + 8 * c), _m(cl + ck - c))
        for ck in sorted(prefix):
            for cl in sorted(prefix):
                if cl != ck:
                    emit(triple_6_12, (i, c, ck, cl),
                         _m(6 * cl + 12 * ck), _m(12 * cl + 6 * ck),
                         dedupe=False)

    return {
        "single_a_6": single_a6,
        "single_a_13": single_a13,
        "pair_6_12": pair_6_12,
        "pair_10_2": pair_10_2,
        "triple_9_1_8": triple_9_1_8,
        "triple_6_12": triple_6_12,
    }


# -- occurrence classification ------------------------------------------------


@dataclass(frozen=True)
class Occurrence:
    """One appearance of the scheduled color c in a colored diagram.

    kind is one of:
      - "monochrome_crossing": a crossing {c|c|c}
      - "over_arc": a crossing whose over strand is colored c
      - "under_arc": a semiarc colored c passing under both its endpoint
        crossings, flanked by over colors (a, b)
    """

    kind: str
    site: int                    # crossing id or semiarc id
    neighbors: tuple[int, ...]   # adjacent over colors, c excluded


def classify_occurrences(d: Diagram, col: FoxColoring, c: int) -> list[Occurrence]:
    """Every appearance of color c, classified, in ascending site order."""
    sc = semiarc_colors(d, col)
    out: list[Occurrence] = []
    for cid in sorted(d.crossings):
        u0, over, u1, over2 = (sc[s] for s in d.crossings[cid])
        if u0 == over == u1 == c:
            out.append(Occurrence("monochrome_crossing", cid, ()))
        elif over == c:
            ns = tuple(sorted({x for x in (u0, u1) if x != c}))
            out.append(Occurrence("over_arc", cid, ns))
    for s in sorted(d.semiarc_ids):
        if sc[s] != c:
            continue
        ends = d.endpoint_slots[s]
        if any(p % 2 == 1 for _, p in ends):
            continue  # part of an over strand; reported at its crossing
        flank = tuple(sorted({sc[d.port(cid, (p + 1) % 4)]
                              for cid, p in ends} - {c}))
        if any(sc[d.crossings[cid][1]] == c for cid, _ in ends):
            continue  # already covered by an over_arc occurrence
        out.append(Occurrence("under_arc", s, flank))
    return out


# -- bounded local search -----------------------------------------------------


@lru_cache(maxsize=None)
def _flanks_admissible(a: int, b: int, c: int, bad: frozenset[int]) -> bool:
    """True when some direct recoloring of a c-arc flanked by over
    colors a, b avoids every color in ``bad``."""
    try:
        if a == b:
            return not set(case2_colors(a, c)) & bad
        return (not set(case3_diff_colors(a, b, c)) & bad
                or not set(case3_diff_colors(b, a, c)) & bad)
    except ValueError:
        return False


def _badness(d: Diagram, col: FoxColoring, c: int,
             forbidden: frozenset[int] = frozenset()):
    """(crossings whose over strand is colored c, under-arcs colored c
    with no directly admissible recoloring, semiarcs colored c,
    under-arcs colored with a later schedule color that will have no
    directly admissible recoloring at its own step) — lexicographically
    driven toward zero.  Ranking inadmissible arcs above the raw
    semiarc count makes flank-preparation moves — which may temporarily
    split a c-arc in two — visible progress; the trailing component
    steers ties away from states that poison later schedule steps."""
    sc = semiarc_colors(d, col)
    over = sum(1 for ports in d.crossings.values() if sc[ports[1]] == c)
    arcs = sum(1 for v in sc.values() if v == c)
    inad = 0
    future = 0
    checks: dict[int, frozenset[int]] = {}
    if forbidden:
        checks[c] = forbidden | {c}
    if c in SCHEDULE:
        i = SCHEDULE.index(c)
        for j in range(i + 1, len(SCHEDULE)):
            checks[SCHEDULE[j]] = frozenset(SCHEDULE[:j]) | {SCHEDULE[j]}
    if checks:
        for s, v in sc.items():
            if v not in checks:
                continue
            ends = d.endpoint_slots[s]
            if any(p % 2 == 1 for _, p in ends) or len(ends) != 2:
                continue
            (c0, p0), (c1, p1) = ends
            a = sc[d.port(c0, (p0 + 1) % 4)]
            b = sc[d.port(c1, (p1 + 1) % 4)]
            if not _flanks_admissible(a, b, v, checks[v]):
                if v == c:
                    inad += 1
                else:
                    future += 1
    return over, inad, arcs, future


def _state_key(d: Diagram, col: FoxColoring):
    sc = semiarc_colors(d, col)
    return (tuple(sorted(d.crossings.items())), tuple(sorted(sc.items())))


def _candidate_moves(d: Diagram, col: FoxColoring, c: int, id0: int,
                     narrow: bool) -> list[Move]:
    """Moves anchored at the color being eliminated.

    With ``narrow`` pushes and triangle slides are restricted to faces
    that contain a semiarc colored c or one created during the current
    elimination episode (ids >= id0); otherwise any face touching a
    crossing incident to such a semiarc qualifies.  Removals are cheap
    and enumerated globally in both modes.
    """
    sc = semiarc_colors(d, col)
    hot = {cid for cid, ports in d.crossings.items()
           if any(sc[s] == c or s >= id0 for s in ports)}
    active = {s for cid in hot for s in d.crossings[cid]}

    def face_ok(edges) -> bool:
        if narrow:
            return any(sc[s] == c or s >= id0 for s in edges)
        return any(s in active for s in edges)

    cands: list[Move] = []
    for mv in enumerate_moves(d, col, include_adds=False):
        if mv.kind in ("r1_remove", "r2_remove"):
            cands.append(mv)
        elif mv.kind == "r3":
            face = d.face_of(mv.params[0])
            if face_ok([d.port(cid, p) for cid, p in face]):
                cands.append(mv)
    for face in d.face_orbits:
        n = len(face)
        if n < 2:
            continue
        edges = [d.port(cid, p) for cid, p in face]
        if not face_ok(edges):
            continue
        for i in range(n):
            if not narrow and edges[i] not in active:
                continue
            offsets = range(1 - n, n) if sc[edges[i]] == c else (-2, -1, 1, 2)
            for off in offsets:
                j = (i + off) % n
                if i == j or edges[i] == edges[j]:
                    continue
                if not narrow and edges[j] not in active:
                    continue
                for over in (1, 0):
                    cands.append(Move("r2_push", (face[i], face[j], over)))
                # a c-colored edge may also need a remote strand pushed
                # across it, not only its near neighbors across itself
                if sc[edges[i]] == c and abs(off) > 2:
                    for over in (1, 0):
                        cands.append(Move("r2_push", (face[j], face[i], over)))
    return cands


_KIND_BUDGETS = {"r2_push": 3, "r3": 2, "r1_remove": 3, "r2_remove": 3}
_KIND_ORDER = {"r2_remove": 0, "r1_remove": 1, "r3": 2, "r2_push": 3}


def _single_step(dd, cc, c, id0, target, forbidden, nodes):
    """First single slide or removal strictly below ``target`` badness."""
    for mv in _candidate_moves(dd, cc, c, id0, True):
        if mv.kind == "r2_push":
            continue
        try:
            dk, ck = apply_move(dd, cc, mv)
        except (NotApplicableError, MoveError):
            continue
        if set(ck.colors) & forbidden:
            continue
        nodes[0] += 1
        if _badness(dk, ck, c, forbidden) < target:
            return dk, ck, [mv]
    return None


def local_search(d: Diagram, col: FoxColoring, c: int,
                 forbidden: frozenset[int] = frozenset(),
                 depth_cap: int = DEFAULT_DEPTH_CAP,
                 node_cap: int = DEFAULT_NODE_CAP):
    """Find a deterministic move sequence that strictly reduces the
    footprint of color c without introducing any forbidden color.

    Two deterministic phases share the node budget.  Phase 1 is an
    iterative-deepening search (depth 1, 2, 3) over a narrow candidate
    set anchored directly at c-colored semiarcs; it finds the short
    push-then-slide deformations that realize the closed-form recoloring
    cases.  Phase 2 is a depth-first dive up to ``depth_cap`` over the
    broader neighborhood, which reconstructs the longer composite
    deformations.  ``node_cap`` is a per-occurrence allowance: the total
    budget scales with the number of appearances of c still present.
    Returns (diagram, coloring, moves) or raises ReductionError with
    frontier statistics.
    """
    start = _badness(d, col, c, forbidden)
    id0 = max(d.semiarc_ids) + 1
    node_cap = node_cap * max(1, len(classify_occurrences(d, col, c)))
    nodes = [0]

    def push_rank(sc, dd, mv):
        (_, _), (cb, pb), over = mv.params
        return (0 if sc[dd.port(cb, pb)] == c else 1, 1 - over)

    # Phase 0: the recoloring cases are realized by one stereotyped
    # two-move deformation — push a strand across its neighbor, then
    # slide the resulting triangle through the crossing the push made.
    # Enumerating that pair directly (optionally after one narrow
    # setup move) is far cheaper than rediscovering it in full search.
    def macro_step(dd, cc, target, seen=None, budget=None):
        """One push followed by up to two triangle slides through the
        crossings the push created, beating ``target`` badness.  With a
        ``seen`` set, sequences that merely match the target are also
        accepted provided they land on an unvisited state: those plateau
        steps relocate an occurrence whose direct variants are blocked.
        """
        sc = semiarc_colors(dd, cc)
        base = set(dd.crossings)
        limit = nodes[0] + (budget if budget is not None else node_cap // 4)

        best = [None]  # (badness, diagram, coloring, moves)

        def accept(dk, ck, tail):
            """Record strict improvements, keeping the best; plateau
            states are accepted immediately when ``seen`` allows them."""
            b = _badness(dk, ck, c, forbidden)
            if b < target:
                if best[0] is None or b < best[0][0]:
                    best[0] = (b, dk, ck, tail)
                return False
            if seen is None or b > target or best[0] is not None:
                return False
            k = _state_key(dk, ck)
            if k in seen:
                return False
            seen.add(k)
            return True

        pushes = [m for m in _candidate_moves(dd, cc, c, id0, True)
                  if m.kind == "r2_push"]
        pushes.sort(key=lambda mv: push_rank(sc, dd, mv))
        for mv1 in pushes:
            try:
                d1, c1 = apply_move(dd, cc, mv1)
            except (NotApplicableError, MoveError):
                continue
            if set(c1.colors) & forbidden:
                continue
            nodes[0] += 1
            if accept(d1, c1, [mv1]):
                return d1, c1, [mv1]
            fresh = set(d1.crossings) - base

            def slide(dj, cj, tail, depth):
                for face in dj.faces():
                    if len(face) != 3 or not any(x in fresh for x, _ in face):
                        continue
                    mvk = Move("r3", (min(face),))
                    try:
                        dk, ck = apply_move(dj, cj, mvk)
                    except (NotApplicableError, MoveError):
                        continue
                    if set(ck.colors) & forbidden:
                        continue
                    nodes[0] += 1
                    if accept(dk, ck, tail + [mvk]):
                        return dk, ck, tail + [mvk]
                    if depth > 1:
                        r = slide(dk, ck, tail + [mvk], depth - 1)
                        if r is not None:
                            return r
                return None

            r = slide(d1, c1, [mv1], 2)
            if r is not None:
                return r
            if nodes[0] > limit:
                break
        if best[0] is not None:
            _, dk, ck, tail = best[0]
            return dk, ck, tail
        return None

    # Cheapest first: the best single removal or slide that improves.
    best_single = None
    for mv in _candidate_moves(d, col, c, id0, True):
        if mv.kind == "r2_push":
            continue
        try:
            d1, c1 = apply_move(d, col, mv)
        except (NotApplicableError, MoveError):
            continue
        if set(c1.colors) & forbidden:
            continue
        nodes[0] += 1
        b1 = _badness(d1, c1, c, forbidden)
        if b1 < start and (best_single is None or b1 < best_single[0]):
            best_single = (b1, d1, c1, mv)
    if best_single is not None:
        _, d1, c1, mv = best_single
        return d1, c1, [mv]

    result = macro_step(d, col, start)
    if result is not None:
        return result

    # Phase 0c: when neither flank of a c-colored occurrence is
    # admissible, no prefix of the working deformation beats the
    # starting badness — a strand of a third color is pushed across the
    # whole arc, or the occurrence is relocated onto another strand,
    # before the closing macro lands.  Chain macro steps greedily from
    # each opening push, tolerating badness plateaus on unvisited
    # states.
    sc0 = semiarc_colors(d, col)
    openers = [m for m in _candidate_moves(d, col, c, id0, True)
               if m.kind == "r2_push"]
    openers.sort(key=lambda mv: push_rank(sc0, d, mv))
    for mv0 in openers:
        if nodes[0] > node_cap * 3 // 4:
            break
        try:
            d0, c0 = apply_move(d, col, mv0)
        except (NotApplicableError, MoveError):
            continue
        if set(c0.colors) & forbidden:
            continue
        nodes[0] += 1
        cur = _badness(d0, c0, c, forbidden)
        if cur < start:
            return d0, c0, [mv0]
        if cur[0] > start[0] + 1 or cur[1] > start[1] + 2:
            continue
        path = [mv0]
        visited = {_state_key(d0, c0)}
        for _ in range(6):
            result = _single_step(d0, c0, c, id0, cur, forbidden, nodes)
            if result is None:
                result = macro_step(d0, c0, cur, seen=visited,
                                    budget=node_cap // 16)
            else:
                visited.add(_state_key(result[0], result[1]))
            if result is None:
                break
            d0, c0, tail = result
            path.extend(tail)
            cur = _badness(d0, c0, c, forbidden)
            if cur < start:
                return d0, c0, path

    # Phase 0b: one narrow setup move before the two-move deformation.
    setups = [m for m in _candidate_moves(d, col, c, id0, True)
              if m.kind in ("r3", "r2_push")]
    for mv0 in setups:
        if nodes[0] > node_cap // 2:
            break
        try:
            d0, c0 = apply_move(d, col, mv0)
        except (NotApplicableError, MoveError):
            continue
        if set(c0.colors) & forbidden:
            continue
        nodes[0] += 1
        b0 = _badness(d0, c0, c, forbidden)
        if b0 < start:
            return d0, c0, [mv0]
        if b0[0] > start[0] + 1 or b0[1] > start[1] + 2:
            continue
        result = macro_step(d0, c0, start)
        if result is not None:
            d0, c0, tail = result
            return d0, c0, [mv0] + tail

    def dfs(dd, cc, path, budgets, remaining, seen, narrow):
        if nodes[0] > node_cap:
            return None
        sc = semiarc_colors(dd, cc)
        cands = _candidate_moves(dd, cc, c, id0, narrow)
        cands.sort(key=lambda mv: (
            _KIND_ORDER[mv.kind],
            push_rank(sc, dd, mv) if mv.kind == "r2_push" else (0, 0)))
        for mv in cands:
            if budgets[mv.kind] <= 0:
                continue
            try:
                d2, c2 = apply_move(dd, cc, mv)
            except (NotApplicableError, MoveError):
                continue
            if set(c2.colors) & forbidden:
                continue
            nodes[0] += 1
            b2 = _badness(d2, c2, c, forbidden)
            if b2 < start:
                return d2, c2, path + [mv]
            if remaining <= 1:
                continue
            if b2[0] > start[0] + 1 or b2[1] > start[1] + 2:
                continue
            k = _state_key(d2, c2)
            if seen.get(k, -1) >= remaining - 1:
                continue
            seen[k] = remaining - 1
            nxt = dict(budgets)
            nxt[mv.kind] -= 1
            r = dfs(d2, c2, path + [mv], nxt, remaining - 1, seen, narrow)
            if r is not None:
                return r
        return None

    for limit in range(1, min(3, depth_cap) + 1):
        if nodes[0] > node_cap // 2:
            break
        result = dfs(d, col, [], dict(_KIND_BUDGETS), limit, {}, True)
        if result is not None:
            return result
    if nodes[0] <= node_cap:
        result = dfs(d, col, [], dict(_KIND_BUDGETS), depth_cap, {}, False)
        if result is not None:
            return result
    occs = classify_occurrences(d, col, c)
    raise ReductionError(
        f"search exhausted eliminating color {c}",
        occurrence=occs[0] if occs else None,
        stats={"nodes": nodes[0], "depth_cap": depth_cap,
               "node_cap": node_cap, "badness": start})


# -- schedule execution -------------------------------------------------------


@dataclass
class ReductionState:
    """Mutable cursor over the elimination schedule."""

    diagram: Diagram
    coloring: FoxColoring
    step: int = 0                       # number of completed schedule steps
    moves: list[Move] = field(default_factory=list)
    move_counts: list[int] = field(default_factory=list)
    palettes: list[frozenset[int]] = field(default_factory=list)

    @property
    def forbidden(self) -> frozenset[int]:
        return frozenset(SCHEDULE[: self.step])


def _simplify(d: Diagram, col: FoxColoring, banned: frozenset[int]):
    """Greedily apply removal moves that keep the palette clear of banned
    colors.  Removals never create colors, so this only shrinks the
    diagram; keeping it small between schedule steps keeps the later
    searches tractable."""
    out: list[Move] = []
    changed = True
    while changed:
        changed = False
        for mv in enumerate_moves(d, col):
            if mv.kind not in ("r1_remove", "r2_remove"):
                continue
            try:
                d2, c2 = apply_move(d, col, mv)
            except (NotApplicableError, MoveError):
                continue
            if set(c2.colors) & banned:
                continue
            d, col = d2, c2
            out.append(mv)
            changed = True
            break
    return d, col, out


def eliminate_color(state: ReductionState,
                    depth_cap: int = DEFAULT_DEPTH_CAP,
                    node_cap: int = DEFAULT_NODE_CAP,
                    move_cap: int = DEFAULT_MOVE_CAP) -> ReductionState:
    """Run one schedule step: remove every occurrence of the next color."""
    if state.step >= len(SCHEDULE):
        raise ReductionError("schedule already exhausted")
    if state.coloring.is_trivial():
        raise ReductionError("trivial coloring")
    c = SCHEDULE[state.step]
    forbidden = state.forbidden
    if set(state.coloring.colors) & forbidden:
        raise ReductionError(f"forbidden colors present before step {state.step + 1}")
    d, col = state.diagram, state.coloring
    step_moves: list[Move] = []
    while _badness(d, col, c, forbidden)[:3] != (0, 0, 0):
        d, col, path = local_search(d, col, c, forbidden,
                                    depth_cap, node_cap)
        step_moves.extend(path)
        d, col, trimmed = _simplify(d, col, forbidden)
        step_moves.extend(trimmed)
        if len(step_moves) > move_cap:
            raise ReductionError(
                f"move budget exceeded eliminating color {c}",
                stats={"moves": len(step_moves), "move_cap": move_cap})
    d, col, cleanup = _simplify(d, col, forbidden | {c})
    step_moves.extend(cleanup)
    assert c not in set(col.colors)
    assert not set(col.colors) & forbidden
    state.diagram, state.coloring = d, col
    state.moves.extend(step_moves)
    state.move_counts.append(len(step_moves))
    state.palettes.append(frozenset(col.colors))
    state.step += 1
    return state


def reduce_to_six(d: Diagram, col: FoxColoring,
                  depth_cap: int = DEFAULT_DEPTH_CAP,
                  node_cap: int = DEFAULT_NODE_CAP,
                  move_cap: int = DEFAULT_MOVE_CAP):
    """Transform (d, col) into an equivalent diagram colored within
    {0, 2, 3, 4, 8, 12}.

    Returns (diagram, coloring, trace, report).  The trace replays from
    the input; the report is a JSON-compatible summary of the run.
    """
    if col.p != P:
        raise ReductionError(f"modulus must be {P}, got {col.p}")
    if col.is_trivial():
        raise ReductionError("trivial coloring")
    if not validate_coloring(d, col):
        raise ReductionError("invalid coloring")
    counts_before = {q: count_colorings(d, q) for q in (3, 17)}

    state = ReductionState(d, col)
    while state.step < len(SCHEDULE):
        c = SCHEDULE[state.step]
        if c not in set(state.coloring.colors):
            state.step += 1
            state.move_counts.append(0)
            state.palettes.append(frozenset(state.coloring.colors))
            continue
        eliminate_color(state, depth_cap, node_cap, move_cap)

    final_d, final_col, trace = apply_sequence(d, col, state.moves)
    assert frozenset(final_col.colors) <= TARGET
    assert validate_coloring(final_d, final_col)
    assert final_d.euler_characteristic() == 2
    for q, n in counts_before.items():
        if count_colorings(final_d, q) != n:
            raise ReductionError(f"coloring count changed at p={q}")

    report = {
        "schedule": list(SCHEDULE),
        "move_counts": state.move_counts,
        "palette_after_step": [sorted(p) for p in state.palettes],
        "final_palette": sorted(set(final_col.colors)),
        "total_moves": len(state.moves),
        "initial_checksum": trace.initial_checksum,
        "final_checksum": trace.final_checksum,
    }
    return final_d, final_col, trace, report
