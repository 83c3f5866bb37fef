"""Colored Reidemeister rewrites with exact color transport.

Every move takes (diagram, coloring) to (diagram, coloring), re-validates the
result, and recomputes arc colors from first principles: after the surgery
each semiarc gets a color derived from the crossing relations, the semiarcs
are regrouped into arcs, and every arc must come out monochromatic.  A move
that cannot be applied raises NotApplicableError; a move that would produce
an invalid diagram or coloring raises MoveError (which indicates a bug, not
a bad input).
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import Diagram, OVER_PORTS, unknot
from .coloring import FoxColoring, validate_coloring

Dart = tuple[int, int]


class NotApplicableError(ValueError):
    """The move's preconditions do not hold at the given site."""


class MoveError(RuntimeError):
    """A move produced an invalid diagram or coloring (internal error)."""


@dataclass(frozen=True)
class Move:
    """A single rewrite: kind plus site parameters.

    kinds and params:
      r1_add     (semiarc, variant in 0..3)
      r1_remove  (crossing,)
      r2_push    ((cA, pA), (cB, pB), over) -- push the semiarc at the first
                 dart across the semiarc at the second; both darts must lie
                 on a common face; over=1 sends the pushed strand on top
      r2_remove  ((c, p),) -- a dart on the bigon face to delete
      r3         ((c, p),) -- a dart on the triangle face to flip
    """

    kind: str
    params: tuple

    @staticmethod
    def from_obj(obj) -> "Move":
        def tup(x):
            return tuple(tup(y) for y in x) if isinstance(x, (list, tuple)) else x
        return Move(obj["kind"], tup(obj["params"]))

    def to_obj(self) -> dict:
        return {"kind": self.kind, "params": list(
            list(p) if isinstance(p, tuple) else p for p in self.params)}


def _rebuild_coloring(d: Diagram, semi_colors: dict[int, int], p: int) -> FoxColoring:
    """Group per-semiarc colors into an arc coloring; arcs must be constant."""
    colors = []
    for arc in d.arcs():
        vals = {semi_colors[s] % p for s in arc.semiarcs}
        if len(vals) != 1:
            raise MoveError(f"arc {arc.id} not monochromatic after move: {vals}")
        colors.append(vals.pop())
    col = FoxColoring(p, tuple(colors))
    if not validate_coloring(d, col):
        raise MoveError("coloring invalid after move")
    return col


def _finish(crossings, loops, semi_colors, p):
    d = Diagram(crossings, loops=frozenset(loops))
    problems = d.validate()
    if problems:
        raise MoveError("move produced invalid diagram: " + "; ".join(problems))
    return d, _rebuild_coloring(d, semi_colors, p)


def _semi_colors(d: Diagram, col: FoxColoring) -> dict[int, int]:
    return {s: col.colors[a] for s, a in d.arc_of_semiarc.items()}


# -- R1 --------------------------------------------------------------------


def _r1_add(d: Diagram, col: FoxColoring, s: int, variant: int):
    if variant not in (0, 1, 2, 3):
        raise NotApplicableError(f"r1_add variant {variant} out of range")
    if s not in d.arc_of_semiarc:
        raise NotApplicableError(f"no semiarc {s}")
    sc = _semi_colors(d, col)
    x = sc[s]
    if s in d.loops:
        # kink the bare circle: the strand id is reused for both stubs
        t = 0 if s != 0 else 1
        patterns = {0: (s, t, t, s), 1: (s, t, t, s),
                    2: (t, s, s, t), 3: (t, s, s, t)}
        return _finish({0: patterns[variant]}, set(), {s: x, t: x}, col.p)
    d0, d1 = d.endpoint_slots[s]
    sp, t = d.fresh_semiarc_ids(2)
    k, = d.fresh_crossing_ids(1)
    patterns = {0: (s, t, t, sp), 1: (sp, t, t, s),
                2: (t, s, sp, t), 3: (t, sp, s, t)}
    crossings = d.crossings
    c1, p1 = d1
    ports = list(crossings[c1])
    ports[p1] = sp
    crossings[c1] = tuple(ports)
    crossings[k] = patterns[variant]
    sc[sp] = x
    sc[t] = x
    return _finish(crossings, set(), sc, col.p)


def _r1_remove(d: Diagram, col: FoxColoring, c: int):
    if c not in d.crossings:
        raise NotApplicableError(f"no crossing {c}")
    ports = d.crossings[c]
    i = next((i for i in range(4) if ports[i] == ports[(i + 1) % 4]), None)
    if i is None:
        raise NotApplicableError(f"crossing {c} is not a kink")
    t = ports[i]
    u, v = ports[(i + 2) % 4], ports[(i + 3) % 4]
    sc = _semi_colors(d, col)
    if sc[u] != sc[v]:
        raise MoveError("kink stub colors disagree")
    crossings = d.crossings
    del crossings[c]
    sc.pop(t, None)
    if u == v:
        if crossings:
            raise NotApplicableError("kink stub is a closed loop amid crossings")
        return _finish({}, {u}, {u: sc[u]}, col.p)
    keep, drop = min(u, v), max(u, v)
    crossings = {cc: tuple(keep if s == drop else s for s in ps)
                 for cc, ps in crossings.items()}
    sc.pop(drop)
    if not crossings:
        return _finish({}, {keep}, {keep: sc[keep]}, col.p)
    return _finish(crossings, set(), sc, col.p)


# -- R2 --------------------------------------------------------------------


def _r2_push(d: Diagram, col: FoxColoring, dart_a: Dart, dart_b: Dart, over: int):
    if not d.crossings:
        raise NotApplicableError("cannot push on a bare circle")
    try:
        face = d.face_of(dart_a)
    except Exception as e:
        raise NotApplicableError(str(e))
    if dart_b not in face:
        raise NotApplicableError("darts do not share a face")
    a = d.port(*dart_a)
    b = d.port(*dart_b)
    if a == b:
        raise NotApplicableError("cannot push a semiarc across itself")
    end_a = d.alpha(dart_a)
    end_b = d.alpha(dart_b)
    m, a2, bm, bl = d.fresh_semiarc_ids(4)
    left, right = d.fresh_crossing_ids(2)
    crossings = d.crossings

    def set_slot(dart, value):
        c, p = dart
        ports = list(crossings[c])
        ports[p] = value
        crossings[c] = tuple(ports)

    set_slot(end_a, a2)
    set_slot(end_b, bl)
    if over:
        crossings[left] = (bm, a, bl, m)
        crossings[right] = (b, a2, bm, m)
    else:
        crossings[left] = (a, bl, m, bm)
        crossings[right] = (a2, bm, m, b)
    sc = _semi_colors(d, col)
    ca, cb = sc[a], sc[b]
    sc[a2] = ca
    sc[bl] = cb
    if over:
        sc[m] = ca
        sc[bm] = (2 * ca - cb) % col.p
    else:
        sc[m] = (2 * cb - ca) % col.p
        sc[bm] = cb
    return _finish(crossings, set(), sc, col.p)


def _bigon_status(d: Diagram, face):
    """(over_edge, under_edge, x, y) for a 2-dart face, else NotApplicable."""
    (x, px), (y, py) = face
    if x == y:
        raise NotApplicableError("degenerate bigon at a single crossing")
    e1, e2 = d.port(x, px), d.port(y, py)
    if e1 == e2:
        raise NotApplicableError("bigon face bounded by one semiarc")

    def parity(e):
        slots = d.endpoint_slots[e]
        ps = {p % 2 for _, p in slots}
        return ps.pop() if len(ps) == 1 else None

    p1, p2 = parity(e1), parity(e2)
    if {p1, p2} != {0, 1}:
        raise NotApplicableError("bigon strands alternate; not removable")
    over_e = e1 if p1 == 1 else e2
    under_e = e2 if p1 == 1 else e1
    return over_e, under_e, x, y


def _r2_remove(d: Diagram, col: FoxColoring, dart: Dart):
    try:
        face = d.face_of(dart)
    except Exception as e:
        raise NotApplicableError(str(e))
    if len(face) != 2:
        raise NotApplicableError("dart is not on a bigon face")
    over_e, under_e, x, y = _bigon_status(d, face)

    def outside(c, want_over, exclude):
        ports = d.crossings[c]
        cands = [ports[p] for p in range(4)
                 if (p % 2 == 1) == want_over and ports[p] != exclude]
        if len(cands) != 1:
            raise NotApplicableError("bigon strand loops back at a crossing")
        return cands[0]

    a_x, a_y = outside(x, True, over_e), outside(y, True, over_e)
    b_x, b_y = outside(x, False, under_e), outside(y, False, under_e)
    sc = _semi_colors(d, col)
    if sc[a_x] != sc[a_y] or sc[b_x] != sc[b_y]:
        raise MoveError("bigon outside colors disagree")
    crossings = d.crossings
    del crossings[x]
    del crossings[y]
    merged = {}

    def root(s):
        while s in merged:
            s = merged[s]
        return s

    for u, v in ((a_x, a_y), (b_x, b_y)):
        u, v = root(u), root(v)
        if u != v:
            merged[max(u, v)] = min(u, v)
    crossings = {c: tuple(root(s) for s in ps)
                 for c, ps in crossings.items()}
    for e in (over_e, under_e, *merged):
        sc.pop(e, None)
    if not crossings:
        keep = root(a_x)  # single remaining strand closes up
        return _finish({}, {keep}, {keep: sc[keep]}, col.p)
    return _finish(crossings, set(), sc, col.p)


# -- R3 --------------------------------------------------------------------


def _r3(d: Diagram, col: FoxColoring, dart: Dart):
    try:
        face = d.face_of(dart)
    except Exception as e:
        raise NotApplicableError(str(e))
    if len(face) != 3:
        raise NotApplicableError("dart is not on a triangle face")
    cs = [c for c, _ in face]
    qs = [q for _, q in face]
    if len(set(cs)) != 3:
        raise NotApplicableError("triangle revisits a crossing")
    e = [d.port(cs[i], qs[i]) for i in range(3)]
    if len(set(e)) != 3:
        raise NotApplicableError("triangle sides are not distinct semiarcs")
    u = [d.port(cs[i], (qs[i] + 2) % 4) for i in range(3)]
    w = [d.port(cs[i], (qs[i] + 1) % 4) for i in range(3)]
    if set(e) & (set(u) | set(w)):
        raise NotApplicableError("triangle side doubles as an outside tail")
    parities = [q % 2 for q in qs]
    if len(set(parities)) == 1:
        raise NotApplicableError("cyclic over/under pattern; triangle is rigid")
    # Strand i runs along side e[i] between cs[i] and cs[i+1]; its outside
    # tails are u[i] (at cs[i]) and w[i+1] (at cs[i+1]).  The slide moves each
    # strand across the opposite crossing, which swaps the two crossings'
    # positions along every strand: each side edge keeps joining its pair of
    # crossings while the two tails of each strand trade endpoints.  The
    # triangular face re-forms on the opposite corner of every crossing.
    over_count = [(qs[i] % 2) + (1 - qs[(i + 1) % 3] % 2) for i in range(3)]
    if sorted(over_count) != [0, 1, 2]:
        raise NotApplicableError("cyclic over/under pattern; triangle is rigid")
    crossings = d.crossings
    for i in range(3):
        ports = list(crossings[cs[i]])
        ports[(qs[i] - 1) % 4] = u[(i - 1) % 3]
        ports[qs[i] % 4] = w[(i + 1) % 3]
        ports[(qs[i] + 1) % 4] = e[(i - 1) % 3]
        ports[(qs[i] + 2) % 4] = e[i]
        crossings[cs[i]] = tuple(ports)
    sc = _semi_colors(d, col)
    p = col.p
    top = over_count.index(2)
    mid = over_count.index(1)
    bot = over_count.index(0)
    t_color = sc[e[top]]
    # The middle strand's side now lies on the far side of its one
    # under-crossing; the bottom side is now first covered by the top strand,
    # so its color continues from the bottom tail that used to sit at the
    # bottom-middle crossing.
    shared = ({cs[bot], cs[(bot + 1) % 3]} & {cs[mid], cs[(mid + 1) % 3]}).pop()
    t_a = sc[u[bot]] if shared == cs[bot] else sc[w[(bot + 1) % 3]]
    sc[e[mid]] = (2 * t_color - sc[e[mid]]) % p
    sc[e[bot]] = (2 * t_color - t_a) % p
    return _finish(crossings, set(), sc, p)


# -- dispatch and enumeration -------------------------------------------------


def apply_move(d: Diagram, col: FoxColoring, move: Move):
    """Apply one move; returns (diagram, coloring)."""
    if move.kind == "r1_add":
        return _r1_add(d, col, *move.params)
    if move.kind == "r1_remove":
        return _r1_remove(d, col, *move.params)
    if move.kind == "r2_push":
        return _r2_push(d, col, *move.params)
    if move.kind == "r2_remove":
        return _r2_remove(d, col, *move.params)
    if move.kind == "r3":
        return _r3(d, col, *move.params)
    raise NotApplicableError(f"unknown move kind {move.kind!r}")


def enumerate_moves(d: Diagram, col: FoxColoring,
                    include_adds: bool = True) -> list[Move]:
    """All applicable moves at the current state, in a deterministic order."""
    out: list[Move] = []
    for c in sorted(d.crossings):
        ports = d.crossings[c]
        if any(ports[i] == ports[(i + 1) % 4] for i in range(4)):
            u, v = None, None
            i = next(i for i in range(4) if ports[i] == ports[(i + 1) % 4])
            u, v = ports[(i + 2) % 4], ports[(i + 3) % 4]
            if u != v or len(d.crossings) == 1:
                out.append(Move("r1_remove", (c,)))
    for face in d.faces():
        if len(face) == 2:
            try:
                _bigon_status(d, face)
            except NotApplicableError:
                continue
            out.append(Move("r2_remove", (min(face),)))
    for face in d.faces():
        if len(face) == 3:
            cs = [c for c, _ in face]
            qs = [q for _, q in face]
            if len(set(cs)) != 3 or len({q % 2 for q in qs}) == 1:
                continue
            e = [d.port(cs[i], qs[i]) for i in range(3)]
            u = [d.port(cs[i], (qs[i] + 2) % 4) for i in range(3)]
            w = [d.port(cs[i], (qs[i] + 1) % 4) for i in range(3)]
            if len(set(e)) != 3 or set(e) & (set(u) | set(w)):
                continue
            out.append(Move("r3", (min(face),)))
    for face in d.faces():
        for da in face:
            for db in face:
                if da == db or d.port(*da) == d.port(*db):
                    continue
                for over in (1, 0):
                    out.append(Move("r2_push", (da, db, over)))
    if include_adds:
        for s in d.semiarc_ids:
            for variant in range(4):
                out.append(Move("r1_add", (s, variant)))
    return out


# -- traces ---------------------------------------------------------------


@dataclass(frozen=True)
class TraceStep:
    move: Move
    checksum: str


@dataclass(frozen=True)
class MoveTrace:
    initial_checksum: str
    p: int
    steps: tuple[TraceStep, ...]

    @property
    def final_checksum(self) -> str:
        return self.steps[-1].checksum if self.steps else self.initial_checksum

    def to_obj(self) -> dict:
        return {
            "initial_checksum": self.initial_checksum,
            "p": self.p,
            "moves": [{**s.move.to_obj(), "checksum": s.checksum}
                      for s in self.steps],
        }

    @staticmethod
    def from_obj(obj) -> "MoveTrace":
        steps = tuple(TraceStep(Move.from_obj(m), m["checksum"])
                      for m in obj["moves"])
        return MoveTrace(obj["initial_checksum"], obj["p"], steps)


def apply_sequence(d: Diagram, col: FoxColoring, moves) -> tuple[Diagram, FoxColoring, MoveTrace]:
    """Fold moves over (d, col), recording a checksum after each step."""
    from .codec import canonical_checksum

    steps = []
    cur_d, cur_col = d, col
    for mv in moves:
        cur_d, cur_col = apply_move(cur_d, cur_col, mv)
        steps.append(TraceStep(mv, canonical_checksum(cur_d, cur_col)))
    return cur_d, cur_col, MoveTrace(canonical_checksum(d, col), col.p, tuple(steps))


def replay(d: Diagram, col: FoxColoring, trace: MoveTrace):
    """Re-apply a trace, verifying every checksum; returns final state."""
    from .codec import canonical_checksum

    if canonical_checksum(d, col) != trace.initial_checksum:
        raise MoveError("initial checksum mismatch")
    cur_d, cur_col = d, col
    for i, step in enumerate(trace.steps):
        cur_d, cur_col = apply_move(cur_d, cur_col, step.move)
        if canonical_checksum(cur_d, cur_col) != step.checksum:
            raise MoveError(f"checksum mismatch at step {i}")
    return cur_d, cur_col
