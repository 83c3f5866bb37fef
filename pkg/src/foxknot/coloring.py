"""Fox coloring algebra over Z_p.

At every crossing the two under-arc colors must sum to twice the over-arc
color mod p.  Everything here is exact integer arithmetic: kernels by
modular Gaussian elimination, knot determinants by fraction-free (Bareiss)
elimination over Z.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import Diagram, DiagramError


class ColoringError(ValueError):
    pass


@dataclass(frozen=True)
class FoxColoring:
    """Assignment of a color in [0, p) to every arc of a diagram."""

    p: int
    colors: tuple[int, ...]  # indexed by arc id

    def color(self, arc_id: int) -> int:
        return self.colors[arc_id]

    def palette(self) -> frozenset[int]:
        return frozenset(self.colors)

    def is_trivial(self) -> bool:
        return len(set(self.colors)) == 1


@dataclass(frozen=True)
class ColoringSpace:
    """Solution space of the crossing relations: particular + span(basis)."""

    p: int
    n_arcs: int
    basis: tuple[tuple[int, ...], ...]  # each a length-n_arcs vector mod p

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def count(self) -> int:
        return self.p ** self.dimension

    def colorings(self):
        """Yield every coloring in the space (use only for small dimension)."""
        from itertools import product

        for coeffs in product(range(self.p), repeat=self.dimension):
            vec = [0] * self.n_arcs
            for coef, b in zip(coeffs, self.basis):
                if coef:
                    for i, x in enumerate(b):
                        vec[i] = (vec[i] + coef * x) % self.p
            yield FoxColoring(self.p, tuple(vec))


def semiarc_colors(d: Diagram, col: FoxColoring) -> dict[int, int]:
    """Expand an arc coloring to a per-semiarc color map."""
    return {s: col.colors[a] for s, a in d.arc_of_semiarc.items()}


def crossing_triple(d: Diagram, col: FoxColoring, c: int) -> tuple[int, int, int]:
    """The (a, b, c) triple at a crossing: under, over, under colors."""
    u1, u2 = d.under_arcs_at(c)
    b = d.over_arc_at(c)
    return (col.colors[u1], col.colors[b], col.colors[u2])


def validate_coloring(d: Diagram, col: FoxColoring) -> bool:
    arcs = d.arcs()
    if len(col.colors) != len(arcs):
        raise ColoringError(
            f"coloring has {len(col.colors)} entries for {len(arcs)} arcs")
    if any(not 0 <= x < col.p for x in col.colors):
        raise ColoringError("color out of range")
    for c in d.crossings:
        a, b, cc = crossing_triple(d, col, c)
        if (a + cc - 2 * b) % col.p != 0:
            return False
    return True


def _relation_rows(d: Diagram) -> list[list[int]]:
    """One row per crossing over the arc variables: a + c - 2b = 0."""
    n = len(d.arcs())
    rows = []
    for c in sorted(d.crossings):
        row = [0] * n
        u1, u2 = d.under_arcs_at(c)
        b = d.over_arc_at(c)
        row[u1] += 1
        row[u2] += 1
        row[b] -= 2
        rows.append(row)
    return rows


def solve_colorings(d: Diagram, p: int) -> ColoringSpace:
    """Kernel of the crossing relations mod p by exact elimination."""
    if d.validate():
        raise DiagramError("solve_colorings requires a valid diagram")
    n = len(d.arcs())
    rows = [[x % p for x in row] for row in _relation_rows(d)]

    # row-reduce mod p
    pivots: list[int] = []
    r = 0
    for col_i in range(n):
        pivot_row = next((i for i in range(r, len(rows)) if rows[i][col_i] % p), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = pow(rows[r][col_i], p - 2, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col_i] % p:
                f = rows[i][col_i]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(col_i)
        r += 1
        if r == len(rows):
            break

    free = [j for j in range(n) if j not in pivots]
    basis = []
    for j in free:
        vec = [0] * n
        vec[j] = 1
        for i, pc in enumerate(pivots):
            vec[pc] = (-rows[i][j]) % p
        basis.append(tuple(vec))
    return ColoringSpace(p, n, tuple(basis))


def count_colorings(d: Diagram, p: int) -> int:
    return solve_colorings(d, p).count()


def is_p_colorable(d: Diagram, p: int) -> bool:
    """True iff some coloring uses more than one color."""
    return solve_colorings(d, p).dimension >= 2


def determinant(d: Diagram) -> int:
    """|det| of the crossing-relation matrix with one row and column removed.

    Fraction-free Bareiss elimination over the integers.  The 0-crossing
    unknot has determinant 1 by convention.
    """
    if d.validate():
        raise DiagramError("determinant requires a valid diagram")
    rows = _relation_rows(d)
    if not rows:
        return 1
    m = [row[1:] for row in rows[1:]]
    n = len(m)
    if n == 0:
        return 1
    if any(len(row) != n for row in m):
        raise ColoringError("relation matrix is not square after deletion")
    prev = 1
    sign = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return abs(sign * m[n - 1][n - 1])


def palette(col: FoxColoring) -> frozenset[int]:
    return col.palette()


def affine_transform(col: FoxColoring, u: int, v: int) -> FoxColoring:
    """Replace every color x by u*x + v mod p; u must be a unit."""
    from math import gcd

    if gcd(u, col.p) != 1:
        raise ColoringError(f"{u} is not invertible mod {col.p}")
    return FoxColoring(col.p, tuple((u * x + v) % col.p for x in col.colors))


def min_palette_over_colorings(d: Diagram, p: int, cap: int = 6) -> int:
    """Minimum palette size over all nontrivial colorings of this diagram.

    Enumerates the full solution space, so the kernel dimension must not
    exceed `cap`.  Trivial (constant) colorings are not admissible.
    """
    space = solve_colorings(d, p)
    if space.dimension > cap:
        raise ColoringError(
            f"coloring space dimension {space.dimension} exceeds cap {cap}")
    if space.dimension < 2:
        raise ColoringError(f"diagram is not nontrivially {p}-colorable")
    best = p + 1
    for col in space.colorings():
        k = len(set(col.colors))
        if 1 < k < best:
            best = k
            if best == 2:
                break
    return best


def lower_bound(p: int) -> int:
    """Floor(log2 p) + 2: colors needed for any nontrivial p-coloring."""
    return p.bit_length() + 1  # floor(log2 p) == bit_length - 1 for p >= 1
