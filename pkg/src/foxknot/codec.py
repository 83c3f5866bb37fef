"""Diagram interchange: PD text, colored-diagram documents, checksums, corpus.

PD text is a comma-separated list of terms ``X(e0,e1,e2,e3)``: each crossing's
four edge labels counterclockwise starting at an under-strand port.  Labels
are 1-based in text and 0-based internally.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field

from .diagram import Diagram, DiagramError
from .coloring import FoxColoring, validate_coloring


class PDSyntaxError(ValueError):
    """Malformed PD text; carries a character position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at character {pos})")
        self.pos = pos


_TERM = re.compile(r"\s*X\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*")


def parse_pd(text: str) -> Diagram:
    """Parse PD text into a validated diagram."""
    stripped = text.strip()
    if not stripped:
        raise PDSyntaxError("empty PD text", 0)
    if stripped.lower() == "unknot":
        from .diagram import unknot
        return unknot()
    crossings: dict[int, tuple[int, int, int, int]] = {}
    pos = 0
    index = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise PDSyntaxError("expected crossing term X(a,b,c,d)", pos)
        labels = tuple(int(g) for g in m.groups())
        if any(x < 1 for x in labels):
            raise PDSyntaxError("edge labels must be positive", m.start(1))
        crossings[index] = tuple(x - 1 for x in labels)
        index += 1
        pos = m.end()
        if pos < len(text) and text[pos:].strip():
            if text[pos] != ",":
                raise PDSyntaxError("expected ',' between crossing terms", pos)
            pos += 1
    if not crossings:
        raise PDSyntaxError("no crossing terms found", 0)
    d = Diagram(crossings)
    problems = d.validate()
    if problems:
        raise DiagramError("invalid PD code: " + "; ".join(problems))
    return d


def pd_text(d: Diagram) -> str:
    """Serialize a diagram to PD text with 1-based contiguous edge labels."""
    if not d.crossings:
        return "unknot"
    relabel = {s: i + 1 for i, s in enumerate(d.semiarc_ids)}
    terms = []
    for c in sorted(d.crossings):
        ports = d.crossings[c]
        terms.append("X(%d,%d,%d,%d)" % tuple(relabel[s] for s in ports))
    return ",".join(terms)


# -- canonical form and checksums ---------------------------------------------


def _bfs_encoding(d: Diagram, c0: int, r0: int):
    """Port-wiring encoding from a breadth-first relabeling rooted at (c0, r0).

    Crossing rotations are restricted to even offsets so under/over port
    classes are preserved; each newly discovered crossing is rotated so the
    arrival port normalizes into {0, 1}.
    """
    order = {c0: 0}
    rot = {c0: r0}
    queue = [c0]
    qi = 0
    while qi < len(queue):
        c = queue[qi]
        qi += 1
        for k in range(4):
            c2, p2 = d.alpha((c, (rot[c] + k) % 4))
            if c2 not in order:
                order[c2] = len(queue)
                rot[c2] = 0 if p2 in (0, 1) else 2
                queue.append(c2)
    enc = []
    for c in queue:
        for k in range(4):
            c2, p2 = d.alpha((c, (rot[c] + k) % 4))
            enc.append((order[c2], (p2 - rot[c2]) % 4))
    return tuple(enc), queue, rot


def canonical_form(d: Diagram, col: FoxColoring | None = None):
    """Labeling-invariant encoding of the wiring (and coloring, if given)."""
    if not d.crossings:
        colors = tuple(col.colors) if col is not None else ()
        p = col.p if col is not None else None
        return ("unknot", p, colors)
    best = None
    for c0 in sorted(d.crossings):
        for r0 in (0, 2):
            enc, queue, rot = _bfs_encoding(d, c0, r0)
            if col is None:
                candidate = (enc, None, ())
            else:
                colors = tuple(
                    col.colors[d.arc_of_semiarc[d.crossings[c][(rot[c] + k) % 4]]]
                    for c in queue for k in range(4))
                candidate = (enc, col.p, colors)
            if best is None or candidate < best:
                best = candidate
    return best


def canonical_checksum(d: Diagram, col: FoxColoring | None = None) -> str:
    """sha256 hex digest of the canonical form."""
    return hashlib.sha256(repr(canonical_form(d, col)).encode()).hexdigest()


# -- colored diagram documents -------------------------------------------------


@dataclass(frozen=True)
class ColoredDiagramDoc:
    """Human-diffable text document for a diagram plus optional coloring."""

    pd: str
    p: int | None = None
    colors: tuple[int, ...] | None = None  # indexed by arc id of parse_pd(pd)
    name: str = ""
    provenance: str = ""

    def to_text(self) -> str:
        lines = []
        if self.name:
            lines.append(f"name: {self.name}")
        if self.provenance:
            lines.append(f"provenance: {self.provenance}")
        if self.p is not None:
            lines.append(f"p: {self.p}")
        lines.append(f"pd: {self.pd}")
        if self.colors is not None:
            lines.append("colors: " + ",".join(str(x) for x in self.colors))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ColoredDiagramDoc":
        fields: dict[str, str] = {}
        for i, line in enumerate(text.splitlines()):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if ":" not in line:
                raise PDSyntaxError(f"expected 'key: value' on line {i + 1}", i)
            key, _, value = line.partition(":")
            fields[key.strip()] = value.strip()
        if "pd" not in fields:
            raise PDSyntaxError("document has no 'pd' line", 0)
        colors = None
        if "colors" in fields and fields["colors"]:
            colors = tuple(int(x) for x in fields["colors"].split(","))
        return cls(pd=fields["pd"],
                   p=int(fields["p"]) if "p" in fields else None,
                   colors=colors,
                   name=fields.get("name", ""),
                   provenance=fields.get("provenance", ""))

    def diagram(self) -> Diagram:
        return parse_pd(self.pd)

    def coloring(self) -> FoxColoring | None:
        if self.colors is None or self.p is None:
            return None
        return FoxColoring(self.p, self.colors)


def serialize(d: Diagram, col: FoxColoring | None = None, name: str = "",
              provenance: str = "") -> ColoredDiagramDoc:
    """Document for (d, col); the coloring is re-keyed to serialized arc ids.

    PD serialization relabels semiarcs monotonically, so arc ids (which sort
    by least member semiarc) are stable across the round trip.
    """
    if col is not None and not validate_coloring(d, col):
        raise DiagramError("refusing to serialize an invalid coloring")
    return ColoredDiagramDoc(
        pd=pd_text(d),
        p=col.p if col is not None else None,
        colors=tuple(col.colors) if col is not None else None,
        name=name, provenance=provenance)


# -- braid closures and the reference corpus ------------------------------------


def braid_closure(word: list[int], n_strands: int) -> Diagram:
    """Closure of a signed braid word (generator ±i crosses strands i-1, i).

    A positive letter takes the left strand under; a negative letter takes it
    over.  Every strand must be involved in at least one crossing.
    """
    if any(not 1 <= abs(g) < n_strands for g in word):
        raise ValueError("braid generator out of range")
    cur = list(range(n_strands))
    next_id = n_strands
    crossings: dict[int, tuple[int, int, int, int]] = {}
    for t, g in enumerate(word):
        i = abs(g)
        left_in, right_in = cur[i - 1], cur[i]
        out_right, out_left = next_id, next_id + 1
        next_id += 2
        # counterclockwise port order; rotation starts at an under port
        if g > 0:
            crossings[t] = (left_in, right_in, out_right, out_left)
        else:
            crossings[t] = (right_in, out_right, out_left, left_in)
        cur[i - 1], cur[i] = out_left, out_right
    if any(cur[j] == j for j in range(n_strands)):
        raise ValueError("closure of an untouched strand is a split component")
    rename = {cur[j]: j for j in range(n_strands)}
    closed = {c: tuple(rename.get(s, s) for s in ports)
              for c, ports in crossings.items()}
    return Diagram(closed).check()


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    pd: str
    determinant: int
    note: str = ""

    def diagram(self) -> Diagram:
        return parse_pd(self.pd)


def _corpus() -> dict[str, CorpusEntry]:
    t2_17 = pd_text(braid_closure([1] * 17, 2))
    # stacking two 2-strand torus braids on 3 strands closes to their
    # connected sum
    t2_17_sum = pd_text(braid_closure([1] * 17 + [2] * 17, 3))
    return {
        "unknot": CorpusEntry("unknot", "unknot", 1, "0-crossing circle"),
        "kink": CorpusEntry("kink", "X(1,2,2,1)", 1, "1-crossing unknot"),
        "trefoil": CorpusEntry(
            "trefoil", "X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)", 3),
        "figure_eight": CorpusEntry(
            "figure_eight", "X(4,2,5,1),X(8,6,1,5),X(6,3,7,4),X(2,7,3,8)", 5),
        # 7-crossing alternating 4-plat for the 2-bridge knot 17/5; among
        # knots of crossing number <= 7 only 7_5 has determinant 17
        "7_5": CorpusEntry(
            "7_5",
            "X(1,2,3,4),X(4,3,5,6),X(6,5,7,8),X(8,9,10,1),"
            "X(9,11,14,10),X(11,7,12,13),X(13,12,2,14)",
            17, "2-bridge 4-plat"),
        "T(2,17)": CorpusEntry(
            "T(2,17)", t2_17, 17, "(2,17) torus knot, 17-crossing closed braid"),
        "T(2,17)#T(2,17)": CorpusEntry(
            "T(2,17)#T(2,17)", t2_17_sum, 289, "connected sum"),
    }


def builtin_corpus() -> dict[str, CorpusEntry]:
    return _corpus()
