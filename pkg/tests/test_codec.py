import pytest

from foxknot.codec import (
    ColoredDiagramDoc,
    PDSyntaxError,
    braid_closure,
    builtin_corpus,
    canonical_checksum,
    parse_pd,
    pd_text,
    serialize,
)
from foxknot.coloring import solve_colorings
from foxknot.diagram import Diagram, DiagramError


class TestParse:
    def test_kink(self):
        d = parse_pd("X(1,2,2,1)")
        assert len(d.crossings) == 1

    def test_trefoil(self):
        d = parse_pd("X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)")
        assert len(d.crossings) == 3
        assert len(d.semiarc_ids) == 6
        assert len(d.arcs()) == 3

    def test_whitespace_tolerant(self):
        d = parse_pd("X(1,4,2,5),\n  X(3,6,4,1) , X(5,2,6,3)")
        assert len(d.crossings) == 3

    def test_arity_error(self):
        with pytest.raises(PDSyntaxError):
            parse_pd("X(1,2,3)")

    def test_bad_multiplicity(self):
        with pytest.raises(DiagramError):
            parse_pd("X(1,2,3,4)")

    def test_unknot_keyword(self):
        d = parse_pd("unknot")
        assert not d.crossings
        assert d.validate() == []

    def test_syntax_error_position(self):
        with pytest.raises(PDSyntaxError) as e:
            parse_pd("X(1,2,2,1) garbage")
        assert "character" in str(e.value)


class TestRoundTrip:
    @pytest.mark.parametrize("name", [
        "unknot", "kink", "trefoil", "figure_eight", "7_5",
        "T(2,17)", "T(2,17)#T(2,17)",
    ])
    def test_pd_round_trip_checksum(self, corpus, name):
        d = corpus[name].diagram()
        d2 = parse_pd(pd_text(d))
        assert canonical_checksum(d) == canonical_checksum(d2)

    def test_doc_round_trip(self, trefoil):
        space = solve_colorings(trefoil, 3)
        col = next(c for c in space.colorings() if not c.is_trivial())
        doc = serialize(trefoil, col, name="trefoil")
        doc2 = ColoredDiagramDoc.from_text(doc.to_text())
        assert doc2 == doc
        d2, col2 = doc2.diagram(), doc2.coloring()
        assert canonical_checksum(d2, col2) == canonical_checksum(trefoil, col)


class TestChecksum:
    def test_invariant_under_relabeling(self, trefoil):
        # permute crossing ids and shift semiarc ids
        remap = {c: (c + 1) % 3 for c in trefoil.crossings}
        shifted = Diagram({remap[c]: tuple(s + 10 for s in ports)
                           for c, ports in trefoil.crossings.items()})
        assert canonical_checksum(shifted) == canonical_checksum(trefoil)

    def test_distinct_diagrams_differ(self, trefoil, figure_eight):
        assert canonical_checksum(trefoil) != canonical_checksum(figure_eight)

    def test_coloring_affects_checksum(self, trefoil):
        space = solve_colorings(trefoil, 3)
        cols = [c for c in space.colorings() if not c.is_trivial()]
        plain = canonical_checksum(trefoil)
        assert canonical_checksum(trefoil, cols[0]) != plain

    def test_fixed_width(self, corpus):
        digests = {canonical_checksum(e.diagram()) for e in corpus.values()}
        assert all(len(x) == 64 for x in digests)
        assert len(digests) == len(corpus)


class TestBraidClosure:
    def test_single_letter_is_kink(self):
        d = braid_closure([1], 2)
        assert len(d.crossings) == 1
        assert canonical_checksum(d) == canonical_checksum(parse_pd("X(1,2,2,1)"))

    def test_torus_17(self):
        d = braid_closure([1] * 17, 2)
        assert len(d.crossings) == 17
        assert len(d.arcs()) == 17
        assert d.validate() == []

    def test_untouched_strand_rejected(self):
        with pytest.raises(ValueError):
            braid_closure([1], 3)

    def test_generator_out_of_range(self):
        with pytest.raises(ValueError):
            braid_closure([2], 2)


class TestCorpus:
    def test_required_entries(self, corpus):
        for name in ("unknot", "kink", "trefoil", "figure_eight", "7_5",
                     "T(2,17)", "T(2,17)#T(2,17)"):
            assert name in corpus

    def test_all_valid(self, corpus):
        for entry in corpus.values():
            assert entry.diagram().validate() == []

    def test_crossing_counts(self, corpus):
        assert len(corpus["T(2,17)"].diagram().crossings) == 17
        assert len(corpus["7_5"].diagram().crossings) == 7
        assert len(corpus["T(2,17)#T(2,17)"].diagram().crossings) == 34
