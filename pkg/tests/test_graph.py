"""Bipartite graph construction and kinship computation."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genqa import build_family_tree_graph, kinship, parse
from genqa.graph import UnknownPerson, kinship_profile, term_for_shape

from corpus import random_tree_text
from oracles import kinship_degree_oracle


class TestConstruction:
    def test_person_and_family_nodes(self, fig2_graph):
        assert "@SP@" in fig2_graph.person_nodes
        assert "@F1@" in fig2_graph.family_nodes
        assert len(fig2_graph.person_nodes) == 17
        assert len(fig2_graph.family_nodes) == 6

    def test_neighbors_child_side_first_sorted(self, fig2_graph):
        # person: families-as-child before families-as-parent
        assert fig2_graph.neighbors("@SP@") == ["@F1@", "@F4@"]
        # family: children before parents, each block sorted by id
        assert fig2_graph.neighbors("@F1@") == ["@P7@", "@P8@", "@SP@", "@P1@", "@P2@"]
        assert fig2_graph.neighbors("@F4@") == ["@P12@", "@P13@", "@P10@", "@SP@"]

    def test_neighbors_unknown_raises(self, fig2_graph):
        with pytest.raises(KeyError):
            fig2_graph.neighbors("@NOPE@")

    def test_sex_map(self, fig2_graph):
        assert fig2_graph.sex["@SP@"] == "Female"
        assert fig2_graph.sex["@P1@"] == "Male"

    def test_dangling_links_skipped(self, fig3_text):
        g = build_family_tree_graph(parse(fig3_text))
        # @F73@ exists in FAMS pointers only, never as a record
        assert "@F73@" not in g.family_nodes
        assert g.person_nodes["@I137@"].fam_parent == []


KINSHIP_TABLE = [
    ("@SP@", "self", 0),
    ("@P10@", "husband", 0),
    ("@P1@", "father", 1),
    ("@P2@", "mother", 1),
    ("@P12@", "son", 1),
    ("@P13@", "daughter", 1),
    ("@P7@", "brother", 2),
    ("@P8@", "sister", 2),
    ("@P3@", "grandfather", 2),
    ("@P4@", "grandmother", 2),
    ("@P5@", "grandfather", 2),
    ("@P6@", "grandmother", 2),
    ("@P15@", "granddaughter", 2),
    ("@P16@", "grandson", 2),
    ("@P17@", "granddaughter", 2),
    ("@P11@", "daughter-in-law", 1),
    ("@P14@", "son-in-law", 1),
]


class TestKinship:
    @pytest.mark.parametrize("other,term,degree", KINSHIP_TABLE)
    def test_terms_and_degrees(self, fig2_graph, other, term, degree):
        k = kinship(fig2_graph, "@SP@", other)
        assert k.term == term
        assert k.degree == degree

    def test_spouse_of_parent_in_law(self, fig2_graph):
        # from a child-in-law's viewpoint the focus person is mother-in-law
        k = kinship(fig2_graph, "@P11@", "@SP@")
        assert k.term == "mother-in-law"
        assert k.degree == 1

    def test_unreachable_is_relative_inf(self):
        doc = parse(
            "0 @I1@ INDI\n1 NAME A /B/\n0 @I2@ INDI\n1 NAME C /D/\n0 TRLR\n"
        )
        g = build_family_tree_graph(doc)
        k = kinship(g, "@I1@", "@I2@")
        assert k.term == "relative"
        assert math.isinf(k.degree)

    def test_unknown_person_raises(self, fig2_graph):
        with pytest.raises(UnknownPerson):
            kinship(fig2_graph, "@SP@", "@NOPE@")
        with pytest.raises(UnknownPerson):
            kinship(fig2_graph, "@NOPE@", "@SP@")

    def test_deep_shapes_fall_back_to_relative(self, fig2_graph):
        # great-grandparent of @P15@ is three up: no word in the vocabulary
        k = kinship(fig2_graph, "@P15@", "@P1@")
        assert k.term == "relative"
        assert k.degree == 3

    def test_term_for_shape_neutral_fallbacks(self):
        assert term_for_shape(("S",), "Unknown") == "spouse"
        assert term_for_shape(("D", "S"), "Unknown") == "relative"
        assert term_for_shape(None, "Male") == "relative"
        assert term_for_shape(("U", "U", "U"), "Male") == "relative"

    def test_profile_degrees_match_pairwise(self, fig2_graph):
        profile = kinship_profile(fig2_graph, "@SP@")
        for other, _, degree in KINSHIP_TABLE:
            assert profile[other][0] == degree


class TestKinshipAgainstOracle:
    def _check_tree(self, rnd: random.Random, n_persons: int):
        doc = parse(random_tree_text(rnd, n_persons))
        g = build_family_tree_graph(doc)
        people = sorted(doc.individuals)
        for _ in range(30):
            a, b = rnd.choice(people), rnd.choice(people)
            got = kinship(g, a, b).degree
            want = kinship_degree_oracle(doc, a, b)
            want = math.inf if want is None else want
            assert got == want, f"{a}->{b}: got {got}, oracle {want}"

    def test_many_random_trees(self):
        rnd = random.Random(20240817)
        for _ in range(40):
            self._check_tree(rnd, rnd.randint(2, 40))

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32), st.integers(min_value=2, max_value=30))
    def test_random_tree_property(self, seed, n):
        self._check_tree(random.Random(seed), n)

    def test_symmetry_of_degree(self):
        rnd = random.Random(99)
        doc = parse(random_tree_text(rnd, 25))
        g = build_family_tree_graph(doc)
        people = sorted(doc.individuals)
        for _ in range(60):
            a, b = rnd.choice(people), rnd.choice(people)
            assert kinship(g, a, b).degree == kinship(g, b, a).degree
