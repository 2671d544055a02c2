import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings as hypothesis_settings, strategies as st

from group_app.characters import character_table
from group_app.exceptions import NotSurjective
from group_app.groups import abelian_group, cyclic_group, metacyclic_group, nilpotent2_group, permutation_group, \
    type_ii_group
from homology_app.covers import (
    build_cover,
    chevalley_weil_multiplicities,
    elevation_chain,
    elevation_class,
    homology_action,
    isotypic_multiplicities_by_projector,
    kernel_lift_words,
    primitive_homology_span,
    quotient_fixed_check,
)
from homology_app.orbits import Homomorphism, has_primitive_in_kernel, irrpr_set
from homology_app.words import Word, basis_words


def on_generators(group, rank=None):
    """phi sending the basis to the group's generators, padded with the identity up to ``rank``."""
    images = list(group.gen_indices)
    images += [0] * ((rank or len(images)) - len(images))
    return Homomorphism(group, images)


def s3():
    return permutation_group([[[0, 1]], [[0, 1, 2]]])


def chevalley_weil_corpus():
    return [
        Homomorphism(cyclic_group(6), [2, 3]),
        on_generators(s3()),
        on_generators(metacyclic_group(3, 8, 2)),
        on_generators(abelian_group(2, 2)),
        Homomorphism(abelian_group(2, 2), list(abelian_group(2, 2).gen_indices) + [3]),
        on_generators(nilpotent2_group(2, 2)),
        on_generators(type_ii_group(3, 4, 2, 1, 3)),
        on_generators(metacyclic_group(5, 4, 2)),
        on_generators(nilpotent2_group(2, 4, [[2]])),
        on_generators(permutation_group([[[0, 1, 2, 3]], [[0, 1]]])),
        on_generators(cyclic_group(7), 3),
    ]


words = st.lists(st.sampled_from([1, -1, 2, -2]), min_size=1, max_size=12).map(Word).filter(bool)


class CoverGraphTestCase(SimpleTestCase):
    def test_counts(self):
        cover = build_cover(Homomorphism(cyclic_group(6), [2, 3]))
        self.assertEqual(cover.vertex_count, 6)
        self.assertEqual(cover.edge_count, 12)
        self.assertEqual(cover.components, 1)
        self.assertEqual(cover.betti_number, 7)
        self.assertTrue(cover.is_regular)

    def test_intermediate_cover(self):
        group = s3()
        phi = on_generators(group)
        transposition = group.gen_indices[0]
        cover = build_cover(phi, transposition)
        self.assertEqual(cover.vertex_count, 3)
        self.assertEqual(cover.betti_number, 2 * 3 - 3 + 1)
        self.assertFalse(cover.is_regular)
        print("✅ Intermediate cover test passed")

    def test_non_surjective_has_no_deck_action(self):
        phi = Homomorphism(cyclic_group(6), [2, 4])
        with self.assertRaises(NotSurjective):
            homology_action(build_cover(phi), phi)

    def test_elevation_power_is_element_order(self):
        phi = Homomorphism(cyclic_group(6), [2, 3])
        cover = build_cover(phi)
        _, k = elevation_chain(cover, Word.from_string("a"))
        self.assertEqual(k, 3)
        _, k = elevation_chain(cover, Word.from_string("ab"))
        self.assertEqual(k, 6)

    @hypothesis_settings(max_examples=200, deadline=None)
    @given(words)
    def test_walks_end_at_the_image_and_elevations_close(self, word):
        phi = on_generators(metacyclic_group(3, 8, 2))
        cover = build_cover(phi)
        _, end = cover.walk(word, 0)
        self.assertEqual(end, cover.vertex_of_element[phi.evaluate(word)])
        chain, k = elevation_chain(cover, word)
        self.assertFalse(cover.boundary(chain).any())
        self.assertEqual(k, phi.target.element_order(phi.evaluate(word)))


class HomologyActionTestCase(SimpleTestCase):
    def test_deck_matrices(self):
        phi = on_generators(s3())
        space = homology_action(build_cover(phi), phi)
        group = phi.target
        self.assertEqual(space.dim, 7)
        self.assertTrue(np.array_equal(space.deck_action[0], np.eye(7, dtype=np.int64)))
        for h in range(group.order):
            for g in range(group.order):
                self.assertTrue(np.array_equal(space.deck_action[h] @ space.deck_action[g],
                                               space.deck_action[group.mul(h, g)]))

    def test_basis_cycles_are_closed(self):
        phi = on_generators(metacyclic_group(3, 8, 2))
        space = homology_action(build_cover(phi), phi)
        for j in range(space.dim):
            self.assertFalse(space.cover.boundary(space.cycles[:, j]).any())

    def test_translates_of_elevations(self):
        phi = Homomorphism(cyclic_group(6), [2, 3])
        space = homology_action(build_cover(phi), phi)
        cover = space.cover
        word = Word.from_string("a")
        at_base = elevation_class(cover, word, space=space)
        for h in range(6):
            start = cover.vertex_of_element[h]
            self.assertTrue(np.array_equal(space.translate(h, at_base), elevation_class(cover, word, start, space)))

    def test_chevalley_weil_corpus(self):
        """H_1 of every cover decomposes as (n - 1) copies of the regular representation plus one trivial"""
        corpus = chevalley_weil_corpus()
        self.assertGreaterEqual(len(corpus), 10)
        for phi in corpus:
            table = character_table(phi.target)
            space = homology_action(build_cover(phi), phi)
            self.assertEqual(space.dim, (phi.rank - 1) * phi.target.order + 1)
            self.assertEqual(table.decompose(space.character), chevalley_weil_multiplicities(table, phi.rank),
                             repr(phi))
        print(f"✅ Chevalley-Weil test passed on {len(corpus)} covers")

    def test_transfer_check_on_every_element(self):
        """Fixed homology of <g> matches the homology of the quotient cover for every g"""
        checked = 0
        for phi in chevalley_weil_corpus():
            space = homology_action(build_cover(phi), phi)
            for g in range(phi.target.order):
                report = quotient_fixed_check(phi, g, space)
                self.assertTrue(report['ok'])
                self.assertEqual(report['quotient_vertices'], phi.target.order // phi.target.element_order(g))
                checked += 1
        print(f"✅ Transfer test passed on {checked} elements")


class PrimitiveHomologyTestCase(SimpleTestCase):
    def test_abelian_groups_are_closed(self):
        """With a redundant generator the primitive span of an abelian cover is all of H_1"""
        cases = [on_generators(cyclic_group(m), 2) for m in (2, 3, 4, 5, 6, 8, 9, 10, 12)]
        cases += [on_generators(abelian_group(2, 2), 3), on_generators(abelian_group(2, 4), 3)]
        cases += [on_generators(cyclic_group(2), 3), on_generators(cyclic_group(3), 3)]
        for phi in cases:
            table = character_table(phi.target)
            span = primitive_homology_span(phi, table, word_budget=32)
            self.assertTrue(span.determined, repr(phi))
            self.assertEqual(span.lower_mult, span.full_mult, repr(phi))
            self.assertEqual(span.upper_mult, span.full_mult, repr(phi))
            self.assertGreater(span.orbit_checks, 0)
        print("✅ Abelian primitive homology test passed")

    def test_bounds_on_the_order_24_counterexample(self):
        phi = on_generators(metacyclic_group(3, 8, 2))
        table = character_table(phi.target)
        span = primitive_homology_span(phi, table, word_budget=6)
        missing = [i for i in range(len(table)) if i not in span.irrpr_rows]
        self.assertTrue(missing)
        for i in range(len(table)):
            self.assertLessEqual(span.lower_mult[i], span.upper_mult[i])
            self.assertLessEqual(span.upper_mult[i], span.full_mult[i])
        for i in missing:
            self.assertEqual(span.upper_mult[i], 0)
        self.assertEqual(span.irrpr_rows, irrpr_set(phi, table))
        self.assertLess(span.upper_dim, 2 * 24 + 1)

    def test_gamma_primitive_homology_is_proper(self):
        phi = on_generators(nilpotent2_group(2, 4, [[2]]))
        table = character_table(phi.target)
        span = primitive_homology_span(phi, table, word_budget=4)
        self.assertLess(span.upper_dim, 33)
        self.assertGreater(span.orbit_checks, 0)
        self.assertNotEqual(span.upper_mult, span.full_mult)

    def test_orbit_checks_can_be_turned_off(self):
        phi = on_generators(s3())
        span = primitive_homology_span(phi, character_table(phi.target), word_budget=3, check_orbits=False)
        self.assertEqual(span.orbit_checks, 0)

    def test_orbit_spans_across_the_corpus(self):
        """Every primitive orbit met at small budgets spans a copy of the induced trivial character"""
        for phi in chevalley_weil_corpus():
            span = primitive_homology_span(phi, character_table(phi.target), word_budget=2)
            self.assertGreater(span.orbit_checks, 0, repr(phi))
            self.assertLessEqual(span.orbit_checks, span.words_seen)

    def test_lower_bound_grows_with_the_word_budget(self):
        phi = on_generators(metacyclic_group(3, 8, 2))
        table = character_table(phi.target)
        space = homology_action(build_cover(phi), phi)
        previous = None
        for budget in range(0, 7):
            span = primitive_homology_span(phi, table, word_budget=budget, space=space, check_orbits=False)
            if previous is not None:
                self.assertEqual(span.upper_mult, previous.upper_mult)
                self.assertGreaterEqual(span.rank, previous.rank)
                for lo, before in zip(span.lower_mult, previous.lower_mult):
                    self.assertGreaterEqual(lo, before)
            previous = span

    def test_primitive_in_the_kernel_closes_the_bracket(self):
        """Once a primitive element maps to 1, raising the word budget spans all of H_1"""
        for phi in [on_generators(s3(), 3), on_generators(metacyclic_group(3, 8, 2), 3)]:
            self.assertTrue(has_primitive_in_kernel(phi)[0])
            table = character_table(phi.target)
            space = homology_action(build_cover(phi), phi)
            spans = [primitive_homology_span(phi, table, word_budget=budget, space=space)
                     for budget in (2, 8, 24)]
            for before, after in zip(spans, spans[1:]):
                for lo, prev in zip(after.lower_mult, before.lower_mult):
                    self.assertGreaterEqual(lo, prev)
            self.assertEqual(spans[-1].lower_mult, spans[-1].full_mult, repr(phi))
            self.assertEqual(spans[-1].rank, space.dim)
            self.assertFalse(spans[-1].truncated)
        print("✅ Kernel lift closure test passed")

    def test_kernel_lifts_are_primitive_loops(self):
        phi = on_generators(metacyclic_group(3, 8, 2), 3)
        lifts, cut = kernel_lift_words(phi, basis_words(3), 2, 32)
        self.assertFalse(cut)
        # one loop per edge outside a spanning tree of the Cayley graph on a, b
        self.assertEqual(len(lifts), 24 + 1)
        for word in lifts:
            self.assertEqual(phi.evaluate(word), 0)
            self.assertEqual(word.letters[-1], 3)
        short, cut = kernel_lift_words(phi, basis_words(3), 2, 1)
        self.assertTrue(cut)
        self.assertLess(len(short), len(lifts))

    def test_projectors_agree_with_restricted_traces(self):
        for phi, budget in [(on_generators(cyclic_group(3), 2), 8), (on_generators(s3()), 6)]:
            table = character_table(phi.target)
            space = homology_action(build_cover(phi), phi)
            span = primitive_homology_span(phi, table, word_budget=budget, space=space)
            by_projector = isotypic_multiplicities_by_projector(space, table, span.generators_matrix)
            self.assertEqual(by_projector, span.lower_mult, repr(phi))
