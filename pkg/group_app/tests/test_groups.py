from django.test import SimpleTestCase, override_settings

from group_app.exceptions import BadParameters, ClosureBoundExceeded, NotAPGroup, NotAssociative, SchemaError
from group_app.groups import (
    FiniteGroup,
    abelian_group,
    closure_from_generators,
    cyclic_group,
    frattini_subgroup_pgroup,
    group_from_spec,
    group_from_table,
    group_to_spec,
    is_redundant,
    match_generators,
    metacyclic_group,
    nilpotent2_group,
    permutation_group,
    type_ii_group,
)

# Smallest non-associative loop: every element squares to the identity.
LOOP_OF_ORDER_5 = [
    [0, 1, 2, 3, 4],
    [1, 0, 3, 4, 2],
    [2, 4, 0, 1, 3],
    [3, 2, 4, 0, 1],
    [4, 3, 1, 2, 0],
]


class ClosureTestCase(SimpleTestCase):
    def test_symmetric_group_from_two_permutations(self):
        """A transposition and a 3-cycle close to S3"""
        group = permutation_group([[[0, 1]], [[0, 1, 2]]])
        self.assertEqual(group.order, 6)
        self.assertFalse(group.is_abelian)
        print("✅ S3 closure test passed")

    def test_identity_seed_gives_trivial_group(self):
        group = closure_from_generators([()], lambda x, y: (), ())
        self.assertEqual(group.order, 1)
        self.assertEqual(group.gen_indices, [0])

    def test_identity_at_zero_and_bfs_numbering(self):
        group = cyclic_group(6)
        self.assertEqual(group.identity, 0)
        # right-multiplying by the generator discovers 1, 2, ... in order
        self.assertEqual([group.mul(i, 1) for i in range(6)], [1, 2, 3, 4, 5, 0])

    def test_closure_bound(self):
        with self.assertRaises(ClosureBoundExceeded):
            closure_from_generators([1], lambda x, y: (x + y) % 10, 0, bound=5)

    def test_order_cap_refuses_large_groups(self):
        with self.assertRaises(BadParameters):
            group_from_spec({'kind': 'metacyclic', 'm': 1000, 'k': 100, 'r': 1})
        with override_settings(PHL_GROUP_ORDER_CAP=100):
            self.assertEqual(cyclic_group(100).order, 100)
            with self.assertRaises(BadParameters):
                abelian_group(10, 11)
            with self.assertRaises(BadParameters):
                group_from_table(list(range(101)) * 101, 101, [1])

    def test_non_associative_table_rejected(self):
        with self.assertRaises(NotAssociative):
            FiniteGroup(LOOP_OF_ORDER_5, [1, 2])
        print("✅ Associativity check test passed")

    def test_non_latin_table_rejected(self):
        with self.assertRaises(SchemaError):
            FiniteGroup([[0, 1], [1, 1]], [1])


class FamilyTestCase(SimpleTestCase):
    def test_metacyclic_order_24_relations(self):
        """a^3 = b^8 = 1 and b a b^-1 = a^2"""
        group = metacyclic_group(3, 8, 2)
        a, b = group.gen_indices
        self.assertEqual(group.order, 24)
        self.assertEqual(group.power(a, 3), 0)
        self.assertEqual(group.power(b, 8), 0)
        self.assertEqual(group.conjugate(a, b), group.power(a, 2))
        self.assertEqual(group.exponent, 24)
        print("✅ Metacyclic order 24 test passed")

    def test_metacyclic_degenerate_is_cyclic(self):
        group = metacyclic_group(1, 7, 1)
        self.assertEqual(group.order, 7)
        self.assertTrue(group.is_abelian)

    def test_metacyclic_order_20(self):
        group = metacyclic_group(5, 4, 2)
        a, b = group.gen_indices
        self.assertEqual(group.order, 20)
        self.assertEqual(group.power(a, 5), 0)
        self.assertEqual(group.conjugate(a, b), group.power(a, 2))

    def test_metacyclic_bad_parameters(self):
        with self.assertRaises(BadParameters):
            metacyclic_group(7, 2, 2)
        with self.assertRaises(BadParameters):
            metacyclic_group(6, 2, 2)

    def test_nilpotent_gamma_has_order_32(self):
        gamma = nilpotent2_group(2, 4, [[2]])
        a, b = gamma.gen_indices
        self.assertEqual(gamma.order, 32)
        commutator = gamma.commutator(a, b)
        self.assertNotEqual(commutator, 0)
        self.assertEqual(gamma.mul(commutator, commutator), 0)
        self.assertIn(commutator, gamma.center)
        print("✅ Gamma order test passed")

    def test_nilpotent_small_cases(self):
        self.assertEqual(nilpotent2_group(1, 5).order, 5)
        self.assertEqual(nilpotent2_group(3, 2).order, 64)

    def test_nilpotent_rejects_malformed_quotient(self):
        with self.assertRaises(BadParameters):
            nilpotent2_group(2, 4, [[1, 2]])

    def test_type_ii_surface_group(self):
        """The printed surface-example relations close to a group of order 24"""
        group = type_ii_group(3, 4, 2, 1, 3)
        a, b, c = group.gen_indices
        self.assertEqual(group.order, 24)
        self.assertEqual(group.power(a, 3), 0)
        self.assertEqual(group.power(b, 4), 0)
        self.assertEqual(group.conjugate(a, b), group.power(a, 2))
        self.assertEqual(group.power(c, 2), group.power(b, 2))
        self.assertEqual(group.conjugate(a, c), a)
        self.assertEqual(group.conjugate(b, c), group.power(b, 3))

    def test_type_ii_bad_parameters(self):
        with self.assertRaises(BadParameters):
            type_ii_group(3, 3, 2, 1, 3)

    def test_abelian_product(self):
        group = abelian_group(2, 2)
        self.assertEqual(group.order, 4)
        self.assertEqual(group.exponent, 2)


class StructureTestCase(SimpleTestCase):
    def setUp(self):
        self.groups = [
            cyclic_group(6),
            permutation_group([[[0, 1]], [[0, 1, 2]]]),
            metacyclic_group(3, 8, 2),
            nilpotent2_group(2, 4, [[2]]),
            type_ii_group(3, 4, 2, 1, 3),
        ]

    def test_class_sizes(self):
        """Class sizes sum to the order and divide it"""
        for group in self.groups:
            classes = group.conjugacy_classes
            self.assertEqual(sum(classes.sizes), group.order)
            for size in classes.sizes:
                self.assertEqual(group.order % size, 0)
            for t, members in enumerate(classes.members):
                self.assertTrue(all(classes.class_of[x] == t for x in members))
        print("✅ Conjugacy class test passed")

    def test_is_redundant_in_z6(self):
        group = cyclic_group(6)
        self.assertFalse(is_redundant(group, [2, 3]))
        self.assertTrue(is_redundant(group, [2, 4]))
        self.assertTrue(is_redundant(group, [5, 0]))
        print("✅ Redundancy test passed")

    def test_is_redundant_ignores_order(self):
        group = metacyclic_group(3, 8, 2)
        for x in range(group.order):
            for y in range(group.order):
                self.assertEqual(is_redundant(group, [x, y]), is_redundant(group, [y, x]))

    def test_frattini_quotient_is_elementary(self):
        for group, expected in [(cyclic_group(4), 2), (nilpotent2_group(2, 4, [[2]]), 8), (abelian_group(2, 2), 1)]:
            frattini = frattini_subgroup_pgroup(group)
            self.assertEqual(len(frattini), expected)
            self.assertEqual(group.normal_closure(frattini), frattini)
            for x in range(group.order):
                self.assertIn(group.power(x, 2), frattini)

    def test_frattini_requires_pgroup(self):
        with self.assertRaises(NotAPGroup):
            frattini_subgroup_pgroup(cyclic_group(6))

    def test_power_and_element_order(self):
        group = metacyclic_group(3, 8, 2)
        for x in range(group.order):
            k = group.element_order(x)
            self.assertEqual(group.power(x, k), 0)
            self.assertEqual(group.power_map(x, -1), group.inverse(x))

    def test_labels_and_expressions(self):
        group = metacyclic_group(3, 8, 2)
        a, b = group.gen_indices
        self.assertEqual(group.label(0), "1")
        self.assertEqual(group.index_of("a"), a)
        self.assertEqual(group.index_of("a*b^-1"), group.mul(a, group.inverse(b)))
        for x in range(group.order):
            self.assertEqual(group.index_of(group.label(x)), x)
        with self.assertRaises(SchemaError):
            group.index_of("z")


class SpecTestCase(SimpleTestCase):
    def test_spec_round_trip_keeps_table(self):
        for group in [metacyclic_group(3, 8, 2), nilpotent2_group(2, 4, [[2]]), abelian_group(2, 3),
                      permutation_group([[[0, 1]], [[0, 1, 2]]])]:
            rebuilt = group_from_spec(group_to_spec(group))
            self.assertEqual(rebuilt.canonical_hash, group.canonical_hash)

    def test_table_spec(self):
        group = metacyclic_group(3, 8, 2)
        flat = group_from_table(group.table.reshape(-1).tolist(), group.order, group.gen_indices)
        self.assertEqual(match_generators(group, flat), list(range(group.order)))
        self.assertEqual(group_to_spec(flat)['kind'], 'table')

    def test_match_generators_detects_mismatch(self):
        self.assertIsNone(match_generators(metacyclic_group(1, 4, 1), abelian_group(2, 2)))
        self.assertIsNone(match_generators(cyclic_group(4), abelian_group(2, 2)))

    def test_match_generators_between_constructions(self):
        """Metacyclic closure and a permutation model of S3 agree generator by generator"""
        s3 = metacyclic_group(3, 2, 2)
        perms = permutation_group([[[0, 1, 2]], [[1, 2]]])
        image = match_generators(s3, perms)
        self.assertIsNotNone(image)
        self.assertEqual(sorted(image), list(range(6)))
