import json
import os
import tempfile
from fractions import Fraction

from django.test import SimpleTestCase

from group_app.characters import (
    canonical_row_order,
    character_table,
    dim_fixed_subspace,
    dixon_prime,
    induced_trivial_character,
    load_table,
    save_table,
)
from group_app.cyclotomic import CycloNumber
from group_app.exceptions import OrthogonalityError, SchemaError, UsageError
from group_app.groups import (
    abelian_group,
    cyclic_group,
    group_to_spec,
    metacyclic_group,
    nilpotent2_group,
    permutation_group,
    type_ii_group,
)


def s3():
    return permutation_group([[[0, 1]], [[0, 1, 2]]])


class CharacterTableTestCase(SimpleTestCase):
    def test_z2(self):
        table = character_table(cyclic_group(2))
        self.assertEqual(table.chars, [[1, 1], [1, -1]])
        print("✅ Z/2 character table test passed")

    def test_s3(self):
        table = character_table(s3())
        self.assertEqual(len(table), 3)
        self.assertEqual(table.dims, [1, 1, 2])

    def test_metacyclic_order_24(self):
        group = metacyclic_group(3, 8, 2)
        table = character_table(group)
        self.assertEqual(sum(d * d for d in table.dims), 24)
        self.assertEqual(len(table), len(group.conjugacy_classes))
        self.assertTrue(table.verify())

    def test_trivial_row_first(self):
        for group in [cyclic_group(5), nilpotent2_group(2, 4, [[2]]), type_ii_group(3, 4, 2, 1, 3)]:
            table = character_table(group)
            self.assertTrue(all(v.is_one() for v in table.chars[0]))
            self.assertEqual(table.dims, sorted(table.dims))

    def test_values_are_integral(self):
        table = character_table(nilpotent2_group(2, 4, [[2]]))
        for row in table.chars:
            for value in row:
                self.assertTrue(value.is_integral())
                self.assertEqual(4 % value.conductor, 0)

    def test_dixon_prime(self):
        p = dixon_prime(24, 24)
        self.assertEqual(p % 24, 1)
        self.assertGreater(p, 2 * 24 ** 0.5)
        self.assertGreater(dixon_prime(1, 1), 2)

    def test_deterministic(self):
        group = metacyclic_group(5, 4, 2)
        self.assertEqual(character_table(group).to_dict(group_to_spec(group)),
                         character_table(metacyclic_group(5, 4, 2)).to_dict(group_to_spec(group)))

    def test_decompose_regular_character(self):
        group = metacyclic_group(3, 8, 2)
        table = character_table(group)
        regular = [group.order if rep == 0 else 0 for rep, _ in table.classes]
        self.assertEqual(table.decompose(regular), table.dims)


class FixedSubspaceTestCase(SimpleTestCase):
    def test_trivial_row(self):
        group = metacyclic_group(3, 8, 2)
        table = character_table(group)
        for g in range(group.order):
            self.assertEqual(dim_fixed_subspace(table, 0, g), 1)

    def test_sign_of_z2(self):
        table = character_table(cyclic_group(2))
        self.assertEqual(dim_fixed_subspace(table, 1, 1), 0)

    def test_standard_rep_of_s3_at_three_cycle(self):
        group = s3()
        table = character_table(group)
        three_cycle = next(x for x in range(group.order) if group.element_order(x) == 3)
        transposition = next(x for x in range(group.order) if group.element_order(x) == 2)
        self.assertEqual(dim_fixed_subspace(table, 2, three_cycle), 0)
        self.assertEqual(dim_fixed_subspace(table, 2, transposition), 1)

    def test_regular_fixed_dimension(self):
        """sum over rows of dim Fix * degree is |G| / ord(g)"""
        for group in [s3(), metacyclic_group(3, 8, 2), nilpotent2_group(2, 4, [[2]]),
                      type_ii_group(3, 4, 2, 1, 3), abelian_group(2, 6)]:
            table = character_table(group)
            for g in range(group.order):
                total = sum(dim_fixed_subspace(table, i, g) * d for i, d in enumerate(table.dims))
                self.assertEqual(total, group.order // group.element_order(g))
        print("✅ Regular fixed dimension test passed")


class InducedCharacterTestCase(SimpleTestCase):
    def test_identity_gives_regular(self):
        group = s3()
        values = induced_trivial_character(group, 0)
        self.assertEqual(values[0], 6)
        self.assertTrue(all(v == 0 for v in values[1:]))

    def test_z4_order_two(self):
        group = cyclic_group(4)
        self.assertEqual(group.conjugacy_classes.reps, [0, 1, 2, 3])
        self.assertEqual(induced_trivial_character(group, 2), [2, 0, 2, 0])

    def test_frobenius_reciprocity(self):
        for group in [s3(), metacyclic_group(3, 8, 2), nilpotent2_group(2, 4, [[2]])]:
            table = character_table(group)
            for g in range(group.order):
                induced = induced_trivial_character(group, g)
                self.assertEqual(table.inner_product(induced, table.chars[0]), 1)
                self.assertEqual(table.decompose(induced),
                                 [dim_fixed_subspace(table, i, g) for i in range(len(table))])


class TableFileTestCase(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.mkdtemp()

    def path(self, name):
        return os.path.join(self.tmp, name)

    def test_round_trip(self):
        group = cyclic_group(2)
        table = character_table(group)
        save_table(table, self.path('z2.json'), group_to_spec(group))
        self.assertEqual(load_table(self.path('z2.json')), table)
        print("✅ Table round trip test passed")

    def test_corrupted_row_rejected(self):
        group = cyclic_group(2)
        table = character_table(group)
        data = table.to_dict(group_to_spec(group))
        data['chars'][1][1] = CycloNumber.rational(1).to_dict()
        with open(self.path('bad.json'), 'w') as f:
            json.dump(data, f)
        with self.assertRaises(OrthogonalityError):
            load_table(self.path('bad.json'))

    def test_irrational_degree_rejected(self):
        group = cyclic_group(3)
        data = character_table(group).to_dict(group_to_spec(group))
        for degree in (CycloNumber.zeta(3), CycloNumber.rational(Fraction(1, 2))):
            data['chars'][1][0] = degree.to_dict()
            with open(self.path('degree.json'), 'w') as f:
                json.dump(data, f)
            with self.assertRaises(OrthogonalityError):
                load_table(self.path('degree.json'))

    def test_unwritable_path(self):
        group = cyclic_group(2)
        with self.assertRaises(UsageError):
            save_table(character_table(group), self.path(os.path.join('missing', 'z2.json')), group_to_spec(group))
        with self.assertRaises(UsageError):
            load_table(self.path('nowhere.json'))

    def test_missing_fields_rejected(self):
        with open(self.path('empty.json'), 'w') as f:
            json.dump({'group': {'kind': 'abelian', 'moduli': [2]}}, f)
        with self.assertRaises(SchemaError):
            load_table(self.path('empty.json'))

    def test_bad_group_spec_rejected(self):
        with open(self.path('spec.json'), 'w') as f:
            json.dump({'group': {'kind': 'metacyclic', 'm': 3}, 'classes': [], 'chars': []}, f)
        with self.assertRaises(SchemaError):
            load_table(self.path('spec.json'))

    def test_hand_written_s3(self):
        """Rows listed by hand in a different order load and match the computed table"""
        group = s3()
        by_order = {1: (1, 1, 2), 2: (1, -1, 0), 3: (1, 1, -1)}
        classes = [[rep, size] for rep, size in group.conjugacy_classes]
        values = [by_order[group.element_order(rep)] for rep, _ in classes]
        chars = [[CycloNumber.rational(v[row]).to_dict() for v in values] for row in (2, 1, 0)]
        with open(self.path('s3.json'), 'w') as f:
            json.dump({'group': group_to_spec(group), 'classes': classes, 'chars': chars}, f)
        loaded = load_table(self.path('s3.json'))
        self.assertEqual(canonical_row_order(loaded), canonical_row_order(character_table(group)))
