from django.test import SimpleTestCase

from group_app.exceptions import EmptyWord, SchemaError
from group_app.groups import cyclic_group, metacyclic_group
from homology_app.words import Word, basis_words, commutator, compose_substitutions, is_identity_substitution


class WordTestCase(SimpleTestCase):
    def test_free_reduction(self):
        self.assertEqual(Word([1, 2, -2, -1, 3]), Word([3]))
        self.assertEqual(str(Word.from_string("aBbA")), "1")
        self.assertFalse(Word.from_string("aA"))
        print("✅ Free reduction test passed")

    def test_string_round_trip_and_letters(self):
        word = Word.from_string("aBc", rank=3)
        self.assertEqual(word.letters, (1, -2, 3))
        self.assertEqual(str(word), "aBc")
        self.assertEqual(Word.from_string("1"), Word())

    def test_letter_beyond_rank(self):
        with self.assertRaises(SchemaError):
            Word.from_string("abd", rank=3)
        with self.assertRaises(SchemaError):
            Word.coerce([1, 4], rank=3)
        with self.assertRaises(SchemaError):
            Word([0])

    def test_inverse_power_conjugate(self):
        a, b = Word.generator(1), Word.generator(2)
        self.assertEqual(str((a * b).inverse()), "BA")
        self.assertEqual(str(a ** -3), "AAA")
        self.assertEqual(str(a.conjugate(b)), "baB")
        self.assertEqual(str(commutator(a, b)), "abAB")

    def test_cyclic_reduction(self):
        self.assertEqual(str(Word.from_string("bacB").cyclic_reduction()), "ac")
        self.assertEqual(str(Word.from_string("a").cyclic_reduction()), "a")

    def test_require_nonempty(self):
        with self.assertRaises(EmptyWord):
            Word.from_string("abBA").require_nonempty()

    def test_evaluate(self):
        group = cyclic_group(6)
        # a -> 2, b -> 3
        self.assertEqual(Word.from_string("ab").evaluate(group, [2, 3]), 5)
        self.assertEqual(Word.from_string("aaa").evaluate(group, [2, 3]), 0)
        self.assertEqual(Word.from_string("B").evaluate(group, [2, 3]), 3)

    def test_evaluate_nonabelian(self):
        group = metacyclic_group(3, 8, 2)
        a, b = group.gen_indices
        self.assertEqual(Word.from_string("baB").evaluate(group, [a, b]), group.power(a, 2))
        print("✅ Word evaluation test passed")


class SubstitutionTestCase(SimpleTestCase):
    def test_substitute(self):
        images = [Word.from_string("ab"), Word.from_string("b")]
        self.assertEqual(str(Word.from_string("aB").substitute(images)), "a")
        self.assertEqual(str(Word.from_string("A").substitute(images)), "BA")

    def test_compose_with_inverse_is_identity(self):
        forward = [Word.from_string("a"), Word.from_string("ba")]
        backward = [Word.from_string("a"), Word.from_string("bA")]
        self.assertTrue(is_identity_substitution(compose_substitutions(forward, backward)))
        self.assertTrue(is_identity_substitution(compose_substitutions(backward, forward)))
        self.assertFalse(is_identity_substitution(forward))

    def test_composition_order(self):
        first = [Word.from_string("ab"), Word.from_string("b")]
        second = [Word.from_string("a"), Word.from_string("ab")]
        # a -> ab -> a(ab)
        self.assertEqual(str(compose_substitutions(first, second)[0]), "aab")
        self.assertEqual(basis_words(2), [Word.generator(1), Word.generator(2)])
