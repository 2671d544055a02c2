"""
Words in a free group F_n.

Letters are signed generator numbers in Tietze form: i stands for a_i and
-i for its inverse (1 <= i <= n). In text, generator i is the i-th lower
case letter and upper case is its inverse, so "aBc" is a_1 a_2^-1 a_3.
"""

import string

from group_app.exceptions import EmptyWord, SchemaError

LETTERS = string.ascii_lowercase


class Word:
    """A freely reduced word; immutable and hashable."""

    __slots__ = ('letters',)

    def __init__(self, letters=()):
        reduced = []
        for letter in letters:
            letter = int(letter)
            if letter == 0:
                raise SchemaError("Word letters must be nonzero")
            if reduced and reduced[-1] == -letter:
                reduced.pop()
            else:
                reduced.append(letter)
        self.letters = tuple(reduced)

    @classmethod
    def generator(cls, i, power=1):
        """a_i^power with i 1-based."""
        letter = i if power > 0 else -i
        return cls([letter] * abs(power))

    @classmethod
    def from_string(cls, text, rank=None):
        text = text.strip()
        if text in ('', '1'):
            return cls()
        letters = []
        for ch in text:
            if ch in ' *':
                continue
            i = LETTERS.find(ch.lower()) + 1
            if i == 0 or (rank is not None and i > rank):
                raise SchemaError(f"Unknown letter '{ch}' in word '{text}'", rank=rank)
            letters.append(i if ch.islower() else -i)
        return cls(letters)

    @classmethod
    def coerce(cls, value, rank=None):
        if isinstance(value, Word):
            return value
        if isinstance(value, str):
            return cls.from_string(value, rank)
        if isinstance(value, (list, tuple)):
            if rank is not None and any(abs(int(x)) > rank for x in value):
                raise SchemaError("Word letter exceeds the rank", word=list(value), rank=rank)
            return cls(value)
        raise SchemaError("Words are letter strings or lists of signed generator numbers", word=value)

    def __len__(self):
        return len(self.letters)

    def __bool__(self):
        return bool(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __mul__(self, other):
        return Word(self.letters + other.letters)

    def inverse(self):
        return Word(-x for x in reversed(self.letters))

    def __invert__(self):
        return self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        return Word(self.letters * k)

    def conjugate(self, by):
        return by * self * by.inverse()

    def cyclic_reduction(self):
        letters = list(self.letters)
        while len(letters) > 1 and letters[0] == -letters[-1]:
            letters = letters[1:-1]
        return Word(letters)

    def require_nonempty(self):
        if not self.letters:
            raise EmptyWord()
        return self

    def rank_needed(self):
        return max((abs(x) for x in self.letters), default=0)

    def evaluate(self, group, images):
        """phi(self) for phi sending a_i to ``images[i-1]``."""
        rows, inv = group.rows, group.inv_list
        x = 0
        for letter in self.letters:
            g = images[letter - 1] if letter > 0 else inv[images[-letter - 1]]
            x = rows[x][g]
        return x

    def substitute(self, images):
        """Image under the endomorphism a_i -> images[i-1] (a list of Words)."""
        result = []
        for letter in self.letters:
            word = images[abs(letter) - 1]
            result.extend(word.letters if letter > 0 else word.inverse().letters)
        return Word(result)

    def __str__(self):
        if not self.letters:
            return "1"
        return "".join(LETTERS[x - 1] if x > 0 else LETTERS[-x - 1].upper() for x in self.letters)

    def __repr__(self):
        return f"Word('{self}')"


def commutator(u, v):
    return u * v * u.inverse() * v.inverse()


def basis_words(rank):
    return [Word.generator(i) for i in range(1, rank + 1)]


def compose_substitutions(first, second):
    """The substitution doing ``first`` then ``second``: a_i -> second applied to first[i]."""
    return [word.substitute(second) for word in first]


def is_identity_substitution(images):
    return all(word == Word.generator(i + 1) for i, word in enumerate(images))
