"""
Orbits of generating tuples under Nielsen moves and free-group automorphisms.

A homomorphism phi: F_n -> G is stored as the tuple (phi(a_1), ..., phi(a_n)).
Precomposing phi with an automorphism of F_n moves the tuple; the entries of
all tuples reachable this way are exactly the phi-images of primitive
elements. Searches run layer by layer over integer-encoded tuples with numpy
and keep predecessor links, so any visited tuple can be turned back into the
free basis that produced it.
"""

import logging
from collections import deque

import numpy as np
from django.conf import settings

from group_app.characters import dim_fixed_subspace
from group_app.exceptions import (
    BadParameters,
    ExhaustiveCheckFailed,
    NotAnAutomorphism,
    NotSurjective,
    SchemaError,
    StateBudgetExceeded,
    WitnessVerificationFailed,
)
from group_app.groups import frattini_subgroup_pgroup, is_redundant, pgroup_prime

from .words import Word, basis_words, compose_substitutions, is_identity_substitution

logger = logging.getLogger(__name__)

DENSE_STATE_LIMIT = 5 * 10 ** 7
MAX_ENCODED_STATES = 2 ** 62


class Homomorphism:
    """phi: F_rank -> target, given by the images of the free basis."""

    def __init__(self, target, images, rank=None, require_surjective=False):
        if not images:
            raise SchemaError("A homomorphism needs at least one generator image")
        if rank is not None and rank != len(images):
            raise SchemaError("Rank differs from the number of images", rank=rank, images=len(images))
        self.target = target
        self.images = [target.index_of(ref) for ref in images]
        self.rank = len(self.images)
        self.image_subgroup = target.subgroup_closure(self.images)
        self.surjective = len(self.image_subgroup) == target.order
        if require_surjective and not self.surjective:
            raise NotSurjective(images=self.images, order=target.order)

    def __repr__(self):
        labels = ", ".join(self.target.label(g) for g in self.images)
        return f"<Homomorphism F_{self.rank} -> {self.target.name or 'G'}: ({labels})>"

    def evaluate(self, word):
        return Word.coerce(word, self.rank).evaluate(self.target, self.images)

    def precompose(self, substitution):
        """phi o sigma for sigma given by the words sigma(a_i)."""
        return Homomorphism(self.target, [w.evaluate(self.target, self.images) for w in substitution])

    def image_labels(self):
        return [self.target.label(g) for g in self.images]


class OrbitResult:
    """
    Outcome of a primitive-image search. ``witnesses`` maps each attained
    element to a primitive word with that image (only when words were tracked).
    """

    def __init__(self, images, witnesses, visited, component_has_redundant, depth):
        self.images = images
        self.witnesses = witnesses
        self.visited = visited
        self.component_has_redundant = component_has_redundant
        self.depth = depth

    @property
    def has_identity(self):
        return 0 in self.images


# Moves

def extended_moves(rank):
    """
    The extended Nielsen moves in search order: for each i, each j != i and
    e = +1, -1 the right move g_i -> g_i g_j^e and the left move
    g_i -> g_j^e g_i; then every inversion; then every transposition.
    """
    moves = []
    for i in range(rank):
        for j in range(rank):
            if i == j:
                continue
            for e in (1, -1):
                moves.append(('right', i, j, e))
                moves.append(('left', i, j, e))
    moves += [('invert', i) for i in range(rank)]
    moves += [('swap', i, j) for i in range(rank) for j in range(i + 1, rank)]
    return moves


def apply_move_to_words(move, words):
    words = list(words)
    kind = move[0]
    if kind == 'swap':
        _, i, j = move
        words[i], words[j] = words[j], words[i]
    elif kind == 'invert':
        words[move[1]] = words[move[1]].inverse()
    else:
        _, i, j, e = move
        factor = words[j] ** e
        words[i] = words[i] * factor if kind == 'right' else factor * words[i]
    return words


def nielsen_substitutions(rank):
    """Each extended move as a (substitution, inverse substitution) pair of word lists."""
    basis = basis_words(rank)
    pairs = []
    for move in extended_moves(rank):
        forward = apply_move_to_words(move, basis)
        if move[0] in ('right', 'left'):
            kind, i, j, e = move
            backward = apply_move_to_words((kind, i, j, -e), basis)
        else:
            backward = forward
        pairs.append((forward, backward))
    return pairs


class Layer:
    def __init__(self, codes, parents, moves):
        self.codes = codes
        self.parents = parents
        self.moves = moves

    def __len__(self):
        return int(self.codes.size)


class TupleSearch:
    """
    Breadth-first search over G^n from ``start`` under a fixed list of moves.

    Tuples are encoded as base-|G| integers. Each layer stores, for every new
    tuple, the position of its parent in the previous layer and the move used;
    discovery order within a layer is (parent position, move index), which is
    the order of a plain queue-based BFS.
    """

    def __init__(self, group, start, moves=None, budget=None, substitutions=None):
        self.group = group
        self.rank = len(start)
        self.order = group.order
        total = self.order ** self.rank
        if total >= MAX_ENCODED_STATES:
            raise BadParameters("Tuple space too large to encode", order=self.order, rank=self.rank)
        self.total = total
        self.weights = np.array([self.order ** i for i in range(self.rank)], dtype=np.int64)
        self.budget = budget or getattr(settings, 'PHL_STATE_BUDGET', 10 ** 8)
        self.moves = moves if moves is not None else extended_moves(self.rank)
        self.substitutions = substitutions
        self.table = group.table
        self.inv = group.inv
        if total <= DENSE_STATE_LIMIT:
            self._seen = np.zeros(total, dtype=bool)
            self._visited = None
        else:
            self._seen = None
            self._visited = np.zeros(0, dtype=np.int64)
        start_code = np.array([self.encode(start)], dtype=np.int64)
        self.layers = [Layer(start_code, np.array([-1]), np.array([-1]))]
        self._mark(start_code)
        self.visited = 1

    @property
    def move_count(self):
        return len(self.substitutions) if self.substitutions is not None else len(self.moves)

    def encode(self, entries):
        return int(sum(int(x) * int(w) for x, w in zip(entries, self.weights)))

    def decode(self, codes):
        return (codes[None, :] // self.weights[:, None]) % self.order

    def _mark(self, codes):
        if self._seen is not None:
            self._seen[codes] = True
        else:
            self._visited = np.union1d(self._visited, codes)

    def _is_seen(self, codes):
        if self._seen is not None:
            return self._seen[codes]
        return np.isin(codes, self._visited)

    def _expand(self, codes):
        entries = self.decode(codes)
        w = self.weights
        candidates = np.empty((self.move_count, codes.size), dtype=np.int64)
        if self.substitutions is not None:
            for m, substitution in enumerate(self.substitutions):
                candidates[m] = self._substituted_codes(substitution, entries)
            return candidates.T.ravel()
        table, inv = self.table, self.inv
        for m, move in enumerate(self.moves):
            kind = move[0]
            if kind == 'swap':
                _, i, j = move
                candidates[m] = codes + (entries[j] - entries[i]) * (w[i] - w[j])
                continue
            i = move[1]
            if kind == 'invert':
                value = inv[entries[i]]
            else:
                other = entries[move[2]] if move[3] == 1 else inv[entries[move[2]]]
                value = table[entries[i], other] if kind == 'right' else table[other, entries[i]]
            candidates[m] = codes + (value - entries[i]) * w[i]
        return candidates.T.ravel()

    def _substituted_codes(self, substitution, entries):
        table, inv = self.table, self.inv
        code = np.zeros(entries.shape[1], dtype=np.int64)
        for k, word in enumerate(substitution):
            value = np.zeros(entries.shape[1], dtype=np.int64)
            for letter in word.letters:
                g = entries[letter - 1] if letter > 0 else inv[entries[-letter - 1]]
                value = table[value, g]
            code += value * self.weights[k]
        return code

    def step(self):
        """Compute and store the next layer; returns it (empty when the orbit is exhausted)."""
        frontier = self.layers[-1].codes
        candidates = self._expand(frontier)
        index = np.nonzero(~self._is_seen(candidates))[0]
        _, first = np.unique(candidates[index], return_index=True)
        index = index[np.sort(first)]
        codes = candidates[index]
        layer = Layer(codes, index // self.move_count, index % self.move_count)
        if len(layer):
            self._mark(codes)
            self.visited += len(layer)
            if self.visited > self.budget:
                logger.warning(f"Tuple search over {self.group!r} passed the state budget {self.budget}")
                raise StateBudgetExceeded(budget=self.budget, visited=self.visited)
            self.layers.append(layer)
        return layer

    def run(self, max_depth=None):
        while max_depth is None or len(self.layers) - 1 < max_depth:
            if not len(self.step()):
                return True
        return False

    def path(self, depth, position):
        """Move indices leading from the start tuple to layer ``depth``, position ``position``."""
        moves = []
        while depth > 0:
            layer = self.layers[depth]
            moves.append(int(layer.moves[position]))
            position = int(layer.parents[position])
            depth -= 1
        return moves[::-1]

    def words_at(self, depth, position):
        words = basis_words(self.rank)
        for m in self.path(depth, position):
            if self.substitutions is not None:
                words = compose_substitutions(self.substitutions[m], words)
            else:
                words = apply_move_to_words(self.moves[m], words)
        return words

    def entries(self, depth):
        return self.decode(self.layers[depth].codes)

    def all_entries(self):
        return np.concatenate([self.entries(d) for d in range(len(self.layers))], axis=1)


def _first_occurrences(search):
    """For each element appearing in some visited tuple: (depth, position, slot) of its first appearance."""
    found = {}
    for depth in range(len(search.layers)):
        entries = search.entries(depth)
        best = {}
        for slot in range(search.rank):
            values, first = np.unique(entries[slot], return_index=True)
            for value, position in zip(values.tolist(), first.tolist()):
                if value in found:
                    continue
                if value not in best or (position, slot) < best[value]:
                    best[value] = (position, slot)
        for value, (position, slot) in best.items():
            found[value] = (depth, position, slot)
    return found


def _verify_witness(phi, word, element):
    if not word or word.evaluate(phi.target, phi.images) != element:
        logger.error(f"Witness {word} does not map to {phi.target.label(element)} under {phi!r}")
        raise WitnessVerificationFailed(word=str(word), element=element)
    return word


def assert_images_closed(phi, images, what):
    group = phi.target
    for g in images:
        if group.inverse(g) not in images:
            raise ExhaustiveCheckFailed(f"{what} are not closed under inversion", element=g)
        for s in phi.images:
            if group.conjugate(g, s) not in images:
                raise ExhaustiveCheckFailed(f"{what} are not closed under conjugation", element=g, by=s)


def _component_has_redundant(phi, entries):
    group = phi.target
    if (entries == 0).any():
        return True
    if phi.rank == 1:
        return False
    if phi.rank == 2:
        cyclic = np.zeros((group.order, group.order), dtype=bool)
        for x in np.unique(entries).tolist():
            cyclic[x, list(group.subgroup_closure([x]))] = True
        return bool((cyclic[entries[1], entries[0]] | cyclic[entries[0], entries[1]]).any())
    canonical = np.unique(np.sort(entries, axis=0), axis=1)
    return any(is_redundant(group, column) for column in canonical.T.tolist())


def primitive_image_set(phi, track_words=False, budget=None, check_redundant=True):
    """All phi-images of primitive elements of F_n, by exhausting the extended Nielsen orbit."""
    search = TupleSearch(phi.target, phi.images, budget=budget)
    search.run()
    entries = search.all_entries()
    images = set(np.unique(entries).tolist())
    assert_images_closed(phi, images, "Primitive images")

    witnesses = {}
    if track_words:
        for element, (depth, position, slot) in sorted(_first_occurrences(search).items()):
            word = search.words_at(depth, position)[slot]
            witnesses[element] = _verify_witness(phi, word, element)

    redundant = _component_has_redundant(phi, entries) if check_redundant else None
    logger.info(f"Primitive images for {phi!r}: {len(images)} elements from {search.visited} tuples "
                f"(depth {len(search.layers) - 1})")
    return OrbitResult(images, witnesses, search.visited, redundant, len(search.layers) - 1)


def has_primitive_in_kernel(phi, budget=None):
    """(True, primitive word in ker phi) or (False, None); BFS stops at the first tuple containing 1."""
    for i, g in enumerate(phi.images):
        if g == 0:
            return True, Word.generator(i + 1)
    search = TupleSearch(phi.target, phi.images, budget=budget)
    while True:
        layer = search.step()
        if not len(layer):
            logger.info(f"No primitive in the kernel of {phi!r} ({search.visited} tuples)")
            return False, None
        hits = np.nonzero(search.decode(layer.codes) == 0)
        if hits[0].size:
            # first tuple in discovery order, then first slot
            position = int(hits[1].min())
            slot = int(hits[0][hits[1] == position].min())
            depth = len(search.layers) - 1
            word = search.words_at(depth, position)[slot]
            _verify_witness(phi, word, 0)
            logger.info(f"Primitive {word} in the kernel of {phi!r} at depth {depth}")
            return True, word


def irrpr_set(phi, table, images=None, budget=None):
    """Rows of ``table`` in which the image of some primitive element fixes a nonzero vector."""
    if images is None:
        images = primitive_image_set(phi, budget=budget, check_redundant=False).images
    class_of = table.class_of
    reps = {}
    for g in sorted(images):
        reps.setdefault(class_of[g], g)
    rows = []
    for i in range(len(table)):
        if any(dim_fixed_subspace(table, i, g) > 0 for g in reps.values()):
            rows.append(i)
    return rows


def frattini_basis_check(phi):
    """True iff the images of the basis form an F_p-basis of G/Phi(G)."""
    group = phi.target
    p = pgroup_prime(group)
    if p is None:
        return False
    frattini = frattini_subgroup_pgroup(group)
    index = group.order // len(frattini)
    dimension = 0
    while index > 1:
        index //= p
        dimension += 1
    spans = len(group.subgroup_closure(list(frattini) + phi.images)) == group.order
    return spans and phi.rank == dimension


def verify_automorphism(substitution, inverse, rank):
    for word in list(substitution) + list(inverse):
        if word.rank_needed() > rank:
            raise NotAnAutomorphism("Substitution uses letters beyond the rank", word=str(word))
    if len(substitution) != rank or len(inverse) != rank:
        raise NotAnAutomorphism("Substitution needs one word per generator", rank=rank)
    if not (is_identity_substitution(compose_substitutions(substitution, inverse))
            and is_identity_substitution(compose_substitutions(inverse, substitution))):
        raise NotAnAutomorphism(substitution=[str(w) for w in substitution],
                                inverse=[str(w) for w in inverse])


def automorphism_orbit_images(phi, autos, seeds, budget=None):
    """
    phi-images of sigma(s) for s in ``seeds`` and sigma in the group generated
    by ``autos`` (pairs of substitution and inverse substitution).
    """
    seeds = [Word.coerce(s, phi.rank) for s in seeds]
    substitutions = []
    for substitution, inverse in autos:
        substitution = [Word.coerce(w, phi.rank) for w in substitution]
        inverse = [Word.coerce(w, phi.rank) for w in inverse]
        verify_automorphism(substitution, inverse, phi.rank)
        substitutions += [substitution, inverse]

    search = TupleSearch(phi.target, phi.images, moves=[], budget=budget, substitutions=substitutions)
    if substitutions:
        search.run()
    group = phi.target
    images = set()
    for depth in range(len(search.layers)):
        for column in search.entries(depth).T.tolist():
            images.update(seed.evaluate(group, column) for seed in seeds)
    logger.info(f"Automorphism orbit of {phi!r}: {search.visited} tuples, {len(images)} seed images")
    return images


def iter_nielsen_bases(phi, max_depth, budget=None):
    return NielsenBasisWalk(phi, max_depth, budget)


class NielsenBasisWalk:
    """
    Layered BFS over the extended Nielsen orbit yielding (depth, entries, words):
    every visited tuple with a free basis mapping onto it. Words are kept for
    the current frontier only. ``truncated`` tells whether tuples remained
    beyond ``max_depth``.
    """

    def __init__(self, phi, max_depth, budget=None):
        self.phi = phi
        self.max_depth = max_depth
        self.search = TupleSearch(phi.target, phi.images, budget=budget)
        self.truncated = None

    def __iter__(self):
        search = self.search
        words = [basis_words(self.phi.rank)]
        yield 0, list(self.phi.images), words[0]
        depth = 0
        while True:
            if depth == self.max_depth:
                self.truncated = bool(len(search.step()))
                return
            layer = search.step()
            if not len(layer):
                self.truncated = False
                return
            depth += 1
            entries = search.decode(layer.codes).T.tolist()
            frontier = []
            for column, parent, move in zip(entries, layer.parents.tolist(), layer.moves.tolist()):
                basis = apply_move_to_words(search.moves[move], words[parent])
                frontier.append(basis)
                yield depth, column, basis
            words = frontier


def product_replacement_component(phi, budget=None):
    """The extended product replacement component of phi's tuple, as a set of tuples."""
    search = TupleSearch(phi.target, phi.images, budget=budget)
    search.run()
    return {tuple(column) for column in search.all_entries().T.tolist()}


def express_in_generators(phi, target, positions):
    """A word in the letters at ``positions`` (0-based) mapping to ``target``, or None."""
    group = phi.target
    letters = [pos + 1 for pos in positions] + [-(pos + 1) for pos in positions]
    parent = {0: None}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        if x == target:
            break
        for letter in letters:
            g = phi.images[letter - 1] if letter > 0 else group.inverse(phi.images[-letter - 1])
            y = group.mul(x, g)
            if y not in parent:
                parent[y] = (x, letter)
                queue.append(y)
    if target not in parent:
        return None
    letters_used = []
    x = target
    while parent[x] is not None:
        x, letter = parent[x]
        letters_used.append(letter)
    return Word(reversed(letters_used))
