"""
Covers of the rose and their first homology as a representation of the deck group.

The rose has one vertex and one loop per free generator. The cover attached
to phi: F_n -> G has the cosets as vertices and an edge v -> v*phi(a_i) for
every vertex v and generator i, numbered e = v*n + i. Deck transformations
act by left translation on vertices, so the elevations of a loop at the
different vertices over the base point form one orbit of the deck group.
"""

import logging
from collections import deque
from fractions import Fraction

import numpy as np
from django.conf import settings

from group_app.characters import dim_fixed_subspace, induced_trivial_character
from group_app.cyclotomic import CycloNumber
from group_app.exceptions import ChevalleyWeilViolation, ExhaustiveCheckFailed, NotSurjective
from group_app.linalg import EchelonBasis, modular_rank, rank_and_nullspace, rational_rank

from .orbits import irrpr_set, iter_nielsen_bases, primitive_image_set
from .words import Word

logger = logging.getLogger(__name__)


class CoverGraph:
    """
    ``cosets[v]`` is the smallest element of the coset of vertex v, ``heads[v][i]``
    the head of edge v*n + i and ``tails[v][i]`` the tail of the edge with
    label i ending at v. Vertex 0 is the base vertex.
    """

    def __init__(self, phi, subgroup_generator=None):
        group = phi.target
        self.phi = phi
        self.rank = phi.rank
        self.subgroup_generator = subgroup_generator
        if subgroup_generator is None:
            subgroup = [0]
        else:
            subgroup = sorted(group.subgroup_closure([subgroup_generator]))
        self.subgroup = subgroup
        # right coset Hx is named by its smallest element
        coset_of = group.table[np.asarray(subgroup)].min(axis=0)

        numbering = {}
        cosets = []
        for root in [0] + coset_of.tolist():
            root = int(coset_of[root])
            if root in numbering:
                continue
            numbering[root] = len(cosets)
            cosets.append(root)
            queue = deque([root])
            while queue:
                x = queue.popleft()
                for g in phi.images:
                    y = int(coset_of[group.mul(x, g)])
                    if y not in numbering:
                        numbering[y] = len(cosets)
                        cosets.append(y)
                        queue.append(y)
        self.cosets = cosets
        self.vertex_of_coset = numbering
        self.vertex_of_element = [numbering[int(c)] for c in coset_of]
        self.heads = [[self.vertex_of_element[group.mul(x, g)] for g in phi.images] for x in cosets]
        self.tails = [[None] * self.rank for _ in cosets]
        for v, row in enumerate(self.heads):
            for i, w in enumerate(row):
                self.tails[w][i] = v
        self.components = self._count_components()

    def __repr__(self):
        return f"<CoverGraph {self.vertex_count} vertices, {self.edge_count} edges>"

    @property
    def vertex_count(self):
        return len(self.cosets)

    @property
    def edge_count(self):
        return len(self.cosets) * self.rank

    @property
    def base_vertex(self):
        return 0

    @property
    def is_regular(self):
        return self.subgroup_generator is None or len(self.subgroup) == 1

    @property
    def betti_number(self):
        return self.edge_count - self.vertex_count + self.components

    def edge(self, v, i):
        return v * self.rank + i

    def edges(self):
        """(tail, head, generator) sorted by (tail, generator)."""
        return [(v, w, i) for v, row in enumerate(self.heads) for i, w in enumerate(row)]

    def _count_components(self):
        seen = [False] * self.vertex_count
        count = 0
        for root in range(self.vertex_count):
            if seen[root]:
                continue
            count += 1
            seen[root] = True
            stack = [root]
            while stack:
                v = stack.pop()
                for w in self.heads[v] + self.tails[v]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
        return count

    def spanning_tree(self):
        """BFS tree from the base vertex along outgoing edges in (vertex, generator) order."""
        parent_edge = [None] * self.vertex_count
        parent_edge[0] = -1
        order = [0]
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for i, w in enumerate(self.heads[v]):
                if parent_edge[w] is None:
                    parent_edge[w] = self.edge(v, i)
                    order.append(w)
                    queue.append(w)
        return parent_edge, order

    def walk(self, word, start):
        """Edge chain of the path reading ``word`` from ``start``, and the end vertex."""
        chain = np.zeros(self.edge_count, dtype=np.int64)
        v = start
        for letter in word.letters:
            i = abs(letter) - 1
            if letter > 0:
                chain[self.edge(v, i)] += 1
                v = self.heads[v][i]
            else:
                u = self.tails[v][i]
                chain[self.edge(u, i)] -= 1
                v = u
        return chain, v

    def boundary(self, chain):
        """Boundary of an edge chain as a vector over vertices (head minus tail)."""
        result = np.zeros(self.vertex_count, dtype=np.int64)
        for v, w, i in self.edges():
            c = chain[self.edge(v, i)]
            if c:
                result[w] += c
                result[v] -= c
        return result


def build_cover(phi, subgroup=None):
    """The regular cover of phi, or the intermediate cover by the cyclic subgroup <subgroup>."""
    cover = CoverGraph(phi, subgroup)
    logger.info(f"Built {cover!r} for {phi!r}" + (f" modulo <{subgroup}>" if subgroup is not None else ""))
    return cover


class HomologySpace:
    """
    H_1 of a regular cover in the basis of fundamental cycles of the non-tree
    edges. ``cycles`` is the E x dim integer matrix of basis cycles in edge
    coordinates; ``deck_action[h]`` is the dim x dim matrix of h acting on
    column vectors of cycle coordinates.
    """

    def __init__(self, cover, tree_edges, basis_edges, cycles, deck_action, character):
        self.cover = cover
        self.tree = tree_edges
        self.basis = basis_edges
        self.dim = len(basis_edges)
        self.cycles = cycles
        self.deck_action = deck_action
        self.character = character

    def coordinates(self, chain):
        return chain[self.basis]

    def to_chain(self, coordinates):
        return self.cycles @ np.asarray(coordinates, dtype=np.int64)

    def translate(self, h, coordinates):
        return self.deck_action[h] @ np.asarray(coordinates, dtype=np.int64)


def _fundamental_cycles(cover):
    parent_edge, order = cover.spanning_tree()
    if any(e is None for e in parent_edge):
        raise NotSurjective("Cover is disconnected", vertices=cover.vertex_count)
    edge_count = cover.edge_count
    # tree path from the base vertex to each vertex, in edge coordinates
    paths = np.zeros((cover.vertex_count, edge_count), dtype=np.int64)
    for w in order[1:]:
        e = parent_edge[w]
        v = e // cover.rank
        paths[w] = paths[v]
        paths[w, e] += 1
    tree_edges = sorted(e for e in parent_edge if e >= 0)
    tree = set(tree_edges)
    basis_edges = [e for e in range(edge_count) if e not in tree]
    cycles = np.zeros((edge_count, len(basis_edges)), dtype=np.int64)
    for j, e in enumerate(basis_edges):
        v, i = divmod(e, cover.rank)
        w = cover.heads[v][i]
        cycles[:, j] = paths[v] - paths[w]
        cycles[e, j] += 1
    return tree_edges, basis_edges, cycles


def homology_action(cover, phi=None):
    """H_1 of the regular cover with the deck action, checked against (n-1) * regular + trivial."""
    phi = phi or cover.phi
    if not cover.is_regular:
        raise NotSurjective("Deck action needs the regular cover")
    if not phi.surjective:
        raise NotSurjective(images=phi.images, order=phi.target.order)
    group = phi.target
    n, order = phi.rank, group.order
    tree_edges, basis_edges, cycles = _fundamental_cycles(cover)
    basis_rows = np.asarray(basis_edges, dtype=np.int64)
    vertex_elements = np.asarray(cover.cosets, dtype=np.int64)
    vertex_of_element = np.asarray(cover.vertex_of_element, dtype=np.int64)
    generators = basis_rows % n

    deck_action = []
    for h in range(order):
        # h maps edge (x, i) to (h x, i); pull back the non-tree rows through h^-1
        source_vertices = vertex_of_element[group.table[group.inverse(h), vertex_elements[basis_rows // n]]]
        deck_action.append(cycles[source_vertices * n + generators])

    dim = len(basis_edges)
    expected_identity = (n - 1) * order + 1
    for h in range(order):
        trace = int(np.trace(deck_action[h]))
        expected = expected_identity if h == 0 else 1
        if trace != expected:
            logger.error(f"Deck trace of {group.label(h)} is {trace}, expected {expected}")
            raise ChevalleyWeilViolation(element=h, trace=trace, expected=expected)
    if dim != expected_identity:
        raise ChevalleyWeilViolation("Homology rank differs from (n-1)|G| + 1", dim=dim)
    for h in range(order):
        for s in group.gen_indices:
            if not np.array_equal(deck_action[h] @ deck_action[s], deck_action[group.mul(h, s)]):
                raise ChevalleyWeilViolation("Deck matrices do not compose like the group", element=h, generator=s)

    classes = group.conjugacy_classes
    character = [CycloNumber.rational(int(np.trace(deck_action[rep]))) for rep in classes.reps]
    logger.info(f"H_1 of {cover!r}: dim {dim}, deck action verified")
    return HomologySpace(cover, tree_edges, basis_edges, cycles, deck_action, character)


def chevalley_weil_multiplicities(table, rank):
    return [(rank - 1) * d + (1 if i == 0 else 0) for i, d in enumerate(table.dims)]


def elevation_chain(cover, word, start=0):
    """Edge chain of the closed lift of the smallest power of ``word`` that lifts, and that power."""
    word = Word.coerce(word, cover.rank).require_nonempty()
    chain = np.zeros(cover.edge_count, dtype=np.int64)
    v, k = start, 0
    while True:
        step, v = cover.walk(word, v)
        chain += step
        k += 1
        if v == start:
            return chain, k


def elevation_class(cover, word, start=0, space=None):
    """Coordinates in the cycle basis of the elevation of ``word`` at ``start``."""
    chain, _ = elevation_chain(cover, word, start)
    if space is not None:
        return space.coordinates(chain)
    parent_edge, _ = cover.spanning_tree()
    tree = {e for e in parent_edge if e is not None and e >= 0}
    return chain[[e for e in range(cover.edge_count) if e not in tree]]


class SubrepSpan:
    """Bracket on primitive homology: multiplicities of the accumulated span and of the containment bound."""

    def __init__(self, basis, lower_mult, upper_mult, full_mult, dims, irrpr_rows, budget, truncated,
                 words_seen, orbit_checks):
        self.basis = basis
        self.rank = basis.rank
        self.lower_mult = lower_mult
        self.upper_mult = upper_mult
        self.full_mult = full_mult
        self.dims = dims
        self.irrpr_rows = irrpr_rows
        self.budget = budget
        self.truncated = truncated
        self.words_seen = words_seen
        self.orbit_checks = orbit_checks

    @property
    def generators_matrix(self):
        return self.basis.basis()

    @property
    def determined(self):
        return self.lower_mult == self.upper_mult

    @property
    def upper_dim(self):
        return sum(m * d for m, d in zip(self.upper_mult, self.dims))


def span_character(space, basis, table):
    """Character of an invariant span, per class, from restricted traces on its echelon basis."""
    return [CycloNumber.rational(basis.restricted_trace(space.deck_action[rep])) for rep, _ in table.classes]


def orbit_character_check(space, coordinates, image, table):
    """
    The translates of one elevation class are the deck group permuting the
    cosets of <image>: check they are distinct, linearly independent, and
    that their permutation character is Ind_<image>^G(triv), which is then
    the character of their span.
    """
    group = space.cover.phi.target
    translates = {}
    for h in range(group.order):
        key = tuple(space.translate(h, coordinates).tolist())
        translates.setdefault(key, h)
    expected_count = group.order // group.element_order(image)
    if len(translates) != expected_count:
        raise ExhaustiveCheckFailed("Elevation class has the wrong number of translates",
                                    image=image, translates=len(translates), expected=expected_count)
    rows = [list(key) for key in translates]
    if modular_rank(rows) != len(rows) and rational_rank(rows) != len(rows):
        raise ExhaustiveCheckFailed("Translates of an elevation class are linearly dependent", image=image)
    fixed = []
    for rep, _ in table.classes:
        count = sum(1 for key in translates if tuple(space.translate(rep, key).tolist()) == key)
        fixed.append(CycloNumber.rational(count))
    if fixed != induced_trivial_character(group, image):
        raise ExhaustiveCheckFailed("Orbit span character differs from the induced character", image=image)
    reciprocity = [dim_fixed_subspace(table, i, image) for i in range(len(table))]
    if table.decompose(fixed) != reciprocity:
        raise ExhaustiveCheckFailed("Orbit span fails Frobenius reciprocity", image=image)
    return True


def kernel_lift_words(phi, words, position, max_length):
    """
    Primitive words w*u for a free basis ``words`` whose entry u at ``position``
    maps to 1. The w are the loops of a spanning tree of the Cayley graph on the
    images of the other entries, spelled in those entries; each w*u is an
    entry of the basis with u replaced by w*u, len(w) Nielsen moves away.
    Returns the words with len(w) <= max_length, in order of length, and
    whether any were cut.
    """
    group = phi.target
    others = [j for j in range(len(words)) if j != position]
    images = [words[j].evaluate(group, phi.images) for j in others]
    path = {0: Word()}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for j, g in enumerate(images):
            y = group.mul(x, g)
            if y not in path:
                path[y] = path[x] * Word.generator(j + 1)
                queue.append(y)
    substitution = [words[j] for j in others]
    loops = []
    for x, prefix in path.items():
        for j, g in enumerate(images):
            loop = prefix * Word.generator(j + 1) * path[group.mul(x, g)].inverse()
            if loop:
                loops.append(loop)
    loops.sort(key=lambda w: (len(w), w.letters))
    kept = [loop.substitute(substitution) * words[position] for loop in loops if len(loop) <= max_length]
    return kept, len(kept) < len(loops)


def primitive_homology_span(phi, table, word_budget=None, space=None, budget=None, check_orbits=True):
    """
    Lower and upper multiplicities for primitive homology. The span grows by
    whole deck orbits of elevation classes of primitive words: the entries of
    every basis in the extended Nielsen orbit up to ``word_budget`` moves, and
    once a basis has an entry mapping to 1, the kernel lifts of
    ``kernel_lift_words`` that fit in the remaining moves.
    """
    if word_budget is None:
        word_budget = getattr(settings, 'PHL_WORD_BUDGET', 12)
    if space is None:
        space = homology_action(build_cover(phi), phi)
    group = phi.target
    n = phi.rank
    dims = table.dims

    orbit = primitive_image_set(phi, budget=budget, check_redundant=False)
    irr = irrpr_set(phi, table, images=orbit.images)
    upper = [(n - 1) * d if i in irr else 0 for i, d in enumerate(dims)]
    upper[0] += 1
    full = chevalley_weil_multiplicities(table, n)
    upper_dim = sum(m * d for m, d in zip(upper, dims))

    basis = EchelonBasis(space.dim)
    seen = set()
    checked = set()
    orbit_checks = 0

    def absorb(word, element):
        nonlocal orbit_checks
        if word in seen:
            return
        seen.add(word)
        coordinates = elevation_class(space.cover, word, space=space)
        if check_orbits and tuple(coordinates.tolist()) not in checked:
            orbit_character_check(space, coordinates, element, table)
            checked.update(tuple(space.translate(h, coordinates).tolist()) for h in range(group.order))
            orbit_checks += 1
        if not basis.contains(coordinates):
            for h in range(group.order):
                basis.add(space.translate(h, coordinates))

    kernel_basis = None
    walk = iter_nielsen_bases(phi, word_budget, budget=budget)
    for depth, entries, words in walk:
        for element, word in zip(entries, words):
            absorb(word, element)
        if kernel_basis is None and n > 1 and 0 in entries:
            kernel_basis = (depth, list(words), entries.index(0))
        if basis.rank == upper_dim:
            logger.info(f"Primitive span reached the upper bound at depth {depth}")
            break

    lifts_cut = False
    if basis.rank < upper_dim and kernel_basis is not None:
        depth, words, position = kernel_basis
        lifts, lifts_cut = kernel_lift_words(phi, words, position, word_budget - depth)
        logger.info(f"Adding {len(lifts)} kernel lifts of {words[position]} found at depth {depth}")
        for word in lifts:
            absorb(word, 0)
            if basis.rank == upper_dim:
                break

    character = span_character(space, basis, table)
    lower = table.decompose(character)
    if any(lo > up for lo, up in zip(lower, upper)):
        raise ExhaustiveCheckFailed("Primitive span exceeds the containment bound", lower=lower, upper=upper)
    if basis.rank != sum(m * d for m, d in zip(lower, dims)):
        raise ExhaustiveCheckFailed("Span rank differs from its isotypic decomposition", rank=basis.rank)
    truncated = (bool(walk.truncated) or lifts_cut) and basis.rank < upper_dim
    if lower != upper:
        logger.warning(f"Primitive homology of {phi!r} undetermined at word budget {word_budget}: "
                       f"lower {lower}, upper {upper}")
    return SubrepSpan(basis, lower, upper, full, dims, irr, word_budget, truncated, len(seen), orbit_checks)


def isotypic_multiplicities_by_projector(space, table, vectors):
    """
    Multiplicities of span(vectors) through the isotypic projectors
    (dim/|G|) sum_g conj(chi(g)) rho(g); class sums keep the images integral.
    """
    group = space.cover.phi.target
    class_sums = [sum(space.deck_action[g] for g in members).astype(object)
                  for members in group.conjugacy_classes.members]
    # class sums applied to each vector: images[v][t][k]
    images = [[class_sum @ np.asarray([Fraction(x) for x in v], dtype=object) for class_sum in class_sums]
              for v in vectors]
    multiplicities = []
    for i, row in enumerate(table.chars):
        scale = Fraction(table.dims[i], group.order)
        weights = [value.conjugate() * scale for value in row]
        projected = [
            [sum((w * Fraction(image[k]) for w, image in zip(weights, per_class) if image[k]),
                 CycloNumber.rational(0))
             for k in range(space.dim)]
            for per_class in images
        ]
        rank, _ = rank_and_nullspace(projected) if projected else (0, [])
        if rank % table.dims[i]:
            raise ExhaustiveCheckFailed("Isotypic rank is not a multiple of the degree", row=i, rank=rank)
        multiplicities.append(rank // table.dims[i])
    return multiplicities


def quotient_fixed_check(phi, g, space=None):
    """dim H_1(Y)^<g> against the Betti number of the quotient cover Y/<g>, computed independently."""
    if space is None:
        space = homology_action(build_cover(phi), phi)
    shifted = space.deck_action[g] - np.eye(space.dim, dtype=np.int64)
    fixed_dim = space.dim - rational_rank(shifted.tolist())
    quotient = build_cover(phi, g)
    quotient_rank = quotient.betti_number
    report = {
        'element': phi.target.label(g),
        'fixed_dim': fixed_dim,
        'quotient_rank': quotient_rank,
        'quotient_vertices': quotient.vertex_count,
        'ok': fixed_dim == quotient_rank,
    }
    if not report['ok']:
        logger.error(f"Transfer check failed for {phi!r} at {phi.target.label(g)}: {fixed_dim} != {quotient_rank}")
        raise ExhaustiveCheckFailed("Fixed homology differs from the quotient's homology", **report)
    return report
