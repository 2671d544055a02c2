"""
Finite groups as multiplication tables.

Elements are the integers 0..order-1 with the identity at 0. Constructors
build the table by closing a set of seed elements under a multiplication
rule; elements are numbered in breadth-first discovery order from the
identity, right-multiplying by the seeds in the order given.
"""

import hashlib
import logging
import math
import string
from collections import deque
from functools import cached_property

import numpy as np
from django.conf import settings
from sympy import factorint
from sympy.combinatorics import Permutation

from .exceptions import (
    BadParameters,
    ClosureBoundExceeded,
    NotAPGroup,
    NotAssociative,
    SchemaError,
)

logger = logging.getLogger(__name__)

GENERATOR_NAMES = string.ascii_lowercase


class ConjugacyClasses:
    """Class representatives (smallest index), sizes, members and the element -> class map."""

    def __init__(self, reps, members, class_of):
        self.reps = reps
        self.members = members
        self.sizes = [len(m) for m in members]
        self.class_of = class_of

    def __len__(self):
        return len(self.reps)

    def __iter__(self):
        return iter(zip(self.reps, self.sizes))


class FiniteGroup:
    """
    A finite group given by its multiplication table.

    ``table[x, y]`` is the index of x*y. ``gen_indices`` are the distinguished
    generators; ``gen_names`` name them in labels and expressions.
    """

    def __init__(self, table, gen_indices, gen_names=None, labels=None, name='', spec=None, verify=True):
        table = np.asarray(table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise SchemaError("Multiplication table must be a non-empty square array")
        self.table = table
        self.order = int(table.shape[0])
        self.identity = 0
        self.gen_indices = [int(g) for g in gen_indices]
        if gen_names is None:
            gen_names = [GENERATOR_NAMES[i] if i < len(GENERATOR_NAMES) else f"g{i}"
                         for i in range(len(self.gen_indices))]
        self.gen_names = list(gen_names)
        self._custom_labels = list(labels) if labels else None
        self.name = name
        self.spec = spec
        self._closures = {}

        if verify:
            self._check_table()
        self.inv = np.argmax(self.table == 0, axis=1)

        if verify:
            check_associativity(self.table)
            if len(self.subgroup_closure(self.gen_indices)) != self.order:
                raise BadParameters("Generators do not generate the group", order=self.order)

    def __repr__(self):
        return f"<FiniteGroup {self.name or 'unnamed'} order={self.order}>"

    def __len__(self):
        return self.order

    def _check_table(self):
        n = self.order
        if self.table.min() < 0 or self.table.max() >= n:
            raise SchemaError("Multiplication table entries out of range", order=n)
        expected = np.arange(n)
        if not (np.array_equal(self.table[0], expected) and np.array_equal(self.table[:, 0], expected)):
            raise SchemaError("Element 0 is not a two-sided identity")
        if not (np.sort(self.table, axis=1) == expected).all():
            raise SchemaError("Multiplication table rows are not permutations")
        if ((self.table == 0).sum(axis=1) != 1).any():
            raise SchemaError("Some element has no inverse")
        for g in self.gen_indices:
            if not 0 <= g < n:
                raise SchemaError("Generator index out of range", generator=g)

    # Fast access for pure-Python loops

    @cached_property
    def rows(self):
        return self.table.tolist()

    @cached_property
    def inv_list(self):
        return self.inv.tolist()

    def mul(self, x, y):
        return self.rows[x][y]

    def inverse(self, x):
        return self.inv_list[x]

    def conjugate(self, x, by):
        """by * x * by^-1"""
        return self.rows[self.rows[by][x]][self.inv_list[by]]

    def commutator(self, x, y):
        """x y x^-1 y^-1"""
        rows, inv = self.rows, self.inv_list
        return rows[rows[rows[x][y]][inv[x]]][inv[y]]

    # Orders and powers

    @cached_property
    def element_orders(self):
        idx = np.arange(self.order)
        orders = np.zeros(self.order, dtype=np.int64)
        current = idx.copy()
        k = 1
        while (orders == 0).any():
            done = (current == 0) & (orders == 0)
            orders[done] = k
            current = self.table[current, idx]
            k += 1
        return orders.tolist()

    def element_order(self, g):
        return self.element_orders[g]

    @cached_property
    def exponent(self):
        return math.lcm(*self.element_orders)

    def power(self, g, k):
        k %= self.element_order(g)
        result, base = 0, g
        rows = self.rows
        while k:
            if k & 1:
                result = rows[result][base]
            base = rows[base][base]
            k >>= 1
        return result

    def power_map(self, g, k):
        return self.power(g, k)

    # Structure

    @cached_property
    def conjugacy_classes(self):
        class_of = [-1] * self.order
        reps, members = [], []
        for x in range(self.order):
            if class_of[x] != -1:
                continue
            conj = np.unique(self.table[self.table[:, x], self.inv]).tolist()
            for y in conj:
                class_of[y] = len(reps)
            reps.append(x)
            members.append(conj)
        logger.debug(f"{self!r}: {len(reps)} conjugacy classes")
        return ConjugacyClasses(reps, members, class_of)

    def subgroup_closure(self, elements):
        """The subgroup generated by ``elements``, as a frozenset of indices."""
        gens = sorted({int(x) for x in elements} - {0})
        key = tuple(gens)
        cached = self._closures.get(key)
        if cached is not None:
            return cached
        rows = self.rows
        seen = {0}
        queue = deque([0])
        while queue:
            x = queue.popleft()
            row = rows[x]
            for s in gens:
                y = row[s]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        result = frozenset(seen)
        self._closures[key] = result
        return result

    def normal_closure(self, elements):
        subgroup = self.subgroup_closure(elements)
        while True:
            extra = {self.conjugate(x, g) for x in subgroup for g in self.gen_indices} - subgroup
            if not extra:
                return subgroup
            subgroup = self.subgroup_closure(set(subgroup) | extra)

    @cached_property
    def center(self):
        return frozenset(np.nonzero((self.table == self.table.T).all(axis=1))[0].tolist())

    @cached_property
    def is_abelian(self):
        return len(self.center) == self.order

    @cached_property
    def prime_factors(self):
        return factorint(self.order)

    def is_pgroup(self):
        return len(self.prime_factors) == 1

    # Names

    @cached_property
    def normal_forms(self):
        """Shortest generator words in breadth-first discovery order (tuples of generator positions)."""
        words = [None] * self.order
        words[0] = ()
        queue = deque([0])
        rows = self.rows
        while queue:
            x = queue.popleft()
            for pos, s in enumerate(self.gen_indices):
                y = rows[x][s]
                if words[y] is None:
                    words[y] = words[x] + (pos,)
                    queue.append(y)
        return words

    @cached_property
    def labels(self):
        if self._custom_labels:
            return self._custom_labels
        return [self._word_label(w) for w in self.normal_forms]

    def _word_label(self, word):
        if not word:
            return "1"
        parts = []
        for pos in word:
            if parts and parts[-1][0] == pos:
                parts[-1][1] += 1
            else:
                parts.append([pos, 1])
        return "*".join(self.gen_names[p] if e == 1 else f"{self.gen_names[p]}^{e}" for p, e in parts)

    def label(self, x):
        return self.labels[x]

    def index_of(self, ref):
        """Resolve an element given as an index, a label or a product expression like ``a*b^-1``."""
        if isinstance(ref, bool):
            raise SchemaError("Element reference must be an index or a label", ref=ref)
        if isinstance(ref, int):
            if not 0 <= ref < self.order:
                raise SchemaError("Element index out of range", ref=ref, order=self.order)
            return ref
        if not isinstance(ref, str):
            raise SchemaError("Element reference must be an index or a label", ref=ref)
        text = ref.replace(' ', '')
        if text in self._label_index:
            return self._label_index[text]
        result = 0
        for token in text.split('*'):
            name, _, exp = token.partition('^')
            if name == '1' and not exp:
                continue
            if name not in self.gen_names:
                raise SchemaError(f"Unknown generator '{name}' in element expression", ref=ref)
            try:
                k = int(exp) if exp else 1
            except ValueError:
                raise SchemaError(f"Bad exponent in element expression '{ref}'")
            result = self.rows[result][self.power(self.gen_indices[self.gen_names.index(name)], k)]
        return result

    @cached_property
    def _label_index(self):
        return {label: i for i, label in enumerate(self.labels)}

    @cached_property
    def canonical_hash(self):
        digest = hashlib.sha256()
        digest.update(f"{self.order}:{self.gen_indices}:".encode())
        digest.update(self.table.astype('<i8').tobytes())
        return digest.hexdigest()


def check_associativity(table, exhaustive_max=None, samples=None):
    """Exhaustive for small tables, random triples (fixed seed) above the cutoff."""
    if exhaustive_max is None:
        exhaustive_max = getattr(settings, 'PHL_ASSOCIATIVITY_EXHAUSTIVE_MAX', 200)
    if samples is None:
        samples = getattr(settings, 'PHL_ASSOCIATIVITY_SAMPLES', 10 ** 5)
    n = len(table)
    if n <= exhaustive_max:
        for a in range(n):
            left = table[table[a]]
            right = table[a][table]
            if not np.array_equal(left, right):
                b, c = np.argwhere(left != right)[0].tolist()
                raise NotAssociative(triple=(a, b, c))
        return
    rng = np.random.default_rng(0)
    a, b, c = rng.integers(0, n, size=(3, samples))
    left = table[table[a, b], c]
    right = table[a, table[b, c]]
    bad = np.nonzero(left != right)[0]
    if len(bad):
        i = bad[0]
        raise NotAssociative(triple=(int(a[i]), int(b[i]), int(c[i])))


def order_cap():
    """Largest group order whose multiplication table is materialised."""
    return getattr(settings, 'PHL_GROUP_ORDER_CAP', 5000)


def closure_from_generators(seeds, mul, identity, bound=None, gen_names=None, name='', spec=None):
    """
    Close ``seeds`` under ``mul`` and return the resulting FiniteGroup.

    ``seeds`` and ``identity`` may be any hashable objects; ``mul`` must be an
    associative rule on them. The table is filled column by column using
    x*(p*s) = (x*p)*s along the discovery tree, then checked.
    """
    if bound is None:
        bound = getattr(settings, 'PHL_CLOSURE_BOUND', 10 ** 6)
    cap = order_cap()
    seeds = list(seeds)
    elements = [identity]
    index = {identity: 0}
    parent = [(-1, -1)]
    right = []
    i = 0
    while i < len(elements):
        x = elements[i]
        row = []
        for pos, s in enumerate(seeds):
            y = mul(x, s)
            j = index.get(y)
            if j is None:
                if len(elements) >= bound:
                    raise ClosureBoundExceeded(bound=bound)
                if len(elements) >= cap:
                    raise BadParameters(f"Group {name or 'closure'} has more than {cap} elements", cap=cap)
                j = len(elements)
                index[y] = j
                elements.append(y)
                parent.append((i, pos))
            row.append(j)
        right.append(row)
        i += 1

    order = len(elements)
    right = np.asarray(right, dtype=np.int64).reshape(order, len(seeds))
    table = np.empty((order, order), dtype=np.int64)
    table[:, 0] = np.arange(order)
    for y in range(1, order):
        p, pos = parent[y]
        table[:, y] = right[table[:, p], pos]

    gen_indices = [index[s] for s in seeds]
    logger.info(f"Closure {name or 'group'}: {order} elements from {len(seeds)} seeds")
    return FiniteGroup(table, gen_indices, gen_names=gen_names, name=name, spec=spec)


def abelian_group(*moduli):
    if not moduli or any(int(m) < 1 for m in moduli):
        raise BadParameters("Moduli must be positive integers", moduli=moduli)
    moduli = [int(m) for m in moduli]
    r = len(moduli)
    zero = (0,) * r
    seeds = [tuple((1 % moduli[i]) if i == j else 0 for j in range(r)) for i in range(r)]

    def mul(x, y):
        return tuple((a + b) % m for a, b, m in zip(x, y, moduli))

    name = " x ".join(f"Z/{m}" for m in moduli)
    return closure_from_generators(seeds, mul, zero, name=name,
                                   spec={'kind': 'abelian', 'moduli': moduli})


def cyclic_group(m):
    return abelian_group(m)


def metacyclic_group(m, k, r):
    """<a, b | a^m = b^k = 1, b a b^-1 = a^r> as pairs (i, j) = a^i b^j."""
    m, k, r = int(m), int(k), int(r)
    if m < 1 or k < 1:
        raise BadParameters("Moduli must be positive", m=m, k=k)
    if math.gcd(r, m) != 1 or pow(r, k, m) != 1 % m:
        raise BadParameters("Need gcd(r, m) = 1 and r^k = 1 mod m", m=m, k=k, r=r)
    if m * k > order_cap():
        raise BadParameters(f"Order {m * k} exceeds the configured cap {order_cap()}", m=m, k=k)
    powers = [pow(r, j, m) for j in range(k)]

    def mul(x, y):
        return ((x[0] + powers[x[1]] * y[0]) % m, (x[1] + y[1]) % k)

    group = closure_from_generators(
        [(1 % m, 0), (0, 1 % k)], mul, (0, 0), gen_names=['a', 'b'],
        name=f"metacyclic({m},{k},{r})",
        spec={'kind': 'metacyclic', 'm': m, 'k': k, 'r': r},
    )
    if group.order != m * k:
        raise BadParameters("Closure order differs from m*k", order=group.order)
    return group


def type_ii_group(m, n, r, l, k):
    """
    <A, B, R | A^m = B^n = 1, B A B^-1 = A^r, R^2 = B^(n/2), R A R^-1 = A^l, R B R^-1 = B^k>
    with elements A^i B^j R^e.
    """
    m, n, r, l, k = (int(v) for v in (m, n, r, l, k))
    if m < 1 or n < 2 or n % 2:
        raise BadParameters("Need m >= 1 and n even", m=m, n=n)
    conditions = [
        math.gcd(r, m) == 1,
        math.gcd(l, m) == 1,
        pow(r, n, m) == 1 % m,
        pow(l, 2, m) == pow(r, n // 2, m),
        pow(k, 2, n) == 1 % n,
        k % 2 == 1,
        pow(r, k, m) == r % m,
    ]
    if not all(conditions):
        raise BadParameters("Parameters violate the type II relations", m=m, n=n, r=r, l=l, k=k)
    half = n // 2
    r_powers = [pow(r, j, m) for j in range(n)]
    l_powers = [1 % m, l % m]
    k_powers = [1, k % n]

    def mul(x, y):
        i, j, e = x
        i2, j2, e2 = y
        a = (i + i2 * l_powers[e] * r_powers[j]) % m
        b = j + j2 * k_powers[e]
        if e and e2:
            b += half
        return (a, b % n, e ^ e2)

    group = closure_from_generators(
        [(1 % m, 0, 0), (0, 1, 0), (0, 0, 1)], mul, (0, 0, 0), gen_names=['a', 'b', 'c'],
        name=f"type_ii({m},{n},{r},{l},{k})",
        spec={'kind': 'type_ii', 'm': m, 'n': n, 'r': r, 'l': l, 'k': k},
    )
    return group


def nilpotent2_group(rank, modulus, center_quotient=None):
    """
    Pairs (v, w) with v in (Z/m)^n and w in the exterior square modulo the
    subgroup spanned by ``center_quotient``. Product
    (v, w)(v', w') = (v + v', w + w' + sum_{i<j} v_i v'_j e_i^e_j), so the
    commutator of (v, 0) and (v', 0) is (0, v^v').
    """
    n, m = int(rank), int(modulus)
    if n < 1 or m < 2:
        raise BadParameters("Need rank >= 1 and modulus >= 2", rank=n, modulus=m)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    width = len(pairs)
    killed = []
    for vector in center_quotient or []:
        if not isinstance(vector, (list, tuple)) or len(vector) != width \
                or not all(isinstance(c, int) and not isinstance(c, bool) for c in vector):
            raise BadParameters(f"Center quotient vectors must have {width} integer entries", vector=vector)
        killed.append(tuple(c % m for c in vector))

    subgroup = {(0,) * width}
    frontier = list(subgroup)
    while frontier:
        nxt = []
        for h in frontier:
            for g in killed:
                s = tuple((a + b) % m for a, b in zip(h, g))
                if s not in subgroup:
                    subgroup.add(s)
                    nxt.append(s)
        frontier = nxt
    subgroup = sorted(subgroup)
    reduced = {}

    def reduce(w):
        rep = reduced.get(w)
        if rep is None:
            rep = min(tuple((a + b) % m for a, b in zip(w, h)) for h in subgroup)
            reduced[w] = rep
        return rep

    def mul(x, y):
        v, w = x
        v2, w2 = y
        cocycle = [v[i] * v2[j] for i, j in pairs]
        return (tuple((a + b) % m for a, b in zip(v, v2)),
                reduce(tuple((a + b + c) % m for a, b, c in zip(w, w2, cocycle))))

    zero_v = (0,) * n
    zero_w = (0,) * width
    seeds = [(tuple(1 if t == i else 0 for t in range(n)), zero_w) for i in range(n)]
    group = closure_from_generators(
        seeds, mul, (zero_v, zero_w), name=f"nilpotent2({n},{m})",
        spec={'kind': 'nilpotent2', 'rank': n, 'modulus': m,
              'center_quotient': [list(v) for v in killed]},
    )
    expected = m ** n * m ** width // len(subgroup)
    if group.order != expected:
        raise BadParameters("Closure order differs from the extension order", order=group.order, expected=expected)
    return group


def permutation_group(generators, degree=None):
    """Generators as cycle lists over 0..degree-1, e.g. [[0, 1]] or [[0, 1, 2]]."""
    if not generators:
        raise BadParameters("Permutation group needs at least one generator")
    try:
        if degree is None:
            degree = 1 + max((p for gen in generators for cycle in gen for p in cycle), default=0)
        perms = [Permutation([list(c) for c in gen], size=degree) for gen in generators]
    except (TypeError, ValueError) as e:
        raise SchemaError(f"Invalid permutation generators: {e}")
    identity = Permutation(list(range(degree)))

    def mul(x, y):
        return x * y

    return closure_from_generators(
        perms, mul, identity, name=f"perm(degree {degree})",
        spec={'kind': 'permutation', 'degree': degree,
              'generators': [[list(c) for c in gen] for gen in generators]},
    )


def group_from_table(flat_table, order, generators, labels=None, gen_names=None):
    if order > order_cap():
        raise BadParameters(f"Order {order} exceeds the configured cap {order_cap()}", order=order)
    try:
        table = np.asarray(flat_table, dtype=np.int64).reshape(order, order)
    except ValueError:
        raise SchemaError("Flat table length must equal order squared", order=order)
    group = FiniteGroup(table, generators, gen_names=gen_names, labels=labels, name=f"table({order})")
    group.spec = group_to_spec(group, force_table=True)
    return group


def group_from_spec(spec):
    """Build a group from a validated group spec dict (see ``serializer.GroupSpecSerializer``)."""
    kind = spec['kind']
    if kind == 'metacyclic':
        return metacyclic_group(spec['m'], spec['k'], spec['r'])
    if kind == 'nilpotent2':
        return nilpotent2_group(spec['rank'], spec['modulus'], spec.get('center_quotient'))
    if kind == 'type_ii':
        return type_ii_group(spec['m'], spec['n'], spec['r'], spec['l'], spec['k'])
    if kind == 'abelian':
        return abelian_group(*spec['moduli'])
    if kind == 'permutation':
        return permutation_group(spec['generators'], spec.get('degree'))
    if kind == 'table':
        return group_from_table(spec['table'], spec['order'], spec['generators'],
                                labels=spec.get('labels'), gen_names=spec.get('gen_names'))
    raise SchemaError(f"Unknown group kind '{kind}'")


def group_to_spec(group, force_table=False):
    if group.spec is not None and not force_table:
        return group.spec
    spec = {
        'kind': 'table',
        'order': group.order,
        'table': group.table.reshape(-1).tolist(),
        'generators': list(group.gen_indices),
        'gen_names': list(group.gen_names),
    }
    if group._custom_labels:
        spec['labels'] = list(group._custom_labels)
    return spec


def is_redundant(group, entries):
    """True iff some entry lies in the subgroup generated by the remaining ones."""
    entries = list(entries)
    for i, g in enumerate(entries):
        if g in group.subgroup_closure(entries[:i] + entries[i + 1:]):
            return True
    return False


def pgroup_prime(group):
    factors = group.prime_factors
    if group.order == 1:
        return None
    if len(factors) != 1:
        raise NotAPGroup(order=group.order)
    return next(iter(factors))


def frattini_subgroup_pgroup(group):
    """Normal closure of the generators' p-th powers and pairwise commutators."""
    p = pgroup_prime(group)
    if p is None:
        return frozenset([0])
    gens = group.gen_indices
    seeds = [group.power(g, p) for g in gens]
    seeds += [group.commutator(x, y) for i, x in enumerate(gens) for y in gens[i + 1:]]
    return group.normal_closure(seeds)


def match_generators(group, other):
    """
    Generator-respecting isomorphism: the map sending the i-th generator of
    ``group`` to the i-th generator of ``other``, as an index list, or None.
    """
    if group.order != other.order or len(group.gen_indices) != len(other.gen_indices):
        return None
    image = [-1] * group.order
    image[0] = 0
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for s, t in zip(group.gen_indices, other.gen_indices):
            y = group.rows[x][s]
            target = other.rows[image[x]][t]
            if image[y] == -1:
                image[y] = target
                queue.append(y)
            elif image[y] != target:
                return None
    if len(set(image)) != group.order:
        return None
    return image
