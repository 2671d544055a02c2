"""
Worked constructions with machine-checkable reports.

* ``torus_cover_verify``: the mod-2 homology cover of the once-holed torus,
  its deck action on (Z/p)^5 and the classification of vectors that can be
  components of lifts of nonseparating simple closed curves.
* ``gamma_example_verify``: a 2-step nilpotent quotient of F_2 of order 32
  with a non-faithful 2-dimensional representation in which no primitive
  element has a fixed vector.
* ``sphere_catalog_search``: primitive elements in kernels of surjections
  onto small groups that act freely on spheres.
"""

import logging
import math

import numpy as np
from joblib import Parallel, delayed
from sympy import factorint

from group_app.characters import character_table
from group_app.cyclotomic import CycloNumber
from group_app.exceptions import BadParameters, ExhaustiveCheckFailed, StateBudgetExceeded
from group_app.groups import group_from_spec, is_redundant, nilpotent2_group, type_ii_group
from group_app.linalg import CycloMatrix, modular_rank

from .orbits import Homomorphism, express_in_generators, has_primitive_in_kernel, irrpr_set, primitive_image_set
from .words import Word, commutator

logger = logging.getLogger(__name__)


# Torus cover

TORUS_BASIS = ['a1', 'a2', 'b1', 'b2', 'delta']

TORUS_ALPHA = np.array([
    [1, 0, 0, 0, 1],
    [0, 1, 0, 0, -1],
    [0, 0, 0, 1, 0],
    [0, 0, 1, 0, 0],
    [0, 0, 0, 0, -1],
], dtype=np.int64)

TORUS_BETA = np.array([
    [0, 1, 0, 0, 0],
    [1, 0, 0, 0, 0],
    [0, 0, 1, 0, -1],
    [0, 0, 0, 1, 1],
    [0, 0, 0, 0, -1],
], dtype=np.int64)

TORUS_FAMILIES = ['row1_row2', 'row1_row3', 'row1_row4']

RANK_TWO_COUNTEREXAMPLE = "metacyclic(3,8,2)"


class TorusCoverModel:
    """Deck transformations of the mod-2 homology cover acting on H_1 with Z/p coefficients."""

    def __init__(self, p):
        p = int(p)
        if p < 3 or p % 2 == 0 or any(p % q == 0 for q in range(3, math.isqrt(p) + 1, 2)):
            raise BadParameters("p must be an odd prime", p=p)
        self.p = p
        self.alpha = TORUS_ALPHA % p
        self.beta = TORUS_BETA % p

    def matrix_identities(self):
        p = self.p
        eye = np.eye(5, dtype=np.int64)
        return {
            'alpha_squared': bool(((self.alpha @ self.alpha) % p == eye).all()),
            'beta_squared': bool(((self.beta @ self.beta) % p == eye).all()),
            'commute': bool(((self.alpha @ self.beta) % p == (self.beta @ self.alpha) % p).all()),
        }

    def vectors(self):
        """All of (Z/p)^5 as rows (r1, r2, s1, s2, d)."""
        grid = np.indices((self.p,) * 5).reshape(5, -1).T
        return grid.astype(np.int64)

    def orbit(self, x):
        """Rows x, alpha x, beta x, alpha beta x for row vectors x."""
        p = self.p
        ax = x @ self.alpha.T % p
        bx = x @ self.beta.T % p
        abx = bx @ self.alpha.T % p
        return x, ax, bx, abx

    @staticmethod
    def rho_exponent(x):
        r1, r2, s1, s2, d = x.T
        return r1 - r2 + s1 - s2 + d

    def families(self, x):
        """Boolean masks of the three closed-form families, in the order of ``TORUS_FAMILIES``."""
        p = self.p
        r1, r2, s1, s2, d = x.T
        zero = d == 0
        row12 = zero & (s1 == s2) & (r1 != r2) & ~((s1 == 0) & ((r1 + r2) % p == 0))
        row13 = zero & (r1 == r2) & (s1 != s2) & ~((r1 == 0) & ((s1 + s2) % p == 0))
        row14 = (~zero & (r1 == (r2 - d) % p) & (s1 == (s2 + d) % p)
                 & ((d != (-2 * r1) % p) | (d != (2 * s1) % p)))
        return row12, row13, row14


def torus_cover_verify(p):
    """
    Exhaustive check over (Z/p)^5: the orbit condition (x fixed by one of
    alpha, beta, alpha beta with a 2-dimensional orbit span) agrees with the
    closed-form families, and every qualifying x has a nonzero exponent in
    the character z -> zeta_p^(r1 - r2 + s1 - s2 + d).
    """
    model = TorusCoverModel(p)
    identities = model.matrix_identities()
    if not all(identities.values()):
        raise ExhaustiveCheckFailed("Deck matrices do not give a (Z/2)^2 action", p=p, **identities)

    x = model.vectors()
    rows = model.orbit(x)
    equal = [(rows[0] == other).all(axis=1) for other in rows[1:]]
    candidates = np.nonzero(equal[0] | equal[1] | equal[2])[0]
    span_two = np.zeros(len(x), dtype=bool)
    for i in candidates.tolist():
        span_two[i] = modular_rank([row[i].tolist() for row in rows], model.p) == 2

    counts = {}
    qualifying = np.zeros(len(x), dtype=bool)
    for name, eq, family in zip(TORUS_FAMILIES, equal, model.families(x)):
        condition = eq & span_two
        mismatch = np.nonzero(condition != family)[0]
        if mismatch.size:
            bad = x[mismatch[0]].tolist()
            logger.error(f"Family {name} disagrees with the orbit condition at {bad} (p={p})")
            raise ExhaustiveCheckFailed(f"Family {name} disagrees with the orbit condition", x=bad, p=p)
        counts[name] = int(family.sum())
        qualifying |= condition

    exponent = model.rho_exponent(x) % model.p
    fixed = np.nonzero(qualifying & (exponent == 0))[0]
    if fixed.size:
        bad = x[fixed[0]].tolist()
        logger.error(f"Qualifying vector {bad} acts trivially (p={p})")
        raise ExhaustiveCheckFailed("A qualifying vector acts as the identity", x=bad, p=p)

    logger.info(f"Torus cover p={p}: {int(qualifying.sum())} qualifying vectors of {len(x)}")
    return {
        'p': model.p,
        'basis': TORUS_BASIS,
        'vectors': len(x),
        'matrix_identities': identities,
        'families': counts,
        'qualifying': int(qualifying.sum()),
        'trivially_acting_qualifying': 0,
        'ok': True,
    }


# Nilpotent quotient with a non-faithful representation

GAMMA_RHO = {
    'a': [[CycloNumber.zeta(4), 0], [0, -CycloNumber.zeta(4)]],
    'b': [[0, 1], [-1, 0]],
}


def gamma_group():
    """Mod-4 2-step nilpotent quotient of F_2 with its centre cut down to Z/2; order 32."""
    return nilpotent2_group(2, 4, center_quotient=[[2]])


def representation_by_closure(group, generator_matrices):
    """
    Matrices for every element, extending the generator matrices along the
    Cayley graph; raises if two paths to the same element disagree.
    """
    gens = group.gen_indices
    matrices = [None] * group.order
    matrices[0] = CycloMatrix.identity(generator_matrices[0].nrows)
    queue = [0]
    for x in queue:
        for s, m in zip(gens, generator_matrices):
            y = group.mul(x, s)
            product = matrices[x] @ m
            if matrices[y] is None:
                matrices[y] = product
                queue.append(y)
            elif matrices[y] != product:
                raise ExhaustiveCheckFailed("Generator matrices do not define a representation",
                                            element=group.label(y))
    return matrices


def gamma_example_verify(table=None, budget=None):
    group = gamma_group()
    phi = Homomorphism(group, list(group.gen_indices), require_surjective=True)
    rho = representation_by_closure(group, [CycloMatrix(GAMMA_RHO['a']), CycloMatrix(GAMMA_RHO['b'])])
    eye = CycloMatrix.identity(2)

    orders_divide_four = all((rho[s] @ rho[s] @ rho[s] @ rho[s]).is_identity() for s in group.gen_indices)
    result = primitive_image_set(phi, budget=budget)
    eigenvalue_one = sorted(g for g in result.images if (rho[g] - eye).determinant().is_zero())

    a, b = Word.generator(1), Word.generator(2)
    witness = a ** 2 * commutator(a, b)
    g = phi.evaluate(witness)
    commutator_image = rho[phi.evaluate(commutator(a, b))]

    if table is None:
        table = character_table(group)
    traces = [rho[rep].rows[0][0] + rho[rep].rows[1][1] for rep, _ in table.classes]
    rho_row = next((i for i, row in enumerate(table.chars) if row == traces), None)
    rows = irrpr_set(phi, table, images=result.images)

    checks = {
        'order_32': group.order == 32,
        'generator_orders_divide_4': orders_divide_four,
        'identity_not_primitive_image': not result.has_identity,
        'no_eigenvalue_one': not eigenvalue_one,
        'witness_nontrivial': g != 0,
        'rho_kills_witness': rho[g].is_identity(),
        'commutator_is_minus_identity': commutator_image == CycloMatrix([[-1, 0], [0, -1]]),
        'rho_irreducible_row_found': rho_row is not None,
        'rho_row_outside_irrpr': rho_row is not None and rho_row not in rows,
    }
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        logger.error(f"Nilpotent example failed: {failed}")
        raise ExhaustiveCheckFailed("Nilpotent example assertions failed", failed=failed,
                                    eigenvalue_one=[group.label(x) for x in eigenvalue_one])
    return {
        'group': group.name,
        'order': group.order,
        'primitive_images': len(result.images),
        'witness': str(witness),
        'witness_image': group.label(g),
        'rho_row': rho_row,
        'irrpr_rows': rows,
        'checks': checks,
        'ok': True,
    }


# Sphere groups

def type_i_catalog(max_order):
    """Parameters (m, k, r) of the metacyclic groups of order m*k <= max_order that act freely on spheres."""
    catalog = []
    for m in range(1, max_order + 1):
        for k in range(1, max_order // m + 1):
            if math.gcd(m, k) != 1:
                continue
            for r in range(1, max(m, 2)):
                if math.gcd((r - 1) * k, m) != 1 or pow(r, k, m) != 1 % m:
                    continue
                d = _multiplicative_order(r, m)
                # every prime dividing d must divide k / d
                if all((k // d) % q == 0 for q in factorint(d)):
                    catalog.append((m, k, r))
    return catalog


def _multiplicative_order(r, m):
    d, x = 1, r % m
    while x != 1 % m:
        x = x * r % m
        d += 1
    return d


def sphere_catalog(max_order):
    """Group specs of the sweep: the type I family plus the type II example when it fits."""
    specs = [{'kind': 'metacyclic', 'm': m, 'k': k, 'r': r} for m, k, r in type_i_catalog(max_order)]
    if max_order >= 24:
        specs.append({'kind': 'type_ii', 'm': 3, 'n': 4, 'r': 2, 'l': 1, 'k': 3})
    return specs


def canonical_surjections(group, rank):
    """
    Generating tuples up to simultaneous conjugation and reordering: sorted
    index tuples whose first entry is a conjugacy class representative.
    Yields (tuple, bulk) where a prefix that already generates G stands for
    ``bulk`` redundant completions; otherwise bulk is 1.
    """
    order = group.order
    reps = group.conjugacy_classes.reps

    def extend(prefix, start):
        closure = group.subgroup_closure(prefix)
        remaining = rank - len(prefix)
        if len(closure) == order and remaining:
            yield tuple(prefix), math.comb(order - start + remaining - 1, remaining)
            return
        if not remaining:
            if len(closure) == order:
                yield tuple(prefix), 1
            return
        for x in range(start, order):
            if remaining == 1 and x in closure:
                continue
            yield from extend(prefix + [x], x)

    for c in reps:
        yield from extend([c], c)


def _redundant_witness(phi):
    """a_i w^-1 for the first entry lying in the span of the others; verified to be in the kernel."""
    for i in range(phi.rank):
        others = [j for j in range(phi.rank) if j != i]
        w = express_in_generators(phi, phi.images[i], others)
        if w is not None:
            word = Word.generator(i + 1) * w.inverse()
            if phi.evaluate(word) != 0:
                raise ExhaustiveCheckFailed("Redundancy witness is not in the kernel", word=str(word))
            return word
    return None


def sweep_group(spec, rank, budget=None, witness_samples=3):
    """Kernel-primitive verdicts for every canonical surjection onto one catalog group."""
    group = group_from_spec(spec)
    entry = {
        'group': group.name,
        'order': group.order,
        'tuples': 0,
        'redundant': 0,
        'searched': 0,
        'counterexamples': [],
        'budget_exceeded': [],
        'witnesses': [],
    }
    conjugation_checked = False
    for entries, bulk in canonical_surjections(group, rank):
        entry['tuples'] += bulk
        if len(entries) < rank or is_redundant(group, entries):
            entry['redundant'] += bulk
            if len(entries) == rank and len(entry['witnesses']) < witness_samples:
                word = _redundant_witness(Homomorphism(group, list(entries)))
                entry['witnesses'].append({'images': [group.label(g) for g in entries], 'word': str(word)})
            continue
        entry['searched'] += 1
        labels = [group.label(g) for g in entries]
        phi = Homomorphism(group, list(entries))
        try:
            found, _ = has_primitive_in_kernel(phi, budget=budget)
            if not conjugation_checked:
                s = group.gen_indices[-1]
                twin = Homomorphism(group, [group.conjugate(g, s) for g in entries])
                if has_primitive_in_kernel(twin, budget=budget)[0] != found:
                    raise ExhaustiveCheckFailed("Verdict changes under conjugation", group=group.name, images=labels)
                conjugation_checked = True
        except StateBudgetExceeded:
            entry['budget_exceeded'].append(labels)
            continue
        if not found:
            entry['counterexamples'].append(labels)
    logger.debug(f"Sweep {group.name} rank {rank}: {entry['tuples']} tuples, {entry['searched']} searched")
    return entry


def sphere_catalog_search(max_order, rank, jobs=1, budget=None):
    """
    Runs the kernel-primitive search over the sphere-group catalog. At rank 3
    every surjection must have a primitive element in its kernel; at rank 2
    the order-24 group metacyclic(3, 8, 2) must show up as a counterexample.
    """
    if rank not in (2, 3):
        raise BadParameters("Sphere search runs at rank 2 or 3", rank=rank)
    specs = sphere_catalog(max_order)
    logger.info(f"Sphere search: {len(specs)} groups up to order {max_order}, rank {rank}, {jobs} jobs")
    entries = Parallel(n_jobs=jobs)(delayed(sweep_group)(spec, rank, budget) for spec in specs)

    counterexamples = [e for e in entries if e['counterexamples']]
    if rank == 3:
        ok = not counterexamples
    else:
        ok = max_order < 24 or any(e['group'] == RANK_TWO_COUNTEREXAMPLE for e in counterexamples)
    if not ok:
        logger.error(f"Sphere search at rank {rank} failed its expectation")
    return {
        'max_order': max_order,
        'rank': rank,
        'groups': len(entries),
        'tuples': sum(e['tuples'] for e in entries),
        'searched': sum(e['searched'] for e in entries),
        'counterexample_groups': [e['group'] for e in counterexamples],
        'budget_exceeded': sum(len(e['budget_exceeded']) for e in entries),
        'entries': entries,
        'ok': ok,
    }


# Nilpotent quotients

def nilpotent_irrpr_suite(cases, rank=3):
    """
    Irrpr of the generator surjection onto each nilpotent2(rank, m) quotient;
    ``cases`` lists (modulus, center_quotient) pairs.
    """
    results = []
    for modulus, center_quotient in cases:
        group = nilpotent2_group(rank, modulus, center_quotient)
        phi = Homomorphism(group, list(group.gen_indices), require_surjective=True)
        table = character_table(group)
        rows = irrpr_set(phi, table)
        results.append({
            'group': group.name,
            'order': group.order,
            'irrpr_rows': len(rows),
            'rows': len(table),
            'all_rows': len(rows) == len(table),
        })
    return {'cases': results, 'ok': all(r['all_rows'] for r in results)}


def sigma12_group():
    return type_ii_group(3, 4, 2, 1, 3)
