"""
Exact character tables by Dixon's method.

Class multiplication coefficients are diagonalised simultaneously over F_p
with p = 1 mod exp(G) and p > 2 sqrt|G|. Each common eigenvector gives one
irreducible character mod p; character values are lifted to Q(zeta_e) from
the multiplicities of the e-th roots of unity among the eigenvalues of g,
which are small non-negative integers.
"""

import json
import logging
import math
from fractions import Fraction

import numpy as np
from django.conf import settings
from sympy import nextprime, primitive_root

from .cyclotomic import CycloNumber
from .exceptions import BadParameters, InternalNonInteger, OrthogonalityError, PrimeSearchFailed, SchemaError, \
    UsageError
from .groups import order_cap
from .linalg import modular_eigenvalues, modular_nullspace, modular_rref

logger = logging.getLogger(__name__)


class CharacterTable:
    """
    Irreducible characters of ``group``. ``chars[i][t]`` is the value of the
    i-th character on class t; class 0 is the identity class and row 0 the
    trivial character.
    """

    def __init__(self, group, chars, conductor=None):
        classes = group.conjugacy_classes
        self.group = group
        self.class_data = classes
        self.classes = list(zip(classes.reps, classes.sizes))
        self.class_of = classes.class_of
        self.chars = [[CycloNumber.coerce(v) for v in row] for row in chars]
        self.conductor = conductor or group.exponent
        self.dims = [int(row[0].rational_value()) for row in self.chars]

    def __len__(self):
        return len(self.chars)

    def __eq__(self, other):
        if not isinstance(other, CharacterTable):
            return NotImplemented
        return self.classes == other.classes and self.chars == other.chars

    __hash__ = None

    def value(self, row, g):
        return self.chars[row][self.class_of[g]]

    def inner_product(self, f, g):
        """(1/|G|) sum over classes of size * f * conj(g)."""
        total = CycloNumber.rational(0)
        for (_, size), a, b in zip(self.classes, f, g):
            a = CycloNumber.coerce(a)
            b = CycloNumber.coerce(b)
            if a and b:
                total = total + a * b.conjugate() * size
        return total / self.group.order

    def decompose(self, class_function):
        """Multiplicities of each irreducible in a character given per class."""
        result = []
        for i, row in enumerate(self.chars):
            m = self.inner_product(class_function, row)
            result.append(_exact_integer(m, f"multiplicity of row {i}"))
        return result

    def verify(self):
        """Both orthogonality relations and the degree sum, exactly."""
        order = self.group.order
        k = len(self.classes)
        if len(self.chars) != k:
            raise OrthogonalityError("Number of characters differs from number of classes",
                                     rows=len(self.chars), classes=k)
        if sum(d * d for d in self.dims) != order:
            raise OrthogonalityError("Squared degrees do not sum to the group order")
        for row in self.chars:
            for value in row:
                if not value.is_integral() or self.group.exponent % value.conductor:
                    raise OrthogonalityError("Character value is not an algebraic integer of the right conductor")
        for i in range(k):
            for j in range(i, k):
                expected = 1 if i == j else 0
                if self.inner_product(self.chars[i], self.chars[j]) != expected:
                    raise OrthogonalityError("Row orthogonality fails", rows=(i, j))
        columns = list(zip(*self.chars))
        for s in range(k):
            for t in range(s, k):
                total = CycloNumber.rational(0)
                for a, b in zip(columns[s], columns[t]):
                    total = total + a * b.conjugate()
                expected = Fraction(order, self.classes[s][1]) if s == t else 0
                if total != expected:
                    raise OrthogonalityError("Column orthogonality fails", classes=(s, t))
        if getattr(settings, 'PHL_FLOAT_SHADOW', False):
            self.float_shadow_check()
        return True

    def float_shadow_check(self):
        """Floating-point replay of row orthogonality; only logs, never decides."""
        values = np.array([[v.to_complex() for v in row] for row in self.chars])
        sizes = np.array([size for _, size in self.classes], dtype=float)
        gram = (values * sizes) @ values.conj().T / self.group.order
        error = float(np.abs(gram - np.eye(len(self.chars))).max())
        if error > 1e-8:
            logger.warning(f"Float shadow disagrees with exact orthogonality for {self.group!r}: {error:.2e}")
        else:
            logger.debug(f"Float shadow agrees for {self.group!r} (max error {error:.2e})")
        return error

    def to_dict(self, group_spec):
        return {
            'group': group_spec,
            'classes': [[rep, size] for rep, size in self.classes],
            'chars': [[value.to_dict() for value in row] for row in self.chars],
        }


def _exact_integer(value, what):
    if not value.is_rational() or value.rational_value().denominator != 1:
        raise InternalNonInteger(f"Expected an integer for {what}, got {value}")
    return int(value.rational_value())


def dixon_prime(order, exponent):
    """Smallest prime p > 2 sqrt(order) with p = 1 mod exponent."""
    limit = getattr(settings, 'PHL_PRIME_SEARCH_LIMIT', 10 ** 7)
    p = 2 * math.isqrt(order) + 1
    while True:
        p = nextprime(p)
        if p > limit:
            raise PrimeSearchFailed(order=order, exponent=exponent, limit=limit)
        if p % exponent == 1 % exponent:
            return int(p)


def class_multiplication_coefficients(group):
    """
    coeffs[r][s][t] = #{(x, y) in C_r x C_s : x y = z_t} for the fixed
    representative z_t, so that each central character w satisfies
    w(C_r) w(C_s) = sum_t coeffs[r][s][t] w(C_t).
    """
    classes = group.conjugacy_classes
    k = len(classes)
    class_of = np.asarray(classes.class_of)
    table, inv = group.table, group.inv
    coeffs = np.zeros((k, k, k), dtype=np.int64)
    for r, members in enumerate(classes.members):
        inverses = inv[np.asarray(members)]
        for t, z in enumerate(classes.reps):
            ys = table[inverses, z]
            coeffs[r, :, t] = np.bincount(class_of[ys], minlength=k)
    return coeffs


def _common_eigenvectors(coeffs, p):
    """Split F_p^k into common eigenspaces of the class matrices until all are lines."""
    k = coeffs.shape[0]
    spaces = [[[1 if i == j else 0 for j in range(k)] for i in range(k)]]
    for r in range(k):
        if all(len(space) == 1 for space in spaces):
            break
        matrix = coeffs[r] % p
        refined = []
        for space in spaces:
            if len(space) == 1:
                refined.append(space)
                continue
            basis, pivots = modular_rref(space, p)
            # matrix restricted to the span: column j holds the coordinates of M v_j
            images = [[int(x) % p for x in matrix.dot(np.asarray(v, dtype=object))] for v in basis]
            restricted = [[images[j][pivots[i]] for j in range(len(basis))] for i in range(len(basis))]
            for z in modular_eigenvalues(restricted, p):
                shifted = [[(restricted[i][j] - (z if i == j else 0)) % p for j in range(len(basis))]
                           for i in range(len(basis))]
                coords = modular_nullspace(shifted, p)
                refined.append([[sum(c * v[col] for c, v in zip(vec, basis)) % p for col in range(k)]
                                for vec in coords])
        spaces = refined
    if len(spaces) != k or any(len(space) != 1 for space in spaces):
        raise OrthogonalityError("Class matrices did not split into one-dimensional eigenspaces", prime=p)
    return [space[0] for space in spaces]


def character_table(group):
    """Exact character table with canonical row order: trivial first, then by degree and values."""
    cap = order_cap()
    if group.order > cap:
        raise BadParameters(f"Group order {group.order} exceeds the configured cap {cap}")
    classes = group.conjugacy_classes
    k = len(classes)
    order = group.order
    e = group.exponent
    p = dixon_prime(order, e)
    logger.info(f"Character table for {group!r}: {k} classes, exponent {e}, prime {p}")

    sizes = classes.sizes
    inverse_class = [classes.class_of[group.inverse(rep)] for rep in classes.reps]
    coeffs = class_multiplication_coefficients(group)
    vectors = _common_eigenvectors(coeffs, p)

    x = pow(int(primitive_root(p)), (p - 1) // e, p)
    e_inv = pow(e, p - 2, p)
    power_classes = [[classes.class_of[group.power(rep, j)] for j in range(e)] for rep in classes.reps]

    rows = []
    for vector in vectors:
        scale = pow(vector[0], p - 2, p)
        omega = [(v * scale) % p for v in vector]
        # theta_t = chi(g_t) / chi(1) mod p
        theta = [(w * pow(s, p - 2, p)) % p for w, s in zip(omega, sizes)]
        dot = sum(s * theta[t] * theta[inverse_class[t]] for t, s in enumerate(sizes)) % p
        degree_sq = (order * pow(dot, p - 2, p)) % p
        degree = next((d for d in range(1, math.isqrt(order) + 1) if (d * d) % p == degree_sq), None)
        if degree is None:
            raise InternalNonInteger("No integer degree matches the normalised eigenvector", prime=p)
        values_mod_p = [(degree * t) % p for t in theta]

        row = []
        for t in range(k):
            counts = []
            for m in range(e):
                total = sum(values_mod_p[power_classes[t][j]] * pow(x, (-j * m) % e, p) for j in range(e))
                mult = (total * e_inv) % p
                if mult > degree:
                    raise InternalNonInteger("Eigenvalue multiplicity out of range", prime=p, value=mult)
                counts.append(mult)
            row.append(CycloNumber.from_exponent_counts(e, counts))
        rows.append(row)

    trivial = next(i for i, row in enumerate(rows) if all(v == 1 for v in row))
    rest = [row for i, row in enumerate(rows) if i != trivial]
    rest.sort(key=lambda row: (int(row[0].rational_value()), tuple(v.sort_key(e) for v in row)))
    table = CharacterTable(group, [rows[trivial]] + rest, conductor=e)
    table.verify()
    logger.info(f"Character table for {group!r} verified: degrees {table.dims}")
    return table


def dim_fixed_subspace(table, row, g):
    """dim of the <g>-fixed space in the row-th irreducible: the average of chi over <g>."""
    group = table.group
    n = group.element_order(g)
    total = CycloNumber.rational(0)
    x = 0
    for _ in range(n):
        total = total + table.value(row, x)
        x = group.mul(x, g)
    value = _exact_integer(total / n, f"dim Fix(<{g}>) in row {row}")
    if not 0 <= value <= table.dims[row]:
        raise InternalNonInteger(f"Fixed dimension {value} outside [0, {table.dims[row]}]")
    return value


def induced_trivial_character(group, g):
    """
    Character of Ind_<g>^G(1) per conjugacy class:
    (1/|H|) #{y in G : y x y^-1 in H} for x the class representative.
    """
    classes = group.conjugacy_classes
    subgroup = np.zeros(group.order, dtype=bool)
    subgroup[list(group.subgroup_closure([g]))] = True
    h = int(subgroup.sum())
    values = []
    for rep in classes.reps:
        conjugates = group.table[group.table[:, rep], group.inv]
        values.append(CycloNumber.rational(Fraction(int(subgroup[conjugates].sum()), h)))
    return values


def table_from_dict(data, group):
    """Rebuild and verify a table for ``group`` from its JSON form."""
    classes = group.conjugacy_classes
    try:
        given_classes = [tuple(int(v) for v in pair) for pair in data['classes']]
        rows = [[CycloNumber.from_dict(value) for value in row] for row in data['chars']]
    except (KeyError, TypeError, ValueError) as e:
        raise SchemaError(f"Malformed character table: {e}")
    if len(given_classes) != len(classes):
        raise SchemaError("Class count does not match the group", classes=len(classes))
    # reorder columns onto this group's class order
    order = []
    for rep, size in given_classes:
        if not 0 <= rep < group.order:
            raise SchemaError("Class representative out of range", rep=rep)
        t = classes.class_of[rep]
        if classes.sizes[t] != size:
            raise SchemaError("Class size does not match the group", rep=rep)
        order.append(t)
    if sorted(order) != list(range(len(classes))):
        raise SchemaError("Classes do not cover the group")
    if any(len(row) != len(classes) for row in rows):
        raise SchemaError("Character rows must have one value per class")
    columns = [None] * len(classes)
    for position, t in enumerate(order):
        columns[t] = position
    chars = [[row[columns[t]] for t in range(len(classes))] for row in rows]
    for i, row in enumerate(chars):
        degree = row[0].rational_value() if row[0].is_rational() else None
        if degree is None or degree.denominator != 1 or degree < 1:
            raise OrthogonalityError("Degrees must be positive integers", row=i, degree=str(row[0]))
    conductor = math.lcm(*(v.conductor for row in chars for v in row))
    table = CharacterTable(group, chars, conductor=conductor)
    table.verify()
    return table


def save_table(table, path, group_spec):
    try:
        with open(path, 'w') as f:
            json.dump(table.to_dict(group_spec), f, indent=2, sort_keys=True)
    except OSError as e:
        raise UsageError(f"Cannot write character table {path}: {e.strerror}", path=str(path))
    logger.info(f"Saved character table to {path}")


def load_table(path, group=None):
    """Load a table file; the group is rebuilt from the embedded spec unless given."""
    from .groups import group_from_spec
    from .serializer import validated_group_spec, validated_table_file

    try:
        with open(path) as f:
            data = json.load(f)
    except OSError as e:
        raise UsageError(f"Cannot read character table {path}: {e.strerror}", path=str(path))
    except json.JSONDecodeError as e:
        raise SchemaError(f"Character table {path} is not valid JSON: {e.msg}", path=str(path))
    if not isinstance(data, dict):
        raise SchemaError("Character table file must be an object")
    validated_table_file(data)
    if group is None:
        group = group_from_spec(validated_group_spec(data.get('group')))
    return table_from_dict(data, group)


def canonical_row_order(table):
    """Row keys used to compare tables up to row order."""
    e = math.lcm(table.group.exponent, table.conductor)
    return sorted(tuple(v.sort_key(e) for v in row) for row in table.chars)
