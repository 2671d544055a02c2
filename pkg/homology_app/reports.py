"""
Report builders shared by the ``phl`` command and the API.

Every report is a plain dict of JSON-ready values. ``render`` turns a report
into sorted, indented JSON or into ``key: value`` lines (nested keys joined
by dots, lists written as JSON) that carry the same information.
"""

import json
import logging

from group_app.exceptions import ChevalleyWeilViolation
from group_app.groups import frattini_subgroup_pgroup, pgroup_prime

from .covers import build_cover, chevalley_weil_multiplicities, homology_action, primitive_homology_span, \
    quotient_fixed_check
from .orbits import frattini_basis_check, has_primitive_in_kernel, irrpr_set, primitive_image_set
from .surfaces import irrscc_set, scc_homology_bound, scc_image_set

logger = logging.getLogger(__name__)


def _labels(group, elements):
    return [group.label(g) for g in sorted(elements)]


def _hom_summary(phi):
    return {
        'group': phi.target.name,
        'order': phi.target.order,
        'rank': phi.rank,
        'images': phi.image_labels(),
        'surjective': phi.surjective,
    }


def prim_images_report(phi, budget=None):
    result = primitive_image_set(phi, track_words=True, budget=budget)
    group = phi.target
    report = _hom_summary(phi)
    report.update({
        'primitive_images': _labels(group, result.images),
        'count': len(result.images),
        'kernel_primitive': result.has_identity,
        'component_has_redundant': result.component_has_redundant,
        'witnesses': {group.label(g): str(w) for g, w in sorted(result.witnesses.items())},
        'visited': result.visited,
        'depth': result.depth,
    })
    report['ok'] = not phi.surjective or result.component_has_redundant == result.has_identity
    if not report['ok']:
        logger.error(f"Redundancy in the component of {phi!r} disagrees with the kernel verdict")
    return report


def kernel_primitive_report(phi, budget=None):
    found, word = has_primitive_in_kernel(phi, budget=budget)
    report = _hom_summary(phi)
    report.update({'kernel_primitive': found, 'witness': str(word) if word is not None else None})
    report['ok'] = True
    group = phi.target
    if group.order > 1 and len(group.prime_factors) == 1 and phi.surjective:
        report['frattini_basis'] = frattini_basis_check(phi)
        report['frattini_order'] = len(frattini_subgroup_pgroup(group))
        report['prime'] = pgroup_prime(group)
        report['ok'] = report['frattini_basis'] == (not found)
    return report


def irrpr_report(phi, table, budget=None):
    rows = irrpr_set(phi, table, budget=budget)
    report = _hom_summary(phi)
    report.update({
        'rows': len(table),
        'dims': table.dims,
        'irrpr_rows': rows,
        'missing_rows': [i for i in range(len(table)) if i not in rows],
        'all_rows': len(rows) == len(table),
        'ok': True,
    })
    return report


def chartable_report(table):
    group = table.group
    return {
        'group': group.name,
        'order': group.order,
        'classes': [{'rep': group.label(rep), 'size': size} for rep, size in table.classes],
        'dims': table.dims,
        'conductor': table.conductor,
        'chars': [[str(v) for v in row] for row in table.chars],
        'ok': True,
    }


def chevalley_weil_report(phi, table, space=None):
    if space is None:
        space = homology_action(build_cover(phi), phi)
    multiplicities = table.decompose(space.character)
    expected = chevalley_weil_multiplicities(table, phi.rank)
    if multiplicities != expected:
        logger.error(f"H_1 multiplicities {multiplicities} differ from {expected} for {phi!r}")
        raise ChevalleyWeilViolation(multiplicities=multiplicities, expected=expected)
    report = _hom_summary(phi)
    report.update({
        'dim': space.dim,
        'character': [str(v) for v in space.character],
        'multiplicities': multiplicities,
        'cw_check': True,
        'ok': True,
    })
    return report


def prim_homology_report(phi, table, word_budget=None, budget=None, check_orbits=True):
    space = homology_action(build_cover(phi), phi)
    span = primitive_homology_span(phi, table, word_budget=word_budget, space=space, budget=budget,
                                   check_orbits=check_orbits)
    report = _hom_summary(phi)
    report.update({
        'cw_check': table.decompose(space.character) == span.full_mult,
        'dim': space.dim,
        'irrpr_rows': span.irrpr_rows,
        'lower_mult': span.lower_mult,
        'upper_mult': span.upper_mult,
        'full_mult': span.full_mult,
        'span_rank': span.rank,
        'upper_dim': span.upper_dim,
        'determined': span.determined,
        'truncated': span.truncated,
        'budget': span.budget,
        'orbit_checks': span.orbit_checks,
    })
    report['ok'] = report['cw_check']
    return report


def quotient_check_report(phi, elements=None):
    """Transfer check for the given elements, or for one representative of every conjugacy class."""
    group = phi.target
    if elements is None:
        elements = group.conjugacy_classes.reps
    space = homology_action(build_cover(phi), phi)
    checks = [quotient_fixed_check(phi, g, space=space) for g in elements]
    report = _hom_summary(phi)
    report.update({'dim': space.dim, 'checks': checks, 'ok': all(c['ok'] for c in checks)})
    return report


def scc_images_report(phi, preset, budget=None):
    group = phi.target
    images = scc_image_set(phi, preset, budget=budget)
    primitive = primitive_image_set(phi, budget=budget, check_redundant=False).images
    subset = images <= primitive
    if not subset:
        logger.error(f"Curve images of {preset!r} under {phi!r} are not all primitive images")
    report = _hom_summary(phi)
    report.update({
        'preset': preset.name,
        'scc_images': _labels(group, images),
        'count': len(images),
        'identity_scc_image': 0 in images,
        'identity_primitive_image': 0 in primitive,
        'subset_of_primitive_images': subset,
        'ok': subset,
    })
    return report


def irrscc_report(phi, table, preset, budget=None):
    rows = irrscc_set(phi, table, preset, budget=budget)
    bound = scc_homology_bound(table, rows, preset)
    report = _hom_summary(phi)
    report.update({
        'preset': preset.name,
        'genus': preset.genus,
        'punctures': preset.punctures,
        'rows': len(table),
        'dims': table.dims,
        'irrscc_rows': rows,
        'missing_rows': [i for i in range(len(table)) if i not in rows],
        'proper_subset': len(rows) < len(table),
        'bound_multiplicities': bound['multiplicities'],
        'bound_applicable': bound['bound_applicable'],
        'ok': True,
    })
    return report


def _flatten(prefix, value, lines):
    if isinstance(value, dict):
        for key in sorted(value):
            _flatten(f"{prefix}.{key}" if prefix else str(key), value[key], lines)
    else:
        lines.append(f"{prefix}: {json.dumps(value, sort_keys=True)}")


def render(report, fmt='json'):
    if fmt == 'json':
        return json.dumps(report, sort_keys=True, indent=2)
    lines = []
    _flatten('', report, lines)
    return "\n".join(lines)
