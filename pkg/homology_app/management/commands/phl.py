import argparse
import io
import json
import logging
import sys

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from group_app.characters import load_table, save_table
from group_app.exceptions import PrimHomError, UsageError
from group_app.groups import group_to_spec
from group_app.table_cache import cached_character_table
from homology_app.constructions import gamma_example_verify, gamma_group, sigma12_group, sphere_catalog_search, \
    torus_cover_verify
from homology_app.orbits import Homomorphism
from homology_app.reports import chartable_report, chevalley_weil_report, irrpr_report, irrscc_report, \
    kernel_primitive_report, prim_homology_report, prim_images_report, quotient_check_report, render, \
    scc_images_report
from homology_app.serializer import load_group, load_hom, read_json, validated_preset_spec
from homology_app.surfaces import preset_from_spec, sigma12_preset

logger = logging.getLogger(__name__)

SUBCOMMANDS = [
    'prim-images', 'kernel-primitive', 'irrpr', 'chartable', 'chevalley-weil', 'prim-homology',
    'quotient-check', 'scc-images', 'irrscc', 'torus-example', 'gamma-example', 'sphere-search',
]


def positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{text}' is not an integer")
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


class Command(BaseCommand):
    help = 'Primitive homology computations: primitive images, Irrpr, cover homology and worked examples'
    requires_system_checks = []

    def add_arguments(self, parser):
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument('--hom', help='Homomorphism file {"group", "images", "rank"}')
        common.add_argument('--group', help='Group file (used when no --hom is given)')
        common.add_argument('--table', default='auto', help="'auto' (cached) or a character table file")
        common.add_argument('--budget', type=positive_int, help='State budget for orbit searches')
        common.add_argument('--word-budget', type=positive_int, help='Move depth for prim-homology')
        common.add_argument('--format', choices=['text', 'json'], default='json', dest='fmt')
        common.add_argument('--out', help='Write the report to this file instead of stdout')

        subparsers = parser.add_subparsers(dest='subcommand', required=True)
        for name in SUBCOMMANDS:
            sub = subparsers.add_parser(name, parents=[common])
            if name == 'chartable':
                sub.add_argument('--save', help='Also save the table to this file')
            if name == 'quotient-check':
                sub.add_argument('--element', action='append', help='Element label; repeatable (default: all classes)')
            if name in ('scc-images', 'irrscc'):
                sub.add_argument('--preset', help='Surface preset file (default: twice-punctured torus)')
            if name == 'torus-example':
                sub.add_argument('--p', type=int, action='append', help='Odd prime; repeatable (default: 3 and 5)')
            if name == 'sphere-search':
                sub.add_argument('--max-order', type=positive_int, default=200)
                sub.add_argument('--rank', type=int, choices=[2, 3], default=3)
                sub.add_argument('--jobs', type=int, default=None)

    def handle(self, *args, **options):
        command = options['subcommand']
        if options.get('budget') is None:
            options['budget'] = getattr(settings, 'PHL_STATE_BUDGET', 10 ** 8)
        try:
            report = getattr(self, 'run_' + command.replace('-', '_'))(options)
        except PrimHomError as e:
            logger.error(f"phl {command} failed: {e.message}")
            self.stderr.write(json.dumps(e.to_dict(), sort_keys=True))
            raise CommandError(e.message, returncode=e.exit_code)

        text = render(report, options['fmt'])
        if options.get('out'):
            try:
                with open(options['out'], 'w') as f:
                    f.write(text + "\n")
            except OSError as e:
                raise CommandError(f"Cannot write {options['out']}: {e.strerror}", returncode=2)
        else:
            self.stdout.write(text)
        if not report.get('ok', True):
            raise CommandError(f"phl {command}: a check failed", returncode=1)

    # Inputs

    def hom(self, options, default=None):
        if options.get('hom'):
            return load_hom(options['hom'])
        if default is not None:
            return default()
        raise UsageError("This subcommand needs --hom")

    def group(self, options):
        if options.get('hom'):
            return load_hom(options['hom']).target
        if options.get('group'):
            return load_group(options['group'])
        raise UsageError("This subcommand needs --group or --hom")

    def table(self, options, group):
        if options['table'] == 'auto':
            return cached_character_table(group)
        return load_table(options['table'], group)

    def preset(self, options):
        if options.get('preset'):
            return preset_from_spec(validated_preset_spec(read_json(options['preset'])))
        return sigma12_preset()

    @staticmethod
    def sigma12_hom():
        group = sigma12_group()
        return Homomorphism(group, list(group.gen_indices))

    # Subcommands

    def run_prim_images(self, options):
        return prim_images_report(self.hom(options), budget=options['budget'])

    def run_kernel_primitive(self, options):
        return kernel_primitive_report(self.hom(options), budget=options['budget'])

    def run_irrpr(self, options):
        phi = self.hom(options)
        return irrpr_report(phi, self.table(options, phi.target), budget=options['budget'])

    def run_chartable(self, options):
        group = self.group(options)
        table = self.table(options, group)
        if options.get('save'):
            save_table(table, options['save'], group_to_spec(group))
        return chartable_report(table)

    def run_chevalley_weil(self, options):
        phi = self.hom(options)
        return chevalley_weil_report(phi, self.table(options, phi.target))

    def run_prim_homology(self, options):
        phi = self.hom(options)
        return prim_homology_report(phi, self.table(options, phi.target), word_budget=options.get('word_budget'),
                                    budget=options['budget'])

    def run_quotient_check(self, options):
        phi = self.hom(options)
        elements = None
        if options.get('element'):
            elements = [phi.target.index_of(label) for label in options['element']]
        return quotient_check_report(phi, elements)

    def run_scc_images(self, options):
        return scc_images_report(self.hom(options, self.sigma12_hom), self.preset(options), budget=options['budget'])

    def run_irrscc(self, options):
        phi = self.hom(options, self.sigma12_hom)
        return irrscc_report(phi, self.table(options, phi.target), self.preset(options), budget=options['budget'])

    def run_torus_example(self, options):
        runs = [torus_cover_verify(p) for p in options.get('p') or [3, 5]]
        return {'runs': runs, 'ok': all(run['ok'] for run in runs)}

    def run_gamma_example(self, options):
        return gamma_example_verify(table=self.table(options, gamma_group()), budget=options['budget'])

    def run_sphere_search(self, options):
        jobs = options.get('jobs') or getattr(settings, 'PHL_CATALOG_JOBS', 1)
        return sphere_catalog_search(options['max_order'], options['rank'], jobs=jobs, budget=options['budget'])


def run(argv, stdout=None, stderr=None):
    """
    Run ``phl`` with the given argument list and return the exit code:
    0 when every check passed, 1 when a check failed, 2 for usage or input
    errors and 3 when a search ran out of budget.
    """
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    command = Command(stdout=stdout, stderr=stderr)
    parser = command.create_parser('manage.py', 'phl')
    try:
        options = vars(parser.parse_args(list(argv)))
    except CommandError as e:
        stderr.write(f"{e}\n")
        return 2
    args = options.pop('args', ())
    try:
        command.execute(*args, **options)
    except CommandError as e:
        return e.returncode
    return 0


def run_captured(argv):
    """(exit code, stdout text, stderr text) of ``run``."""
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()
