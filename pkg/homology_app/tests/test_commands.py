import json
import os
import tempfile

from django.test import TestCase
from django.urls import reverse
from rest_framework import status
from rest_framework.test import APIClient

from homology_app.management.commands.phl import run_captured

Z6 = {'kind': 'abelian', 'moduli': [6]}
ORDER_24 = {'kind': 'metacyclic', 'm': 3, 'k': 8, 'r': 2}


class PhlCommandTestCase(TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def write(self, name, data):
        path = os.path.join(self.tmp.name, name)
        with open(path, 'w') as f:
            f.write(data if isinstance(data, str) else json.dumps(data))
        return path

    def hom(self, group, images, name='hom.json'):
        return self.write(name, {'group': group, 'images': images})

    def test_prim_images(self):
        code, out, err = run_captured(['prim-images', '--hom', self.hom(Z6, [2, 3])])
        self.assertEqual(code, 0, err)
        report = json.loads(out)
        self.assertEqual(report['count'], 6)
        self.assertTrue(report['kernel_primitive'])
        self.assertEqual(len(report['witnesses']), 6)
        print("✅ phl prim-images test passed")

    def test_group_file_next_to_the_hom_file(self):
        self.write('group.json', ORDER_24)
        code, out, _ = run_captured(['kernel-primitive', '--hom', self.hom('group.json', ['a', 'b'])])
        self.assertEqual(code, 0)
        self.assertFalse(json.loads(out)['kernel_primitive'])

    def test_text_format_and_out_file(self):
        target = os.path.join(self.tmp.name, 'report.txt')
        code, out, _ = run_captured(['irrpr', '--hom', self.hom(ORDER_24, ['a', 'b']), '--format', 'text',
                                     '--out', target])
        self.assertEqual(code, 0)
        self.assertEqual(out, '')
        with open(target) as f:
            lines = f.read().splitlines()
        self.assertIn('all_rows: false', lines)
        self.assertIn('order: 24', lines)

    def test_frattini_fields_for_p_groups(self):
        code, out, _ = run_captured(['kernel-primitive', '--hom', self.hom({'kind': 'abelian', 'moduli': [4]}, [1, 2])])
        self.assertEqual(code, 0)
        report = json.loads(out)
        self.assertTrue(report['kernel_primitive'])
        self.assertFalse(report['frattini_basis'])
        self.assertEqual(report['prime'], 2)

    def test_chartable_with_save(self):
        group_path = self.write('group.json', ORDER_24)
        saved = os.path.join(self.tmp.name, 'table.json')
        code, out, _ = run_captured(['chartable', '--group', group_path, '--save', saved])
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)['order'], 24)
        code, _, _ = run_captured(['irrpr', '--hom', self.hom(group_path, ['a', 'b']), '--table', saved])
        self.assertEqual(code, 0)

    def test_chartable_save_into_a_missing_directory_exits_2(self):
        group_path = self.write('group.json', Z6)
        target = os.path.join(self.tmp.name, 'missing', 'table.json')
        code, _, err = run_captured(['chartable', '--group', group_path, '--save', target])
        self.assertEqual(code, 2)
        self.assertEqual(json.loads(err)['error'], 'UsageError')
        self.assertFalse(os.path.exists(target))

    def test_chevalley_weil_and_quotient_check(self):
        hom = self.hom(ORDER_24, ['a', 'b'])
        code, out, _ = run_captured(['chevalley-weil', '--hom', hom])
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)['dim'], 25)
        code, out, _ = run_captured(['quotient-check', '--hom', hom])
        self.assertEqual(code, 0)

    def test_prim_homology(self):
        code, out, _ = run_captured(['prim-homology', '--hom', self.hom({'kind': 'abelian', 'moduli': [3]}, [1, 0]),
                                     '--word-budget', '16'])
        self.assertEqual(code, 0)
        report = json.loads(out)
        self.assertTrue(report['cw_check'])
        self.assertEqual(report['lower_mult'], report['full_mult'])

    def test_surface_subcommands_default_to_the_punctured_torus(self):
        code, out, _ = run_captured(['scc-images'])
        self.assertEqual(code, 0)
        report = json.loads(out)
        self.assertFalse(report['identity_scc_image'])
        self.assertTrue(report['identity_primitive_image'])
        code, out, _ = run_captured(['irrscc'])
        self.assertEqual(code, 0)
        self.assertTrue(json.loads(out)['proper_subset'])

    def test_worked_examples(self):
        self.assertEqual(run_captured(['torus-example', '--p', '3'])[0], 0)
        self.assertEqual(run_captured(['gamma-example'])[0], 0)
        code, out, _ = run_captured(['sphere-search', '--max-order', '12', '--rank', '2'])
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)['max_order'], 12)

    def test_usage_errors_exit_2(self):
        self.assertEqual(run_captured(['prim-images'])[0], 2)
        self.assertEqual(run_captured(['prim-images', '--hom', os.path.join(self.tmp.name, 'missing.json')])[0], 2)
        self.assertEqual(run_captured(['prim-images', '--hom', self.write('bad.json', '{not json')])[0], 2)
        self.assertEqual(run_captured(['no-such-command'])[0], 2)
        self.assertEqual(run_captured(['torus-example', '--p', '4'])[0], 2)
        self.assertEqual(run_captured(['prim-images', '--hom', self.hom(Z6, [2, 3]), '--budget', '0'])[0], 2)

        code, _, err = run_captured(['chevalley-weil', '--hom', self.hom(Z6, [2, 4])])
        self.assertEqual(code, 2)
        self.assertEqual(json.loads(err)['error'], 'NotSurjective')
        print("✅ phl usage error test passed")

    def test_budget_exceeded_exits_3(self):
        code, _, err = run_captured(['prim-images', '--hom', self.hom(ORDER_24, ['a', 'b']), '--budget', '5'])
        self.assertEqual(code, 3)
        self.assertEqual(json.loads(err)['error'], 'StateBudgetExceeded')


class HomologyApiTestCase(TestCase):
    def setUp(self):
        self.client = APIClient()

    def test_prim_images(self):
        response = self.client.post(reverse('homology_app:prim_images'), {'hom': {'group': Z6, 'images': [2, 3]}},
                                    format='json')
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertTrue(response.data['success'])
        self.assertEqual(response.data['data']['count'], 6)
        print("✅ Primitive images API test passed")

    def test_kernel_primitive_and_irrpr(self):
        body = {'hom': {'group': ORDER_24, 'images': ['a', 'b']}}
        response = self.client.post(reverse('homology_app:kernel_primitive'), body, format='json')
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertFalse(response.data['data']['kernel_primitive'])
        response = self.client.post(reverse('homology_app:irrpr'), body, format='json')
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertTrue(response.data['data']['missing_rows'])

    def test_chartable_and_chevalley_weil(self):
        response = self.client.post(reverse('homology_app:chartable'), {'group': ORDER_24}, format='json')
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(sum(d * d for d in response.data['data']['dims']), 24)
        response = self.client.post(reverse('homology_app:chevalley_weil'),
                                    {'hom': {'group': ORDER_24, 'images': ['a', 'b']}}, format='json')
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertTrue(response.data['data']['cw_check'])

    def test_invalid_spec(self):
        response = self.client.post(reverse('homology_app:prim_images'), {'hom': {'group': Z6}}, format='json')
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertFalse(response.data['success'])
        self.assertEqual(response.data['error']['error'], 'SchemaError')

    def test_file_paths_are_refused(self):
        response = self.client.post(reverse('homology_app:prim_images'),
                                    {'hom': {'group': '/etc/passwd', 'images': [1]}}, format='json')
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)

    def test_budget(self):
        body = {'hom': {'group': ORDER_24, 'images': ['a', 'b']}, 'budget': 5}
        response = self.client.post(reverse('homology_app:prim_images'), body, format='json')
        self.assertEqual(response.status_code, status.HTTP_507_INSUFFICIENT_STORAGE)
        response = self.client.post(reverse('homology_app:prim_images'), dict(body, budget=-1), format='json')
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
