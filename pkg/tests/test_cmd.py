#!/usr/bin/env python3

import argparse
import io
import json
import os
import tempfile
import unittest
from unittest import mock

import yaml

from pharmonic import cmd
import pharmonic.commands


class PharmonicTestCase(unittest.TestCase):

    def run_main(self, *argv):
        with mock.patch('sys.stdout', new_callable=io.StringIO) as stdout, \
                mock.patch('pharmonic.colored_logging'):
            code = cmd.main(list(argv))
        return code, stdout.getvalue()

    def run_json(self, *argv):
        code, text = self.run_main(*argv)
        return code, json.loads(text)

    def tempfile(self, name, content):
        tmp = tempfile.TemporaryDirectory()
        self.addCleanup(tmp.cleanup)
        path = os.path.join(tmp.name, name)
        with open(path, 'w') as f:
            f.write(content)
        return path


class CmdTest(PharmonicTestCase):

    def test_arg_parser(self):
        parser = cmd.get_arg_parser()
        self.assertIsInstance(parser, argparse.ArgumentParser)
        self.assertEqual('pharmonic', parser.prog)

    def test_a_command_is_required(self):
        with mock.patch('sys.stderr', new_callable=io.StringIO):
            with self.assertRaises(SystemExit) as cm:
                cmd.PharmonicCmd().parse_arguments([])
        self.assertEqual(2, cm.exception.code)

    def test_execution_plan(self):
        q = cmd.PharmonicCmd()
        args = q.parse_arguments(['capacity', '--radii', '4,8'])
        plan = q.build_execution_plan(args)
        self.assertEqual(1, len(plan))
        self.assertIsInstance(plan[0], pharmonic.commands.CapacityCommand)
        self.assertEqual([4, 8], plan[0].radii)
        self.assertEqual([(0,)], plan[0].A)
        self.assertIn('Capacity of 0 for p=2 on Z^1', str(plan[0]))

    def test_dry_run(self):
        code, text = self.run_main('classify', '--family', 'free',
                                   '--radii', '2,3,4,5', '--dry-run')
        self.assertEqual(0, code)
        self.assertEqual('', text)

    def test_capacity(self):
        code, doc = self.run_json('capacity', '--radii', '4,8')
        self.assertEqual(0, code)
        self.assertEqual(['1', '0.5'], doc['result']['values'])
        self.assertEqual('inconclusive', doc['verdict'])
        self.assertEqual('capacity', doc['config']['command'])
        self.assertEqual('Z^1', doc['config']['graph'])
        self.assertEqual('1e-10', doc['config']['solver']['tol'])
        self.assertIn('verdict thresholds are heuristic', doc['warnings'])
        self.assertNotIn('out', doc['config'])

    def test_capacity_csv(self):
        code, text = self.run_main('capacity', '--radii', '4,8',
                                   '--format', 'csv')
        self.assertEqual(0, code)
        self.assertEqual('radius,capacity,ratio\n4,1,\n8,0.5,0.5\n', text)

    def test_documents_are_reproducible(self):
        argv = ['classify', '--family', 'free', '--radii', '2,3,4,5',
                '--p', '2.5']
        texts = []
        for name in ('one.json', 'two.json'):
            path = self.tempfile(name, '')
            code, stdout = self.run_main(*argv + ['--out', path])
            self.assertEqual(0, code)
            self.assertEqual('', stdout)
            with open(path, 'rb') as f:
                texts.append(f.read())
        self.assertEqual(texts[0], texts[1])
        self.assertTrue(texts[0].endswith(b'\n'))

    def test_workers_do_not_change_results(self):
        argv = ['classify', '--family', 'free', '--radii', '2,3,4,5',
                '--p', '2.5']
        _, one = self.run_json(*argv)
        _, many = self.run_json(*argv + ['--workers', '3'])
        self.assertEqual(one['result'], many['result'])
        self.assertEqual(one['traces'], many['traces'])
        self.assertEqual(one['verdict'], many['verdict'])

    def test_solve_on_a_ball(self):
        code, doc = self.run_json('solve', '--dim', '2', '--radius', '3',
                                  '--ends', '+=1,-=0')
        self.assertEqual(0, code)
        self.assertTrue(doc['result']['converged'])
        self.assertEqual('linear', doc['result']['method'])
        self.assertIn('0,0', doc['result']['field'])
        self.assertEqual(13, doc['result']['region_size'])

    def test_solve_on_an_edge_list(self):
        path = self.tempfile('path.txt', '# a path\na b\nb c\n')
        code, doc = self.run_json('solve', '--graph', path,
                                  '--boundary', 'a=0;c=1', '--p', '3')
        self.assertEqual(0, code)
        self.assertAlmostEqual(0.5, float(doc['result']['field']['b']),
                               places=6)

    def test_decompose_with_components(self):
        code, doc = self.run_json(
            'decompose', '--family', 'free', '--field', 'end:a',
            '--radii', '4,6,8', '--window', '2', '--window-tol', '1e-3',
            '--epsilon', '0.5')
        self.assertEqual(0, code)
        self.assertTrue(doc['result']['converged'])
        self.assertEqual(1, len(doc['result']['components']))
        self.assertEqual('a', doc['result']['components'][0]['first'])
        self.assertAlmostEqual(0.25,
                               float(doc['result']['harmonic']['e']))

    def test_potential(self):
        code, doc = self.run_json('potential', '--family', 'free',
                                  '--radii', '4,6,8')
        self.assertEqual(0, code)
        self.assertEqual('sustained', doc['verdict'])
        self.assertEqual('end:a', doc['result']['region'])

    def test_extend(self):
        code, doc = self.run_json('extend', '--ends', '+=1,-=0',
                                  '--radii', '4,8,16', '--window', '2')
        self.assertEqual(0, code)
        self.assertEqual('0.5', doc['result']['root_value'])
        self.assertFalse(doc['result']['converged'])
        self.assertEqual(1, len(doc['warnings']))

    def test_verdict_csv(self):
        code, text = self.run_main('verdict', '--format', 'csv')
        self.assertEqual(0, code)
        lines = text.splitlines()
        self.assertEqual('radius,end:+', lines[0])
        self.assertEqual(['8', '16', '32', '64'],
                         [line.split(',')[0] for line in lines[1:]])

    def test_boundary_of_the_line_is_empty(self):
        code, doc = self.run_json('boundary',
                                  '--capacity-radii', '4,8,16,32')
        self.assertEqual(0, code)
        self.assertEqual('empty', doc['verdict'])
        self.assertEqual('parabolic', doc['result']['capacity_verdict'])
        self.assertEqual('constants-only-evidence',
                         doc['result']['harmonic_verdict'])


class ConfigTest(PharmonicTestCase):

    def test_every_error_is_reported(self):
        code, doc = self.run_json('capacity', '--p', '0.5',
                                  '--max-sweeps', '0', '--radii', '4,2')
        self.assertEqual(2, code)
        self.assertEqual('ConfigError', doc['error']['type'])
        messages = doc['error']['messages']
        self.assertEqual(3, len(messages), messages)
        self.assertRegex(messages[0], '^--p')

    def test_csv_needs_a_sequence(self):
        code, doc = self.run_json('solve', '--radius', '2',
                                  '--ends', '+=1,-=0', '--format', 'csv')
        self.assertEqual(2, code)

    def test_unknown_vertex(self):
        code, doc = self.run_json('capacity', '--dim', '2',
                                  '--set', 'origin;1,x', '--radii', '4,8')
        self.assertEqual(2, code)
        self.assertIn('1,x', doc['error']['messages'][0])

    def test_boundary_needs_a_finite_graph(self):
        code, doc = self.run_json('solve', '--boundary', '0=1')
        self.assertEqual(2, code)

    def test_missing_radii(self):
        code, doc = self.run_json('extend', '--ends', '+=1,-=0')
        self.assertEqual(2, code)
        self.assertIn('--radii is required', doc['error']['messages'])

    def test_computation_errors_exit_with_1(self):
        code, doc = self.run_json('decompose', '--radii', '2,4',
                                  '--window', '3')
        self.assertEqual(1, code)
        self.assertEqual('RoydenError', doc['error']['type'])

    def test_config_file(self):
        path = self.tempfile('run.yaml', yaml.safe_dump(
            {'family': 'zn', 'dim': 1, 'radii': [4, 8]}))
        code, doc = self.run_json('capacity', '--config', path)
        self.assertEqual(0, code)
        self.assertEqual(['1', '0.5'], doc['result']['values'])
        self.assertNotIn('config', doc['config'])

    def test_command_line_wins_over_the_config_file(self):
        path = self.tempfile('run.yaml', yaml.safe_dump({'radii': [4, 8]}))
        code, doc = self.run_json('capacity', '--config', path,
                                  '--radii', '5,10')
        self.assertEqual(0, code)
        self.assertEqual(['0.8', '0.4'], doc['result']['values'])

    def test_json_config_file(self):
        path = self.tempfile('run.json', json.dumps({'max-sweeps': 10}))
        q = cmd.PharmonicCmd()
        args = q.parse_arguments(['solve', '--config', path])
        self.assertEqual(10, args.max_sweeps)

    def test_unknown_setting(self):
        path = self.tempfile('run.yaml', 'bogus: 1\nradii: [4, 8]\n')
        code, doc = self.run_json('capacity', '--config', path)
        self.assertEqual(2, code)
        self.assertIn('bogus', doc['error']['messages'][0])

    def replay(self, argv, name='run.json'):
        """Run argv into a file, then rerun from that file alone."""
        first = self.tempfile(name, '')
        code, _ = self.run_main(*argv + ['--out', first])
        self.assertEqual(0, code)
        second = first + '.replay'
        code, _ = self.run_main(argv[0], '--config', first, '--out', second)
        self.assertEqual(0, code)
        with open(first, 'rb') as f, open(second, 'rb') as g:
            return f.read(), g.read()

    def test_documents_replay_their_run(self):
        one, two = self.replay(['classify', '--family', 'free',
                                '--radii', '2,3,4,5', '--p', '2.5',
                                '--ordering', 'sorted'])
        self.assertEqual(one, two)

    def test_edge_list_documents_replay_their_run(self):
        path = self.tempfile('path.txt', 'a b\nb c\nc d\n')
        one, two = self.replay(['solve', '--graph', path,
                                '--boundary', 'a=0;d=1', '--p', '3'])
        self.assertEqual(one, two)

    def test_config_block_replays_the_run(self):
        code, doc = self.run_json('capacity', '--radii', '4,8', '--p', '3')
        self.assertEqual(0, code)
        path = self.tempfile('block.yaml', yaml.safe_dump(doc['config']))
        code, again = self.run_json('capacity', '--config', path)
        self.assertEqual(0, code)
        self.assertEqual(doc, again)

    def test_solver_block(self):
        path = self.tempfile('run.yaml', yaml.safe_dump(
            {'radii': [5, 10], 'solver': {'p': 3, 'max-sweeps': 4000}}))
        q = cmd.PharmonicCmd()
        args = q.parse_arguments(['capacity', '--config', path])
        self.assertEqual(3, args.p)
        self.assertEqual(4000, args.max_sweeps)
        code, doc = self.run_json('capacity', '--config', path)
        self.assertEqual(0, code)
        self.assertEqual('3', doc['config']['solver']['p'])
        self.assertAlmostEqual(0.04, float(doc['result']['values'][1]),
                               delta=1e-7)

    def test_solver_block_keys_are_checked(self):
        path = self.tempfile('run.yaml', yaml.safe_dump(
            {'radii': [4, 8], 'solver': {'bogus': 1}}))
        code, doc = self.run_json('capacity', '--config', path)
        self.assertEqual(2, code)
        self.assertIn('bogus', doc['error']['messages'][0])

    def test_replay_needs_the_same_command(self):
        path = self.tempfile('run.json', '')
        code, _ = self.run_main('capacity', '--radii', '4,8', '--out', path)
        self.assertEqual(0, code)
        code, doc = self.run_json('classify', '--config', path)
        self.assertEqual(2, code)
        self.assertIn('replays a capacity run',
                      doc['error']['messages'][0])

    def test_config_file_must_be_a_mapping(self):
        path = self.tempfile('run.yaml', '- 1\n- 2\n')
        code, doc = self.run_json('capacity', '--config', path)
        self.assertEqual(2, code)
