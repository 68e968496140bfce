from unittest import TestCase

import pandas as pd

from basis_reconf.bench import RATE_COLUMNS, all_agree, evaluate_instance, run_corpus, summarize
from basis_reconf.brute_oracle import BruteOracle
from basis_reconf.tests.fixtures import k4_no_instance, two_rank_one


class EvaluateInstanceTests(TestCase):

    def test_yes_instance_row(self):
        row = evaluate_instance(two_rank_one(), BruteOracle())
        self.assertTrue(row['decide'])
        self.assertEqual(row['bfs_distance'], 3)
        self.assertTrue(row['verified'])
        self.assertTrue(row['bfs_not_longer'])
        self.assertIsNone(row['k1_exact'])

    def test_no_instance_row(self):
        row = evaluate_instance(k4_no_instance(), BruteOracle())
        self.assertFalse(row['decide'])
        self.assertIsNone(row['moves'])
        self.assertTrue(row['decide_agrees'])
        self.assertTrue(row['coloops_agree'])

    def test_state_cap_leaves_checks_empty(self):
        row = evaluate_instance(two_rank_one(), BruteOracle(state_cap=1))
        self.assertNotIn('decide_agrees', row)


class CorpusTests(TestCase):

    @classmethod
    def setUpClass(cls):
        cls.df = run_corpus(40, seed=7, max_size=8)
        cls.summary = summarize(cls.df)

    def test_frame_shape(self):
        self.assertIsInstance(self.df, pd.DataFrame)
        self.assertEqual(len(self.df), 40)
        self.assertEqual(list(self.df['seed'][:3]), [7, 8, 9])
        for column in RATE_COLUMNS:
            self.assertIn(column, self.df.columns)

    def test_every_check_agrees(self):
        self.assertGreater(self.summary['evaluated'], 0)
        self.assertEqual(set(self.summary['rates'].values()), {1.0})
        self.assertTrue(all_agree(self.summary))

    def test_reproducible(self):
        again = run_corpus(40, seed=7, max_size=8)
        columns = ['seed', 'k', 'profile', 'size', 'decide', 'moves', 'bfs_distance']
        pd.testing.assert_frame_equal(self.df[columns], again[columns])

    def test_disagreement_fails(self):
        summary = {'rates': {'decide_vs_bfs': 1.0, 'verify_pass': 0.95}}
        self.assertFalse(all_agree(summary))
