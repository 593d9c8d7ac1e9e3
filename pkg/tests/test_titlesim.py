"""Job Title Test Module; command line interface and TSV loading."""

import io
import logging
import os
import tempfile
import unittest
from unittest import mock

from tests import data_worked_example as data
from titlesim import knn, synthetic, titlesim
from titlesim.embeddings import EmbeddingTable
from titlesim.strategies import Strategy
from titlesim.jterror import JTDataError


def tsv(text):
    return io.BytesIO(text.encode('utf-8'))


class LoadTestCase(unittest.TestCase):
    """Test case for load_refs and load_queries"""

    def test_coarse_label(self):
        refs = titlesim.load_refs(tsv('r1\tJ2EE engineer\tJava Developer'
                                      '\t15\n'))
        self.assertEqual(refs[0].doc.tokens, ('j2ee', 'engineer'))
        self.assertEqual(refs[0].fine_label, 'Java Developer')
        self.assertEqual(refs[0].coarse_label, '15')

    def test_without_coarse_label(self):
        refs = titlesim.load_refs(tsv('r1\tJ2EE engineer\tJava Developer\n'))
        self.assertIsNone(refs[0].coarse_label)

    def assertLineError(self, text, line, **kwargs):
        loader = kwargs.pop('loader', titlesim.load_refs)
        with self.assertRaises(JTDataError) as ctx:
            loader(tsv(text), 'in.tsv', **kwargs)
        self.assertEqual(ctx.exception.line, line)
        self.assertIn('in.tsv:%d:' % line, str(ctx.exception))

    def test_wrong_column_count(self):
        self.assertLineError('r1\tJ2EE engineer\tJava Developer\n'
                             'r2\tJava Developer\n', 2)

    def test_empty_fine_label(self):
        self.assertLineError('r1\tJ2EE engineer\t\n', 1)

    def test_duplicate_id(self):
        self.assertLineError('r1\ta\tA\nr2\tb\tB\nr1\tc\tC\n', 3)

    def test_no_refs(self):
        self.assertRaises(JTDataError, titlesim.load_refs, tsv(''))

    def test_queries(self):
        queries = titlesim.load_queries(tsv(data.QUERIES_TSV + 'q2\tNurse\n'))
        self.assertEqual([(d.id, gold) for d, gold in queries],
                         [('q1', 'Java Developer'), ('q2', None)])

    def test_queries_need_gold(self):
        self.assertLineError('q1\ta\tA\nq2\tb\n', 2,
                             loader=titlesim.load_queries, gold=True)


class CliTestCase(unittest.TestCase):
    """Test case for run_argv over files in a temporary directory"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.refs = self.write('refs.tsv', data.REFS_TSV)
        self.queries = self.write('queries.tsv', data.QUERIES_TSV)
        self.emb = self.write('emb.txt', data.table_lines())

    def tearDown(self):
        self.tmp.cleanup()

    def write(self, name, text):
        path = os.path.join(self.tmp.name, name)
        with open(path, 'wb') as out:
            out.write(text.encode('utf-8'))
        return path

    def run_cli(self, *argv):
        out, err = io.StringIO(), io.StringIO()
        status = titlesim.run_argv(list(argv), out, err)
        return status, out.getvalue(), err.getvalue()

    def assertFails(self, status, argv):
        code, out, err = self.run_cli(*argv)
        self.assertEqual(code, status, err)
        self.assertEqual(out, '')
        self.assertEqual(err.count('\n'), 1, err)
        return err

    def worked_args(self, command, strategy):
        return [command, '--strategy', strategy, '--refs', self.refs,
                '--queries', self.queries, '--embeddings', self.emb]

    def test_classify_worked_example(self):
        for strategy in ('wmd', 'avgw2v'):
            status, out, err = self.run_cli(
                *self.worked_args('classify', strategy) + ['--k', '3'])
            self.assertEqual((status, out, err), (0, 'q1\tJava Developer\n',
                                                  ''))

    def test_classify_unrepresentable_query(self):
        queries = self.write('q.tsv', 'q1\tJava developer\nq2\t???\n'
                             'q3\tHappiness officer\n')
        status, out, _ = self.run_cli('classify', '-s', 'wmd', '--refs',
                                      self.refs, '--queries', queries,
                                      '--embeddings', self.emb, '-k', '3')
        self.assertEqual(status, 0)
        self.assertEqual(out, 'q1\tJava Developer\nq2\t\nq3\t\n')

    def test_neighbors(self):
        status, out, _ = self.run_cli(
            *self.worked_args('neighbors', 'wmd') + ['-k', '3'])
        self.assertEqual(status, 0)
        lines = [line.split('\t') for line in out.splitlines()]
        self.assertEqual([f[1] for f in lines], ['1', '2', '3'])
        self.assertEqual({f[2] for f in lines}, data.NEAREST_IDS)
        dists = [float(f[4]) for f in lines]
        self.assertEqual(dists, sorted(dists))

    def test_evaluate(self):
        csv = os.path.join(self.tmp.name, 'eval.csv')
        status, out, _ = self.run_cli(
            *self.worked_args('evaluate', 'avgw2v') + ['-k', '3', '-o', csv])
        self.assertEqual(status, 0)
        self.assertEqual(out, 'accuracy=1.000000 n_queries=1 n_skipped=0\n')
        with open(csv, 'rb') as f:
            self.assertEqual(f.read(),
                             b'strategy,k,accuracy,n_queries,n_skipped\n'
                             b'avgw2v,3,1.000000,1,0\n')

    def test_cascade_is_reproducible(self):
        argv = self.worked_args('classify', 'wmd') + ['-k', '1', '--cascade',
                                                      '--q-threshold', '1']
        first = self.run_cli(*argv)
        self.assertEqual(first[0], 0, first[2])
        self.assertEqual(first, self.run_cli(*argv))

    def test_discover_taxonomy(self):
        status, out, _ = self.run_cli('discover-taxonomy', '--refs',
                                      self.refs, '--top-terms', '2')
        self.assertEqual(status, 0)
        lines = [line.split('\t') for line in out.splitlines()]
        self.assertTrue(lines)
        self.assertEqual([f[0] for f in lines],
                         [str(i) for i in range(len(lines))])
        for f in lines:
            self.assertEqual(len(f), 3)
            self.assertLessEqual(len(f[1].split(' ')), 2)
        self.assertLessEqual(sum(int(f[2]) for f in lines), len(data.REFS))

    def test_embeddings_info(self):
        status, out, _ = self.run_cli('embeddings-info', '--embeddings',
                                      self.emb)
        self.assertEqual(status, 0)
        lines = out.splitlines()
        self.assertEqual(lines[0], '%d 5' % len(data.WORDS))
        self.assertTrue(lines[1].startswith('norm min='))

    def test_analogy(self):
        status, out, _ = self.run_cli('analogy', '--embeddings', self.emb,
                                      'nurse', 'registered', 'driver')
        self.assertEqual(status, 0)
        self.assertEqual(out, 'truck\n')

    def test_help(self):
        status, out, _ = self.run_cli('-h')
        self.assertEqual(status, 0)
        self.assertIn('sweep-k', out)
        status, out, _ = self.run_cli('classify', '-h')
        self.assertEqual(status, 0)
        self.assertIn('--strategy', out)

    def test_usage_errors(self):
        err = self.assertFails(1, ['classify', '--strategy', 'avgw2v',
                                   '--refs', self.refs, '--queries',
                                   self.queries])
        self.assertIn('--embeddings', err)
        self.assertFails(1, [])
        self.assertFails(1, ['frobnicate'])
        self.assertFails(1, ['classify', '--bogus'])
        self.assertFails(1, self.worked_args('classify', 'lsi'))
        self.assertFails(1, self.worked_args('classify', 'wmd') +
                         ['--k', 'x'])
        self.assertFails(1, self.worked_args('classify', 'wmd') +
                         ['--k', '0'])
        self.assertFails(1, self.worked_args('classify', 'wmd') +
                         ['--k', '5', '--prefetch', '2'])
        self.assertFails(1, self.worked_args('classify', 'wmd,bow'))
        self.assertFails(1, ['analogy', '--embeddings', self.emb, 'a', 'b'])
        self.assertFails(1, self.worked_args('sweep-k', 'wmd') +
                         ['--q-threshold', '0'])

    def test_data_errors(self):
        bad = self.write('bad.tsv', 'r1\tJava developer\tJava Developer\n'
                         'r2\tNurse\n')
        argv = self.worked_args('classify', 'wmd')
        argv[argv.index(self.refs)] = bad
        err = self.assertFails(2, argv)
        self.assertIn('bad.tsv:2:', err)

        argv = self.worked_args('classify', 'wmd')
        argv[argv.index(self.emb)] = os.path.join(self.tmp.name, 'missing')
        err = self.assertFails(2, argv)
        self.assertIn('missing', err)

        # Queries need gold labels for evaluation.
        queries = self.write('nogold.tsv', 'q1\tJava developer\n')
        argv = self.worked_args('evaluate', 'wmd')
        argv[argv.index(self.queries)] = queries
        self.assertIn('nogold.tsv:1:', self.assertFails(2, argv))

    def test_log_file(self):
        log = os.path.join(self.tmp.name, 'titlesim.log')
        refs = self.write('refs2.tsv', data.REFS_TSV +
                          'r9\tHappiness officer\tOfficer\t11\n')
        argv = self.worked_args('classify', 'wmd') + ['-k', '3', '--log',
                                                      log]
        argv[argv.index(self.refs)] = refs
        status, out, err = self.run_cli(*argv)
        self.assertEqual((status, err), (0, ''))
        with open(log) as f:
            self.assertIn("skipping reference 'r9'", f.read())


class LibraryLoggingTestCase(unittest.TestCase):
    """Test case for warnings raised outside the command line"""

    def setUp(self):
        self.logger = logging.getLogger('titlesim')
        self.propagate = self.logger.propagate
        self.logger.propagate = False

    def tearDown(self):
        self.logger.propagate = self.propagate

    def test_package_logger_has_null_handler(self):
        self.assertTrue(any(isinstance(h, logging.NullHandler)
                            for h in self.logger.handlers))

    def test_warnings_stay_off_stderr(self):
        table = EmbeddingTable(*data.table_matrix())
        refs = titlesim.load_refs(
            tsv(data.REFS_TSV + 'r9\tHappiness officer\tOfficer\t11\n'))
        with mock.patch('sys.stderr', new_callable=io.StringIO) as err:
            index = knn.build_index(refs, Strategy.WMD, table=table)
        self.assertEqual(len(index.skipped), 1)
        self.assertEqual(err.getvalue(), '')


class SweepCliTestCase(unittest.TestCase):
    """Test case for sweep-k on a synthetic collection"""

    @classmethod
    def setUpClass(cls):
        cls.tmp = tempfile.TemporaryDirectory()
        dataset = synthetic.make_separable_dataset(
            n_classes=5, refs_per_class=10, queries_per_class=2, seed=5)
        cls.refs, cls.queries, cls.emb, cls.docvecs = \
            synthetic.write_dataset(cls.tmp.name, dataset)

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    def sweep(self, strategy, *extra):
        out, err = io.StringIO(), io.StringIO()
        status = titlesim.run_argv(
            ['sweep-k', '--strategy', strategy, '--refs', self.refs,
             '--queries', self.queries, '--embeddings', self.emb,
             '--docvecs', self.docvecs] + list(extra), out, err)
        self.assertEqual(status, 0, err.getvalue())
        return out.getvalue()

    def test_twenty_rows(self):
        lines = self.sweep('avgw2v', '--k-min', '1', '--k-max',
                           '20').splitlines()
        self.assertEqual(lines[0], 'strategy,k,accuracy,n_queries,n_skipped')
        self.assertEqual(len(lines), 21)
        self.assertEqual([line.split(',')[1] for line in lines[1:]],
                         [str(k) for k in range(1, 21)])

    def test_several_strategies_to_file(self):
        csv = os.path.join(self.tmp.name, 'sweep.csv')
        out = self.sweep('bow,avgw2v,wmd,docvec', '--k-max', '5', '--out',
                         csv, '--workers', '2')
        self.assertEqual(out, '')
        with open(csv, 'rb') as f:
            first = f.read()
        rows = first.decode('utf-8').splitlines()[1:]
        self.assertEqual([r.split(',')[0] for r in rows],
                         ['bow'] * 5 + ['avgw2v'] * 5 + ['wmd'] * 5 +
                         ['docvec'] * 5)

        self.sweep('bow,avgw2v,wmd,docvec', '--k-max', '5', '--out', csv)
        with open(csv, 'rb') as f:
            self.assertEqual(f.read(), first)

    def test_cascade(self):
        lines = self.sweep('wmd', '--k-max', '3', '--cascade').splitlines()
        self.assertEqual(len(lines), 4)
        self.assertEqual(lines, self.sweep('wmd', '--k-max', '3',
                                           '--cascade').splitlines())


if __name__ == "__main__":
    unittest.main()  # run all tests
