# --------------------------------------------------------------------------- #
# MODULE DESCRIPTION                                                          #
# --------------------------------------------------------------------------- #
"""Job title similarity command line interface."""

# System modules

import getopt
import io
import logging
import sys

from titlesim import __version__, embeddings, harness, jtconfig, knn, lingo
from titlesim.jterror import JTDataError, JTError, JTUsageError
from titlesim.jtopt import CMDS_GOLD, RunConfig
from titlesim.strategies import Strategy
from titlesim.textmodel import Document

# --------------------------------------------------------------------------- #
# DATA                                                                        #
# --------------------------------------------------------------------------- #

# Command name -> (command description, optional arguments)
#
CMDS = {
    'classify': ('Predict the label of every query title', ''),
    'evaluate': ('Accuracy of one strategy at one k', ''),
    'sweep-k': ('Accuracy of one or more strategies for every k', ''),
    'neighbors': ('Show the nearest reference titles of every query', ''),
    'discover-taxonomy': ('Show the coarse clusters of the reference titles',
                          ''),
    'embeddings-info': ('Show embedding table size and vector norms', ''),
    'analogy': ('Answer "A is to B as C is to ?"', 'A B C'),
}

# Command groups
#
CMDS_CLASSIFY = ('classify', 'neighbors')
CMDS_EVAL = ('evaluate', 'sweep-k')
CMDS_INFO = ('discover-taxonomy', 'embeddings-info', 'analogy')

# Command group descriptions
#
CMDS_GROUP_DESC = ((CMDS_CLASSIFY, 'Classification commands'),
                   (CMDS_EVAL, 'Evaluation commands'),
                   (CMDS_INFO, 'Information commands'))

# All commands
#
CMDS_ALL = tuple(CMDS.keys())
CMDS_SEARCH = CMDS_CLASSIFY + CMDS_EVAL

# Command option -> (long option, argument, option description,
#                    commands that use option)
#
CMDS_OPTS = (
    ('h', 'help', '', 'Display this usage', CMDS_ALL),
    ('v', 'verbose', '', 'Log debugging output to stderr', CMDS_ALL),
    ('', 'log', 'path', 'Append log records to file', CMDS_ALL),
    ('s', 'strategy', 'name', 'bow, avgw2v, wmd or docvec (sweep-k: a '
     'comma separated list)', CMDS_SEARCH),
    ('', 'refs', 'path', 'Reference titles TSV',
     CMDS_SEARCH + ('discover-taxonomy', )),
    ('', 'queries', 'path', 'Query titles TSV', CMDS_SEARCH),
    ('', 'embeddings', 'path', 'Word embedding file',
     CMDS_SEARCH + ('embeddings-info', 'analogy')),
    ('', 'docvecs', 'path', 'Document vector file', CMDS_SEARCH),
    ('o', 'out', 'path', 'Write the accuracy CSV to file', CMDS_EVAL),
    ('k', 'k', 'N', 'Number of neighbours (default %d)' % jtconfig.DEFAULT_K,
     CMDS_CLASSIFY + ('evaluate', )),
    ('', 'k-min', 'N', 'Smallest k of the sweep (default %d)' %
     jtconfig.DEFAULT_K_MIN, ('sweep-k', )),
    ('', 'k-max', 'N', 'Largest k of the sweep (default %d)' %
     jtconfig.DEFAULT_K_MAX, ('sweep-k', )),
    ('', 'prefetch', 'N', 'Exact WMD evaluations before pruning '
     '(default max(2k, %d))' % jtconfig.PREFETCH_FLOOR, CMDS_SEARCH),
    ('', 'exhaustive', '', 'Do not prune the wmd search', CMDS_SEARCH),
    ('', 'cascade', '', 'Classify within the predicted coarse vertical',
     CMDS_SEARCH),
    ('', 'workers', 'N', 'Evaluate queries in N threads', CMDS_EVAL),
    ('', 'q-threshold', 'X', 'Coarse model variance retention (default %g)'
     % jtconfig.DEFAULT_Q_THRESHOLD, CMDS_SEARCH + ('discover-taxonomy', )),
    ('', 'top-terms', 'N', 'Terms per cluster label (default %d)' %
     jtconfig.DEFAULT_TOP_TERMS, ('discover-taxonomy', )),
)

log = logging.getLogger('titlesim')

# --------------------------------------------------------------------------- #
# MAIN                                                                        #
# --------------------------------------------------------------------------- #


def main(argv=None):
    """Program entry function."""

    sys.exit(run_argv(sys.argv[1:] if argv is None else argv))


def run_argv(argv, out=None, err=None):
    """Parse a command line and run it; return the exit status."""

    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err

    try:
        opt = parse_args(argv)
    except JTUsageError as e:
        err.write('%s\n' % e)
        return jtconfig.EXIT_USAGE

    if opt.help:
        usage(opt, out)
        return jtconfig.EXIT_OK
    return run(opt, out, err)


def parse_args(argv):
    """Return a RunConfig for a command line (without the program name)."""

    argv = list(argv)
    opt = RunConfig()
    if argv and argv[0][:1] != '-':
        opt.command = argv.pop(0)

    shortopts = ''.join(o[0] + (':' if o[2] else '') for o in CMDS_OPTS
                        if o[0])
    longopts = [o[1] + ('=' if o[2] else '') for o in CMDS_OPTS]
    try:
        opts, args = getopt.gnu_getopt(argv, shortopts, longopts)
    except getopt.GetoptError as e:
        raise JTUsageError(str(e))

    for option, arg in opts:
        if option in ('-h', '--help'):
            opt.help = 1
        elif option in ('-v', '--verbose'):
            opt.verbose = 1
        elif option == '--log':
            opt.log = arg
        elif option in ('-s', '--strategy'):
            opt.strategy = arg
        elif option == '--refs':
            opt.refs = arg
        elif option == '--queries':
            opt.queries = arg
        elif option == '--embeddings':
            opt.embeddings = arg
        elif option == '--docvecs':
            opt.docvecs = arg
        elif option in ('-o', '--out'):
            opt.out = arg
        elif option in ('-k', '--k'):
            opt.k = _int(option, arg)
        elif option == '--k-min':
            opt.k_min = _int(option, arg)
        elif option == '--k-max':
            opt.k_max = _int(option, arg)
        elif option == '--prefetch':
            opt.prefetch = _int(option, arg)
        elif option == '--exhaustive':
            opt.exhaustive = 1
        elif option == '--cascade':
            opt.cascade = 1
        elif option == '--workers':
            opt.workers = _int(option, arg)
        elif option == '--q-threshold':
            try:
                opt.q_threshold = float(arg)
            except ValueError:
                raise JTUsageError("%s: '%s' is not a number" % (option, arg))
        elif option == '--top-terms':
            opt.top_terms = _int(option, arg)

    opt.args = args

    if opt.help:
        return opt
    if opt.command is None:
        raise JTUsageError("no command given, 'titlesim -h' lists them")
    if opt.command not in CMDS:
        raise JTUsageError("unknown command '%s'" % opt.command)
    if args and opt.command != 'analogy':
        raise JTUsageError("unexpected arguments: %s" % ' '.join(args))
    opt.check()
    return opt


def _int(option, arg):
    try:
        return int(arg)
    except ValueError:
        raise JTUsageError("%s: '%s' is not an integer" % (option, arg))


def usage(opt, out):
    """Print command line usage and options."""

    if opt.command and opt.command not in CMDS:
        out.write("Unknown command '%s'\n" % opt.command)
        opt.command = None

    if not opt.command:
        out.write("Usage: titlesim command [options]\n")
        for grp in CMDS_GROUP_DESC:
            out.write("%s:\n" % grp[1])
            for cmd in grp[0]:
                out.write("  %-20s %s\n" % (cmd, CMDS[cmd][0]))
        out.write("\n'titlesim command -h' for more info on a command's "
                  "options & usage.\n")
        out.write("titlesim %s\n" % __version__)
    else:
        out.write("%s\n" % CMDS[opt.command][0])
        out.write("Usage: titlesim %s [options] %s\n" %
                  (opt.command, CMDS[opt.command][1]))
        for short, long, arg, desc, cmds in CMDS_OPTS:
            if opt.command in cmds:
                flag = ('-%s, ' % short if short else '    ') + '--' + long
                out.write(" %-22s %-6s %s\n" % (flag, arg, desc))


def run(opt, out=None, err=None):
    """Run a checked RunConfig; return the exit status.

    Every failure is reported as exactly one line on err."""

    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err

    try:
        handlers = setup_logging(opt, err)
    except JTError as e:
        err.write('%s\n' % e)
        return jtconfig.EXIT_DATA

    try:
        # Call function for specific command.
        CMDS_FUNC[opt.command](opt, out)
    except JTUsageError as e:
        err.write('%s\n' % e)
        return jtconfig.EXIT_USAGE
    except JTError as e:
        err.write('%s\n' % e)
        return jtconfig.EXIT_DATA
    finally:
        for handler in handlers:
            log.removeHandler(handler)
            handler.close()

    return jtconfig.EXIT_OK


def setup_logging(opt, err):
    """Attach the handlers asked for by --log and --verbose to the titlesim
    logger and return them. Without either, records are dropped."""

    handlers = []
    formatter = logging.Formatter(jtconfig.LOG_FORMAT)

    if opt.log:
        try:
            handler = logging.FileHandler(opt.log, 'a', encoding='utf-8')
        except OSError as e:
            raise JTDataError("cannot open log file: %s" % e.strerror,
                              opt.log)
        handler.setFormatter(formatter)
        handlers.append(handler)
    if opt.verbose:
        handler = logging.StreamHandler(err)
        handler.setFormatter(formatter)
        handlers.append(handler)
    if not handlers:
        handlers.append(logging.NullHandler())

    for handler in handlers:
        log.addHandler(handler)
    log.setLevel(logging.DEBUG if opt.verbose else logging.INFO)
    log.propagate = False
    return handlers


# =========================================================================== #
# INPUT                                                                       #
# =========================================================================== #


def open_input(path):
    """Open a data file for binary reading."""

    try:
        return open(path, 'rb')
    except OSError as e:
        raise JTDataError("cannot open: %s" % e.strerror, path)


def _tsv_rows(source, name):
    """Yield (line number, fields) for every non-blank line of a TSV
    stream."""

    for lineno, line in enumerate(source, 1):
        try:
            line = line.decode('utf-8') if isinstance(line, bytes) else line
        except UnicodeDecodeError:
            raise JTDataError("not valid UTF-8", name, lineno)
        line = line.rstrip('\r\n')
        if not line.strip():
            continue
        yield lineno, line.split('\t')


def load_refs(source, name=None):
    """Read reference titles, 'id TAB title TAB fine_label [TAB
    coarse_label]' per line, into a list of LabeledRef."""

    name = name or getattr(source, 'name', None) or '<refs>'
    refs = []
    seen = {}

    for lineno, fields in _tsv_rows(source, name):
        if len(fields) not in (3, 4):
            raise JTDataError("expected 3 or 4 tab separated columns, got %d"
                              % len(fields), name, lineno)
        doc_id, title, fine = fields[:3]
        coarse = fields[3] if len(fields) == 4 else None
        if not doc_id:
            raise JTDataError("empty id", name, lineno)
        if not fine:
            raise JTDataError("empty fine label for '%s'" % doc_id, name,
                              lineno)
        if coarse == '':
            raise JTDataError("empty coarse label for '%s'" % doc_id, name,
                              lineno)
        if doc_id in seen:
            raise JTDataError("duplicate id '%s' (first seen on line %d)" %
                              (doc_id, seen[doc_id]), name, lineno)
        seen[doc_id] = lineno
        refs.append(knn.LabeledRef(Document.from_title(doc_id, title), fine,
                                   coarse))

    if not refs:
        raise JTDataError("no reference titles", name)
    return refs


def load_queries(source, name=None, gold=False):
    """Read query titles, 'id TAB title [TAB gold_label]' per line, into a
    list of (Document, gold label or None). With gold set every line must
    carry a label."""

    name = name or getattr(source, 'name', None) or '<queries>'
    queries = []
    seen = {}

    for lineno, fields in _tsv_rows(source, name):
        if len(fields) not in (2, 3):
            raise JTDataError("expected 2 or 3 tab separated columns, got %d"
                              % len(fields), name, lineno)
        doc_id, title = fields[:2]
        label = fields[2] if len(fields) == 3 else None
        if not doc_id:
            raise JTDataError("empty id", name, lineno)
        if doc_id in seen:
            raise JTDataError("duplicate id '%s' (first seen on line %d)" %
                              (doc_id, seen[doc_id]), name, lineno)
        if gold and not label:
            raise JTDataError("missing gold label for '%s'" % doc_id, name,
                              lineno)
        seen[doc_id] = lineno
        queries.append((Document.from_title(doc_id, title), label or None))

    if not queries:
        raise JTDataError("no query titles", name)
    return queries


def read_refs(opt):
    with open_input(opt.refs) as source:
        return load_refs(source, opt.refs)


def read_queries(opt):
    with open_input(opt.queries) as source:
        return load_queries(source, opt.queries, opt.command in CMDS_GOLD)


def read_embeddings(opt):
    with open_input(opt.embeddings) as source:
        return embeddings.load_embeddings(source, opt.embeddings)


def read_docvecs(opt):
    with open_input(opt.docvecs) as source:
        return embeddings.load_docvecs(source, opt.docvecs)


def build_classifier(opt, token, refs, table=None, docvecs=None):
    """Build the flat index or the cascade for one strategy."""

    strategy = Strategy.from_token(token)
    if strategy.needs_table and table is None:
        table = read_embeddings(opt)
    if strategy is Strategy.DOC_VEC and docvecs is None:
        docvecs = read_docvecs(opt)

    if opt.cascade:
        return knn.build_cascade(refs, strategy, table, docvecs,
                                 opt.q_threshold)
    return knn.build_index(refs, strategy, None, table, docvecs)


# =========================================================================== #
# COMMANDS                                                                    #
# =========================================================================== #


def classify(opt, out):
    """Print 'query_id TAB label' per query; the label is empty for a query
    that cannot be represented."""

    classifier = build_classifier(opt, opt.strategy, read_refs(opt))
    for doc, _ in read_queries(opt):
        try:
            label = classifier.classify(doc, opt.k, opt.prefetch,
                                        opt.exhaustive).label
        except JTDataError as e:
            log.warning("cannot classify '%s': %s", doc.id, e.mesg)
            label = ''
        out.write('%s\t%s\n' % (doc.id, label))


def neighbors(opt, out):
    """Print the k nearest reference titles of every query."""

    classifier = build_classifier(opt, opt.strategy, read_refs(opt))
    for doc, _ in read_queries(opt):
        try:
            index, found = classifier.neighbors_for(doc, opt.k, opt.prefetch,
                                                    opt.exhaustive)
        except JTDataError as e:
            log.warning("no neighbours for '%s': %s", doc.id, e.mesg)
            continue
        for rank, nbr in enumerate(found, 1):
            ref = index.refs[nbr.ref_index]
            out.write('%s\t%d\t%s\t%s\t%.6f\t%s\n' %
                      (doc.id, rank, ref.doc.id, ref.fine_label, nbr.dist,
                       ref.doc.raw))


def evaluate(opt, out):
    """Print the accuracy at k; write it as CSV with --out."""

    cases = [harness.EvalCase(doc, gold) for doc, gold in read_queries(opt)]
    classifier = build_classifier(opt, opt.strategy, read_refs(opt))
    result = harness.sweep_k(classifier, cases, opt.k, opt.k, opt.prefetch,
                             opt.exhaustive, opt.workers)
    row = result.rows[0]
    out.write('accuracy=%.6f n_queries=%d n_skipped=%d\n' %
              (row.accuracy, row.n_queries, row.n_skipped))
    if opt.out:
        write_csv(result, opt.out)


def sweep_k(opt, out):
    """Write the accuracy of every strategy for every k as CSV."""

    cases = [harness.EvalCase(doc, gold) for doc, gold in read_queries(opt)]
    refs = read_refs(opt)
    tokens = opt.strategies()
    table = read_embeddings(opt) if opt.embeddings and \
        set(tokens).intersection(jtconfig.STRATEGIES_EMBEDDING) else None
    docvecs = read_docvecs(opt) if 'docvec' in tokens else None

    classifiers = [(token, build_classifier(opt, token, refs, table, docvecs))
                   for token in tokens]
    result = harness.compare_strategies(classifiers, cases, opt.k_min,
                                        opt.k_max, opt.prefetch,
                                        opt.exhaustive, opt.workers)
    if opt.out:
        write_csv(result, opt.out)
    else:
        buf = io.BytesIO()
        harness.export_csv(result, buf)
        out.write(buf.getvalue().decode('utf-8'))


def write_csv(result, path):
    try:
        sink = open(path, 'wb')
    except OSError as e:
        raise JTDataError("cannot write: %s" % e.strerror, path)
    with sink:
        harness.export_csv(result, sink)


def discover_taxonomy(opt, out):
    """Print 'cluster_index TAB label TAB member_count' per coarse
    cluster."""

    model = lingo.fit_coarse_model(read_refs(opt), opt.q_threshold,
                                   opt.top_terms)
    for i, cluster in enumerate(model.clusters):
        out.write('%d\t%s\t%d\n' % (i, cluster.label, cluster.member_count))


def embeddings_info(opt, out):
    """Print 'V D' and the min/mean/max vector norm."""

    table = read_embeddings(opt)
    out.write('%d %d\n' % (len(table), table.dim))
    out.write('norm min=%.6f mean=%.6f max=%.6f\n' %
              embeddings.norm_summary(table))


def analogy(opt, out):
    """Print the word answering 'A is to B as C is to ?'."""

    a, b, c = opt.args
    out.write('%s\n' % embeddings.analogy(a, b, c, read_embeddings(opt)))


# Command name -> function
#
CMDS_FUNC = {
    'classify': classify,
    'evaluate': evaluate,
    'sweep-k': sweep_k,
    'neighbors': neighbors,
    'discover-taxonomy': discover_taxonomy,
    'embeddings-info': embeddings_info,
    'analogy': analogy,
}

if __name__ == "__main__":
    main()
