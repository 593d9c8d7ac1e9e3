# --------------------------------------------------------------------------- #
# MODULE DESCRIPTION                                                          #
# --------------------------------------------------------------------------- #
"""Job Title Evaluation Module; accuracy, the k sweep and CSV export."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from titlesim import jtconfig
from titlesim.jterror import JTDataError, JTUsageError
from titlesim.knn import vote
from titlesim.textmodel import Document

log = logging.getLogger(__name__)

# --------------------------------------------------------------------------- #
# CLASSES                                                                     #
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class EvalCase:
    """A query title with its human-assigned label."""

    query: Document
    gold_label: str

    def __post_init__(self):
        if not self.gold_label:
            raise JTDataError("query '%s' has an empty gold label" %
                              self.query.id)


@dataclass(frozen=True)
class SweepRow:
    strategy: str
    k: int
    accuracy: float
    n_queries: int
    n_skipped: int


@dataclass(frozen=True)
class SweepResult:
    rows: tuple = ()

    def __add__(self, other):
        return SweepResult(self.rows + other.rows)

    def __len__(self):
        return len(self.rows)


# --------------------------------------------------------------------------- #
# MODULE FUNCTIONS                                                            #
# --------------------------------------------------------------------------- #


def accuracy(predictions, gold):
    """Return (accuracy, n_skipped).

    None predictions are skipped (unrepresentable queries) and left out of
    the denominator; if every query is skipped the accuracy is 0."""

    predictions, gold = list(predictions), list(gold)
    if len(predictions) != len(gold):
        raise JTDataError("%d predictions for %d gold labels" %
                          (len(predictions), len(gold)))

    skipped = sum(1 for p in predictions if p is None)
    scored = len(predictions) - skipped
    if not scored:
        return 0.0, skipped
    correct = sum(1 for p, g in zip(predictions, gold)
                  if p is not None and p == g)
    return correct / scored, skipped


def neighbor_lists(classifier, cases, k, prefetch=None, exhaustive=False,
                   workers=1):
    """Search every case once at k. Returns one (index, neighbours) pair per
    case, in case order, or None where the query cannot be represented."""

    def search_one(case):
        try:
            return classifier.neighbors_for(case.query, k, prefetch,
                                            exhaustive)
        except JTDataError as err:
            log.warning("skipping query '%s': %s", case.query.id, err.mesg)
            return None

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(search_one, cases))
    return [search_one(case) for case in cases]


def sweep_k(classifier, cases, k_min=jtconfig.DEFAULT_K_MIN,
            k_max=jtconfig.DEFAULT_K_MAX, prefetch=None, exhaustive=False,
            workers=1, name=None):
    """Accuracy of classifier (a KnnIndex or Cascade) for every k in
    [k_min, k_max].

    Each query is searched once at k_max and the neighbour list is cut back
    to every smaller k, which gives the same neighbours as searching at that
    k directly."""

    cases = list(cases)
    if not cases:
        raise JTDataError("no evaluation cases")
    if not 1 <= k_min <= k_max:
        raise JTUsageError("need 1 <= k_min <= k_max (got %d, %d)" %
                           (k_min, k_max))

    found = neighbor_lists(classifier, cases, k_max, prefetch, exhaustive,
                           workers)
    gold = [case.gold_label for case in cases]
    name = name or classifier.strategy.token

    rows = []
    for k in range(k_min, k_max + 1):
        predictions = [None if f is None else vote(f[0], f[1][:k]).label
                       for f in found]
        acc, skipped = accuracy(predictions, gold)
        rows.append(SweepRow(name, k, acc, len(cases), skipped))
    return SweepResult(tuple(rows))


def compare_strategies(classifiers, cases, k_min=jtconfig.DEFAULT_K_MIN,
                       k_max=jtconfig.DEFAULT_K_MAX, prefetch=None,
                       exhaustive=False, workers=1):
    """Sweep several (name, classifier) pairs over the same cases and
    concatenate the results in the given order."""

    result = SweepResult()
    for name, classifier in classifiers:
        result += sweep_k(classifier, cases, k_min, k_max, prefetch,
                          exhaustive, workers, name)
    return result


def export_csv(result, sink):
    """Write a SweepResult as CSV to a binary stream."""

    lines = [jtconfig.CSV_HEADER]
    for row in result.rows:
        lines.append('%s,%d,%.6f,%d,%d' % (row.strategy, row.k, row.accuracy,
                                           row.n_queries, row.n_skipped))
    try:
        sink.write(('\n'.join(lines) + '\n').encode('utf-8'))
    except (OSError, ValueError) as err:
        raise JTDataError("cannot write CSV: %s" % err)
