# --------------------------------------------------------------------------- #
# MODULE DESCRIPTION                                                          #
# --------------------------------------------------------------------------- #
"""Job Title kNN Module; contains the reference index, exhaustive and
WCD-pruned nearest neighbour search, majority vote classification and the
coarse -> vertical cascade."""

import bisect
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse

from titlesim import jtconfig, lingo, textmodel, transport
from titlesim.jterror import JTDataError, JTUsageError, JTWarningError
from titlesim.strategies import DocRepresentation, Strategy, is_zero, represent

log = logging.getLogger(__name__)

# --------------------------------------------------------------------------- #
# CLASSES                                                                     #
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class LabeledRef:
    """A reference title with its occupation label and optional coarse
    (SOC major) label."""

    doc: textmodel.Document
    fine_label: str
    coarse_label: Optional[str] = None

    def __post_init__(self):
        if not self.fine_label:
            raise JTDataError("reference '%s' has an empty label" %
                              self.doc.id)


@dataclass(frozen=True)
class Neighbor:
    ref_index: int
    dist: float


@dataclass(frozen=True)
class Prediction:
    """Voted label, the neighbours it was voted from (nearest first) and
    the vote count of every label among them."""

    label: str
    neighbors: tuple
    vote_counts: dict


class KnnIndex:
    """Immutable labelled reference collection with the representation of
    every reference precomputed for one strategy.

    Use build_index() to create one; references that cannot be represented
    are left out and kept in skipped as JTWarningError objects."""

    def __init__(self, strategy, refs, reps, stats=None, table=None,
                 docvecs=None, skipped=()):
        """Create new KnnIndex object."""

        if len(refs) != len(reps):
            raise JTDataError("%d references for %d representations" %
                              (len(refs), len(reps)))
        if not refs:
            raise JTDataError("no reference title could be represented")
        for rep in reps:
            if rep.kind is not strategy:
                raise JTDataError("representation of kind %s in a %s index"
                                  % (rep.kind.token, strategy.token))

        self.strategy = strategy
        self.refs = tuple(refs)
        self.reps = tuple(reps)
        self.stats = stats
        self.table = table
        self.docvecs = docvecs
        self.skipped = tuple(skipped)
        self._prepare()

    def __len__(self):
        return len(self.refs)

    def _prepare(self):
        """Stack the representations for vectorised scans."""

        if self.strategy is Strategy.BOW_COSINE:
            terms = sorted(set().union(*(r.payload.entries for r in self.reps)))
            self._term_index = {t: i for i, t in enumerate(terms)}
            rows, cols, vals = [], [], []
            for i, rep in enumerate(self.reps):
                for token, weight in rep.payload.entries.items():
                    rows.append(i)
                    cols.append(self._term_index[token])
                    vals.append(weight)
            self._matrix = scipy.sparse.csr_matrix(
                (vals, (rows, cols)), shape=(len(self.reps), len(terms)),
                dtype=np.float64)
            self._norms = np.sqrt(
                np.asarray(self._matrix.multiply(self._matrix).sum(axis=1))
                .ravel())
        elif self.strategy is Strategy.WMD:
            self._dists = [transport.distribution(r.payload, self.table)
                           for r in self.reps]
            self._centroids = np.vstack([d.centroid() for d in self._dists])
        else:
            self._matrix = np.vstack([r.payload for r in self.reps])
            self._norms = np.linalg.norm(self._matrix, axis=1)

    def represent(self, doc):
        """Representation of a query document under the index strategy."""

        rep = represent(doc, self.strategy, self.stats, self.table,
                        self.docvecs)
        if is_zero(rep):
            raise JTDataError("zero vector for '%s'" % doc.raw)
        return rep

    def distances(self, query):
        """Distance from query to every reference, in reference order."""

        self._check_kind(query)

        if self.strategy is Strategy.WMD:
            src = transport.distribution(query.payload, self.table)
            return np.array([transport.emd(src, dst).objective
                             for dst in self._dists])

        if self.strategy is Strategy.BOW_COSINE:
            vec = np.zeros(self._matrix.shape[1])
            for token, weight in query.payload.entries.items():
                j = self._term_index.get(token)
                if j is not None:
                    vec[j] = weight
            qnorm = query.payload.norm()
            dots = self._matrix @ vec
        else:
            vec = np.asarray(query.payload, dtype=np.float64)
            if vec.shape != (self._matrix.shape[1], ):
                raise JTDataError("query dimension %d, index dimension %d"
                                  % (vec.size, self._matrix.shape[1]))
            qnorm = float(np.linalg.norm(vec))
            dots = self._matrix @ vec

        if qnorm == 0.0:
            raise JTDataError("zero vector")
        return 1.0 - np.clip(dots / (self._norms * qnorm), -1.0, 1.0)

    def bounds(self, query):
        """WCD lower bound from query to every reference (wmd indexes)."""

        self._check_kind(query)
        if self.strategy is not Strategy.WMD:
            raise JTDataError("lower bounds need a wmd index")
        src = transport.distribution(query.payload, self.table)
        return np.linalg.norm(self._centroids - src.centroid(), axis=1)

    def _check_kind(self, query):
        if query.kind is not self.strategy:
            raise JTDataError("%s query against a %s index" %
                              (query.kind.token, self.strategy.token))

    def neighbors_for(self, doc, k, prefetch=None, exhaustive=False):
        """Return (index, neighbours) for a query document: the index
        searched (self) and its k nearest references."""

        query = self.represent(doc)
        if self.strategy is Strategy.WMD and not exhaustive:
            return self, search_wmd_pruned(self, query, k, prefetch)
        return self, search(self, query, k)

    def classify(self, doc, k, prefetch=None, exhaustive=False):
        """Majority vote over the k nearest references of doc."""

        index, neighbors = self.neighbors_for(doc, k, prefetch, exhaustive)
        return vote(index, neighbors)


class Cascade:
    """Coarse cluster model routing each query to one vertical index."""

    def __init__(self, coarse, verticals):
        """Create new Cascade from a ClusterModel and a map coarse label ->
        KnnIndex."""

        if not verticals:
            raise JTDataError("cascade without vertical indexes")
        if coarse.stats is None:
            raise JTDataError("coarse model has no corpus statistics; "
                              "fit it with fit_coarse_model")
        kinds = set(index.strategy for index in verticals.values())
        if len(kinds) != 1:
            raise JTDataError("vertical indexes mix strategies")
        self.coarse = coarse
        self.verticals = dict(verticals)
        self.strategy = kinds.pop()

    def route(self, doc):
        """Return the coarse label of the vertical doc belongs to."""

        vec = textmodel.tfidf(doc, self.coarse.stats)
        if not vec:
            raise JTDataError("coarse assignment failed for '%s': no "
                              "informative terms" % doc.raw)
        scores = lingo.assign_scores(vec, self.coarse)
        cluster = int(np.argmax(scores))
        if scores[cluster] <= jtconfig.SIGN_TOL:
            raise JTDataError("coarse assignment failed for '%s': no term "
                              "in common with the coarse model" % doc.raw)

        label = self.coarse.clusters[cluster].coarse_label
        if label is None or label not in self.verticals:
            raise JTDataError("no vertical index for coarse label %r "
                              "(cluster %d)" % (label, cluster))
        return label

    def neighbors_for(self, doc, k, prefetch=None, exhaustive=False):
        """Return (vertical index, neighbours) for a query document."""

        index = self.verticals[self.route(doc)]
        return index.neighbors_for(doc, k, prefetch, exhaustive)

    def classify(self, doc, k, prefetch=None, exhaustive=False):
        """Classify doc within its predicted vertical."""

        index, neighbors = self.neighbors_for(doc, k, prefetch, exhaustive)
        return vote(index, neighbors)


# --------------------------------------------------------------------------- #
# INDEX CONSTRUCTION                                                          #
# --------------------------------------------------------------------------- #


def build_index(refs, strategy, stats=None, table=None, docvecs=None):
    """Represent every reference and return a KnnIndex.

    For the bow strategy the corpus statistics default to those of the
    reference titles themselves."""

    refs = list(refs)
    if not refs:
        raise JTDataError("no reference titles")
    if strategy is Strategy.BOW_COSINE and stats is None:
        stats = textmodel.build_corpus_stats(r.doc for r in refs)

    kept, reps, skipped = [], [], []
    for ref in refs:
        try:
            rep = represent(ref.doc, strategy, stats, table, docvecs)
            if is_zero(rep):
                raise JTDataError("zero vector")
        except JTDataError as err:
            warn = JTWarningError("skipping reference '%s' (%s): %s" %
                                  (ref.doc.id, ref.doc.raw, err.mesg))
            log.warning(warn.mesg)
            skipped.append(warn)
            continue
        kept.append(ref)
        reps.append(rep)

    if not kept:
        raise JTDataError("none of the %d reference titles could be "
                          "represented under %s" % (len(refs), strategy.token))

    return KnnIndex(strategy, kept, reps, stats, table, docvecs, skipped)


def build_cascade(refs, strategy, table=None, docvecs=None,
                  q=jtconfig.DEFAULT_Q_THRESHOLD,
                  top_terms=jtconfig.DEFAULT_TOP_TERMS,
                  r_max=jtconfig.DEFAULT_R_MAX):
    """Fit the coarse model on all reference titles and build one index per
    coarse label."""

    refs = list(refs)
    groups = defaultdict(list)
    for ref in refs:
        if ref.coarse_label is None:
            raise JTDataError("reference '%s' has no coarse label" %
                              ref.doc.id)
        groups[ref.coarse_label].append(ref)

    coarse = lingo.fit_coarse_model(refs, q, top_terms, r_max)
    verticals = {}
    for label in sorted(groups):
        verticals[label] = build_index(groups[label], strategy, None, table,
                                       docvecs)
        log.debug("vertical %s: %d references", label, len(verticals[label]))
    return Cascade(coarse, verticals)


# --------------------------------------------------------------------------- #
# SEARCH                                                                      #
# --------------------------------------------------------------------------- #


def search(index, query, k):
    """Exhaustive k nearest neighbours, ordered by (distance, ref_index)."""

    if k < 1:
        raise JTUsageError("k must be at least 1")
    dists = index.distances(query)
    order = np.argsort(dists, kind='stable')[:k]
    return [Neighbor(int(i), float(dists[i])) for i in order]


def search_wmd_pruned(index, query, k, prefetch=None):
    """Exact k nearest neighbours under WMD using the WCD lower bound.

    References are visited in ascending WCD order. The first prefetch of
    them are always evaluated exactly; after that a reference whose WCD
    exceeds the current k-th best WMD cannot enter the result, and neither
    can any reference after it. The result is identical to search()."""

    if index.strategy is not Strategy.WMD:
        raise JTDataError("pruned search needs a wmd index, not %s" %
                          index.strategy.token)
    if k < 1:
        raise JTUsageError("k must be at least 1")
    if prefetch is None:
        prefetch = jtconfig.gen_prefetch(k)
    if prefetch < k:
        raise JTUsageError("prefetch (%d) must be at least k (%d)" %
                           (prefetch, k))
    if isinstance(query, textmodel.NBow):
        query = DocRepresentation(Strategy.WMD, query)

    bounds = index.bounds(query)
    src = transport.distribution(query.payload, index.table)
    best = []
    evaluated = 0

    for rank, i in enumerate(np.argsort(bounds, kind='stable')):
        if rank >= prefetch and len(best) == k and \
                bounds[i] > best[-1][0] + jtconfig.PRUNE_SLACK:
            break
        dist = transport.emd(src, index._dists[i]).objective
        evaluated += 1
        entry = (dist, int(i))
        if len(best) < k or entry < best[-1]:
            bisect.insort(best, entry)
            del best[k:]

    log.debug("wmd search: %d of %d references evaluated exactly",
              evaluated, len(index))
    return [Neighbor(i, d) for d, i in best]


# --------------------------------------------------------------------------- #
# CLASSIFICATION                                                              #
# --------------------------------------------------------------------------- #


def vote(index, neighbors):
    """Majority vote over the fine labels of the neighbours. Ties go to the
    label with the smaller summed distance, then to the smaller label."""

    if not neighbors:
        raise JTDataError("no neighbours to vote over")

    counts = Counter()
    summed = defaultdict(float)
    for nbr in neighbors:
        label = index.refs[nbr.ref_index].fine_label
        counts[label] += 1
        summed[label] += nbr.dist

    label = min(counts, key=lambda l: (-counts[l], summed[l], l))
    return Prediction(label, tuple(neighbors), dict(sorted(counts.items())))


def classify(index, query_doc, k, prefetch=None, exhaustive=False):
    """Classify a query title by its k nearest references."""

    return index.classify(query_doc, k, prefetch, exhaustive)


def classify_cascade(coarse, verticals, query_doc, k, prefetch=None,
                     exhaustive=False):
    """Assign the query to a coarse cluster, then classify it within that
    cluster's vertical index only."""

    return Cascade(coarse, verticals).classify(query_doc, k, prefetch,
                                               exhaustive)
