# --------------------------------------------------------------------------- #
# MODULE DESCRIPTION                                                          #
# --------------------------------------------------------------------------- #
"""Job Title Coarse Model Module; truncated SVD of the TF-IDF term-document
matrix, cluster count and label discovery, and cosine assignment of titles
to clusters.

The number of clusters is the smallest number of singular directions that
retain a fraction q of the matrix energy; each retained term-space direction
is one cluster, labelled with its heaviest terms.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from titlesim import jtconfig, textmodel
from titlesim.jterror import JTDataError

log = logging.getLogger(__name__)

# --------------------------------------------------------------------------- #
# CLASSES                                                                     #
# --------------------------------------------------------------------------- #


@dataclass(frozen=True, eq=False)
class SvdFactors:
    """Retained singular triples of a term-document matrix.

    term_basis is terms x r (one orthonormal direction per column),
    doc_coords is documents x r. total_energy is the squared Frobenius norm
    of the whole matrix."""

    singular_values: np.ndarray
    term_basis: np.ndarray
    doc_coords: np.ndarray
    total_energy: float
    terms: tuple = ()

    def __len__(self):
        return len(self.singular_values)


@dataclass(frozen=True, eq=False)
class Cluster:
    label: str
    basis_direction: np.ndarray
    member_count: int
    coarse_label: Optional[str] = None


@dataclass(frozen=True, eq=False)
class ClusterModel:
    """Coarse clusters plus what is needed to vectorize new titles."""

    clusters: tuple
    q: float
    terms: tuple = ()
    stats: Optional[textmodel.CorpusStats] = None
    _basis: np.ndarray = field(init=False, repr=False)
    _term_index: dict = field(init=False, repr=False)

    def __post_init__(self):
        if not self.clusters:
            raise JTDataError("cluster model without clusters")
        object.__setattr__(self, '_basis', np.column_stack(
            [c.basis_direction for c in self.clusters]))
        object.__setattr__(self, '_term_index',
                           {t: i for i, t in enumerate(self.terms)})

    def __len__(self):
        return len(self.clusters)


# --------------------------------------------------------------------------- #
# DECOMPOSITION                                                               #
# --------------------------------------------------------------------------- #


def truncated_svd(matrix, r_max, terms=None):
    """Top min(r_max, rank) singular triples of a (dense or scipy sparse)
    terms x documents matrix.

    Singular values below RANK_TOL * sigma_1 are treated as zero and
    dropped, so an all-zero matrix yields no triples. Each term direction
    is signed so that its first nonzero coordinate is positive."""

    if r_max < 1:
        raise JTDataError("r_max must be at least 1")
    if scipy.sparse.issparse(matrix):
        matrix = matrix.tocsc().astype(np.float64)
        energy = float(matrix.multiply(matrix).sum())
    else:
        matrix = np.asarray(matrix, dtype=np.float64)
        if matrix.ndim != 2:
            raise JTDataError("term-document matrix must be 2-dimensional")
        energy = float(np.sum(matrix * matrix))

    n_terms, n_docs = matrix.shape
    if n_terms == 0 or n_docs == 0:
        raise JTDataError("empty term-document matrix")
    if terms is None:
        terms = tuple('t%d' % i for i in range(n_terms))
    if energy == 0.0:
        return SvdFactors(np.zeros(0), np.zeros((n_terms, 0)),
                          np.zeros((n_docs, 0)), 0.0, tuple(terms))

    small = min(n_terms, n_docs)
    if n_terms * n_docs <= jtconfig.DENSE_SVD_LIMIT or r_max >= small - 1:
        dense = matrix.toarray() if scipy.sparse.issparse(matrix) else matrix
        u, s, vt = scipy.linalg.svd(dense, full_matrices=False)
        log.debug("dense SVD of %dx%d", n_terms, n_docs)
    else:
        k = min(r_max, small - 1)
        v0 = np.full(small, 1.0 / np.sqrt(small))
        u, s, vt = scipy.sparse.linalg.svds(matrix, k=k, v0=v0,
                                            solver='arpack')
        order = np.argsort(-s, kind='stable')
        u, s, vt = u[:, order], s[order], vt[order]
        log.debug("ARPACK SVD of %dx%d, k=%d", n_terms, n_docs, k)

    keep = min(r_max, int(np.count_nonzero(s > jtconfig.RANK_TOL * s[0])))
    u, s, vt = u[:, :keep].copy(), s[:keep].copy(), vt[:keep].copy()

    for i in range(keep):
        nonzero = np.flatnonzero(np.abs(u[:, i]) > jtconfig.SIGN_TOL)
        if len(nonzero) and u[nonzero[0], i] < 0:
            u[:, i] = -u[:, i]
            vt[i] = -vt[i]

    return SvdFactors(s, u, (s[:, None] * vt).T, energy, tuple(terms))


# --------------------------------------------------------------------------- #
# CLUSTERS                                                                    #
# --------------------------------------------------------------------------- #


def retained_rank(factors, q):
    """Smallest r whose leading singular values retain a fraction q of the
    energy (all retained factors if q is never reached)."""

    if not 0.0 < q <= 1.0:
        raise JTDataError("q must be in (0, 1]")
    ratio = np.cumsum(factors.singular_values ** 2) / factors.total_energy
    r = int(np.searchsorted(ratio, q - 1e-12, side='left')) + 1
    return min(r, len(factors))


def discover_clusters(factors, q=jtconfig.DEFAULT_Q_THRESHOLD,
                      top_terms=jtconfig.DEFAULT_TOP_TERMS):
    """One cluster per retained singular direction, labelled with the
    top_terms heaviest terms of that direction."""

    if not len(factors):
        raise JTDataError("no singular factors")

    r = retained_rank(factors, q)
    if r == len(factors) and \
            np.sum(factors.singular_values ** 2) < q * factors.total_energy:
        log.warning("only %d factors computed; retention %.3f not reached",
                    r, q)

    rank = np.empty(len(factors.terms), dtype=np.int64)
    rank[sorted(range(len(factors.terms)), key=factors.terms.__getitem__)] = \
        np.arange(len(factors.terms))
    members = memberships(factors, r)
    counts = np.bincount(members[members >= 0], minlength=r)

    clusters = []
    for i in range(r):
        direction = factors.term_basis[:, i]
        weight = np.abs(direction)
        order = np.lexsort((rank, -weight))
        top = [factors.terms[j] for j in order[:top_terms]
               if weight[j] > jtconfig.SIGN_TOL]
        clusters.append(Cluster(jtconfig.LABEL_SEP.join(top),
                                direction.copy(), int(counts[i])))

    return ClusterModel(tuple(clusters), q, factors.terms)


def memberships(factors, r):
    """Cluster of every factorised document: its strongest coordinate among
    the first r directions (ties to the lower index), -1 for empty
    documents."""

    coords = np.abs(factors.doc_coords[:, :r])
    members = np.argmax(coords, axis=1)
    members[coords.max(axis=1) <= jtconfig.SIGN_TOL] = -1
    return members


def assign_scores(doc_vec, model):
    """|cosine| between a SparseVector and every cluster direction."""

    norm = doc_vec.norm()
    if norm == 0.0:
        raise JTDataError("zero document vector")

    vec = np.zeros(model._basis.shape[0])
    for token, weight in doc_vec.entries.items():
        j = model._term_index.get(token)
        if j is not None:
            vec[j] = weight
    return np.abs(model._basis.T @ vec) / norm


def assign(doc_vec, model):
    """Index of the cluster whose direction has the largest |cosine| with
    doc_vec; ties go to the lower index."""

    return int(np.argmax(assign_scores(doc_vec, model)))


def fit_coarse_model(refs, q=jtconfig.DEFAULT_Q_THRESHOLD,
                     top_terms=jtconfig.DEFAULT_TOP_TERMS,
                     r_max=jtconfig.DEFAULT_R_MAX):
    """Fit the coarse model on the TF-IDF of the reference titles.

    Every cluster is given the coarse label whose references carry the
    largest total |coordinate| along the cluster direction (ties to the
    smaller label)."""

    refs = [r for r in refs if r.doc.tokens]
    if not refs:
        raise JTDataError("no reference titles to fit the coarse model on")

    docs = [r.doc for r in refs]
    stats = textmodel.build_corpus_stats(docs)
    matrix, terms = textmodel.tfidf_matrix(docs, stats)
    factors = truncated_svd(matrix, r_max, terms)
    model = discover_clusters(factors, q, top_terms)

    coords = np.abs(factors.doc_coords[:, :len(model)])
    labels = sorted(set(r.coarse_label for r in refs
                        if r.coarse_label is not None))
    coarse = [None] * len(model)
    if labels:
        owner = np.array([r.coarse_label for r in refs], dtype=object)
        mass = np.vstack([coords[owner == l].sum(axis=0) for l in labels])
        for i, j in enumerate(np.argmax(mass, axis=0)):
            if mass[j, i] > jtconfig.SIGN_TOL:
                coarse[i] = labels[j]

    clusters = tuple(Cluster(c.label, c.basis_direction, c.member_count, l)
                     for c, l in zip(model.clusters, coarse))
    log.debug("coarse model: %d clusters from %d titles", len(clusters),
              len(docs))
    return ClusterModel(clusters, q, tuple(terms), stats)
