# --------------------------------------------------------------------------- #
# MODULE DESCRIPTION                                                          #
# --------------------------------------------------------------------------- #
"""Job Title Text Module; tokenization, corpus statistics and the sparse
document representations (normalized bag-of-words and TF-IDF)."""

import math
import re
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse

from titlesim.jterror import JTDataError

# --------------------------------------------------------------------------- #
# DATA                                                                        #
# --------------------------------------------------------------------------- #

# A token is a maximal run of letters and digits.

RE_TOKEN = re.compile(r'[^\W_]+')

# --------------------------------------------------------------------------- #
# CLASSES                                                                     #
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class Document:
    """A job title: identifier, original text and its tokens."""

    id: str
    raw: str
    tokens: tuple = ()

    @classmethod
    def from_title(cls, doc_id, raw):
        """Create a Document, tokenizing the raw title."""

        return cls(doc_id, raw, tuple(tokenize(raw)))


@dataclass(frozen=True)
class NBow:
    """Normalized bag-of-words: token -> relative frequency. Entries are
    kept in sorted token order."""

    entries: dict = field(default_factory=dict)

    @property
    def support_size(self):
        return len(self.entries)

    def tokens(self):
        return list(self.entries)


@dataclass(frozen=True)
class SparseVector:
    """Sparse term-weight vector. Zero weights are never stored."""

    entries: dict = field(default_factory=dict)

    def __bool__(self):
        return bool(self.entries)

    def norm(self):
        """Return the L2 norm."""

        return math.sqrt(sum(w * w for _, w in sorted(self.entries.items())))

    def dot(self, other):
        """Dot product, summed in token order so that a.dot(b) == b.dot(a)
        exactly."""

        common = set(self.entries).intersection(other.entries)
        return sum(self.entries[t] * other.entries[t] for t in sorted(common))


@dataclass(frozen=True)
class CorpusStats:
    """Document count and per-token document frequency of a collection."""

    doc_count: int
    doc_freq: dict

    def idf(self, token):
        """Inverse document frequency ln(N/df); unseen tokens get df = 1."""

        return math.log(self.doc_count / self.doc_freq.get(token, 1))

    def terms(self):
        return sorted(self.doc_freq)


# --------------------------------------------------------------------------- #
# MODULE FUNCTIONS                                                            #
# --------------------------------------------------------------------------- #


def tokenize(raw):
    """Lowercase and split on everything that is not a letter or digit.

    >>> tokenize('Senior Java Programmer, NY')
    ['senior', 'java', 'programmer', 'ny']
    """

    return RE_TOKEN.findall(raw.lower())


def nbow(doc):
    """Return the normalized bag-of-words of a document."""

    if not doc.tokens:
        raise JTDataError("empty document '%s'" % doc.id)

    counts = Counter(doc.tokens)
    total = len(doc.tokens)
    return NBow({t: counts[t] / total for t in sorted(counts)})


def build_corpus_stats(docs):
    """Count, for every token, the number of documents containing it."""

    docs = list(docs)
    if not docs:
        raise JTDataError("cannot build corpus statistics from no documents")

    doc_freq = Counter()
    for doc in docs:
        doc_freq.update(set(doc.tokens))
    return CorpusStats(len(docs), dict(doc_freq))


def tfidf(doc, stats):
    """Return the L2-normalized TF-IDF vector of a document.

    tf is the raw token count and idf is ln(N/df). Zero weights (tokens
    present in every document) are dropped; if nothing survives the empty
    (all-zero) vector is returned.
    """

    if not doc.tokens:
        raise JTDataError("empty document '%s'" % doc.id)

    weights = {}
    for token, count in sorted(Counter(doc.tokens).items()):
        weight = count * stats.idf(token)
        if weight != 0.0:
            weights[token] = weight

    norm = SparseVector(weights).norm()
    if norm == 0.0:
        return SparseVector()
    return SparseVector({t: w / norm for t, w in weights.items()})


def cosine_similarity(a, b):
    """Cosine similarity of two SparseVectors or two dense vectors."""

    if isinstance(a, SparseVector):
        na, nb = a.norm(), b.norm()
        dot = a.dot(b)
    else:
        a = np.asarray(a, dtype=np.float64)
        b = np.asarray(b, dtype=np.float64)
        if a.shape != b.shape:
            raise JTDataError("vector dimension mismatch (%d vs %d)" %
                              (a.size, b.size))
        na, nb = float(np.linalg.norm(a)), float(np.linalg.norm(b))
        dot = float(np.dot(a, b))

    if na == 0.0 or nb == 0.0:
        raise JTDataError("zero vector")

    return min(1.0, max(-1.0, dot / (na * nb)))


def tfidf_matrix(docs, stats, terms=None):
    """Return (matrix, terms): the terms x documents TF-IDF matrix of the
    given documents as a scipy CSC matrix, rows in sorted term order."""

    if terms is None:
        terms = stats.terms()
    term_index = {t: i for i, t in enumerate(terms)}

    rows, cols, vals = [], [], []
    for j, doc in enumerate(docs):
        for token, weight in tfidf(doc, stats).entries.items():
            i = term_index.get(token)
            if i is not None:
                rows.append(i)
                cols.append(j)
                vals.append(weight)

    matrix = scipy.sparse.csc_matrix((vals, (rows, cols)),
                                     shape=(len(terms), len(docs)),
                                     dtype=np.float64)
    return matrix, terms
