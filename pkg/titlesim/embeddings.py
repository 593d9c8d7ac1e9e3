# --------------------------------------------------------------------------- #
# MODULE DESCRIPTION                                                          #
# --------------------------------------------------------------------------- #
"""Job Title Embeddings Module; contains EmbeddingTable and DocVecTable and
the word-vector operations built on them (centroids, nearest words,
analogies).

Tables are read from the plain text interchange format: a header line
"V D" followed by V lines of a word and D decimal values.
"""

import logging

import numpy as np

from titlesim.jterror import JTDataError

log = logging.getLogger(__name__)

# --------------------------------------------------------------------------- #
# CLASSES                                                                     #
# --------------------------------------------------------------------------- #


class EmbeddingTable:
    """Word -> dense vector map backed by a single V x D matrix."""

    def __init__(self, words, matrix):
        """Create new EmbeddingTable from a word list and matching rows."""

        matrix = np.array(matrix, dtype=np.float64, ndmin=2)
        if matrix.shape[0] != len(words):
            raise JTDataError("%d words for %d vectors" %
                              (len(words), matrix.shape[0]))
        if matrix.shape[1] < 1:
            raise JTDataError("embedding dimension must be positive")

        self.words = list(words)
        self.vocab = {}
        for i, word in enumerate(self.words):
            if word in self.vocab:
                raise JTDataError("duplicate word '%s'" % word)
            self.vocab[word] = i
        self.matrix = matrix
        self.matrix.setflags(write=False)
        self.dim = matrix.shape[1]
        self._norms = None
        self._word_rank = None

    def __len__(self):
        return len(self.words)

    def __contains__(self, word):
        return word in self.vocab

    def vector(self, word):
        """Return the vector of an in-vocabulary word."""

        try:
            return self.matrix[self.vocab[word]]
        except KeyError:
            raise JTDataError("'%s' is not in the vocabulary" % word)

    def norms(self):
        """Return the L2 norm of every row."""

        if self._norms is None:
            self._norms = np.linalg.norm(self.matrix, axis=1)
        return self._norms

    def word_rank(self):
        """Return the lexicographic rank of every row's word."""

        if self._word_rank is None:
            order = sorted(range(len(self.words)), key=self.words.__getitem__)
            rank = np.empty(len(self.words), dtype=np.int64)
            rank[order] = np.arange(len(self.words))
            self._word_rank = rank
        return self._word_rank

    def rows(self, tokens):
        """Return the row indices of the in-vocabulary tokens, with
        multiplicity, in ascending row order."""

        return sorted(self.vocab[t] for t in tokens if t in self.vocab)

    def scaled(self, factor):
        """Return a copy of the table with every vector multiplied by
        factor."""

        return self.__class__(self.words, self.matrix * factor)


class DocVecTable(EmbeddingTable):
    """Document id -> externally trained paragraph vector."""

    @property
    def vectors(self):
        return {doc_id: self.matrix[i] for doc_id, i in self.vocab.items()}

    def vector(self, doc_id):
        """Return the vector of a document id."""

        try:
            return self.matrix[self.vocab[doc_id]]
        except KeyError:
            raise JTDataError("no document vector for '%s'" % doc_id)


# --------------------------------------------------------------------------- #
# LOADING AND SAVING                                                          #
# --------------------------------------------------------------------------- #


def load_embeddings(source, name=None, cls=EmbeddingTable):
    """Read a table in text interchange format from a binary stream.

    name is used in error messages (typically the file name)."""

    name = name or getattr(source, 'name', None) or '<embeddings>'
    lines = iter(source)

    try:
        header = next(lines)
    except StopIteration:
        raise JTDataError("missing 'V D' header", name, 1)

    fields = _decode(header, name, 1).split()
    try:
        if len(fields) != 2:
            raise ValueError
        n_words, dim = int(fields[0]), int(fields[1])
    except ValueError:
        raise JTDataError("bad header, expected 'V D'", name, 1)
    if n_words < 0 or dim < 1:
        raise JTDataError("bad header, expected V >= 0 and D >= 1", name, 1)

    words = []
    seen = {}
    matrix = np.empty((n_words, dim), dtype=np.float64)
    lineno = 1

    for lineno, line in enumerate(lines, 2):
        fields = _decode(line, name, lineno).split()
        if not fields and lineno == n_words + 2:
            # Tolerate one trailing empty line.
            continue
        if len(words) == n_words:
            raise JTDataError("more rows than the %d declared in the header"
                              % n_words, name, lineno)
        if len(fields) != dim + 1:
            raise JTDataError("expected a word and %d values, got %d values"
                              % (dim, max(len(fields) - 1, 0)), name, lineno)
        word = fields[0]
        if word in seen:
            raise JTDataError("duplicate word '%s' (first seen on line %d)"
                              % (word, seen[word]), name, lineno)
        try:
            matrix[len(words)] = [float(v) for v in fields[1:]]
        except ValueError:
            raise JTDataError("non-numeric value for '%s'" % word, name,
                              lineno)
        seen[word] = lineno
        words.append(word)

    if len(words) != n_words:
        raise JTDataError("header declares %d rows but %d were read" %
                          (n_words, len(words)), name, lineno)

    table = cls(words, matrix)
    log.debug("%s: loaded %d x %d", name, len(table), table.dim)
    return table


def load_docvecs(source, name=None):
    """Read a DocVecTable (same format, document ids in place of words)."""

    return load_embeddings(source, name, cls=DocVecTable)


def save_embeddings(table, sink):
    """Write a table to a binary stream in text interchange format."""

    sink.write(('%d %d\n' % (len(table), table.dim)).encode('ascii'))
    for word, row in zip(table.words, table.matrix):
        line = word + ' ' + ' '.join('%.9g' % v for v in row) + '\n'
        sink.write(line.encode('utf-8'))


def _decode(line, name, lineno):
    if isinstance(line, str):
        return line
    try:
        return line.decode('utf-8')
    except UnicodeDecodeError:
        raise JTDataError("not valid UTF-8", name, lineno)


# --------------------------------------------------------------------------- #
# VECTOR OPERATIONS                                                           #
# --------------------------------------------------------------------------- #


def centroid(tokens, table):
    """Mean vector of the in-vocabulary tokens, counted with multiplicity.

    Rows are summed in ascending row order, so the result does not depend on
    token order."""

    rows = table.rows(tokens)
    if not rows:
        raise JTDataError("no embeddable tokens in %s" % (list(tokens), ))
    return table.matrix[rows].sum(axis=0) / len(rows)


def nearest_words(query, n, table, exclude=()):
    """Return the n words most cosine-similar to query as (word, cosine)
    pairs, best first; equal similarities are ordered by word."""

    query = np.asarray(query, dtype=np.float64)
    qnorm = float(np.linalg.norm(query))
    if qnorm == 0.0:
        raise JTDataError("zero query vector")
    if n < 1:
        raise JTDataError("n must be at least 1")

    norms = table.norms()
    with np.errstate(divide='ignore', invalid='ignore'):
        cos = (table.matrix @ query) / (norms * qnorm)
    cos = np.where(norms > 0.0, cos, 0.0)

    keep = np.ones(len(table), dtype=bool)
    for word in exclude:
        if word in table.vocab:
            keep[table.vocab[word]] = False
    candidates = np.flatnonzero(keep)

    order = np.lexsort((table.word_rank()[candidates], -cos[candidates]))
    return [(table.words[i], float(cos[i])) for i in candidates[order[:n]]]


def analogy(a, b, c, table):
    """Return the word d completing "a is to b as c is to d", i.e. the word
    nearest to v(b) - v(a) + v(c) other than a, b and c."""

    for word in (a, b, c):
        if word not in table:
            raise JTDataError("'%s' is not in the vocabulary" % word)

    query = table.vector(b) - table.vector(a) + table.vector(c)
    found = nearest_words(query, 1, table, exclude={a, b, c})
    if not found:
        raise JTDataError("no candidate words left for the analogy")
    return found[0][0]


def norm_summary(table):
    """Return (min, mean, max) of the vector norms."""

    norms = table.norms()
    if not len(norms):
        return 0.0, 0.0, 0.0
    return float(norms.min()), float(norms.mean()), float(norms.max())
