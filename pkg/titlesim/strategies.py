# --------------------------------------------------------------------------- #
# MODULE DESCRIPTION                                                          #
# --------------------------------------------------------------------------- #
"""Job Title Strategies Module; one distance contract (smaller is nearer)
over the four title similarity strategies."""

import enum
from dataclasses import dataclass

import numpy as np

from titlesim import embeddings, textmodel, transport
from titlesim.jterror import JTDataError, JTUsageError

# --------------------------------------------------------------------------- #
# CLASSES                                                                     #
# --------------------------------------------------------------------------- #


class Strategy(enum.Enum):
    """Title similarity strategy; the value is the command line token."""

    BOW_COSINE = 'bow'
    AVG_W2V = 'avgw2v'
    WMD = 'wmd'
    DOC_VEC = 'docvec'

    @classmethod
    def from_token(cls, token):
        """Return the strategy for a command line token."""

        try:
            return cls(token)
        except ValueError:
            raise JTUsageError("unknown strategy '%s'" % token)

    @property
    def token(self):
        return self.value

    @property
    def is_cosine(self):
        return self is not Strategy.WMD

    @property
    def needs_table(self):
        return self in (Strategy.AVG_W2V, Strategy.WMD)


@dataclass(frozen=True, eq=False)
class DocRepresentation:
    """A document as seen by one strategy: SparseVector (bow), centroid
    (avgw2v), NBow (wmd) or loaded paragraph vector (docvec)."""

    kind: Strategy
    payload: object


# --------------------------------------------------------------------------- #
# MODULE FUNCTIONS                                                            #
# --------------------------------------------------------------------------- #


def represent(doc, strategy, stats=None, table=None, docvecs=None):
    """Build the representation of doc under strategy.

    Raises JTDataError when a prerequisite is missing or the document cannot
    be represented (all tokens out of vocabulary, no document vector)."""

    if strategy is Strategy.BOW_COSINE:
        if stats is None:
            raise JTDataError("bow strategy needs corpus statistics")
        return DocRepresentation(strategy, textmodel.tfidf(doc, stats))

    if strategy is Strategy.AVG_W2V:
        if table is None:
            raise JTDataError("avgw2v strategy needs an embedding table")
        return DocRepresentation(strategy,
                                 embeddings.centroid(doc.tokens, table))

    if strategy is Strategy.WMD:
        if table is None:
            raise JTDataError("wmd strategy needs an embedding table")
        bow = textmodel.nbow(doc)
        # Representable only if some mass survives the OOV filter.
        if not any(t in table.vocab for t in bow.entries):
            raise JTDataError("no embeddable tokens in '%s'" % doc.raw)
        return DocRepresentation(strategy, bow)

    if strategy is Strategy.DOC_VEC:
        if docvecs is None:
            raise JTDataError("docvec strategy needs document vectors")
        return DocRepresentation(strategy,
                                 np.array(docvecs.vector(doc.id)))

    raise JTUsageError("unknown strategy %r" % (strategy, ))


def distance(a, b, table=None):
    """Distance between two representations of the same kind: the WMD for
    wmd, 1 - cosine similarity (range [0, 2]) for the cosine kinds."""

    if a.kind is not b.kind:
        raise JTDataError("cannot compare %s with %s representations" %
                          (a.kind.token, b.kind.token))

    if a.kind is Strategy.WMD:
        if table is None:
            raise JTDataError("wmd distance needs an embedding table")
        return transport.wmd(a.payload, b.payload, table)

    return 1.0 - textmodel.cosine_similarity(a.payload, b.payload)


def is_zero(rep):
    """True if a cosine-kind representation is the zero vector."""

    if rep.kind is Strategy.BOW_COSINE:
        return not rep.payload
    if rep.kind.is_cosine:
        return not np.any(rep.payload)
    return False
