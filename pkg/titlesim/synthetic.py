# --------------------------------------------------------------------------- #
# MODULE DESCRIPTION                                                          #
# --------------------------------------------------------------------------- #
"""Job Title Synthetic Data Module; planted, class-separable title
collections for benchmarks and tests.

Every class owns a private vocabulary. Its word vectors (and the paragraph
vectors of its titles) are the class centre plus small Gaussian noise, so
the within-class spread stays well below the distance between classes.
"""

import os
from dataclasses import dataclass

import numpy as np

from titlesim.embeddings import DocVecTable, EmbeddingTable, save_embeddings
from titlesim.harness import EvalCase
from titlesim.knn import LabeledRef
from titlesim.textmodel import Document

# --------------------------------------------------------------------------- #
# CLASSES                                                                     #
# --------------------------------------------------------------------------- #


@dataclass(frozen=True, eq=False)
class SyntheticDataset:
    table: EmbeddingTable
    docvecs: DocVecTable
    refs: tuple
    cases: tuple


# --------------------------------------------------------------------------- #
# MODULE FUNCTIONS                                                            #
# --------------------------------------------------------------------------- #


def class_label(c):
    return 'class%02d' % c


def make_separable_dataset(n_classes=20, refs_per_class=50,
                           queries_per_class=5, dim=32, words_per_class=6,
                           title_len=(2, 4), noise=0.1, n_groups=2, seed=0):
    """Build a SyntheticDataset.

    Class c uses the words 'c<c>w<j>'; reference titles are labelled
    class<c> with coarse label g<group>, the classes being split evenly
    into n_groups coarse groups. noise is the expected norm of the
    perturbation added to the unit-norm class centre."""

    rng = np.random.default_rng(seed)
    centres = rng.normal(size=(n_classes, dim))
    centres /= np.linalg.norm(centres, axis=1, keepdims=True)
    sigma = noise / np.sqrt(dim)

    words, vectors = [], []
    for c in range(n_classes):
        for j in range(words_per_class):
            words.append('c%dw%d' % (c, j))
            vectors.append(centres[c] + rng.normal(scale=sigma, size=dim))
    table = EmbeddingTable(words, np.array(vectors))

    def title(c):
        size = rng.integers(title_len[0], title_len[1] + 1)
        picks = rng.integers(0, words_per_class, size=size)
        return ' '.join('c%dw%d' % (c, j) for j in picks)

    refs, cases, doc_ids, doc_vectors = [], [], [], []
    for c in range(n_classes):
        group = 'g%d' % (c * n_groups // n_classes)
        for i in range(refs_per_class):
            doc = Document.from_title('r%d_%d' % (c, i), title(c))
            refs.append(LabeledRef(doc, class_label(c), group))
            doc_ids.append(doc.id)
            doc_vectors.append(centres[c] + rng.normal(scale=sigma, size=dim))
        for i in range(queries_per_class):
            doc = Document.from_title('q%d_%d' % (c, i), title(c))
            cases.append(EvalCase(doc, class_label(c)))
            doc_ids.append(doc.id)
            doc_vectors.append(centres[c] + rng.normal(scale=sigma, size=dim))

    docvecs = DocVecTable(doc_ids, np.array(doc_vectors))
    return SyntheticDataset(table, docvecs, tuple(refs), tuple(cases))


def write_dataset(directory, dataset):
    """Write refs.tsv, queries.tsv, embeddings.txt and docvecs.txt into
    directory and return their paths in that order."""

    os.makedirs(directory, exist_ok=True)
    paths = [os.path.join(directory, name) for name in
             ('refs.tsv', 'queries.tsv', 'embeddings.txt', 'docvecs.txt')]

    with open(paths[0], 'wb') as out:
        for ref in dataset.refs:
            fields = [ref.doc.id, ref.doc.raw, ref.fine_label]
            if ref.coarse_label is not None:
                fields.append(ref.coarse_label)
            out.write(('\t'.join(fields) + '\n').encode('utf-8'))
    with open(paths[1], 'wb') as out:
        for case in dataset.cases:
            out.write(('%s\t%s\t%s\n' % (case.query.id, case.query.raw,
                                         case.gold_label)).encode('utf-8'))
    with open(paths[2], 'wb') as out:
        save_embeddings(dataset.table, out)
    with open(paths[3], 'wb') as out:
        save_embeddings(dataset.docvecs, out)

    return paths
