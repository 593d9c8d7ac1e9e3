"""Data for the worked "Senior Java Programmer, NY" example.

Axis 0 carries the software words, axis 1 seniority and location words and
axes 2-4 the nursing, driving and accounting words, so the three software
titles are the nearest references of the query under every strategy."""

import numpy as np

WORDS = {
    'java': [1.0, 0.1, 0.0, 0.0, 0.0],
    'j2ee': [0.95, 0.15, 0.0, 0.0, 0.0],
    'developer': [0.9, 0.2, 0.0, 0.0, 0.0],
    'programmer': [0.9, 0.05, 0.0, 0.0, 0.0],
    'engineer': [0.85, 0.1, 0.0, 0.0, 0.0],
    'matlab': [0.8, 0.3, 0.0, 0.0, 0.0],
    'senior': [0.2, 1.0, 0.0, 0.0, 0.0],
    'entry': [0.25, 0.9, 0.0, 0.0, 0.0],
    'level': [0.2, 0.95, 0.0, 0.0, 0.0],
    'new': [0.0, 1.0, 0.0, 0.0, 0.05],
    'york': [0.0, 1.0, 0.05, 0.0, 0.0],
    'ny': [0.0, 1.0, 0.0, 0.05, 0.0],
    'registered': [0.0, 0.0, 1.0, 0.0, 0.0],
    'nurse': [0.0, 0.0, 0.95, 0.0, 0.1],
    'night': [0.0, 0.2, 1.0, 0.0, 0.0],
    'truck': [0.0, 0.0, 0.1, 1.0, 0.0],
    'driver': [0.0, 0.0, 0.0, 1.0, 0.0],
    'staff': [0.0, 0.1, 0.0, 0.0, 1.0],
    'accountant': [0.0, 0.0, 0.0, 0.1, 1.0],
}

# (id, title, fine label, coarse label)
REFS = [
    ('r1', 'Entry-level Java Developer', 'Java Developer', '15'),
    ('r2', 'Matlab programmer New york', 'Matlab Developer', '15'),
    ('r3', 'J2EE engineer', 'Java Developer', '15'),
    ('r4', 'Registered Nurse', 'Nurse', '29'),
    ('r5', 'Night Nurse', 'Nurse', '29'),
    ('r6', 'Truck Driver', 'Driver', '53'),
    ('r7', 'Staff Accountant', 'Accountant', '13'),
]

QUERY = ('q1', 'Senior Java Programmer, NY', 'Java Developer')

NEAREST_IDS = {'r1', 'r2', 'r3'}

REFS_TSV = ''.join('%s\t%s\t%s\t%s\n' % ref for ref in REFS)
QUERIES_TSV = '%s\t%s\t%s\n' % QUERY


def table_lines():
    """The embedding table in interchange format."""

    lines = ['%d 5\n' % len(WORDS)]
    for word in sorted(WORDS):
        lines.append(word + ' ' + ' '.join(repr(v) for v in WORDS[word]) +
                     '\n')
    return ''.join(lines)


def table_matrix():
    words = sorted(WORDS)
    return words, np.array([WORDS[w] for w in words])
