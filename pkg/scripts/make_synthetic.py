#! /usr/bin/env python

# --------------------------------------------------------------------------- #
# MODULE DESCRIPTION                                                          #
# --------------------------------------------------------------------------- #
"""Write a synthetic, class-separable job title collection.

Produces refs.tsv, queries.tsv, embeddings.txt and docvecs.txt in the given
directory, ready for 'titlesim sweep-k'.

"""

# System modules

import getopt
import sys

from titlesim.synthetic import make_separable_dataset, write_dataset

# --------------------------------------------------------------------------- #
# MAIN                                                                        #
# --------------------------------------------------------------------------- #


def usage():
    """Print command line usage and options."""

    print("Usage: make_synthetic.py [options] directory")
    print(" -c classes      Number of classes (default 20)")
    print(" -r refs         References per class (default 50)")
    print(" -q queries      Queries per class (default 5)")
    print(" -d dim          Embedding dimension (default 32)")
    print(" -n noise        Within-class noise (default 0.1)")
    print(" -g groups       Number of coarse labels (default 2)")
    print(" -s seed         Random seed (default 0)")


def main():
    """Program entry function."""

    try:
        opts, args = getopt.getopt(sys.argv[1:], 'c:r:q:d:n:g:s:h')
    except getopt.GetoptError as err:
        print(err)
        usage()
        sys.exit(1)

    params = {}
    try:
        for o, a in opts:
            if o == '-h':
                usage()
                sys.exit(0)
            elif o == '-c':
                params['n_classes'] = int(a)
            elif o == '-r':
                params['refs_per_class'] = int(a)
            elif o == '-q':
                params['queries_per_class'] = int(a)
            elif o == '-d':
                params['dim'] = int(a)
            elif o == '-n':
                params['noise'] = float(a)
            elif o == '-g':
                params['n_groups'] = int(a)
            elif o == '-s':
                params['seed'] = int(a)
    except ValueError as err:
        print(err)
        usage()
        sys.exit(1)

    if len(args) != 1:
        usage()
        sys.exit(1)

    for path in write_dataset(args[0], make_separable_dataset(**params)):
        print(path)


if __name__ == "__main__":
    main()
