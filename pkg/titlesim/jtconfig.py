# --------------------------------------------------------------------------- #
# MODULE DESCRIPTION                                                          #
# --------------------------------------------------------------------------- #
"""Job Title Configuration Module; contains default parameters and numerical
tolerances shared by the titlesim modules."""

# ------------------------------------------------------------------- #
# DATA                                                                #
# ------------------------------------------------------------------- #

# Strategy names as accepted on the command line, in display order.

STRATEGIES = ('bow', 'avgw2v', 'wmd', 'docvec')

# Strategies that need a word embedding table.

STRATEGIES_EMBEDDING = ('avgw2v', 'wmd')

# Number of neighbours. The fine stage of the original cascade used 20.

DEFAULT_K = 20
DEFAULT_K_MIN = 1
DEFAULT_K_MAX = 20

# Lower bound on the number of exact WMD evaluations before pruning starts.

PREFETCH_FLOOR = 50

# Coarse model: explained-variance retention threshold, label length and the
# maximum number of singular triples computed.

DEFAULT_Q_THRESHOLD = 0.8
DEFAULT_TOP_TERMS = 3
DEFAULT_R_MAX = 100

# Term-document matrices with at most this many cells are decomposed densely;
# anything larger goes through ARPACK.

DENSE_SVD_LIMIT = 4000000

# Numerical tolerances.

MARGINAL_TOL = 1e-9      # |sum(supplies) - sum(demands)|
NBOW_TOL = 1e-12         # nBOW weights sum to one within this
RANK_TOL = 1e-10         # singular values below RANK_TOL * sigma_1 are zero
REDUCED_COST_TOL = 1e-12
PRUNE_SLACK = 1e-9       # WCD must exceed the k-th best WMD by this to prune
SIGN_TOL = 1e-12         # "nonzero" for the SVD sign convention
MAX_PIVOTS = 10000

# Separator between the terms of a coarse cluster label.

LABEL_SEP = ' '

# Evaluation CSV.

CSV_HEADER = 'strategy,k,accuracy,n_queries,n_skipped'

# Process exit statuses.

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

# Log record format for --log files and --verbose.

LOG_FORMAT = '%(asctime)s %(name)s %(levelname)s: %(message)s'

# ------------------------------------------------------------------- #
# MODULE FUNCTIONS                                                    #
# ------------------------------------------------------------------- #


def gen_prefetch(k):
    """Return the default number of exact WMD evaluations for a top-k
    search."""

    return max(2 * k, PREFETCH_FLOOR)

