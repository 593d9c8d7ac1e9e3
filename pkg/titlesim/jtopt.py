# --------------------------------------------------------------------------- #
# MODULE DESCRIPTION                                                          #
# --------------------------------------------------------------------------- #
"""Job Title Options Module; contains RunConfig class."""

from titlesim import jtconfig
from titlesim.jterror import JTUsageError

# --------------------------------------------------------------------------- #
# DATA                                                                        #
# --------------------------------------------------------------------------- #

# Commands that classify query titles against a reference collection.

CMDS_QUERY = ('classify', 'evaluate', 'sweep-k', 'neighbors')

# Commands that need gold labels on every query.

CMDS_GOLD = ('evaluate', 'sweep-k')

# --------------------------------------------------------------------------- #
# CLASSES                                                                     #
# --------------------------------------------------------------------------- #


class RunConfig:
    """Class for storing the options of one command invocation."""

    def __init__(self):
        """Create new RunConfig object."""

        self.command = None
        self.args = []
        self.help = None
        # Strategy token, or a comma separated list of them for sweep-k.
        self.strategy = None
        # Input and output paths.
        self.refs = None
        self.queries = None
        self.embeddings = None
        self.docvecs = None
        self.out = None
        # Search and classification.
        self.k = jtconfig.DEFAULT_K
        self.k_min = jtconfig.DEFAULT_K_MIN
        self.k_max = jtconfig.DEFAULT_K_MAX
        self.prefetch = None
        self.exhaustive = None
        self.cascade = None
        self.workers = 1
        # Coarse model.
        self.q_threshold = jtconfig.DEFAULT_Q_THRESHOLD
        self.top_terms = jtconfig.DEFAULT_TOP_TERMS
        # Logging.
        self.verbose = None
        self.log = None

    def strategies(self):
        """Return the list of strategy tokens given with --strategy."""

        if not self.strategy:
            return []
        return [i.strip() for i in self.strategy.split(',') if i.strip()]

    def check(self):
        """Raise JTUsageError if the options are inconsistent for the
        chosen command."""

        cmd = self.command

        if cmd in CMDS_QUERY:
            tokens = self.strategies()
            if not tokens:
                raise JTUsageError("--strategy is required for %s" % cmd)
            if len(tokens) > 1 and cmd != 'sweep-k':
                raise JTUsageError("--strategy takes a single strategy for %s"
                                   % cmd)
            for token in tokens:
                if token not in jtconfig.STRATEGIES:
                    raise JTUsageError("--strategy: unknown strategy '%s'"
                                       % token)
                if token in jtconfig.STRATEGIES_EMBEDDING and \
                        not self.embeddings:
                    raise JTUsageError("--embeddings is required for "
                                       "strategy %s" % token)
                if token == 'docvec' and not self.docvecs:
                    raise JTUsageError("--docvecs is required for "
                                       "strategy docvec")
            if not self.refs:
                raise JTUsageError("--refs is required for %s" % cmd)
            if not self.queries:
                raise JTUsageError("--queries is required for %s" % cmd)
        elif cmd == 'discover-taxonomy':
            if not self.refs:
                raise JTUsageError("--refs is required for %s" % cmd)
        elif cmd == 'embeddings-info':
            if not self.embeddings:
                raise JTUsageError("--embeddings is required for %s" % cmd)
        elif cmd == 'analogy':
            if not self.embeddings:
                raise JTUsageError("--embeddings is required for %s" % cmd)
            if len(self.args) != 3:
                raise JTUsageError("analogy takes exactly three words")

        if self.k < 1:
            raise JTUsageError("--k must be at least 1")
        if not 1 <= self.k_min <= self.k_max:
            raise JTUsageError("--k-min/--k-max need 1 <= k-min <= k-max")
        if self.prefetch is not None:
            k = self.k_max if cmd == 'sweep-k' else self.k
            if self.prefetch < k:
                raise JTUsageError("--prefetch must be at least k (%d)" % k)
        if not 0.0 < self.q_threshold <= 1.0:
            raise JTUsageError("--q-threshold must be in (0, 1]")
        if self.top_terms < 1:
            raise JTUsageError("--top-terms must be at least 1")
        if self.workers < 1:
            raise JTUsageError("--workers must be at least 1")
