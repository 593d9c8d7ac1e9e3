# --------------------------------------------------------------------------- #
# MODULE DESCRIPTION                                                          #
# --------------------------------------------------------------------------- #
"""Job Title Transport Module; exact balanced transportation problem,
Word Mover's Distance and the Word Centroid Distance lower bound.

The solver is a primal transportation simplex: a northwest corner starting
basis followed by pivots on the spanning tree of basic cells. Entering and
leaving cells are chosen by Bland's rule (lowest row-major index), so
degenerate instances cannot cycle and identical input always gives the
identical plan.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from titlesim import jtconfig
from titlesim.jterror import JTDataError, JTFatalError

log = logging.getLogger(__name__)

# --------------------------------------------------------------------------- #
# CLASSES                                                                     #
# --------------------------------------------------------------------------- #


@dataclass(frozen=True, eq=False)
class DiscreteDistribution:
    """Weighted point set: one side of a WMD instance."""

    points: np.ndarray
    weights: np.ndarray
    tokens: tuple = field(default=())

    @property
    def dim(self):
        return self.points.shape[1]

    def centroid(self):
        """Weighted centroid sum(w_i * p_i)."""

        return self.weights @ self.points


@dataclass(frozen=True, eq=False)
class TransportPlan:
    """Optimal flow matrix and its cost."""

    flows: np.ndarray
    objective: float
    pivots: int = 0


# --------------------------------------------------------------------------- #
# TRANSPORTATION PROBLEM                                                      #
# --------------------------------------------------------------------------- #


def ground_cost_matrix(src, dst):
    """Euclidean distances between the points of two distributions."""

    if src.dim != dst.dim:
        raise JTDataError("dimension mismatch (%d vs %d)" % (src.dim, dst.dim))
    return cdist(src.points, dst.points, 'euclidean')


def solve_transport(supplies, demands, costs):
    """Solve min sum(flows * costs) subject to row sums = supplies and
    column sums = demands, flows >= 0. Returns a TransportPlan."""

    supplies = np.asarray(supplies, dtype=np.float64).ravel()
    demands = np.asarray(demands, dtype=np.float64).ravel()
    costs = np.asarray(costs, dtype=np.float64)
    m, n = len(supplies), len(demands)

    if m == 0 or n == 0:
        raise JTDataError("transport problem with no supplies or demands")
    if costs.shape != (m, n):
        raise JTDataError("cost matrix is %s, expected %dx%d" %
                          ('x'.join(map(str, costs.shape)), m, n))
    if np.any(supplies <= 0) or np.any(demands <= 0):
        raise JTDataError("supplies and demands must be positive")
    if not np.all(np.isfinite(costs)):
        raise JTDataError("cost matrix has non-finite entries")
    if np.any(costs < 0):
        raise JTDataError("negative cost entry")
    gap = abs(supplies.sum() - demands.sum())
    if gap > jtconfig.MARGINAL_TOL:
        raise JTDataError("infeasible marginals: supplies and demands differ"
                          " by %.3g" % gap)

    # A single source or sink forces the plan.
    if n == 1:
        flows = supplies.reshape(m, 1).copy()
        return TransportPlan(flows, float((flows * costs).sum()))
    if m == 1:
        flows = demands.reshape(1, n).copy()
        return TransportPlan(flows, float((flows * costs).sum()))

    cost = costs.tolist()
    flow, basis = _northwest_corner(supplies.tolist(), demands.tolist())
    tol = jtconfig.REDUCED_COST_TOL * max(1.0, float(costs.max()))
    pivots = _simplex(cost, flow, basis, m, n, tol)

    flows = np.array(flow, dtype=np.float64)
    return TransportPlan(flows, float((flows * costs).sum()), pivots)


def _northwest_corner(supplies, demands):
    """Return (flow, basis): a basic feasible solution with exactly
    m + n - 1 basic cells, zero-flow cells included."""

    m, n = len(supplies), len(demands)
    flow = [[0.0] * n for _ in range(m)]
    basis = set()
    i = j = 0

    while True:
        qty = min(supplies[i], demands[j])
        flow[i][j] = qty
        supplies[i] -= qty
        demands[j] -= qty
        basis.add((i, j))
        if i == m - 1 and j == n - 1:
            break
        if i == m - 1:
            j += 1
        elif j == n - 1:
            i += 1
        elif supplies[i] <= demands[j]:
            i += 1
        else:
            j += 1

    return flow, basis


def _simplex(cost, flow, basis, m, n, tol):
    """Pivot flow/basis in place to optimality. Returns the pivot count.

    Nodes 0..m-1 are sources and m..m+n-1 are sinks; each basic cell (i, j)
    is a tree edge between node i and node m + j."""

    for pivot in range(jtconfig.MAX_PIVOTS):
        adj = [[] for _ in range(m + n)]
        for i, j in sorted(basis):
            adj[i].append(m + j)
            adj[m + j].append(i)

        # Potentials u_i + v_j = c_ij on the tree, rooted at source 0.
        pot = [None] * (m + n)
        parent = [-1] * (m + n)
        depth = [0] * (m + n)
        pot[0] = 0.0
        queue = [0]
        for node in queue:
            for nxt in adj[node]:
                if pot[nxt] is None:
                    if node < m:
                        pot[nxt] = cost[node][nxt - m] - pot[node]
                    else:
                        pot[nxt] = cost[nxt][node - m] - pot[node]
                    parent[nxt] = node
                    depth[nxt] = depth[node] + 1
                    queue.append(nxt)

        if len(queue) != m + n:
            raise JTFatalError("transport basis is not a spanning tree")

        entering = _entering_cell(cost, pot, basis, m, n, tol)
        if entering is None:
            return pivot

        # Tree path from sink node m+j back to source node i closes the
        # cycle with the entering cell.
        i, j = entering
        a, b = i, m + j
        path_a, path_b = [a], [b]
        while a != b:
            if depth[a] >= depth[b]:
                a = parent[a]
                path_a.append(a)
            else:
                b = parent[b]
                path_b.append(b)
        nodes = path_b + path_a[-2::-1]

        minus, plus = [], []
        for e, (x, y) in enumerate(zip(nodes, nodes[1:])):
            cell = (x, y - m) if x < m else (y, x - m)
            (minus if e % 2 == 0 else plus).append(cell)

        leaving = min(minus, key=lambda c: (flow[c[0]][c[1]], c))
        theta = flow[leaving[0]][leaving[1]]

        flow[i][j] = theta
        for r, c in plus:
            flow[r][c] += theta
        for r, c in minus:
            flow[r][c] -= theta
        flow[leaving[0]][leaving[1]] = 0.0

        basis.remove(leaving)
        basis.add(entering)

    raise JTFatalError("transport solver did not converge in %d pivots" %
                       jtconfig.MAX_PIVOTS)


def _entering_cell(cost, pot, basis, m, n, tol):
    """First non-basic cell in row-major order with negative reduced cost."""

    for i in range(m):
        u_i = pot[i]
        row = cost[i]
        for j in range(n):
            if row[j] - u_i - pot[m + j] < -tol and (i, j) not in basis:
                return i, j
    return None


# --------------------------------------------------------------------------- #
# DOCUMENT DISTANCES                                                          #
# --------------------------------------------------------------------------- #


def distribution(bow, table):
    """Build the DiscreteDistribution of an NBow over an embedding table.

    Out-of-vocabulary tokens are dropped and the remaining weights are
    renormalized to sum to one."""

    tokens = [t for t in bow.entries if t in table.vocab]
    if not tokens:
        raise JTDataError("no embeddable tokens in %s" % (bow.tokens(), ))

    weights = np.array([bow.entries[t] for t in tokens], dtype=np.float64)
    weights /= weights.sum()
    points = table.matrix[[table.vocab[t] for t in tokens]]
    return DiscreteDistribution(points, weights, tuple(tokens))


def emd(src, dst):
    """Optimal TransportPlan between two prepared distributions."""

    return solve_transport(src.weights, dst.weights,
                           ground_cost_matrix(src, dst))


def wmd(a, b, table):
    """Word Mover's Distance between two NBows."""

    return emd(distribution(a, table), distribution(b, table)).objective


def wmd_plan(a, b, table):
    """Return (source tokens, target tokens, TransportPlan) for two NBows:
    which word's mass moves to which word, and at what cost."""

    src, dst = distribution(a, table), distribution(b, table)
    return src.tokens, dst.tokens, emd(src, dst)


def wcd(a, b, table):
    """Word Centroid Distance: Euclidean distance between the weighted
    centroids. Never larger than wmd(a, b, table)."""

    src, dst = distribution(a, table), distribution(b, table)
    return float(np.linalg.norm(src.centroid() - dst.centroid()))
