# Creation date: 18 Oct 2026
# Description: exclusivity graph of a KS set, its (weighted) independence
#   number and the KS-colorability decision.
"""Classical side of the noncontextuality inequality.

Vertices are the tests of a KS set, edges join orthogonal (mutually exclusive)
tests. The noncontextual bound of sum_i w_i P(Pi_i = 1) is the weighted
independence number of this graph.

Vertex sets are handled as Python integers used as bitmasks: bit k stands for
the k-th vertex in the graph's own order.
"""

import collections
import logging
from fractions import Fraction

import networkx as nx
import numpy as np

from kscert.ks_core import inner_product_exact

logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)

DEFAULT_MAX_VERTICES = 64
BRUTEFORCE_MAX_VERTICES = 25
KS21_WEIGHT = 2


class GraphSizeError(ValueError):
  pass


def _as_fraction(x):
  if isinstance(x, float):
    return Fraction(x).limit_denominator(10 ** 9)
  return Fraction(x)


class ExclusivityGraph(object):
  """Undirected simple graph with nonnegative rational vertex weights.

  Args:
    adjacency: n x n symmetric boolean array with a zero diagonal.
    weights: n nonnegative rationals (int, Fraction or float).
    labels: n vertex labels; the vector ids when built from a KS set.
  """

  def __init__(self, adjacency, weights=None, labels=None):
    adjacency = np.array(adjacency, dtype=bool)
    n = adjacency.shape[0]
    if adjacency.shape != (n, n):
      raise ValueError("Adjacency must be square, got shape {}."
                       .format(adjacency.shape))
    if not np.array_equal(adjacency, adjacency.T):
      raise ValueError("Adjacency is not symmetric.")
    if adjacency.diagonal().any():
      raise ValueError("Self-loops are not allowed.")
    if weights is None:
      weights = [1] * n
    if len(weights) != n:
      raise ValueError("Expected {} weights, got {}.".format(n, len(weights)))
    weights = tuple(_as_fraction(w) for w in weights)
    if any(w < 0 for w in weights):
      raise ValueError("Vertex weights must be nonnegative.")
    if labels is None:
      labels = list(range(1, n + 1))
    if len(labels) != n or len(set(labels)) != n:
      raise ValueError("Expected {} distinct labels.".format(n))
    adjacency.setflags(write=False)
    self._adjacency = adjacency
    self._weights = weights
    self._labels = tuple(labels)
    # Python ints: numpy integers overflow past 64 bits and lack bit_length().
    self._masks = tuple(
        sum(1 << j for j in np.flatnonzero(adjacency[i]).tolist())
        for i in range(n))

  @property
  def n(self):
    return self._adjacency.shape[0]

  @property
  def adjacency(self):
    return self._adjacency

  @property
  def weights(self):
    return self._weights

  @property
  def labels(self):
    return self._labels

  @property
  def neighbor_masks(self):
    return self._masks

  def degrees(self):
    return [int(d) for d in self._adjacency.sum(axis=1)]

  def edges(self):
    """List of (i, j) 0-based vertex positions with i < j."""
    rows, cols = np.nonzero(np.triu(self._adjacency, k=1))
    return list(zip(rows.tolist(), cols.tolist()))

  def num_edges(self):
    return int(np.triu(self._adjacency, k=1).sum())

  def is_regular(self):
    return len(set(self.degrees())) <= 1

  def has_uniform_weights(self):
    return len(set(self._weights)) <= 1

  def is_independent(self, vertices):
    vertices = list(vertices)
    return not any(self._adjacency[i, j]
                   for k, i in enumerate(vertices) for j in vertices[k + 1:])

  def is_clique(self, vertices):
    vertices = list(vertices)
    return all(self._adjacency[i, j]
               for k, i in enumerate(vertices) for j in vertices[k + 1:])

  def position(self, label):
    return self._labels.index(label)

  def with_weights(self, weights):
    return ExclusivityGraph(self._adjacency, weights, self._labels)

  def without_edge(self, i, j):
    adjacency = self._adjacency.copy()
    adjacency[i, j] = adjacency[j, i] = False
    return ExclusivityGraph(adjacency, self._weights, self._labels)

  def to_networkx(self):
    G = nx.Graph()
    G.add_nodes_from(self._labels)
    for i, j in self.edges():
      G.add_edge(self._labels[i], self._labels[j])
    return G

  @classmethod
  def from_networkx(cls, G, weight=1):
    nodes = sorted(G.nodes())
    index = {u: k for k, u in enumerate(nodes)}
    adjacency = np.zeros((len(nodes), len(nodes)), dtype=bool)
    for u, v in G.edges():
      if u != v:
        adjacency[index[u], index[v]] = adjacency[index[v], index[u]] = True
    return cls(adjacency, [weight] * len(nodes), [k + 1 for k in range(len(nodes))])

  def __repr__(self):
    return 'ExclusivityGraph(n={}, edges={})'.format(self.n, self.num_edges())


def build_graph(ks_set, weight_per_vertex=KS21_WEIGHT):
  """Exclusivity graph of a validated KS set.

  Every orthogonal pair becomes an edge, whether or not the two vectors share a
  context. Orthogonality is decided in exact arithmetic.
  """
  vectors = ks_set.vectors
  n = len(vectors)
  adjacency = np.zeros((n, n), dtype=bool)
  for i in range(n):
    for j in range(i + 1, n):
      if inner_product_exact(vectors[i], vectors[j]).is_zero():
        adjacency[i, j] = adjacency[j, i] = True
  g = ExclusivityGraph(adjacency, [weight_per_vertex] * n,
                       [v.id for v in vectors])
  logger.debug("Built exclusivity graph with {} vertices and {} edges."
               .format(g.n, g.num_edges()))
  return g


def export_edge_list(g, path):
  """Write one "i j" line per edge (vertex labels, i < j)."""
  nx.write_edgelist(g.to_networkx(), path, data=False)


# ---------------------------------------------------------------------------
# Independence number
# ---------------------------------------------------------------------------

IndependentSet = collections.namedtuple(
    'IndependentSet', ['value', 'vertices', 'labels', 'nodes_explored'])


def _bits(mask):
  while mask:
    low = mask & -mask
    yield low.bit_length() - 1
    mask ^= low


def _search_order(g):
  # Descending degree, ties broken by lowest position.
  degrees = g.degrees()
  return sorted(range(g.n), key=lambda v: (-degrees[v], v))


def _greedy_clique_cover(g, mask, order, weights):
  """Weight of a greedy clique cover of the vertices in `mask`.

  Each clique holds at most one vertex of an independent set, so the sum of
  the per-clique maximum weights bounds the weighted independence number of
  the induced subgraph.
  """
  masks = g.neighbor_masks
  cliques = []  # [members_mask, max_weight]
  for v in order:
    if not (mask >> v) & 1:
      continue
    for clique in cliques:
      if clique[0] & ~masks[v] == 0:
        clique[0] |= 1 << v
        clique[1] = max(clique[1], weights[v])
        break
    else:
      cliques.append([1 << v, weights[v]])
  return sum((c[1] for c in cliques), Fraction(0))


def max_weight_independent_set(g, weights=None,
                               max_vertices=DEFAULT_MAX_VERTICES):
  """Exact maximum weight independent set by branch and bound.

  Branches on the highest-degree remaining candidate (include / exclude) and
  prunes with a greedy clique cover bound.

  Returns:
    an `IndependentSet` whose `vertices` are 0-based positions.
  Raises:
    GraphSizeError: if the graph has more than `max_vertices` vertices.
  """
  if g.n > max_vertices:
    raise GraphSizeError("Graph has {} vertices; the exact solver is limited "
                         "to {}.".format(g.n, max_vertices))
  if weights is None:
    weights = g.weights
  weights = [_as_fraction(w) for w in weights]
  order = _search_order(g)
  rank = {v: k for k, v in enumerate(order)}
  masks = g.neighbor_masks
  best = {'value': Fraction(-1), 'mask': 0}
  explored = [0]

  def expand(candidates, value, chosen):
    explored[0] += 1
    if candidates == 0:
      if value > best['value']:
        best['value'] = value
        best['mask'] = chosen
      return
    bound = value + _greedy_clique_cover(g, candidates, order, weights)
    if bound <= best['value']:
      return
    v = min(_bits(candidates), key=rank.__getitem__)
    bit = 1 << v
    expand(candidates & ~masks[v] & ~bit, value + weights[v], chosen | bit)
    expand(candidates & ~bit, value, chosen)

  expand((1 << g.n) - 1, Fraction(0), 0)
  vertices = sorted(_bits(best['mask']))
  if not g.is_independent(vertices):
    raise AssertionError("Branch and bound returned a dependent set {}."
                         .format(vertices))
  return IndependentSet(best['value'], vertices,
                        [g.labels[v] for v in vertices], explored[0])


def independence_number(g, max_vertices=DEFAULT_MAX_VERTICES):
  """Exact alpha(G) together with a maximum independent set as certificate."""
  result = max_weight_independent_set(g, weights=[1] * g.n,
                                      max_vertices=max_vertices)
  logger.debug("alpha = {} after {} nodes.".format(result.value,
                                                   result.nodes_explored))
  return result._replace(value=int(result.value))


def independence_number_bruteforce(g):
  """alpha(G) by exhaustive enumeration of all independent sets.

  The only pruning is refusing to extend a set with a neighbor of one of its
  members, which never skips an independent set.
  """
  if g.n > BRUTEFORCE_MAX_VERTICES:
    raise GraphSizeError("Brute force is limited to {} vertices, got {}."
                         .format(BRUTEFORCE_MAX_VERTICES, g.n))
  masks = g.neighbor_masks
  n = g.n
  best = 0
  # Stack of (next vertex to decide, forbidden mask, size)
  stack = [(0, 0, 0)]
  while stack:
    k, forbidden, size = stack.pop()
    if k == n:
      best = max(best, size)
      continue
    stack.append((k + 1, forbidden, size))
    if not (forbidden >> k) & 1:
      stack.append((k + 1, forbidden | masks[k], size + 1))
  return best


def noncontextual_bound(g, max_vertices=DEFAULT_MAX_VERTICES):
  """Weighted independence number: the NCHV bound of sum_i w_i P_i."""
  if g.has_uniform_weights() and g.n > 0:
    return g.weights[0] * independence_number(g, max_vertices).value
  return max_weight_independent_set(g, max_vertices=max_vertices).value


def clique_cover_bound(g, weights=None):
  """Weighted greedy clique cover bound, an upper bound on weighted alpha."""
  if weights is None:
    weights = g.weights
  return _greedy_clique_cover(g, (1 << g.n) - 1, _search_order(g),
                              [_as_fraction(w) for w in weights])


# ---------------------------------------------------------------------------
# KS colorability
# ---------------------------------------------------------------------------

ColorabilityVerdict = collections.namedtuple(
    'ColorabilityVerdict', ['satisfiable', 'witness', 'nodes_explored'])


def verify_coloring(ks_set, g, witness):
  """Check a {0,1} assignment independently of the search that produced it.

  Complete contexts must hold exactly one 1, incomplete ones at most one, and
  no edge may join two 1s.
  """
  for vector_id in ks_set.ids:
    if witness.get(vector_id) not in (0, 1):
      return False
  for context in ks_set.contexts:
    ones = sum(witness[i] for i in context)
    if ones > 1:
      return False
    if ks_set.is_complete(context) and ones != 1:
      return False
  for i, j in g.edges():
    if witness[g.labels[i]] == 1 and witness[g.labels[j]] == 1:
      return False
  return True


class _ColoringSearch(object):
  """Backtracking over complete contexts with neighbor and unit propagation."""

  def __init__(self, ks_set, g):
    self.g = g
    index = {label: k for k, label in enumerate(g.labels)}
    self.neighbors = [np.flatnonzero(g.adjacency[k]).tolist()
                      for k in range(g.n)]
    self.contexts = [[index[i] for i in c] for c in ks_set.contexts]
    self.complete = [ks_set.is_complete(c) for c in ks_set.contexts]
    self.nodes_explored = 0

  def assign(self, values, v):
    """Set v to 1 and propagate; return False on conflict."""
    queue = [v]
    while queue:
      v = queue.pop()
      if values[v] == 1:
        continue
      if values[v] == 0:
        return False
      values[v] = 1
      for u in self.neighbors[v]:
        if values[u] == 1:
          return False
        values[u] = 0
      for members, complete in zip(self.contexts, self.complete):
        ones = [u for u in members if values[u] == 1]
        if len(ones) > 1:
          return False
        if not complete or ones:
          continue
        free = [u for u in members if values[u] == -1]
        if not free:
          return False
        if len(free) == 1:
          queue.append(free[0])
    return True

  def open_context(self, values):
    """The unsatisfied complete context with the fewest free members."""
    best = None
    for members, complete in zip(self.contexts, self.complete):
      if not complete or any(values[u] == 1 for u in members):
        continue
      free = [u for u in members if values[u] == -1]
      if best is None or len(free) < len(best):
        best = free
    return best

  def solve(self, values):
    self.nodes_explored += 1
    free = self.open_context(values)
    if free is None:
      return values
    for v in free:
      trial = list(values)
      if self.assign(trial, v):
        solution = self.solve(trial)
        if solution is not None:
          return solution
    return None


def ks_colorability(ks_set, g):
  """Decide whether a noncontextual {0,1} assignment exists.

  Returns:
    a `ColorabilityVerdict`; `witness` maps vector id -> 0/1 when satisfiable.
  """
  search = _ColoringSearch(ks_set, g)
  values = [-1] * g.n
  # Contexts that are already forced (single member) propagate first.
  for members, complete in zip(search.contexts, search.complete):
    if complete and len(members) == 1 and not search.assign(values, members[0]):
      return ColorabilityVerdict(False, None, 1)
  solution = search.solve(values)
  if solution is None:
    return ColorabilityVerdict(False, None, search.nodes_explored)
  witness = collections.OrderedDict(
      (label, 1 if solution[k] == 1 else 0) for k, label in enumerate(g.labels))
  if not verify_coloring(ks_set, g, witness):
    raise AssertionError("Colorability search produced an invalid witness.")
  return ColorabilityVerdict(True, witness, search.nodes_explored)


def criticality_snapshot(ks_set, weight_per_vertex=KS21_WEIGHT):
  """Colorability verdict of every single-vector deletion of `ks_set`.

  Returns:
    a list of (deleted vector id, satisfiable) in vector order.
  """
  rows = []
  for vector_id in ks_set.ids:
    reduced = ks_set.delete_vector(vector_id)
    verdict = ks_colorability(reduced,
                              build_graph(reduced, weight_per_vertex))
    rows.append((vector_id, verdict.satisfiable))
  logger.info("Single deletions: {} of {} colorable.".format(
      sum(1 for _, sat in rows if sat), len(rows)))
  return rows
