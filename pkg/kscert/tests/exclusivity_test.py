# Date: 18 Oct 2026

import itertools
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest

from kscert import exclusivity
from kscert import ks_core
from kscert.exclusivity import ExclusivityGraph


def _random_graph(seed, n, density):
  return ExclusivityGraph.from_networkx(
      nx.gnp_random_graph(n, density, seed=seed))


def _networkx_alpha(g, weights=None):
  """Maximum (weight) clique of the complement, an independent oracle."""
  G = nx.complement(g.to_networkx())
  if weights is None:
    _, value = nx.max_weight_clique(G, weight=None)
    return value
  for label, w in zip(g.labels, weights):
    G.nodes[label]['w'] = w
  _, value = nx.max_weight_clique(G, weight='w')
  return value


def test_ks21_graph_shape(ks21_graph):
  assert ks21_graph.n == 21
  assert ks21_graph.num_edges() == 105
  assert ks21_graph.is_regular()
  assert set(ks21_graph.degrees()) == {10}
  assert ks21_graph.weights == tuple([Fraction(2)] * 21)


def test_ks21_orthogonality_is_context_sharing(ks21, ks21_graph):
  sharing = set()
  for context in ks21.contexts:
    for i, j in itertools.combinations(sorted(context), 2):
      sharing.add((i, j))
  edges = set((ks21_graph.labels[i], ks21_graph.labels[j])
              for i, j in ks21_graph.edges())
  assert edges == sharing


def test_ks21_graph_is_line_graph_of_k7(ks21_graph):
  assert nx.is_isomorphic(ks21_graph.to_networkx(),
                          nx.line_graph(nx.complete_graph(7)))


def test_ks21_independence_number(ks21_graph):
  result = exclusivity.independence_number(ks21_graph)
  assert result.value == 3
  assert len(result.vertices) == 3
  assert ks21_graph.is_independent(result.vertices)
  assert exclusivity.independence_number_bruteforce(ks21_graph) == 3
  assert _networkx_alpha(ks21_graph) == 3
  assert exclusivity.noncontextual_bound(ks21_graph) == 6


def test_pentagon():
  c5 = ExclusivityGraph.from_networkx(nx.cycle_graph(5))
  assert exclusivity.independence_number(c5).value == 2
  assert exclusivity.independence_number_bruteforce(c5) == 2


@pytest.mark.parametrize('seed', range(8))
def test_branch_and_bound_matches_oracles(seed):
  g = _random_graph(seed, 12 + seed, 0.2 + 0.07 * seed)
  alpha = exclusivity.independence_number(g)
  assert alpha.value == exclusivity.independence_number_bruteforce(g)
  assert alpha.value == _networkx_alpha(g)
  assert g.is_independent(alpha.vertices)
  assert exclusivity.clique_cover_bound(g) >= alpha.value


@pytest.mark.parametrize('seed', range(5))
def test_weighted_independence_matches_networkx(seed):
  rng = np.random.default_rng(seed)
  g = _random_graph(100 + seed, 14, 0.3)
  weights = [int(w) for w in rng.integers(1, 6, size=g.n)]
  result = exclusivity.max_weight_independent_set(g, weights=weights)
  assert result.value == _networkx_alpha(g, weights)
  assert g.is_independent(result.vertices)
  assert sum(weights[v] for v in result.vertices) == result.value
  assert exclusivity.clique_cover_bound(g, weights) >= result.value
  assert exclusivity.noncontextual_bound(g.with_weights(weights)) == result.value


def test_clique_cover_bound_on_ks21(ks21_graph):
  # Greedy finds 6 cliques of L(K7): two triangles and four stars.
  assert exclusivity.clique_cover_bound(ks21_graph) == 12


def test_size_limits():
  big = ExclusivityGraph(np.zeros((65, 65), dtype=bool))
  with pytest.raises(exclusivity.GraphSizeError):
    exclusivity.independence_number(big)
  with pytest.raises(exclusivity.GraphSizeError):
    exclusivity.independence_number_bruteforce(
        ExclusivityGraph(np.zeros((26, 26), dtype=bool)))


def test_graph_validation():
  with pytest.raises(ValueError):
    ExclusivityGraph([[False, True], [False, False]])
  with pytest.raises(ValueError):
    ExclusivityGraph([[True]])
  with pytest.raises(ValueError):
    ExclusivityGraph(np.zeros((2, 2), dtype=bool), weights=[1, -1])


def test_empty_graph():
  g = ExclusivityGraph(np.zeros((6, 6), dtype=bool))
  assert exclusivity.independence_number(g).value == 6
  assert exclusivity.independence_number_bruteforce(g) == 6


def test_ks21_is_uncolorable(ks21, ks21_graph):
  verdict = exclusivity.ks_colorability(ks21, ks21_graph)
  assert not verdict.satisfiable
  assert verdict.witness is None
  assert verdict.nodes_explored >= 1


def test_block18_is_colorable(block18):
  g = exclusivity.build_graph(block18)
  verdict = exclusivity.ks_colorability(block18, g)
  assert verdict.satisfiable
  assert exclusivity.verify_coloring(block18, g, verdict.witness)
  assert sum(verdict.witness.values()) == 3


def test_verify_coloring_rejects_bad_witness(block18):
  g = exclusivity.build_graph(block18)
  witness = {i: 0 for i in block18.ids}
  assert not exclusivity.verify_coloring(block18, g, witness)


def test_single_deletions_are_colorable(ks21):
  rows = exclusivity.criticality_snapshot(ks21)
  assert [vector_id for vector_id, _ in rows] == list(range(1, 22))
  assert all(satisfiable for _, satisfiable in rows)


def test_export_edge_list(ks21_graph, tmp_path):
  path = str(tmp_path / 'ks21.edges')
  exclusivity.export_edge_list(ks21_graph, path)
  with open(path) as f:
    pairs = [tuple(int(x) for x in line.split()) for line in f if line.strip()]
  assert len(pairs) == 105
  assert all(i < j for i, j in pairs)
  expected = set((ks21_graph.labels[i], ks21_graph.labels[j])
                 for i, j in ks21_graph.edges())
  assert set(pairs) == expected


def test_neighbor_masks_are_python_ints(ks21_graph):
  assert all(type(m) is int for m in ks21_graph.neighbor_masks)


def test_masks_beyond_64_bits():
  # Vertex 63 sets bit 63; C_64 needs all of its 64 mask bits.
  c64 = ExclusivityGraph.from_networkx(nx.cycle_graph(64))
  assert c64.neighbor_masks[63] == (1 << 62) | 1
  result = exclusivity.independence_number(c64)
  assert result.value == 32
  assert c64.is_independent(result.vertices)


# Sixth roots of unity as [a, b] pairs: zeta = 1 + w.
ZETA_POWERS = [[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1], [0, -1]]


def _standard_basis(first_id):
  return [{'id': first_id + k,
           'entries': [[1, 0] if m == k else [0, 0] for m in range(6)]}
          for k in range(6)]


def _fourier_basis(first_id):
  """Rows of the 6-point Fourier matrix: no entry vanishes."""
  return [{'id': first_id + k,
           'entries': [ZETA_POWERS[(m * k) % 6] for m in range(6)]}
          for k in range(6)]


def _bases_set(*bases):
  vectors = [v for basis in bases for v in basis]
  contexts = [[v['id'] for v in basis] for basis in bases]
  return ks_core.parse_ks_set({'dimension': 6, 'vectors': vectors,
                               'contexts': contexts})


ONE_BASIS = _bases_set(_standard_basis(1))
TWO_BASES = _bases_set(_standard_basis(1), _fourier_basis(7))


@pytest.mark.parametrize('ks_set, expected, alpha', [
    (ONE_BASIS, nx.complete_graph(6), 1),
    (TWO_BASES, nx.disjoint_union(nx.complete_graph(6), nx.complete_graph(6)),
     2),
])
def test_graphs_of_bases(ks_set, expected, alpha):
  g = exclusivity.build_graph(ks_set)
  assert nx.is_isomorphic(g.to_networkx(), expected)
  assert exclusivity.independence_number(g).value == alpha
  assert exclusivity.independence_number_bruteforce(g) == alpha
  assert exclusivity.noncontextual_bound(g) == 2 * alpha
  verdict = exclusivity.ks_colorability(ks_set, g)
  assert verdict.satisfiable
  assert exclusivity.verify_coloring(ks_set, g, verdict.witness)
  assert sum(verdict.witness.values()) == len(ks_set.contexts)


def test_noncontextual_bound_of_empty_graph():
  g = ExclusivityGraph(np.zeros((3, 3), dtype=bool), weights=[2, 2, 2])
  assert exclusivity.noncontextual_bound(g) == 6
