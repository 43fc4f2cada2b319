# Date: 18 Oct 2026
# Shared fixtures: the shipped KS21 set, its exclusivity graph and a small
# colorable set of the same shape (d = 6, every vector in two contexts).

import copy
import json

import numpy as np
import pytest

from kscert import exclusivity
from kscert import ks_core

# Powers of w as [a, b] pairs.
W_POWERS = [[1, 0], [0, 1], [-1, -1]]
ZERO_PAIR = [0, 0]


@pytest.fixture(scope='session')
def ks21():
  return ks_core.load_default_ks21()


@pytest.fixture(scope='session')
def ks21_graph(ks21):
  return exclusivity.build_graph(ks21)


@pytest.fixture(scope='session')
def ks21_document():
  with open(ks_core.DEFAULT_KS21_PATH, 'r') as f:
    return json.load(f)


@pytest.fixture
def ks21_document_copy(ks21_document):
  return copy.deepcopy(ks21_document)


def _c3_bases():
  """Three mutually unbiased-ish bases of C^3 with entries in {0, 1, w, w^2}."""
  standard = [[W_POWERS[0] if m == k else ZERO_PAIR for m in range(3)]
              for k in range(3)]
  fourier = [[W_POWERS[(m * k) % 3] for m in range(3)] for k in range(3)]
  twisted = [[W_POWERS[(m * k + (1 if m == 2 else 0)) % 3] for m in range(3)]
             for k in range(3)]
  return [standard, fourier, twisted]


def block18_document():
  """18 vectors of C^3 + C^3 in 6 contexts B_i + B_j; admits a coloring."""
  bases = _c3_bases()
  vectors = []
  left, right = {}, {}
  for i, basis in enumerate(bases):
    for k, entries in enumerate(basis):
      left[i, k] = len(vectors) + 1
      vectors.append({'id': left[i, k], 'entries': entries + [ZERO_PAIR] * 3})
  for j, basis in enumerate(bases):
    for k, entries in enumerate(basis):
      right[j, k] = len(vectors) + 1
      vectors.append({'id': right[j, k], 'entries': [ZERO_PAIR] * 3 + entries})
  contexts = []
  for i, j in [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 0)]:
    contexts.append([left[i, k] for k in range(3)]
                    + [right[j, k] for k in range(3)])
  return {'dimension': 6, 'profile': 'generic', 'vectors': vectors,
          'contexts': contexts}


@pytest.fixture(scope='session')
def block18():
  return ks_core.parse_ks_set(block18_document())


@pytest.fixture
def rng():
  return np.random.default_rng(20130321)
