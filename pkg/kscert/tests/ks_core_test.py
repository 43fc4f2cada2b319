# Date: 18 Oct 2026

import hashlib
import itertools

import numpy as np
import pytest

from kscert import ks_core
from kscert.ks_core import EisensteinInt, KsVector, ONE, W, ZERO


def _random_eisenstein(rng, size):
  return [EisensteinInt(int(a), int(b))
          for a, b in rng.integers(-50, 50, size=(size, 2))]


def test_ring_laws(rng):
  xs = _random_eisenstein(rng, 12)
  for x, y, z in itertools.islice(itertools.product(xs, repeat=3), 300):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert (x * y).norm() == x.norm() * y.norm()
    assert (x * y).conjugate() == x.conjugate() * y.conjugate()


def test_cube_root_of_unity():
  assert W * W == EisensteinInt(-1, -1)
  assert W * W * W == ONE
  assert ONE + W + W * W == ZERO
  assert W.conjugate() == W * W
  assert W.norm() == 1
  assert abs(W.to_complex() - np.exp(2j * np.pi / 3)) < 1e-15


def test_integer_scalars():
  assert 3 * W == EisensteinInt(0, 3)
  assert W * 3 == EisensteinInt(0, 3)
  assert (-W).norm() == 1


def test_overflow_and_types():
  with pytest.raises(ks_core.EisensteinOverflowError):
    EisensteinInt(2 ** 31 + 1, 0)
  with pytest.raises(TypeError):
    EisensteinInt(0.5, 0)
  with pytest.raises(TypeError):
    EisensteinInt(True, 0)


def test_inner_product_exact_dimension_mismatch():
  u = KsVector(1, [[1, 0], [0, 0]])
  v = KsVector(2, [[1, 0], [0, 0], [0, 0]])
  with pytest.raises(ValueError):
    ks_core.inner_product_exact(u, v)


def test_zero_vector_has_no_direction():
  with pytest.raises(ValueError):
    ks_core.to_unit_vector(KsVector(1, [[0, 0], [0, 0]]))


def test_shipped_ks21(ks21):
  assert ks21.summary() == '21 vectors, 7 contexts, d = 6'
  assert ks21.profile == ks_core.KS21_PROFILE
  assert set(ks21.context_counts().values()) == {2}
  assert ks21.squared_norm_multiset() == {1: 6, 4: 15}
  assert all(ks21.is_complete(c) for c in ks21.contexts)


def test_ks7_and_ks9_as_printed(ks21):
  ks7 = ks21.vector(7)
  assert ks7.entries == tuple([ZERO] * 5 + [ONE])
  ks9 = ks21.vector(9)
  assert ks9.entries == (ZERO, ONE, ZERO, ONE, W, W * W)
  # <KS7|KS9> = w^2, so |<KS7|KS9>|^2 / (1 * 4) = 1/4.
  assert ks_core.inner_product_exact(ks7, ks9) == W * W


def test_contexts_resolve_identity(ks21):
  for context in ks21.contexts:
    U = np.array([ks_core.to_unit_vector(ks21.vector(i)) for i in context])
    assert np.allclose(U.dot(U.conj().T), np.eye(6), atol=1e-12)
    P = sum(ks_core.projector(ks21.vector(i)) for i in context)
    assert np.allclose(P, np.eye(6), atol=1e-12)


def test_projectors_shape(ks21):
  P = ks21.projectors()
  assert P.shape == (21, 6, 6)
  for k in range(21):
    assert np.allclose(P[k].dot(P[k]), P[k], atol=1e-12)
    assert abs(np.trace(P[k]) - 1) < 1e-12


@pytest.mark.parametrize('k', [2, -3, W, EisensteinInt(1, 2)])
def test_projector_ignores_scaling(ks21, k):
  for v in ks21.vectors:
    assert np.abs(ks_core.projector(v.scaled(k)) -
                  ks_core.projector(v)).max() < 1e-12


def test_broken_orthogonality_names_pair(ks21_document_copy):
  doc = ks21_document_copy
  ks9 = [v for v in doc['vectors'] if v['id'] == 9][0]
  ks9['entries'][5] = [0, 1]
  with pytest.raises(ks_core.KsInvariantError) as info:
    ks_core.parse_ks_set(doc)
  assert info.value.context == 2
  assert info.value.pair == (8, 9)
  assert 'vectors 8 and 9' in str(info.value)


def test_ks21_profile_needs_two_contexts_per_vector(ks21_document_copy):
  doc = ks21_document_copy
  doc['contexts'] = doc['contexts'][:6]
  with pytest.raises(ks_core.KsInvariantError):
    ks_core.parse_ks_set(doc)


def test_duplicate_in_context(ks21_document_copy):
  doc = ks21_document_copy
  doc['profile'] = 'generic'
  doc['contexts'].append([2, 2])
  with pytest.raises(ks_core.KsInvariantError) as info:
    ks_core.parse_ks_set(doc)
  assert info.value.pair == (2, 2)


@pytest.mark.parametrize('source', [
    b'not json',
    '{"dimension": 6}',
    '{"dimension": 6, "vectors": [{"id": 1, "entries": [[1, 0.5]]}], '
    '"contexts": []}',
    '{"dimension": "six", "vectors": [], "contexts": []}',
])
def test_format_errors(source):
  with pytest.raises(ks_core.KsFormatError):
    ks_core.load_ks_set(source)


def test_missing_file_is_io_error(tmp_path):
  with pytest.raises(IOError):
    ks_core.load_ks_set(str(tmp_path / 'missing.json'))


def test_dump_is_loadable(ks21):
  again = ks_core.load_ks_set(ks_core.dump_ks_set(ks21))
  assert again.vectors == ks21.vectors
  assert again.contexts == ks21.contexts
  assert again.profile == ks21.profile


def test_fingerprint_is_md5_of_file():
  with open(ks_core.DEFAULT_KS21_PATH, 'rb') as f:
    raw = f.read()
  assert ks_core.ks_set_fingerprint(ks_core.DEFAULT_KS21_PATH) == \
      hashlib.md5(raw).hexdigest()
  assert ks_core.ks_set_fingerprint(raw + b'\n') != \
      ks_core.ks_set_fingerprint(raw)


def test_delete_vector(ks21):
  reduced = ks21.delete_vector(9)
  assert len(reduced) == 20
  assert reduced.profile == ks_core.GENERIC_PROFILE
  assert sorted(len(c) for c in reduced.contexts) == [5, 5, 6, 6, 6, 6, 6]
  with pytest.raises(KeyError):
    ks21.delete_vector(99)


def test_generic_sets_may_have_incomplete_contexts(block18):
  assert block18.summary() == '18 vectors, 6 contexts, d = 6'
  reduced = block18.delete_vector(1)
  assert not all(reduced.is_complete(c) for c in reduced.contexts)
