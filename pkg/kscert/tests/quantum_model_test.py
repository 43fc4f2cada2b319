# Date: 18 Oct 2026

import numpy as np
import pytest

from kscert import quantum_model as qm
from kscert.quantum_model import SlitSpec

OMEGA = np.exp(2j * np.pi / 3)


def _fidelity(rho, amplitudes):
  u = np.asarray(amplitudes, dtype=complex)
  u = u / np.linalg.norm(u)
  return float(np.real(u.conj().dot(rho.entries).dot(u)))


def test_slit_states():
  phi1 = qm.slit_state(SlitSpec([1] * 6, [0] * 6))
  assert phi1.is_pure()
  assert _fidelity(phi1, [1] * 6) == pytest.approx(1, abs=1e-12)
  phi2 = qm.slit_state(SlitSpec([1, 0, 0, 0, 1, 0], [0] * 6))
  assert _fidelity(phi2, [1, 0, 0, 0, 1, 0]) == pytest.approx(1, abs=1e-12)
  # Phases of closed slits are ignored.
  ks9 = qm.slit_state(SlitSpec([0, 1, 0, 1, 1, 1],
                               [5.0, 0, 1.0, 0, 2 * np.pi / 3, 4 * np.pi / 3]))
  assert _fidelity(ks9, [0, 1, 0, 1, OMEGA, OMEGA ** 2]) == \
      pytest.approx(1, abs=1e-12)


def test_slit_spec_validation():
  with pytest.raises(ValueError):
    qm.slit_state(SlitSpec([0] * 6, [0] * 6))
  with pytest.raises(ValueError):
    qm.slit_state(SlitSpec([1.5, 0, 0, 0, 0, 0], [0] * 6))
  with pytest.raises(ValueError):
    qm.slit_state(SlitSpec([1] * 6, [0] * 5))


def test_slit_spec_from_vector_prepares_the_vector(ks21):
  for v in ks21.vectors:
    rho = qm.slit_state(qm.slit_spec_from_vector(v))
    assert qm.detection_probability(rho, v) == pytest.approx(1, abs=1e-12)


def test_detection_probability(ks21):
  ks7 = qm.pure_state(ks21.vector(7))
  assert qm.detection_probability(ks7, ks21.vector(7)) == pytest.approx(1)
  assert qm.detection_probability(ks7, ks21.vector(9)) == pytest.approx(0.25)
  mixed = qm.maximally_mixed(6)
  for v in ks21.vectors:
    assert qm.detection_probability(mixed, v) == pytest.approx(1 / 6.0)
  with pytest.raises(ValueError):
    qm.detection_probability(qm.maximally_mixed(3), ks21.vector(1))


def test_sigma_on_named_states(ks21):
  for label, rho in qm.ks_states(ks21).items():
    assert abs(qm.sigma(rho, ks21) - 7) < 1e-10, label
  states = qm.fig5_states(ks21)
  assert list(states) == ['phi1', 'phi2', 'mixed', 'KS9_w30', 'KS9']
  for label, rho in states.items():
    assert abs(qm.sigma(rho, ks21) - 7) < 1e-10, label


def test_sigma_is_state_independent(ks21, rng):
  for k in range(1000):
    if k % 3 == 0:
      rho = qm.random_pure_state(6, rng)
    else:
      rho = qm.random_density_matrix(6, rng, rank=1 + k % 6)
    assert abs(qm.sigma(rho, ks21) - 7) < 1e-10


def test_sigma_is_affine(block18, rng):
  a = qm.random_pure_state(6, rng)
  b = qm.random_density_matrix(6, rng)
  lam = 0.3
  mix = qm.DensityMatrix(lam * a.entries + (1 - lam) * b.entries)
  assert qm.sigma(mix, block18) == pytest.approx(
      lam * qm.sigma(a, block18) + (1 - lam) * qm.sigma(b, block18), abs=1e-12)


def test_context_sums(ks21, rng):
  rho = qm.random_density_matrix(6, rng)
  assert np.allclose(qm.context_sums(rho, ks21), 1, atol=1e-12)
  reduced = ks21.delete_vector(9)
  sums = qm.context_sums(rho, reduced)
  assert all(s <= 1 + 1e-12 for s in sums)


def test_white_noise(ks21):
  ks9 = qm.pure_state(ks21.vector(9))
  assert qm.add_white_noise(ks9, 0) == ks9
  assert np.allclose(qm.add_white_noise(ks9, 1).entries, np.eye(6) / 6)
  assert ks9.is_pure()
  assert not qm.add_white_noise(ks9, 0.30).is_pure()
  noisy = qm.add_white_noise(ks9, 0.30)
  assert noisy.eigenvalues()[0] == pytest.approx(0.05)
  assert qm.sigma(noisy, ks21) == pytest.approx(7, abs=1e-10)
  for w in [-0.1, 1.1]:
    with pytest.raises(ValueError):
      qm.add_white_noise(ks9, w)


def test_crosstalk_toward_uniform():
  p = qm.crosstalk_probability([0.0, 1.0], 0.06, 6)
  assert np.allclose(p, [0.01, 0.95])


def test_corrected_bounds():
  b = qm.corrected_bounds(0.0151)
  assert b.classical_corrected == pytest.approx(6.5436, abs=1e-9)
  assert abs(b.classical_corrected - 6.55) < 0.01
  assert b.quantum_lower == pytest.approx(6.8943, abs=1e-9)
  assert b.quantum_upper == pytest.approx(7.5285, abs=1e-9)
  ideal = qm.corrected_bounds(0)
  assert (ideal.classical_ideal, ideal.classical_corrected, ideal.quantum_ideal,
          ideal.quantum_lower, ideal.quantum_upper) == (6, 6, 7, 7, 7)
  with pytest.raises(ValueError):
    qm.corrected_bounds(-0.1)


def test_corrected_bounds_monotone():
  grid = [qm.corrected_bounds(e) for e in np.linspace(0, 0.2, 21)]
  for a, b in zip(grid, grid[1:]):
    assert b.classical_corrected > a.classical_corrected
    assert b.quantum_upper > a.quantum_upper
    assert b.quantum_lower < a.quantum_lower
    assert b.quantum_lower <= b.quantum_ideal <= b.quantum_upper


def test_sigma_max(ks21):
  assert qm.sigma_max(ks21) == 42


@pytest.mark.parametrize('entries', [
    [[1, 0], [0, 0.5]],
    [[0.5, 0.1], [0.2, 0.5]],
    [[1.5, 0], [0, -0.5]],
    [[1, 0, 0]],
])
def test_invalid_density_matrices(entries):
  with pytest.raises(qm.DensityMatrixError):
    qm.DensityMatrix(entries)


def test_density_matrix_json(rng):
  rho = qm.random_density_matrix(6, rng, rank=2)
  document = qm.density_matrix_to_json(rho)
  assert document['dim'] == 6
  again = qm.density_matrix_from_json(document)
  assert np.allclose(again.entries, rho.entries, atol=1e-15)
  with pytest.raises(qm.DensityMatrixError):
    qm.density_matrix_from_json({'dim': 3, 'entries': document['entries']})
