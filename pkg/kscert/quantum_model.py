# Creation date: 18 Oct 2026
# Description: quantum states of the six-path photon, detection probabilities,
#   the Sigma functional, noise channels and the corrected bounds.
"""Ideal quantum predictions for a KS set.

States are `DensityMatrix` objects (validated, immutable). Pure states can be
specified the way the preparation stage does it: a `SlitSpec` of per-slit
transmissivities t_l and phases phi_l, giving sum_l sqrt(t_l) e^{i phi_l} |l>
up to normalization.
"""

import collections
import logging

import numpy as np

from kscert.ks_core import KsVector, to_unit_vector

logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)

HERMITIAN_TOLERANCE = 1e-12
TRACE_TOLERANCE = 1e-12
EIGENVALUE_TOLERANCE = -1e-10

CLASSICAL_IDEAL = 6
QUANTUM_IDEAL = 7
SIGMA_MAX = 42
KS21_WEIGHT = 2


class DensityMatrixError(ValueError):
  pass


class DensityMatrix(object):
  """Hermitian, unit-trace, positive semidefinite complex matrix."""

  def __init__(self, entries):
    A = np.array(entries, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
      raise DensityMatrixError("Expected a nonempty square matrix, got shape {}."
                               .format(A.shape))
    hermiticity = np.abs(A - A.conj().T).max()
    if hermiticity > HERMITIAN_TOLERANCE:
      raise DensityMatrixError("Matrix is not Hermitian (deviation {:.3e})."
                               .format(hermiticity))
    A = (A + A.conj().T) / 2
    trace = np.trace(A).real
    if abs(trace - 1) > TRACE_TOLERANCE:
      raise DensityMatrixError("Trace is {!r}, expected 1.".format(trace))
    smallest = np.linalg.eigvalsh(A)[0]
    if smallest < EIGENVALUE_TOLERANCE:
      raise DensityMatrixError("Matrix has negative eigenvalue {:.3e}."
                               .format(smallest))
    A.setflags(write=False)
    self._entries = A

  @property
  def dim(self):
    return self._entries.shape[0]

  @property
  def entries(self):
    return self._entries

  def eigenvalues(self):
    return np.linalg.eigvalsh(self._entries)

  def purity(self):
    return float(np.real(np.trace(self._entries.dot(self._entries))))

  def is_pure(self, tolerance=1e-10):
    return abs(self.purity() - 1) <= tolerance

  def __eq__(self, other):
    return (isinstance(other, DensityMatrix)
            and np.array_equal(self._entries, other._entries))

  def __ne__(self, other):
    return not self == other

  def __repr__(self):
    return 'DensityMatrix(dim={}, purity={:.6f})'.format(self.dim, self.purity())


SlitSpec = collections.namedtuple('SlitSpec', ['t', 'phi'])
BoundSet = collections.namedtuple(
    'BoundSet', ['classical_ideal', 'classical_corrected', 'quantum_ideal',
                 'quantum_lower', 'quantum_upper', 'epsilon_bar'])


def validate_slit_spec(spec):
  t = [float(x) for x in spec.t]
  phi = [float(x) for x in spec.phi]
  if len(t) != len(phi) or not t:
    raise ValueError("Slit spec needs one phase per slit, got {} t and {} phi."
                     .format(len(t), len(phi)))
  for l, x in enumerate(t):
    if not 0 <= x <= 1:
      raise ValueError("Transmissivity t[{}] = {} outside [0, 1].".format(l, x))
  if not any(x > 0 for x in t):
    raise ValueError("All slits are closed: at least one t_l must be positive.")
  return SlitSpec(t, phi)


def slit_amplitudes(spec):
  """Normalized amplitudes sqrt(t_l / C) e^{i phi_l}, C = sum_l t_l."""
  spec = validate_slit_spec(spec)
  t = np.array(spec.t)
  phi = np.array(spec.phi)
  # Closed slits carry no phase.
  phi = np.where(t > 0, phi, 0.0)
  return np.sqrt(t / t.sum()) * np.exp(1j * phi)


def slit_state(spec):
  return pure_state(slit_amplitudes(spec))


def slit_spec_from_vector(v):
  """Preparation settings encoding the KS state of vector `v`."""
  amplitudes = np.asarray(v.to_complex() if isinstance(v, KsVector) else v,
                          dtype=complex)
  weights = np.abs(amplitudes) ** 2
  t = weights / weights.sum()
  phi = np.where(t > 0, np.angle(amplitudes), 0.0)
  return SlitSpec([float(x) for x in t], [float(x) for x in phi])


def _unit(v):
  if isinstance(v, KsVector):
    return to_unit_vector(v)
  v = np.asarray(v, dtype=complex)
  norm = np.linalg.norm(v)
  if norm == 0:
    raise ValueError("Cannot normalize the zero vector.")
  return v / norm


def pure_state(v):
  """|v><v| / <v|v> for a KsVector or a complex amplitude array."""
  u = _unit(v)
  return DensityMatrix(np.outer(u, u.conj()))


def maximally_mixed(dimension):
  return DensityMatrix(np.eye(dimension) / dimension)


def random_pure_state(dimension, rng):
  z = rng.standard_normal(dimension) + 1j * rng.standard_normal(dimension)
  return pure_state(z)


def random_density_matrix(dimension, rng, rank=None):
  """Ginibre-distributed mixed state of the given rank (full rank by default)."""
  rank = dimension if rank is None else rank
  if not 1 <= rank <= dimension:
    raise ValueError("Rank must be in [1, {}], got {}.".format(dimension, rank))
  G = (rng.standard_normal((dimension, rank))
       + 1j * rng.standard_normal((dimension, rank)))
  A = G.dot(G.conj().T)
  A = (A + A.conj().T) / 2
  return DensityMatrix(A / np.trace(A).real)


def _check_dimension(rho, dimension):
  if rho.dim != dimension:
    raise ValueError("State has dimension {} but the vectors have {}."
                     .format(rho.dim, dimension))


def detection_probability(rho, v):
  """<v|rho|v> with v normalized, clipped to [0, 1]."""
  u = _unit(v)
  _check_dimension(rho, u.shape[0])
  p = np.real(u.conj().dot(rho.entries).dot(u))
  return float(np.clip(p, 0.0, 1.0))


def detection_probabilities(rho, ks_set):
  """Array of <v_i|rho|v_i> in vector order."""
  _check_dimension(rho, ks_set.dimension)
  U = ks_set.unit_vectors()
  p = np.real(np.einsum('ki,ij,kj->k', U.conj(), rho.entries, U))
  return np.clip(p, 0.0, 1.0)


def sigma(rho, ks_set, weight=KS21_WEIGHT):
  """weight * sum_i P(Pi_i = 1)."""
  return float(weight * detection_probabilities(rho, ks_set).sum())


def sigma_max(ks_set, weight=KS21_WEIGHT):
  """Algebraic maximum of Sigma: every test answering yes."""
  return weight * len(ks_set)


def context_sums(rho, ks_set):
  """Sum of detection probabilities over each context (1 for complete ones)."""
  p = detection_probabilities(rho, ks_set)
  return [float(sum(p[ks_set.index_of(i)] for i in context))
          for context in ks_set.contexts]


def add_white_noise(rho, w):
  """(1 - w) rho + w I/d."""
  if not 0 <= w <= 1:
    raise ValueError("Noise weight w = {} outside [0, 1].".format(w))
  d = rho.dim
  return DensityMatrix((1 - w) * rho.entries + w * np.eye(d) / d)


def crosstalk_probability(p, epsilon, dimension):
  """Projection contaminated toward I/d with weight epsilon."""
  if not 0 <= epsilon <= 1:
    raise ValueError("Crosstalk epsilon = {} outside [0, 1].".format(epsilon))
  return (1 - epsilon) * np.asarray(p) + epsilon / dimension


def corrected_bounds(epsilon_bar, classical_ideal=CLASSICAL_IDEAL,
                     quantum_ideal=QUANTUM_IDEAL, sigma_max=SIGMA_MAX):
  """Bounds widened by the measured exclusivity error epsilon_bar.

  A fraction epsilon_bar of the runs may answer arbitrarily, contributing
  anywhere between 0 and sigma_max.
  """
  if not 0 <= epsilon_bar <= 1:
    raise ValueError("epsilon_bar = {} outside [0, 1].".format(epsilon_bar))
  kept = 1 - epsilon_bar
  return BoundSet(
      classical_ideal=float(classical_ideal),
      classical_corrected=classical_ideal * kept + sigma_max * epsilon_bar,
      quantum_ideal=float(quantum_ideal),
      quantum_lower=quantum_ideal * kept,
      quantum_upper=quantum_ideal * kept + sigma_max * epsilon_bar,
      epsilon_bar=float(epsilon_bar))


def ks_states(ks_set):
  """OrderedDict 'KS<id>' -> pure state of each vector."""
  return collections.OrderedDict(
      ('KS{}'.format(v.id), pure_state(v)) for v in ks_set.vectors)


def fig5_states(ks_set, ks9_id=9, noise=0.30):
  """The five non-basis test states: two slit states, I/d, noisy and pure KS9."""
  d = ks_set.dimension
  ks9 = pure_state(ks_set.vector(ks9_id))
  phi2 = [1 if l in (0, 4) else 0 for l in range(d)]
  return collections.OrderedDict([
      ('phi1', slit_state(SlitSpec([1] * d, [0] * d))),
      ('phi2', slit_state(SlitSpec(phi2, [0] * d))),
      ('mixed', maximally_mixed(d)),
      ('KS{}_w{}'.format(ks9_id, int(round(noise * 100))),
       add_white_noise(ks9, noise)),
      ('KS{}'.format(ks9_id), ks9),
  ])


def _matrix_to_json(A):
  return [[[float(x.real), float(x.imag)] for x in row] for row in A]


def density_matrix_to_json(rho):
  return collections.OrderedDict([('dim', rho.dim),
                                  ('entries', _matrix_to_json(rho.entries))])


def density_matrix_from_json(document):
  try:
    dim = int(document['dim'])
    entries = np.array([[complex(re, im) for re, im in row]
                        for row in document['entries']])
  except (KeyError, TypeError, ValueError) as e:
    raise DensityMatrixError("Malformed density matrix document: {}".format(e))
  if entries.shape != (dim, dim):
    raise DensityMatrixError("Declared dim {} but entries have shape {}."
                             .format(dim, entries.shape))
  return DensityMatrix(entries)


def slit_spec_to_json(spec):
  return collections.OrderedDict([('t', list(spec.t)), ('phi', list(spec.phi))])


def slit_spec_from_json(document):
  return validate_slit_spec(SlitSpec(document['t'], document['phi']))
