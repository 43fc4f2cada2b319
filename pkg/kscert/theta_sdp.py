# Creation date: 18 Oct 2026
# Description: weighted Lovasz theta of an exclusivity graph by a dense
#   primal-dual interior point method, with independently checkable witnesses.
"""Quantum side of the noncontextuality inequality.

The weighted theta SDP is

  primal:  max <C, X>   s.t.  tr X = 1,  X_ij = 0 for every edge ij,  X >= 0
  dual:    min y_0      s.t.  Z = y_0 I + sum_e y_e A_e - C >= 0

with C = sqrt(w) sqrt(w)^T and A_e = E_ij + E_ji. Both problems are real, so
the solver works with real symmetric matrices. Bounds are never taken from the
solver's own objective: the upper bound is lambda_max(C - sum_e y_e A_e), valid
for any multipliers, and the lower bound is the objective of a projected,
exactly feasible copy of X.
"""

import collections
import logging

import numpy as np

logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)

DEFAULT_GAP_TOLERANCE = 1e-7
PSD_TOLERANCE = -1e-9
RESIDUAL_TOLERANCE = 1e-9
MAX_ITERATIONS = 200
STEP_FRACTION = 0.95
CENTERING = 0.1
MAX_VERTICES = 64


class SdpConvergenceError(RuntimeError):
  """Raised when the certified gap does not close within the iteration cap."""

  def __init__(self, message, lower=None, upper=None, iterations=None):
    super(SdpConvergenceError, self).__init__(message)
    self.lower = lower
    self.upper = upper
    self.iterations = iterations


SdpResult = collections.namedtuple(
    'SdpResult', ['value', 'lower', 'upper', 'gap', 'iterations',
                  'primal_witness', 'dual_witness'])


def cost_matrix(g):
  sqrt_w = np.sqrt(np.array([float(w) for w in g.weights]))
  return np.outer(sqrt_w, sqrt_w)


class _ThetaProblem(object):
  """Constraint operators of the theta SDP for one graph."""

  def __init__(self, g):
    self.n = g.n
    self.C = cost_matrix(g)
    edges = g.edges()
    self.I = np.array([e[0] for e in edges], dtype=int)
    self.J = np.array([e[1] for e in edges], dtype=int)
    self.m = 1 + len(edges)

  def apply(self, X):
    """(<A_k, X>)_k for a possibly non-symmetric X."""
    out = np.empty(self.m)
    out[0] = np.trace(X)
    out[1:] = X[self.I, self.J] + X[self.J, self.I]
    return out

  def adjoint(self, y):
    """sum_k y_k A_k."""
    S = y[0] * np.eye(self.n)
    S[self.I, self.J] += y[1:]
    S[self.J, self.I] += y[1:]
    return S

  def schur(self, X, G):
    """M_kl = tr(A_k X A_l G) for symmetric X and G."""
    I, J = self.I, self.J
    M = np.empty((self.m, self.m))
    M[0, 0] = np.sum(X * G)
    XG = X.dot(G)
    row = XG[I, J] + XG[J, I]
    M[0, 1:] = row
    M[1:, 0] = row
    M[1:, 1:] = (X[np.ix_(J, I)] * G[np.ix_(I, J)]
                 + X[np.ix_(J, J)] * G[np.ix_(I, I)]
                 + X[np.ix_(I, I)] * G[np.ix_(J, J)]
                 + X[np.ix_(I, J)] * G[np.ix_(J, I)])
    return M

  def upper_bound(self, y):
    """Certified upper bound lambda_max(C - sum_e y_e A_e) and its witness Z."""
    edge_part = self.adjoint(np.concatenate([[0.0], y[1:]]))
    S = self.C - edge_part
    upper = np.linalg.eigvalsh(S)[-1]
    Z = upper * np.eye(self.n) - S
    return upper, Z

  def lower_bound(self, X):
    """Objective of X projected onto the feasible set."""
    F = (X + X.T) / 2
    F[self.I, self.J] = 0.0
    F[self.J, self.I] = 0.0
    F = F / np.trace(F)
    smallest = np.linalg.eigvalsh(F)[0]
    if smallest < 0:
      s = -smallest / (1.0 / self.n - smallest)
      F = (1 - s) * F + s * np.eye(self.n) / self.n
    return float(np.sum(self.C * F)), F


def _max_step(V, D):
  """Largest a <= 1 keeping V + a D positive definite, damped."""
  L = np.linalg.cholesky(V)
  Linv = np.linalg.inv(L)
  smallest = np.linalg.eigvalsh(Linv.dot(D).dot(Linv.T))[0]
  if smallest >= 0:
    return 1.0
  return min(1.0, STEP_FRACTION * (-1.0 / smallest))


def lovasz_theta(g, tolerance=DEFAULT_GAP_TOLERANCE,
                 max_iterations=MAX_ITERATIONS):
  """Weighted Lovasz theta of `g` with a certified interval.

  Starts from X = I/n, y_0 = sum(w) + 1, y_e = 0, which is strictly feasible
  for both problems, and follows the central path with the HKM direction.

  Returns:
    an `SdpResult` with upper - lower <= tolerance; `value` is the midpoint.
  Raises:
    SdpConvergenceError: gap still above `tolerance` after `max_iterations`.
  """
  if tolerance <= 0:
    raise ValueError("Tolerance must be positive, got {}.".format(tolerance))
  if g.n > MAX_VERTICES:
    raise ValueError("Graph has {} vertices; the dense solver is limited to {}."
                     .format(g.n, MAX_VERTICES))
  if g.n == 0:
    return SdpResult(0.0, 0.0, 0.0, 0.0, 0, np.zeros((0, 0)), np.zeros((0, 0)))

  problem = _ThetaProblem(g)
  n, C = problem.n, problem.C
  b = np.zeros(problem.m)
  b[0] = 1.0
  X = np.eye(n) / n
  y = np.zeros(problem.m)
  y[0] = np.trace(C) + 1.0
  Z = problem.adjoint(y) - C

  best_lower, best_upper = -np.inf, np.inf
  primal_witness = dual_witness = None
  iterations = 0
  while True:
    lower, F = problem.lower_bound(X)
    upper, W = problem.upper_bound(y)
    if lower > best_lower:
      best_lower, primal_witness = lower, F
    if upper < best_upper:
      best_upper, dual_witness = upper, W
    logger.debug("iteration {}: [{:.12f}, {:.12f}]".format(
        iterations, best_lower, best_upper))
    if best_lower > best_upper + RESIDUAL_TOLERANCE:
      raise AssertionError("Weak duality violated: {} > {}.".format(
          best_lower, best_upper))
    if best_upper - best_lower <= tolerance or iterations >= max_iterations:
      break
    iterations += 1
    try:
      mu = np.sum(X * Z) / n
      G = np.linalg.inv(Z)
      G = (G + G.T) / 2
      rp = b - problem.apply(X)
      rhs = problem.apply(CENTERING * mu * G - X) - rp
      dy = np.linalg.solve(problem.schur(X, G), rhs)
      dZ = problem.adjoint(dy)
      dX = CENTERING * mu * G - X - X.dot(dZ).dot(G)
      dX = (dX + dX.T) / 2
      a_p = _max_step(X, dX)
      a_d = _max_step(Z, dZ)
    except np.linalg.LinAlgError as e:
      logger.debug("Stopping at iteration {}: {}".format(iterations, e))
      break
    X = X + a_p * dX
    y = y + a_d * dy
    Z = problem.adjoint(y) - C

  gap = best_upper - best_lower
  if gap > tolerance:
    raise SdpConvergenceError(
        "Theta SDP did not converge: certified interval [{}, {}] after {} "
        "iterations.".format(best_lower, best_upper, iterations),
        lower=best_lower, upper=best_upper, iterations=iterations)
  value = (best_upper + best_lower) / 2
  logger.info("theta = {:.9f} (gap {:.2e}, {} iterations)".format(
      value, gap, iterations))
  return SdpResult(value, best_lower, best_upper, gap, iterations,
                   primal_witness, dual_witness)


def quantum_bound(g, tolerance=DEFAULT_GAP_TOLERANCE):
  """Maximum quantum value of sum_i w_i P_i over the exclusivity graph."""
  return lovasz_theta(g, tolerance).value


def projector_sum(ks_set, weight=2):
  """M = weight * sum_i |v_i><v_i| over unit vectors."""
  return weight * ks_set.projectors().sum(axis=0)


def verify_quantum_value_by_projectors(ks_set, weight=2):
  """Largest eigenvalue of weight * sum_i Pi_i, an SDP-free route to the value."""
  return float(np.linalg.eigvalsh(projector_sum(ks_set, weight))[-1])


def verify_certificates(g, result):
  """Re-check the witnesses of `result` without trusting the solver.

  Returns:
    a dict of residuals and an `ok` flag. The primal witness must be PSD with
    unit trace and zero edge entries; the dual witness Z must be PSD and equal
    upper * I + Y - C for some Y supported on the edges.
  """
  C = cost_matrix(g)
  n = g.n
  X = np.asarray(result.primal_witness, dtype=float)
  Z = np.asarray(result.dual_witness, dtype=float)
  edges = np.triu(g.adjacency, k=1) | np.tril(g.adjacency, k=-1)
  checks = collections.OrderedDict()
  if n == 0:
    checks['ok'] = result.value == 0
    return checks
  checks['primal_min_eigenvalue'] = float(np.linalg.eigvalsh(X)[0])
  checks['primal_trace_residual'] = float(abs(np.trace(X) - 1))
  checks['primal_edge_residual'] = float(np.abs(X[edges]).max()) if edges.any() else 0.0
  checks['primal_objective'] = float(np.sum(C * X))
  checks['dual_min_eigenvalue'] = float(np.linalg.eigvalsh(Z)[0])
  structure = Z + C - result.upper * np.eye(n)
  checks['dual_structure_residual'] = float(np.abs(structure[~edges]).max())
  checks['dual_objective'] = float(result.upper
                                   - min(0.0, checks['dual_min_eigenvalue']))
  checks['gap'] = checks['dual_objective'] - checks['primal_objective']
  checks['ok'] = bool(
      checks['primal_min_eigenvalue'] >= PSD_TOLERANCE
      and checks['primal_trace_residual'] <= RESIDUAL_TOLERANCE
      and checks['primal_edge_residual'] <= RESIDUAL_TOLERANCE
      and checks['dual_min_eigenvalue'] >= PSD_TOLERANCE
      and checks['dual_structure_residual'] <= RESIDUAL_TOLERANCE
      and checks['primal_objective'] <= result.value <= checks['dual_objective']
      + RESIDUAL_TOLERANCE)
  return checks


def _matrix_to_json(A):
  A = np.asarray(A)
  return [[[float(np.real(x)), float(np.imag(x))] for x in row] for row in A]


def sdp_result_to_json(result):
  return collections.OrderedDict([
      ('value', result.value),
      ('lower', result.lower),
      ('upper', result.upper),
      ('gap', result.gap),
      ('iterations', result.iterations),
      ('primal_witness', _matrix_to_json(result.primal_witness)),
      ('dual_witness', _matrix_to_json(result.dual_witness)),
  ])
