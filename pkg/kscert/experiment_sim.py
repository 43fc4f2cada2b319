# Creation date: 18 Oct 2026
# Description: Monte Carlo reproduction of the sequential certification
#   protocol: per-pulse random projector choice, stochastic detection,
#   exclusivity tests and Sigma estimation with Poissonian errors.
"""Photon-counting simulator.

Every pulse picks one of the n projectors, then clicks with probability
eta * p_i (single photons) or 1 - exp(-mu * eta * p_i) (attenuated coherent
pulses of mean photon number mu). Pulses are processed in blocks of
`BLOCK_SIZE`; each block draws from its own Philox stream keyed by
(seed, purpose, run stream, block), so results do not depend on how many
worker threads process the blocks.
"""

import collections
import concurrent.futures
import datetime
import json
import logging
import os
import platform
import re

import numpy as np
import pandas as pd
import psutil
import yaml

from kscert import exclusivity
from kscert import quantum_model
from kscert.ks_core import get_hash_value
from kscert.quantum_model import DensityMatrix

logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)

BLOCK_SIZE = 2 ** 16
DEFAULT_PULSES = 1000000
DEFAULT_TRIALS_PER_PAIR = 100000
DEFAULT_SEED = 20130321

PULSE_STREAM = 0
EXCLUSIVITY_STREAM = 1
# First run stream of each artifact, so no two runs of one seed share a stream.
ARTIFACT_STREAMS = {'fig3': 0, 'fig5': 1000, 'fig4': 2000, 'certify': 3000}

NOISE_MODELS = ['none', 'preparation_white_noise', 'projection_crosstalk']
SAMPLING_MODES = ['uniform', 'balanced']
ARTIFACTS = ['fig2', 'fig3', 'fig4', 'fig5']
STATE_SUITES = ['fig3', 'fig5', 'all']
NCHV_LABEL = 'NCHV'

RUNS_CSV_COLUMNS = ['state', 'projector', 'pulses', 'detections', 'efficiency',
                    'mean_photon_number', 'set_fingerprint', 'seed']


class ConfigError(ValueError):
  """Configuration rejected; `errors` lists every violation found."""

  def __init__(self, errors):
    self.errors = list(errors)
    super(ConfigError, self).__init__(
        "Invalid configuration:\n  " + "\n  ".join(self.errors))


class InsufficientSamplingError(ValueError):
  pass


class RunsFormatError(ValueError):
  """A runs CSV that does not follow the runs schema."""


_CONFIG_DEFAULTS = collections.OrderedDict([
    ('name', 'custom'),
    ('artifacts', ('fig4',)),
    ('pulses_per_run', DEFAULT_PULSES),
    ('detection_efficiency', 1.0),
    ('noise_model', 'none'),
    ('noise_parameter', 0.0),
    ('rng_seed', DEFAULT_SEED),
    ('prepared_state', 'KS7'),
    ('states', 'all'),
    ('mean_photon_number', None),
    ('sampling', 'uniform'),
    ('exclusivity_trials_per_pair', DEFAULT_TRIALS_PER_PAIR),
    ('workers', 1),
    ('checkpoints_per_decade', 20),
])

ExperimentConfig = collections.namedtuple(
    'ExperimentConfig', list(_CONFIG_DEFAULTS),
    defaults=list(_CONFIG_DEFAULTS.values()))


Checkpoint = collections.namedtuple(
    'Checkpoint', ['pulses_sent', 'pulses', 'detections'])


class RunRecord(collections.namedtuple(
    'RunRecord', ['state', 'ids', 'pulses', 'detections', 'efficiency',
                  'mean_photon_number', 'set_fingerprint', 'seed',
                  'checkpoints'])):
  """Per-projector counts of one measurement run.

  `pulses[k]` and `detections[k]` refer to the projector of vector `ids[k]`.
  `checkpoints` holds cumulative counts on the logarithmic pulse grid.
  """
  __slots__ = ()

  @property
  def total_pulses(self):
    return int(np.sum(self.pulses))

  def same_counts(self, other):
    return (self.state == other.state and list(self.ids) == list(other.ids)
            and np.array_equal(self.pulses, other.pulses)
            and np.array_equal(self.detections, other.detections)
            and len(self.checkpoints) == len(other.checkpoints)
            and all(a.pulses_sent == b.pulses_sent
                    and np.array_equal(a.pulses, b.pulses)
                    and np.array_equal(a.detections, b.detections)
                    for a, b in zip(self.checkpoints, other.checkpoints)))


ExclusivityReport = collections.namedtuple(
    'ExclusivityReport', ['state_ids', 'epsilon', 'std_error', 'epsilon_bar',
                          'epsilon_bar_std_error', 'pairs', 'trials_per_pair'])


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

def _is_int(x):
  return isinstance(x, (int, np.integer)) and not isinstance(x, bool)


def _is_real(x):
  return isinstance(x, (int, float, np.integer, np.floating)) \
      and not isinstance(x, bool)


def validate_config(document):
  """Every schema violation of a config mapping, as readable strings."""
  if not isinstance(document, dict):
    return ["Config must be a mapping, got {}.".format(type(document).__name__)]
  if not document:
    return ["Config is empty."]
  errors = []
  for key in document:
    if key not in _CONFIG_DEFAULTS:
      errors.append("Unknown key {!r}.".format(key))
  get = lambda k: document.get(k, _CONFIG_DEFAULTS[k])

  artifacts = get('artifacts')
  if isinstance(artifacts, str):
    artifacts = [artifacts]
  if not isinstance(artifacts, (list, tuple)) or not artifacts:
    errors.append("'artifacts' must be a nonempty list of {}.".format(ARTIFACTS))
  else:
    for a in artifacts:
      if a not in ARTIFACTS:
        errors.append("Unknown artifact {!r}; expected one of {}."
                      .format(a, ARTIFACTS))
  pulses = get('pulses_per_run')
  if not _is_int(pulses) or pulses <= 0:
    errors.append("'pulses_per_run' must be a positive integer, got {!r}."
                  .format(pulses))
  eta = get('detection_efficiency')
  if not _is_real(eta) or not 0 < eta <= 1:
    errors.append("'detection_efficiency' must be in (0, 1], got {!r}."
                  .format(eta))
  noise_model = get('noise_model')
  if noise_model not in NOISE_MODELS:
    errors.append("'noise_model' must be one of {}, got {!r}."
                  .format(NOISE_MODELS, noise_model))
  noise = get('noise_parameter')
  if not _is_real(noise) or not 0 <= noise <= 1:
    errors.append("'noise_parameter' must be in [0, 1], got {!r}."
                  .format(noise))
  seed = get('rng_seed')
  if not _is_int(seed) or not 0 <= seed < 2 ** 64:
    errors.append("'rng_seed' must be a 64-bit unsigned integer, got {!r}."
                  .format(seed))
  state = get('prepared_state')
  if isinstance(state, str):
    if _parse_label(state) is None:
      errors.append("Unknown prepared_state label {!r}.".format(state))
  elif isinstance(state, dict):
    if not ({'t', 'phi'} <= set(state) or {'dim', 'entries'} <= set(state)):
      errors.append("'prepared_state' mapping needs 't'/'phi' or "
                    "'dim'/'entries'.")
  elif isinstance(state, quantum_model.SlitSpec):
    try:
      quantum_model.validate_slit_spec(state)
    except ValueError as e:
      errors.append("'prepared_state': {}".format(e))
  elif not isinstance(state, DensityMatrix):
    errors.append("'prepared_state' must be a label, a slit spec or a "
                  "density matrix.")
  states = get('states')
  if isinstance(states, str):
    if states not in STATE_SUITES:
      errors.append("'states' must be one of {} or a list of labels, got {!r}."
                    .format(STATE_SUITES, states))
  elif isinstance(states, (list, tuple)) and states:
    for s in states:
      if not isinstance(s, str) or _parse_label(s) is None:
        errors.append("Unknown state label {!r} in 'states'.".format(s))
  else:
    errors.append("'states' must be a suite name or a nonempty list.")
  mu = get('mean_photon_number')
  if mu is not None and (not _is_real(mu) or mu <= 0):
    errors.append("'mean_photon_number' must be positive or null, got {!r}."
                  .format(mu))
  if get('sampling') not in SAMPLING_MODES:
    errors.append("'sampling' must be one of {}, got {!r}."
                  .format(SAMPLING_MODES, get('sampling')))
  trials = get('exclusivity_trials_per_pair')
  if not _is_int(trials) or trials <= 0:
    errors.append("'exclusivity_trials_per_pair' must be a positive integer, "
                  "got {!r}.".format(trials))
  workers = get('workers')
  if workers != 'auto' and (not _is_int(workers) or workers < 1):
    errors.append("'workers' must be 'auto' or a positive integer, got {!r}."
                  .format(workers))
  per_decade = get('checkpoints_per_decade')
  if not _is_int(per_decade) or per_decade < 1:
    errors.append("'checkpoints_per_decade' must be a positive integer, got "
                  "{!r}.".format(per_decade))
  return errors


def resolve_workers(workers):
  if workers == 'auto':
    return psutil.cpu_count(logical=False) or psutil.cpu_count() or 1
  return int(workers)


def make_config(document, overrides=None):
  """Validate a mapping (plus CLI overrides) into an `ExperimentConfig`."""
  document = dict(document or {})
  for key, value in (overrides or {}).items():
    if value is not None:
      document[key] = value
  errors = validate_config(document)
  if errors:
    raise ConfigError(errors)
  values = dict(_CONFIG_DEFAULTS)
  values.update(document)
  if isinstance(values['artifacts'], str):
    values['artifacts'] = [values['artifacts']]
  values['artifacts'] = tuple(values['artifacts'])
  if isinstance(values['states'], list):
    values['states'] = tuple(values['states'])
  values['workers'] = resolve_workers(values['workers'])
  return ExperimentConfig(**values)


def load_config(path, overrides=None):
  """Read a YAML (or JSON) config file into an `ExperimentConfig`."""
  with open(path, 'r') as f:
    try:
      document = yaml.safe_load(f)
    except yaml.YAMLError as e:
      raise ConfigError(["Cannot parse {}: {}".format(path, e)])
  if document is None:
    raise ConfigError(["Config is empty."])
  return make_config(document, overrides)


def config_to_dict(cfg):
  out = collections.OrderedDict()
  for key, value in cfg._asdict().items():
    if isinstance(value, quantum_model.SlitSpec):
      value = quantum_model.slit_spec_to_json(value)
    elif isinstance(value, tuple):
      value = list(value)
    elif isinstance(value, DensityMatrix):
      value = quantum_model.density_matrix_to_json(value)
    out[key] = value
  return out


# ---------------------------------------------------------------------------
# Prepared states
# ---------------------------------------------------------------------------

_LABEL_RE = re.compile(r'^(KS(\d+)(_w(\d+))?|phi1|phi2|mixed|NCHV)$')


def _parse_label(label):
  return _LABEL_RE.match(label)


def named_state(label, ks_set):
  """DensityMatrix of a label such as 'KS7', 'KS9_w30', 'phi1' or 'mixed'."""
  match = _parse_label(label)
  if match is None or label == NCHV_LABEL:
    raise ValueError("{!r} does not name a quantum state.".format(label))
  if match.group(2):
    rho = quantum_model.pure_state(ks_set.vector(int(match.group(2))))
    if match.group(4):
      rho = quantum_model.add_white_noise(rho, int(match.group(4)) / 100.0)
    return rho
  d = ks_set.dimension
  if label == 'mixed':
    return quantum_model.maximally_mixed(d)
  if label == 'phi1':
    return quantum_model.slit_state(quantum_model.SlitSpec([1] * d, [0] * d))
  return quantum_model.slit_state(
      quantum_model.SlitSpec([1 if l in (0, 4) else 0 for l in range(d)],
                             [0] * d))


def suite_labels(states, ks_set):
  """Labels of a state suite: 'fig3', 'fig5', 'all' or an explicit list."""
  if not isinstance(states, str):
    return list(states)
  ks = ['KS{}'.format(i) for i in ks_set.ids]
  fig5 = list(quantum_model.fig5_states(ks_set))
  return {'fig3': ks, 'fig5': fig5, 'all': ks + fig5}[states]


def nchv_assignment(ks_set):
  """0/1 per vector: the noncontextual strategy marking a maximum independent set."""
  g = exclusivity.build_graph(ks_set)
  chosen = set(exclusivity.independence_number(g).labels)
  return np.array([1.0 if i in chosen else 0.0 for i in ks_set.ids])


def source_probabilities(cfg, ks_set, state=None):
  """(label, per-projector yes-probability) after the configured noise."""
  state = cfg.prepared_state if state is None else state
  d = ks_set.dimension
  if isinstance(state, str) and state == NCHV_LABEL:
    label = NCHV_LABEL
    p = nchv_assignment(ks_set)
    if cfg.noise_model == 'preparation_white_noise':
      p = (1 - cfg.noise_parameter) * p + cfg.noise_parameter / d
  else:
    if isinstance(state, DensityMatrix):
      label, rho = 'custom', state
    elif isinstance(state, quantum_model.SlitSpec):
      label, rho = 'slit', quantum_model.slit_state(state)
    elif isinstance(state, dict) and 't' in state:
      label, rho = 'slit', quantum_model.slit_state(
          quantum_model.slit_spec_from_json(state))
    elif isinstance(state, dict):
      label, rho = 'custom', quantum_model.density_matrix_from_json(state)
    else:
      label, rho = state, named_state(state, ks_set)
    if cfg.noise_model == 'preparation_white_noise':
      rho = quantum_model.add_white_noise(rho, cfg.noise_parameter)
    p = quantum_model.detection_probabilities(rho, ks_set)
  if cfg.noise_model == 'projection_crosstalk':
    p = quantum_model.crosstalk_probability(p, cfg.noise_parameter, d)
  return label, np.asarray(p, dtype=float)


# ---------------------------------------------------------------------------
# Pulse simulation
# ---------------------------------------------------------------------------

def click_probability(p, efficiency, mean_photon_number=None):
  p = np.asarray(p, dtype=float)
  if mean_photon_number is None:
    return efficiency * p
  return -np.expm1(-mean_photon_number * efficiency * p)


def checkpoint_grid(total, per_decade=20):
  """Logarithmic grid 10^(k/per_decade) from 10^2 up to `total`, plus `total`."""
  grid = []
  k = 2 * per_decade
  while True:
    x = int(round(10 ** (k / float(per_decade))))
    if x >= total:
      break
    if not grid or x > grid[-1]:
      grid.append(x)
    k += 1
  grid.append(int(total))
  return grid


def _block_rng(seed, purpose, stream, block):
  sequence = np.random.SeedSequence(seed, spawn_key=(purpose, stream, block))
  return np.random.Generator(np.random.Philox(sequence))


def _simulate_block(cfg, click, stream, block, start, size, checkpoints):
  m = len(click)
  rng = _block_rng(cfg.rng_seed, PULSE_STREAM, stream, block)
  if cfg.sampling == 'balanced':
    rounds = -(-size // m)
    idx = np.argsort(rng.random((rounds, m)), axis=1).ravel()[:size]
  else:
    idx = rng.integers(0, m, size=size)
  clicked = rng.random(size) < click[idx]
  hits = idx[clicked]
  partial = []
  for c in checkpoints:
    if start < c < start + size:
      length = c - start
      partial.append((c, np.bincount(idx[:length], minlength=m),
                      np.bincount(idx[:length][clicked[:length]], minlength=m)))
  return (np.bincount(idx, minlength=m), np.bincount(hits, minlength=m),
          partial)


def run_experiment(cfg, ks_set, stream=0, state=None, workers=None,
                   set_fingerprint=''):
  """Simulate one measurement run of `cfg.pulses_per_run` pulses.

  Args:
    stream: run index; distinct runs sharing a seed use distinct streams.
    state: overrides `cfg.prepared_state`.
    workers: threads over pulse blocks (defaults to `cfg.workers`).
  Returns:
    a `RunRecord`.
  """
  total = cfg.pulses_per_run
  if not _is_int(total) or total <= 0:
    raise ValueError("pulses_per_run must be positive, got {!r}.".format(total))
  if not 0 < cfg.detection_efficiency <= 1:
    raise ValueError("Detection efficiency must be in (0, 1], got {}."
                     .format(cfg.detection_efficiency))
  label, p = source_probabilities(cfg, ks_set, state)
  click = click_probability(p, cfg.detection_efficiency, cfg.mean_photon_number)
  grid = checkpoint_grid(total, cfg.checkpoints_per_decade)
  starts = list(range(0, total, BLOCK_SIZE))
  jobs = [(stream, b, s, min(BLOCK_SIZE, total - s))
          for b, s in enumerate(starts)]
  workers = cfg.workers if workers is None else workers
  simulate = lambda job: _simulate_block(cfg, click, job[0], job[1], job[2],
                                         job[3], grid)
  if workers > 1 and len(jobs) > 1:
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
      results = list(pool.map(simulate, jobs))
  else:
    results = [simulate(job) for job in jobs]

  m = len(click)
  pulses = np.zeros(m, dtype=np.int64)
  detections = np.zeros(m, dtype=np.int64)
  checkpoints = []
  for (_, _, s, size), (n_block, c_block, partial) in zip(jobs, results):
    for c, n_part, c_part in partial:
      checkpoints.append(Checkpoint(c, pulses + n_part, detections + c_part))
    pulses = pulses + n_block
    detections = detections + c_block
    if s + size in grid:
      checkpoints.append(Checkpoint(s + size, pulses.copy(), detections.copy()))
  logger.debug("Run {} ({}): {} pulses, {} detections.".format(
      stream, label, total, int(detections.sum())))
  return RunRecord(label, tuple(ks_set.ids), pulses, detections,
                   float(cfg.detection_efficiency), cfg.mean_photon_number,
                   set_fingerprint, int(cfg.rng_seed), tuple(checkpoints))


def estimate_probabilities(pulses, detections, efficiency,
                           mean_photon_number=None):
  """Per-projector P_i estimates and their Poissonian standard errors."""
  n = np.asarray(pulses, dtype=float)
  c = np.asarray(detections, dtype=float)
  if np.any(n <= 0):
    missing = [k for k in range(len(n)) if n[k] <= 0]
    raise InsufficientSamplingError(
        "No pulses for projector position(s) {}.".format(missing))
  if mean_photon_number is None:
    p = c / (efficiency * n)
    se = np.sqrt(c) / (efficiency * n)
    return p, se
  scale = mean_photon_number * efficiency
  # A projector that clicked on every pulse is kept finite.
  f = np.minimum(c / n, (n - 0.5) / n)
  p = -np.log1p(-f) / scale
  se = np.sqrt(c) / (scale * n * (1 - f))
  return p, se


def estimate_sigma(rec, efficiency=None, weight=quantum_model.KS21_WEIGHT):
  """(sigma_hat, std_error) of a run; P_i = c_i / (eta * n_i)."""
  efficiency = rec.efficiency if efficiency is None else efficiency
  p, se = estimate_probabilities(rec.pulses, rec.detections, efficiency,
                                 rec.mean_photon_number)
  return (float(weight * p.sum()),
          float(weight * np.sqrt(np.sum(se ** 2))))


def convergence_trace(rec, efficiency=None, weight=quantum_model.KS21_WEIGHT):
  """Running (pulses_sent, sigma_hat, std_error) at every usable checkpoint.

  Checkpoints where some projector has not been drawn yet are skipped.
  """
  efficiency = rec.efficiency if efficiency is None else efficiency
  trace = []
  for cp in rec.checkpoints:
    if np.any(np.asarray(cp.pulses) == 0):
      continue
    p, se = estimate_probabilities(cp.pulses, cp.detections, efficiency,
                                   rec.mean_photon_number)
    trace.append((cp.pulses_sent, float(weight * p.sum()),
                  float(weight * np.sqrt(np.sum(se ** 2)))))
  return trace


# ---------------------------------------------------------------------------
# Exclusivity tests
# ---------------------------------------------------------------------------

def run_exclusivity_tests(cfg, ks_set, g=None):
  """Wrong-result fractions for every ordered orthogonal (prepare, measure) pair.

  Each pair gets `cfg.exclusivity_trials_per_pair` pulses with the prepared
  state |v_i> under the configured noise; a click on Pi_j with v_j orthogonal
  to v_i is a wrong result.
  """
  if g is None:
    g = exclusivity.build_graph(ks_set)
  trials = cfg.exclusivity_trials_per_pair
  prepare, measure, probs = [], [], []
  for i, vector_id in enumerate(ks_set.ids):
    _, p = source_probabilities(cfg, ks_set, state='KS{}'.format(vector_id))
    for j in np.flatnonzero(g.adjacency[i]):
      prepare.append(i)
      measure.append(j)
      probs.append(p[j])
  prepare = np.array(prepare, dtype=int)
  probs = np.array(probs)
  rng = _block_rng(cfg.rng_seed, EXCLUSIVITY_STREAM, 0, 0)
  click = click_probability(probs, cfg.detection_efficiency,
                            cfg.mean_photon_number)
  counts = rng.binomial(trials, np.clip(click, 0.0, 1.0))
  eps, se = estimate_probabilities(np.full(len(counts), trials), counts,
                                   cfg.detection_efficiency,
                                   cfg.mean_photon_number)
  per_state, per_state_se = [], []
  for i in range(len(ks_set)):
    mask = prepare == i
    k = int(mask.sum())
    per_state.append(float(eps[mask].mean()) if k else 0.0)
    per_state_se.append(float(np.sqrt(np.sum(se[mask] ** 2)) / k) if k else 0.0)
  pairs = len(counts)
  epsilon_bar = float(eps.mean()) if pairs else 0.0
  epsilon_bar_se = float(np.sqrt(np.sum(se ** 2)) / pairs) if pairs else 0.0
  logger.info("Exclusivity tests: {} ordered pairs x {} trials, "
              "epsilon_bar = {:.5f} +- {:.5f}".format(
                  pairs, trials, epsilon_bar, epsilon_bar_se))
  return ExclusivityReport(tuple(ks_set.ids), tuple(per_state),
                           tuple(per_state_se), epsilon_bar, epsilon_bar_se,
                           pairs, trials)


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

def run_suite(cfg, ks_set, labels, set_fingerprint='', first_stream=0):
  """One run per label, fanned out over `cfg.workers` threads, in label order."""
  def run(k):
    return run_experiment(cfg, ks_set, stream=first_stream + k,
                          state=labels[k], workers=1,
                          set_fingerprint=set_fingerprint)
  if cfg.workers > 1 and len(labels) > 1:
    with concurrent.futures.ThreadPoolExecutor(max_workers=cfg.workers) as pool:
      records = list(pool.map(run, range(len(labels))))
  else:
    records = [run(k) for k in range(len(labels))]
  for rec in records:
    logger.info("State {}: {} pulses".format(rec.state, rec.total_pulses))
  return records


def sigma_table(records, efficiency=None):
  rows = []
  for rec in records:
    sigma_hat, std_error = estimate_sigma(rec, efficiency)
    rows.append((rec.state, sigma_hat, std_error))
  return pd.DataFrame(rows, columns=['state', 'sigma', 'std_error'])


def state_independence_suite(cfg_base, ks_set, labels=None, set_fingerprint='',
                             first_stream=0):
  """Sigma for every state of the suite (`cfg_base.states` by default).

  Returns:
    (DataFrame with columns state, sigma, std_error; list of RunRecord).
  """
  if labels is None:
    labels = suite_labels(cfg_base.states, ks_set)
  records = run_suite(cfg_base, ks_set, labels, set_fingerprint, first_stream)
  return sigma_table(records), records


# ---------------------------------------------------------------------------
# Tables and files
# ---------------------------------------------------------------------------

def records_to_frame(records):
  rows = []
  for rec in records:
    mu = np.nan if rec.mean_photon_number is None else rec.mean_photon_number
    for vector_id, n, c in zip(rec.ids, rec.pulses, rec.detections):
      rows.append((rec.state, int(vector_id), int(n), int(c), rec.efficiency,
                   mu, rec.set_fingerprint, rec.seed))
  return pd.DataFrame(rows, columns=RUNS_CSV_COLUMNS)


def write_runs_csv(records, path):
  records_to_frame(records).to_csv(path, index=False)


def read_runs_csv(path, efficiency=None):
  """RunRecords from a CSV in the runs schema (simulated or measured).

  Blank `seed`, `mean_photon_number` and `set_fingerprint` cells are allowed.

  Args:
    efficiency: overrides the `efficiency` column when given.
  Raises:
    RunsFormatError: on missing columns or invalid counts.
  """
  try:
    df = pd.read_csv(path, dtype={'state': str, 'set_fingerprint': str})
  except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
    raise RunsFormatError("Cannot parse {}: {}".format(path, e))
  missing = [c for c in RUNS_CSV_COLUMNS if c not in df.columns]
  if missing:
    raise RunsFormatError("{} lacks column(s) {}.".format(path, missing))
  required = ['state', 'projector', 'pulses', 'detections']
  if efficiency is None:
    required.append('efficiency')
  blank = [c for c in required if df[c].isna().any()]
  if blank:
    raise RunsFormatError("{} has blank cells in column(s) {}.".format(
        path, blank))
  for column in ['projector', 'pulses', 'detections']:
    values = pd.to_numeric(df[column], errors='coerce')
    if values.isna().any() or (values != np.floor(values)).any() \
        or (values < 0).any():
      raise RunsFormatError("{}: column {!r} must hold nonnegative integers."
                            .format(path, column))
    df[column] = values.astype(np.int64)
  if (df['detections'] > df['pulses']).any():
    raise RunsFormatError("{}: detections exceed pulses.".format(path))
  if efficiency is None:
    eta = pd.to_numeric(df['efficiency'], errors='coerce')
    if not ((eta > 0) & (eta <= 1)).all():
      raise RunsFormatError("{}: efficiency must be in (0, 1].".format(path))
  # A run is a maximal block of rows with one state and no repeated projector,
  # so the same state may appear in several runs.
  run_ids, current, seen, previous = [], -1, set(), None
  for state, projector in zip(df['state'], df['projector']):
    if state != previous or projector in seen:
      current += 1
      seen = set()
      previous = state
    seen.add(projector)
    run_ids.append(current)
  df['run'] = run_ids
  records = []
  for _, rows in df.groupby('run', sort=True):
    state = rows['state'].iloc[0]
    eta = float(rows['efficiency'].iloc[0]) if efficiency is None else efficiency
    mu = rows['mean_photon_number'].iloc[0]
    fingerprint = rows['set_fingerprint'].iloc[0]
    seed = rows['seed'].iloc[0]
    records.append(RunRecord(
        state, tuple(int(i) for i in rows['projector']),
        rows['pulses'].to_numpy(dtype=np.int64),
        rows['detections'].to_numpy(dtype=np.int64), eta,
        None if pd.isna(mu) else float(mu),
        '' if pd.isna(fingerprint) else fingerprint,
        None if pd.isna(seed) else int(seed), ()))
  return records


def exclusivity_frame(report, set_fingerprint, seed):
  return pd.DataFrame(collections.OrderedDict([
      ('state', list(report.state_ids)),
      ('epsilon', list(report.epsilon)),
      ('std_error', list(report.std_error)),
      ('epsilon_bar', report.epsilon_bar),
      ('set_fingerprint', set_fingerprint),
      ('seed', seed),
  ]))


def sigma_frame(table, bounds, set_fingerprint, seed):
  df = table.copy()
  for field in ['classical_ideal', 'classical_corrected', 'quantum_lower',
                'quantum_upper']:
    df[field] = getattr(bounds, field)
  df['set_fingerprint'] = set_fingerprint
  df['seed'] = seed
  return df


def trace_frame(trace, set_fingerprint, seed):
  df = pd.DataFrame(trace, columns=['pulses', 'sigma', 'std_error'])
  df['set_fingerprint'] = set_fingerprint
  df['seed'] = seed
  return df


def file_hash(path):
  with open(path, 'rb') as f:
    return get_hash_value(f.read())


def host_facts():
  return collections.OrderedDict([
      ('platform', platform.platform()),
      ('python', platform.python_version()),
      ('cpu_count', psutil.cpu_count()),
      ('physical_cores', psutil.cpu_count(logical=False)),
      ('memory_bytes', psutil.virtual_memory().total),
      ('numpy', np.__version__),
      ('pandas', pd.__version__),
  ])


def write_manifest(out_dir, command, set_fingerprint, seed, artifacts,
                   config=None, extra=None):
  """manifest.json: inputs, seed, artifact hashes, timestamp and host facts.

  The manifest is the only artifact holding a timestamp.
  """
  manifest = collections.OrderedDict([
      ('command', command),
      ('created', datetime.datetime.now().isoformat()),
      ('set_fingerprint', set_fingerprint),
      ('seed', seed),
      ('config', config),
      ('artifacts', collections.OrderedDict(
          (os.path.basename(p), file_hash(p)) for p in artifacts)),
      ('host', host_facts()),
  ])
  if extra:
    manifest.update(extra)
  path = os.path.join(out_dir, 'manifest.json')
  with open(path, 'w') as f:
    json.dump(manifest, f, indent=2)
  return path


def simulate_to_directory(cfg, ks_set, out_dir, set_fingerprint):
  """Run every artifact of `cfg.artifacts` and write its CSV into `out_dir`.

  Returns:
    OrderedDict artifact name -> path (runs.csv and manifest.json included).
  """
  if not os.path.isdir(out_dir):
    os.makedirs(out_dir)
  written = collections.OrderedDict()
  records = []
  seed = int(cfg.rng_seed)
  report = None
  if 'fig2' in cfg.artifacts or 'fig3' in cfg.artifacts \
      or 'fig5' in cfg.artifacts:
    report = run_exclusivity_tests(cfg, ks_set)
  if 'fig2' in cfg.artifacts:
    path = os.path.join(out_dir, 'fig2.csv')
    exclusivity_frame(report, set_fingerprint, seed).to_csv(path, index=False)
    written['fig2'] = path
  for name in ['fig3', 'fig5']:
    if name not in cfg.artifacts:
      continue
    bounds = quantum_model.corrected_bounds(report.epsilon_bar)
    table, suite_records = state_independence_suite(
        cfg, ks_set, suite_labels(name, ks_set), set_fingerprint,
        first_stream=ARTIFACT_STREAMS[name])
    records.extend(suite_records)
    path = os.path.join(out_dir, '{}.csv'.format(name))
    sigma_frame(table, bounds, set_fingerprint, seed).to_csv(path, index=False)
    written[name] = path
  if 'fig4' in cfg.artifacts:
    rec = run_experiment(cfg, ks_set, stream=ARTIFACT_STREAMS['fig4'],
                         set_fingerprint=set_fingerprint)
    records.append(rec)
    path = os.path.join(out_dir, 'fig4.csv')
    trace_frame(convergence_trace(rec), set_fingerprint, seed).to_csv(
        path, index=False)
    written['fig4'] = path
  if records:
    path = os.path.join(out_dir, 'runs.csv')
    write_runs_csv(records, path)
    written['runs'] = path
  written['manifest'] = write_manifest(
      out_dir, 'simulate', set_fingerprint, seed, list(written.values()),
      config=config_to_dict(cfg))
  for name, path in written.items():
    logger.info("Wrote {}: {}".format(name, path))
  return written
