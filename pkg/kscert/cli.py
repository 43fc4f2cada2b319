# Creation date: 18 Oct 2026
# Description: command-line entry point: validate a KS set, compute its bounds,
#   simulate the certification protocol and certify measured or simulated data.
#
# Usage:
#   python3 check_n_certify.py validate --set ks_format/ks21.json
#   python3 check_n_certify.py bounds --epsilon-bar 0.0151 --out results/
#   python3 check_n_certify.py simulate --preset fig4 --out results/
#   python3 check_n_certify.py certify --preset certify --out results/
#   python3 check_n_certify.py certify --data runs.csv --epsilon-bar 0.0151
#
# Exit codes: 0 success / confirmed, 1 failure / classical, 2 inconclusive,
# 3 usage or I/O error.

import argparse
import collections
import json
import logging
import os
import sys

import numpy as np

from kscert import exclusivity
from kscert import experiment_sim
from kscert import ks_core
from kscert import quantum_model
from kscert import theta_sdp

logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 3

CONFIRMED = 'QUANTUM_D6_CONFIRMED'
CLASSICAL = 'CLASSICAL_COMPATIBLE'
INCONCLUSIVE = 'INCONCLUSIVE'
VERDICT_EXIT_CODES = {CONFIRMED: EXIT_OK, CLASSICAL: EXIT_FAILURE,
                      INCONCLUSIVE: EXIT_INCONCLUSIVE}
SIGMAS = 3

PRESETS = ['fig2', 'fig3', 'fig4', 'fig5', 'certify']
DEFAULT_OUT_DIR = 'results'


def _HERE(*args):
  h = os.path.dirname(os.path.realpath(__file__))
  return os.path.abspath(os.path.join(h, *args))


def preset_path(name):
  return _HERE('..', 'presets', '{}.yaml'.format(name))


class UsageError(Exception):
  pass


class _Parser(argparse.ArgumentParser):
  """Reports usage errors with exit code 3 instead of argparse's 2."""

  def error(self, message):
    raise UsageError(message)


CertificationReport = collections.namedtuple(
    'CertificationReport',
    ['set_fingerprint', 'structure', 'alpha', 'noncontextual_bound', 'theta',
     'theta_gap', 'epsilon_bar', 'bounds', 'states', 'verdict', 'reason',
     'seed'])


# ---------------------------------------------------------------------------
# Verdict
# ---------------------------------------------------------------------------

def decide_verdict(rows, bounds, sigmas=SIGMAS):
  """Certification verdict from per-state estimates.

  Args:
    rows: (state, sigma_hat, std_error) triples; sigma_hat is None for a state
      with an unsampled projector.
    bounds: a `quantum_model.BoundSet`.
  Returns:
    (verdict, reason).
  """
  if not rows:
    return INCONCLUSIVE, "No tested states."
  unsampled = [state for state, sigma_hat, _ in rows if sigma_hat is None]
  if unsampled:
    return INCONCLUSIVE, "Insufficient sampling for state(s) {}.".format(
        ', '.join(unsampled))
  classical = [state for state, sigma_hat, se in rows
               if sigma_hat - sigmas * se <= bounds.classical_corrected]
  if classical:
    return CLASSICAL, ("State(s) {} do not exceed the corrected noncontextual "
                       "bound {:.4f} by {} standard errors.".format(
                           ', '.join(classical), bounds.classical_corrected,
                           sigmas))
  outside = [state for state, sigma_hat, se in rows
             if not (bounds.quantum_lower - sigmas * se <= sigma_hat
                     <= bounds.quantum_upper + sigmas * se)]
  if outside:
    return INCONCLUSIVE, ("State(s) {} fall outside the quantum band "
                          "[{:.4f}, {:.4f}].".format(
                              ', '.join(outside), bounds.quantum_lower,
                              bounds.quantum_upper))
  return CONFIRMED, ("All {} states violate the corrected noncontextual bound "
                     "{:.4f} inside the quantum band [{:.4f}, {:.4f}].".format(
                         len(rows), bounds.classical_corrected,
                         bounds.quantum_lower, bounds.quantum_upper))


def align_record(rec, ks_set):
  """Counts reordered to the vectors of `ks_set`; absent projectors get 0."""
  pulses = dict(zip(rec.ids, rec.pulses))
  detections = dict(zip(rec.ids, rec.detections))
  unknown = [i for i in rec.ids if i not in set(ks_set.ids)]
  if unknown:
    raise experiment_sim.RunsFormatError(
        "State {}: projector id(s) {} are not in the set.".format(
            rec.state, unknown))
  return rec._replace(
      ids=tuple(ks_set.ids),
      pulses=np.array([pulses.get(i, 0) for i in ks_set.ids], dtype=np.int64),
      detections=np.array([detections.get(i, 0) for i in ks_set.ids],
                          dtype=np.int64))


def state_rows(records, ks_set, efficiency=None):
  rows = []
  for rec in records:
    rec = align_record(rec, ks_set)
    try:
      sigma_hat, std_error = experiment_sim.estimate_sigma(rec, efficiency)
    except experiment_sim.InsufficientSamplingError as e:
      logger.warning("State {}: {}".format(rec.state, e))
      sigma_hat, std_error = None, None
    rows.append((rec.state, sigma_hat, std_error))
  return rows


# ---------------------------------------------------------------------------
# Structural checks and bounds
# ---------------------------------------------------------------------------

def structural_report(ks_set):
  """Orthogonality and coverage hold once loaded; adds colorability."""
  g = exclusivity.build_graph(ks_set)
  verdict = exclusivity.ks_colorability(ks_set, g)
  report = collections.OrderedDict([
      ('summary', ks_set.summary()),
      ('profile', ks_set.profile),
      ('orthogonal_contexts', True),
      ('complete_contexts', sum(1 for c in ks_set.contexts
                                if ks_set.is_complete(c))),
      ('contexts_per_vector', sorted(set(ks_set.context_counts().values()))),
      ('squared_norms', {str(k): v for k, v in
                         ks_set.squared_norm_multiset().items()}),
      ('edges', g.num_edges()),
      ('ks_uncolorable', not verdict.satisfiable),
      ('colorability_nodes', verdict.nodes_explored),
  ])
  return report, g


def compute_bounds(ks_set, g, epsilon_bar):
  alpha = exclusivity.independence_number(g)
  if g.n <= exclusivity.BRUTEFORCE_MAX_VERTICES:
    oracle = exclusivity.independence_number_bruteforce(g)
    if oracle != alpha.value:
      raise AssertionError("Branch and bound alpha {} disagrees with brute "
                           "force {}.".format(alpha.value, oracle))
  nc_bound = exclusivity.noncontextual_bound(g)
  sdp = theta_sdp.lovasz_theta(g)
  certificates = theta_sdp.verify_certificates(g, sdp)
  if not certificates['ok']:
    raise AssertionError("Theta certificates rejected: {}".format(
        dict(certificates)))
  weight = g.weights[0] if g.has_uniform_weights() else 1
  projector_value = theta_sdp.verify_quantum_value_by_projectors(
      ks_set, float(weight))
  bounds = quantum_model.corrected_bounds(
      epsilon_bar, classical_ideal=float(nc_bound), quantum_ideal=sdp.value,
      sigma_max=float(sum(g.weights)))
  document = collections.OrderedDict([
      ('alpha', alpha.value),
      ('independent_set', alpha.labels),
      ('noncontextual_bound', float(nc_bound)),
      ('clique_cover_bound', float(exclusivity.clique_cover_bound(g))),
      ('theta', theta_sdp.sdp_result_to_json(sdp)),
      ('theta_certificates', certificates),
      ('projector_value', projector_value),
      ('bounds', bounds._asdict()),
  ])
  return bounds, sdp, alpha, document


def _load_set(path):
  raw = ks_core.read_source_bytes(path)
  return ks_core.load_ks_set(raw), ks_core.get_hash_value(raw)


def _write_json(document, out_dir, name):
  if not os.path.isdir(out_dir):
    os.makedirs(out_dir)
  path = os.path.join(out_dir, name)
  with open(path, 'w') as f:
    json.dump(document, f, indent=2)
  return path


def _check_epsilon_bar(epsilon_bar):
  if epsilon_bar is not None and not 0 <= epsilon_bar <= 1:
    raise UsageError("--epsilon-bar must be in [0, 1], got {}."
                     .format(epsilon_bar))


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_validate(path):
  try:
    ks_set, _ = _load_set(path)
  except (ks_core.KsFormatError, ks_core.KsInvariantError) as e:
    print("FAIL: {}".format(e))
    return EXIT_FAILURE
  report, _ = structural_report(ks_set)
  if not report['ks_uncolorable']:
    print("FAIL: {} admits a noncontextual assignment.".format(
        report['summary']))
    return EXIT_FAILURE
  print("PASS: {}, KS-uncolorable".format(report['summary']))
  if ks_set.profile == ks_core.KS21_PROFILE:
    critical = exclusivity.criticality_snapshot(ks_set)
    print("Critical: {} of {} single deletions are colorable".format(
        sum(1 for _, sat in critical if sat), len(critical)))
  return EXIT_OK


def edge_list_name(set_path):
  """`ks21.json` -> `ks21.edges`."""
  stem = os.path.splitext(os.path.basename(str(set_path)))[0]
  return '{}.edges'.format(stem or 'set')


def cmd_bounds(set_path, epsilon_bar, out_dir):
  _check_epsilon_bar(epsilon_bar)
  ks_set, fingerprint = _load_set(set_path)
  _, g = structural_report(ks_set)
  bounds, sdp, alpha, document = compute_bounds(ks_set, g, epsilon_bar)
  document['set_fingerprint'] = fingerprint
  print("alpha = {}, noncontextual bound = {:g}".format(
      alpha.value, document['noncontextual_bound']))
  print("theta = {:.9f} (certified gap {:.1e}), projector value = {:.9f}"
        .format(sdp.value, sdp.gap, document['projector_value']))
  print("bounds (epsilon_bar = {}): {:.4f} / {:.4f} / {:.4f} / {:.4f} / {:.4f}"
        .format(epsilon_bar, bounds.classical_ideal, bounds.classical_corrected,
                bounds.quantum_ideal, bounds.quantum_lower,
                bounds.quantum_upper))
  if out_dir:
    path = _write_json(document, out_dir, 'bounds.json')
    edges = os.path.join(out_dir, edge_list_name(set_path))
    exclusivity.export_edge_list(g, edges)
    experiment_sim.write_manifest(out_dir, 'bounds', fingerprint, None,
                                  [path, edges],
                                  extra={'epsilon_bar': epsilon_bar})
  return EXIT_OK


def _load_experiment_config(args):
  if args.config and args.preset:
    raise UsageError("Give either --config or --preset, not both.")
  path = args.config or (preset_path(args.preset) if args.preset else None)
  if path is None:
    raise UsageError("A --config file or a --preset is required.")
  overrides = {'rng_seed': args.seed, 'pulses_per_run': args.pulses,
               'workers': args.workers}
  return experiment_sim.load_config(path, overrides)


def cmd_simulate(args):
  cfg = _load_experiment_config(args)
  ks_set, fingerprint = _load_set(args.set)
  experiment_sim.simulate_to_directory(cfg, ks_set, args.out, fingerprint)
  return EXIT_OK


def certify(ks_set, fingerprint, records, epsilon_bar, efficiency=None,
            seed=None):
  """Build the `CertificationReport` for already collected run records.

  `seed` is the simulation seed, None for measured data.
  """
  structure, g = structural_report(ks_set)
  bounds, sdp, alpha, _ = compute_bounds(ks_set, g, epsilon_bar)
  rows = state_rows(records, ks_set, efficiency)
  if not structure['ks_uncolorable']:
    verdict, reason = CLASSICAL, "The measured set admits a noncontextual assignment."
  else:
    verdict, reason = decide_verdict(rows, bounds)
  states = [collections.OrderedDict([('state', s), ('sigma', x),
                                     ('std_error', e)]) for s, x, e in rows]
  return CertificationReport(fingerprint, structure, alpha.value,
                             float(exclusivity.noncontextual_bound(g)),
                             sdp.value, sdp.gap, epsilon_bar, bounds, states,
                             verdict, reason, seed)


def report_to_json(report):
  document = report._asdict()
  document['bounds'] = report.bounds._asdict()
  return document


def report_to_text(report):
  b = report.bounds
  lines = ['Set {} ({})'.format(report.set_fingerprint,
                                report.structure['summary']),
           'Seed: {}'.format('measured data' if report.seed is None
                             else report.seed),
           'KS-uncolorable: {}'.format(report.structure['ks_uncolorable']),
           'alpha = {}, noncontextual bound = {:g}'.format(
               report.alpha, report.noncontextual_bound),
           'theta = {:.9f} (gap {:.1e})'.format(report.theta, report.theta_gap),
           'epsilon_bar = {:.4f}'.format(report.epsilon_bar),
           'bounds: classical {:.4f} -> {:.4f}, quantum {:.4f} in '
           '[{:.4f}, {:.4f}]'.format(b.classical_ideal, b.classical_corrected,
                                     b.quantum_ideal, b.quantum_lower,
                                     b.quantum_upper),
           '']
  for row in report.states:
    if row['sigma'] is None:
      lines.append('{:>10}  insufficient sampling'.format(row['state']))
    else:
      lines.append('{:>10}  {:.4f} +- {:.4f}'.format(
          row['state'], row['sigma'], row['std_error']))
  lines += ['', 'Verdict: {}'.format(report.verdict), report.reason]
  return '\n'.join(lines) + '\n'


def cmd_certify(args):
  _check_epsilon_bar(args.epsilon_bar)
  if args.efficiency is not None and not 0 < args.efficiency <= 1:
    raise UsageError("--efficiency must be in (0, 1], got {}."
                     .format(args.efficiency))
  ks_set, fingerprint = _load_set(args.set)
  written = []
  seed = None
  if args.data:
    if args.config or args.preset:
      raise UsageError("Give either --data or --config/--preset, not both.")
    if args.epsilon_bar is None:
      raise UsageError("--epsilon-bar is required with --data.")
    records = experiment_sim.read_runs_csv(args.data, args.efficiency)
    epsilon_bar = args.epsilon_bar
    config = None
  else:
    cfg = _load_experiment_config(args)
    seed = int(cfg.rng_seed)
    epsilon_bar = args.epsilon_bar
    if epsilon_bar is None:
      epsilon_bar = experiment_sim.run_exclusivity_tests(cfg, ks_set).epsilon_bar
    records = experiment_sim.run_suite(
        cfg, ks_set, experiment_sim.suite_labels(cfg.states, ks_set),
        fingerprint, first_stream=experiment_sim.ARTIFACT_STREAMS['certify'])
    if not os.path.isdir(args.out):
      os.makedirs(args.out)
    path = os.path.join(args.out, 'runs.csv')
    experiment_sim.write_runs_csv(records, path)
    written.append(path)
    config = experiment_sim.config_to_dict(cfg)
  report = certify(ks_set, fingerprint, records, epsilon_bar, args.efficiency,
                   seed)
  print(report_to_text(report), end='')
  written.append(_write_json(report_to_json(report), args.out, 'report.json'))
  path = os.path.join(args.out, 'report.txt')
  with open(path, 'w') as f:
    f.write(report_to_text(report))
  written.append(path)
  experiment_sim.write_manifest(args.out, 'certify', fingerprint, seed, written,
                                config=config,
                                extra={'verdict': report.verdict})
  return VERDICT_EXIT_CODES[report.verdict]


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def build_parser():
  parser = _Parser(description='Kochen-Specker set certification toolkit.')
  parser.add_argument('--verbose', action='store_true',
                      help='Log solver and simulation details.')
  subparsers = parser.add_subparsers(dest='command')

  def add_common(p):
    p.add_argument('--set', default=ks_core.DEFAULT_KS21_PATH,
                   help='KS-set JSON file (default: shipped KS21).')

  def add_simulation(p):
    p.add_argument('--config', help='YAML or JSON experiment config.')
    p.add_argument('--preset', choices=PRESETS,
                   help='Shipped config from presets/.')
    p.add_argument('--seed', type=int)
    p.add_argument('--pulses', type=int)
    p.add_argument('--workers', type=lambda s: s if s == 'auto' else int(s))
    p.add_argument('--out', default=DEFAULT_OUT_DIR)

  p = subparsers.add_parser('validate', help='Structural certification.')
  add_common(p)

  p = subparsers.add_parser('bounds', help='Classical and quantum bounds.')
  add_common(p)
  p.add_argument('--epsilon-bar', type=float, default=0.0)
  p.add_argument('--out', default=None)

  p = subparsers.add_parser('simulate', help='Reproduce the figures.')
  add_common(p)
  add_simulation(p)

  p = subparsers.add_parser('certify', help='Certification report.')
  add_common(p)
  add_simulation(p)
  p.add_argument('--data', help='Runs CSV to certify instead of simulating.')
  p.add_argument('--epsilon-bar', type=float, default=None)
  p.add_argument('--efficiency', type=float, default=None,
                 help='Detector efficiency overriding the data column.')
  return parser


def main(argv=None):
  parser = build_parser()
  try:
    args = parser.parse_args(argv)
    if args.command is None:
      raise UsageError("A command is required: validate, bounds, simulate or "
                       "certify.")
  except UsageError as e:
    parser.print_usage(sys.stderr)
    print("error: {}".format(e), file=sys.stderr)
    return EXIT_USAGE
  logging.basicConfig(
      level=logging.DEBUG if args.verbose else logging.INFO,
      format='%(asctime)s %(levelname)s %(name)s: %(message)s')
  try:
    if args.command == 'validate':
      return cmd_validate(args.set)
    if args.command == 'bounds':
      return cmd_bounds(args.set, args.epsilon_bar, args.out)
    if args.command == 'simulate':
      return cmd_simulate(args)
    return cmd_certify(args)
  except UsageError as e:
    print("error: {}".format(e), file=sys.stderr)
    return EXIT_USAGE
  except experiment_sim.ConfigError as e:
    for error in e.errors:
      print("config error: {}".format(error), file=sys.stderr)
    return EXIT_USAGE
  except experiment_sim.RunsFormatError as e:
    print("data error: {}".format(e), file=sys.stderr)
    return EXIT_USAGE
  except (IOError, OSError) as e:
    print("I/O error: {}".format(e), file=sys.stderr)
    return EXIT_USAGE
  except (ks_core.KsFormatError, ks_core.KsInvariantError) as e:
    print("FAIL: {}".format(e), file=sys.stderr)
    return EXIT_FAILURE


if __name__ == '__main__':
  sys.exit(main())
