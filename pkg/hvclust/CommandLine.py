""" Command-line front end: ``hvclust <subcommand> [flags]``.

Each subcommand writes its artifacts (JSON summaries, CSV curves and the
resolved configuration as YAML) into the output directory and prints one
summary line. Failures print one JSON error object on stderr and return
exit code 2 for invalid input or 3 for numerical failures.
"""

import argparse
import json
import math
import os
import sys

import numpy as np

import hvclust
from hvclust.Analytic import (AnalyticConfig, a_factor, c_average, c_average_sweep, c_max_closed, local_clustering_analytic,
                              persistence_approx, persistence_threshold_n)
from hvclust.Errors import ConsistencyError, DomainError, QuadratureError
from hvclust.GraphGenerators import GENERATORS
from hvclust.Kernels import KernelId, get_kernel, validate_fclass
from hvclust.Lerch import c_maxrandom_closed, table2_terms
from hvclust.PowerLaw import (CUTOFF_CONVENTIONS, PowerLawModel, default_cutoffs, natural_cutoff_approx,
                              natural_cutoff_bounds, natural_cutoff_exact, natural_cutoff_monte_carlo)
from hvclust.RunConfig import SUBCOMMANDS, RunConfig
from hvclust.Simulation import SEED_DERIVATION, SimulationSetup, compare_bins, replica_rng, run_replicas
from hvclust.Utilities import dict_to_json, frame_to_csv, get_output_dir, parse_grid, records_to_frame


EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

SUPPRESS = argparse.SUPPRESS


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', default=SUPPRESS, help='YAML file with run parameters')
    common.add_argument('--output-dir', dest='output_dir', default=SUPPRESS,
                        help='Directory for outputs (default: $HVCLUST_OUTPUT_DIR or the current directory)')
    common.add_argument('--verbose', action='store_true', default=SUPPRESS)

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument('--kernel', choices=[k.value for k in KernelId if k is not KernelId.CUSTOM], default=SUPPRESS)
    model.add_argument('--tau', type=float, default=SUPPRESS)
    model.add_argument('--hmin', dest='h_min', type=float, default=SUPPRESS)
    model.add_argument('--n', type=float, default=SUPPRESS, help='Number of vertices, e.g. 1e6')
    model.add_argument('--cutoffs', choices=CUTOFF_CONVENTIONS, default=SUPPRESS)

    quadrature = argparse.ArgumentParser(add_help=False)
    quadrature.add_argument('--abs-tol', dest='abs_tol', type=float, default=SUPPRESS)
    quadrature.add_argument('--rel-tol', dest='rel_tol', type=float, default=SUPPRESS)
    quadrature.add_argument('--max-subdivisions', dest='max_subdivisions', type=int, default=SUPPRESS)
    quadrature.add_argument('--u0-grid', dest='u0_grid', default=SUPPRESS, help='Grid of u0 >= 1 for the lower bound')

    replicas = argparse.ArgumentParser(add_help=False)
    replicas.add_argument('--replicas', type=int, default=SUPPRESS)
    replicas.add_argument('--seed', type=int, default=SUPPRESS)
    replicas.add_argument('--generator', choices=GENERATORS, default=SUPPRESS)
    replicas.add_argument('--threads', type=int, default=SUPPRESS, help='Worker processes, -1 for all cores')
    replicas.add_argument('--bins', type=int, default=SUPPRESS, help='Number of logarithmic hidden-variable bins')
    replicas.add_argument('--export-edges', dest='export_edges', default=SUPPRESS,
                          help='Directory for per-replica edge lists')

    parser = argparse.ArgumentParser(prog='hvclust', description='Clustering in hidden-variable random graphs')
    parser.add_argument('--version', action='version', version=f'%(prog)s {hvclust.__version__}')
    sub = parser.add_subparsers(dest='subcommand', required=True)

    analytic = sub.add_parser('analytic', parents=[common, model, quadrature], help='Analytic average clustering')
    analytic.add_argument('--h', type=float, nargs='+', default=SUPPRESS, help='Hidden variables for c(h)')
    analytic.add_argument('--h-grid', dest='h_grid', default=SUPPRESS, help='Grid for the c(h) curve')
    analytic.add_argument('--tau-grid', dest='tau_grid', default=SUPPRESS, help='Grid for the C versus tau sweep')
    analytic.add_argument('--closed-form', dest='closed_form', action='store_true', default=SUPPRESS)

    sub.add_parser('simulate', parents=[common, model, replicas], help='Simulate graphs and measure clustering')
    sub.add_parser('compare', parents=[common, model, replicas, quadrature], help='Simulation against analytic curves')

    persistence = sub.add_parser('persistence', parents=[common], help='Size threshold of persistent clustering')
    persistence.add_argument('--tau', type=float, default=SUPPRESS)
    persistence.add_argument('--t', type=float, default=SUPPRESS)
    persistence.add_argument('--hmin', dest='h_min', type=float, default=SUPPRESS)
    persistence.add_argument('--at-n', dest='at_n', type=float, default=SUPPRESS,
                             help='Also evaluate the approximation and the closed form at this N')

    natural = sub.add_parser('natural-cutoff', parents=[common], help='Expected largest hidden variable')
    natural.add_argument('--tau', type=float, default=SUPPRESS)
    natural.add_argument('--hmin', dest='h_min', type=float, default=SUPPRESS)
    natural.add_argument('--n', type=float, default=SUPPRESS)
    natural.add_argument('--mc-replicates', dest='mc_replicates', type=int, default=SUPPRESS)
    natural.add_argument('--seed', type=int, default=SUPPRESS)

    table2 = sub.add_parser('table2', parents=[common], help='Dominant terms of the maximally random closed form')
    table2.add_argument('--s', dest='s_grid', default=SUPPRESS, help='Grid of s = tau - 2 in (0, 0.5]')

    validate = sub.add_parser('validate-kernel', parents=[common], help='Check the F-class conditions of a kernel')
    validate.add_argument('--kernel', choices=[k.value for k in KernelId if k is not KernelId.CUSTOM], default=SUPPRESS)
    validate.add_argument('--grid', default=SUPPRESS)

    return parser


def _metadata(config):
    return {'package': 'hvclust', 'version': hvclust.__version__, 'subcommand': config.subcommand}


def _quadrature(config):
    return AnalyticConfig(config.abs_tol, config.rel_tol, config.max_subdivisions)


def _model_and_scheme(config):
    model = PowerLawModel(config.tau, config.h_min, config.n)
    return model, default_cutoffs(model, config.cutoffs)


def _path(output_dir, config, suffix):
    return os.path.join(output_dir, config.subcommand.replace('-', '_') + suffix)


def run_analytic(config, output_dir):
    kernel = get_kernel(config.kernel)
    model, scheme = _model_and_scheme(config)
    cfg = _quadrature(config)
    u0_grid = parse_grid(config.u0_grid)

    result = c_average(kernel, scheme, model.tau, model.h_min, model.n_vertices, cfg, u0_grid)

    if config.closed_form:
        if kernel.id is KernelId.MAX_RANDOM:
            result.c_closed_form = result.a_factor * c_maxrandom_closed(scheme, model.tau, model.h_min)
        elif kernel.id is KernelId.MAX_DENSE:
            result.c_closed_form = c_max_closed(scheme, model.tau, model.h_min, model.n_vertices, cfg)
        else:
            raise DomainError(f'No closed form for kernel "{kernel.name}"')

    outputs = {'json': _path(output_dir, config, '.json')}
    dict_to_json({'result': result.to_dict(), 'metadata': _metadata(config)}, outputs['json'], config.verbose)

    h_values = []
    if config.h is not None:
        h_values += [float(h) for h in np.atleast_1d(config.h)]
    if config.h_grid is not None:
        h_values += parse_grid(config.h_grid).tolist()
    if h_values:
        rows = []
        for h in sorted(h_values):
            c = local_clustering_analytic(kernel, scheme, model.tau, model.h_min, h, cfg)
            rows.append((h, c.value, c.error))
        outputs['curve'] = _path(output_dir, config, '_curve.csv')
        frame_to_csv(records_to_frame(rows, ['h', 'c_analytic', 'error']), outputs['curve'], config.verbose)

    if config.tau_grid is not None:
        sweep = c_average_sweep(kernel, parse_grid(config.tau_grid), model.h_min, model.n_vertices, cfg,
                                config.cutoffs, u0_grid, config.verbose)
        columns = ['tau', 'c_ab_0', 'a_factor', 'c_avg', 'bound_low', 'bound_high', 'approx_main', 'approx_persistence']
        rows = [tuple(getattr(r, c) for c in columns) for r in sweep]
        outputs['sweep'] = _path(output_dir, config, '_sweep.csv')
        frame_to_csv(records_to_frame(rows, columns), outputs['sweep'], config.verbose)

    return f'C = {result.c_avg:.10g} ({kernel.name}, tau = {model.tau}, N = {model.n_vertices})', outputs


def _setup(config):
    model, scheme = _model_and_scheme(config)
    return SimulationSetup(get_kernel(config.kernel), model, scheme, config.generator, config.bins)


def _simulation_metadata(config, setup):
    meta = _metadata(config)
    meta.update({
        'seed': config.seed,
        'seed_derivation': SEED_DERIVATION,
        'generator': config.generator,
        'threads': config.threads,
        'hidden_support': [setup.model.h_min, setup.scheme.h_c],
        'binning': {'type': 'logarithmic', 'bins': config.bins, 'range': list(setup.h_range)},
    })
    return meta


def run_simulate(config, output_dir):
    setup = _setup(config)
    pooled = run_replicas(setup, config.seed, config.replicas, config.threads, config.export_edges, config.verbose)

    summary = {
        'C_empirical': pooled.c_global_mean,
        'stderr': pooled.c_global_stderr,
        'C_deg2': pooled.c_global_deg2_mean,
        'transitivity': pooled.transitivity_mean,
        'triangles_mean': pooled.triangles_mean,
        'mean_degree': pooled.mean_degree,
        'replicas': pooled.replicas,
        'model': {'kernel': config.kernel, 'tau': setup.model.tau, 'h_min': setup.model.h_min,
                  'n_vertices': setup.model.n_vertices},
        'cutoffs': setup.scheme.to_dict(setup.model.h_min),
        'metadata': _simulation_metadata(config, setup),
    }

    outputs = {'json': _path(output_dir, config, '.json'),
               'bins_h': _path(output_dir, config, '_bins_h.csv'),
               'bins_k': _path(output_dir, config, '_bins_k.csv')}
    dict_to_json(summary, outputs['json'], config.verbose)

    rows = [(b.lo, b.hi, b.center, b.mean, b.stderr, b.count) for b in pooled.bins_h]
    frame_to_csv(records_to_frame(rows, ['h_lo', 'h_hi', 'h_bin_center', 'c_empirical', 'stderr', 'count']),
                 outputs['bins_h'], config.verbose)
    rows = [(b.k, b.mean, b.count) for b in pooled.bins_k]
    frame_to_csv(records_to_frame(rows, ['k', 'c_mean', 'count']), outputs['bins_k'], config.verbose)

    return f'C = {pooled.c_global_mean:.6g} +/- {pooled.c_global_stderr:.2g} over {pooled.replicas} replicas', outputs


def run_compare(config, output_dir):
    setup = _setup(config)
    cfg = _quadrature(config)
    model, scheme = setup.model, setup.scheme

    pooled = run_replicas(setup, config.seed, config.replicas, config.threads, config.export_edges, config.verbose)
    analytic = c_average(setup.kernel, scheme, model.tau, model.h_min, model.n_vertices, cfg, parse_grid(config.u0_grid))
    rows = compare_bins(setup, pooled, cfg, verbose=config.verbose)

    summary = {
        'C_empirical': pooled.c_global_mean,
        'stderr': pooled.c_global_stderr,
        'C_analytic': analytic.c_avg,
        'C_max': analytic.bound_high,
        'bounds': {'low': analytic.bound_low, 'high': analytic.bound_high},
        'replicas': pooled.replicas,
        'metadata': _simulation_metadata(config, setup),
    }

    outputs = {'json': _path(output_dir, config, '.json'), 'curve': _path(output_dir, config, '.csv')}
    dict_to_json(summary, outputs['json'], config.verbose)
    columns = ['h_bin_center', 'c_empirical', 'stderr', 'c_analytic', 'c_finite', 'count']
    frame_to_csv(records_to_frame([tuple(r[c] for c in columns) for r in rows], columns), outputs['curve'], config.verbose)

    return f'C empirical {pooled.c_global_mean:.6g} vs analytic {analytic.c_avg:.6g}', outputs


def run_persistence(config, output_dir):
    n_threshold = persistence_threshold_n(config.tau, config.t)
    summary = {'tau': config.tau, 't': config.t, 'N': n_threshold, 'metadata': _metadata(config)}

    if config.at_n is not None:
        model = PowerLawModel(config.tau, config.h_min, config.at_n)
        scheme = default_cutoffs(model)
        approx = persistence_approx(scheme, model.tau, model.h_min, model.n_vertices)
        summary['at_n'] = {
            'N': model.n_vertices,
            'approx_persistence': approx.value,
            'validity_ratio': approx.validity_ratio,
            'c_max_closed': c_max_closed(scheme, model.tau, model.h_min, model.n_vertices),
            'a_factor': a_factor(model.tau, model.h_min, model.n_vertices).value,
        }

    outputs = {'json': _path(output_dir, config, '.json')}
    dict_to_json(summary, outputs['json'], config.verbose)

    return f'N = {n_threshold:.4g} (tau = {config.tau}, t = {config.t})', outputs


def run_natural_cutoff(config, output_dir):
    model = PowerLawModel(config.tau, config.h_min, config.n)
    lower, upper = natural_cutoff_bounds(model)
    summary = {
        'tau': model.tau, 'h_min': model.h_min, 'N': model.n_vertices,
        'exact': natural_cutoff_exact(model),
        'lower': lower,
        'upper': upper,
        'approx': natural_cutoff_approx(model),
    }

    if config.mc_replicates:
        estimate = natural_cutoff_monte_carlo(model, config.mc_replicates, replica_rng(config.seed, 0),
                                              verbose=config.verbose)
        summary['monte_carlo'] = estimate.to_dict()
    summary['metadata'] = _metadata(config)
    if config.mc_replicates:
        summary['metadata'].update({'seed': config.seed, 'seed_derivation': SEED_DERIVATION})

    outputs = {'json': _path(output_dir, config, '.json')}
    dict_to_json(summary, outputs['json'], config.verbose)

    return f'E[max h] = {summary["exact"]:.6g} in [{lower:.6g}, {upper:.6g}]', outputs


def run_table2(config, output_dir):
    rows = [(s,) + table2_terms(s) for s in parse_grid(config.s_grid)]
    columns = ['s', 'pi_over_sin', 'inv_s_one_minus_s', 'pi2_cos_over_sin2', 'inv_s2_minus_inv_one_minus_s2']

    outputs = {'csv': _path(output_dir, config, '.csv')}
    frame_to_csv(records_to_frame(rows, columns), outputs['csv'], config.verbose)

    first = ','.join(f'{v:.4f}' for v in rows[0][1:])
    return f'{len(rows)} rows, s = {rows[0][0]:g}: {first}', outputs


def run_validate_kernel(config, output_dir):
    kernel = get_kernel(config.kernel)
    result = validate_fclass(kernel, parse_grid(config.grid))

    outputs = {'json': _path(output_dir, config, '.json')}
    dict_to_json({'report': result.to_dict(), 'metadata': _metadata(config)}, outputs['json'], config.verbose)

    failed = [name for name, c in result.conditions.items() if not c.passed]
    return f'{kernel.name}: ' + ('all conditions pass' if not failed else f'failed {failed}'), outputs


HANDLERS = {
    'analytic': run_analytic,
    'simulate': run_simulate,
    'compare': run_compare,
    'persistence': run_persistence,
    'natural-cutoff': run_natural_cutoff,
    'table2': run_table2,
    'validate-kernel': run_validate_kernel,
}

assert set(HANDLERS) == set(SUBCOMMANDS)


def run(config):
    """ Execute one configured run.

    Args:
        config (RunConfig):
            Validated configuration.

    Returns:
        int:
            Exit status, 0 on success.

    """

    output_dir = get_output_dir(config.output_dir, config.verbose)
    if config.verbose:
        config.show()
    summary, outputs = HANDLERS[config.subcommand](config, output_dir)

    config_file = _path(output_dir, config, '_config.yaml')
    config.write_to_file(config_file)

    paths = ', '.join(os.path.basename(p) for p in outputs.values())
    print(f'{config.subcommand}: {summary} -> {paths}')

    return EXIT_OK


def error_object(exc, exit_code):
    details = {}
    if isinstance(exc, QuadratureError):
        details = {'estimate': exc.estimate, 'error_bound': exc.error_bound}
    for key, value in details.items():
        if isinstance(value, float) and not math.isfinite(value):
            details[key] = None
    return {'error': type(exc).__name__, 'message': str(exc), 'exit_code': exit_code, 'details': details}


def _fail(exc, exit_code):
    print(json.dumps(error_object(exc, exit_code)), file=sys.stderr)
    return exit_code


def config_from_args(args):
    values = vars(args).copy()
    config_file = values.pop('config', None)
    config = RunConfig.load_from_file(config_file) if config_file else RunConfig()
    return config.update(values)


def main(argv=None):
    parser = build_parser()

    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_request:
        return int(exit_request.code or 0)

    try:
        config = config_from_args(args)
    except (DomainError, ValueError, TypeError, OSError) as exc:
        return _fail(exc, EXIT_USAGE)

    try:
        return run(config)
    except (QuadratureError, ConsistencyError, ArithmeticError) as exc:
        return _fail(exc, EXIT_NUMERICAL)
    except (DomainError, ValueError, OSError) as exc:
        return _fail(exc, EXIT_USAGE)
