"""
Command line front-end.

    python -m nhsim run --config CONFIG [--out DIR] [--tol X]
    python -m nhsim converge --config CONFIG [--out DIR] [--tol X]
    python -m nhsim jump [--system NAME] [--param KEY=VALUE] [--q ..] [--v ..]
    python -m nhsim catalog

CONFIG is a run YAML file or the name of a shipped scenario. Exit codes:
0 success, 2 invalid configuration, 3 solver or impact failure (and a
convergence study below the required order), 4 scenario refused by the
requested study.
"""

import argparse
import logging
import math
import os
import sys

import numpy as np
import yaml

from .catalog import (CATALOG, list_scenarios, make_system,
                      random_boundary_state, scenario_path)
from .config import load_run_config
from .errors import ConfigError, NHSimError, RefusedScenarioError
from .impact import continuous_jump
from .integrator import integrate, violated_constraints
from .mechanics import as_vector, energy, project_velocity
from .numerics import NewtonConfig
from .oracle import ContinuousState, integrate_continuous
from .output import ResultFile, write_trajectory_table
from .stepper import project_to_constraints
from .tolerances import Tolerances

__all__ = ("main", "run_command", "converge_command", "jump_command",
           "catalog_command", "initial_pair")

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_REFUSED = 4


def _config_path(name):
    if os.path.exists(name):
        return name
    try:
        return scenario_path(name)
    except KeyError:
        raise ConfigError("config", "no file or scenario called '%s'" % name)


def _overrides(out=None, tol=None):
    overrides = {}
    if out is not None:
        overrides["output"] = {"directory": out}
    if tol is not None:
        overrides["newton"] = {"residual_tolerance": tol}
    return overrides


def _vector(value, n, field):
    try:
        return as_vector(value, n, field)
    except NHSimError as error:
        raise ConfigError(field, error.message)


def initial_pair(bundle, cfg, h):
    """
    The initial pair (q0, q1) of a run with step h.

    A given q1 is used as is. A given v0 is projected onto D, carried over
    one step by the continuous flow and the resulting q1 projected onto
    D_d.

    returns: (q0, q1)
    """

    system, cs, inequalities = bundle.system, bundle.constraints, bundle.inequalities
    n = system.dimension
    tol = cfg.tolerances
    q0 = _vector(cfg.q0, n, "initial.q0")
    if violated_constraints(inequalities, q0, tol.boundary):
        raise ConfigError("initial.q0", "outside the admissible set")

    if cfg.q1 is not None:
        q1 = _vector(cfg.q1, n, "initial.q1")
    else:
        v0 = _vector(cfg.v0, n, "initial.v0")
        drift = float(np.max(np.abs(cs.mu(q0) @ v0), initial=0.0))
        if drift > cfg.initial_velocity_drift:
            raise ConfigError("initial.v0", "not in D, |mu(q0) v0| = %.3e" % drift)
        v0 = project_velocity(system, cs, q0, v0)
        first = integrate_continuous(system, cs, [], ContinuousState(0.0, q0, v0),
                                     h, min(cfg.oracle_h_fine, h), tol)
        q1 = project_to_constraints(cs, q0, first.points[-1], tol.newton)
        logger.info("q1 from v0: moved by %.3e onto D_d",
                    float(np.max(np.abs(q1 - first.points[-1]))))

    if violated_constraints(inequalities, q1, tol.boundary):
        raise ConfigError("initial.q1", "outside the admissible set")
    drift = float(np.max(np.abs(cs.mu_d(q0, q1)), initial=0.0))
    if drift > tol.constraint:
        raise ConfigError("initial.q1", "(q0, q1) not in D_d, |mu_d| = %.3e" % drift)
    return q0, q1


def _run(bundle, cfg, h, steps):
    q0, q1 = initial_pair(bundle, cfg, h)
    return integrate(bundle.system, bundle.constraints, bundle.discrete_lagrangian,
                     bundle.inequalities, q0, q1, h, steps, cfg.tolerances)


def run_command(config, out=None, tol=None):
    """
    Integrate a configured run and write the trajectory table and the
    impact log.

    returns: a summary dictionary.
    """

    cfg = load_run_config(_config_path(config), _overrides(out, tol))
    bundle = make_system(cfg.system_name, cfg.system_parameters)
    trajectory = _run(bundle, cfg, cfg.h, cfg.steps)

    os.makedirs(cfg.output_directory, exist_ok=True)
    table = os.path.join(cfg.output_directory, cfg.trajectory_file)
    write_trajectory_table(table, trajectory, bundle.system, bundle.constraints,
                           bundle.inequalities, cfg.float_format)

    residual_tolerance = 10.0 * cfg.tolerances.newton.residual_tolerance
    for record in trajectory.impacts:
        record.validate(bundle.inequality(record.label), cfg.tolerances.boundary,
                        residual_tolerance)
    log = os.path.join(cfg.output_directory, cfg.impacts_file)
    ResultFile(log).store({"system": cfg.system_name,
                           "parameters": cfg.system_parameters,
                           "impacts": [r.to_dict() for r in trajectory.impacts]})

    return {"system": cfg.system_name,
            "points": len(trajectory),
            "final_time": float(trajectory.times[-1]),
            "impacts": trajectory.impact_count,
            "energy_drift": trajectory.energy_drift(),
            "max_residual": float(np.nanmax(trajectory.residuals)),
            "trajectory": table,
            "impact_log": log}


def converge_command(config, out=None, tol=None):
    """
    Compare runs at h, h/2, ... with the continuous flow at the final
    time and estimate the order of convergence. Only impact-free arcs are
    accepted.

    returns: the convergence report dictionary.
    """

    cfg = load_run_config(_config_path(config), _overrides(out, tol))
    if cfg.v0 is None:
        raise ConfigError("initial.v0", "the convergence study starts from an "
                          "initial velocity")
    bundle = make_system(cfg.system_name, cfg.system_parameters)
    system, cs = bundle.system, bundle.constraints

    q0 = _vector(cfg.q0, system.dimension, "initial.q0")
    v0 = project_velocity(system, cs, q0,
                          _vector(cfg.v0, system.dimension, "initial.v0"))
    reference = integrate_continuous(system, cs, bundle.inequalities,
                                     ContinuousState(0.0, q0, v0), cfg.t_end,
                                     cfg.oracle_h_fine, cfg.tolerances,
                                     projection=cfg.oracle_projection)
    if reference.events:
        raise RefusedScenarioError("the continuous flow has %d impacts, orders "
                                   "are only measured on impact-free arcs"
                                   % len(reference.events))

    steps, errors = [], []
    for k in range(cfg.refinements):
        h = cfg.h / 2 ** k
        trajectory = _run(bundle, cfg, h, cfg.steps * 2 ** k)
        if trajectory.impacts:
            raise RefusedScenarioError("the discrete run with h=%g has impacts" % h)
        error = float(np.max(np.abs(trajectory.final_point - reference.points[-1])))
        logger.info("h=%g: error %.6e at t=%g", h, error, cfg.t_end)
        steps.append(h)
        errors.append(error)

    orders = []
    for coarse, fine in zip(errors[:-1], errors[1:]):
        if fine <= cfg.exact_error or coarse <= cfg.exact_error:
            orders.append(None)
        else:
            orders.append(math.log2(coarse / fine))
    passed = all(p is None or p >= cfg.min_order for p in orders)

    report = {"system": cfg.system_name,
              "t_end": cfg.t_end,
              "steps": steps,
              "errors": errors,
              "orders": ["exact" if p is None else p for p in orders],
              "min_order": cfg.min_order,
              "oracle_constraint_drift": reference.max_constraint_drift,
              "passed": passed}

    os.makedirs(cfg.output_directory, exist_ok=True)
    ResultFile(os.path.join(cfg.output_directory, cfg.report_file)).store(report)
    return report


def jump_command(system="rolling_disk", parameters=None, q=None, v=None,
                 label=None, seed=0, tol=None):
    """
    Apply the continuous jump to a given boundary state, or to a random
    one drawn with seed when q is not given.

    returns: a dictionary with the incoming and outgoing states.
    """

    tolerances = Tolerances() if tol is None else Tolerances(
            newton=NewtonConfig(residual_tolerance=tol))
    try:
        if q is None:
            rng = np.random.default_rng(seed)
            bundle, ic, q, v = random_boundary_state(system, rng, parameters, label)
        else:
            bundle = make_system(system, parameters)
            ic = bundle.inequality(label) if label else bundle.inequalities[0]
            if v is None:
                raise ConfigError("--v", "an incoming velocity is required with --q")
    except KeyError:
        raise ConfigError("--constraint", "%s has no constraint %s" % (system, label))

    n = bundle.system.dimension
    q = _vector(q, n, "--q")
    v = _vector(v, n, "--v")
    v_plus, lam_bar, nu = continuous_jump(bundle.system, bundle.constraints, ic,
                                          q, v, tolerances)
    dg = ic.dg(q)
    return {"system": system,
            "constraint": ic.label,
            "q": q.tolist(),
            "v_minus": v.tolist(),
            "v_plus": v_plus.tolist(),
            "normal_multiplier": lam_bar,
            "tangential_multipliers": nu.tolist(),
            "normal_velocity": [float(dg @ v), float(dg @ v_plus)],
            "energy": [float(energy(bundle.system, q, v)),
                       float(energy(bundle.system, q, v_plus))]}


def catalog_command():
    """
    returns: the catalog systems with their defaults, and the scenarios.
    """

    systems = {}
    for name, entry in CATALOG.items():
        bundle = make_system(name)
        systems[name] = {"description": entry.description,
                         "parameters": dict(entry.defaults),
                         "coordinates": list(bundle.system.coordinates),
                         "constraints": [ic.label for ic in bundle.inequalities]}
    return {"systems": systems, "scenarios": list_scenarios()}


def _floats(text):
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma separated numbers, "
                                         "got '%s'" % text)


def _parameter(text):
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError("expected KEY=VALUE, got '%s'" % text)
    try:
        return key.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError("parameter %s is not a number" % key)


def _parser():
    parser = argparse.ArgumentParser(
            prog="nhsim",
            description="Discrete nonholonomic mechanics with impacts")
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="debug output")
    parser.add_argument("-q", "--quiet", action="store_true",
                        help="warnings and errors only")
    commands = parser.add_subparsers(dest="command", required=True)

    for name, text in (("run", "integrate a configured run"),
                       ("converge", "convergence study against the continuous flow")):
        command = commands.add_parser(name, help=text)
        command.add_argument("--config", required=True,
                             help="run YAML file or scenario name")
        command.add_argument("--out", help="output directory")
        command.add_argument("--tol", type=float, help="Newton residual tolerance")

    jump = commands.add_parser("jump", help="continuous impact at one state")
    jump.add_argument("--system", default="rolling_disk", choices=sorted(CATALOG))
    jump.add_argument("--param", type=_parameter, action="append", default=[],
                      metavar="KEY=VALUE", help="system parameter")
    jump.add_argument("--constraint", help="label of the inequality constraint")
    jump.add_argument("--q", type=_floats, help="boundary configuration")
    jump.add_argument("--v", type=_floats, help="incoming velocity")
    jump.add_argument("--seed", type=int, default=0,
                      help="seed of the random state used without --q")
    jump.add_argument("--tol", type=float, help="Newton residual tolerance")

    commands.add_parser("catalog", help="list systems and scenarios")
    return parser


def main(argv=None):
    args = _parser().parse_args(argv)

    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

    code = EXIT_OK
    try:
        if args.command == "run":
            result = run_command(args.config, args.out, args.tol)
        elif args.command == "converge":
            result = converge_command(args.config, args.out, args.tol)
            if not result["passed"]:
                logger.error("observed order below %g", result["min_order"])
                code = EXIT_SOLVER
        elif args.command == "jump":
            result = jump_command(args.system, dict(args.param), args.q, args.v,
                                  args.constraint, args.seed, args.tol)
        else:
            result = catalog_command()
    except RefusedScenarioError as error:
        logger.error("%s", error)
        return EXIT_REFUSED
    except ConfigError as error:
        logger.error("%s", error)
        return EXIT_CONFIG
    except NHSimError as error:
        logger.error("%s", error)
        return EXIT_SOLVER

    sys.stdout.write(yaml.dump(result, default_flow_style=False, sort_keys=False))
    return code
