"""
Run configuration: YAML defaults shipped beside the package, merged with
a run file and validated into a RunConfig.
"""

import copy
import logging
import os
from dataclasses import dataclass
from typing import Optional

import yaml

from .catalog import system_parameters
from .errors import ConfigError
from .numerics import NewtonConfig
from .tolerances import Tolerances

__all__ = ("RunConfig", "load_yaml", "default_settings", "merge_settings",
           "parse_run_config", "load_run_config", "DEFAULT_SETTINGS_FILE")

logger = logging.getLogger(__name__)

DEFAULT_SETTINGS_FILE = os.path.join(os.path.dirname(__file__),
                                     'default_settings.yaml')


def load_yaml(path):
    """
    returns: the content of a YAML file as a dictionary.
    """

    try:
        with open(path) as f:
            content = yaml.load(f, Loader=yaml.FullLoader)
    except OSError as error:
        raise ConfigError("config", "cannot read %s: %s" % (path, error.strerror))
    except yaml.YAMLError as error:
        raise ConfigError("config", "malformed YAML in %s: %s" % (path, error))
    if content is None:
        return {}
    if not isinstance(content, dict):
        raise ConfigError("config", "%s does not contain a mapping" % path)
    return content


def default_settings():
    return load_yaml(DEFAULT_SETTINGS_FILE)


def merge_settings(base, override):
    """
    Recursively merge override into a copy of base.
    """

    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_settings(merged[key], value)
        else:
            merged[key] = value
    return merged


@dataclass(frozen=True)
class RunConfig:
    """
    A validated run configuration.
    """

    system_name: str
    system_parameters: dict
    q0: tuple
    q1: Optional[tuple]
    v0: Optional[tuple]
    h: float
    steps: int
    tolerances: Tolerances
    initial_velocity_drift: float
    oracle_h_fine: float
    oracle_projection: bool
    refinements: int
    min_order: float
    exact_error: float
    output_directory: str
    trajectory_file: str
    impacts_file: str
    report_file: str
    float_format: str

    @property
    def t_end(self):
        return self.h * self.steps


def _section(settings, name):
    value = settings.get(name, {})
    if not isinstance(value, dict):
        raise ConfigError(name, "expected a mapping")
    return value


def _number(section, key, field, positive=True):
    if key not in section:
        raise ConfigError(field, "missing")
    try:
        value = float(section[key])
    except (TypeError, ValueError):
        raise ConfigError(field, "expected a number, got %r" % (section[key],))
    if positive and not value > 0:
        raise ConfigError(field, "must be positive, got %g" % value)
    return value


def _integer(section, key, field, minimum=1):
    value = section.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(field, "expected an integer, got %r" % (value,))
    if value < minimum:
        raise ConfigError(field, "must be at least %d, got %d" % (minimum, value))
    return value


def _vector(section, key, field):
    value = section.get(key)
    if value is None:
        return None
    if not isinstance(value, (list, tuple)) or not value:
        raise ConfigError(field, "expected a list of numbers")
    try:
        return tuple(float(x) for x in value)
    except (TypeError, ValueError):
        raise ConfigError(field, "expected a list of numbers, got %r" % (value,))


def parse_run_config(settings):
    """
    Validate merged settings.

    arguments:
    - settings    the defaults merged with a run file

    returns: a RunConfig.
    """

    system = _section(settings, "system")
    name = system.get("name")
    if not isinstance(name, str):
        raise ConfigError("system.name", "missing")
    parameters = system.get("parameters") or {}
    if not isinstance(parameters, dict):
        raise ConfigError("system.parameters", "expected a mapping")
    parameters = system_parameters(name, parameters)

    initial = _section(settings, "initial")
    q0 = _vector(initial, "q0", "initial.q0")
    q1 = _vector(initial, "q1", "initial.q1")
    v0 = _vector(initial, "v0", "initial.v0")
    if q0 is None:
        raise ConfigError("initial.q0", "missing")
    if (q1 is None) == (v0 is None):
        raise ConfigError("initial", "give exactly one of q1 and v0")
    for vector, field in ((q1, "initial.q1"), (v0, "initial.v0")):
        if vector is not None and len(vector) != len(q0):
            raise ConfigError(field, "has %d components, q0 has %d"
                              % (len(vector), len(q0)))

    newton = _section(settings, "newton")
    tolerances = _section(settings, "tolerances")
    try:
        tol = Tolerances(
                newton=NewtonConfig(
                    residual_tolerance=_number(newton, "residual_tolerance",
                                               "newton.residual_tolerance"),
                    max_iterations=_integer(newton, "max_iterations",
                                            "newton.max_iterations"),
                    damping=_number(newton, "damping", "newton.damping"),
                    min_step=_number(newton, "min_step", "newton.min_step"),
                    max_condition=_number(newton, "max_condition",
                                          "newton.max_condition")),
                boundary=_number(tolerances, "boundary", "tolerances.boundary"),
                constraint=_number(tolerances, "constraint", "tolerances.constraint"),
                alpha_margin=_number(tolerances, "alpha_margin",
                                     "tolerances.alpha_margin"),
                grazing=_number(tolerances, "grazing", "tolerances.grazing"),
                max_chained_impacts=_integer(tolerances, "max_chained_impacts",
                                             "tolerances.max_chained_impacts"))
    except ValueError as error:
        raise ConfigError("tolerances", str(error))

    oracle = _section(settings, "oracle")
    convergence = _section(settings, "convergence")
    output = _section(settings, "output")

    return RunConfig(
            system_name=name,
            system_parameters=parameters,
            q0=q0, q1=q1, v0=v0,
            h=_number(settings, "h", "h"),
            steps=_integer(settings, "steps", "steps"),
            tolerances=tol,
            initial_velocity_drift=_number(settings, "initial_velocity_drift",
                                           "initial_velocity_drift"),
            oracle_h_fine=_number(oracle, "h_fine", "oracle.h_fine"),
            oracle_projection=bool(oracle.get("projection", False)),
            refinements=_integer(convergence, "refinements",
                                 "convergence.refinements", minimum=2),
            min_order=_number(convergence, "min_order", "convergence.min_order"),
            exact_error=_number(convergence, "exact_error",
                                "convergence.exact_error"),
            output_directory=str(output.get("directory", "results")),
            trajectory_file=str(output.get("trajectory", "trajectory.csv")),
            impacts_file=str(output.get("impacts", "impacts.json")),
            report_file=str(output.get("report", "report.json")),
            float_format=str(output.get("float_format", "%.17g")))


def load_run_config(path, overrides=None):
    """
    Load a run file over the defaults.

    arguments:
    - path        the run YAML file
    - overrides   settings applied last, e.g. from the command line

    returns: a RunConfig.
    """

    settings = merge_settings(default_settings(), load_yaml(path))
    if overrides:
        settings = merge_settings(settings, overrides)
    logger.debug('Config:\n%s', yaml.dump(settings))
    return parse_run_config(settings)
