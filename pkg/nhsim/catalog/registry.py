"""
Name registry of the catalog systems, with default parameters and a
sampler of boundary configurations for each.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import ConfigError
from ..mechanics import project_velocity
from .particle import (make_particle_in_disk, make_particle_half_plane,
                       PARTICLE_IN_DISK_DEFAULTS, PARTICLE_HALF_PLANE_DEFAULTS)
from .rolling_disk import make_rolling_disk, ROLLING_DISK_DEFAULTS

__all__ = ("CATALOG", "CatalogEntry", "make_system", "system_parameters",
           "random_boundary_state")

# incoming states closer to grazing than this are resampled
MIN_NORMAL_FRACTION = 0.1


@dataclass(frozen=True)
class CatalogEntry:
    factory: Callable
    defaults: dict
    description: str
    boundary_sampler: Callable


def _disk_boundary(rng, params, label):
    R, a = params["R"], params["a"]
    side = 1.0 if label == "C+" else -1.0
    psi = rng.uniform(0.0, 2.0 * np.pi)
    # keep the opposite end of the diameter inside the table
    spread = 0.9 * np.arccos(R / a)
    phi = psi + rng.uniform(-spread, spread) + (0.0 if side > 0 else np.pi)
    contact = a * np.array([np.cos(psi), np.sin(psi)])
    centre = contact - side * R * np.array([np.cos(phi), np.sin(phi)])
    return np.array([centre[0], centre[1], rng.uniform(0.0, 2.0 * np.pi), phi])


def _disk_particle_boundary(rng, params, label):
    psi = rng.uniform(0.0, 2.0 * np.pi)
    return params["a"] * np.array([np.cos(psi), np.sin(psi)])


def _half_plane_boundary(rng, params, label):
    return np.array([params["wall"], rng.uniform(-1.0, 1.0)])


CATALOG = {
    "rolling_disk": CatalogEntry(
            make_rolling_disk, ROLLING_DISK_DEFAULTS,
            "vertical disk rolling without slipping on a table of radius a",
            _disk_boundary),
    "particle_in_disk": CatalogEntry(
            make_particle_in_disk, PARTICLE_IN_DISK_DEFAULTS,
            "point particle inside a disk of radius a, optional gravity",
            _disk_particle_boundary),
    "particle_half_plane": CatalogEntry(
            make_particle_half_plane, PARTICLE_HALF_PLANE_DEFAULTS,
            "point particle in the half-plane x <= wall",
            _half_plane_boundary),
}


def system_parameters(name, parameters=None):
    """
    Merge user parameters over the defaults of a catalog system.

    returns: the merged parameter dictionary.
    """

    if name not in CATALOG:
        raise ConfigError("system.name", "unknown system '%s', expected one of %s"
                          % (name, ", ".join(sorted(CATALOG))))
    merged = dict(CATALOG[name].defaults)
    for key, value in (parameters or {}).items():
        if key not in merged:
            raise ConfigError("system.parameters.%s" % key,
                              "not a parameter of %s" % name)
        try:
            merged[key] = float(value)
        except (TypeError, ValueError):
            raise ConfigError("system.parameters.%s" % key,
                              "expected a number, got %r" % (value,))
    return merged


def make_system(name, parameters=None):
    """
    Build a catalog system by name.

    returns: a SystemBundle.
    """

    merged = system_parameters(name, parameters)
    try:
        return CATALOG[name].factory(**merged)
    except ValueError as error:
        raise ConfigError("system.parameters", str(error))


def random_boundary_state(name, rng, parameters=None, label=None):
    """
    Sample a boundary configuration of a catalog system with an incoming
    velocity in D.

    arguments:
    - name         catalog name
    - rng          a numpy Generator
    - parameters   system parameters over the defaults
    - label        the inequality constraint to sit on, the first when None

    returns: (bundle, ic, q, v_minus)
    """

    merged = system_parameters(name, parameters)
    bundle = make_system(name, merged)
    ic = bundle.inequality(label) if label else bundle.inequalities[0]
    q = CATALOG[name].boundary_sampler(rng, merged, ic.label)
    dg = ic.normal(q)

    while True:
        v = project_velocity(bundle.system, bundle.constraints, q,
                             rng.normal(size=bundle.system.dimension))
        rate = float(dg @ v)
        if abs(rate) > MIN_NORMAL_FRACTION * np.linalg.norm(dg) * np.linalg.norm(v):
            break
    return bundle, ic, q, v if rate > 0.0 else -v
