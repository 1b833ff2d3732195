"""
Ready-made run configurations shipped with the catalog.
"""

import os

__all__ = ("SCENARIO_DIR", "list_scenarios", "scenario_path")

SCENARIO_DIR = os.path.join(os.path.dirname(__file__), "scenarios")


def list_scenarios():
    """
    returns: the sorted names of the shipped scenarios.
    """

    return sorted(os.path.splitext(name)[0] for name in os.listdir(SCENARIO_DIR)
                  if name.endswith(".yaml"))


def scenario_path(name):
    """
    returns: the path of the scenario file called name.
    """

    path = os.path.join(SCENARIO_DIR, name + ".yaml")
    if not os.path.exists(path):
        raise KeyError("unknown scenario '%s', expected one of %s"
                       % (name, ", ".join(list_scenarios())))
    return path
