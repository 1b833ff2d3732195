import json
from hashlib import md5
from os import path as os_path

import numpy as np

__all__ = ('ResultFile', 'write_trajectory_table', 'trajectory_columns')


def _check_file(filename):
    """
    Checks whether the file exist on disk and has some content

    arguments:
    - filename:   the name of the file to be checked.
    """

    return os_path.exists(filename) and os_path.getsize(filename) > 0


def _md5_of(filename):
    with open(filename, "rb") as resultfile:
        return md5(resultfile.read()).hexdigest()


class ResultFile:
    """
    A JSON result file with an .md5 sidecar.
    """

    def __init__(self, path):
        """
        Constructor

        arguments:
        - path    the path of the result file
        """

        self.path = path

    def _write_md5(self):
        with open(self.path + ".md5", "w") as hashfile:
            hashfile.write(_md5_of(self.path) + "\n")

    def check(self):
        """
        returns: True if the md5 of the result file matches the .md5 file
                 content, False otherwise.
        """

        md5_path = self.path + ".md5"
        if _check_file(self.path) and _check_file(md5_path):
            with open(md5_path, "r") as f:
                challenge = f.read().rstrip()
            return _md5_of(self.path) == challenge
        return False

    def store(self, data):
        """
        Write data as JSON with sorted keys and update the md5 file.

        arguments:
        - data          a JSON-convertible object to store
        """

        with open(self.path, "w") as resultfile:
            json.dump(data, resultfile, indent=2, sort_keys=True)
            resultfile.write("\n")
        self._write_md5()

    def load(self):
        """
        returns: the deserialized content of the result file if the md5
                 test succeeded, an empty dictionary otherwise.
        """

        if not self.check():
            return {}
        with open(self.path) as resultfile:
            return json.load(resultfile)


def trajectory_columns(system, constraints, inequalities):
    """
    returns: the column names of the trajectory table.
    """

    return (["index", "t"] + ["q_%s" % name for name in system.coordinates]
            + ["lambda_%d" % (a + 1) for a in range(constraints.m)]
            + ["energy"] + ["g_%s" % ic.label for ic in inequalities]
            + ["flags"])


def write_trajectory_table(path, trajectory, system, constraints, inequalities,
                           float_format="%.17g"):
    """
    Write one row per trajectory point: index, time, configuration,
    multipliers, discrete energy, gap of every inequality constraint and
    the flag bitmask.

    The output depends only on the trajectory, the same trajectory always
    gives the same bytes. An .md5 sidecar is written next to the table.
    """

    gaps = np.array([[ic.g(q) for ic in inequalities] for q in trajectory.points])
    gaps = gaps.reshape(len(trajectory), len(inequalities))
    table = np.column_stack([np.arange(len(trajectory)), trajectory.times,
                             trajectory.points, trajectory.multipliers,
                             trajectory.energies, gaps, trajectory.flags])

    n = system.dimension
    m = constraints.m
    formats = (["%d", float_format] + [float_format] * (n + m + 1 + len(inequalities))
               + ["%d"])
    header = ",".join(trajectory_columns(system, constraints, inequalities))
    np.savetxt(path, table, fmt=formats, delimiter=",", header=header,
               comments="")
    with open(path + ".md5", "w") as hashfile:
        hashfile.write(_md5_of(path) + "\n")
