from typing import List, NamedTuple

__all__ = ("SystemBundle",)


class SystemBundle(NamedTuple):
    """
    Everything the integrators need about one catalog system.
    """

    system: object
    constraints: object
    inequalities: List
    discrete_lagrangian: object

    def inequality(self, label):
        for ic in self.inequalities:
            if ic.label == label:
                return ic
        raise KeyError(label)
