"""
Per-point event flags of a discrete trajectory, stored as a bitmask.
"""

__all__ = ("PointFlags", "IMPACT_POINT", "POST_IMPACT", "RESUMED",
           "CHAINED", "GRAZING", "TOUCH_WINDOW")

IMPACT_POINT = 1 << 0
POST_IMPACT = 1 << 1
RESUMED = 1 << 2
CHAINED = 1 << 3
GRAZING = 1 << 4
TOUCH_WINDOW = 1 << 5


class PointFlags:
    '''
    The flags attached to one trajectory point.
    '''

    flag_to_string = {
        IMPACT_POINT: "Impact point on the boundary",
        POST_IMPACT: "First point after an impact",
        RESUMED: "Point of the resumed discrete flow",
        CHAINED: "Impact chained to the previous one in the same step",
        GRAZING: "Grazing contact, no normal impulse",
        TOUCH_WINDOW: "Impact localised over a doubled window",
    }

    def __init__(self, number=0):
        '''
        Constructor

        arguments:
        - number: the bitmask
        '''
        self.number = int(number)

    def __bool__(self):
        return self.number != 0

    def __int__(self):
        return self.number

    def __str__(self):
        return ' - '.join(self.strerror_all()) or 'Regular step'

    def unpack(self):
        '''
        returns: the list of set bits, as single-bit integers
        '''

        return [bit for bit in (1 << k for k in range(32)) if self.number & bit]

    def strerror(self, n):
        return self.flag_to_string.get(n, 'Unknown flag')

    def strerror_all(self, append_code=False):
        '''
        Same as strerror, for every bit set

        arguments:
        - append_code: if True, also adds the bit value
        '''

        names = []
        for n in self.unpack():
            s = self.strerror(n)
            if append_code:
                s += ' (code: %d)' % n
            names.append(s)
        return names
