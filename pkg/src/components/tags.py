from enum import Enum

LEVELS = (1, 2, 3)

class DegeneracyClass(Enum):
    GENERIC = "generic"
    UPPER_DEGENERATE = "upper_degenerate"
    LOWER_DEGENERATE = "lower_degenerate"
    TRIPLE_DEGENERATE = "triple_degenerate"

    @property
    def orbit_dimension(self) -> int:
        if self is DegeneracyClass.GENERIC:
            return 6
        if self is DegeneracyClass.TRIPLE_DEGENERATE:
            return 0
        return 4

class CurvatureRoute(Enum):
    SPECTRAL = "spectral"
    TRANSPORTED = "transported"
    PARTS = "parts"
