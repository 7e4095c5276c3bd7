from enum import Enum, auto


class LandmarkKind(Enum):
    CONJUNCTIVE = auto()
    DISJUNCTIVE = auto()

    @property
    def connective(self) -> str:
        return "and" if self is LandmarkKind.CONJUNCTIVE else "or"
