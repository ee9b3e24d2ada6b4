"""Constants."""
from dataclasses import dataclass
from enum import Enum, IntEnum
from fractions import Fraction

# Text syntax: generator i is the i-th lowercase letter, its inverse the uppercase one
ALPHABET = "abcdefghijklmnopqrstuvwxyz"
MAX_TEXT_RANK = len(ALPHABET)
IDENTITY_TOKENS = ("", "1", "e")

# Little counting quasi-morphisms have defect at most 2, their homogenisations at
# most twice that.
COUNTING_DEFECT = Fraction(2)
HOMOGENIZED_DEFECT = Fraction(4)

DEFAULT_NORM_BUDGET = 4
DEFAULT_SEARCH_LENGTH = 8
DEFAULT_BALL_RADIUS = 8
DEFAULT_HOMOGENIZE_STEPS = 100_000

# Cyclic cores longer than this are factorized letterwise
MAX_NORM_SEARCH_LENGTH = 32

# Conjugator length used by the dihedral brute force
DIHEDRAL_CONJUGATOR_LENGTH = 8

EXPERIMENT_DIHEDRAL_DIAMETER = "dihedral-diameter"
EXPERIMENT_DIHEDRAL_LIFT = "dihedral-lift"
EXPERIMENT_EXAMPLE_A2 = "example-A2"
EXPERIMENT_NORMAL_GROWTH = "normal-growth"
EXPERIMENT_DISTORTION_GROWTH = "distortion-growth"
EXPERIMENT_QSUR_GROWTH = "qsur-growth"
EXPERIMENT_TRICHOTOMY = "trichotomy"
EXPERIMENT_DEFECT = "defect"

FORMAT_JSON = "json"
FORMAT_CSV = "csv"
FORMAT_DOT = "dot"
FORMAT_TEXT = "text"

OUTPUT_FORMATS = (FORMAT_JSON, FORMAT_CSV, FORMAT_DOT, FORMAT_TEXT)


class ExitCode(IntEnum):
    """CLI exit status."""

    PASS = 0
    PROPERTY_VIOLATED = 1
    BUDGET_EXHAUSTED = 2
    USAGE_ERROR = 3


class VerdictKind(str, Enum):
    """Classification of a homomorphism F_m -> F_n."""

    ISOMORPHISM = "isomorphism"
    NON_INJECTIVE = "non_injective"
    FINITE_INDEX_PROPER = "finite_index_proper"
    INFINITE_INDEX = "infinite_index"


@dataclass(frozen=True)
class Budgets:
    """Search budgets shared by the bounded procedures."""

    norm_budget: int = DEFAULT_NORM_BUDGET
    search_length: int = DEFAULT_SEARCH_LENGTH
    ball_radius: int = DEFAULT_BALL_RADIUS
    homogenize_steps: int = DEFAULT_HOMOGENIZE_STEPS

    def __post_init__(self) -> None:
        """Validate budgets."""
        for name in ("norm_budget", "search_length", "ball_radius"):
            if getattr(self, name) < 0:
                raise ValueError(f"`{name}` must be non-negative")
        if self.homogenize_steps < 1:
            raise ValueError("`homogenize_steps` must be positive")
