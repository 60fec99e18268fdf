"""Hat puzzles with group-valued colors: predictors, parity functions and exhaustive checks."""

__version__ = "0.1.0"

from .coloring import Coloring, enumerate_colorings
from .errors import (
    BudgetExceededError,
    GroupMismatchError,
    GroupSpecParseError,
    HatPuzzleError,
    NotAParityFunctionError,
    UnsupportedError,
)
from .groups import Cyclic, GroupSpec, Integers, Product, parse_group_spec, product
from .parity import ParityFunction, canonical_parity, check_parity
from .predictors import (
    BiasedPredictor,
    SignalBiasedPredictor,
    StarterBiasedPredictor,
    biased_to_signal_biased,
    invert_parity_slot,
    parity_to_biased,
    parity_to_signal_biased,
    parity_to_starter_biased,
    signal_biased_to_biased,
    signal_biased_to_parity,
    starter_biased_to_parity,
)
from .protocols import RunRecord, run_one_by_one, run_one_in_advance, run_simultaneous
from .verdict import Verdict
from .verify import (
    check_biased,
    check_inversion,
    check_one_by_one_induction,
    check_signal_biased,
    check_signaling_implies_signal_biased,
    check_starter_biased,
    equivalence_suite,
    is_signaling,
)
