"""Detect potential games, compute potentials, project onto potential games
and enumerate pure Nash equilibria for finite normal-form games."""
from .checks import CheckReport, applicable_methods, run_checks
from .core import (
    PotentialVector,
    Verdict,
    average_decomposition,
    bimatrix_is_potential,
    bimatrix_potential,
    build_potential_equation,
    check_centering,
    check_corner,
    check_four_cycle,
    check_adjacent,
    is_potential_by_equation,
    potential_by_equation,
    potential_from_xi,
    project_to_potential,
    validate_potential,
)
from .errors import (
    CapacityError,
    DimensionError,
    NotPotentialError,
    ParseError,
    PotentiaError,
    ProfileError,
    UnsupportedShapeError,
)
from .game import BiMatrixGame, FiniteGame, parse_game, serialize_game
from .linalg import Tolerance
from .minimal import (
    check_all_subgames,
    check_pairwise_reshaped,
    check_pairwise_t21,
    is_potential_minimal,
    minimal_check_matrix,
    minimal_equation_count,
    potential_closed_form,
)
from .nash import EquilibriumSet, nash_from_potential, pure_nash_brute

__version__ = "0.1.0"
