"""Exact solving, strategies and analysis for F-saturation games on
complete and complete bipartite hosts."""

from .analysis import (
    C4BoundParams, ClosedForm, EssentialPathReport, Interval, MatchReport,
    c4_bound_constant, closed_form, essential_path_report, match_bound_report,
)
from .canonical import certificate, legal_move_orbits
from .errors import *  # noqa: F401,F403
from .families import ForbiddenFamily, is_free, is_saturated, legal_moves
from .graph import (
    ComponentKind, ComponentSummary, GameGraph, HostGraph, add_edge,
    bipartition_balance, components, max_matching, p4_between,
)
from .policies import Policy, select_move
from .simulate import ExperimentRow, Transcript, play, random_process, scaling_experiment
from .solver import (
    MAX, MIN, PlayerRole, SolveConfig, SolveResult, Solver, best_move, best_response, game_value,
)

__version__ = "0.1.0"
