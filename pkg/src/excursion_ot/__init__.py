"""Exact excursion coupling of finite measures on the real line."""
from .errors import DomainError, InvariantError, IterationLimitError, OracleAmbiguityError
from .measure import Measure, cdf_at, common_mass_split, first_moment, quantile_at
from .signed_graph import indicatrix, signed_cdf, total_variation_parts
from .excursion import TransportPlan, excursion_coupling, identity_plan
from .plan import CostSpec, ZERO_COST, antitone_coupling, cost, plan_distance, quantile_coupling
from .solve import SolveReport, optimal_face_edges, solve_lp, solve_secondary, sweep_p
from .monotone import ArchVerdict, check_pair, check_plan

__version__ = "0.1.0"
