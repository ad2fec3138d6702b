"""Simulation and numerical diagnostics for 2-d competition processes.

The package covers four interacting birth-and-death families on the
non-negative quadrant (non-linear and linear competitive interaction, the
general six-move nearest-neighbour chain, and the cooperative urn chain),
exact event-driven simulation with reproducible seeded streams, generator
evaluation with drift-certificate scans, and the derived diagnostics of the
linear model: equilibrium slope, one-step identities, boundary-behaviour
classification, hitting times, law-of-large-numbers checks, urn moment
recursions, and ratio-test classification of the hitting/recurrence series.
"""

__version__ = "0.1.0"

from .errors import (AbsorbingStateError, CompprocError, ConfigError,
                     GeneratorDomainError, ModelValidationError,
                     StateOverflowError, TrajectoryTooShortError)
from .models import (AuxUrnModel, InteractionFunction, ReuterModel,
                     Transitions, TypeIIModel, TypeIModel,
                     enumerate_transitions, mean_drift, require_valid,
                     total_rate_type2, validate)
from .simulate import (StopRule, Trajectory, TrajectorySummary, batch,
                       derive_seeds, simulate, simulate_jump_chain, step)
from .lyapunov import (CertificateReport, HittingBound, LeadingTerm,
                       LogLyapunov, PowerLyapunov, apply_generator, certify,
                       expected_hitting_bound, generator_on_level,
                       leading_order)
from .analysis import (ClassificationResult, HittingStats, LinearDiagnostics,
                       LlnReport, SeriesReport, UnSquaredStep, UrnDiagnostics,
                       UrnMoments, classify, functionals, hitting_stats,
                       linear_diagnostics, lln_check, model_rs, reuter_series,
                       s_drift_one_step, summarise_hitting,
                       symmetric_linear_rs, un_squared_one_step,
                       urn_martingale_residuals, urn_moment_recursion,
                       urn_simulate)
from .config import build_model, load_config, parse_kv

__all__ = [name for name in dir() if not name.startswith("_")]
