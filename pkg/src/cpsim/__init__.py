"""Simulation library for contingent-payment allocation mechanisms."""

from .errors import (AssumptionViolated, CpsimError, DomainError, EmptyEconomy,
                     MismatchedProfiles, NoSignChange, NonFinite, ScaleLimit)
from .typemodels import (DiscreteModel, ExponentialModel, TwoPartPayment,
                         UniformModel, ValueModel, WpModel, model_from_dict,
                         model_to_dict, validate)
from .economy import Economy, MultiEconomy, frontier, frontier_zero_crossing, p1p5_upper_bound
from .mech_single import (CSP, CSPR, SP, SPC, GammaCSP, Outcome, RandomAlloc,
                          SingleMechanismSpec, dse_bid, run_single)
from .mech_multi import (CePrices, MultiOutcome, brute_force_min_ce, check_ce,
                         min_ce_prices, run_fcfs, run_gcsp, run_m_plus_1, run_vcg)
from .cmm import CmmSpec, menu_points, menu_utility, run_cmm, zero_crossing_menu
from .benchmarks import (WelfareReport, agent_welfare, analytic_reserve_gain,
                         dsic_probe, first_best_multi, first_best_single,
                         numeric_reserve_gain, run_spc_welfare, welfare_report)
from .experiments import (SamplerSpec, SweepRecord, compare_mechanisms,
                          derive_seed, parse_mechanism, run_mechanism,
                          run_sweep, sample_profile, write_csv)

__version__ = "0.1.0"

__all__ = [
    "AssumptionViolated", "CpsimError", "DomainError", "EmptyEconomy",
    "MismatchedProfiles", "NoSignChange", "NonFinite", "ScaleLimit",
    "DiscreteModel", "ExponentialModel", "TwoPartPayment", "UniformModel",
    "ValueModel", "WpModel", "model_from_dict", "model_to_dict", "validate",
    "Economy", "MultiEconomy", "frontier", "frontier_zero_crossing",
    "p1p5_upper_bound",
    "CSP", "CSPR", "SP", "SPC", "GammaCSP", "Outcome", "RandomAlloc",
    "SingleMechanismSpec", "dse_bid", "run_single",
    "CePrices", "MultiOutcome", "brute_force_min_ce", "check_ce",
    "min_ce_prices", "run_fcfs", "run_gcsp", "run_m_plus_1", "run_vcg",
    "CmmSpec", "menu_points", "menu_utility", "run_cmm", "zero_crossing_menu",
    "WelfareReport", "agent_welfare", "analytic_reserve_gain", "dsic_probe",
    "first_best_multi", "first_best_single", "numeric_reserve_gain",
    "run_spc_welfare", "welfare_report",
    "SamplerSpec", "SweepRecord", "compare_mechanisms", "derive_seed",
    "parse_mechanism", "run_mechanism", "run_sweep", "sample_profile",
    "write_csv",
]
