"""IRS-backscatter NOMA downlink: channels, rate formulas, phase design,
alternating optimization, baseline schemes and Monte-Carlo sweeps."""

from .ao import AoConfig, RatesReport, Solution, evaluate, solve
from .baselines import (BaselineKind, aligned_phases, random_phases,
                        solve_benchmark1, solve_oma, solve_scheme)
from .channel import (ChannelRealization, CsiErrorModel, FadingParams, Geometry,
                      apply_csi_error, generate_realization, pathloss,
                      perturb_realization, sample_rician)
from .errors import ConfigError, Infeasible, SolverFailure
from .harness import (ScenarioConfig, SweepResult, SweepRow, config_from_dict,
                      run_sweep, summarize_gains)
from .phase_opt import (PenaltyConfig, ScaResult, SdpSubproblem,
                        build_subproblem, extract_phases, rank_penalty,
                        sca_penalty_loop, solve_sdp_subproblem,
                        spectral_subgradient)
from .rates import (DecodingOrder, EffectiveGains, LinkBudget, NomaAllocation,
                    SicModel, alpha_feasible, decoding_order, effective_gains,
                    optimal_alpha, optimal_power_coeff, primary_sinr, rate,
                    residual_sic_ok, secondary_snr, sinr_imperfect_sic)
from .units import db_to_lin, dbm_to_watts, lin_to_db, watts_to_dbm

__version__ = "0.1.0"
