"""Uplink of a wideband massive MIMO system with one-bit ADCs.

Library layout:
    config    scenario description, validation, derived powers
    channel   IID Rayleigh taps and frequency responses
    waveform  pilots, data blocks, cyclic prefix, unitary DFT pair
    linksim   propagation, one-bit quantizer, Bussgang statistics
    chest     per-tap LMMSE channel estimation and its quality analytics
    combine   per-tone MRC/ZFC/RZFC combiners
    rates     empirical rate estimation and every closed form
    xp        experiment harness: trials, figure sweeps, CSV/manifests
"""
from .config import (MRC, OFDM, RZFC, SINGLE_CARRIER, ZFC, ConfigError,
                     PowerDelayProfile, SystemConfig, UserLinkBudget,
                     config_from_dict, config_from_json, equal_snr_config,
                     make_exponential_pdp, make_uniform_pdp, mean_rx_power,
                     validate, validation_errors)
from .channel import draw_channel, freq_response, substream
from .waveform import (PilotBook, TransmitBlock, add_cyclic_prefix,
                       draw_data_block, make_pilots, strip_cyclic_prefix,
                       unitary_dft, unitary_idft)
from .linksim import (QuantizerStats, ReceivedBlock, bussgang_gain_empirical,
                      bussgang_gain_limit, bussgang_gain_model, propagate,
                      quantize_one_bit, quantizer_stats, rel_distortion_limit)
from .chest import (ChannelEstimate, analytic_quality, estimate_channel,
                    quality_ratio)
from .combine import (CombinerWeights, SingularGramError, build_combiner,
                      symbol_estimates)
from .rates import (DegenerateMomentsError, MomentAccumulator, RateReport,
                    antenna_cost_factor, closed_form_rate, rate_baselines,
                    sinr_loss_factor, zfc_rate_ceiling)
from .xp import SweepSpec, compare_waveforms, run_link_trial, run_sweep, simulate_rate

__version__ = "0.1.0"
