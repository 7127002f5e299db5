"""Beamforming simulation for hybrid reconfigurable parasitic dipole arrays."""

from .benchmarks import (ArchitectureResult, PowerModel, eval_fd_ula,
                         eval_fd_upa, eval_hps_upa, eval_hrp_upa, metrics,
                         total_power)
from .channel import (ChannelRealization, LinkBudget, PathSet, link_constant,
                      multipath_channel, sample_paths, steering_x, steering_y)
from .circuit import (OPEN_CIRCUIT_REACTANCE, BeamformingSolution,
                      EffectiveSystem, LoadConfig, beam_pattern,
                      currents_from_voltages, effective_channel,
                      effective_impedance, effective_system,
                      parasitic_currents, radiated_power, snr)
from .em_model import (ArrayGeometry, DipoleSpec, PartitionedImpedance,
                       assemble_impedance, dipole_mutual_impedance,
                       dipole_self_impedance, export_impedance,
                       impedance_from_positions, impedance_to_scattering,
                       import_impedance, scattering_to_impedance)
from .errors import (ConfigError, ConversionError, FormatError, GeometryError,
                     ModelError, ParasimError, ResonanceError, SolverError)
from .solver import (ApproxObjective, LorentzianWeight, OracleConfig,
                     approx_beam_pattern, beam_pattern_reference,
                     closed_form_phase, closed_form_reactance_hybrid,
                     closed_form_reactance_los, numerical_oracle_los,
                     optimal_active_current, random_search_baseline,
                     reactance_to_weight, weight_to_reactance)
from .sweep import (PatternConfig, SweepConfig, SweepResult, SweepRow,
                    load_config, load_pattern_config, run_pattern_fixedload,
                    run_pattern_maxgain, run_sweep, write_sweep_csv)

__version__ = "0.1.0"
