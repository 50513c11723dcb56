"""Kerr-state engineering for a trapped ion."""

from .fock import (CutoffError, FockVector, KerrParams, apply_kerr_phase, coherent_state,
                   default_dim, displace, fidelity, fidelity_normalized, fidelity_paper,
                   kerr_state, overlap, significant_range, truncated_kerr_state)
from .metrology import (WeakForceSetup, cat_state, epsilon_min, p_plus_approx,
                        protocol_exact, rotated_state_check)
from .one_pulse import (OnePulseConfig, evolve_rwa, expansion_coeffs, kerr_fidelity,
                        pulse_duration, tau_eff, validity_margin)
from .pulses import (IonState, PulseSchedule, PulseSpec, TrapConfig, apply_pulse,
                     budget_check, rabi_coupling, simulate_schedule, synthesize)
from .wigner import (CriteriaReport, Region, WignerField, agreement_fraction,
                     criteria_report, error_stats, isoline_ratio, laguerre_assoc,
                     wigner_grid, wigner_point)

__version__ = "0.1.0"
