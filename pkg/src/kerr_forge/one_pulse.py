"""Single carrier pulse Kerr generation in the rotating-wave approximation.

The RWA Hamiltonian (hbar = 1) is diagonal in Fock (x) sigma_x::

    H = (Omega/2) f(n) sigma_x,
    f(n) = 1 - eta^2/2 + eta^4/8 + (-eta^2 + eta^4/2) n + (eta^4/4) n(n-1)

Evolution follows the sign of the displayed nonlinear unitary
U(t) = exp(+i Omega eta^4 t/8 a^+^2 a^2 sigma_x), so the |+x> branch picks up the
Kerr phase exp(+i tau_eff n(n-1)/2) with tau_eff = Omega eta^4 t / 4.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .fock import FockVector, apply_kerr_phase, coherent_state, fidelity
from .pulses import IonState

LONG_PULSE_S = 1.0
SIGMA_X_TOL = 1e-8


class NotSigmaXEigenstate(ValueError):
    pass


@dataclass(frozen=True)
class OnePulseConfig:
    omega: float          # rad/s
    eta: float
    alpha: complex = 0.0
    branch: int = +1      # sigma_x eigenvalue of the prepared electronic state

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError("omega must be positive")
        if not 0 < self.eta < 1:
            raise ValueError("eta must lie in (0, 1)")
        if self.branch not in (1, -1):
            raise ValueError("branch must be +1 or -1")


def omega_from(value: float, unit: str = "rad/s") -> float:
    """Rabi frequency in rad/s from a value tagged 'rad/s' or 'Hz'."""
    if unit == "rad/s":
        return float(value)
    if unit == "Hz":
        return 2 * math.pi * float(value)
    raise ValueError(f"unknown frequency unit {unit!r}")


def tau_eff(cfg: OnePulseConfig, t: float) -> float:
    return cfg.omega * cfg.eta ** 4 * t / 4


def pulse_duration(cfg: OnePulseConfig, tau: float, warn: bool = True) -> float:
    if tau < 0:
        raise ValueError("tau must be >= 0")
    t = 4 * tau / (cfg.omega * cfg.eta ** 4)
    if warn and t > LONG_PULSE_S:
        warnings.warn(f"pulse of {t:.3g} s exceeds {LONG_PULSE_S} s", stacklevel=2)
    return t


def validity_margin(cfg: OnePulseConfig) -> float:
    """Expansion parameter 2 eta |alpha|; the RWA series is trusted below 1."""
    return 2 * cfg.eta * abs(cfg.alpha)


def expansion_coeffs(cfg: OnePulseConfig, k_max: int) -> list[float]:
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    x = validity_margin(cfg)
    return [x ** k / math.factorial(k) for k in range(k_max + 1)]


def _phase_parts(cfg: OnePulseConfig, dim: int, t: float):
    """Constant, linear and Kerr parts of the accumulated phase (|+x> branch)."""
    n = np.arange(dim, dtype=float)
    e2, e4 = cfg.eta ** 2, cfg.eta ** 4
    w = cfg.omega * t / 2
    const = w * (1 - e2 / 2 + e4 / 8) * np.ones(dim)
    linear = w * (-e2 + e4 / 2) * n
    kerr = w * (e4 / 4) * n * (n - 1)
    return const, linear, kerr


def split_sigma_x(state: IonState) -> tuple[np.ndarray, np.ndarray]:
    """Motional amplitudes on |+x> = (|g>+|e>)/sqrt2 and |-x> = (|g>-|e>)/sqrt2."""
    return (state.g + state.e) / math.sqrt(2), (state.g - state.e) / math.sqrt(2)


def _sigma_x_sign(state: IonState) -> int:
    plus, minus = split_sigma_x(state)
    total = state.norm
    if np.linalg.norm(minus) <= SIGMA_X_TOL * total:
        return 1
    if np.linalg.norm(plus) <= SIGMA_X_TOL * total:
        return -1
    raise NotSigmaXEigenstate("electronic state must be a sigma_x eigenstate")


def prepare(motion: FockVector, branch: int = 1) -> IonState:
    """motion (x) |+x> (branch=+1) or motion (x) |-x> (branch=-1)."""
    a = motion.amps / math.sqrt(2)
    return IonState(a, branch * a)


def evolve_rwa(state: IonState, cfg: OnePulseConfig, t: float) -> IonState:
    s = _sigma_x_sign(state)
    const, linear, kerr = _phase_parts(cfg, state.dim, t)
    phase = np.exp(1j * s * (const + linear + kerr))
    plus, minus = split_sigma_x(state)
    plus, minus = plus * phase, minus * phase  # one of the two is zero
    return IonState((plus + minus) / math.sqrt(2), (plus - minus) / math.sqrt(2))


def compensate_frame(motion: FockVector, cfg: OnePulseConfig, t: float, sign: int = 1) -> FockVector:
    """Strip the constant and linear-in-n phases (the free evolution)."""
    const, linear, _ = _phase_parts(cfg, motion.dim, t)
    return FockVector(motion.amps * np.exp(-1j * sign * (const + linear)))


def motional_part(state: IonState) -> FockVector:
    s = _sigma_x_sign(state)
    plus, minus = split_sigma_x(state)
    return FockVector(plus if s == 1 else minus)


def kerr_fidelity(cfg: OnePulseConfig, tau: float, dim: int | None = None) -> float:
    """Fidelity of the frame-compensated one-pulse output with the ideal Kerr state."""
    if validity_margin(cfg) >= 1:
        raise ValueError(f"2 eta |alpha| = {validity_margin(cfg):.3g} is outside the RWA regime")
    coh = coherent_state(cfg.alpha, dim)
    t = pulse_duration(cfg, tau, warn=False)
    out = evolve_rwa(prepare(coh, cfg.branch), cfg, t)
    motion = compensate_frame(motional_part(out), cfg, t, cfg.branch)
    return fidelity(motion, apply_kerr_phase(coh, cfg.branch * tau))
