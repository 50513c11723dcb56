"""Cat-state weak-force detection: exact Fock-space protocol vs closed form."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .fock import FockVector, coherent_state, default_dim, displace, fidelity

Port = Literal["e", "g"]


@dataclass(frozen=True)
class WeakForceSetup:
    alpha: float
    epsilon: float
    dim: int | None = None
    port: Port = "e"

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be real and positive")
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        if self.port not in ("e", "g"):
            raise ValueError("port must be 'e' or 'g'")
        if self.epsilon > self.alpha / 10:
            warnings.warn("epsilon > alpha/10: the small-force picture is poor", stacklevel=3)

    @property
    def cutoff(self) -> int:
        # room for the displaced cat plus the displacement check margin
        if self.dim is not None:
            return self.dim
        return default_dim(self.alpha + self.epsilon) + int(math.ceil(8 * self.epsilon))


def cat_state(alpha: float, dim: int | None = None) -> FockVector:
    """(e^{i pi/4}|alpha> + e^{-i pi/4}|-alpha>) normalized with the <alpha|-alpha> cross term."""
    if dim is None:
        dim = default_dim(alpha)
    plus = coherent_state(alpha, dim).amps
    minus = coherent_state(-alpha, dim).amps
    v = np.exp(1j * np.pi / 4) * plus + np.exp(-1j * np.pi / 4) * minus
    if alpha == 0:
        return FockVector(v).normalize()
    # |v|^2 = 2 + 2 Re(e^{-i pi/2} <alpha|-alpha>) = 2 for real alpha
    overlap = math.exp(-2 * alpha ** 2)
    norm2 = 2 + 2 * (np.exp(-1j * np.pi / 2) * overlap).real
    return FockVector(v / math.sqrt(norm2))


def parity_states(alpha: float, dim: int | None = None) -> tuple[FockVector, FockVector]:
    """Normalized even and odd cats (|alpha> +- |-alpha>)."""
    if dim is None:
        dim = default_dim(alpha)
    a = coherent_state(alpha, dim).amps
    b = coherent_state(-alpha, dim).amps
    return FockVector(a + b).normalize(), FockVector(a - b).normalize()


def half_pi(g: np.ndarray, e: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """|g> -> (|g>+|e>)/sqrt2, |e> -> (-|g>+|e>)/sqrt2."""
    s = 1 / math.sqrt(2)
    return s * (g - e), s * (g + e)


def conditional_parity(g: np.ndarray, e: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(-1)^n on the |e> branch only."""
    sign = (-1.0) ** np.arange(e.size)
    return g, e * sign


def protocol_populations(setup: WeakForceSetup) -> tuple[float, float]:
    """(P_g, P_e) after displacement, pi/2, conditional parity, pi/2."""
    dim = setup.cutoff
    psi = displace(cat_state(setup.alpha, dim), 1j * setup.epsilon)
    g, e = psi.amps.copy(), np.zeros(dim, dtype=complex)
    g, e = half_pi(g, e)
    g, e = conditional_parity(g, e)
    g, e = half_pi(g, e)
    return float(np.sum(np.abs(g) ** 2)), float(np.sum(np.abs(e) ** 2))


def protocol_exact(setup: WeakForceSetup) -> float:
    """Readout probability at the configured port (the even-parity port by default)."""
    p_g, p_e = protocol_populations(setup)
    return p_e if setup.port == "e" else p_g


def p_plus_approx(alpha: float, epsilon: float) -> float:
    return 0.5 * (1 - math.sin(2 * alpha * epsilon))


def sensitivity(alpha: float, epsilon: float) -> float:
    """dP+/d epsilon of the closed form."""
    return -alpha * math.cos(2 * alpha * epsilon)


def epsilon_min(alpha: float) -> tuple[float, float]:
    """(1/(2 alpha), pi/(4 alpha)): the sub-SQL bound and the one-fringe shift."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    return 1 / (2 * alpha), math.pi / (4 * alpha)


def rotated_state_check(setup: WeakForceSetup) -> float:
    """1 - |<approx|D(i eps) psi_i>|^2 for the parity-subspace rotation picture."""
    dim = setup.cutoff
    exact = displace(cat_state(setup.alpha, dim), 1j * setup.epsilon)
    a = coherent_state(setup.alpha, dim).amps
    b = coherent_state(-setup.alpha, dim).amps
    th = math.pi / 4 + setup.alpha * setup.epsilon
    # |+-> = (|alpha> +- |-alpha>)/sqrt2, as written (not renormalized)
    approx = math.cos(th) * (a + b) + 1j * math.sin(th) * (a - b)
    return 1 - fidelity(FockVector(approx).normalize(), exact)
