"""Carrier / red-sideband pulse schedules for motional superposition states.

A target sum_{n<=M} c_n |n>|g> is reached from |0,g> by 2M alternating pulses
C_0, R_1, C_1, ..., C_{M-1}, R_M.  The schedule is found by running the
sequence backwards: starting from the target, each red-sideband pulse empties
the highest |m,g> into |m-1,e> and each carrier pulse then empties |m-1,e>.

Pulse convention, on a coupled pair (|lower, g>, |upper, e>) with coupling
Omega_eff and theta = Omega_eff * t / 2::

    U = [[cos theta,                -i e^{-i phi} sin theta],
         [-i e^{i phi} sin theta,   cos theta              ]]

i.e. the phase enters as e^{i phi} on the raising part.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Literal

import numpy as np

from .fock import FockVector
from .wigner import laguerre_assoc

Kind = Literal["carrier", "red_sideband"]
CARRIER: Kind = "carrier"
RED: Kind = "red_sideband"


class TrapLimitError(ValueError):
    """Target needs a motional level above the trap's binding limit."""


class BudgetError(ValueError):
    """Schedule would exceed the vibrational coherence time."""


@dataclass(frozen=True)
class TrapConfig:
    omega_c: float = 1e6          # carrier Rabi frequency, rad/s
    omega_r: float = 1e5          # red-sideband Rabi frequency, rad/s
    eta: float = 0.02
    vib_coherence: float = 190e-3
    elec_coherence: float = 1.4e-3
    m_max: int = 17

    def __post_init__(self):
        if not 0 < self.eta < 1:
            raise ValueError("eta must lie in (0, 1)")
        if self.m_max < 1:
            raise ValueError("m_max must be >= 1")
        if self.omega_c <= 0 or self.omega_r <= 0:
            raise ValueError("Rabi frequencies must be positive")


@dataclass(frozen=True)
class PulseSpec:
    kind: Kind
    phase: float
    duration: float
    rabi: float
    index: int

    def __post_init__(self):
        if self.kind not in (CARRIER, RED):
            raise ValueError(f"unknown pulse kind {self.kind!r}")
        if self.duration < 0:
            raise ValueError("duration must be >= 0")
        if self.rabi <= 0:
            raise ValueError("rabi must be > 0")

    @property
    def phase_reduced(self) -> float:
        return math.remainder(self.phase, 2 * math.pi)

    @property
    def label(self) -> str:
        return f"{'C' if self.kind == CARRIER else 'R'}{self.index}"


@dataclass(frozen=True)
class PulseSchedule:
    pulses: tuple[PulseSpec, ...] = ()

    def __len__(self):
        return len(self.pulses)

    def __iter__(self):
        return iter(self.pulses)

    @property
    def total_duration(self) -> float:
        return float(sum(p.duration for p in self.pulses))

    def of_kind(self, kind: Kind) -> list[PulseSpec]:
        return [p for p in self.pulses if p.kind == kind]


@dataclass(frozen=True, eq=False)
class IonState:
    """Amplitudes of |n, g> and |n, e> over a common Fock cutoff."""

    g: np.ndarray
    e: np.ndarray

    def __post_init__(self):
        g = np.array(self.g, dtype=complex, copy=True).reshape(-1)
        e = np.array(self.e, dtype=complex, copy=True).reshape(-1)
        if g.shape != e.shape:
            raise ValueError("branches must share the cutoff")
        g.setflags(write=False)
        e.setflags(write=False)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "e", e)

    @property
    def dim(self) -> int:
        return self.g.size

    @property
    def norm(self) -> float:
        return math.sqrt(float(np.sum(np.abs(self.g) ** 2) + np.sum(np.abs(self.e) ** 2)))

    @property
    def g_amps(self) -> FockVector:
        return FockVector(self.g)

    @property
    def e_amps(self) -> FockVector:
        return FockVector(self.e)

    @classmethod
    def ground(cls, dim: int) -> IonState:
        g = np.zeros(dim, dtype=complex)
        g[0] = 1.0
        return cls(g, np.zeros(dim, dtype=complex))

    @classmethod
    def from_motion(cls, motion: FockVector, electronic: Literal["g", "e"] = "g") -> IonState:
        z = np.zeros(motion.dim, dtype=complex)
        return cls(motion.amps, z) if electronic == "g" else cls(z, motion.amps)

    def padded(self, dim: int) -> IonState:
        def pad(v):
            out = np.zeros(dim, dtype=complex)
            k = min(dim, v.size)
            out[:k] = v[:k]
            return out
        return IonState(pad(self.g), pad(self.e))

    def overlap(self, other: IonState) -> complex:
        d = max(self.dim, other.dim)
        a, b = self.padded(d), other.padded(d)
        return complex(np.vdot(a.g, b.g) + np.vdot(a.e, b.e))

    def fidelity(self, other: IonState) -> float:
        return abs(self.overlap(other)) ** 2


def rabi_coupling(cfg: TrapConfig, n: int, kind: Kind, omega: float | None = None) -> float:
    """Coupling rate of |n,g> <-> |n,e> (carrier) or |n,g> <-> |n-1,e> (red sideband).

    Omega e^{-eta^2/2} eta^{|dn|} sqrt(n_<!/n_>!) L_{n_<}^{|dn|}(eta^2), signed.
    """
    eta2 = cfg.eta ** 2
    if kind == CARRIER:
        om = cfg.omega_c if omega is None else omega
        return om * math.exp(-eta2 / 2) * laguerre_assoc(n, 0, eta2)
    if kind == RED:
        if n < 1:
            raise ValueError("red sideband needs n >= 1")
        om = cfg.omega_r if omega is None else omega
        return om * math.exp(-eta2 / 2) * cfg.eta * laguerre_assoc(n - 1, 1, eta2) / math.sqrt(n)
    raise ValueError(f"unknown pulse kind {kind!r}")


def _rotate(a, b, theta, phase):
    c, s = np.cos(theta), np.sin(theta)
    return (c * a - 1j * np.exp(-1j * phase) * s * b,
            -1j * np.exp(1j * phase) * s * a + c * b)


def apply_pulse(state: IonState, pulse: PulseSpec, cfg: TrapConfig) -> IonState:
    g, e = state.g.copy(), state.e.copy()
    if pulse.duration == 0:
        return state
    dim = state.dim
    if pulse.kind == CARRIER:
        theta = np.array([rabi_coupling(cfg, n, CARRIER, pulse.rabi) for n in range(dim)])
        theta *= pulse.duration / 2
        g, e = _rotate(g, e, theta, pulse.phase)
    else:
        theta = np.array([rabi_coupling(cfg, n, RED, pulse.rabi) for n in range(1, dim)])
        theta *= pulse.duration / 2
        g[1:], e[:-1] = _rotate(g[1:], e[:-1], theta, pulse.phase)
    return IonState(g, e)


def inverse_pulse(pulse: PulseSpec) -> PulseSpec:
    """Same duration, phase shifted by pi: undoes ``pulse``."""
    return replace(pulse, phase=pulse.phase + math.pi)


def invert_schedule(schedule: PulseSchedule) -> PulseSchedule:
    return PulseSchedule(tuple(inverse_pulse(p) for p in reversed(schedule.pulses)))


def simulate_schedule(schedule: PulseSchedule | Iterable[PulseSpec], cfg: TrapConfig,
                      start: IonState | None = None, dim: int | None = None) -> IonState:
    pulses = list(schedule)
    if start is None:
        if dim is None:
            reds = [p.index for p in pulses if p.kind == RED]
            dim = max(reds, default=0) + 1
        start = IonState.ground(dim)
    state = start
    for p in pulses:
        state = apply_pulse(state, p, cfg)
    return state


def _solve(coupling: float, theta: float, phase: float) -> tuple[float, float]:
    """Duration and phase realizing rotation angle ``theta`` at signed ``coupling``."""
    if theta == 0:
        return 0.0, phase
    if abs(coupling) < 1e-300:
        raise ValueError("pair is uncoupled (Laguerre zero); cannot rotate it")
    if coupling < 0:
        phase += math.pi
    return 2 * theta / abs(coupling), phase


def synthesize(target: FockVector, cfg: TrapConfig) -> PulseSchedule:
    """Pulse schedule driving |0,g> to target (x) |g> (up to a global phase)."""
    if not math.isclose(target.norm, 1.0, abs_tol=1e-9):
        raise ValueError("target must be normalized")
    m_top = target.support_max()
    if m_top > cfg.m_max:
        raise TrapLimitError(f"target occupies |{m_top}>, above the trap limit |{cfg.m_max}>")
    dim = m_top + 1
    state = IonState.from_motion(target.padded(dim))
    backwards: list[PulseSpec] = []
    elapsed = 0.0
    for m in range(m_top, 0, -1):
        # red sideband: move |m,g> into |m-1,e>
        a, b = state.g[m], state.e[m - 1]
        theta = math.atan2(abs(a), abs(b))
        phase = float(np.angle(b) - np.angle(a) - math.pi / 2) if a != 0 else 0.0
        t, phase = _solve(rabi_coupling(cfg, m, RED), theta, phase)
        red = PulseSpec(RED, phase, t, cfg.omega_r, m)
        state = apply_pulse(state, inverse_pulse(red), cfg)

        # carrier: move |m-1,e> into |m-1,g>
        a, b = state.g[m - 1], state.e[m - 1]
        theta = math.atan2(abs(b), abs(a))
        phase = float(np.angle(b) - np.angle(a) + math.pi / 2) if b != 0 else 0.0
        t_c, phase = _solve(rabi_coupling(cfg, m - 1, CARRIER), theta, phase)
        car = PulseSpec(CARRIER, phase, t_c, cfg.omega_c, m - 1)
        state = apply_pulse(state, inverse_pulse(car), cfg)

        elapsed += t + t_c
        if elapsed > cfg.vib_coherence:
            raise BudgetError(
                f"schedule needs {elapsed:.4g} s, beyond the {cfg.vib_coherence:.4g} s coherence"
            )
        backwards += [red, car]
    return PulseSchedule(tuple(reversed(backwards)))


@dataclass(frozen=True)
class BudgetReport:
    total_s: float
    max_pulse_s: float
    max_level: int
    vib_ok: bool
    elec_ok: bool
    level_ok: bool

    @property
    def ok(self) -> bool:
        return self.vib_ok and self.elec_ok and self.level_ok


def budget_check(schedule: PulseSchedule, cfg: TrapConfig) -> BudgetReport:
    """Total build-up time against the vibrational coherence, the longest single
    pulse against the electronic coherence, and the top level against m_max."""
    total = schedule.total_duration
    longest = max((p.duration for p in schedule), default=0.0)
    level = max((p.index for p in schedule if p.kind == RED), default=0)
    return BudgetReport(total, longest, level, total <= cfg.vib_coherence,
                        longest <= cfg.elec_coherence, level <= cfg.m_max)
