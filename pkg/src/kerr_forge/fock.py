"""Finite Fock-space states: coherent and Kerr states, truncation, displacement."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln
from scipy.stats import poisson

TAIL_TOL = 1e-10
DISPLACE_TAIL_TOL = 1e-8


class CutoffError(ValueError):
    """The Fock cutoff is too small for the requested operation."""


@dataclass(frozen=True, eq=False)
class FockVector:
    """Pure state as complex amplitudes over |0>..|dim-1>.

    The amplitude array is copied and made read-only on construction.
    """

    amps: np.ndarray

    def __post_init__(self):
        a = np.array(self.amps, dtype=complex, copy=True).reshape(-1)
        if a.size < 1:
            raise ValueError("FockVector needs dim >= 1")
        a.setflags(write=False)
        object.__setattr__(self, "amps", a)

    @property
    def dim(self) -> int:
        return self.amps.size

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def normalize(self) -> FockVector:
        n = self.norm
        if n == 0:
            raise ValueError("cannot normalize the zero vector")
        return FockVector(self.amps / n)

    def padded(self, dim: int) -> FockVector:
        """Zero-extend (or truncate) to ``dim`` levels."""
        out = np.zeros(dim, dtype=complex)
        k = min(dim, self.dim)
        out[:k] = self.amps[:k]
        return FockVector(out)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def tail_mass(self, start: int) -> float:
        """Probability carried by levels n >= start."""
        return float(np.sum(self.probabilities()[max(start, 0):]))

    def support_max(self, tol: float = 0.0) -> int:
        """Highest level with |c_n| > tol (0 for the zero vector)."""
        nz = np.nonzero(np.abs(self.amps) > tol)[0]
        return int(nz[-1]) if nz.size else 0

    @classmethod
    def basis(cls, n: int, dim: int) -> FockVector:
        a = np.zeros(dim, dtype=complex)
        a[n] = 1.0
        return cls(a)


@dataclass(frozen=True)
class KerrParams:
    alpha: complex
    tau: float
    m_cut: int | None = None

    def __post_init__(self):
        if self.m_cut is not None and self.m_cut < 0:
            raise ValueError("m_cut must be >= 0")


def default_dim(alpha: complex) -> int:
    """Cutoff keeping the coherent-state tail below 1e-10 for |alpha| <= 5."""
    r = abs(alpha)
    return int(math.ceil(r * r + 8 * r + 10))


def _log_sqrt_factorial(n: np.ndarray) -> np.ndarray:
    return 0.5 * gammaln(n + 1.0)


def poisson_amplitudes(alpha: complex, n: np.ndarray) -> np.ndarray:
    """alpha^n / sqrt(n!) without the e^{-|alpha|^2/2} prefactor."""
    n = np.asarray(n)
    if alpha == 0:
        return (n == 0).astype(complex)
    r, phi = abs(alpha), np.angle(alpha)
    mag = np.exp(n * math.log(r) - _log_sqrt_factorial(n))
    return mag * np.exp(1j * phi * n)


def coherent_tail(alpha: complex, dim: int) -> float:
    """Poisson mass of a coherent state on levels n >= dim."""
    return float(poisson.sf(dim - 1, abs(alpha) ** 2))


def coherent_state(alpha: complex, dim: int | None = None) -> FockVector:
    if dim is None:
        dim = default_dim(alpha)
    if dim < 1:
        raise CutoffError("dim must be >= 1")
    tail = coherent_tail(alpha, dim)
    if tail >= TAIL_TOL:
        raise CutoffError(
            f"dim={dim} leaves tail mass {tail:.2e} for |alpha|={abs(alpha):.3g}; "
            f"use dim >= {default_dim(alpha)}"
        )
    n = np.arange(dim)
    c = math.exp(-abs(alpha) ** 2 / 2) * poisson_amplitudes(alpha, n)
    return FockVector(c).normalize()


def kerr_phases(dim: int, tau: float) -> np.ndarray:
    """e^{i tau n(n-1)/2} for n < dim; tau is reduced mod 2pi first (n(n-1)/2 is integral)."""
    k = np.arange(dim) * (np.arange(dim) - 1) // 2
    return np.exp(1j * math.fmod(tau, 2 * math.pi) * k)


def apply_kerr_phase(state: FockVector, tau: float) -> FockVector:
    return FockVector(state.amps * kerr_phases(state.dim, tau))


def kerr_state(alpha: complex, tau: float, dim: int | None = None) -> FockVector:
    """Untruncated Kerr state (coherent state with Fock phases) at the cutoff."""
    return apply_kerr_phase(coherent_state(alpha, dim), tau)


def partial_exp_sum(alpha: complex, m_cut: int) -> float:
    """S_M = sum_{k<=M} |alpha|^{2k}/k!."""
    k = np.arange(m_cut + 1)
    x = abs(alpha) ** 2
    if x == 0:
        return 1.0
    return float(np.sum(np.exp(k * math.log(x) - gammaln(k + 1.0))))


def truncated_kerr_state(p: KerrParams, dim: int | None = None) -> FockVector:
    if p.m_cut is None:
        raise ValueError("truncated_kerr_state needs m_cut")
    if dim is None:
        dim = p.m_cut + 1
    if p.m_cut >= dim:
        raise CutoffError(f"m_cut={p.m_cut} must be < dim={dim}")
    n = np.arange(p.m_cut + 1)
    c = poisson_amplitudes(p.alpha, n) / math.sqrt(partial_exp_sum(p.alpha, p.m_cut))
    c = c * kerr_phases(p.m_cut + 1, p.tau)
    return FockVector(c).padded(dim)


def fidelity_paper(alpha: complex, m_cut: int) -> float:
    """Truncation fidelity in the printed closed form e^{-2|a|^2} S_M^2."""
    if m_cut < 0:
        raise ValueError("m_cut must be >= 0")
    s = partial_exp_sum(alpha, m_cut)
    return math.exp(-2 * abs(alpha) ** 2) * s * s


def fidelity_normalized(alpha: complex, m_cut: int) -> float:
    """|<Psi^(M)|Psi>|^2 with the normalized truncated state: e^{-|a|^2} S_M."""
    if m_cut < 0:
        raise ValueError("m_cut must be >= 0")
    return math.exp(-abs(alpha) ** 2) * partial_exp_sum(alpha, m_cut)


def overlap(a: FockVector, b: FockVector) -> complex:
    """<a|b>, zero-padding the shorter vector."""
    d = max(a.dim, b.dim)
    return complex(np.vdot(a.padded(d).amps, b.padded(d).amps))


def fidelity(a: FockVector, b: FockVector) -> float:
    """Phase-insensitive |<a|b>|^2."""
    return abs(overlap(a, b)) ** 2


def annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)


def displace(state: FockVector, beta: complex, pad: int | None = None) -> FockVector:
    """D(beta)|state> via the matrix exponential of (beta a^+ - beta^* a).

    The exponential is taken in an enlarged basis and projected back; both the
    input tail and the leaked mass past the cutoff are checked.
    """
    if beta == 0:
        return state
    reach = int(math.ceil(8 * abs(beta)))
    tail = state.tail_mass(state.dim - reach)
    if tail >= DISPLACE_TAIL_TOL:
        raise CutoffError(
            f"state has mass {tail:.2e} in the top {reach} levels; raise the cutoff"
        )
    if pad is None:
        pad = reach + 10
    big = state.dim + pad
    a = annihilation(big)
    gen = beta * a.conj().T - np.conj(beta) * a
    out = expm(gen) @ state.padded(big).amps
    leak = float(np.sum(np.abs(out[state.dim:]) ** 2))
    if leak >= DISPLACE_TAIL_TOL:
        raise CutoffError(f"displacement leaks {leak:.2e} past dim={state.dim}")
    return FockVector(out[: state.dim])


def significant_range(alpha: complex, threshold: float) -> tuple[int, int]:
    """Smallest and largest n with |w_n| >= threshold for the untruncated state."""
    if not 0 < threshold < 1:
        raise ValueError("threshold must lie in (0, 1)")
    r2 = abs(alpha) ** 2
    # coefficients are unimodal with peak near |alpha|^2; scan well past it
    n_hi = int(r2 + 12 * math.sqrt(r2 + 1) + 40)
    n = np.arange(n_hi)
    if alpha == 0:
        logc = np.where(n == 0, 0.0, -np.inf)
    else:
        logc = n * math.log(abs(alpha)) - 0.5 * gammaln(n + 1.0) - r2 / 2
    idx = np.nonzero(logc >= math.log(threshold))[0]
    if idx.size == 0:
        raise ValueError("no coefficient reaches the threshold")
    return int(idx[0]), int(idx[-1])
