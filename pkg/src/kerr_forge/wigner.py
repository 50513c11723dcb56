"""Wigner functions of pure Fock superpositions and truncation-quality criteria.

Phase-space convention: gamma = x + i p with the coherent state |alpha> mapped
to the Gaussian (2/pi) exp(-2|gamma - alpha|^2).  The "normalized" field is
(pi/2) W, whose ideal peak is 1.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import map_coordinates
from scipy.special import gammaln

from .fock import FockVector, KerrParams, fidelity_paper, kerr_state, truncated_kerr_state, default_dim

LEVELS = (0.1, 0.3, 0.5)
PRECISIONS = (1e-2, 1e-3)
N_RAYS = 720


class IsolineError(ValueError):
    """The requested level set is empty or not star-shaped about the center."""


class GridMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Region:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_max > self.re_min and self.im_max > self.im_min):
            raise ValueError(f"degenerate region {self}")

    @classmethod
    def square(cls, center: complex, half_width: float) -> Region:
        c = complex(center)
        return cls(c.real - half_width, c.real + half_width,
                   c.imag - half_width, c.imag + half_width)


REFERENCE_REGION = Region.square(2.0, 2.0)
REFERENCE_STEP = 0.04


def _axis(lo: float, hi: float, step: float) -> np.ndarray:
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(n)


@dataclass(frozen=True, eq=False)
class WignerField:
    """W sampled on a rectangular grid; ``values[i, j]`` sits at (re[j], im[i])."""

    region: Region
    step: float
    values: np.ndarray

    re: np.ndarray = field(init=False, repr=False)
    im: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError("step must be positive")
        re = _axis(self.region.re_min, self.region.re_max, self.step)
        im = _axis(self.region.im_min, self.region.im_max, self.step)
        v = np.asarray(self.values, dtype=float)
        if v.shape != (im.size, re.size):
            raise ValueError(f"values shape {v.shape} != grid {(im.size, re.size)}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    @property
    def normalized(self) -> np.ndarray:
        return (np.pi / 2) * self.values

    def integral(self) -> float:
        return float(self.values.sum() * self.step ** 2)

    def same_grid(self, other: WignerField) -> bool:
        return (self.values.shape == other.values.shape
                and np.allclose(self.re, other.re) and np.allclose(self.im, other.im))


def laguerre_assoc(n: int, k: float, x):
    """Associated Laguerre polynomial L_n^k(x) by the three-term recurrence."""
    if n < 0:
        raise ValueError("n must be >= 0")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + k - x
    for m in range(1, n):
        prev, cur = cur, ((2 * m + 1 + k - x) * cur - (m + k) * prev) / (m + 1)
    return cur if np.ndim(cur) else float(cur)


def _wigner_values(amps: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    """(2/pi) sum_{m<=n} w Re[c_m c_n^* (-1)^m l_m^k(gamma)], k = n - m.

    l_m^k = sqrt(m!/n!) (2 gamma)^k e^{-|2 gamma|^2/2} L_m^k(|2 gamma|^2) is
    generated by a recurrence in m that carries the sqrt-factorial scaling,
    so nothing overflows for large n.
    """
    g = np.asarray(gamma, dtype=complex)
    x = np.abs(2 * g) ** 2
    with np.errstate(divide="ignore"):
        log_r = np.log(np.abs(2 * g))
    phase = np.exp(1j * np.angle(g))
    nz = np.nonzero(np.abs(amps) > 0)[0]
    dim = int(nz[-1]) + 1 if nz.size else 1
    c = amps[:dim]
    out = np.zeros(g.shape)
    for k in range(dim):
        # l_0^k: e^{-x/2} (2|g|)^k / sqrt(k!) times e^{i k arg g}
        if k == 0:
            l0 = np.exp(-x / 2)
        else:
            l0 = np.exp(k * log_r - x / 2 - 0.5 * gammaln(k + 1.0))
        l_prev = np.zeros_like(x)
        l_cur = l0
        coef_sum = np.zeros(g.shape, dtype=complex)
        for m in range(dim - k):
            rho = c[m] * np.conj(c[m + k])
            if rho != 0:
                coef_sum += ((-1) ** m) * rho * l_cur
            if m + 1 < dim - k:
                # (m+1) L_{m+1} = (2m+1+k-x) L_m - (m+k) L_{m-1}, rescaled
                a = (2 * m + 1 + k - x) * math.sqrt((m + 1) / (m + k + 1))
                b = (m + k) * math.sqrt(m * (m + 1) / ((m + k) * (m + k + 1))) if m > 0 else 0.0
                l_prev, l_cur = l_cur, (a * l_cur - b * l_prev) / (m + 1)
        term = (coef_sum * phase ** k).real
        out += term if k == 0 else 2 * term
    return (2 / np.pi) * out


def wigner_point(state: FockVector, gamma: complex) -> float:
    return float(_wigner_values(state.amps, np.asarray(gamma)))


def coherent_wigner(alpha: complex, gamma):
    return (2 / np.pi) * np.exp(-2 * np.abs(np.asarray(gamma) - alpha) ** 2)


def _grid_gamma(region: Region, step: float) -> np.ndarray:
    re = _axis(region.re_min, region.re_max, step)
    im = _axis(region.im_min, region.im_max, step)
    return re[None, :] + 1j * im[:, None]


def wigner_grid(state: FockVector, region: Region, step: float,
                workers: int = 1) -> WignerField:
    """Evaluate W on the grid; rows may be split across threads (same result)."""
    if step <= 0:
        raise ValueError("step must be positive")
    g = _grid_gamma(region, step)
    if workers > 1 and g.shape[0] > 1:
        chunks = np.array_split(np.arange(g.shape[0]), workers)
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda rows: _wigner_values(state.amps, g[rows]), chunks))
        vals = np.vstack(parts)
    else:
        vals = _wigner_values(state.amps, g)
    return WignerField(region, step, vals)


def coherent_grid(alpha: complex, region: Region, step: float) -> WignerField:
    """Analytic Gaussian field of |alpha> (the exact Kerr field at tau = 2pi k)."""
    return WignerField(region, step, coherent_wigner(alpha, _grid_gamma(region, step)))


def isoline_ratio(fld: WignerField, level: float, center: complex,
                  n_rays: int = N_RAYS, dr: float | None = None) -> float:
    """Most/least distant point of the normalized level set, seen from ``center``.

    Each ray is sampled with bilinear interpolation of the grid and the first
    downward crossing of ``level`` is located by linear interpolation.
    """
    f = fld.normalized
    if not (f.max() > level > f.min()):
        raise IsolineError(f"level {level} does not cross the field")
    center = complex(center)
    reach = min(center.real - fld.re[0], fld.re[-1] - center.real,
                center.imag - fld.im[0], fld.im[-1] - center.imag)
    if reach <= 0:
        raise IsolineError("center lies outside the field")
    if dr is None:
        dr = fld.step / 20
    r = np.arange(0.0, reach, dr)
    th = np.linspace(0.0, 2 * np.pi, n_rays, endpoint=False)
    px = (center.real + np.outer(np.cos(th), r) - fld.re[0]) / fld.step
    py = (center.imag + np.outer(np.sin(th), r) - fld.im[0]) / fld.step
    v = map_coordinates(f, [py.ravel(), px.ravel()], order=1).reshape(px.shape)
    if np.any(v[:, 0] < level):
        raise IsolineError("center lies outside the level set")
    dist = np.empty(n_rays)
    for i in range(n_rays):
        below = np.nonzero(v[i] < level)[0]
        if below.size == 0:
            raise IsolineError("level set reaches the field boundary")
        j = below[0]
        if np.any(v[i, j:] >= level):
            raise IsolineError("level set is not star-shaped about the center")
        t = (v[i, j - 1] - level) / (v[i, j - 1] - v[i, j])
        dist[i] = r[j - 1] + t * dr
    return float(dist.max() / dist.min())


def _check_grids(a: WignerField, b: WignerField):
    if not a.same_grid(b):
        raise GridMismatch("fields do not share region and step")


def error_stats(approx: WignerField, exact: WignerField,
                floor: float | None = None) -> tuple[float, float]:
    """Maximal and average relative error of ``approx``.

    Default (``floor=None``): (pi/2)|W - W^(M)|, the difference measured in units
    of the ideal peak value 2/pi.  With a ``floor``, the pointwise ratio
    |W - W^(M)| / W over nodes whose normalized exact value is >= floor.
    """
    _check_grids(approx, exact)
    diff = np.abs(approx.values - exact.values)
    if floor is None:
        rel = (np.pi / 2) * diff
    else:
        mask = exact.normalized >= floor
        if not mask.any():
            raise ValueError("no grid node above the floor")
        rel = diff[mask] / exact.values[mask]
    return float(rel.max()), float(rel.mean())


def agreement_fraction(approx: WignerField, exact: WignerField, precision: float) -> float:
    """Fraction of nodes where the raw Wigner values agree to ``precision``."""
    _check_grids(approx, exact)
    if precision <= 0:
        raise ValueError("precision must be positive")
    return float(np.mean(np.abs(approx.values - exact.values) <= precision))


@dataclass(frozen=True)
class CriteriaReport:
    alpha: complex
    tau: float
    m_cut: int
    isoline_ratios: dict
    max_rel_err: float
    avg_rel_err: float
    agreement: dict
    fidelity: float


def exact_field(alpha: complex, tau: float, region: Region, step: float) -> WignerField:
    if math.isclose(math.fmod(tau, 2 * math.pi), 0.0, abs_tol=1e-12):
        return coherent_grid(alpha, region, step)
    return wigner_grid(kerr_state(alpha, tau, default_dim(alpha)), region, step)


def criteria_report(alpha: complex, tau: float, m_cut: int,
                    region: Region | None = None, step: float = REFERENCE_STEP,
                    levels=LEVELS, precisions=PRECISIONS,
                    floor: float | None = None) -> CriteriaReport:
    """All three criteria plus the closed-form fidelity for one (alpha, tau, M).

    The default region is the square of half-width 2 about alpha.
    """
    if region is None:
        region = Region.square(alpha, 2.0)
    approx = wigner_grid(truncated_kerr_state(KerrParams(alpha, tau, m_cut)), region, step)
    exact = exact_field(alpha, tau, region, step)
    center = complex(alpha)
    ratios = {}
    for lv in levels:
        ratios[lv] = isoline_ratio(approx, lv, center)
    mx, avg = error_stats(approx, exact, floor)
    agree = {p: agreement_fraction(approx, exact, p) for p in precisions}
    return CriteriaReport(alpha, tau, m_cut, ratios, mx, avg, agree,
                          fidelity_paper(alpha, m_cut))
