"""Reciprocal-space analysis of the honeycomb walk.

The walk operator is block diagonal in momentum space: every k-point carries
a 6x6 block over the (j, s) states, ordered ``(0,0), (0,1), (1,0), (1,1),
(2,0), (2,1)``.  The block eigenvalues are ``+1, -1`` and ``+-exp(+-i theta_k)``.
From ``theta_k`` and the target amplitudes ``a_k^+-`` follow two sums over the
nonzero k-points:

* ``A``, whose square root sets the number of search iterations, and
* ``B``, the inverse squared overlap reached at the end of the search.

All sums are exact finite sums over the ``m x m`` grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lattice import KPoint, LatticeConfig

__all__ = [
    "SpectralAnalysisError",
    "DegenerateKPointError",
    "KBlock",
    "KSpectrum",
    "SpectralSums",
    "SpectralSummary",
    "build_kblock",
    "theta_of_k",
    "sin2_theta_of_k",
    "nu_eigenvectors",
    "amplitudes_of_k",
    "kspectrum",
    "spectral_sums",
    "compute_A",
    "compute_B",
    "predict",
    "spectrum_table",
]

COS_THETA_EPS = 1e-12
NUMERATOR_EPS = 1e-10
SIN2_EXCLUDE = 1e-14
A_RTOL = 1e-8
B_ATOL = 1e-10


class SpectralAnalysisError(ArithmeticError):
    """A spectral quantity is singular or two of its closed forms disagree."""


class DegenerateKPointError(ValueError):
    """The requested construction does not exist at k = (0, 0)."""


@dataclass(frozen=True)
class KBlock:
    k: KPoint
    matrix: np.ndarray


@dataclass(frozen=True)
class KSpectrum:
    k: KPoint
    theta: float
    a_plus: float
    a_minus: float

    @property
    def eigenvalues(self) -> np.ndarray:
        e = np.exp(1j * self.theta)
        return np.array([1.0, -1.0, e, e.conjugate(), -e, -e.conjugate()])


@dataclass(frozen=True)
class SpectralSums:
    """Both closed forms of A and B plus bookkeeping for singular terms."""

    cfg: LatticeConfig
    A_spectral: float
    A_reduced: float
    B_spectral: float
    B_reduced: float
    excluded: int
    minus_one_overlap: float


@dataclass(frozen=True)
class SpectralSummary:
    cfg: LatticeConfig
    A: float
    B: float
    a0: float
    alpha: float
    predicted_steps: int
    predicted_overlap_sq: float
    excluded: int = 0

    def as_row(self) -> dict:
        return {
            "m": self.cfg.m,
            "N": self.cfg.N,
            "a0": self.a0,
            "A": self.A,
            "B": self.B,
            "T": self.predicted_steps,
            "overlap_sq": self.predicted_overlap_sq,
        }


def build_kblock(k: KPoint) -> KBlock:
    """The 6x6 reduced walk operator at ``k``."""
    w1 = k.omega_power(k.k1)
    w2 = k.omega_power(k.k2)
    a, b = -1.0 / 3.0, 2.0 / 3.0
    u = np.array(
        [
            [0, a, 0, b, 0, b],
            [a, 0, b, 0, b, 0],
            [0, b * w1, 0, a * w1, 0, b * w1],
            [b / w1, 0, a / w1, 0, b / w1, 0],
            [0, b * w2, 0, b * w2, 0, a * w2],
            [b / w2, 0, b / w2, 0, a / w2, 0],
        ],
        dtype=complex,
    )
    return KBlock(k, u)


def _cos_sum(kt1, kt2):
    return np.cos(kt1) + np.cos(kt2) + np.cos(kt1 - kt2)


def theta_of_k(k: KPoint) -> float:
    c2 = 4.0 / 9.0 * _cos_sum(k.ktilde1, k.ktilde2) - 1.0 / 3.0
    return 0.5 * math.acos(min(1.0, max(-1.0, c2)))


def sin2_theta_of_k(k: KPoint) -> float:
    return 2.0 / 3.0 - 2.0 / 9.0 * _cos_sum(k.ktilde1, k.ktilde2)


def _nu_components(w1, w2, sign):
    return np.array(
        [
            sign * (w1 - w2),
            w2 - w1,
            sign * w1 * (w2 - 1),
            1 - w2,
            sign * w2 * (1 - w1),
            w1 - 1,
        ]
    )


def nu_eigenvectors(k: KPoint) -> tuple[np.ndarray, np.ndarray]:
    """Normalized eigenvectors of the block for eigenvalues +1 and -1."""
    if k.is_origin:
        raise DegenerateKPointError("the +-1 eigenvectors are degenerate at k = (0, 0)")
    w1 = k.omega_power(k.k1)
    w2 = k.omega_power(k.k2)
    plus, minus = (_nu_components(w1, w2, sign) for sign in (1.0, -1.0))
    return plus / np.linalg.norm(plus), minus / np.linalg.norm(minus)


def _amplitudes(kt1, kt2, cos_theta):
    """Vectorized ``a^+-``; entries with singular ``cos_theta`` handled."""
    kt1, kt2, cos_theta = np.broadcast_arrays(
        np.asarray(kt1, float), np.asarray(kt2, float), np.asarray(cos_theta, float)
    )
    num = 1.0 + np.cos(kt1) + np.cos(kt2)
    singular = np.abs(cos_theta) < COS_THETA_EPS
    if np.any(singular & (np.abs(num) >= NUMERATOR_EPS)):
        raise SpectralAnalysisError(
            "cos(theta_k) vanishes with a nonzero amplitude numerator; "
            "the target amplitudes are undefined at this k-point"
        )
    ratio = np.where(singular, 0.0, num / np.where(singular, 1.0, 3.0 * cos_theta))
    plus, minus = 1.0 + ratio, 1.0 - ratio
    # near the Dirac points |ratio| -> 1 while cos(theta) -> 0, so the
    # rounding error of the ratio grows like eps / cos^2(theta)
    tol = 1e-12 + 8.0 * np.finfo(float).eps / np.maximum(cos_theta**2, 1e-300)
    if np.any(plus < -tol) or np.any(minus < -tol):
        raise SpectralAnalysisError("target amplitudes are not real at some k-point")
    a_plus = 0.5 * np.sqrt(np.clip(plus, 0.0, None))
    a_minus = 0.5 * np.sqrt(np.clip(minus, 0.0, None))
    return a_plus, a_minus


def amplitudes_of_k(k: KPoint) -> tuple[float, float]:
    if k.is_origin:
        raise DegenerateKPointError("target amplitudes a^+- are defined for k != (0, 0)")
    a_plus, a_minus = _amplitudes(k.ktilde1, k.ktilde2, math.cos(theta_of_k(k)))
    return float(a_plus), float(a_minus)


def kspectrum(k: KPoint) -> KSpectrum:
    theta = theta_of_k(k)
    if k.is_origin:
        return KSpectrum(k, theta, float("nan"), float("nan"))
    a_plus, a_minus = amplitudes_of_k(k)
    return KSpectrum(k, theta, a_plus, a_minus)


def _grid(cfg: LatticeConfig):
    k = np.arange(cfg.m)
    k1, k2 = np.meshgrid(k, k, indexing="ij")
    k1, k2 = k1.ravel(), k2.ravel()
    kt1 = 2.0 * np.pi * k1 / cfg.m
    kt2 = 2.0 * np.pi * k2 / cfg.m
    s = _cos_sum(kt1, kt2)
    theta = 0.5 * np.arccos(np.clip(4.0 / 9.0 * s - 1.0 / 3.0, -1.0, 1.0))
    sin2 = 2.0 / 3.0 - 2.0 / 9.0 * s
    return k1, k2, kt1, kt2, theta, sin2


def _minus_one_overlap(cfg: LatticeConfig) -> float:
    # |<u|nu^-_k>| for every k != 0, computed from the eigenvectors themselves
    k1, k2 = np.divmod(np.arange(1, cfg.m * cfg.m), cfg.m)
    w1 = np.exp(2j * np.pi * k1 / cfg.m)
    w2 = np.exp(2j * np.pi * k2 / cfg.m)
    v = _nu_components(w1, w2, -1.0)
    v = v / np.linalg.norm(v, axis=0)
    return float(np.abs(v.sum(axis=0)).max() / math.sqrt(6.0))


def spectral_sums(cfg: LatticeConfig) -> SpectralSums:
    """Evaluate A and B in both of their closed forms.

    Raises :class:`SpectralAnalysisError` if the forms disagree (A beyond
    1e-8 relative, B beyond 1e-10) or a target amplitude is singular.
    Terms with ``sin^2 theta_k < 1e-14`` at ``k != 0`` are dropped and counted.
    """
    k1, k2, kt1, kt2, theta, sin2 = _grid(cfg)
    nonzero = ~((k1 == 0) & (k2 == 0))
    keep = nonzero & (sin2 >= SIN2_EXCLUDE)
    excluded = int(np.count_nonzero(nonzero & ~keep))

    kt1, kt2, theta, sin2 = kt1[keep], kt2[keep], theta[keep], sin2[keep]
    cos_t = np.cos(theta)
    a_plus, a_minus = _amplitudes(kt1, kt2, cos_t)

    A_spec = float(np.sum(a_plus**2 / (1.0 - cos_t) + a_minus**2 / (1.0 + cos_t)))
    A_red = float(np.sum((4.0 + np.cos(kt1) + np.cos(kt2)) / sin2) / 6.0)
    cot2 = 1.0 / np.tan(theta / 4.0) ** 2
    B_spec = float(2.0 / cfg.N * np.sum((a_plus**2 + a_minus**2) * cot2))
    B_red = float(np.sum(cot2) / cfg.N)

    if abs(A_spec - A_red) > A_RTOL * abs(A_red):
        raise SpectralAnalysisError(f"A forms disagree: {A_spec!r} vs {A_red!r}")
    if abs(B_spec - B_red) > B_ATOL:
        raise SpectralAnalysisError(f"B forms disagree: {B_spec!r} vs {B_red!r}")
    return SpectralSums(cfg, A_spec, A_red, B_spec, B_red, excluded, _minus_one_overlap(cfg))


def compute_A(cfg: LatticeConfig) -> float:
    return spectral_sums(cfg).A_spectral


def compute_B(cfg: LatticeConfig) -> float:
    return spectral_sums(cfg).B_spectral


def predict(cfg: LatticeConfig) -> SpectralSummary:
    """Predicted iteration count and final squared overlap.

    The rotation per step is ``alpha = 1/sqrt(A)``: the full-space amplitudes
    carry a factor ``sqrt(2/N) = a0`` relative to ``a_k^+-``, which cancels
    the ``a0`` prefactor.  Big-O constants are taken as 1, so both numbers
    are order-of-magnitude estimates.
    """
    sums = spectral_sums(cfg)
    A, B = sums.A_spectral, sums.B_spectral
    alpha = 1.0 / math.sqrt(A)
    steps = max(1, round(math.pi / (2.0 * alpha)))
    return SpectralSummary(
        cfg=cfg,
        A=A,
        B=B,
        a0=math.sqrt(2.0 / cfg.N),
        alpha=alpha,
        predicted_steps=int(steps),
        predicted_overlap_sq=min(1.0, 1.0 / B),
        excluded=sums.excluded,
    )


def spectrum_table(cfg: LatticeConfig) -> dict[str, np.ndarray]:
    """Per-k columns ``k1, k2, theta, a_plus, a_minus, degenerate``.

    ``a_plus``/``a_minus`` are NaN at k = (0, 0), which is flagged degenerate,
    as is any k-point excluded from the sums.
    """
    k1, k2, kt1, kt2, theta, sin2 = _grid(cfg)
    degenerate = ((k1 == 0) & (k2 == 0)) | (sin2 < SIN2_EXCLUDE)
    a_plus = np.full(k1.shape, np.nan)
    a_minus = np.full(k1.shape, np.nan)
    ok = ~degenerate
    a_plus[ok], a_minus[ok] = _amplitudes(kt1[ok], kt2[ok], np.cos(theta[ok]))
    return {
        "k1": k1,
        "k2": k2,
        "theta": theta,
        "a_plus": a_plus,
        "a_minus": a_minus,
        "degenerate": degenerate.astype(int),
    }
