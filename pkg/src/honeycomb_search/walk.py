"""Coined quantum walk on the honeycomb torus and its search variants.

States are flat complex vectors in the layout of :mod:`.lattice`.  The
ancilla-extended (Tulsi) layout prepends one qubit, so its vector reshapes
to ``(2, 3, 2, m, m)`` with the ancilla value outermost.

The public operators return new :class:`WalkState` objects.  The ``*_array``
kernels work in place-free fashion on the reshaped tensors and are what the
search loop calls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .lattice import DIRECTIONS, LatticeConfig, VertexAddress, flat_index

__all__ = [
    "GROVER_COIN",
    "WalkState",
    "SearchTarget",
    "uniform_state",
    "tulsi_initial_state",
    "basis_state",
    "apply_coin",
    "apply_shift",
    "step_unperturbed",
    "apply_oracle",
    "step_search",
    "step_tulsi",
    "marked_probability",
    "target_overlap_sq",
    "default_delta",
    "dense_operator",
    "sample_measurement",
]

GROVER_COIN = (np.full((3, 3), 2.0) - 3.0 * np.eye(3)) / 3.0

_LOG_BASES = {"natural": math.e, "base2": 2.0, "base10": 10.0}


@dataclass(frozen=True)
class SearchTarget:
    """The marked cell; the target ket is uniform over its 6 (j, s) states."""

    n1: int
    n2: int
    cfg: LatticeConfig

    def __post_init__(self):
        self.cfg.check_cell(self.n1, self.n2)

    @property
    def support(self) -> np.ndarray:
        return np.array(
            [
                flat_index(VertexAddress(j, s, self.n1, self.n2), self.cfg)
                for j in range(3)
                for s in range(2)
            ]
        )

    @property
    def weights(self) -> np.ndarray:
        return np.full(6, 1.0 / math.sqrt(6.0))

    def vector(self) -> np.ndarray:
        v = np.zeros(self.cfg.dim, dtype=complex)
        v[self.support] = self.weights
        return v


@dataclass
class WalkState:
    amplitudes: np.ndarray
    cfg: LatticeConfig
    tulsi_mode: bool = False

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        expected = self.cfg.dim * (2 if self.tulsi_mode else 1)
        if self.amplitudes.size != expected:
            raise ValueError(
                f"state has {self.amplitudes.size} amplitudes, expected {expected}"
            )

    @property
    def tensor(self) -> np.ndarray:
        shape = self.cfg.shape
        if self.tulsi_mode:
            shape = (2,) + shape
        return self.amplitudes.reshape(shape)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def _derive(self, tensor: np.ndarray) -> "WalkState":
        return WalkState(tensor.reshape(-1), self.cfg, self.tulsi_mode)


def _require_plain(state: WalkState) -> None:
    if state.tulsi_mode:
        raise ValueError("operator acts on the plain walk register; got an ancilla-extended state")


def uniform_state(cfg: LatticeConfig) -> WalkState:
    amps = np.full(cfg.dim, 1.0 / math.sqrt(cfg.dim), dtype=complex)
    return WalkState(amps, cfg)


def tulsi_initial_state(cfg: LatticeConfig, ancilla: int = 1) -> WalkState:
    """Ancilla in ``|ancilla>`` tensored with the uniform walk state."""
    if ancilla not in (0, 1):
        raise ValueError("ancilla must be 0 or 1")
    amps = np.zeros((2, cfg.dim), dtype=complex)
    amps[ancilla] = 1.0 / math.sqrt(cfg.dim)
    return WalkState(amps.reshape(-1), cfg, tulsi_mode=True)


def basis_state(addr: VertexAddress, cfg: LatticeConfig) -> WalkState:
    amps = np.zeros(cfg.dim, dtype=complex)
    amps[flat_index(addr, cfg)] = 1.0
    return WalkState(amps, cfg)


# --- tensor kernels -------------------------------------------------------
# Leading axes beyond (3, 2, m, m) are batch axes (e.g. the ancilla).


def coin_array(x: np.ndarray) -> np.ndarray:
    # G3 = (2/3) J - I applied along the coin axis
    return (2.0 / 3.0) * x.sum(axis=-4, keepdims=True) - x


def shift_array(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    for j, (a, b) in enumerate(DIRECTIONS):
        # (j, 0, n) -> (j, 1, n - v_j) and (j, 1, n) -> (j, 0, n + v_j)
        out[..., j, 1, :, :] = np.roll(x[..., j, 0, :, :], (-a, -b), axis=(-2, -1))
        out[..., j, 0, :, :] = np.roll(x[..., j, 1, :, :], (a, b), axis=(-2, -1))
    return out


def walk_array(x: np.ndarray) -> np.ndarray:
    return shift_array(coin_array(x))


def oracle_array(x: np.ndarray, n1: int, n2: int) -> np.ndarray:
    out = x.copy()
    cell = out[..., n1, n2]
    # psi - 2 <t|psi> t, with t uniform 1/sqrt(6) on the cell
    cell -= cell.sum(axis=(-2, -1), keepdims=True) / 3.0
    return out


def tulsi_array(
    x: np.ndarray, n1: int, n2: int, delta: float, oracle_control: int = 0
) -> np.ndarray:
    c, s = math.cos(delta), math.sin(delta)
    # X_delta on the ancilla
    y = [c * x[0] + s * x[1], -s * x[0] + c * x[1]]
    y[oracle_control] = oracle_array(y[oracle_control], n1, n2)
    # X_delta^dagger
    z0 = c * y[0] - s * y[1]
    z1 = s * y[0] + c * y[1]
    z1 = walk_array(z1)
    # -Z on the ancilla
    return np.stack([-z0, z1])


# --- state-level operators -------------------------------------------------


def apply_coin(state: WalkState) -> WalkState:
    _require_plain(state)
    return state._derive(coin_array(state.tensor))


def apply_shift(state: WalkState) -> WalkState:
    _require_plain(state)
    return state._derive(shift_array(state.tensor))


def step_unperturbed(state: WalkState) -> WalkState:
    """One step of ``U = S (G3 x I)``."""
    _require_plain(state)
    return state._derive(walk_array(state.tensor))


def apply_oracle(state: WalkState, target: SearchTarget) -> WalkState:
    """Reflection ``I - 2|t><t|`` about the marked-cell target."""
    _require_plain(state)
    return state._derive(oracle_array(state.tensor, target.n1, target.n2))


def step_search(state: WalkState, target: SearchTarget) -> WalkState:
    """One step of ``U R_t``: oracle first, then the walk."""
    _require_plain(state)
    return state._derive(walk_array(oracle_array(state.tensor, target.n1, target.n2)))


def step_tulsi(
    state: WalkState, target: SearchTarget, delta: float, oracle_control: int = 0
) -> WalkState:
    """One step of the ancilla-extended search.

    Circuit order: ``X_delta`` on the ancilla, ``R_t`` on the walk register
    controlled by ancilla value ``oracle_control``, ``X_delta^dagger``, ``U``
    controlled by ancilla ``|1>``, then ``-Z`` on the ancilla.

    With the default ``oracle_control=0`` the reflected target is mostly the
    idle ancilla branch and ``delta`` is the small coupling to the walk, which
    is the regime where the final overlap stays O(1).  ``oracle_control=1``
    gives the variant whose ``delta -> 0`` limit is plain :func:`step_search`.
    """
    if not state.tulsi_mode:
        raise ValueError("step_tulsi needs an ancilla-extended state")
    if not (0.0 <= delta <= math.pi / 2):
        raise ValueError(f"delta must lie in [0, pi/2], got {delta}")
    if oracle_control not in (0, 1):
        raise ValueError("oracle_control must be 0 or 1")
    return state._derive(tulsi_array(state.tensor, target.n1, target.n2, delta, oracle_control))


def marked_probability(state: WalkState, target: SearchTarget) -> float:
    """Probability that a position measurement lands in the marked cell.

    Sums ``|amplitude|**2`` over the 6 support states (both ancilla branches
    in Tulsi mode).
    """
    cell = state.tensor[..., target.n1, target.n2]
    return float(np.sum(np.abs(cell) ** 2))


def target_overlap_sq(state: WalkState, target: SearchTarget) -> float:
    """``|<t|psi>|**2``, summed over ancilla branches in Tulsi mode."""
    cell = state.tensor[..., target.n1, target.n2]
    amp = cell.sum(axis=(-2, -1)) / math.sqrt(6.0)
    return float(np.sum(np.abs(amp) ** 2))


def default_delta(N: int, log_base: str = "natural") -> float:
    """``1 / sqrt(log N)`` in the requested base."""
    try:
        base = _LOG_BASES[log_base]
    except KeyError:
        raise ValueError(f"unknown log base {log_base!r}; use one of {sorted(_LOG_BASES)}") from None
    return 1.0 / math.sqrt(math.log(N, base))


def dense_operator(
    step: Callable[[WalkState], WalkState], cfg: LatticeConfig, tulsi_mode: bool = False
) -> np.ndarray:
    """Matrix of ``step`` built by applying it to every basis vector."""
    dim = cfg.dim * (2 if tulsi_mode else 1)
    mat = np.empty((dim, dim), dtype=complex)
    for i in range(dim):
        e = np.zeros(dim, dtype=complex)
        e[i] = 1.0
        mat[:, i] = step(WalkState(e, cfg, tulsi_mode)).amplitudes
    return mat


def sample_measurement(state: WalkState, shots: int = 1, seed: int | None = None) -> np.ndarray:
    """Sample flat basis indices from ``|psi|**2`` (demonstration only)."""
    if shots < 1:
        raise ValueError("shots must be positive")
    p = np.abs(state.amplitudes) ** 2
    rng = np.random.default_rng(seed)
    return rng.choice(p.size, size=shots, p=p / p.sum())


