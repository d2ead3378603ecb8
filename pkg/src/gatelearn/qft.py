"""Banded quantum Fourier transform with trainable controlled-phase angles.

The textbook Fourier circuit applies, per qubit, a Hadamard followed by
controlled phase gates whose standard angles pi/2^j fall off with the
qubit separation j, and finishes with a bit-reversal swap so the whole
circuit equals the DFT matrix F[j,k] = e^{2 pi i jk / 2^n} / sqrt(2^n).
The banded variant keeps only gates with separation j <= band and makes
their angles trainable (one angle per separation, shared across qubit
pairs).

Verification protocol: a trial prepares the exact inverse Fourier image
of a uniformly drawn basis state |k>, runs the banded circuit, and
passes iff the measured outcome equals k.  The k-averaged pass
probability has a closed product form because the circuit maps basis
states to tensor products of single-qubit phases; the statevector path
and the product form are checked against each other in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .statevector import (
    HADAMARD,
    PureState,
    _apply_cphase,
    _apply_single_qubit,
    _apply_swap,
)

__all__ = [
    "AqftInstance",
    "standard_phases",
    "apply_aqft",
    "apply_aqft_inverse",
    "trial_success_amplitude",
    "average_success",
    "average_success_map",
]

_MAX_QUBITS = 20


def standard_phases(band: int) -> tuple:
    """Textbook controlled-phase angles pi/2^j for separations 1..band."""
    return tuple(np.pi / 2**j for j in range(1, band + 1))


@dataclass(frozen=True)
class AqftInstance:
    """Banded Fourier circuit on ``n_qubits`` qubits.

    ``phases[j-1]`` is the controlled-phase angle applied between qubits
    at separation j; gates at separation beyond ``band`` are omitted.
    With ``band = n_qubits - 1`` and standard phases the circuit is the
    exact Fourier transform.
    """

    n_qubits: int
    band: int
    phases: tuple

    def __post_init__(self):
        if not 2 <= self.n_qubits <= _MAX_QUBITS:
            raise ValueError(f"n_qubits must be in [2, {_MAX_QUBITS}]")
        if not 0 <= self.band <= self.n_qubits - 1:
            raise ValueError("band must satisfy 0 <= band <= n_qubits - 1")
        phases = tuple(float(p) for p in self.phases)
        if len(phases) != self.band:
            raise ValueError(f"need exactly {self.band} phases, got {len(phases)}")
        object.__setattr__(self, "phases", phases)

    @classmethod
    def standard(cls, n_qubits: int, band: int) -> "AqftInstance":
        return cls(n_qubits, band, standard_phases(band))

    def with_phases(self, phases) -> "AqftInstance":
        return AqftInstance(self.n_qubits, self.band, tuple(phases))

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits


# ---------------------------------------------------------------------------
# circuit application

def _run_circuit(amps: np.ndarray, n: int, band: int, phases, inverse: bool = False) -> None:
    """Apply the banded Fourier circuit in place on a (batch, 2**n) array.

    ``phases`` entries may be scalars or (batch,) arrays, enabling one
    vectorized pass over many parameter values.
    """
    if not inverse:
        for i in range(n - 1, -1, -1):
            _apply_single_qubit(amps, i, HADAMARD)
            for d in range(1, min(band, i) + 1):
                _apply_cphase(amps, i, i - d, np.exp(1j * np.asarray(phases[d - 1])))
        for i in range(n // 2):
            _apply_swap(amps, i, n - 1 - i)
    else:
        for i in range(n // 2):
            _apply_swap(amps, i, n - 1 - i)
        for i in range(n):
            for d in range(min(band, i), 0, -1):
                _apply_cphase(amps, i, i - d, np.exp(-1j * np.asarray(phases[d - 1])))
            _apply_single_qubit(amps, i, HADAMARD)


def apply_aqft(instance: AqftInstance, state: PureState) -> PureState:
    """Run the banded Fourier circuit on a processor state."""
    if state.n_qubits != instance.n_qubits:
        raise ValueError(
            f"state has {state.n_qubits} qubits, circuit expects {instance.n_qubits}"
        )
    out = state.copy()
    _run_circuit(out.amplitudes[None, :], instance.n_qubits, instance.band, instance.phases)
    return out


def apply_aqft_inverse(instance: AqftInstance, state: PureState) -> PureState:
    """Run the inverse of the banded circuit (undoes :func:`apply_aqft`)."""
    if state.n_qubits != instance.n_qubits:
        raise ValueError(
            f"state has {state.n_qubits} qubits, circuit expects {instance.n_qubits}"
        )
    out = state.copy()
    _run_circuit(
        out.amplitudes[None, :], instance.n_qubits, instance.band, instance.phases,
        inverse=True,
    )
    return out


def _fourier_input(n: int, k: int) -> np.ndarray:
    """Exact inverse-Fourier image of |k>: amplitudes e^{-2 pi i jk/2^n}/sqrt(2^n)."""
    dim = 1 << n
    j = np.arange(dim)
    return np.exp(-2j * np.pi * j * (k % dim) / dim) / np.sqrt(dim)


def trial_success_amplitude(instance: AqftInstance, k: int):
    """One verification trial: full output amplitudes and the expected outcome.

    Prepares the exact inverse-Fourier image of |k> (a simulator-side
    idealization with a closed form), runs the banded circuit, and
    returns ``(output_amplitudes, k)``.  The trial passes iff the
    projective readout of the output yields k, so ``output[k]`` is the
    pass amplitude.
    """
    if not 0 <= k < instance.dim:
        raise ValueError(f"basis index {k} out of range")
    amps = _fourier_input(instance.n_qubits, k)[None, :].copy()
    _run_circuit(amps, instance.n_qubits, instance.band, instance.phases)
    return amps[0], k


def trial_output_batch(instance: AqftInstance, k: int, phase_grid: np.ndarray) -> np.ndarray:
    """Trial output vectors for many phase assignments at once.

    ``phase_grid`` has shape (cells, band); returns (cells, 2**n).  Used
    by the learning loop, where every parameter grid cell runs the same
    trial with its own gate angles.
    """
    phase_grid = np.atleast_2d(np.asarray(phase_grid, dtype=float))
    if phase_grid.shape[1] != instance.band:
        raise ValueError(f"phase grid needs {instance.band} columns")
    cells = phase_grid.shape[0]
    amps = np.broadcast_to(
        _fourier_input(instance.n_qubits, k), (cells, instance.dim)
    ).copy()
    per_cell = [phase_grid[:, d] for d in range(instance.band)]
    _run_circuit(amps, instance.n_qubits, instance.band, per_cell)
    return amps


# ---------------------------------------------------------------------------
# closed-form averaged success

class _DiagonalModel:
    """Product form of the per-trial pass probability, averaged over k.

    The circuit sends any basis state to a tensor product of
    single-qubit states (each controlled-phase gate fires while its
    upper qubit is still in the computational basis), and so does the
    adjoint circuit.  The pass amplitude <k| U F^dag |k> therefore
    factorizes into n two-dimensional overlaps:

        p(k) = prod_i cos^2(delta_i(k) / 2),
        delta_i(k) = sum_{d<=min(band,L)} (phase_d - pi/2^d) b_{L-d}
                     - sum_{band<d<=L} (pi/2^d) b_{L-d},     L = n-1-i,

    with b_j the j-th bit of k.  Evaluating the average over all 2^n
    values of k costs O(n 2^n) flops, which keeps phase optimization
    and per-grid-cell success maps exact at every register size.
    """

    def __init__(self, n: int, band: int):
        dim = 1 << n
        k = np.arange(dim)
        bits = ((k[None, :] >> np.arange(n)[:, None]) & 1).astype(float)
        tails = np.zeros((n, dim))
        trained = np.zeros((band, n, dim))
        for i in range(n):
            L = n - 1 - i
            for d in range(1, L + 1):
                if d <= band:
                    trained[d - 1, i] = bits[L - d]
                else:
                    tails[i] -= np.pi / 2**d * bits[L - d]
        self.n, self.band = n, band
        self.tails, self.trained = tails, trained
        self.std = np.array(standard_phases(band))

    def success(self, phases) -> float:
        delta = self.tails.copy()
        for d in range(self.band):
            delta += (phases[d] - self.std[d]) * self.trained[d]
        return float((np.cos(delta / 2.0) ** 2).prod(axis=0).mean())

    def success_many(self, phase_grid: np.ndarray) -> np.ndarray:
        """Vectorized over rows of a (cells, band) phase table."""
        cells = phase_grid.shape[0]
        out = np.empty(cells)
        # chunk so the intermediate (chunk, n, 2^n) stays around 2^24 floats
        chunk = max(1, (1 << 24) // (self.n << self.n))
        for start in range(0, cells, chunk):
            block = phase_grid[start : start + chunk]
            delta = np.broadcast_to(
                self.tails, (block.shape[0],) + self.tails.shape
            ).copy()
            for d in range(self.band):
                delta += (block[:, d] - self.std[d])[:, None, None] * self.trained[d]
            out[start : start + chunk] = (
                (np.cos(delta / 2.0) ** 2).prod(axis=1).mean(axis=1)
            )
        return out


@lru_cache(maxsize=32)
def _diagonal_model(n: int, band: int) -> _DiagonalModel:
    return _DiagonalModel(n, band)


def average_success(instance: AqftInstance) -> float:
    """Pass probability of the verification trial averaged over all k.

    p_bar = (1/2^n) sum_k |<k| U F^dag |k>|^2, evaluated exactly over
    every basis state via the product form above.
    """
    return _diagonal_model(instance.n_qubits, instance.band).success(instance.phases)


def average_success_map(instance: AqftInstance, phase_grid: np.ndarray) -> np.ndarray:
    """Exact k-averaged success for every row of a (cells, band) phase table."""
    phase_grid = np.atleast_2d(np.asarray(phase_grid, dtype=float))
    if phase_grid.shape[1] != instance.band:
        raise ValueError(f"phase grid needs {instance.band} columns")
    return _diagonal_model(instance.n_qubits, instance.band).success_many(phase_grid)
