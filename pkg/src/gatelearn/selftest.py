"""Quick internal consistency checks behind ``gatelearn selftest``.

Each check exercises one dual-route equivalence: the production code
path against an independently constructed reference (dense matrix
exponential, explicit joint state, full-dimensional search simulation).
The suite is a fast subset of the package's test suite, runnable
without pytest in deployed environments.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm
from scipy.special import jv

from .backaction import OutcomeAmplitudes, brute_force_joint_step, sample_and_update
from .feedback import apply_quantum_walk, walk_coefficients
from .grover import GroverInstance, pass_fail_amplitudes
from .parameter import ParameterState, invert_about_mean, uniform_init
from .qft import AqftInstance, apply_aqft
from .statevector import PureState, apply_single_qubit_gate

__all__ = ["run_selftest"]


def _check_walk_series() -> str:
    for x in (0.3, 0.8, 1.5, 5.0):
        coeffs = walk_coefficients(x)
        bessel = np.array([(-1j) ** l * jv(l, 2 * x) for l in range(len(coeffs.coefficients))])
        if np.abs(coeffs.coefficients - bessel).max() > 1e-10:
            raise AssertionError(f"walk series deviates from Bessel values at x={x}")
        if abs(coeffs.unitarity_sum() - 1.0) > 1e-9:
            raise AssertionError(f"walk series unitarity sum violated at x={x}")
    return "walk coefficients match independent Bessel evaluation"


def _check_walk_operator() -> str:
    for n_cells, x in ((32, 0.3), (32, 0.8), (64, 1.5)):
        rng = np.random.default_rng(11)
        amps = rng.normal(size=n_cells) + 1j * rng.normal(size=n_cells)
        chi = ParameterState(amps / np.linalg.norm(amps))
        shift = np.roll(np.eye(n_cells), 1, axis=0)
        dense = expm(-1j * x * (shift + shift.T))
        walked = apply_quantum_walk(chi, walk_coefficients(x), 1)
        if np.abs(walked.amplitudes - dense @ chi.amplitudes).max() > 1e-8:
            raise AssertionError(f"walk disagrees with dense exponential at x={x}")
    return "quantum walk matches dense circulant exponential"


def _check_joint_oracle() -> str:
    rng_block = np.random.default_rng(123)
    rng_joint = np.random.default_rng(123)
    gate_rng = np.random.default_rng(5)
    theta = gate_rng.uniform(0, np.pi, 3)

    def circuit(phi, state):
        out = state
        for q, th in enumerate(theta[: state.n_qubits]):
            c, s = np.cos(th), np.sin(th)
            out = apply_single_qubit_gate(
                out, q, np.array([[c, -s * np.exp(-1j * phi)], [s * np.exp(1j * phi), c]])
            )
        return out

    chi_b = uniform_init(8)
    chi_j = uniform_init(8)
    src = PureState.basis(2, 0)
    phis = chi_b.axis_values(0)
    for _ in range(20):
        table = np.stack([circuit(phi, src).amplitudes for phi in phis])
        amps = OutcomeAmplitudes.full(table)
        r_b, chi_b = sample_and_update(chi_b, amps, rng_block)
        r_j, chi_j = brute_force_joint_step(chi_j, circuit, src, rng_joint)
        if r_b != r_j:
            raise AssertionError("block filter and joint-state oracle sampled differently")
        if np.abs(chi_b.amplitudes - chi_j.amplitudes).max() > 1e-12:
            raise AssertionError("block filter and joint-state oracle states diverged")
    return "block filter matches explicit joint-state measurement"


def _check_grover_subspace() -> str:
    for n_el in (4, 16):
        inst = GroverInstance.standard(n_el)
        theta = inst.theta
        ref = np.sin((2 * inst.iterations + 1) * theta) ** 2
        s, b = pass_fail_amplitudes(inst, np.pi)
        if abs(abs(s) ** 2 - ref) > 1e-12:
            raise AssertionError(f"phase pi success deviates from closed form at N={n_el}")
        s0, _ = pass_fail_amplitudes(inst, 0.0)
        if abs(abs(s0) ** 2 - 1.0 / n_el) > 1e-12:
            raise AssertionError(f"zero-phase success is not 1/N at N={n_el}")
    return "search recursion reproduces closed-form success probabilities"


def _check_qft_circuit() -> str:
    n = 5
    inst = AqftInstance.standard(n, n - 1)
    dim = 1 << n
    j = np.arange(dim)
    dft = np.exp(2j * np.pi * np.outer(j, j) / dim) / np.sqrt(dim)
    rng = np.random.default_rng(3)
    amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    amps /= np.linalg.norm(amps)
    out = apply_aqft(inst, PureState(n, amps))
    if np.abs(out.amplitudes - dft @ amps).max() > 1e-10:
        raise AssertionError("full-band circuit deviates from the DFT matrix")
    return "full-band Fourier circuit matches the dense DFT matrix"


def _check_inversion() -> str:
    rng = np.random.default_rng(7)
    amps = rng.normal(size=64) + 1j * rng.normal(size=64)
    chi = ParameterState(amps / np.linalg.norm(amps))
    twice = invert_about_mean(invert_about_mean(chi))
    if np.abs(twice.amplitudes - chi.amplitudes).max() > 1e-12:
        raise AssertionError("inversion about the mean is not an involution")
    if abs(invert_about_mean(chi).norm() - 1.0) > 1e-12:
        raise AssertionError("inversion about the mean does not preserve norm")
    return "inversion about the mean is a norm-preserving involution"


_CHECKS = (
    _check_walk_series,
    _check_walk_operator,
    _check_joint_oracle,
    _check_grover_subspace,
    _check_qft_circuit,
    _check_inversion,
)


def run_selftest() -> int:
    """Run all checks; print one line each; exit status 0 iff all pass."""
    failures = 0
    for check in _CHECKS:
        try:
            message = check()
            print(f"ok: {message}")
        except AssertionError as exc:
            failures += 1
            print(f"FAIL: {exc}")
    if failures:
        print(f"selftest: {failures}/{len(_CHECKS)} checks failed")
        return 1
    print(f"selftest: all {len(_CHECKS)} checks passed")
    return 0
