"""Statevector simulation of the Gauss-sum phase estimation algorithm.

Registers are qudits: the main register has dimension k (an odd prime), the
character-kickback ancilla has dimension k-1 and the interferometric control
is a qubit. A register's worth of cyclic shift acting on the Fourier state
of the ancilla kicks the Legendre character of the main register's residue
out as a global +-1 phase; the ancilla group must therefore be the image of
the discrete logarithm, Z_{k-1}, where half the group order is an integer.

Unitaries are applied as dense matrices per register; the discrete-log
controlled shift is applied as the permutation it is, not compiled to
elementary gates. Dimension is capped so two-register states stay around
10^6 amplitudes.

A StateVector is confined to one worker at a time; independent estimation
trials draw their generators from numpy SeedSequence spawning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numtheory import Character, discrete_log, gauss_sum_brute, is_prime, primitive_root

MAX_DIM = 1024

# Sample schedule: per measurement basis, ceil(8*ln(40)/eps**2) shots give
# joint 95% confidence that the estimated phase is within eps (Hoeffding on
# both quadrature probabilities, then the arcsine perturbation bound).
_SCHEDULE_CONST = 8.0 * math.log(40.0)
_CONFIDENCE_T = lambda n: math.sqrt(math.log(80.0) / (2.0 * n))


@dataclass
class StateVector:
    """Complex amplitudes over one or more qudit registers.

    dims lists each register's dimension; amps is the flat amplitude vector
    of length prod(dims), last register fastest.
    """

    dims: tuple[int, ...]
    amps: np.ndarray

    def __post_init__(self) -> None:
        size = math.prod(self.dims)
        if self.amps.shape != (size,):
            raise ValueError(f"amplitude vector has shape {self.amps.shape}, expected ({size},)")

    @property
    def regs(self) -> int:
        return len(self.dims)

    @property
    def k(self) -> int:
        return self.dims[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def fidelity(self, other: "StateVector") -> float:
        """|<self|other>| for equally shaped normalized states."""
        if self.dims != other.dims:
            raise ValueError(f"register shapes differ: {self.dims} vs {other.dims}")
        return float(abs(np.vdot(self.amps, other.amps)))


def basis_state(dims: tuple[int, ...], index: tuple[int, ...]) -> StateVector:
    amps = np.zeros(math.prod(dims), dtype=np.complex128)
    flat = 0
    for d, i in zip(dims, index):
        if not 0 <= i < d:
            raise ValueError(f"basis index {i} out of range for dimension {d}")
        flat = flat * d + i
    amps[flat] = 1.0
    return StateVector(dims=dims, amps=amps)


def apply_unitary(state: StateVector, matrix: np.ndarray, reg: int) -> StateVector:
    """Apply a dense unitary to one register of a (possibly joint) state."""
    if not 0 <= reg < state.regs:
        raise ValueError(f"register {reg} out of range for {state.regs} registers")
    d = state.dims[reg]
    if matrix.shape != (d, d):
        raise ValueError(f"matrix shape {matrix.shape} does not fit register of dimension {d}")
    tensor = state.amps.reshape(state.dims)
    tensor = np.moveaxis(np.tensordot(matrix, tensor, axes=([1], [reg])), 0, reg)
    return StateVector(dims=state.dims, amps=np.ascontiguousarray(tensor.reshape(-1)))


def qft_matrix(k: int, a: int = 1) -> np.ndarray:
    """Fourier matrix F[s, p] = exp(-2*pi*i * a*p*s / k) / sqrt(k).

    The optional multiplier a composes the transform with the relabeling
    p -> a*p; the matrix is unitary whenever gcd(a, k) = 1.
    """
    if math.gcd(a, k) != 1:
        raise ValueError(f"parameter a={a} is not coprime to k={k}")
    grid = np.outer(np.arange(k), np.arange(k) * (a % k)) % k
    return np.exp(-2.0j * math.pi * grid / k) / math.sqrt(k)


def qft_mod_k(state: StateVector, reg: int = 0) -> StateVector:
    """Quantum Fourier transform (negative-exponent convention) on one register."""
    if not 0 <= reg < state.regs:
        raise ValueError(f"register {reg} out of range for {state.regs} registers")
    return apply_unitary(state, qft_matrix(state.dims[reg]), reg)


def qft_mod_k_inverse(state: StateVector, reg: int = 0) -> StateVector:
    if not 0 <= reg < state.regs:
        raise ValueError(f"register {reg} out of range for {state.regs} registers")
    return apply_unitary(state, qft_matrix(state.dims[reg]).conj().T, reg)


def legendre_amplitudes(k: int) -> np.ndarray:
    """Reference amplitudes chi(n)/sqrt(k-1) of the character state."""
    chi = Character.legendre(k)
    return np.array(chi.table, dtype=np.complex128) / math.sqrt(k - 1)


def prepare_legendre_state(k: int) -> StateVector:
    """Build the Legendre character state by Fourier-ancilla phase kickback.

    Start from the uniform superposition of nonzero residues with the
    ancilla at |1>, Fourier-transform the ancilla over Z_{k-1}, then shift
    the ancilla by (k-1)/2 * dlog(n) conditioned on the main register. The
    ancilla is an eigenvector of every shift, so each branch only acquires
    the phase (-1)^dlog(n) = chi(n). After checking the registers are
    unentangled (to 1e-10) the ancilla is projected out.
    """
    if k < 3 or not is_prime(k):
        raise ValueError(f"k={k} must be an odd prime")
    if k > MAX_DIM:
        raise ValueError(f"k={k} exceeds the simulator cap {MAX_DIM}")
    anc = k - 1
    joint = np.zeros((k, anc), dtype=np.complex128)
    joint[1:, 1] = 1.0 / math.sqrt(k - 1)  # |n>|1>, n uniform over 1..k-1

    f_anc = qft_matrix(anc)
    joint = joint @ f_anc.T  # Fourier transform the ancilla register

    g = primitive_root(k)
    half = (k - 1) // 2
    for n in range(1, k):
        shift = half * discrete_log(n, g, k) % anc
        joint[n] = np.roll(joint[n], shift)

    anc_state = f_anc[:, 1]  # the ancilla should return to its Fourier state
    main = joint @ anc_state.conj()
    if np.abs(joint - np.outer(main, anc_state)).max() > 1e-10:
        raise RuntimeError("ancilla is entangled after kickback; cannot discard")
    return StateVector(dims=(k,), amps=main)


def gauss_phase_encode(state: StateVector, a: int) -> StateVector:
    """Concentrate the Gauss-sum phase of parameter a onto the character state.

    Applies the Fourier transform with multiplier a; the character identity
    turns the transformed amplitudes back into the input state scaled by the
    global factor G(k, a)/sqrt(k). (The follow-up character relabeling in
    the construction squares the +-1 character and is the identity.)
    """
    if state.regs != 1:
        raise ValueError("expected a single-register character state")
    k = state.k
    if math.gcd(a, k) != 1:
        raise ValueError(f"a={a} is not coprime to k={k}")
    reference = legendre_amplitudes(k)
    if abs(np.vdot(reference, state.amps)) < 1.0 - 1e-10:
        raise ValueError("input state is not the Legendre character state")
    return apply_unitary(state, qft_matrix(k, a), 0)


@dataclass(frozen=True)
class PhaseEstimate:
    """Estimated Gauss-sum phase with its sampling confidence interval.

    phi is in (-pi, pi]; samples counts shots per measurement basis;
    ci_halfwidth bounds |phi_hat - phi| at 95% confidence jointly over the
    two bases.
    """

    phi: float
    samples: int
    epsilon: float
    ci_halfwidth: float


def sample_schedule(epsilon: float) -> int:
    """Shots per basis for a phase error below epsilon at 95% confidence."""
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    return math.ceil(_SCHEDULE_CONST / epsilon**2)


def phase_estimate(k: int, a: int, epsilon: float, seed: int = 0) -> PhaseEstimate:
    """Interferometric estimate of the phase of G(k, a)/sqrt(k).

    A control qubit selects whether the encoding unitary acts on the
    character state; measuring the control along the two equatorial bases
    estimates cos(phi) and sin(phi), and phi_hat = atan2 of the two
    frequencies. Shot counts follow sample_schedule(epsilon).
    """
    if math.gcd(a, k) != 1:
        raise ValueError(f"a={a} is not coprime to k={k}")
    shots = sample_schedule(epsilon)
    chi = prepare_legendre_state(k)

    # (|0> + |1>)/sqrt(2) (x) |chi>, then the encode conditioned on control
    joint = np.zeros((2, k), dtype=np.complex128)
    joint[0] = chi.amps / math.sqrt(2.0)
    joint[1] = gauss_phase_encode(chi, a).amps / math.sqrt(2.0)
    state = StateVector(dims=(2, k), amps=joint.reshape(-1))

    hadamard = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / math.sqrt(2.0)
    to_imag = np.array([[1.0, -1.0j], [1.0, 1.0j]], dtype=np.complex128) / math.sqrt(2.0)

    def control_zero_probability(basis_change: np.ndarray) -> float:
        rotated = apply_unitary(state, basis_change, 0)
        block = rotated.amps.reshape(2, k)[0]
        return float(np.real(np.vdot(block, block)))

    p_cos = control_zero_probability(hadamard)
    p_sin = control_zero_probability(to_imag)

    rng = np.random.default_rng(seed)
    cos_hat = 2.0 * rng.binomial(shots, min(max(p_cos, 0.0), 1.0)) / shots - 1.0
    sin_hat = 2.0 * rng.binomial(shots, min(max(p_sin, 0.0), 1.0)) / shots - 1.0
    phi_hat = math.atan2(sin_hat, cos_hat)
    if phi_hat <= -math.pi:
        phi_hat += 2.0 * math.pi

    halfwidth = math.asin(min(1.0, 2.0 * math.sqrt(2.0) * _CONFIDENCE_T(shots)))
    return PhaseEstimate(phi=phi_hat, samples=shots, epsilon=epsilon, ci_halfwidth=halfwidth)


def true_phase(k: int, a: int) -> float:
    """Reference phase arg(G(k, a)/sqrt(k)) from the brute-force sum."""
    return float(np.angle(gauss_sum_brute(k, a) / math.sqrt(k)))


def estimate_report(k: int, a: int, epsilon: float, seed: int = 0) -> dict:
    """JSON-ready record of one estimation run against the brute-force truth."""
    est = phase_estimate(k, a, epsilon, seed=seed)
    return {
        "k": k,
        "a": a,
        "phi_hat": est.phi,
        "phi_true": true_phase(k, a),
        "epsilon": epsilon,
        "samples": est.samples,
        "seed": seed,
    }
