"""Concurrence and entanglement-event detection.

``concurrence_x`` is the closed form for X states used on the production
path; ``concurrence_wootters`` is the general spin-flip construction kept
as an independent oracle. ``detect_events`` scans a trajectory for sudden
death, (delayed or revived) birth, revival and enhancement, refining every
threshold crossing by bisection on the exact propagator.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .coefficients import CoefficientSet
from .dynamics import XState, propagator_for
from .errors import DomainError, InvalidStateError

EPS_DEAD = kernels.EPS_DEAD
EPS_ENH = kernels.EPS_ENH
DEFAULT_REFINE_TOL = 1e-6


@dataclass(frozen=True)
class EntanglementEvents:
    """Detected events along one trajectory (times in 1/emission-rate).

    ``revival_amplitude`` is the largest concurrence reached after the first
    death (0 when no death occurs); region maps use it to separate visible
    revivals from threshold-level ones.
    """

    death_time: float | None
    birth_time: float | None
    revival: bool
    enhancement: bool
    max_concurrence: float
    max_time: float
    revival_amplitude: float = 0.0


@dataclass(frozen=True)
class Trajectory:
    """Sampled evolution of one initial state under one coefficient set."""

    times: np.ndarray
    populations: np.ndarray   # shape (n, 4), coupled-basis order G, A, S, E
    cAS: np.ndarray
    cGE: np.ndarray
    concurrence: np.ndarray
    initial: XState
    coeffs: CoefficientSet

    def state(self, k: int) -> XState:
        p = self.populations[k]
        return XState(p[0], p[1], p[2], p[3], cAS=self.cAS[k], cGE=self.cGE[k])


def concurrence_x(state: XState) -> float:
    """Concurrence of an X state, max{0, K1, K2}.

    Radicands within -1e-12 of zero are clamped (roundoff slack); anything
    more negative signals a positivity violation upstream and raises.
    """
    try:
        return kernels.concurrence_kernel(
            state.pGG, state.pAA, state.pSS, state.pEE,
            state.cAS.real, state.cAS.imag, state.cGE.real, state.cGE.imag)
    except ValueError as exc:
        raise InvalidStateError(str(exc)) from None


def concurrence_wootters(rho: np.ndarray) -> float:
    """Spin-flip concurrence of an arbitrary two-qubit density matrix.

    Test oracle only: eigenvalues of rho * (sy x sy) rho* (sy x sy),
    descending square roots l1 >= ... >= l4, C = max(0, l1 - l2 - l3 - l4).
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise InvalidStateError(f"density matrix must be 4x4, got {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > 1e-10:
        raise InvalidStateError("density matrix is not hermitian")
    if abs(np.trace(rho).real - 1.0) > 1e-8:
        raise InvalidStateError(f"density matrix trace is {np.trace(rho)}")
    if np.linalg.eigvalsh(rho).min() < -1e-9:
        raise InvalidStateError("density matrix is not positive semidefinite")
    sy = np.array([[0.0, -1.0j], [1.0j, 0.0]])
    flip = np.kron(sy, sy)
    rho_tilde = flip @ rho.conj() @ flip
    lam = np.linalg.eigvals(rho @ rho_tilde)
    lam = np.sqrt(np.clip(lam.real, 0.0, None))
    lam[::-1].sort()
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def compute_trajectory(initial: XState, coeffs: CoefficientSet,
                       taus: np.ndarray) -> Trajectory:
    """Evolve and attach the concurrence series."""
    initial.validate()
    taus = np.asarray(taus, dtype=float)
    if taus.size == 0:
        raise DomainError("empty time grid")
    if taus[0] != 0.0 or np.any(np.diff(taus) <= 0.0):
        raise DomainError("time grid must start at 0 and increase strictly")
    propagator_for(coeffs)  # validates the coefficient set / warms the cache
    pops, C, _ = kernels.trajectory_kernel(
        coeffs.A1, coeffs.B1, coeffs.A2, coeffs.B2,
        initial.populations(), initial.cAS.real, initial.cAS.imag,
        initial.cGE.real, initial.cGE.imag, taus)
    damp = np.exp(-4.0 * coeffs.A1 * taus)
    return Trajectory(times=taus, populations=pops,
                      cAS=initial.cAS * damp, cGE=initial.cGE * damp,
                      concurrence=C, initial=initial, coeffs=coeffs)


def detect_events(traj: Trajectory,
                  refine_tol: float = DEFAULT_REFINE_TOL) -> EntanglementEvents:
    """Scan a trajectory for death/birth/revival/enhancement.

    death_time is the first crossing below EPS_DEAD from above, birth_time
    the first crossing above it from below; revival needs a death followed
    by a later birth; enhancement means the refined maximum exceeds the
    initial concurrence by more than EPS_ENH. Crossals are refined by
    bisection on the exact propagator, the maximum by golden section, both
    to ``refine_tol`` in scaled time.
    """
    if traj.times.size == 0:
        raise DomainError("empty trajectory")
    d, b, rev, enh, mc, mt, ra = kernels.events_kernel(
        traj.coeffs.A1, traj.coeffs.B1, traj.coeffs.A2, traj.coeffs.B2,
        traj.initial.populations(),
        traj.initial.cAS.real, traj.initial.cAS.imag,
        traj.initial.cGE.real, traj.initial.cGE.imag,
        traj.times, refine_tol)
    return EntanglementEvents(
        death_time=None if np.isnan(d) else float(d),
        birth_time=None if np.isnan(b) else float(b),
        revival=bool(rev),
        enhancement=bool(enh),
        max_concurrence=float(mc),
        max_time=float(mt),
        revival_amplitude=float(ra))
