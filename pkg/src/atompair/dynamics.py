"""Exact propagation of the two-atom X state.

In the coupled basis {G, A, S, E} the populations close on themselves under
a constant 4x4 rate matrix and the two independent coherences decay as
exp(-4 A1 tau), so the evolution is computed exactly: eigendecomposition of
the rate matrix on the production path, scaling-and-squaring matrix
exponential as fallback when the eigenvector matrix is ill-conditioned.
All times are in units of the inverse spontaneous emission rate.
"""

import functools
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .coefficients import CoefficientSet
from .errors import ComputationError, DegenerateGeneratorError, DomainError, InvalidStateError

TRACE_TOL = 1e-10
POSITIVITY_SLACK = -1e-9


@dataclass(frozen=True)
class XState:
    """The eight real degrees of freedom of a two-atom X state.

    Populations are in the coupled basis (ground, antisymmetric, symmetric,
    doubly excited); ``cAS`` and ``cGE`` are the independent coherences, the
    conjugate entries being implied by hermiticity.
    """

    pGG: float
    pAA: float
    pSS: float
    pEE: float
    cAS: complex = 0.0 + 0.0j
    cGE: complex = 0.0 + 0.0j

    @property
    def trace(self) -> float:
        return self.pGG + self.pAA + self.pSS + self.pEE

    def populations(self) -> np.ndarray:
        return np.array([self.pGG, self.pAA, self.pSS, self.pEE])

    def validate(self, trace_tol: float = TRACE_TOL) -> "XState":
        """Check trace, positivity of populations and the two 2x2 blocks."""
        if abs(self.trace - 1.0) > trace_tol:
            raise InvalidStateError(f"trace deviates from 1 by {self.trace - 1.0}")
        for name, p in (("pGG", self.pGG), ("pAA", self.pAA),
                        ("pSS", self.pSS), ("pEE", self.pEE)):
            if p < POSITIVITY_SLACK:
                raise InvalidStateError(f"population {name} = {p} below tolerance")
        # X-state positivity reduces to the two 2x2 blocks
        if abs(self.cAS) ** 2 > self.pAA * self.pSS + 1e-12:
            raise InvalidStateError("coherence |cAS|^2 exceeds pAA*pSS")
        if abs(self.cGE) ** 2 > self.pGG * self.pEE + 1e-12:
            raise InvalidStateError("coherence |cGE|^2 exceeds pGG*pEE")
        return self

    # --- the initial states used by the sweep presets ---

    @classmethod
    def ground(cls) -> "XState":
        return cls(1.0, 0.0, 0.0, 0.0)

    @classmethod
    def antisymmetric(cls) -> "XState":
        return cls(0.0, 1.0, 0.0, 0.0)

    @classmethod
    def symmetric(cls) -> "XState":
        return cls(0.0, 0.0, 1.0, 0.0)

    @classmethod
    def excited(cls) -> "XState":
        return cls(0.0, 0.0, 0.0, 1.0)

    @classmethod
    def psi1(cls, p: float) -> "XState":
        """sqrt(p)|A> + sqrt(1-p)|S>, real coherence sqrt(p(1-p))."""
        if not 0.0 < p < 1.0:
            raise DomainError(f"psi1 needs 0 < p < 1, got {p}")
        return cls(0.0, p, 1.0 - p, 0.0, cAS=complex(np.sqrt(p * (1.0 - p))))

    @classmethod
    def psi2(cls, p: float) -> "XState":
        """sqrt(p)|G> + sqrt(1-p)|E>, real coherence sqrt(p(1-p))."""
        if not 0.0 < p < 1.0:
            raise DomainError(f"psi2 needs 0 < p < 1, got {p}")
        return cls(p, 0.0, 0.0, 1.0 - p, cGE=complex(np.sqrt(p * (1.0 - p))))


_CATALOGUE = {
    "G": XState.ground,
    "A": XState.antisymmetric,
    "S": XState.symmetric,
    "E": XState.excited,
}


def catalogue_state(name: str, p: float | None = None) -> XState:
    """Resolve a named initial state; psi1/psi2 take the weight p."""
    if name in _CATALOGUE:
        if p is not None:
            raise DomainError(f"state {name!r} takes no parameter p")
        return _CATALOGUE[name]()
    if name == "psi1" or name == "psi2":
        if p is None:
            raise DomainError(f"state {name!r} needs the weight p")
        return XState.psi1(p) if name == "psi1" else XState.psi2(p)
    raise DomainError(f"unknown initial state {name!r}")


@dataclass(frozen=True)
class PopulationGenerator:
    """Rate matrix M with d/dtau (pGG,pAA,pSS,pEE) = M p, units of the
    emission rate. Columns sum to zero exactly (the diagonal is assembled
    as minus its column's off-diagonal sum); off-diagonal entries are the
    (nonnegative) transition rates between the four levels."""

    matrix: np.ndarray

    def __post_init__(self):
        self.matrix.setflags(write=False)

    def column_sums(self) -> np.ndarray:
        # accumulate in construction order (off-diagonals first) so the
        # structural cancellation against the diagonal is reproduced exactly
        out = np.empty(4)
        for k in range(4):
            s = 0.0
            for r in range(4):
                if r != k:
                    s += self.matrix[r, k]
            out[k] = s + self.matrix[k, k]
        return out


def build_generator(coeffs: CoefficientSet) -> PopulationGenerator:
    M = kernels.generator_kernel(coeffs.A1, coeffs.B1, coeffs.A2, coeffs.B2)
    gen = PopulationGenerator(matrix=M)
    sums = np.abs(gen.column_sums()).max()
    if sums > 1e-12 * max(1.0, np.abs(M).max()):
        raise ComputationError(f"generator columns do not sum to zero: {sums}")
    return gen


class Propagator:
    """Prepared exact propagator for one CoefficientSet.

    Immutable after construction and safe to share between threads. Warns
    and switches to the matrix-exponential fallback when the eigenvector
    matrix is ill-conditioned (degenerate coefficient coincidences).
    """

    def __init__(self, coeffs: CoefficientSet):
        self.coeffs = coeffs
        self.generator = build_generator(coeffs)
        w, V, Vinv, cond = kernels.eig_decompose(self.generator.matrix)
        self.eigenvalues = w
        self._V = V
        self._Vinv = Vinv
        self.condition = float(cond)
        self.use_expm = (not np.isfinite(cond)) or cond > kernels.COND_LIMIT
        if self.use_expm:
            warnings.warn(
                "population generator eigenvectors are ill-conditioned "
                f"(cond ~ {cond:.3g}); using matrix-exponential fallback",
                RuntimeWarning, stacklevel=2)

    def populations(self, p0: np.ndarray, tau: float) -> np.ndarray:
        c = self._Vinv @ p0.astype(np.complex128)
        return kernels.pops_at(self.eigenvalues, self._V, c,
                               self.generator.matrix, self.use_expm,
                               np.asarray(p0, dtype=float), float(tau))

    def evolve(self, state: XState, tau: float) -> XState:
        if tau < 0.0:
            raise DomainError(f"tau must be >= 0, got {tau}")
        p = self.populations(state.populations(), tau)
        damp = np.exp(-4.0 * self.coeffs.A1 * tau)
        return XState(p[0], p[1], p[2], p[3],
                      cAS=state.cAS * damp, cGE=state.cGE * damp)

    def trajectory(self, state: XState, taus: np.ndarray):
        """Populations and coherences on a time grid; returns (pops, cAS, cGE)."""
        taus = np.asarray(taus, dtype=float)
        pops, _, _ = kernels.trajectory_kernel(
            self.coeffs.A1, self.coeffs.B1, self.coeffs.A2, self.coeffs.B2,
            state.populations(), state.cAS.real, state.cAS.imag,
            state.cGE.real, state.cGE.imag, taus)
        damp = np.exp(-4.0 * self.coeffs.A1 * taus)
        return pops, state.cAS * damp, state.cGE * damp


@functools.lru_cache(maxsize=256)
def propagator_for(coeffs: CoefficientSet) -> Propagator:
    """Shared immutable propagator cache keyed by the coefficient set."""
    return Propagator(coeffs)


def evolve(initial: XState, coeffs: CoefficientSet, tau: float) -> XState:
    """Exact state at time tau (units of the inverse emission rate)."""
    initial.validate()
    return propagator_for(coeffs).evolve(initial, tau)


def asymptotic_state(coeffs: CoefficientSet) -> XState:
    """Trace-one null vector of the generator, with zero coherences.

    Requires a simple zero eigenvalue; raises DegenerateGeneratorError at
    the measure-zero coefficient coincidences where it is not. For
    coefficient sets satisfying the structural proportionality
    A1*B2 == A2*B1 (every assembled set does) the equal-population closed
    form for pAA = pSS is verified against the null vector to 1e-10.
    """
    M = build_generator(coeffs).matrix
    U, s, Vt = np.linalg.svd(M)
    scale = s[0]
    if s[3] > 1e-10 * scale:
        raise DegenerateGeneratorError(f"no zero eigenvalue found: sigma_min = {s[3]}")
    if s[2] < 1e-10 * scale:
        raise DegenerateGeneratorError(
            "zero eigenvalue of the generator is not simple; asymptotic state undefined")
    v = Vt[3]
    total = v.sum()
    if abs(total) < 1e-12:
        raise DegenerateGeneratorError("null vector has zero trace; cannot normalise")
    p = v / total
    A1, B1, A2, B2 = coeffs.A1, coeffs.B1, coeffs.A2, coeffs.B2
    if abs(A1 * B2 - A2 * B1) <= 1e-12 * max(A1 * B1, 1e-300):
        num = -(-A1 ** 3 + A1 * A2 ** 2 + A1 * B1 ** 2 - A1 * B2 ** 2)
        den = 4.0 * (A1 ** 3 - A1 * A2 ** 2 - A2 * B1 * B2 + A1 * B2 ** 2)
        closed = num / den
        if abs(p[1] - closed) > 1e-10 or abs(p[2] - closed) > 1e-10:
            raise ComputationError(
                f"asymptotic populations {p[1]}, {p[2]} disagree with the "
                f"closed form {closed}")
    return XState(float(p[0]), float(p[1]), float(p[2]), float(p[3]))


def basis_transform(state: XState) -> np.ndarray:
    """Density matrix in the product basis {|00>, |01>, |10>, |11>}.

    The result is an X-form matrix by construction: the coupled basis mixes
    only the middle block. Used for positivity checks and as input to the
    spin-flip concurrence oracle.
    """
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = state.pGG
    rho[3, 3] = state.pEE
    rho[0, 3] = state.cGE
    rho[3, 0] = np.conj(state.cGE)
    half = 0.5 * (state.pAA + state.pSS)
    rho[1, 1] = half - state.cAS.real
    rho[2, 2] = half + state.cAS.real
    rho[1, 2] = 0.5 * (state.pSS - state.pAA) - 1j * state.cAS.imag
    rho[2, 1] = np.conj(rho[1, 2])
    return rho
