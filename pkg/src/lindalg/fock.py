"""Truncated-Fock-space oracle and evolution engine.

Everything symbolic in :mod:`lindalg.algebra` can be represented
brute-force as a matrix acting on vectorized density matrices over a
truncated multi-mode Fock basis.  This module is both an independent
verification path for the algebra and the production propagator.

Conventions (fixed for reproducibility):

* Basis ordering is mode-0-major, photon number ascending: the Hilbert
  index of occupations ``(n_0, ..., n_{m-1})`` is
  ``sum(n_j * (N+1)**(m-1-j))``.
* Vectorization is row-major: ``vec(rho) = rho.reshape(-1)``, so left
  multiplication by ``A`` is ``kron(A, I)`` and right multiplication is
  ``kron(I, A.T)``.
* Each generator family is represented as the exact compression of the
  untruncated superoperator onto the cutoff space.  In particular the
  symmetric-damping family uses the normal-ordered form
  ``a_m adag_n = adag_n a_m + delta_nm`` so that number-conserving
  blocks are exact up to the cutoff (a naive truncated product corrupts
  the top level).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .algebra import GeneratorKind, SuperOpExpr, k_minus, k_plus, k_zero
from .liouvillian import SystemSpec, build_liouvillian, conjugate, zero_order

__all__ = [
    "FockCutoff",
    "DensityMatrix",
    "EvolutionMatrixU",
    "TruncationLeakWarning",
    "mode_operators",
    "occupations",
    "vec",
    "unvec",
    "left_mult",
    "right_mult",
    "represent",
    "interior_mask_per_mode",
    "interior_mask_total",
    "superop_interior_mask",
    "exact_propagate",
    "zero_order_propagate",
    "linear_propagate",
    "evolution_matrix_u",
    "heisenberg_expect",
    "fock_state",
    "bell_01_10",
    "thermal_state",
]

# dense expm is preferred up to this superoperator dimension; beyond it
# propagation switches to sparse expm-action on the vectorized state
_DENSE_LIMIT = 4200


class TruncationLeakWarning(UserWarning):
    """Probability leaked through the Fock cutoff during propagation."""


@dataclass(frozen=True)
class FockCutoff:
    """Truncation: ``mode_count`` modes, each holding 0..``per_mode_max``."""

    mode_count: int
    per_mode_max: int

    def __post_init__(self):
        if self.mode_count < 1 or self.per_mode_max < 1:
            raise ValueError("mode_count and per_mode_max must be positive")

    @property
    def local_dim(self) -> int:
        return self.per_mode_max + 1

    @property
    def dim(self) -> int:
        """Hilbert-space dimension (local_dim ** mode_count)."""
        return self.local_dim**self.mode_count

    @property
    def superop_dim(self) -> int:
        return self.dim**2


@dataclass
class DensityMatrix:
    """Truncated multi-mode state with propagation diagnostics.

    ``herm_deviation`` and ``trace_drift`` record what the most recent
    propagation step had to repair; fresh states carry zeros.
    """

    cutoff: FockCutoff
    entries: np.ndarray
    herm_deviation: float = field(default=0.0, compare=False)
    trace_drift: float = field(default=0.0, compare=False)

    def __post_init__(self):
        e = np.array(self.entries, dtype=complex)
        if e.shape != (self.cutoff.dim, self.cutoff.dim):
            raise ValueError(
                f"entries shape {e.shape} does not match cutoff dim {self.cutoff.dim}"
            )
        self.entries = e

    def validate(self, tol_herm=1e-12, tol_trace=1e-12, tol_pos=1e-10) -> None:
        """Reject states that are not physical within tolerance."""
        herm = np.abs(self.entries - self.entries.conj().T).max()
        if herm > tol_herm:
            raise ValueError(f"density matrix not Hermitian (deviation {herm:.3e})")
        tr = self.entries.trace()
        if abs(tr - 1.0) > tol_trace:
            raise ValueError(f"density matrix trace {tr:.12f} != 1")
        lowest = scipy.linalg.eigvalsh(self.entries).min()
        if lowest < -tol_pos:
            raise ValueError(f"density matrix has eigenvalue {lowest:.3e} < 0")


@dataclass(frozen=True)
class EvolutionMatrixU:
    """One-sided mode evolution matrix entering the linear correction."""

    u_of_t: np.ndarray
    time: float


@lru_cache(maxsize=32)
def _local_ops(local_dim: int) -> tuple[np.ndarray, np.ndarray]:
    a = np.diag(np.sqrt(np.arange(1, local_dim, dtype=float)), k=1).astype(complex)
    a.flags.writeable = False
    adag = a.conj().T
    adag.flags.writeable = False
    return a, adag


def mode_operators(cutoff: FockCutoff) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Per-mode annihilation and creation matrices on the full space."""
    a_local, adag_local = _local_ops(cutoff.local_dim)
    eye = np.eye(cutoff.local_dim, dtype=complex)
    ann, cre = [], []
    for j in range(cutoff.mode_count):
        factors = [a_local if k == j else eye for k in range(cutoff.mode_count)]
        op = factors[0]
        for f in factors[1:]:
            op = np.kron(op, f)
        ann.append(op)
        cre.append(op.conj().T)
    return ann, cre


@lru_cache(maxsize=32)
def _occupations_cached(mode_count: int, per_mode_max: int) -> np.ndarray:
    local = per_mode_max + 1
    idx = np.arange(local**mode_count)
    occ = np.empty((len(idx), mode_count), dtype=int)
    for j in range(mode_count - 1, -1, -1):
        occ[:, j] = idx % local
        idx = idx // local
    occ.flags.writeable = False
    return occ


def occupations(cutoff: FockCutoff) -> np.ndarray:
    """Occupation tuple of every Hilbert basis index, shape (dim, modes)."""
    return _occupations_cached(cutoff.mode_count, cutoff.per_mode_max)


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).reshape(-1)

def unvec(v: np.ndarray) -> np.ndarray:
    n = int(round(np.sqrt(v.size)))
    return np.asarray(v).reshape(n, n)


def left_mult(op: np.ndarray, sparse: bool = False):
    """Superoperator matrix of ``rho -> op @ rho``."""
    if sparse:
        d = op.shape[0]
        return scipy.sparse.kron(
            scipy.sparse.csr_matrix(op), scipy.sparse.identity(d), format="csr"
        )
    return np.kron(op, np.eye(op.shape[0]))


def right_mult(op: np.ndarray, sparse: bool = False):
    """Superoperator matrix of ``rho -> rho @ op``."""
    if sparse:
        d = op.shape[0]
        return scipy.sparse.kron(
            scipy.sparse.identity(d), scipy.sparse.csr_matrix(op.T), format="csr"
        )
    return np.kron(np.eye(op.shape[0]), op.T)


def _represent_sparse(x: SuperOpExpr, cutoff: FockCutoff):
    if x.mode_count != cutoff.mode_count:
        raise ValueError(
            f"expression has {x.mode_count} modes, cutoff has {cutoff.mode_count}"
        )
    ann, cre = mode_operators(cutoff)
    d = cutoff.dim
    out = scipy.sparse.csr_matrix((d * d, d * d), dtype=complex)
    ident = scipy.sparse.identity(d * d, dtype=complex, format="csr")

    def quad(n: int, m: int) -> np.ndarray:
        return cre[n] @ ann[m]

    for kind, coeff in x.terms.items():
        for n in range(x.mode_count):
            for m in range(x.mode_count):
                c = coeff[n, m]
                if c == 0:
                    continue
                if kind is GeneratorKind.K_PLUS:
                    term = left_mult(cre[n], True) @ right_mult(ann[m], True)
                elif kind is GeneratorKind.K_MINUS:
                    term = left_mult(ann[m], True) @ right_mult(cre[n], True)
                elif kind is GeneratorKind.K_ZERO:
                    e = quad(n, m)
                    term = 0.5 * (left_mult(e, True) + right_mult(e, True))
                    if n == m:
                        term = term + 0.5 * ident
                else:  # N_MINUS
                    e = quad(n, m)
                    term = left_mult(e, True) - right_mult(e, True)
                out = out + c * term
    if x.scalar != 0:
        out = out + x.scalar * ident
    return out.tocsr()


def represent(x: SuperOpExpr, cutoff: FockCutoff, sparse: bool = False):
    """Matrix of ``x`` acting on vectorized density matrices."""
    mat = _represent_sparse(x, cutoff)
    return mat if sparse else mat.toarray()


def interior_mask_per_mode(cutoff: FockCutoff, margin: int = 1) -> np.ndarray:
    """Hilbert-index mask: every mode at least ``margin`` below cutoff."""
    occ = occupations(cutoff)
    return (occ <= cutoff.per_mode_max - margin).all(axis=1)


def interior_mask_total(cutoff: FockCutoff, max_total: int) -> np.ndarray:
    """Hilbert-index mask: total photon number at most ``max_total``."""
    return occupations(cutoff).sum(axis=1) <= max_total


def superop_interior_mask(hilbert_mask: np.ndarray) -> np.ndarray:
    """Lift a Hilbert-index mask to vectorized (ket, bra) index pairs."""
    return np.kron(hilbert_mask, hilbert_mask).astype(bool)


def _expm_apply(mat_sparse, t: float, v: np.ndarray) -> np.ndarray:
    if mat_sparse.shape[0] <= _DENSE_LIMIT:
        return scipy.linalg.expm(mat_sparse.toarray() * t) @ v
    return scipy.sparse.linalg.expm_multiply(mat_sparse * t, v)


def _finish_state(
    cutoff: FockCutoff, raw: np.ndarray, leak_tolerance: float | None
) -> DensityMatrix:
    rho = unvec(raw)
    herm_dev = float(np.abs(rho - rho.conj().T).max())
    rho = 0.5 * (rho + rho.conj().T)
    drift = float(abs(rho.trace() - 1.0))
    if leak_tolerance is not None and drift > leak_tolerance:
        warnings.warn(
            f"trace drifted by {drift:.3e} (> {leak_tolerance:.1e}): "
            "state leaked through the Fock cutoff",
            TruncationLeakWarning,
            stacklevel=3,
        )
    return DensityMatrix(cutoff, rho, herm_deviation=herm_dev, trace_drift=drift)


def exact_propagate(
    l: SuperOpExpr,
    rho0: DensityMatrix,
    t: float,
    leak_tolerance: float = 1e-6,
) -> DensityMatrix:
    """Evolve ``rho0`` with the full generator for time ``t``.

    The full generator couples upward in photon number, so at finite
    cutoff probability can leak; drift beyond ``leak_tolerance`` raises
    :class:`TruncationLeakWarning`.  The result is re-symmetrized and
    the pre-repair deviation recorded on the returned state.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    if t == 0:
        return DensityMatrix(rho0.cutoff, rho0.entries.copy())
    mat = represent(l, rho0.cutoff, sparse=True)
    out = _expm_apply(mat, t, vec(rho0.entries))
    return _finish_state(rho0.cutoff, out, leak_tolerance)


def zero_order_propagate(spec: SystemSpec, rho0: DensityMatrix, t: float) -> DensityMatrix:
    """Evolve with the relaxation-only generator (exactly truncatable).

    The zero-order generator never raises total photon number, so trace
    is preserved to rounding at any cutoff.
    """
    return exact_propagate(zero_order(spec), rho0, t, leak_tolerance=1e-10)


def _support_per_mode(rho: np.ndarray, cutoff: FockCutoff, tol: float = 1e-14) -> np.ndarray:
    occ = occupations(cutoff)
    weight = np.abs(rho).sum(axis=1) + np.abs(rho).sum(axis=0)
    used = weight > tol
    if not used.any():
        return np.zeros(cutoff.mode_count, dtype=int)
    return occ[used].max(axis=0)


def evolution_matrix_u(spec: SystemSpec, t: float) -> EvolutionMatrixU:
    """Non-unitary one-sided mode evolution matrix.

    ``U(t) = expm((-i*Omega - Gamma/2) t) @ expm((i*Omega - Gamma/2) t)``;
    it solves the flow of the raising-family coefficient under the
    diagonalized generator, with ``U(0) = I`` and spectral norm <= 1.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    w, g = spec.omega, spec.gamma
    u = scipy.linalg.expm((-1j * w - 0.5 * g) * t) @ scipy.linalg.expm(
        (1j * w - 0.5 * g) * t
    )
    return EvolutionMatrixU(u_of_t=u, time=float(t))


def linear_propagate(spec: SystemSpec, rho0: DensityMatrix, t: float) -> DensityMatrix:
    """First-order-in-``n_thermal`` approximation of the full evolution.

    Applies ``Id + n_T * (K_PLUS - 2 K_ZERO + K_MINUS)[I - U(t)]`` after
    zero-order relaxation.  (The symmetric-family term enters with a
    minus sign: that is what the first derivative of the exactly
    factorized propagator gives, and the remainder is then quadratic in
    ``n_thermal``.)  The raising part adds one excitation per mode, so
    the input state must keep one spare level below the cutoff; with
    that margin the computation is exact at finite dimension.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    cutoff = rho0.cutoff
    support = _support_per_mode(rho0.entries, cutoff)
    if (support > cutoff.per_mode_max - 1).any():
        raise ValueError(
            "linear_propagate needs one spare Fock level per mode above the "
            f"state support (support {support.tolist()}, cutoff {cutoff.per_mode_max})"
        )
    relaxed = _expm_apply(
        represent(zero_order(spec), cutoff, sparse=True), t, vec(rho0.entries)
    )
    u = evolution_matrix_u(spec, t).u_of_t
    c = np.eye(spec.mode_count) - u
    correction = k_plus(c) - 2 * k_zero(c) + k_minus(c)
    corr_mat = represent(correction, cutoff, sparse=True)
    out = relaxed + spec.n_thermal * (corr_mat @ relaxed)
    return _finish_state(cutoff, out, leak_tolerance=None)


def heisenberg_expect(
    spec: SystemSpec, observable: np.ndarray, rho0: DensityMatrix, t: float
) -> complex:
    """Expectation via the conjugate generator acting on the observable.

    Contract: ``Tr(A(t) rho0) == Tr(A exp(L t) rho0)`` with ``A(t)``
    evolved by the trace-pairing adjoint of the generator.
    """
    observable = np.asarray(observable, dtype=complex)
    if observable.shape != (rho0.cutoff.dim, rho0.cutoff.dim):
        raise ValueError(
            f"observable shape {observable.shape} does not match "
            f"Hilbert dimension {rho0.cutoff.dim}"
        )
    if t < 0:
        raise ValueError("t must be non-negative")
    l_adj = conjugate(build_liouvillian(spec))
    mat = represent(l_adj, rho0.cutoff, sparse=True)
    a_t = unvec(_expm_apply(mat, t, vec(observable)))
    return complex(np.trace(a_t @ rho0.entries))


def fock_state(cutoff: FockCutoff, occupation) -> DensityMatrix:
    """Pure Fock state ``|n_0 ... n_{m-1}>``."""
    occupation = list(occupation)
    if len(occupation) != cutoff.mode_count:
        raise ValueError("one occupation number per mode required")
    if any(n < 0 or n > cutoff.per_mode_max for n in occupation):
        raise ValueError(f"occupation {occupation} outside cutoff {cutoff.per_mode_max}")
    idx = 0
    for n in occupation:
        idx = idx * cutoff.local_dim + n
    rho = np.zeros((cutoff.dim, cutoff.dim), dtype=complex)
    rho[idx, idx] = 1.0
    return DensityMatrix(cutoff, rho)


def bell_01_10(cutoff: FockCutoff) -> DensityMatrix:
    """Two-mode entangled single-photon state ``(|01> + |10>)/sqrt(2)``."""
    if cutoff.mode_count != 2:
        raise ValueError("bell_01_10 preset needs exactly two modes")
    d = cutoff.local_dim
    psi = np.zeros(cutoff.dim, dtype=complex)
    psi[0 * d + 1] = 1 / np.sqrt(2)  # |0,1>
    psi[1 * d + 0] = 1 / np.sqrt(2)  # |1,0>
    return DensityMatrix(cutoff, np.outer(psi, psi.conj()))


def thermal_state(cutoff: FockCutoff, mean: float) -> DensityMatrix:
    """Product of per-mode thermal (Gibbs) states with mean occupation."""
    if mean < 0:
        raise ValueError("mean occupation must be non-negative")
    n = np.arange(cutoff.local_dim, dtype=float)
    if mean == 0:
        p = np.zeros_like(n)
        p[0] = 1.0
    else:
        q = mean / (mean + 1.0)
        p = (1 - q) * q**n
        p = p / p.sum()  # renormalize the truncated tail
    local = np.diag(p).astype(complex)
    rho = local
    for _ in range(cutoff.mode_count - 1):
        rho = np.kron(rho, local)
    return DensityMatrix(cutoff, rho)
