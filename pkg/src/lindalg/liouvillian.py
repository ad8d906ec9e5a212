"""Multi-mode thermal Liouvillian: construction and exact diagonalization.

The GKSL generator for ``m`` coupled bosonic modes relaxing into a
thermal environment is fixed by a Hermitian frequency matrix ``Omega``,
a Hermitian positive-definite relaxation matrix ``Gamma`` and the mean
thermal photon number ``n_T``.  In the family notation of
:mod:`lindalg.algebra` it reads::

    L = N_MINUS[-i*Omega] - K_ZERO[(2*n_T+1)*Gamma]
        + K_PLUS[n_T*Gamma] + K_MINUS[(n_T+1)*Gamma] + Tr(Gamma)/2

Conjugating by ``exp(K_PLUS[B])`` and then ``exp(K_MINUS[A])`` removes
the sandwich families when ``B`` and ``A`` solve two algebraic Riccati
equations; for this generator the solutions are scalar multiples of the
identity, so the diagonalization is closed-form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    GeneratorKind,
    SuperOpExpr,
    identity_term,
    k_minus,
    k_plus,
    k_zero,
    n_minus,
    similarity_kpm,
)

__all__ = [
    "SystemSpec",
    "TransformIntermediate",
    "DiagonalizationResult",
    "AlgebraConsistencyError",
    "build_liouvillian",
    "transform_once",
    "transform_twice",
    "solve_riccati",
    "diagonalize",
    "zero_order",
    "conjugate",
]

_HERM_TOL = 1e-12
_POS_TOL = 1e-14
_RESIDUAL_TOL = 1e-10


class AlgebraConsistencyError(RuntimeError):
    """An internal identity failed: algebra bug, not bad input."""


def _frozen_complex(a) -> np.ndarray:
    m = np.array(a, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    m.flags.writeable = False
    return m


@dataclass(frozen=True)
class SystemSpec:
    """Physical input: frequency matrix, relaxation matrix, thermal photons.

    Raises ``ValueError`` naming the violated field for non-Hermitian
    ``omega``/``gamma``, non-positive-definite ``gamma`` or negative
    ``n_thermal``.
    """

    omega: np.ndarray
    gamma: np.ndarray
    n_thermal: float

    def __post_init__(self):
        omega = _frozen_complex(self.omega)
        gamma = _frozen_complex(self.gamma)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "n_thermal", float(self.n_thermal))
        for name, mat in (("omega", omega), ("gamma", gamma)):
            if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
                raise ValueError(f"{name}: must be a square matrix, got {mat.shape}")
        if omega.shape != gamma.shape:
            raise ValueError(
                f"omega {omega.shape} and gamma {gamma.shape} differ in dimension"
            )
        for name, mat in (("omega", omega), ("gamma", gamma)):
            scale = max(np.abs(mat).max(), 1.0)
            dev = np.abs(mat - mat.conj().T).max()
            if dev > _HERM_TOL * scale:
                raise ValueError(f"{name}: not Hermitian (deviation {dev:.3e})")
        lowest = np.linalg.eigvalsh(gamma).min()
        if lowest <= _POS_TOL * max(np.abs(gamma).max(), 1.0):
            raise ValueError(
                f"gamma: not positive definite (smallest eigenvalue {lowest:.3e})"
            )
        if self.n_thermal < 0:
            raise ValueError(f"n_thermal: must be non-negative, got {self.n_thermal}")

    @property
    def mode_count(self) -> int:
        return self.omega.shape[0]


@dataclass(frozen=True)
class TransformIntermediate:
    """Coefficient matrices after one (p, q, r) and two (x, y, z) transforms."""

    p: np.ndarray
    q: np.ndarray
    r: np.ndarray
    x: np.ndarray | None = None
    y: np.ndarray | None = None
    z: np.ndarray | None = None


@dataclass(frozen=True)
class DiagonalizationResult:
    a_matrix: np.ndarray
    b_matrix: np.ndarray
    l_diag: SuperOpExpr
    residual_r: float
    residual_z: float


def build_liouvillian(spec: SystemSpec) -> SuperOpExpr:
    """Assemble the thermal Liouvillian in family form."""
    w, g, nt = spec.omega, spec.gamma, spec.n_thermal
    m = spec.mode_count
    return (
        n_minus(-1j * w)
        + k_zero(-(2 * nt + 1) * g)
        + k_plus(nt * g)
        + k_minus((nt + 1) * g)
        + identity_term(0.5 * np.trace(g), m)
    )


def _acomm(a, b):
    return a @ b + b @ a


def _comm(a, b):
    return a @ b - b @ a


def transform_once(
    spec: SystemSpec, b
) -> tuple[SuperOpExpr, TransformIntermediate]:
    """Conjugate the Liouvillian by ``exp(K_PLUS[b])``.

    Returns the transformed expression together with the hand-derived
    coefficient matrices: ``p`` (commutator family), ``q`` (negated
    symmetric family) and ``r`` (raising family).  ``r`` is the
    quadratic Riccati polynomial in ``b``; the transform removes the
    raising family exactly when ``r`` vanishes.
    """
    b = np.array(b, dtype=complex)
    w, g, nt = spec.omega, spec.gamma, spec.n_thermal
    transformed = similarity_kpm("+", b, build_liouvillian(spec))
    p = -1j * w + 0.5 * (nt + 1) * _comm(g, b)
    q = (2 * nt + 1) * g + (nt + 1) * _acomm(g, b)
    r = (
        1j * _comm(w, b)
        + 0.5 * (2 * nt + 1) * _acomm(g, b)
        + nt * g
        + (nt + 1) * b @ g @ b
    )
    return transformed, TransformIntermediate(p=p, q=q, r=r)


def transform_twice(
    spec: SystemSpec, a, b
) -> tuple[SuperOpExpr, TransformIntermediate]:
    """Conjugate by ``exp(K_PLUS[b])`` then ``exp(K_MINUS[a])``.

    ``x``/``y`` are the final commutator / symmetric coefficients and
    ``z`` the lowering-family coefficient; ``z`` vanishing is the second
    Riccati condition.
    """
    a = np.array(a, dtype=complex)
    once, inter = transform_once(spec, b)
    transformed = similarity_kpm("-", a, once)
    p, q, r = inter.p, inter.q, inter.r
    x = p + 0.5 * _comm(r, a)
    y = _acomm(r, a) - q
    z = _comm(a, p) - 0.5 * _acomm(q, a) + a @ r @ a + (spec.n_thermal + 1) * spec.gamma
    return transformed, TransformIntermediate(p=p, q=q, r=r, x=x, y=y, z=z)


def solve_riccati(spec: SystemSpec) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form solution of the two Riccati conditions.

    ``b = -n_T/(n_T+1) * I`` nullifies the raising coefficient and
    ``a = (n_T+1) * I`` the lowering one.  As a cross-check, the leading
    orders of the small-``n_T`` ansatz ``b ~ b0 + n_T*b1`` (``b0 = 0``,
    ``b1 = -I``) are verified against the defining equations before
    returning.
    """
    nt = spec.n_thermal
    m = spec.mode_count
    eye = np.eye(m, dtype=complex)
    b = -(nt / (nt + 1)) * eye
    a = (nt + 1) * eye

    # perturbative cross-check of the closed form
    w, g = spec.omega, spec.gamma
    b0 = np.zeros((m, m), dtype=complex)
    b1 = -eye
    res0 = (1j * w + 0.5 * g) @ b0 + b0 @ (-1j * w + 0.5 * g) + b0 @ g @ b0
    res1 = (1j * w + 0.5 * g) @ b1 + b1 @ (-1j * w + 0.5 * g) + g
    scale = max(np.abs(g).max(), np.abs(w).max(), 1.0)
    if np.abs(res0).max() > _RESIDUAL_TOL * scale or np.abs(res1).max() > _RESIDUAL_TOL * scale:
        raise AlgebraConsistencyError(
            "small-n_T ansatz does not satisfy the Riccati expansion"
        )
    lin = b0 + nt * b1
    if np.abs(lin - b).max() > nt * nt + 1e-15:
        raise AlgebraConsistencyError(
            "closed-form solution disagrees with the linear ansatz at first order"
        )
    return a, b


def diagonalize(spec: SystemSpec) -> DiagonalizationResult:
    """Two-step similarity diagonalization of the Liouvillian.

    The returned expression contains only the commutator family, the
    symmetric family and the identity; the removed sandwich-family
    residuals are recorded and must vanish to rounding.
    """
    a, b = solve_riccati(spec)
    transformed, inter = transform_twice(spec, a, b)
    residual_r = float(np.abs(inter.r).max())
    residual_z = float(np.abs(inter.z).max())
    scale = max(np.abs(spec.gamma).max(), np.abs(spec.omega).max(), 1.0)
    if residual_r > _RESIDUAL_TOL * scale or residual_z > _RESIDUAL_TOL * scale:
        raise AlgebraConsistencyError(
            f"diagonalization residuals too large: |r|={residual_r:.3e}, "
            f"|z|={residual_z:.3e}"
        )
    # drop the rounding-level sandwich coefficients: the result is
    # structurally diagonal by construction
    l_diag = (
        n_minus(transformed.coeff(GeneratorKind.N_MINUS))
        + k_zero(transformed.coeff(GeneratorKind.K_ZERO))
        + identity_term(transformed.scalar, spec.mode_count)
    )
    return DiagonalizationResult(
        a_matrix=a,
        b_matrix=b,
        l_diag=l_diag,
        residual_r=residual_r,
        residual_z=residual_z,
    )


def zero_order(spec: SystemSpec) -> SuperOpExpr:
    """Relaxation-only generator (thermal excitation dropped).

    Equals the full Liouvillian at ``n_thermal = 0`` and is connected to
    the diagonalized form by ``exp(-K_MINUS[I]) L_diag exp(K_MINUS[I])``;
    that identity is re-derived symbolically here as a self-check.
    """
    w, g = spec.omega, spec.gamma
    m = spec.mode_count
    l0 = (
        n_minus(-1j * w)
        + k_zero(-g)
        + k_minus(g)
        + identity_term(0.5 * np.trace(g), m)
    )
    l_diag = (
        n_minus(-1j * w) + k_zero(-g) + identity_term(0.5 * np.trace(g), m)
    )
    via_transform = similarity_kpm("-", -np.eye(m), l_diag)
    if not via_transform.allclose(l0, tol=1e-12 * max(np.abs(g).max(), 1.0)):
        raise AlgebraConsistencyError(
            "zero-order generator disagrees with the transformed diagonal form"
        )
    return l0


def conjugate(l: SuperOpExpr) -> SuperOpExpr:
    """Adjoint with respect to the trace pairing ``Tr(A . rho)``.

    Left and right multiplications swap roles, which family-wise means:
    the raising and lowering coefficients interchange, the commutator
    coefficient flips sign, and the symmetric and identity parts are
    fixed.  This is an involution and realizes
    ``Tr(A exp(L t) rho) == Tr((exp(L+ t) A) rho)``.
    """
    K = GeneratorKind
    terms: dict[GeneratorKind, np.ndarray] = {}
    if l.has(K.N_MINUS):
        terms[K.N_MINUS] = -l.coeff(K.N_MINUS)
    if l.has(K.K_ZERO):
        terms[K.K_ZERO] = l.coeff(K.K_ZERO)
    if l.has(K.K_PLUS):
        terms[K.K_MINUS] = l.coeff(K.K_PLUS)
    if l.has(K.K_MINUS):
        terms[K.K_PLUS] = l.coeff(K.K_MINUS)
    return SuperOpExpr(l.mode_count, terms, l.scalar)
