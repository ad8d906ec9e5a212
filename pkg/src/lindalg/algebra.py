"""Superoperator algebra with matrix coefficients.

A multi-mode Lindblad generator decomposes over four superoperator
families, each carrying a complex ``m x m`` coefficient matrix (``m`` =
number of bosonic modes), plus a central scalar identity term:

* ``N_MINUS`` -- Hamiltonian commutator part, ``rho -> E rho - rho E``
  summed against the coefficient matrix (``E`` quadratic in mode
  operators).
* ``K_ZERO``  -- symmetric damping part,
  ``rho -> (E rho + rho E') / 2``.
* ``K_PLUS`` / ``K_MINUS`` -- excitation raising / lowering sandwich
  parts, ``rho -> adag_n rho a_m`` and ``rho -> a_m rho adag_n``.
* ``IDENTITY`` -- scalar multiple of the identity map.

The set is closed under commutation and under conjugation by
``exp(K_PLUS)`` / ``exp(K_MINUS)``; every operation below acts on the
coefficient matrices only and is exact (the similarity series
terminate).  All values are immutable and all functions pure.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

__all__ = [
    "GeneratorKind",
    "SuperOpExpr",
    "n_minus",
    "k_zero",
    "k_plus",
    "k_minus",
    "identity_term",
    "zero_expr",
    "expr_add",
    "expr_scale",
    "commutator",
    "similarity_kpm",
]


class GeneratorKind(enum.Enum):
    """Tags for the five superoperator families."""

    N_MINUS = "n_minus"
    K_ZERO = "k_zero"
    K_PLUS = "k_plus"
    K_MINUS = "k_minus"
    IDENTITY = "identity"


_MATRIX_KINDS = (
    GeneratorKind.N_MINUS,
    GeneratorKind.K_ZERO,
    GeneratorKind.K_PLUS,
    GeneratorKind.K_MINUS,
)


def _as_coeff(a, mode_count: int | None = None) -> np.ndarray:
    """Coerce to a frozen complex square matrix, checking the dimension."""
    m = np.array(a, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"coefficient must be a square matrix, got shape {m.shape}")
    if mode_count is not None and m.shape[0] != mode_count:
        raise ValueError(
            f"coefficient dimension {m.shape[0]} does not match mode count {mode_count}"
        )
    m.flags.writeable = False
    return m


@dataclass(frozen=True)
class SuperOpExpr:
    """Formal linear combination over the generator families.

    ``terms`` maps a matrix-carrying :class:`GeneratorKind` to its
    coefficient matrix; absent families are zero.  ``scalar`` is the
    coefficient of the identity superoperator.  Exact-zero coefficient
    matrices are pruned so structural queries (``has``) are meaningful.
    """

    mode_count: int
    terms: Mapping[GeneratorKind, np.ndarray] = field(default_factory=dict)
    scalar: complex = 0j

    def __post_init__(self):
        if self.mode_count < 1:
            raise ValueError("mode_count must be positive")
        clean: dict[GeneratorKind, np.ndarray] = {}
        for kind, mat in self.terms.items():
            if kind not in _MATRIX_KINDS:
                raise ValueError(f"{kind} does not carry a coefficient matrix")
            coeff = _as_coeff(mat, self.mode_count)
            if np.abs(coeff).max() != 0.0:
                clean[kind] = coeff
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "scalar", complex(self.scalar))

    def coeff(self, kind: GeneratorKind) -> np.ndarray:
        """Coefficient matrix of ``kind`` (zeros if absent)."""
        if kind in self.terms:
            return self.terms[kind]
        return np.zeros((self.mode_count, self.mode_count), dtype=complex)

    def has(self, kind: GeneratorKind) -> bool:
        if kind is GeneratorKind.IDENTITY:
            return self.scalar != 0
        return kind in self.terms

    def max_abs_diff(self, other: SuperOpExpr) -> float:
        if self.mode_count != other.mode_count:
            raise ValueError("mode count mismatch")
        d = abs(self.scalar - other.scalar)
        for kind in _MATRIX_KINDS:
            d = max(d, float(np.abs(self.coeff(kind) - other.coeff(kind)).max()))
        return d

    def allclose(self, other: SuperOpExpr, tol: float = 1e-12) -> bool:
        """Entrywise equality of all coefficients within ``tol``."""
        return self.max_abs_diff(other) <= tol

    def __add__(self, other: SuperOpExpr) -> SuperOpExpr:
        return expr_add(self, other)

    def __sub__(self, other: SuperOpExpr) -> SuperOpExpr:
        return expr_add(self, expr_scale(-1, other))

    def __neg__(self) -> SuperOpExpr:
        return expr_scale(-1, self)

    def __mul__(self, c) -> SuperOpExpr:
        return expr_scale(c, self)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        parts = [f"{k.value}[{np.abs(v).max():.3g}]" for k, v in self.terms.items()]
        if self.scalar != 0:
            parts.append(f"id[{self.scalar:.3g}]")
        body = " + ".join(parts) if parts else "0"
        return f"SuperOpExpr(m={self.mode_count}: {body})"


def n_minus(a, mode_count: int | None = None) -> SuperOpExpr:
    """Commutator-family expression with coefficient matrix ``a``."""
    coeff = _as_coeff(a, mode_count)
    return SuperOpExpr(coeff.shape[0], {GeneratorKind.N_MINUS: coeff})


def k_zero(a, mode_count: int | None = None) -> SuperOpExpr:
    """Symmetric-damping-family expression with coefficient ``a``."""
    coeff = _as_coeff(a, mode_count)
    return SuperOpExpr(coeff.shape[0], {GeneratorKind.K_ZERO: coeff})


def k_plus(a, mode_count: int | None = None) -> SuperOpExpr:
    """Raising-sandwich-family expression with coefficient ``a``."""
    coeff = _as_coeff(a, mode_count)
    return SuperOpExpr(coeff.shape[0], {GeneratorKind.K_PLUS: coeff})


def k_minus(a, mode_count: int | None = None) -> SuperOpExpr:
    """Lowering-sandwich-family expression with coefficient ``a``."""
    coeff = _as_coeff(a, mode_count)
    return SuperOpExpr(coeff.shape[0], {GeneratorKind.K_MINUS: coeff})


def identity_term(value: complex, mode_count: int) -> SuperOpExpr:
    """Scalar multiple of the identity superoperator.

    When the scalar originates from a coefficient matrix it equals that
    matrix's trace; pass the trace here.
    """
    return SuperOpExpr(mode_count, {}, complex(value))


def zero_expr(mode_count: int) -> SuperOpExpr:
    return SuperOpExpr(mode_count, {}, 0j)


def expr_add(lhs: SuperOpExpr, rhs: SuperOpExpr) -> SuperOpExpr:
    """Family-wise sum of two expressions."""
    if lhs.mode_count != rhs.mode_count:
        raise ValueError(
            f"mode count mismatch: {lhs.mode_count} vs {rhs.mode_count}"
        )
    terms: dict[GeneratorKind, np.ndarray] = dict(lhs.terms)
    for kind, mat in rhs.terms.items():
        terms[kind] = terms[kind] + mat if kind in terms else mat
    return SuperOpExpr(lhs.mode_count, terms, lhs.scalar + rhs.scalar)


def expr_scale(c, x: SuperOpExpr) -> SuperOpExpr:
    """Multiply every coefficient matrix and the scalar by ``c``."""
    c = complex(c)
    terms = {kind: c * mat for kind, mat in x.terms.items()}
    return SuperOpExpr(x.mode_count, terms, c * x.scalar)


def _acomm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def _comm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def _pair_commutator(
    kl: GeneratorKind, a: np.ndarray, kr: GeneratorKind, b: np.ndarray, m: int
) -> SuperOpExpr:
    """Commutator of two single-family terms, by the closed relations.

    The bracket stays inside the five-family span; the coefficient of the
    result is built from matrix products of ``a`` and ``b`` only.
    """
    K = GeneratorKind
    if kl is K.K_ZERO and kr is K.K_PLUS:
        return k_plus(0.5 * _acomm(a, b), m)
    if kl is K.K_ZERO and kr is K.K_MINUS:
        return k_minus(-0.5 * _acomm(a, b), m)
    if kl is K.K_PLUS and kr is K.K_ZERO:
        return k_plus(-0.5 * _acomm(a, b), m)
    if kl is K.K_MINUS and kr is K.K_ZERO:
        return k_minus(0.5 * _acomm(a, b), m)
    if kl is K.K_MINUS and kr is K.K_PLUS:
        return k_zero(_acomm(a, b), m) + n_minus(-0.5 * _comm(a, b), m)
    if kl is K.K_PLUS and kr is K.K_MINUS:
        return k_zero(-_acomm(a, b), m) + n_minus(-0.5 * _comm(a, b), m)
    if kl is K.N_MINUS:
        if kr is K.N_MINUS:
            return n_minus(_comm(a, b), m)
        family = {K.K_ZERO: k_zero, K.K_PLUS: k_plus, K.K_MINUS: k_minus}[kr]
        return family(_comm(a, b), m)
    if kr is K.N_MINUS:
        family = {K.K_ZERO: k_zero, K.K_PLUS: k_plus, K.K_MINUS: k_minus}[kl]
        return family(_comm(a, b), m)
    if kl is K.K_ZERO and kr is K.K_ZERO:
        # Not needed for single-mode reductions (it vanishes for commuting
        # coefficients) but required for closure on generic matrices.
        return n_minus(0.25 * _comm(a, b), m)
    # same-sign sandwich families commute
    return zero_expr(m)


def commutator(lhs: SuperOpExpr, rhs: SuperOpExpr) -> SuperOpExpr:
    """Bilinear commutator expansion over the closed family relations."""
    if lhs.mode_count != rhs.mode_count:
        raise ValueError(
            f"mode count mismatch: {lhs.mode_count} vs {rhs.mode_count}"
        )
    m = lhs.mode_count
    out = zero_expr(m)
    for kl, a in lhs.terms.items():
        for kr, b in rhs.terms.items():
            out = out + _pair_commutator(kl, a, kr, b, m)
    # identity terms are central: no contribution
    return out


def similarity_kpm(sign: str, b, x: SuperOpExpr) -> SuperOpExpr:
    """Conjugate ``x`` by ``exp`` of a sandwich-family generator.

    ``sign='+'`` computes ``exp(K_PLUS[b]) x exp(-K_PLUS[b])`` and
    ``sign='-'`` the same with ``K_MINUS``.  The expansion terminates
    exactly: commuting families are fixed points, the commutator and
    symmetric families pick up one sandwich term, and the opposite-sign
    sandwich family closes after the quadratic ``b a b`` term.
    """
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    bmat = _as_coeff(b, x.mode_count)
    m = x.mode_count
    K = GeneratorKind
    same = K.K_PLUS if sign == "+" else K.K_MINUS
    opposite = K.K_MINUS if sign == "+" else K.K_PLUS
    same_family = k_plus if sign == "+" else k_minus
    opposite_family = k_minus if sign == "+" else k_plus
    sgn = 1.0 if sign == "+" else -1.0

    out = identity_term(x.scalar, m)
    for kind, a in x.terms.items():
        if kind is same:
            out = out + same_family(a, m)
        elif kind is K.N_MINUS:
            out = out + n_minus(a, m) + same_family(-_comm(a, bmat), m)
        elif kind is K.K_ZERO:
            out = out + k_zero(a, m) + same_family(-sgn * 0.5 * _acomm(a, bmat), m)
        else:
            # opposite-sign sandwich: the quadratic tail closes the series
            out = (
                out
                + opposite_family(a, m)
                + k_zero(-sgn * _acomm(a, bmat), m)
                + n_minus(0.5 * _comm(a, bmat), m)
                + same_family(bmat @ a @ bmat, m)
            )
    return out
