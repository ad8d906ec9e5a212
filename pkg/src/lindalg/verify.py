"""Cross-check suite: symbolic algebra vs brute-force Fock oracle.

Every identity the package relies on is re-derived numerically for a
given system: commutator closure, exponential similarity rewrites,
Riccati residuals, the factorized propagator, the flow identities behind
the linear approximation, and trace duality of the conjugate generator.
Randomized inputs are drawn from a fixed seed so reports are
reproducible byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import algebra as alg
from .algebra import GeneratorKind, SuperOpExpr
from .fock import (
    FockCutoff,
    interior_mask_per_mode,
    interior_mask_total,
    represent,
    superop_interior_mask,
    unvec,
    vec,
    evolution_matrix_u,
)
from .liouvillian import (
    SystemSpec,
    build_liouvillian,
    conjugate,
    diagonalize,
    solve_riccati,
    transform_twice,
    zero_order,
)

__all__ = ["IdentityCheck", "run_identity_suite"]

_FAMILIES = {
    "n_minus": alg.n_minus,
    "k_zero": alg.k_zero,
    "k_plus": alg.k_plus,
    "k_minus": alg.k_minus,
}


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual < self.tolerance


def _rand_matrix(rng: np.random.Generator, m: int) -> np.ndarray:
    return rng.uniform(-1, 1, (m, m)) + 1j * rng.uniform(-1, 1, (m, m))


def _masked_max(a: np.ndarray, mask: np.ndarray) -> float:
    return float(np.abs(a)[np.ix_(mask, mask)].max())


def run_identity_suite(
    spec: SystemSpec,
    cutoff: int = 4,
    tolerance: float | None = None,
    seed: int = 2024,
) -> list[IdentityCheck]:
    """Run every oracle identity for ``spec``; returns one check per name.

    ``tolerance`` overrides each identity's default when given.  The
    per-mode cutoff bounds the Fock oracle size; two-mode suites above
    cutoff 5 get expensive (dense matrix exponentials).
    """
    rng = np.random.default_rng(seed)
    m = spec.mode_count
    cut = FockCutoff(m, cutoff)
    checks: list[IdentityCheck] = []

    def add(name: str, residual: float, default_tol: float) -> None:
        tol = default_tol if tolerance is None else tolerance
        checks.append(IdentityCheck(name, float(residual), tol))

    mask_pm = superop_interior_mask(interior_mask_per_mode(cut, 1))

    # commutator closure, every ordered family pair
    for ln, lf in _FAMILIES.items():
        for rn, rf in _FAMILIES.items():
            x, y = lf(_rand_matrix(rng, m)), rf(_rand_matrix(rng, m))
            sym = represent(alg.commutator(x, y), cut)
            rx, ry = represent(x, cut), represent(y, cut)
            add(
                f"commutator[{ln},{rn}]",
                _masked_max(sym - (rx @ ry - ry @ rx), mask_pm),
                1e-9,
            )

    # exponential similarity rewrites, both signs
    mixed = (
        alg.n_minus(_rand_matrix(rng, m))
        + alg.k_zero(_rand_matrix(rng, m))
        + alg.k_plus(_rand_matrix(rng, m))
        + alg.k_minus(_rand_matrix(rng, m))
        + alg.identity_term(0.5 + 0.25j, m)
    )
    for sign, gen in (("+", alg.k_plus), ("-", alg.k_minus)):
        b = 0.3 * _rand_matrix(rng, m)
        sym = represent(alg.similarity_kpm(sign, b, mixed), cut)
        g = represent(gen(b), cut)
        num = scipy.linalg.expm(g) @ represent(mixed, cut) @ scipy.linalg.expm(-g)
        add(f"similarity[{sign}]", _masked_max(sym - num, mask_pm), 1e-9)

    # Riccati residuals of the closed-form diagonalization
    a_sol, b_sol = solve_riccati(spec)
    _, inter = transform_twice(spec, a_sol, b_sol)
    add("riccati_residual_r", np.abs(inter.r).max(), 1e-12)
    add("riccati_residual_z", np.abs(inter.z).max(), 1e-12)

    # diagonal form is structurally free of sandwich families
    l_diag = diagonalize(spec).l_diag
    has_sandwich = l_diag.has(GeneratorKind.K_PLUS) or l_diag.has(
        GeneratorKind.K_MINUS
    )
    add("diagonal_structure", 1.0 if has_sandwich else 0.0, 0.5)

    # zero-order generator vs transformed diagonal form (symbolic)
    l0 = zero_order(spec)
    via = alg.similarity_kpm("-", -np.eye(m), l_diag)
    add("zero_order_transform", via.max_abs_diff(l0), 1e-10)

    # conjugation is an involution (symbolic)
    l = build_liouvillian(spec)
    add("conjugate_involution", conjugate(conjugate(l)).max_abs_diff(l), 1e-14)

    # factorized propagator: full evolution as sandwiched zero-order
    gnorm = float(np.linalg.norm(spec.gamma, 2))
    t_fact = 0.03 / gnorm
    nt = spec.n_thermal
    eye = np.eye(m)
    kp = represent(alg.k_plus(eye), cut)
    km = represent(alg.k_minus(eye), cut)
    lmat = represent(l, cut)
    l0mat = represent(l0, cut)
    lhs = scipy.linalg.expm(lmat * t_fact)
    rhs = (
        scipy.linalg.expm((nt / (nt + 1)) * kp)
        @ scipy.linalg.expm(-nt * km)
        @ scipy.linalg.expm(l0mat * t_fact)
        @ scipy.linalg.expm(nt * km)
        @ scipy.linalg.expm(-(nt / (nt + 1)) * kp)
    )
    mask_tot = superop_interior_mask(interior_mask_total(cut, max(cutoff - 4, 0)))
    add("factorization", _masked_max(lhs - rhs, mask_tot), 1e-6)

    # flow identities behind the linear approximation; the diagonal
    # generator preserves total photon number, so compare on complete
    # sectors with one level spare for the raising family
    ld_mat = represent(l_diag, cut)
    t_flow = 0.4 / gnorm
    eld = scipy.linalg.expm(ld_mat * t_flow)
    eldm = scipy.linalg.expm(-ld_mat * t_flow)
    k0_i = represent(alg.k_zero(eye), cut)
    mask_flow = superop_interior_mask(interior_mask_total(cut, cutoff - 1))
    add("flow_k_zero_invariant", _masked_max(eld @ k0_i @ eldm - k0_i, mask_flow), 1e-6)
    u_t = evolution_matrix_u(spec, t_flow).u_of_t
    kp_u = represent(alg.k_plus(u_t), cut)
    add("flow_k_plus_evolution", _masked_max(eld @ kp @ eldm - kp_u, mask_flow), 1e-6)
    ekm = scipy.linalg.expm(-km)
    ekmi = scipy.linalg.expm(km)
    k0_u = represent(alg.k_zero(u_t), cut)
    km_u = represent(alg.k_minus(u_t), cut)
    add(
        "lowering_sandwich_k_plus",
        _masked_max(ekm @ kp_u @ ekmi - (kp_u - 2 * k0_u + km_u), mask_flow),
        1e-6,
    )
    km_i = represent(alg.k_minus(eye), cut)
    add(
        "lowering_sandwich_k_zero",
        _masked_max(ekm @ k0_i @ ekmi - (k0_i - km_i), mask_flow),
        1e-6,
    )

    # trace duality of the conjugate generator
    lp_mat = represent(conjugate(l), cut)
    t_dual = 0.3 / gnorm
    prop = scipy.linalg.expm(lmat * t_dual)
    prop_adj = scipy.linalg.expm(lp_mat * t_dual)
    worst = 0.0
    for _ in range(3):
        a_obs = _rand_matrix(rng, cut.dim)
        r = _rand_matrix(rng, cut.dim)
        rho = r @ r.conj().T
        rho = rho / rho.trace()
        lhs_tr = np.trace(a_obs @ unvec(prop @ vec(rho)))
        rhs_tr = np.trace(unvec(prop_adj @ vec(a_obs)) @ rho)
        worst = max(worst, abs(lhs_tr - rhs_tr))
    add("trace_duality", worst, 1e-9)

    return checks
