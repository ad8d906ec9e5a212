"""Sector-wise spectrum of the diagonalized two-mode Liouvillian.

The diagonalized generator preserves the total ket-side and bra-side
photon numbers ``(u, v)``.  For two modes each sector carries a
``(u+1)(v+1)``-dimensional matrix that is penta-diagonal after
flattening the pair index ``(n, m)`` (mode-1 ket / bra occupation)
n-major; its eigenvalues are Liouvillian eigenvalues.  Coupled sectors
have no closed-form eigenvalues in general, so a dense non-symmetric
eigensolver does the work.

For more than two modes no hand-rolled sector formula is provided; use
:func:`oracle_sector_matrix`, which projects the brute-force Fock
representation of the diagonalized generator onto a sector.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .liouvillian import SystemSpec, diagonalize

__all__ = [
    "SectorIndex",
    "SectorMatrix",
    "DiagCoeffs",
    "diag_coeffs",
    "sector_matrix",
    "sector_eigenvalues",
    "full_spectrum",
    "sector_basis_indices",
    "oracle_sector_matrix",
]


class SectorIndex(NamedTuple):
    """Total ket-side (u) and bra-side (v) photon numbers."""

    u: int
    v: int


@dataclass(frozen=True)
class DiagCoeffs:
    """Mode-space coefficients entering the sector matrices.

    ``a_nm = -i*omega_nm - gamma_nm/2`` multiplies ket-side moves,
    ``b_nm = +i*omega_nm - gamma_nm/2`` bra-side moves.  (These are
    unrelated to the Riccati solution matrices.)
    """

    a_nm: np.ndarray
    b_nm: np.ndarray


@dataclass(frozen=True)
class SectorMatrix:
    sector: SectorIndex
    entries: np.ndarray

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def diag_coeffs(spec: SystemSpec) -> DiagCoeffs:
    w, g = spec.omega, spec.gamma
    return DiagCoeffs(a_nm=-1j * w - 0.5 * g, b_nm=1j * w - 0.5 * g)


def sector_matrix(spec: SystemSpec, sector: SectorIndex) -> SectorMatrix:
    """Penta-diagonal matrix of one ``(u, v)`` sector (two modes only).

    Row/column index is ``(n, m)`` flattened n-major, ``n`` the mode-1
    ket occupation (mode 2 holds ``u - n``), ``m`` its bra counterpart.
    """
    if spec.mode_count != 2:
        raise ValueError(
            f"sector_matrix implements the two-mode case, got {spec.mode_count} modes"
        )
    u, v = sector
    if u < 0 or v < 0:
        raise ValueError(f"sector indices must be non-negative, got {sector}")
    c = diag_coeffs(spec)
    a, b = c.a_nm, c.b_nm
    dim = (u + 1) * (v + 1)
    mat = np.zeros((dim, dim), dtype=complex)

    def flat(n: int, m: int) -> int:
        return n * (v + 1) + m

    for n in range(u + 1):
        for m in range(v + 1):
            row = flat(n, m)
            mat[row, row] = (
                a[0, 0] * n + b[0, 0] * m + a[1, 1] * (u - n) + b[1, 1] * (v - m)
            )
            if n >= 1:
                mat[row, flat(n - 1, m)] = a[0, 1] * np.sqrt(n * (u - n + 1))
            if m <= v - 1:
                mat[row, flat(n, m + 1)] = b[0, 1] * np.sqrt((m + 1) * (v - m))
            if n <= u - 1:
                mat[row, flat(n + 1, m)] = a[1, 0] * np.sqrt((n + 1) * (u - n))
            if m >= 1:
                mat[row, flat(n, m - 1)] = b[1, 0] * np.sqrt(m * (v - m + 1))
    return SectorMatrix(sector=SectorIndex(u, v), entries=mat)


def sector_eigenvalues(mat: SectorMatrix) -> np.ndarray:
    """All eigenvalues (with multiplicity) of a sector matrix."""
    try:
        return np.linalg.eigvals(mat.entries)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise RuntimeError(f"eigensolver failed for sector {mat.sector}") from exc


def full_spectrum(
    spec: SystemSpec, max_total: int
) -> dict[SectorIndex, np.ndarray]:
    """Spectra of every sector with ``u, v <= max_total``.

    Within each sector eigenvalues are sorted by real part descending
    (ties by imaginary part).  The result does not depend on
    ``n_thermal``: the similarity transforms that remove it are
    isospectral.
    """
    if spec.mode_count != 2:
        raise ValueError(
            f"full_spectrum implements the two-mode case, got {spec.mode_count} modes"
        )
    if max_total < 0:
        raise ValueError("max_total must be non-negative")
    out: dict[SectorIndex, np.ndarray] = {}
    for u in range(max_total + 1):
        for v in range(max_total + 1):
            lam = sector_eigenvalues(sector_matrix(spec, SectorIndex(u, v)))
            order = np.lexsort((lam.imag, -lam.real))
            out[SectorIndex(u, v)] = lam[order]
    return out


def sector_basis_indices(cutoff, sector: SectorIndex) -> np.ndarray:
    """Vectorized superoperator indices spanning one sector.

    Ordered ket-major over the Hilbert indices whose total photon
    numbers are ``u`` (ket side) and ``v`` (bra side).  For two modes
    this ordering coincides with the n-major flattening used by
    :func:`sector_matrix`.
    """
    from .fock import occupations  # local import: avoid cycle at module load

    occ = occupations(cutoff)
    totals = occ.sum(axis=1)
    kets = np.nonzero(totals == sector.u)[0]
    bras = np.nonzero(totals == sector.v)[0]
    hdim = occ.shape[0]
    return np.array([k * hdim + b for k in kets for b in bras], dtype=int)


def oracle_sector_matrix(spec: SystemSpec, sector: SectorIndex, cutoff) -> np.ndarray:
    """Sector block of the brute-force represented diagonal generator.

    Works for any mode count; requires ``max(u, v) <= cutoff.per_mode_max``
    so the sector is complete in the truncated space.
    """
    from .fock import represent

    if max(sector) > cutoff.per_mode_max:
        raise ValueError(
            f"sector {sector} incomplete at per-mode cutoff {cutoff.per_mode_max}"
        )
    l_diag = diagonalize(spec).l_diag
    mat = represent(l_diag, cutoff)
    idx = sector_basis_indices(cutoff, sector)
    return mat[np.ix_(idx, idx)]
