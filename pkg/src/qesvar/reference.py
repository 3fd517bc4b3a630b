"""Finite-difference reference spectrum for 1-D Schrodinger operators.

``H = -d2/dx2 + V(x)`` (units hbar = 2m = 1) on ``[-L, L]`` with Dirichlet
walls is discretized by the 3-point Laplacian.  Eigenvalues of the
resulting symmetric tridiagonal matrix are bracketed by Gershgorin discs and
bisected with Sturm (negative pivot) counts, all requested indices at once.
One Richardson step on nested grids removes the O(h^2) error.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import solve_banded

from .qes import QesModel

__all__ = [
    "TridiagSystem",
    "ReferenceSpectrum",
    "ConvergenceFailure",
    "GridMismatch",
    "discretize",
    "sturm_counts",
    "eigenvalues_bisect",
    "richardson_refine",
    "inverse_iteration",
    "count_sign_changes",
    "reference_spectrum",
]

DEFAULT_L = 5.0
DEFAULT_N = 4000
DEFAULT_TOL = 1e-10
MAX_BISECTIONS = 200


class ConvergenceFailure(RuntimeError):
    pass


class GridMismatch(ValueError):
    pass


@dataclass(frozen=True)
class TridiagSystem:
    diagonal: np.ndarray
    off_diagonal: float
    L: float
    N: int

    @property
    def h(self) -> float:
        return 2 * self.L / (self.N + 1)

    @property
    def grid(self) -> np.ndarray:
        return -self.L + self.h * np.arange(1, self.N + 1)

    def gershgorin(self) -> tuple[float, float]:
        r = 2 * abs(self.off_diagonal)
        return float(self.diagonal.min() - r), float(self.diagonal.max() + r)


@dataclass(frozen=True)
class ReferenceSpectrum:
    eigenvalues: np.ndarray
    L: float
    N: int
    extrapolated: bool = False

    def __len__(self):
        return self.eigenvalues.size

    def __getitem__(self, k):
        return float(self.eigenvalues[k])


def discretize(potential: QesModel | Callable, L: float = DEFAULT_L, N: int = DEFAULT_N) -> TridiagSystem:
    if L <= 0 or N < 3:
        raise ValueError("need L > 0 and N >= 3")
    V = potential.potential if isinstance(potential, QesModel) else potential
    h = 2 * L / (N + 1)
    x = -L + h * np.arange(1, N + 1)
    diag = 2 / h**2 + np.asarray(V(x), dtype=float)
    diag.flags.writeable = False
    return TridiagSystem(diag, -1 / h**2, float(L), int(N))


def sturm_counts(sys: TridiagSystem, shifts) -> np.ndarray:
    """Number of eigenvalues below each shift (negative LDL^T pivots)."""
    s = np.atleast_1d(np.asarray(shifts, dtype=float))
    e2 = sys.off_diagonal**2
    tiny = np.finfo(float).tiny ** 0.5
    d = sys.diagonal
    q = d[0] - s
    count = (q < 0).astype(int)
    for i in range(1, sys.N):
        q = np.where(q == 0, -tiny, q)
        q = (d[i] - s) - e2 / q
        count += q < 0
    return count


def eigenvalues_bisect(sys: TridiagSystem, k_max: int, tol: float = DEFAULT_TOL) -> ReferenceSpectrum:
    """The ``k_max`` smallest eigenvalues, each to absolute ``tol``."""
    if not 0 < k_max <= sys.N:
        raise ValueError("need 0 < k_max <= N")
    if tol <= 0:
        raise ValueError("tol must be positive")
    glo, ghi = sys.gershgorin()
    k = np.arange(k_max)
    lo = np.full(k_max, glo)
    hi = np.full(k_max, ghi)
    for _ in range(MAX_BISECTIONS):
        active = hi - lo > tol
        if not active.any():
            break
        mid = 0.5 * (lo + hi)
        below = sturm_counts(sys, mid)
        # eigenvalue k lies below mid iff more than k eigenvalues are below
        left = below > k
        hi = np.where(active & left, mid, hi)
        lo = np.where(active & ~left, mid, lo)
    else:
        raise ConvergenceFailure(f"bisection did not reach tol={tol} in {MAX_BISECTIONS} steps")
    return ReferenceSpectrum(0.5 * (lo + hi), sys.L, sys.N)


def richardson_refine(coarse: ReferenceSpectrum, fine: ReferenceSpectrum) -> ReferenceSpectrum:
    """Cancel the O(h^2) term: ``(4 E_fine - E_coarse) / 3``."""
    if coarse.L != fine.L:
        raise GridMismatch("different box sizes")
    if fine.N == coarse.N and np.array_equal(fine.eigenvalues, coarse.eigenvalues):
        return ReferenceSpectrum(fine.eigenvalues.copy(), fine.L, fine.N, fine.extrapolated)
    if fine.N != 2 * coarse.N + 1:
        raise GridMismatch(f"fine grid N={fine.N} is not nested in N={coarse.N}")
    k = min(len(coarse), len(fine))
    ev = (4 * fine.eigenvalues[:k] - coarse.eigenvalues[:k]) / 3
    return ReferenceSpectrum(ev, fine.L, fine.N, True)


def inverse_iteration(sys: TridiagSystem, E: float, iterations: int = 3) -> np.ndarray:
    """Eigenvector for an eigenvalue estimate ``E`` (normalized, max-abs positive)."""
    ab = np.zeros((3, sys.N))
    ab[0, 1:] = sys.off_diagonal
    ab[1] = sys.diagonal - E
    ab[2, :-1] = sys.off_diagonal
    # shift off the eigenvalue so the solve stays well posed
    ab[1] -= 1e-9 * max(1.0, abs(E))
    v = np.ones(sys.N) / np.sqrt(sys.N)
    v[: sys.N // 3] *= 1.1
    for _ in range(iterations):
        v = solve_banded((1, 1), ab, v)
        v /= np.linalg.norm(v)
    return v if v[np.argmax(np.abs(v))] > 0 else -v


def count_sign_changes(v: np.ndarray, rel_cut: float = 1e-8) -> int:
    """Sign changes of ``v`` ignoring entries below ``rel_cut * max|v|``."""
    big = v[np.abs(v) > rel_cut * np.abs(v).max()]
    return int(np.count_nonzero(np.diff(np.sign(big)) != 0))


def reference_spectrum(potential: QesModel | Callable, k_max: int = 20, L: float = DEFAULT_L,
                       N: int = DEFAULT_N, tol: float = DEFAULT_TOL,
                       richardson: bool = True) -> ReferenceSpectrum:
    """Lowest ``k_max`` levels; index k is the number of interior nodes."""
    coarse = eigenvalues_bisect(discretize(potential, L, N), k_max, tol)
    if not richardson:
        return coarse
    fine = eigenvalues_bisect(discretize(potential, L, 2 * N + 1), k_max, tol)
    return richardson_refine(coarse, fine)
