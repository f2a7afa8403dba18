"""Finite-difference Hamiltonian assembly and its tridiagonal eigenproblem.

Discretizing -(hbar^2/2m) phi'' + V phi = E phi on a uniform interior grid
with Dirichlet walls and multiplying through by 2m*dl^2/hbar^2 yields a
symmetric tridiagonal matrix with off-diagonal -1 and diagonal

    v_i = 2 + dl^2 * 2m * V(p_i) / hbar^2,

where dl is the grid spacing converted from price to length units.  Its
eigenvalues lam map back to energies via E = lam * hbar^2 / (2m * dl^2).

The solver is the classic QL iteration with implicit (Wilkinson) shifts on
the tridiagonal form, with plane-rotation accumulation of eigenvectors;
see e.g. the EISPACK ``tql2`` routine or Numerical Recipes ch. 11.  It is
deterministic and needs no external linear-algebra dependency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericError
from .potential import Grid, PotentialWell
from .units import NATURAL, UnitSystem

SIGN_EPS = 1e-12  # threshold for the leading-component sign convention


@dataclass(frozen=True, eq=False)
class TridiagonalMatrix:
    """Symmetric tridiagonal system: dimensionless diagonal, off-diagonal -1."""

    diag: np.ndarray
    offdiag: np.ndarray
    grid: Grid
    mass: float
    units: UnitSystem
    delta_length: float

    def __post_init__(self):
        if len(self.diag) != self.grid.n:
            raise DomainError("diagonal length does not match the grid")
        if len(self.offdiag) != self.grid.n - 1:
            raise DomainError("off-diagonal must have n-1 entries")
        if not np.all(self.offdiag == -1.0):
            raise DomainError("off-diagonal entries must all be -1")
        self.diag.flags.writeable = False
        self.offdiag.flags.writeable = False

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def energy_scale(self) -> float:
        """Factor converting a matrix eigenvalue into an energy."""
        return self.units.hbar**2 / (2.0 * self.mass * self.delta_length**2)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Lowest-k eigenpairs: ascending energies, grid-sampled states.

    Each state is normalized so sum(phi^2) * delta = 1 and carries the sign
    convention that its first component above 1e-12 is positive.
    """

    energies: np.ndarray
    states: np.ndarray
    grid: Grid

    def __post_init__(self):
        if self.states.shape != (len(self.energies), self.grid.n):
            raise DomainError(
                f"states shape {self.states.shape} does not match "
                f"{len(self.energies)} energies on {self.grid.n} points"
            )
        if np.any(np.diff(self.energies) < 0.0):
            raise DomainError("energies must be ascending")
        self.energies.flags.writeable = False
        self.states.flags.writeable = False

    @property
    def k(self) -> int:
        return len(self.energies)


def assemble_hamiltonian(
    well: PotentialWell, mass: float, units: UnitSystem = NATURAL
) -> TridiagonalMatrix:
    """Build the dimensionless finite-difference matrix for a well.

    The price spacing delta is mapped to a length as
    delta_length = return_to_length * (delta / center): relative moves, not
    raw prices, play the position role.
    """
    if not mass > 0.0:
        raise DomainError(f"mass must be > 0, got {mass}")
    grid = well.grid
    delta_length = units.return_to_length * (grid.delta / grid.center)
    diag = 2.0 + delta_length**2 * 2.0 * mass * well.values / units.hbar**2
    offdiag = -np.ones(grid.n - 1)
    return TridiagonalMatrix(
        diag=diag,
        offdiag=offdiag,
        grid=grid,
        mass=mass,
        units=units,
        delta_length=delta_length,
    )


def _ql_implicit_shift(
    d: np.ndarray, e: np.ndarray, z: np.ndarray, iteration_cap: int
) -> None:
    """QL iteration with implicit shifts, in place.

    ``d`` holds the diagonal, ``e`` the off-diagonal in e[0..n-2] (e[n-1]
    scratch), ``z`` accumulates the plane rotations (identity on entry).
    On exit d holds eigenvalues (unsorted) and the columns of z the
    matching eigenvectors.
    """
    n = d.size
    iterations = 0
    for l in range(n):
        while True:
            for m in range(l, n - 1):
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) + dd == dd:
                    break
            else:
                m = n - 1
            if m == l:
                break
            iterations += 1
            if iterations > iteration_cap:
                raise NumericError(
                    f"eigensolver did not converge within {iteration_cap} iterations"
                )
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflowed = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    # rotation annihilated early: drop the shift and restart
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflowed = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                col = z[:, i + 1].copy()
                z[:, i + 1] = s * z[:, i] + c * col
                z[:, i] = c * z[:, i] - s * col
            if underflowed:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0


def _apply_sign_convention(state: np.ndarray) -> np.ndarray:
    for value in state:
        if abs(value) > SIGN_EPS:
            return -state if value < 0.0 else state
    return state


def normalize_states(states: np.ndarray, delta: float) -> np.ndarray:
    """Scale states so sum(phi^2) * delta = 1 and fix their sign.

    Accepts a single state (1-D) or a stack of states (2-D, one per row).
    """
    if not delta > 0.0:
        raise DomainError(f"delta must be > 0, got {delta}")
    arr = np.asarray(states, dtype=float)
    single = arr.ndim == 1
    stack = arr[np.newaxis, :] if single else arr
    out = np.empty_like(stack)
    for j, row in enumerate(stack):
        norm_sq = float(np.dot(row, row)) * delta
        if not np.isfinite(norm_sq) or norm_sq == 0.0:
            raise NumericError("cannot normalize a zero or non-finite state")
        out[j] = _apply_sign_convention(row / math.sqrt(norm_sq))
    return out[0] if single else out


def solve_spectrum(
    matrix: TridiagonalMatrix, k: int, iteration_cap: int | None = None
) -> Spectrum:
    """Lowest k eigenpairs of the assembled matrix, as energies and states.

    Ordering ties between numerically equal eigenvalues are broken by the
    lexicographic order of the sign-fixed eigenvectors so results are
    deterministic.
    """
    n = matrix.n
    if not 1 <= k <= n:
        raise DomainError(f"k must be in [1, {n}], got {k}")
    if iteration_cap is None:
        iteration_cap = 50 * n
    d = matrix.diag.astype(float).copy()
    e = np.zeros(n)
    e[: n - 1] = matrix.offdiag
    z = np.eye(n)
    _ql_implicit_shift(d, e, z, iteration_cap)

    order = sorted(range(n), key=d.__getitem__)
    start = 0
    while start < n:  # exact ties: rare, but keep the order well-defined
        stop = start
        while stop + 1 < n and d[order[stop + 1]] == d[order[start]]:
            stop += 1
        if stop > start:
            order[start : stop + 1] = sorted(
                order[start : stop + 1],
                key=lambda j: tuple(_apply_sign_convention(z[:, j])),
            )
        start = stop + 1

    keep = order[:k]
    energies = np.array([d[j] for j in keep]) * matrix.energy_scale
    states = normalize_states(z[:, keep].T, matrix.grid.delta)
    return Spectrum(energies=energies, states=states, grid=matrix.grid)
