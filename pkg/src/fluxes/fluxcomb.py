"""Linear-combined fluxes built from two-point fluxes.

A FluxMatrix A over an offset set Z defines the interface flux

    f_{k+1/2} = sum_{l,m in Z} A_lm h(u_{k+l}, u_{k+m})

where offset 0 is the cell left of the interface. All construction runs in
exact rational arithmetic (fractions.Fraction); entries are converted to
floats once, at evaluation time. Evaluation on object arrays of Fraction
stays exact, which the order checks rely on.

Conventions:
- interior matrices live on {-p+1, ..., p} and couple only pairs that
  straddle the interface (min(l, m) <= 0 < max(l, m));
- the right boundary family A^{p,s}, s = 1..p, lives on
  {1-p-s, ..., p+1-s}, so A^{p,p} reaches exactly one cell past the
  interface (the ghost);
- the left family is the mirror image l -> 1-l of the right one.
"""

from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np
import structlog
from numpy.typing import NDArray

from src.exceptions import (
    InvalidOrderError,
    SingularSystemError,
    WindowMismatchError,
)
from src.physics.equations import ConservationLaw
from src.physics.twopoint import TwoPointFlux

logger = structlog.get_logger(__name__)

RationalRows = tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class FluxMatrix:
    """Symmetric, zero-diagonal rational coefficient matrix over an offset range.

    Attributes:
        p: Half-order of the interior flux the matrix belongs to.
        z: Shift; offsets run from 1 - z to size - z.
        entries: Dense rows of exact coefficients, ordered by offset.
        index: 0 for interior, s > 0 for the right boundary family, -s for the left.
    """

    p: int
    z: int
    entries: RationalRows
    index: int = 0

    def __post_init__(self) -> None:
        size = len(self.entries)
        if self.p < 1:
            raise InvalidOrderError("p must be at least 1", field="p", details={"p": self.p})
        if any(len(row) != size for row in self.entries):
            raise ValueError("flux matrix must be square")
        if not 1 <= self.z <= size:
            raise ValueError(f"shift z={self.z} puts offset 0 outside the stencil")
        for i in range(size):
            if self.entries[i][i] != 0:
                raise ValueError(f"diagonal entry at offset {i + 1 - self.z} is not zero")
            for j in range(i):
                if self.entries[i][j] != self.entries[j][i]:
                    raise ValueError("flux matrix is not symmetric")

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def lowest(self) -> int:
        """Smallest offset in the stencil."""
        return 1 - self.z

    @property
    def highest(self) -> int:
        """Largest offset in the stencil."""
        return self.size - self.z

    @property
    def origin(self) -> int:
        """Array position of offset 0."""
        return self.z - 1

    @property
    def offsets(self) -> range:
        return range(self.lowest, self.highest + 1)

    @property
    def total(self) -> Fraction:
        """Sum of all entries; 1 for every consistent flux."""
        return sum((sum(row, Fraction(0)) for row in self.entries), Fraction(0))

    def entry(self, l: int, m: int) -> Fraction:
        """Coefficient A_lm addressed by offsets."""
        return self.entries[l - self.lowest][m - self.lowest]

    @cached_property
    def pairs(self) -> tuple[tuple[int, int, Fraction], ...]:
        """Nonzero upper-triangle entries (l, m, A_lm) with l < m."""
        out = []
        for i, row in enumerate(self.entries):
            for j in range(i + 1, self.size):
                if row[j] != 0:
                    out.append((i + self.lowest, j + self.lowest, row[j]))
        return tuple(out)

    def as_array(self) -> NDArray[np.float64]:
        """Entries as a float matrix."""
        return np.array([[float(x) for x in row] for row in self.entries])

    def to_csv_rows(self) -> list[tuple[int, int, int, int]]:
        """(row offset, column offset, numerator, denominator) for every entry."""
        return [
            (l, m, self.entry(l, m).numerator, self.entry(l, m).denominator)
            for l in self.offsets
            for m in self.offsets
        ]

    def to_latex(self) -> str:
        """Array in the layout of the published matrices."""
        lines = [
            f"A^{{{self.p}, {self.index}}} = \\left[",
            f"\t\\begin{{array}}{{{'c' * self.size}}}",
        ]
        for row in self.entries:
            lines.append("\t\t" + " & ".join(_latex_entry(x) for x in row) + " \\\\")
        lines.append("\t\\end{array}")
        lines.append("\t\\right]")
        return "\n".join(lines)


def _latex_entry(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"\\frac{{{x.numerator}}}{{{x.denominator}}}"


def _freeze(rows: Iterable[Iterable[Fraction]]) -> RationalRows:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def solve_exact(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Solve a square rational system by Gauss-Jordan elimination.

    Raises:
        SingularSystemError: If the matrix is singular.
    """
    n = len(matrix)
    aug = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs, strict=True)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise SingularSystemError(
                "Moment system is singular", details={"size": n, "column": col}
            )
        aug[col], aug[pivot] = aug[pivot], aug[col]
        lead = aug[col][col]
        aug[col] = [x / lead for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col], strict=True)]
    return [row[-1] for row in aug]


@lru_cache(maxsize=None)
def lmr_coefficients(p: int) -> tuple[Fraction, ...]:
    """Coefficients c_p^r, r = 1..p, of the centered order-2p flux.

    They solve sum_r r c_r = 1 and sum_r r^(2k+1) c_r = 0 for k = 1..p-1.
    """
    if p < 1:
        raise InvalidOrderError("p must be at least 1", field="p", details={"p": p})
    matrix = [[Fraction(r) ** (2 * k + 1) for r in range(1, p + 1)] for k in range(p)]
    rhs = [Fraction(1)] + [Fraction(0)] * (p - 1)
    return tuple(solve_exact(matrix, rhs))


@lru_cache(maxsize=None)
def interior_matrix(p: int) -> FluxMatrix:
    """Centered order-2p matrix over {-p+1, ..., p}."""
    coefficients = lmr_coefficients(p)
    offsets = range(-p + 1, p + 1)
    rows = [
        [
            coefficients[abs(l - m) - 1] / 2
            if min(l, m) <= 0 < max(l, m) and abs(l - m) <= p
            else Fraction(0)
            for m in offsets
        ]
        for l in offsets
    ]
    return FluxMatrix(p=p, z=p, entries=_freeze(rows), index=0)


def embed_right(matrix: FluxMatrix) -> FluxMatrix:
    """Append a zero row and column at offset highest + 1."""
    rows = [list(row) + [Fraction(0)] for row in matrix.entries]
    rows.append([Fraction(0)] * (matrix.size + 1))
    return FluxMatrix(matrix.p, matrix.z, _freeze(rows), matrix.index)


def embed_left(matrix: FluxMatrix) -> FluxMatrix:
    """Prepend a zero row and column at offset lowest - 1."""
    rows = [[Fraction(0)] * (matrix.size + 1)]
    rows.extend([Fraction(0)] + list(row) for row in matrix.entries)
    return FluxMatrix(matrix.p, matrix.z + 1, _freeze(rows), matrix.index)


def shift_right(matrix: FluxMatrix) -> FluxMatrix:
    """Re-index so that the new A_lm is the old A_{l+1,m+1}; offsets drop by one."""
    return FluxMatrix(matrix.p, matrix.z + 1, matrix.entries, matrix.index)


def shift_left(matrix: FluxMatrix) -> FluxMatrix:
    """Inverse of shift_right; offsets rise by one."""
    return FluxMatrix(matrix.p, matrix.z - 1, matrix.entries, matrix.index)


def reflect(matrix: FluxMatrix) -> FluxMatrix:
    """Mirror a stencil about its interface, offset l -> 1 - l."""
    rows = [tuple(reversed(row)) for row in reversed(matrix.entries)]
    return FluxMatrix(matrix.p, matrix.highest, tuple(rows), -matrix.index)


def _check_order(p: int, q: int) -> None:
    if p < 1:
        raise InvalidOrderError("p must be at least 1", field="p", details={"p": p})
    if not 1 <= q <= 2 * p - 1:
        raise InvalidOrderError(
            f"boundary order q={q} outside 1..{2 * p - 1}",
            field="q",
            details={"p": p, "q": q},
        )


def moment_system(offsets: Iterable[int], q: int) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Rows m^j (j = 0..q) over the nonzero offsets and right-hand side 2 delta_j1."""
    nonzero = [m for m in offsets if m != 0]
    matrix = [[Fraction(m) ** j for m in nonzero] for j in range(q + 1)]
    rhs = [Fraction(2) if j == 1 else Fraction(0) for j in range(q + 1)]
    return matrix, rhs


def moment_difference(offsets: Iterable[int], q: int) -> dict[int, Fraction]:
    """Exact vector d over the nonzero offsets with sum_m d_m m^j = 2 delta_j1, j <= q.

    Square systems are solved directly; underdetermined ones (q below the
    maximum) take the minimum Euclidean norm solution d = M^T (M M^T)^-1 b.

    Raises:
        InvalidOrderError: If there are fewer unknowns than conditions.
        SingularSystemError: If the system has no solution.
    """
    nonzero = [m for m in offsets if m != 0]
    matrix, rhs = moment_system(offsets, q)
    if len(matrix) > len(nonzero):
        raise InvalidOrderError(
            "more moment conditions than stencil points",
            field="q",
            details={"q": q, "points": len(nonzero)},
        )
    if len(matrix) == len(nonzero):
        solution = solve_exact(matrix, rhs)
    else:
        gram = [
            [sum((a * b for a, b in zip(ri, rj, strict=True)), Fraction(0)) for rj in matrix]
            for ri in matrix
        ]
        y = solve_exact(gram, rhs)
        solution = [
            sum((matrix[j][i] * y[j] for j in range(len(matrix))), Fraction(0))
            for i in range(len(nonzero))
        ]
    return dict(zip(nonzero, solution, strict=True))


def boundary_step(current: FluxMatrix, q: int) -> FluxMatrix:
    """Next matrix of the right boundary family, one interface closer to the wall.

    The current matrix is embedded and shifted so that it describes the
    following interface from the current cell; the zero top row is then
    cropped to keep a 2p+1 wide stencil, and row/column 0 are corrected by
    d/2 where d solves the moment conditions up to order q.

    Raises:
        InvalidOrderError: If q is outside 1..2p-1.
    """
    p = current.p
    _check_order(p, q)
    shifted = shift_right(embed_right(current))
    rows = [list(row) for row in shifted.entries]
    if shifted.size > 2 * p + 1:
        if any(x != 0 for x in rows[-1]):
            raise ValueError("cropped stencil row is not zero")
        rows = [row[:-1] for row in rows[:-1]]
    lowest = shifted.lowest
    offsets = range(lowest, lowest + len(rows))
    d = moment_difference(offsets, q)
    o = -lowest
    for m, value in d.items():
        j = m - lowest
        rows[o][j] += value / 2
        rows[j][o] += value / 2
    return FluxMatrix(p, shifted.z, _freeze(rows), current.index + 1)


@lru_cache(maxsize=None)
def _family(p: int, q: int) -> tuple[FluxMatrix, ...]:
    _check_order(p, q)
    right = [interior_matrix(p)]
    for _ in range(p):
        right.append(boundary_step(right[-1], q))
    left = [reflect(m) for m in reversed(right[1:])]
    logger.debug("boundary_family_built", p=p, q=q, size=2 * p + 1)
    return tuple(left + right)


def boundary_matrices(p: int, q: int | None = None) -> dict[int, FluxMatrix]:
    """All matrices A^{p,-p} ... A^{p,p} keyed by their index.

    Args:
        p: Half-order of the interior flux.
        q: Boundary order, 1..2p-1; defaults to 2p-1.

    Raises:
        InvalidOrderError: If q is out of range.
    """
    q = 2 * p - 1 if q is None else q
    return {m.index: m for m in _family(p, q)}


def construction_condition_numbers(p: int, q: int | None = None) -> list[float]:
    """2-norm condition number of each moment system solved for the right family."""
    q = 2 * p - 1 if q is None else q
    _check_order(p, q)
    numbers = []
    lowest = -p
    for _ in range(p):
        matrix, _rhs = moment_system(range(lowest, lowest + 2 * p + 1), q)
        dense = np.array([[float(x) for x in row] for row in matrix])
        numbers.append(float(np.linalg.cond(dense)))
        lowest -= 1
    return numbers


def construction_condition_number(p: int, q: int | None = None) -> float:
    """Largest construction condition number for the given p."""
    return max(construction_condition_numbers(p, q))


def blend_positivity_check(matrix: FluxMatrix) -> bool:
    """True iff the entries coupling offsets 0 and 1 are nonnegative."""
    if not (matrix.lowest <= 0 and matrix.highest >= 1):
        return False
    return matrix.entry(0, 1) >= 0 and matrix.entry(1, 0) >= 0


@dataclass(frozen=True)
class FluxFamily:
    """Two-point fluxes assigned to the entries of a flux matrix.

    Every entry uses the entropy conservative flux h except the pair
    coupling offsets 0 and 1, which evaluates alpha g + (1 - alpha) h
    when a dissipative flux g is present.

    Attributes:
        ec: Entropy conservative flux h.
        dissipative: Optional entropy dissipative flux g.
        swap_dissipative_arguments: Evaluate the (1,0) entry as g(u_1, u_0).
    """

    ec: TwoPointFlux
    dissipative: TwoPointFlux | None = None
    swap_dissipative_arguments: bool = False

    @property
    def law(self) -> ConservationLaw:
        return self.ec.law

    @property
    def blends(self) -> bool:
        return self.dissipative is not None


def _pair_flux(
    family: FluxFamily,
    l: int,
    m: int,
    u_l: NDArray,
    u_m: NDArray,
    axis: int,
    alpha: NDArray | float | None,
) -> NDArray:
    """Mean of the (l,m) and (m,l) entry fluxes."""
    h = family.ec
    value = h(u_l, u_m, axis)
    if not h.symmetric:
        value = (value + h(u_m, u_l, axis)) / 2
    if (l, m) != (0, 1) or family.dissipative is None or alpha is None:
        return value
    if np.isscalar(alpha) and alpha == 0:
        return value
    g = family.dissipative
    g_value = g(u_l, u_m, axis)
    if family.swap_dissipative_arguments:
        g_value = (g_value + g(u_m, u_l, axis)) / 2
    a = np.asarray(alpha)[..., None] if not np.isscalar(alpha) else alpha
    return a * g_value + (1 - a) * value


def _coefficient(weight: Fraction, exact: bool) -> Fraction | float:
    return 2 * weight if exact else float(2 * weight)


def _check_window(matrix: FluxMatrix, ext: NDArray, first: int, count: int) -> None:
    if first + matrix.lowest < 0 or first + matrix.highest + count > len(ext):
        raise WindowMismatchError(
            "state window does not cover the flux stencil",
            details={
                "first": first,
                "count": count,
                "length": len(ext),
                "offsets": (matrix.lowest, matrix.highest),
            },
        )


def combined_flux_along(
    matrix: FluxMatrix,
    family: FluxFamily,
    ext: NDArray,
    first: int,
    count: int,
    axis: int = 0,
    alpha: NDArray | float | None = None,
) -> NDArray:
    """Combined fluxes at `count` consecutive interfaces along array axis 0.

    The interface j (0 <= j < count) has its offset-0 cell at ext[first + j].

    Args:
        matrix: Coefficients shared by all interfaces.
        family: Two-point fluxes.
        ext: States with ghosts, shape (n, ..., n_vars).
        first: Position of the offset-0 cell of the first interface.
        count: Number of interfaces.
        axis: Physical direction of the fluxes.
        alpha: Blend weight per interface, shape (count, ...) or scalar.

    Raises:
        WindowMismatchError: If the stencil leaves the array.
    """
    _check_window(matrix, ext, first, count)
    exact = ext.dtype == object
    total = None
    for l, m, weight in matrix.pairs:
        u_l = ext[first + l : first + l + count]
        u_m = ext[first + m : first + m + count]
        term = _coefficient(weight, exact) * _pair_flux(family, l, m, u_l, u_m, axis, alpha)
        total = term if total is None else total + term
    return total


def combined_entropy_flux_along(
    matrix: FluxMatrix,
    family: FluxFamily,
    ext: NDArray,
    first: int,
    count: int,
    axis: int = 0,
    alpha: NDArray | float | None = None,
    law: ConservationLaw | None = None,
) -> NDArray:
    """Numerical entropy fluxes matching combined_flux_along, shape (count, ...)."""
    _check_window(matrix, ext, first, count)
    law = law or family.law
    exact = ext.dtype == object
    v_ext = law.entropy_variables(ext)
    psi_ext = law.potential(ext, axis)
    total = None
    for l, m, weight in matrix.pairs:
        sl = slice(first + l, first + l + count)
        sm = slice(first + m, first + m + count)
        value = _pair_flux(family, l, m, ext[sl], ext[sm], axis, alpha)
        entropy = (
            np.sum((v_ext[sl] + v_ext[sm]) * value, axis=-1) / 2 - (psi_ext[sl] + psi_ext[sm]) / 2
        )
        term = _coefficient(weight, exact) * entropy
        total = term if total is None else total + term
    return total


def evaluate_combined_flux(
    matrix: FluxMatrix,
    family: FluxFamily,
    window: NDArray,
    axis: int = 0,
    alpha: float | None = None,
) -> NDArray:
    """Combined flux of one interface from a window covering exactly the stencil.

    Args:
        window: States over the matrix offsets, shape (size, ..., n_vars),
            with offset 0 at position z - 1.

    Raises:
        WindowMismatchError: If the window length differs from the stencil size.
    """
    window = np.asarray(window)
    if len(window) != matrix.size:
        raise WindowMismatchError(
            "window length does not match the flux matrix",
            details={"window": len(window), "stencil": matrix.size},
        )
    return combined_flux_along(matrix, family, window, matrix.origin, 1, axis, alpha)[0]


def combined_entropy_flux(
    matrix: FluxMatrix,
    family: FluxFamily,
    law: ConservationLaw,
    window: NDArray,
    axis: int = 0,
    alpha: float | None = None,
) -> NDArray:
    """Numerical entropy flux of one interface; same window rules as evaluate_combined_flux."""
    window = np.asarray(window)
    if len(window) != matrix.size:
        raise WindowMismatchError(
            "window length does not match the flux matrix",
            details={"window": len(window), "stencil": matrix.size},
        )
    return combined_entropy_flux_along(
        matrix, family, window, matrix.origin, 1, axis, alpha, law=law
    )[0]
