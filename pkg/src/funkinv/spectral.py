"""Zonal harmonics, kernel multipliers, and harmonic analysis on S^{n-1}.

Every rotation-invariant kernel operator acts diagonally on spherical
harmonics; this module computes those diagonal eigenvalues two independent
ways:

* ``funk_hecke_multiplier_quadrature`` integrates the kernel against a zonal
  profile with Gauss-Jacobi rules (singular powers absorbed into the weight,
  split at t = 0).  This is the oracle path: it never touches gamma-function
  closed forms.
* ``cosine_multiplier`` and friends evaluate gamma-ratio closed forms with
  analytic continuation in the parameter.  They are hypotheses until the
  quadrature oracle confirms them; the test suite gates everything spectral
  on that agreement.

The module also provides the band-limited representation
(:class:`HarmonicSpectrum`) used as the cross-validation oracle everywhere:
full (j, m) tables for n = 3, zonal tables about a stored pole for n > 3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.special import lpmv, roots_jacobi

from . import gammafn
from .errors import (
    DivergenceError,
    DomainError,
    ExcludedComponentError,
    InvalidArgumentError,
    PoleError,
    ResolutionError,
)
from .grids import GridFunction, QuadratureGrid, as_direction

__all__ = [
    "zonal_eval",
    "zonal_norm_sq",
    "pushforward_constant",
    "funk_hecke_multiplier_quadrature",
    "cosine_multiplier",
    "funk_multiplier",
    "sine_multiplier",
    "log_cosine_multiplier",
    "delta_op_eigenvalue",
    "HarmonicSpectrum",
    "MultiplierTable",
    "multiplier_table",
    "analyze",
    "synthesize",
    "random_even_spectrum",
    "zonal_profile_rule",
    "zonal_analysis_matrix",
]

POLE_TOL = 1e-12


# ---------------------------------------------------------------------------
# zonal profiles


def zonal_eval(j: int, n: int, t):
    """Degree-j zonal profile on [-1, 1], normalized to 1 at t = 1.

    Three-term recurrence for the Gegenbauer family with index (n-2)/2
    (Legendre polynomials when n = 3).
    """
    if j < 0 or n < 3:
        raise InvalidArgumentError("need j >= 0 and n >= 3")
    arr = np.asarray(t, dtype=float)
    if np.any(np.abs(arr) > 1.0 + 1e-12):
        raise DomainError("zonal profile argument must lie in [-1, 1]")
    arr = np.clip(arr, -1.0, 1.0)
    alpha = (n - 2) / 2.0
    prev = np.ones_like(arr)
    if j == 0:
        out = prev
    else:
        cur = arr.copy()
        for jj in range(2, j + 1):
            prev, cur = cur, (2.0 * (jj + alpha - 1.0) * arr * cur - (jj - 1.0) * prev) / (
                jj + 2.0 * alpha - 1.0
            )
        out = cur
    return out if np.ndim(t) else float(out)


def pushforward_constant(n: int) -> float:
    """Density constant of u.v under the uniform direction: measure
    A_n (1-t^2)^((n-3)/2) dt on [-1, 1] with total mass 1."""
    return math.gamma(n / 2.0) / (math.sqrt(math.pi) * math.gamma((n - 1) / 2.0))


@lru_cache(maxsize=None)
def _jacobi_rule(num_nodes: int, alpha: float, beta: float):
    x, w = roots_jacobi(num_nodes, alpha, beta)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=None)
def zonal_norm_sq(j: int, n: int) -> float:
    """Squared L2 norm of the degree-j zonal profile against the pushforward measure."""
    x, w = _jacobi_rule(max(j + 1, 2), (n - 3) / 2.0, (n - 3) / 2.0)
    vals = zonal_eval(j, n, x)
    return float(pushforward_constant(n) * np.dot(w, vals * vals))


def zonal_profile_rule(n: int, num_nodes: int):
    """Nodes t_q and probability weights for integrating profiles against the
    pushforward measure; exact for polynomial degree <= 2*num_nodes - 1."""
    x, w = _jacobi_rule(num_nodes, (n - 3) / 2.0, (n - 3) / 2.0)
    return x, pushforward_constant(n) * w


def zonal_analysis_matrix(t: np.ndarray, w_prob: np.ndarray, max_degree: int, n: int) -> np.ndarray:
    """Matrix M with (M @ profile_values)[j] = zonal coefficient of degree j."""
    M = np.empty((max_degree + 1, len(t)))
    for j in range(max_degree + 1):
        M[j] = w_prob * zonal_eval(j, n, t) / zonal_norm_sq(j, n)
    return M


# ---------------------------------------------------------------------------
# multipliers by quadrature (the oracle path)


def funk_hecke_multiplier_quadrature(
    kernel: Callable,
    j: int,
    n: int,
    *,
    power: float = 0.0,
    edge_power: float = 0.0,
    num_nodes: int = 48,
    check: bool = True,
) -> complex:
    """Diagonal eigenvalue of the kernel operator f -> int f(v) k(u.v) d_*v.

    Computes A_n * int_{-1}^{1} kernel(t) Z_j(t) (1-t^2)^((n-3)/2) dt by
    Gauss-Jacobi quadrature split at t = 0.  ``power`` declares a |t|^power
    factor of the kernel and ``edge_power`` a (1-t^2)^edge_power factor; both
    are absorbed into the quadrature weight so that algebraic singularities
    cost no accuracy.  The kernel callable always receives the signed t and
    must include those factors itself.

    Raises DivergenceError when the declared exponents make the integral
    non-integrable, or when refinement fails to settle.
    """
    if j < 0 or n < 3:
        raise InvalidArgumentError("need j >= 0 and n >= 3")
    alpha = (n - 3) / 2.0 + edge_power
    if power <= -1.0 or alpha <= -1.0:
        raise DivergenceError(
            f"kernel with |t|^{power} (1-t^2)^{edge_power} factor is not integrable on S^{n - 1}"
        )

    def one_pass(num: int) -> complex:
        x, w = _jacobi_rule(num, alpha, power)
        t = 0.5 * (1.0 + x)
        # t^power dt (1-t)^alpha absorbed into the rule; divide them back out
        # of the full kernel and keep the smooth remainder.
        resid = (0.5 * (3.0 + x)) ** alpha * 0.5 ** (power + alpha + 1.0)
        desing = t ** (-power) * (1.0 - t * t) ** (-edge_power)
        plus = np.asarray(kernel(t), dtype=complex) * desing * zonal_eval(j, n, t)
        minus = np.asarray(kernel(-t), dtype=complex) * desing * zonal_eval(j, n, -t)
        return complex(pushforward_constant(n) * np.dot(w, resid * (plus + minus)))

    coarse = one_pass(num_nodes)
    fine = one_pass(2 * num_nodes)
    if check:
        d1 = abs(fine - coarse)
        if d1 > 1e-9 * max(1.0, abs(fine)):
            finest = one_pass(4 * num_nodes)
            if abs(finest - fine) > d1:
                raise DivergenceError("quadrature diverges under refinement")
            return finest
    return fine


# ---------------------------------------------------------------------------
# multipliers in closed form (gated by the quadrature oracle)


def _require_even(j: int) -> None:
    if j < 0 or j % 2:
        raise InvalidArgumentError(f"degree must be even and nonnegative, got {j}")


def cosine_multiplier(j: int, n: int, lam: complex) -> complex:
    """Eigenvalue of the normalized |u.v|^lam kernel operator on degree j.

    Gamma-ratio form, meromorphic in lam with poles at lam in
    {j, j+2, j+4, ...}; arguments within 1e-12 of a pole raise PoleError.
    """
    _require_even(j)
    lam = complex(lam)
    num = (j - lam) / 2.0
    k = round(num.real)
    if k <= 0 and abs(num - k) <= 0.5 * POLE_TOL:
        raise PoleError(
            f"degree-{j} cosine multiplier has a pole at lambda = {j - 2 * k}",
            pole=j - 2 * k,
        )
    sign = -1.0 if (j // 2) % 2 else 1.0
    return sign * gammafn.gamma(num) * gammafn.rgamma((j + lam + n) / 2.0)


def funk_multiplier(j: int, n: int) -> float:
    """Eigenvalue of the great-subsphere average on degree j (value of the
    zonal profile at 0; equals cosine_multiplier(j, n, -1) up to the
    constant relating the two transforms)."""
    _require_even(j)
    sign = -1.0 if (j // 2) % 2 else 1.0
    return (
        sign
        * math.gamma((j + 1) / 2.0)
        * math.gamma((n - 1) / 2.0)
        / (math.sqrt(math.pi) * math.gamma((j + n - 1) / 2.0))
    )


def sine_multiplier(j: int, n: int, lam: complex) -> complex:
    """Eigenvalue of the normalized (1-(u.v)^2)^(lam/2) kernel operator:
    the product of the lam-cosine and the (-1)-cosine multipliers."""
    return cosine_multiplier(j, n, lam) * cosine_multiplier(j, n, -1.0)


def log_cosine_multiplier(j: int, n: int) -> float:
    """Eigenvalue of the log(1/|u.v|) kernel operator on degree j >= 2.

    This is the removable-singularity value of the lam-cosine multiplier at
    lam = 0; degree 0 is excluded (the operator is used on mean-zero input).
    """
    if j == 0:
        raise ExcludedComponentError("degree 0 is excluded from the logarithmic transform")
    _require_even(j)
    sign = -1.0 if (j // 2) % 2 else 1.0
    return sign * math.gamma(j / 2.0) * float(gammafn.rgamma((j + n) / 2.0).real)


def delta_op_eigenvalue(j: int, n: int, lam: complex, ell: int) -> complex:
    """Exact eigenvalue of the weighted spherical Laplacian of order ell.

    (-1/4)^ell * prod_{m=1..ell} [(lam+2m)(lam+2m+n-2) - j(j+n-2)]; entire in
    lam, equal to 1 when ell = 0.
    """
    if ell < 0:
        raise InvalidArgumentError(f"need ell >= 0, got {ell}")
    if j < 0 or n < 3:
        raise InvalidArgumentError("need j >= 0 and n >= 3")
    lam = complex(lam)
    jj = float(j * (j + n - 2))
    out = complex(1.0)
    for m in range(1, ell + 1):
        out *= (lam + 2.0 * m) * (lam + 2.0 * m + n - 2.0) - jj
    return out * (-0.25) ** ell


# ---------------------------------------------------------------------------
# band-limited representation


def _full_offsets(max_degree: int):
    return [j * (j + 1) for j in range(max_degree + 1)]


def _assoc_norm(j: int, m: int) -> float:
    return math.sqrt((2 * j + 1) * math.exp(math.lgamma(j - m + 1) - math.lgamma(j + m + 1)))


def harmonic_basis(points: np.ndarray, max_degree: int) -> np.ndarray:
    """Orthonormal (under the probability measure) complex harmonics on S^2.

    Returns an (N, (J+1)^2) matrix; column j*(j+1)+m holds degree j, order m.
    """
    pts = np.asarray(points, dtype=float)
    ct = np.clip(pts[:, 2], -1.0, 1.0)
    phi = np.arctan2(pts[:, 1], pts[:, 0])
    out = np.empty((pts.shape[0], (max_degree + 1) ** 2), dtype=complex)
    for j in range(max_degree + 1):
        base = j * (j + 1)
        for m in range(j + 1):
            col = _assoc_norm(j, m) * lpmv(m, j, ct) * np.exp(1j * m * phi)
            out[:, base + m] = col
            if m:
                out[:, base - m] = (-1.0) ** m * np.conj(col)
    return out


@dataclass(frozen=True)
class HarmonicSpectrum:
    """Coefficients of a band-limited function up to degree ``max_degree``.

    Two storage kinds:

    * full (n = 3 only): ``coeffs`` is a flat complex array of length
      (J+1)^2 against the orthonormal basis of :func:`harmonic_basis`;
    * zonal (any n): ``coeffs[j]`` multiplies the degree-j zonal profile
      about the stored ``pole``.
    """

    n: int
    max_degree: int
    coeffs: np.ndarray
    pole: np.ndarray | None = None

    def __post_init__(self):
        coeffs = np.ascontiguousarray(self.coeffs, dtype=complex)
        if self.pole is None:
            if self.n != 3:
                raise InvalidArgumentError("full (j, m) tables are only kept for n = 3")
            if coeffs.shape != ((self.max_degree + 1) ** 2,):
                raise InvalidArgumentError("full coefficient table has wrong length")
        else:
            pole = as_direction(self.pole)
            if len(pole) != self.n:
                raise InvalidArgumentError("pole dimension mismatch")
            if coeffs.shape != (self.max_degree + 1,):
                raise InvalidArgumentError("zonal coefficient table has wrong length")
            pole.setflags(write=False)
            object.__setattr__(self, "pole", pole)
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def kind(self) -> str:
        return "full" if self.pole is None else "zonal"

    # -- degree access -----------------------------------------------------
    def degree_slice(self, j: int) -> np.ndarray:
        if self.pole is None:
            return self.coeffs[j * j : (j + 1) * (j + 1)]
        return self.coeffs[j : j + 1]

    def degree_l2(self, j: int) -> float:
        """L2(probability measure) norm of the degree-j component."""
        block = self.degree_slice(j)
        if self.pole is None:
            return float(np.linalg.norm(block))
        return float(abs(block[0]) * math.sqrt(zonal_norm_sq(j, self.n)))

    @property
    def mean(self) -> complex:
        return complex(self.coeffs[0])

    def norm(self) -> float:
        return math.sqrt(sum(self.degree_l2(j) ** 2 for j in range(self.max_degree + 1)))

    def odd_part_norm(self) -> float:
        return math.sqrt(sum(self.degree_l2(j) ** 2 for j in range(1, self.max_degree + 1, 2)))

    # -- algebra -------------------------------------------------------------
    def _compatible(self, other: "HarmonicSpectrum") -> None:
        if (
            not isinstance(other, HarmonicSpectrum)
            or other.n != self.n
            or other.max_degree != self.max_degree
            or other.kind != self.kind
            or (self.pole is not None and not np.array_equal(self.pole, other.pole))
        ):
            raise InvalidArgumentError("spectra are not compatible")

    def __add__(self, other):
        self._compatible(other)
        return HarmonicSpectrum(self.n, self.max_degree, self.coeffs + other.coeffs, self.pole)

    def __sub__(self, other):
        self._compatible(other)
        return HarmonicSpectrum(self.n, self.max_degree, self.coeffs - other.coeffs, self.pole)

    def __mul__(self, scalar):
        return HarmonicSpectrum(self.n, self.max_degree, self.coeffs * complex(scalar), self.pole)

    __rmul__ = __mul__

    def __neg__(self):
        return self * (-1.0)

    def scale_degrees(self, factor: Callable[[int], complex], *, even_only: bool = False):
        """New spectrum with each degree-j block multiplied by factor(j);
        odd degrees are annihilated when even_only is set."""
        out = np.array(self.coeffs)
        for j in range(self.max_degree + 1):
            if even_only and j % 2:
                c = 0.0
            else:
                c = complex(factor(j))
            if self.pole is None:
                out[j * j : (j + 1) * (j + 1)] *= c
            else:
                out[j] *= c
        return HarmonicSpectrum(self.n, self.max_degree, out, self.pole)

    def with_zero_mean(self):
        out = np.array(self.coeffs)
        out[0] = 0.0
        return HarmonicSpectrum(self.n, self.max_degree, out, self.pole)

    def even_projected(self):
        return self.scale_degrees(lambda j: 1.0, even_only=True)

    # -- evaluation ----------------------------------------------------------
    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Synthesize sample values at unit points of shape (N, n)."""
        pts = np.asarray(points, dtype=float)
        if self.pole is None:
            return harmonic_basis(pts, self.max_degree) @ self.coeffs
        t = pts @ self.pole
        out = np.zeros(pts.shape[0], dtype=complex)
        for j in range(self.max_degree + 1):
            if self.coeffs[j] != 0.0:
                out += self.coeffs[j] * zonal_eval(j, self.n, t)
        return out

    def to_grid(self, grid: QuadratureGrid) -> GridFunction:
        if grid.n != self.n:
            raise InvalidArgumentError("grid dimension mismatch")
        return GridFunction(grid, self.evaluate(grid.nodes), {"band_limit": self.max_degree})

    @staticmethod
    def zeros(n: int, max_degree: int, pole=None) -> "HarmonicSpectrum":
        size = (max_degree + 1) ** 2 if pole is None else max_degree + 1
        return HarmonicSpectrum(n, max_degree, np.zeros(size, dtype=complex), pole)


def analyze(f: GridFunction, max_degree: int, pole=None) -> HarmonicSpectrum:
    """Project grid samples onto harmonics up to ``max_degree`` by quadrature.

    Needs grid exactness degree >= 2*max_degree.  For n > 3 the projection is
    restricted to zonal functions and ``pole`` must be supplied.
    """
    grid = f.grid
    if grid.exactness_degree < 2 * max_degree:
        raise ResolutionError(
            f"analysis to degree {max_degree} needs exactness >= {2 * max_degree}, "
            f"grid has {grid.exactness_degree}"
        )
    wf = grid.weights * f.values
    if pole is None:
        if grid.n != 3:
            raise InvalidArgumentError("n > 3 analysis is zonal; supply the pole direction")
        basis = harmonic_basis(grid.nodes, max_degree)
        return HarmonicSpectrum(3, max_degree, basis.conj().T @ wf)
    pole = as_direction(pole)
    t = grid.nodes @ pole
    coeffs = np.empty(max_degree + 1, dtype=complex)
    for j in range(max_degree + 1):
        coeffs[j] = np.dot(wf, zonal_eval(j, grid.n, t)) / zonal_norm_sq(j, grid.n)
    return HarmonicSpectrum(grid.n, max_degree, coeffs, pole)


def synthesize(spectrum: HarmonicSpectrum, grid: QuadratureGrid) -> GridFunction:
    """Evaluate a spectrum on a grid (direct summation)."""
    return spectrum.to_grid(grid)


def random_even_spectrum(
    n: int,
    max_degree: int,
    seed: int,
    *,
    pole=None,
    decay: float = 2.0,
    zonal: bool | None = None,
) -> HarmonicSpectrum:
    """Random real-valued even band-limited function.

    Degree-j amplitudes scale like (1+j)^(-decay).  For n = 3 the default is
    a full table with the conjugate symmetry that makes the function real;
    for n > 3 (or ``zonal=True``) a zonal table about ``pole`` (default e_1).
    """
    rng = np.random.Generator(np.random.Philox(key=seed))
    if zonal is None:
        zonal = n != 3
    if zonal:
        if pole is None:
            pole = np.eye(n)[0]
        coeffs = np.zeros(max_degree + 1, dtype=complex)
        for j in range(0, max_degree + 1, 2):
            coeffs[j] = rng.standard_normal() / (1.0 + j) ** decay
        return HarmonicSpectrum(n, max_degree, coeffs, pole)
    if n != 3:
        raise InvalidArgumentError("full random spectra only for n = 3")
    coeffs = np.zeros((max_degree + 1) ** 2, dtype=complex)
    for j in range(0, max_degree + 1, 2):
        base = j * (j + 1)
        scale = 1.0 / (1.0 + j) ** decay
        coeffs[base] = rng.standard_normal() * scale
        for m in range(1, j + 1):
            z = (rng.standard_normal() + 1j * rng.standard_normal()) * scale / math.sqrt(2.0)
            coeffs[base + m] = z
            coeffs[base - m] = (-1.0) ** m * np.conj(z)
    return HarmonicSpectrum(3, max_degree, coeffs)


# ---------------------------------------------------------------------------
# multiplier tables


_TABLE_BUILDERS = {
    "cosine": lambda j, n, lam, ell: cosine_multiplier(j, n, lam),
    "sine": lambda j, n, lam, ell: sine_multiplier(j, n, lam),
    "funk": lambda j, n, lam, ell: funk_multiplier(j, n),
    "log-cosine": lambda j, n, lam, ell: log_cosine_multiplier(j, n),
    "delta-op": lambda j, n, lam, ell: delta_op_eigenvalue(j, n, lam, ell),
}


@dataclass(frozen=True)
class MultiplierTable:
    """Degree-indexed eigenvalues of a rotation-invariant operator."""

    operator: str
    n: int
    lam: complex | None
    ell: int | None
    degrees: tuple
    values: np.ndarray

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=complex)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "degrees", tuple(int(j) for j in self.degrees))

    def value(self, j: int) -> complex:
        try:
            return complex(self.values[self.degrees.index(j)])
        except ValueError:
            raise InvalidArgumentError(f"degree {j} not stored in table") from None


def multiplier_table(
    operator: str,
    n: int,
    max_degree: int,
    lam: complex | None = None,
    ell: int | None = None,
) -> MultiplierTable:
    """Table of even-degree multipliers for one named operator."""
    if operator not in _TABLE_BUILDERS:
        raise InvalidArgumentError(f"unknown operator {operator!r}")
    start = 2 if operator == "log-cosine" else 0
    degrees = list(range(start, max_degree + 1, 2))
    fn = _TABLE_BUILDERS[operator]
    values = np.array([fn(j, n, lam, ell if ell is not None else 0) for j in degrees], dtype=complex)
    return MultiplierTable(operator, n, lam, ell, tuple(degrees), values)
