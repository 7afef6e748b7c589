"""Circle grids, boundary samples, Laurent coefficients and polynomials.

Everything downstream works on functions sampled at the ``n`` equispaced
nodes ``exp(2j*pi*k/n)`` of the unit circle.  Values are immutable: arrays
are copied on construction and flagged read-only.
"""
from __future__ import annotations

import csv
import enum
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import BadSampleFile, DegreeTooHigh, TruncationMismatch

DEFAULT_N = 2048
COEFF_FLOOR = 1e-13
POLY_TRIM = 1e-12
LOCATION_EPS = 1e-12


def _frozen(values, dtype=complex) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


def is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class CircleGrid:
    """Uniform grid of ``n`` nodes on the unit circle (``n`` a power of two, ``n >= 64``)."""

    n: int = DEFAULT_N

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 64 or not is_power_of_two(int(self.n)):
            raise ValueError(f"grid size must be a power of two >= 64, got {self.n!r}")

    @cached_property
    def theta(self) -> np.ndarray:
        return _frozen(2 * np.pi * np.arange(self.n) / self.n, dtype=float)

    @cached_property
    def z(self) -> np.ndarray:
        return _frozen(np.exp(1j * self.theta))

    @property
    def spacing(self) -> float:
        return 2 * np.pi / self.n

    def refined(self, factor: int = 2) -> "CircleGrid":
        return CircleGrid(self.n * factor)


@dataclass(frozen=True, eq=False)
class BoundaryFunction:
    """Complex samples of a function on the nodes of ``grid``."""

    grid: CircleGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} samples, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("boundary samples must be finite")
        object.__setattr__(self, "values", _frozen(vals))

    @classmethod
    def sample(cls, fn: Callable[[np.ndarray], np.ndarray], grid: CircleGrid | None = None) -> "BoundaryFunction":
        """Evaluate ``fn(z)`` at the grid nodes."""
        grid = grid or CircleGrid()
        vals = np.broadcast_to(np.asarray(fn(grid.z), dtype=complex), (grid.n,))
        return cls(grid, vals)

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def z(self) -> np.ndarray:
        return self.grid.z

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def min_modulus(self) -> float:
        return float(np.min(np.abs(self.values)))

    def conj(self) -> "BoundaryFunction":
        return BoundaryFunction(self.grid, np.conj(self.values))

    def reciprocal(self) -> "BoundaryFunction":
        return BoundaryFunction(self.grid, 1.0 / self.values)

    def map(self, fn: Callable[[np.ndarray], np.ndarray]) -> "BoundaryFunction":
        return BoundaryFunction(self.grid, fn(self.values))

    def _other(self, other):
        if isinstance(other, BoundaryFunction):
            if other.grid != self.grid:
                raise ValueError("boundary functions live on different grids")
            return other.values
        if isinstance(other, Polynomial):
            return other(self.grid.z)
        return other

    def __add__(self, other):
        return BoundaryFunction(self.grid, self.values + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return BoundaryFunction(self.grid, self.values - self._other(other))

    def __rsub__(self, other):
        return BoundaryFunction(self.grid, self._other(other) - self.values)

    def __mul__(self, other):
        return BoundaryFunction(self.grid, self.values * self._other(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return BoundaryFunction(self.grid, self.values / self._other(other))

    def __rtruediv__(self, other):
        return BoundaryFunction(self.grid, self._other(other) / self.values)

    def __neg__(self):
        return BoundaryFunction(self.grid, -self.values)


@dataclass(frozen=True, eq=False)
class FourierSeries:
    """Laurent coefficients ``c_k`` for ``-M <= k <= M``; ``coeffs[k + M] == c_k``."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 1 or c.size % 2 != 1:
            raise ValueError("a FourierSeries stores 2M+1 coefficients")
        object.__setattr__(self, "coeffs", _frozen(c))

    @classmethod
    def from_modes(cls, modes: dict[int, complex], M: int) -> "FourierSeries":
        c = np.zeros(2 * M + 1, dtype=complex)
        for k, v in modes.items():
            if abs(k) > M:
                raise TruncationMismatch(f"mode {k} outside truncation order {M}")
            c[k + M] = v
        return cls(c)

    @classmethod
    def from_analytic(cls, taylor: Sequence[complex], M: int | None = None) -> "FourierSeries":
        taylor = np.asarray(taylor, dtype=complex)
        M = len(taylor) - 1 if M is None else M
        if len(taylor) > M + 1:
            raise TruncationMismatch("more Taylor coefficients than the truncation order allows")
        c = np.zeros(2 * M + 1, dtype=complex)
        c[M:M + len(taylor)] = taylor
        return cls(c)

    @property
    def M(self) -> int:
        return (self.coeffs.size - 1) // 2

    def coef(self, k: int) -> complex:
        if abs(k) > self.M:
            return 0j
        return complex(self.coeffs[k + self.M])

    def analytic_part(self) -> np.ndarray:
        """``c_0, c_1, ..., c_M``."""
        return self.coeffs[self.M:]

    def antianalytic_part(self) -> np.ndarray:
        """``c_{-1}, c_{-2}, ..., c_{-M}``."""
        return self.coeffs[:self.M][::-1]

    def negative_energy(self) -> float:
        return float(np.sum(np.abs(self.antianalytic_part()) ** 2))

    def total_energy(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def floored(self, rel: float = COEFF_FLOOR) -> "FourierSeries":
        """Zero every coefficient below ``rel * max|c_k|``."""
        c = np.array(self.coeffs)
        peak = np.max(np.abs(c)) if c.size else 0.0
        c[np.abs(c) < rel * peak] = 0
        return FourierSeries(c)

    def conj(self) -> "FourierSeries":
        """Coefficients of the pointwise conjugate on the circle: ``c_k -> conj(c_{-k})``."""
        return FourierSeries(np.conj(self.coeffs[::-1]))

    def __add__(self, other: "FourierSeries") -> "FourierSeries":
        M = max(self.M, other.M)
        return FourierSeries(self.padded(M).coeffs + other.padded(M).coeffs)

    def padded(self, M: int) -> "FourierSeries":
        if M < self.M:
            raise TruncationMismatch("cannot pad to a smaller order")
        c = np.zeros(2 * M + 1, dtype=complex)
        c[M - self.M:M + self.M + 1] = self.coeffs
        return FourierSeries(c)

    def modes(self) -> np.ndarray:
        return np.arange(-self.M, self.M + 1)

    def evaluate(self, z) -> np.ndarray:
        """Evaluate the Laurent polynomial at arbitrary nonzero points."""
        z = np.asarray(z, dtype=complex)
        pos = npoly.polyval(z, self.analytic_part())
        neg = npoly.polyval(1.0 / z, np.concatenate([[0], self.antianalytic_part()]))
        return pos + neg

    def derivative(self) -> "FourierSeries":
        """Derivative with respect to the angle: ``c_k -> i k c_k``."""
        return FourierSeries(1j * self.modes() * self.coeffs)


class Location(str, enum.Enum):
    INSIDE = "in"
    BOUNDARY = "bd"
    OUTSIDE = "out"

    @classmethod
    def of(cls, point: complex, eps: float = LOCATION_EPS) -> "Location":
        r = abs(point)
        if abs(r - 1) <= eps:
            return cls.BOUNDARY
        return cls.INSIDE if r < 1 else cls.OUTSIDE


@dataclass(frozen=True)
class ZeroFactor:
    point: complex
    multiplicity: int
    location: Location


@dataclass(frozen=True)
class ZeroFactorSet:
    """Factors ``(z - a)^m`` with each ``a`` tagged as inside, on or outside the circle."""

    factors: tuple[ZeroFactor, ...] = ()
    eps: float = LOCATION_EPS

    def __post_init__(self):
        facs = tuple(self.factors)
        for fac in facs:
            if int(fac.multiplicity) != fac.multiplicity or fac.multiplicity < 1:
                raise ValueError(f"multiplicity must be a positive integer: {fac}")
            r = abs(fac.point)
            loc = Location(fac.location)
            ok = {
                Location.INSIDE: r < 1 - self.eps,
                Location.BOUNDARY: abs(r - 1) <= self.eps,
                Location.OUTSIDE: r > 1 + self.eps,
            }[loc]
            if not ok:
                raise ValueError(f"point {fac.point} is not {loc.name.lower()} (|a| = {r!r})")
        object.__setattr__(self, "factors", facs)

    @classmethod
    def of(cls, pairs: Iterable[tuple[complex, int]], eps: float = LOCATION_EPS) -> "ZeroFactorSet":
        """Build from ``(point, multiplicity)`` pairs, classifying each point.

        Points within ``eps`` of the circle are projected onto it.
        """
        facs = []
        for point, mult in pairs:
            point = complex(point)
            loc = Location.of(point, eps)
            if loc is Location.BOUNDARY:
                point = point / abs(point)
            facs.append(ZeroFactor(point, int(mult), loc))
        return cls(tuple(facs), eps)

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)

    @property
    def total_multiplicity(self) -> int:
        return sum(f.multiplicity for f in self.factors)

    def select(self, location: Location) -> "ZeroFactorSet":
        return ZeroFactorSet(tuple(f for f in self.factors if f.location == location), self.eps)

    def expanded(self) -> list[complex]:
        """Node sequence ``a_1, ..., a_N`` with repeated points kept consecutive."""
        return [f.point for f in self.factors for _ in range(f.multiplicity)]


@dataclass(frozen=True, eq=False)
class Polynomial:
    """Complex polynomial, coefficients in ascending degree.

    Leading coefficients below ``POLY_TRIM`` relative to the largest one are
    dropped.  The zero polynomial stores a single ``0`` and has degree ``-1``.
    """

    coeffs: np.ndarray = field(default_factory=lambda: np.zeros(1, dtype=complex))

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        peak = np.max(np.abs(c))
        if peak == 0:
            c = np.zeros(1, dtype=complex)
        else:
            keep = np.nonzero(np.abs(c) > POLY_TRIM * peak)[0]
            c = c[: keep[-1] + 1]
        object.__setattr__(self, "coeffs", _frozen(c))

    @classmethod
    def monomial(cls, k: int, c: complex = 1.0) -> "Polynomial":
        coeffs = np.zeros(k + 1, dtype=complex)
        coeffs[k] = c
        return cls(coeffs)

    @classmethod
    def constant(cls, c: complex) -> "Polynomial":
        return cls([c])

    @classmethod
    def from_roots(cls, roots: Iterable[complex]) -> "Polynomial":
        roots = list(roots)
        if not roots:
            return cls([1.0])
        return cls(npoly.polyfromroots(roots))

    @property
    def degree(self) -> int:
        if self.is_zero():
            return -1
        return self.coeffs.size - 1

    def is_zero(self) -> bool:
        return self.coeffs.size == 1 and self.coeffs[0] == 0

    def __call__(self, z):
        return npoly.polyval(np.asarray(z, dtype=complex), self.coeffs)

    def _coerce(self, other) -> np.ndarray:
        if isinstance(other, Polynomial):
            return other.coeffs
        return np.array([other], dtype=complex)

    def __add__(self, other):
        return Polynomial(npoly.polyadd(self.coeffs, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Polynomial(npoly.polysub(self.coeffs, self._coerce(other)))

    def __rsub__(self, other):
        return Polynomial(npoly.polysub(self._coerce(other), self.coeffs))

    def __mul__(self, other):
        if isinstance(other, BoundaryFunction):
            return NotImplemented
        return Polynomial(npoly.polymul(self.coeffs, self._coerce(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return Polynomial(-self.coeffs)

    def __pow__(self, k: int):
        return Polynomial(npoly.polypow(self.coeffs, k)) if k > 0 else Polynomial([1.0])

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        q, r = npoly.polydiv(self.coeffs, other.coeffs)
        return Polynomial(q), Polynomial(r)

    def derivative(self) -> "Polynomial":
        return Polynomial(npoly.polyder(self.coeffs))

    def roots(self) -> np.ndarray:
        if self.degree < 1:
            return np.zeros(0, dtype=complex)
        return npoly.polyroots(self.coeffs)

    def norm(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def allclose(self, other: "Polynomial", atol: float = 1e-12) -> bool:
        n = max(self.coeffs.size, other.coeffs.size)
        a = np.zeros(n, dtype=complex)
        b = np.zeros(n, dtype=complex)
        a[: self.coeffs.size] = self.coeffs
        b[: other.coeffs.size] = other.coeffs
        return bool(np.allclose(a, b, rtol=0, atol=atol))

    def __repr__(self):
        return f"Polynomial({np.array2string(self.coeffs, precision=6)})"


def analyze(f: BoundaryFunction) -> FourierSeries:
    """Discrete Laurent coefficients ``c_k`` for ``|k| <= n/2 - 1``.

    The Nyquist mode is dropped; every other mode is the usual aliased DFT
    coefficient ``(1/n) sum_j f_j exp(-i k theta_j)``.
    """
    n = f.n
    c = np.fft.fft(f.values) / n
    M = n // 2 - 1
    return FourierSeries(np.concatenate([c[n - M:], c[: M + 1]]))


def synthesize(s: FourierSeries, grid: CircleGrid) -> BoundaryFunction:
    if s.M > grid.n // 2:
        raise TruncationMismatch(f"series of order {s.M} does not fit a grid of {grid.n} nodes")
    buf = np.zeros(grid.n, dtype=complex)
    np.add.at(buf, s.modes() % grid.n, s.coeffs)
    return BoundaryFunction(grid, np.fft.ifft(buf) * grid.n)


def poly_eval_on_grid(p: Polynomial, grid: CircleGrid) -> BoundaryFunction:
    return BoundaryFunction(grid, p(grid.z))


def node_product(zf: ZeroFactorSet) -> Polynomial:
    """Monic ``prod (z - a_j)^{m_j}``."""
    return Polynomial.from_roots(zf.expanded())


def conjugate_reflect(d: Polynomial, N: int) -> Polynomial:
    """Polynomial ``A`` with ``A(z) = z^N conj(D(z))`` on the circle."""
    if d.degree > N:
        raise DegreeTooHigh(f"degree {d.degree} exceeds reflection order {N}")
    if d.is_zero():
        return Polynomial([0.0])
    out = np.zeros(N + 1, dtype=complex)
    out[N - np.arange(d.coeffs.size)] = np.conj(d.coeffs)
    return Polynomial(out)


def _interpolate(values: np.ndarray, n_out: int, phase: float = 0.0) -> np.ndarray:
    # Trigonometric interpolation of m uniform samples (first node at angle
    # ``phase``) onto n_out uniform nodes starting at angle 0.
    m = values.size
    c = np.fft.fft(values) / m
    ks = np.fft.fftfreq(m, 1.0 / m).astype(int)
    if phase:
        c = c * np.exp(-1j * ks * phase)
    buf = np.zeros(n_out, dtype=complex)
    keep = np.abs(ks) < n_out / 2
    if m % 2 == 0:
        nyq = np.abs(ks) == m // 2
        keep &= ~nyq
        if n_out > m:
            # split the Nyquist mode evenly between +m/2 and -m/2
            ck = c[nyq].sum()
            buf[(m // 2) % n_out] += ck / 2
            buf[(-(m // 2)) % n_out] += ck / 2
    np.add.at(buf, ks[keep] % n_out, c[keep])
    return np.fft.ifft(buf) * n_out


def resample(f: BoundaryFunction, factor: int = 2) -> BoundaryFunction:
    """Band-limited upsampling onto ``n * factor`` nodes."""
    if factor < 2 or not is_power_of_two(factor):
        raise ValueError("resampling factor must be a power of two >= 2")
    grid = f.grid.refined(factor)
    return BoundaryFunction(grid, _interpolate(f.values, grid.n))


def onto_grid(f: BoundaryFunction, grid: CircleGrid) -> BoundaryFunction:
    """Move samples to another grid by trigonometric interpolation (or truncation)."""
    if f.grid == grid:
        return f
    return BoundaryFunction(grid, _interpolate(f.values, grid.n))


def load_samples(path: str | Path, n: int | None = None) -> BoundaryFunction:
    """Read a ``theta,re,im`` CSV of uniformly spaced samples.

    The result lives on a grid of ``n`` nodes (default: the file's own count
    when it is a valid grid size, else ``DEFAULT_N``).
    """
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise BadSampleFile(str(exc)) from exc
    if not rows or [h.strip() for h in rows[0]] != ["theta", "re", "im"]:
        raise BadSampleFile("header must be exactly 'theta,re,im'")
    try:
        data = np.array([[float(x) for x in row] for row in rows[1:] if row], dtype=float)
    except ValueError as exc:
        raise BadSampleFile(f"non-numeric entry: {exc}") from exc
    if data.ndim != 2 or data.shape[1] != 3 or data.shape[0] < 2:
        raise BadSampleFile("need at least two rows of three columns")
    theta = data[:, 0]
    if not np.all(np.isfinite(data)):
        raise BadSampleFile("non-finite sample")
    if np.any(np.diff(theta) <= 0) or theta[0] < 0 or theta[-1] >= 2 * np.pi:
        raise BadSampleFile("theta must be strictly increasing in [0, 2*pi)")
    m = theta.size
    expected = theta[0] + 2 * np.pi * np.arange(m) / m
    if np.max(np.abs(theta - expected)) > 1e-9 * max(1.0, m / 64):
        raise BadSampleFile("nodes are not uniformly spaced")
    values = data[:, 1] + 1j * data[:, 2]
    if n is None:
        n = m if (m >= 64 and is_power_of_two(m)) else DEFAULT_N
    grid = CircleGrid(n)
    if m == n and theta[0] == 0:
        return BoundaryFunction(grid, values)
    return BoundaryFunction(grid, _interpolate(values, n, phase=theta[0]))


def save_samples(f: BoundaryFunction, path: str | Path) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["theta", "re", "im"])
        for t, v in zip(f.grid.theta, f.values):
            w.writerow([repr(float(t)), repr(float(v.real)), repr(float(v.imag))])


def relative_energy_above(s: FourierSeries, fraction: float = 0.9) -> float:
    """Share of the energy carried by modes with ``|k| > fraction * M``."""
    total = s.total_energy()
    if total == 0:
        return 0.0
    mask = np.abs(s.modes()) > fraction * s.M
    return float(np.sum(np.abs(s.coeffs[mask]) ** 2) / total)


__all__ = [
    "BoundaryFunction",
    "CircleGrid",
    "FourierSeries",
    "Location",
    "Polynomial",
    "ZeroFactor",
    "ZeroFactorSet",
    "analyze",
    "conjugate_reflect",
    "load_samples",
    "node_product",
    "onto_grid",
    "poly_eval_on_grid",
    "resample",
    "save_samples",
    "synthesize",
]
