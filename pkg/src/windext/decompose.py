"""Boundary jets, Newton-form decomposition at boundary nodes, Riesz splitting
and zero-free factorization of boundary functions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InsufficientSmoothness, NodeOffCircle, TruncationOverflow
from .spectral import (
    COEFF_FLOOR,
    BoundaryFunction,
    FourierSeries,
    Location,
    Polynomial,
    ZeroFactorSet,
    analyze,
    node_product,
    relative_energy_above,
    resample,
    synthesize,
)
from .winding import phase_trace, winding_number

SMOOTHNESS_TOL = 1e-10
RECONSTRUCTION_TOL = 1e-8
FACTOR_TOL = 1e-9


def _check_on_circle(a: complex) -> complex:
    a = complex(a)
    if abs(abs(a) - 1) > 1e-12:
        raise NodeOffCircle(f"node {a} is not on the unit circle")
    return a / abs(a)


def _resolved_series(f: BoundaryFunction) -> FourierSeries:
    s = analyze(f)
    tail = relative_energy_above(s, 0.9)
    if tail > SMOOTHNESS_TOL:
        raise InsufficientSmoothness(f"top-decile energy share {tail:.2e} exceeds {SMOOTHNESS_TOL:g}")
    return s.floored(COEFF_FLOOR)


def _angle_taylor(s: FourierSeries, t0: float, order: int) -> np.ndarray:
    """Taylor coefficients of ``t -> f(e^{it})`` at ``t0`` up to ``order``."""
    m = s.modes()
    v = s.coeffs * np.exp(1j * m * t0)
    out = np.empty(order + 1, dtype=complex)
    for k in range(order + 1):
        out[k] = v.sum()
        v = v * (1j * m) / (k + 1)
    return out


def _truncmul(p: np.ndarray, q: np.ndarray, order: int) -> np.ndarray:
    return np.convolve(p, q)[: order + 1]


def _chord_taylor(s: FourierSeries, a: complex, order: int) -> np.ndarray:
    """Coefficients ``b_k`` with ``f(z) = sum b_k (z - a)^k`` near ``a`` along the circle.

    With ``w = z - a`` the angle offset is ``t - t0 = -i log(1 + w/a)``;
    substituting that series into the angle Taylor expansion and
    collecting powers of ``w`` gives the chord expansion.
    """
    tau = _angle_taylor(s, float(np.angle(a)), order)
    j = np.arange(1, order + 1)
    offset = np.zeros(order + 1, dtype=complex)
    offset[1:] = -1j * (-1.0) ** (j + 1) / (j * a ** j)
    b = np.zeros(order + 1, dtype=complex)
    b[0] = tau[order]
    for k in range(order - 1, -1, -1):
        b = _truncmul(b, offset, order)
        b = np.pad(b, (0, order + 1 - b.size))
        b[0] += tau[k]
    return b


def _chord_to_poly(b: np.ndarray, a: complex) -> Polynomial:
    p = Polynomial([0.0])
    lin = Polynomial([-a, 1.0])
    for coef in b[::-1]:
        p = p * lin + coef
    return p


def _divide_linear(c: np.ndarray, a: complex) -> np.ndarray:
    """Laurent coefficients of ``q / (z - a)`` for ``q`` vanishing at ``a`` (same index range).

    ``h_{k-1} = a^{-k} sum_{j >= k} a^j q_j = -a^{-k} sum_{j < k} a^j q_j``;
    the tail sum is used for ``k > 0`` and the head sum otherwise, so the
    residual ``q(a)`` lands in a single mode instead of the whole series.
    """
    M = (c.size - 1) // 2
    k = np.arange(-M, M + 1)
    w = a ** k.astype(float) * c
    tail = np.cumsum(w[::-1])[::-1]
    head = np.concatenate([[0], np.cumsum(w)[:-1]])
    s = np.where(k > 0, tail, -head)
    h = np.zeros_like(c)
    h[:-1] = s[1:] * a ** (-k[1:].astype(float))
    return h


def _jet(f: BoundaryFunction, a: complex, n: int):
    """Jet coefficients (in powers of ``z - a``), jet polynomial and remainder.

    The remainder is ``(f - p) / (z - a)^n`` computed by exact division of
    the Fourier series, which avoids the cancellation of pointwise division
    next to ``a``.
    """
    s = _resolved_series(f)
    b = _chord_taylor(s, a, n - 1)
    p = _chord_to_poly(b, a)
    c = s.coeffs.copy()
    c[s.M:s.M + p.coeffs.size] -= p.coeffs
    for _ in range(n):
        c = _divide_linear(c, a)
    h = synthesize(FourierSeries(c), f.grid)
    return b, p, h


def jet_at_point(f: BoundaryFunction, a: complex, n: int) -> tuple[Polynomial, BoundaryFunction]:
    """Split ``f = p + (z - a)^n h`` on the circle with ``deg p <= n - 1``.

    ``a`` must lie on the circle.  ``p`` is the Taylor polynomial at ``a``
    along the circle, from spectral derivatives.
    """
    if n < 1:
        raise ValueError("jet order must be at least 1")
    a = _check_on_circle(a)
    _, p, h = _jet(f, a, n)
    return p, h


@dataclass(frozen=True, eq=False)
class NewtonDecomposition:
    """``f = D + prod(z - a_k) * remainder`` with ``D`` in Newton form on the nodes."""

    nodes: ZeroFactorSet
    coeffs: np.ndarray
    remainder: BoundaryFunction
    jet_polynomial: Polynomial
    node_polynomial: Polynomial
    residual: float

    def reconstruct(self) -> BoundaryFunction:
        return self.remainder * self.node_polynomial + self.jet_polynomial


def _distinct_nodes(nodes: ZeroFactorSet) -> list[tuple[complex, int]]:
    merged: list[list] = []
    for fac in nodes:
        if fac.location != Location.BOUNDARY:
            raise NodeOffCircle(f"node {fac.point} is not a boundary point")
        for item in merged:
            if abs(item[0] - fac.point) < 1e-12:
                item[1] += fac.multiplicity
                break
        else:
            merged.append([_check_on_circle(fac.point), fac.multiplicity])
    return [(a, m) for a, m in merged]


def newton_form(coeffs, points) -> Polynomial:
    """``A_0 + A_1 (z - a_1) + ... + A_{N-1} (z - a_1)...(z - a_{N-1})``."""
    D = Polynomial([0.0])
    for A, a in zip(coeffs[::-1], list(points[: len(coeffs)])[::-1]):
        D = D * Polynomial([-a, 1.0]) + A
    return D


def newton_decompose(f: BoundaryFunction, nodes: ZeroFactorSet) -> NewtonDecomposition:
    """Iterated deflation: take the jet at ``b_1`` to order ``m_1``, then the jet of
    the quotient at ``b_2`` to order ``m_2``, and so on.

    The jet coefficients line up, in order, as the Newton coefficients
    ``A_0, ..., A_{N-1}`` on the node sequence ``b_1 (m_1 times), b_2, ...``.
    """
    groups = _distinct_nodes(nodes)
    ordered = ZeroFactorSet.of(groups)
    coeffs: list[complex] = []
    current = f
    for a, m in groups:
        b, _, current = _jet(current, a, m)
        coeffs.extend(b)
    points = ordered.expanded()
    D = newton_form(coeffs, points)
    Pi = node_product(ordered)
    recon = current * Pi + D
    scale = f.sup_norm() or 1.0
    residual = float(np.max(np.abs(recon.values - f.values)) / scale)
    return NewtonDecomposition(ordered, np.array(coeffs, dtype=complex), current, D, Pi, residual)


def laurent_derivatives(f: BoundaryFunction, b: complex, order: int) -> np.ndarray:
    """``f^{(k)}(b) / k!`` for ``k <= order``, differentiating the Laurent series in ``z``."""
    s = analyze(f).floored(COEFF_FLOOR)
    m = s.modes().astype(float)
    v = s.coeffs * b ** m
    out = np.empty(order + 1, dtype=complex)
    for k in range(order + 1):
        out[k] = v.sum()
        v = v * (m - k) / ((k + 1) * b)
    return out


def confluent_divided_differences(points, derivs: dict) -> np.ndarray:
    """Newton coefficients from Hermite data.

    ``points`` is the node sequence with equal nodes adjacent; ``derivs[i]``
    holds ``f^{(k)}(x)/k!`` for the distinct node with index ``i`` in
    first-appearance order.
    """
    pts = list(points)
    N = len(pts)
    key = []
    distinct: list[complex] = []
    for p in pts:
        for i, q in enumerate(distinct):
            if abs(p - q) < 1e-12:
                key.append(i)
                break
        else:
            distinct.append(p)
            key.append(len(distinct) - 1)
    table = np.zeros((N, N), dtype=complex)
    for i in range(N):
        table[i, 0] = derivs[key[i]][0]
    for j in range(1, N):
        for i in range(j, N):
            if key[i] == key[i - j]:
                table[i, j] = derivs[key[i]][j]
            else:
                table[i, j] = (table[i, j - 1] - table[i - 1, j - 1]) / (pts[i] - pts[i - j])
    return np.diag(table).copy()


def hermite_newton_coefficients(f: BoundaryFunction, nodes: ZeroFactorSet) -> np.ndarray:
    """Newton coefficients via confluent divided differences of spectral z-derivatives."""
    groups = _distinct_nodes(nodes)
    derivs = {i: laurent_derivatives(f, a, m) for i, (a, m) in enumerate(groups)}
    points = [a for a, m in groups for _ in range(m)]
    return confluent_divided_differences(points, derivs)


@dataclass(frozen=True, eq=False)
class SplitPair:
    """``g = F + conj(G)`` on the circle; ``G`` has zero constant term."""

    F: FourierSeries
    G: FourierSeries

    def recombine(self) -> FourierSeries:
        return self.F + self.G.conj()


def riesz_split(s: FourierSeries) -> SplitPair:
    M = s.M
    F = np.zeros(2 * M + 1, dtype=complex)
    F[M:] = s.coeffs[M:]
    G = np.zeros(2 * M + 1, dtype=complex)
    G[M + 1:] = np.conj(s.coeffs[:M][::-1])
    return SplitPair(FourierSeries(F), FourierSeries(G))


class Factorization(NamedTuple):
    F: FourierSeries
    G: FourierSeries
    N: int
    residual: float


def _factor_once(g: BoundaryFunction, N: int):
    shifted = g * (g.z ** (-N))
    u = np.log(np.abs(shifted.values)) + 1j * phase_trace(shifted)
    split = riesz_split(analyze(BoundaryFunction(g.grid, u)))
    F_vals = np.exp(synthesize(split.F, g.grid).values)
    G_vals = np.exp(synthesize(split.G, g.grid).values)
    F = analyze(BoundaryFunction(g.grid, F_vals))
    G = analyze(BoundaryFunction(g.grid, G_vals))
    resolved = all(
        relative_energy_above(S, 0.9) <= 1e-20 and S.negative_energy() <= 1e-20 * S.total_energy()
        for S in (F, G)
    )
    recon = synthesize(F, g.grid).values * np.conj(synthesize(G, g.grid).values) * g.z ** N
    residual = float(np.max(np.abs(recon - g.values)) / g.sup_norm())
    return F, G, residual, resolved


def factorize_nonvanishing(g: BoundaryFunction, delta: float | None = None) -> Factorization:
    """Write ``g = F * conj(G) * z^N`` with ``F``, ``G`` zero-free in the closed disc.

    ``N`` is the winding number of ``g``.  ``log(g z^{-N})`` is split into
    analytic and conjugate-analytic parts and exponentiated; ``G(0) = 1``.
    """
    N = winding_number(g, delta).winding
    work = g
    for attempt in range(2):
        F, G, residual, resolved = _factor_once(work, N)
        if resolved and residual <= FACTOR_TOL:
            return Factorization(F, G, N, residual)
        if attempt == 0:
            work = resample(work, 2)
    raise TruncationOverflow(f"exponentiated split not resolved (residual {residual:.2e})")
