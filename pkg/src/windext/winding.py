"""Winding numbers by phase continuation and zero counting by the argument principle."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegreeTooHigh, NonIntegerTotal, NotAnalytic, PhaseUnresolved, ZeroOnBoundary
from .spectral import BoundaryFunction, Polynomial, analyze, resample

DELTA_REL = 1e-9
MAX_STEP = np.pi / 2
MAX_REFINEMENTS = 3
INTEGER_TOL = 1e-6
ANALYTIC_ENERGY_TOL = 1e-8


@dataclass(frozen=True)
class WindingReport:
    winding: int
    raw_phase_turns: float
    min_modulus: float
    max_phase_step: float
    grid_n: int

    def lines(self) -> list[str]:
        return [
            f"winding={self.winding}",
            f"raw_phase_turns={self.raw_phase_turns:.12g}",
            f"min_modulus={self.min_modulus:.6e}",
            f"max_phase_step={self.max_phase_step:.6e}",
            f"grid_n={self.grid_n}",
        ]


def default_delta(f: BoundaryFunction) -> float:
    return DELTA_REL * f.sup_norm()


def _phase_steps(values: np.ndarray) -> np.ndarray:
    # angle of the ratio is the principal increment in (-pi, pi]
    return np.angle(np.roll(values, -1) / values)


def winding_number(f: BoundaryFunction, delta: float | None = None) -> WindingReport:
    """Winding number of ``f`` around the origin.

    Raises ZeroOnBoundary when some sample has modulus ``<= delta`` (default
    ``1e-9 * max|f|``).  When a phase increment reaches ``pi/2`` the samples
    are refined by band-limited resampling, at most three times.
    """
    if delta is None:
        delta = default_delta(f)
    if f.sup_norm() == 0:
        raise ZeroOnBoundary("function vanishes identically")
    g = f
    for attempt in range(MAX_REFINEMENTS + 1):
        mod = np.abs(g.values)
        mmin = float(mod.min())
        if mmin <= delta:
            raise ZeroOnBoundary(f"min modulus {mmin:.3e} <= delta {delta:.3e} on {g.n} nodes")
        steps = _phase_steps(g.values)
        max_step = float(np.max(np.abs(steps)))
        if max_step < MAX_STEP:
            break
        if attempt == MAX_REFINEMENTS:
            raise PhaseUnresolved(f"phase step {max_step:.3f} rad persists at n={g.n}")
        g = resample(g, 2)
    raw = float(np.sum(steps) / (2 * np.pi))
    w = int(round(raw))
    if abs(raw - w) > INTEGER_TOL:
        raise NonIntegerTotal(f"total phase {raw!r} turns is not an integer")
    return WindingReport(w, raw, mmin, max_step, g.n)


def phase_trace(f: BoundaryFunction) -> np.ndarray:
    """Cumulative unwrapped phase (radians) at each node, starting from ``arg f(1)``."""
    steps = _phase_steps(f.values)
    return np.angle(f.values[0]) + np.concatenate([[0.0], np.cumsum(steps[:-1])])


def analytic_energy_ratio(g: BoundaryFunction) -> float:
    s = analyze(g)
    total = s.total_energy()
    return 0.0 if total == 0 else s.negative_energy() / total


def zero_count(g: BoundaryFunction, delta: float | None = None) -> int:
    """Number of zeros in the disc of the holomorphic function with boundary values ``g``."""
    ratio = analytic_energy_ratio(g)
    if ratio > ANALYTIC_ENERGY_TOL:
        raise NotAnalytic(f"anti-analytic energy ratio {ratio:.3e} exceeds {ANALYTIC_ENERGY_TOL:g}")
    return winding_number(g, delta).winding


def check_zero_count_bound(g: BoundaryFunction, N: int, n: int, p: Polynomial, delta: float | None = None) -> bool:
    """True iff ``Z(z^n g + p) <= N + n``.

    This is the rigid-interpolation bound satisfied by quotients of
    polynomials of degree at most ``N``, tested for one pair ``(n, p)``.
    """
    if p.degree > n:
        raise DegreeTooHigh(f"probe degree {p.degree} exceeds n={n}")
    composite = g * (g.z ** n) + p
    return zero_count(composite, delta) <= N + n
