"""Winding criteria: probe evaluation, witness search and certification pipelines.

Two probe shapes are supported: ``P*f + 1`` (kind ``"pf1"``) and
``f + Pi*p`` for a fixed node polynomial ``Pi`` (kind ``"fpp"``).  A
witness is a probe whose composite winds at most ``-J-1`` times; its
existence shows that ``f`` has no meromorphic extension with ``J`` or
fewer poles.  Not finding one is evidence only.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator

import numpy as np

from .decompose import laurent_derivatives, newton_decompose, riesz_split
from .errors import (
    DeflationFailed,
    WindextError,
    NodeOffCircle,
    NodeValueZero,
    NonIntegerTotal,
    PhaseUnresolved,
    ZeroOnBoundary,
)
from .extension import RationalFunction, cluster_roots, fit_rational, holomorphic_test
from .spectral import (
    COEFF_FLOOR,
    BoundaryFunction,
    FourierSeries,
    Location,
    Polynomial,
    ZeroFactorSet,
    analyze,
    conjugate_reflect,
    node_product,
    resample,
    synthesize,
)
from .winding import DELTA_REL, WindingReport, phase_trace, winding_number, zero_count

log = logging.getLogger(__name__)

PF_PLUS_ONE = "pf1"
F_PLUS_PI_P = "fpp"

CERTIFIED = "certified"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"

CERTIFY_TOL = 1e-7
FIT_TOL = 1e-8
CHUNK = 64
NEGLIGIBLE = 1e-10


@dataclass(frozen=True)
class ProbeFamily:
    kind: str = PF_PLUS_ONE
    factors: ZeroFactorSet = field(default_factory=ZeroFactorSet)
    max_degree: int = 16
    budget: int = 0

    def __post_init__(self):
        if self.kind not in (PF_PLUS_ONE, F_PLUS_PI_P):
            raise ValueError(f"unknown probe family kind {self.kind!r}")
        if self.budget < 0 or self.max_degree < 0:
            raise ValueError("budget and max_degree must be nonnegative")

    @cached_property
    def node_polynomial(self) -> Polynomial:
        return node_product(self.factors)


def composite_values(f_values: np.ndarray, z: np.ndarray, probe: Polynomial, family: ProbeFamily) -> np.ndarray:
    if family.kind == PF_PLUS_ONE:
        return probe(z) * f_values + 1
    return f_values + family.node_polynomial(z) * probe(z)


def composite(f: BoundaryFunction, probe: Polynomial, family: ProbeFamily) -> BoundaryFunction:
    return BoundaryFunction(f.grid, composite_values(f.values, f.z, probe, family))


def probe_winding(
    f: BoundaryFunction, probe: Polynomial, family: ProbeFamily, delta: float | None = None
) -> WindingReport:
    """Winding number of ``P f + 1`` or ``f + Pi p``.

    ``delta`` defaults to ``1e-9`` times the composite's sup norm; a
    composite that dips below it is an invalid probe (ZeroOnBoundary), not
    a criterion violation.
    """
    return winding_number(composite(f, probe, family), delta)


@dataclass(frozen=True)
class WitnessResult:
    found: bool
    probe: Polynomial | None
    winding: int | None
    min_modulus: float | None
    probes_tried: int
    seed: int
    valid_probes: int = 0
    min_winding: int | None = None

    def lines(self) -> list[str]:
        out = [f"found={str(self.found).lower()}", f"probes_tried={self.probes_tried}",
               f"valid_probes={self.valid_probes}", f"seed={self.seed}"]
        if self.min_winding is not None:
            out.append(f"min_winding={self.min_winding}")
        if self.found:
            out.append(f"winding={self.winding}")
            out.append(f"min_modulus={self.min_modulus:.6e}")
            out.append("probe=" + ",".join(f"{c.real:.12g}{c.imag:+.12g}j" for c in self.probe.coeffs))
        else:
            out.append(f"message=no witness found in {self.probes_tried} probes")
        return out


def _regularized_inverse(q: np.ndarray) -> np.ndarray:
    eps = 1e-6 * np.max(np.abs(q))
    return np.conj(q) / (np.abs(q) ** 2 + eps ** 2)


def _analytic_truncation(values: np.ndarray, grid, degree: int) -> np.ndarray:
    s = analyze(BoundaryFunction(grid, values))
    return np.array(s.analytic_part()[: degree + 1])


class _ZeroPlacement:
    """Probes ``p`` for ``u + Pi p`` built from zero placement.

    With ``u = D + Pi (F + conj(G))``, ``A = z^N conj(D)`` and
    ``B = prod(1 - conj(a_j) z)``, a probe ``p = q* - F`` (``q*`` the
    conjugate reflection of ``q``, degree ``m``) satisfies
    ``W(u + Pi p) = N + m - Z(z^m (A/B + G) + q)``.  Interpolating ``q`` so
    that ``z^m (A/B + G) + q`` vanishes at ``m + 1`` interior points forces
    that many zeros; any further zero the function picks up lowers the
    winding below what an extension with the given pole budget allows.
    """

    def __init__(self, u: BoundaryFunction, nodes: ZeroFactorSet, max_degree: int):
        dec = newton_decompose(u, nodes)
        split = riesz_split(analyze(dec.remainder).floored(COEFF_FLOOR))
        N = nodes.total_multiplicity
        self.A = conjugate_reflect(dec.jet_polynomial, N) if N else Polynomial([0.0])
        self.B = _reflection_denominator(dec.nodes.expanded())
        self.g = np.trim_zeros(np.asarray(split.G.analytic_part()), "b")
        self.F = Polynomial(split.F.analytic_part()[: max_degree + 1])
        self.max_m = max(1, min(8, max_degree))

    def phi(self, m: int, x: np.ndarray) -> np.ndarray:
        G = np.power.outer(x, np.arange(self.g.size)) @ self.g if self.g.size else 0
        return x ** m * (self.A(x) / self.B(x) + G)

    def probe(self, rng: np.random.Generator, clustered: bool) -> Polynomial:
        m = int(rng.integers(1, self.max_m + 1))
        if clustered:
            c = 0.95 * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
            pts = c + 1e-3 * np.exp(2j * np.pi * np.arange(m + 1) / (m + 1))
        else:
            pts = 0.95 * np.sqrt(rng.random(m + 1)) * np.exp(2j * np.pi * rng.random(m + 1))
        V = np.vander(pts, m + 1, increasing=True)
        q = np.linalg.solve(V, -self.phi(m, pts))
        return conjugate_reflect(Polynomial(q), m) - self.F


def _zero_placement_for(f: BoundaryFunction, family: ProbeFamily, budget: int | None):
    """Zero-placement helper in the coordinates of the family, or None when it does not apply."""
    try:
        if family.kind == F_PLUS_PI_P:
            target = family.budget if budget is None else budget
            return (_ZeroPlacement(f, family.factors, family.max_degree) if target >= 0 else None)
        # P f + 1 = f (P + 1/f): the same construction on 1/f with budget J + W(f)
        shift = winding_number(f).winding
        if family.budget + shift < 0:
            return None
        return _ZeroPlacement(f.reciprocal(), ZeroFactorSet(), family.max_degree)
    except (WindextError, np.linalg.LinAlgError):
        return None


def generate_probes(
    f: BoundaryFunction, family: ProbeFamily, count: int, seed: int, budget: int | None = None
) -> Iterator[Polynomial]:
    """Deterministic probe stream, cycling four strategies.

    0: a large constant with random phase; 1: random coefficients at a
    random power-of-two scale in ``[2^-8, 2^8]``; 2: the analytic
    truncation of ``(t z^-m - 1)/f`` (or ``(t z^-m - f)/Pi``) for a target
    winding ``-m``, ``1 <= m <= J + 2``, with random ``t``; 3: zero
    placement (see ``_ZeroPlacement``), alternating clustered and spread
    interpolation points.  ``budget`` overrides the family's pole budget
    for the structured strategies.
    """
    rng = np.random.default_rng(seed)
    z = f.z
    deg = family.max_degree
    J = family.budget if budget is None else budget
    if family.kind == PF_PLUS_ONE:
        inv = _regularized_inverse(f.values)
        shift = _analytic_truncation(inv, f.grid, deg)
    else:
        inv = _regularized_inverse(family.node_polynomial(z))
        shift = _analytic_truncation(f.values * inv, f.grid, deg)
    targets = [_analytic_truncation(z ** (-m) * inv, f.grid, deg) for m in range(1, max(J, 0) + 3)]
    placement = _zero_placement_for(f, family, budget)
    fmax = f.sup_norm() or 1.0
    fmin = max(f.min_modulus(), 1e-300)
    for i in range(count):
        strategy = i % 4
        if strategy == 3 and placement is None:
            strategy = 1
        phase = np.exp(2j * np.pi * rng.random())
        if strategy == 0:
            base = 1 / min(fmin, 1 / fmax) if family.kind == PF_PLUS_ONE else fmax
            yield Polynomial([phase * base * 2.0 ** rng.uniform(0, 12)])
        elif strategy == 1:
            d = int(rng.integers(0, deg + 1))
            scale = 2.0 ** int(rng.integers(-8, 9))
            c = (rng.standard_normal(d + 1) + 1j * rng.standard_normal(d + 1)) * scale
            yield Polynomial(c)
        elif strategy == 2:
            m = int(rng.integers(0, len(targets)))
            t = phase * 2.0 ** rng.uniform(-4, 4)
            yield Polynomial(t * targets[m] - shift)
        else:
            try:
                yield placement.probe(rng, clustered=bool((i // 4) % 2))
            except np.linalg.LinAlgError:
                yield Polynomial([phase])


def _evaluate_probe(f, probe, family, delta):
    try:
        return probe_winding(f, probe, family, delta)
    except (ZeroOnBoundary, PhaseUnresolved, NonIntegerTotal):
        return None


def _scan(probes, budget, evaluate, threshold, verify, seed, workers) -> WitnessResult:
    valid = 0
    min_w = None
    tried = 0
    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        while tried < budget:
            chunk = [p for _, p in zip(range(min(CHUNK, budget - tried)), probes)]
            if not chunk:
                break
            reports = list(pool.map(evaluate, chunk)) if pool is not None else [evaluate(p) for p in chunk]
            for probe, rep in zip(chunk, reports):
                tried += 1
                if rep is None:
                    continue
                valid += 1
                min_w = rep.winding if min_w is None else min(min_w, rep.winding)
                if rep.winding > threshold:
                    continue
                check = verify(probe)
                if check is not None:
                    return WitnessResult(True, probe, check.winding, check.min_modulus, tried, seed, valid, min_w)
                log.debug("probe %d failed re-verification", tried - 1)
    finally:
        if pool is not None:
            pool.shutdown()
    return WitnessResult(False, None, None, None, tried, seed, valid, min_w)


def witness_search(
    f: BoundaryFunction,
    family: ProbeFamily,
    budget: int,
    seed: int = 0,
    delta: float | None = None,
    workers: int = 1,
) -> WitnessResult:
    """Look for a probe with winding ``<= -J - 1`` among ``budget`` probes.

    The probe sequence depends only on ``seed``.  With ``workers > 1`` probes
    are evaluated in parallel chunks; the lowest-index verified hit wins.
    Every hit is re-checked on a grid twice as fine.
    """
    if budget < 1:
        raise ValueError("probe budget must be at least 1")
    threshold = -family.budget - 1
    fine: list[BoundaryFunction] = []

    def verify(probe):
        if not fine:
            fine.append(resample(f, 2))
        rep = _evaluate_probe(fine[0], probe, family, delta)
        return rep if rep is not None and rep.winding <= threshold else None

    return _scan(generate_probes(f, family, budget, seed), budget,
                 lambda p: _evaluate_probe(f, p, family, delta), threshold, verify, seed, workers)


def deflated_witness_search(
    f: BoundaryFunction,
    zeros: ZeroFactorSet,
    J: int,
    budget: int,
    seed: int = 0,
    workers: int = 1,
) -> WitnessResult:
    """Witness search for ``P f + 1`` when ``f = Pi g`` vanishes at boundary points.

    ``W(P f + 1) = W(g) + W(1/g + Pi P)``, so probes are generated and
    screened for ``1/g + Pi P`` at budget ``W(g) + J``; hits are verified
    directly as ``P f + 1`` on a grid twice as fine.
    """
    if budget < 1:
        raise ValueError("probe budget must be at least 1")
    dec = newton_decompose(f, zeros)
    g = dec.remainder
    N = winding_number(g).winding
    u = g.reciprocal()
    family = ProbeFamily(F_PLUS_PI_P, dec.nodes, budget=max(N + J, 0))
    direct = ProbeFamily(PF_PLUS_ONE, budget=J)
    fine: list[BoundaryFunction] = []

    def verify(probe):
        if not fine:
            fine.append(resample(f, 2))
        rep = _evaluate_probe(fine[0], probe, direct, None)
        return rep if rep is not None and rep.winding <= -J - 1 else None

    return _scan(generate_probes(u, family, budget, seed, budget=N + J), budget,
                 lambda p: _evaluate_probe(u, p, family, None), -(N + J) - 1, verify, seed, workers)


def reduce_nonvanishing(f: BoundaryFunction, delta: float | None = None) -> tuple[BoundaryFunction, int]:
    """``(1/f, W(f))``: the ``P f + 1`` criterion at budget ``J`` is the
    ``1/f + P`` criterion at budget ``J + W(f)``."""
    shift = winding_number(f, delta).winding
    return f.reciprocal(), shift


@dataclass(frozen=True, eq=False)
class MeromorphicExtension:
    """``D + Pi * (F + rational)`` where ``F`` is analytic and ``rational`` carries the poles."""

    jet: Polynomial
    node_polynomial: Polynomial
    analytic: FourierSeries
    rational: RationalFunction

    def on(self, grid) -> BoundaryFunction:
        F = synthesize(self.analytic, grid)
        return (F + self.rational.on(grid)) * self.node_polynomial + self.jet

    def poles(self) -> list[tuple[complex, int]]:
        return _inside_poles(self.rational)


@dataclass(frozen=True, eq=False)
class ReciprocalExtension:
    """``Pi / E`` where ``E`` extends the reciprocal of the deflated function."""

    node_polynomial: Polynomial
    reciprocal: MeromorphicExtension
    pole_list: tuple[tuple[complex, int], ...]

    def on(self, grid) -> BoundaryFunction:
        return self.reciprocal.on(grid).reciprocal() * self.node_polynomial

    def poles(self) -> list[tuple[complex, int]]:
        return list(self.pole_list)


@dataclass(frozen=True, eq=False)
class CertificationResult:
    status: str
    budget: int
    extension: MeromorphicExtension | ReciprocalExtension | None = None
    poles: tuple[tuple[complex, int], ...] = ()
    residual: float | None = None
    diagnostics: tuple[str, ...] = ()
    witness: WitnessResult | None = None

    @property
    def pole_count(self) -> int:
        return sum(m for _, m in self.poles)

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED

    def lines(self) -> list[str]:
        out = [f"status={self.status}", f"budget={self.budget}", f"pole_count={self.pole_count}"]
        if self.residual is not None:
            out.append(f"residual={self.residual:.3e}")
        for i, (p, m) in enumerate(self.poles):
            out.append(f"pole[{i}]={p.real:.12g}{p.imag:+.12g}j multiplicity={m}")
        out.extend(f"note={d}" for d in self.diagnostics)
        if self.witness is not None:
            out.extend("witness." + line for line in self.witness.lines())
        return out


def _inside_poles(r: RationalFunction) -> list[tuple[complex, int]]:
    den_roots = r.den.roots()
    num_roots = r.num.roots()
    keep = []
    for root in den_roots:
        if abs(root) >= 1 - 1e-9:
            continue
        if num_roots.size:
            j = int(np.argmin(np.abs(num_roots - root)))
            if abs(num_roots[j] - root) < 1e-7:
                num_roots = np.delete(num_roots, j)
                continue
        keep.append(root)
    return cluster_roots(keep)


def _reflection_denominator(points) -> Polynomial:
    B = Polynomial([1.0])
    for a in points:
        B = B * Polynomial([1.0, -np.conj(a)])
    return B


def _node_values(f: BoundaryFunction, nodes: ZeroFactorSet) -> list[complex]:
    s = analyze(f)
    return [complex(s.evaluate(fac.point)) for fac in nodes]


def vanishing_order(f: BoundaryFunction, a: complex, cap: int = 8) -> int:
    """Order of the zero of ``f`` at the boundary point ``a`` (0 if ``f(a) != 0``), up to ``cap``.

    The ``k``-th Taylor coefficient counts as zero when it is below
    ``1e-9`` times the sum of the magnitudes of its terms.
    """
    s = analyze(f).floored(COEFF_FLOOR)
    modes = s.modes().astype(float)
    mag = np.abs(s.coeffs)
    derivs = laurent_derivatives(f, a, cap)
    binom = np.ones_like(modes)
    order = 0
    for k in range(cap + 1):
        if abs(derivs[k]) > 1e-9 * float(np.sum(mag * np.abs(binom))):
            break
        order = k + 1
        binom = binom * (modes - k) / (k + 1)
    return min(order, cap)


def _with_witness(result: CertificationResult, search) -> CertificationResult:
    if search is None or result.status == CERTIFIED:
        return result
    w = search()
    status = REFUTED if w.found else result.status
    return CertificationResult(status, result.budget, result.extension, result.poles, result.residual,
                               result.diagnostics, w)


def certify_meromorphic_extension(
    f: BoundaryFunction,
    nodes: ZeroFactorSet,
    J: int,
    delta: float | None = None,
    strict: bool = False,
    probes: int = 0,
    seed: int = 0,
) -> CertificationResult:
    """Construct a meromorphic extension of ``f`` with at most ``J`` poles.

    ``f = D + Pi g`` (Newton form at the boundary nodes), ``g = F + conj(G)``,
    ``A = z^N conj(D)``, ``B = prod(1 - conj(a_j) z)``.  The smooth function
    ``A + B G`` is fitted as ``P/R`` with ``deg P <= N + j``, ``deg R <= j``
    for the smallest ``j <= J`` that works; then ``S = (P - R A)/B`` and
    ``G = S/R``, so ``conj(G)`` is a rational function whose poles lie in
    the disc.  No fit within the budget gives INCONCLUSIVE.

    With ``strict`` a node where ``|f| <= delta`` raises NodeValueZero; by
    default it is only noted.  With ``probes > 0`` an inconclusive outcome
    triggers a witness search: over ``f + Pi p`` when ``f`` is nonzero at
    the nodes, otherwise over ``P f + 1`` after deflating the zeros of
    ``f`` at the nodes (every ``f + Pi p`` vanishes there).
    """
    if J < 0:
        raise ValueError("pole budget must be nonnegative")
    for fac in nodes:
        if fac.location != Location.BOUNDARY:
            raise NodeOffCircle(f"certification nodes must lie on the circle: {fac.point}")
    scale = f.sup_norm() or 1.0
    if delta is None:
        delta = DELTA_REL * scale
    notes = []
    vanishing = []
    for fac, val in zip(nodes, _node_values(f, nodes)):
        if abs(val) <= delta:
            if strict:
                raise NodeValueZero(f"f vanishes at node {fac.point}")
            notes.append(f"f vanishes at node {fac.point:.6g}; the winding criterion is undefined there")
            vanishing.append((fac.point, max(1, vanishing_order(f, fac.point))))

    grid = f.grid
    z = grid.z
    dec = newton_decompose(f, nodes)
    N = nodes.total_multiplicity
    points = dec.nodes.expanded()
    split = riesz_split(analyze(dec.remainder).floored(COEFF_FLOOR))
    A = conjugate_reflect(dec.jet_polynomial, N) if N else Polynomial([0.0])
    B = _reflection_denominator(points)
    target = A(z) + B(z) * synthesize(split.G, grid).values
    search = None
    if probes > 0 and vanishing:
        search = lambda: deflated_witness_search(f, ZeroFactorSet.of(vanishing), J, probes, seed)
    elif probes > 0:
        search = lambda: witness_search(f, ProbeFamily(F_PLUS_PI_P, dec.nodes, budget=J), probes, seed)

    def inconclusive(msg):
        return _with_witness(CertificationResult(INCONCLUSIVE, J, diagnostics=tuple(notes + [msg])), search)

    rms = np.sqrt(np.mean(np.abs(target) ** 2))
    f_rms = np.sqrt(np.mean(np.abs(f.values) ** 2))
    if rms <= NEGLIGIBLE * f_rms:
        rational = RationalFunction(Polynomial([0.0]), Polynomial([1.0]))
        j = 0
    else:
        for j in range(J + 1):
            P, R, res, _ = fit_rational(target, z, N + j, j)
            if res * rms <= FIT_TOL * max(rms, f_rms):
                break
        else:
            return inconclusive(f"no rational model of degree {N + J} for A/B + G")
        S, rem = (P - R * A).divmod(B)
        if rem.norm() > 1e-7 * max(P.norm(), (R * A).norm(), f_rms):
            return inconclusive("P - R A is not divisible by B")
        if S.degree > j:
            return inconclusive(f"numerator degree {S.degree} exceeds {j}")
        rational = RationalFunction(conjugate_reflect(S, j), conjugate_reflect(R, j))

    ext = MeromorphicExtension(dec.jet_polynomial, dec.node_polynomial, split.F, rational)
    poles = ext.poles()
    residual = float(np.max(np.abs(ext.on(grid).values - f.values)) / scale)
    if residual > CERTIFY_TOL:
        return inconclusive(f"reconstruction residual {residual:.2e} exceeds {CERTIFY_TOL:g}")
    if sum(m for _, m in poles) > J:
        return inconclusive("recovered model has more poles than the budget")
    notes.append(f"rational degree used: {N + j}")
    return CertificationResult(CERTIFIED, J, ext, tuple(poles), residual, tuple(notes))


def zeros_inside(K: BoundaryFunction, count: int) -> list[complex]:
    """Zeros in the disc of a holomorphic ``K`` known to have ``count`` of them.

    The negative Fourier modes of ``log(K z^-count)`` are ``-p_k / k`` with
    ``p_k`` the power sums of the zeros; Newton's identities turn those
    into the monic polynomial with exactly these roots.
    """
    if count == 0:
        return []
    shifted = K * (K.z ** (-count))
    u = np.log(np.abs(shifted.values)) + 1j * phase_trace(shifted)
    s = analyze(BoundaryFunction(K.grid, u))
    p = [-k * s.coef(-k) for k in range(1, count + 1)]
    e = [1.0 + 0j]
    for k in range(1, count + 1):
        e.append(sum((-1) ** (i - 1) * e[k - i] * p[i - 1] for i in range(1, k + 1)) / k)
    coeffs = [(-1) ** k * e[k] for k in range(count, -1, -1)]
    return list(Polynomial(coeffs).roots()) if count > 1 else [-coeffs[0]]


def certify_by_deflation(
    f: BoundaryFunction,
    zeros: ZeroFactorSet,
    J: int,
    delta: float | None = None,
    probes: int = 0,
    seed: int = 0,
) -> CertificationResult:
    """Extendibility of ``f`` with finitely many boundary zeros, through ``f = Pi g``.

    With ``N = W(g) >= -J`` the reciprocal ``1/g`` is certified with budget
    ``N + J`` at the zeros of ``Pi``; the zeros of its extension are the
    poles of ``g`` and, by the argument principle, there are
    ``poles(1/g) - N`` of them.  ``N < -J`` means the ``P f + 1`` criterion
    fails at budget ``J``; with ``probes > 0`` a witness search corroborates.
    """
    if J < 0:
        raise ValueError("pole budget must be nonnegative")
    scale = f.sup_norm() or 1.0
    dec = newton_decompose(f, zeros)
    if len(zeros) and np.max(np.abs(dec.coeffs)) > 1e-8 * scale:
        raise DeflationFailed("declared zeros do not annihilate the jet of f")
    g = dec.remainder
    if delta is None:
        delta = DELTA_REL * g.sup_norm()
    N = winding_number(g, delta).winding
    notes = [f"winding of deflated function: {N}"]
    search = (lambda: deflated_witness_search(f, zeros, J, probes, seed)) if probes > 0 else None

    def inconclusive(msg):
        notes.append(msg)
        return _with_witness(CertificationResult(INCONCLUSIVE, J, diagnostics=tuple(notes)), search)

    if N < -J:
        return inconclusive(f"N + J = {N + J} < 0: the criterion fails at this budget")
    inner = certify_meromorphic_extension(g.reciprocal(), zeros, N + J)
    if not inner.certified:
        notes.extend(inner.diagnostics)
        return inconclusive("reciprocal of the deflated function not certified")
    count = inner.pole_count - N
    if not 0 <= count <= J:
        return inconclusive(f"argument principle gives {count} poles, outside [0, {J}]")
    E = inner.extension
    K = E.on(f.grid) * E.rational.den
    poles = tuple(cluster_roots(zeros_inside(K, count))) if count else ()
    ext = ReciprocalExtension(dec.node_polynomial, E, poles)
    residual = float(np.max(np.abs(ext.on(f.grid).values - f.values)) / scale)
    if residual > CERTIFY_TOL:
        return inconclusive(f"reconstruction residual {residual:.2e} exceeds {CERTIFY_TOL:g}")
    return CertificationResult(CERTIFIED, J, ext, poles, residual, tuple(notes))


def classify_with_factors(
    f: BoundaryFunction,
    pi: ZeroFactorSet,
    J: int,
    probes: int = 0,
    seed: int = 0,
) -> CertificationResult:
    """Criterion ``W(f + Pi p) >= -J`` for a mixed node polynomial ``Pi = Pi1 Pi2 Pi3``.

    Outside factors do not change which ``p`` are admissible and are
    dropped.  The inside factors ``Pi1`` (total multiplicity ``N``) move
    into the function: the result classifies ``f / Pi1`` with budget
    ``N + J`` at the boundary factors ``Pi2``.
    """
    inside = pi.select(Location.INSIDE)
    boundary = pi.select(Location.BOUNDARY)
    outside = pi.select(Location.OUTSIDE)
    N = inside.total_multiplicity
    quotient = f / node_product(inside)
    res = certify_meromorphic_extension(quotient, boundary, N + J, probes=probes, seed=seed)
    notes = (f"inside factors: {N}", f"outside factors dropped: {outside.total_multiplicity}")
    return CertificationResult(res.status, N + J, res.extension, res.poles, res.residual,
                               notes + res.diagnostics, res.witness)


def shift_criterion_test(f: BoundaryFunction, probes: int = 1000, seed: int = 0) -> CertificationResult:
    """Holomorphic extendibility through the shift ``f + c`` with ``c = 2 max|f|``.

    ``f + c`` winds zero times, so ``f`` extends iff ``1/(f + c)`` extends
    with no zeros.  Otherwise a witness for ``P (f + c) + 1`` is searched.
    """
    fmax = f.sup_norm()
    c = 2 * fmax if fmax > 0 else 1.0
    shifted = f + c
    W = winding_number(shifted).winding
    notes = [f"shift c = {c:.6g}", f"winding of f + c: {W}"]
    h = shifted.reciprocal()
    ok, rep = holomorphic_test(h)
    if W == 0 and ok and zero_count(h) == 0:
        F = analyze(f).floored(COEFF_FLOOR)
        analytic = FourierSeries.from_analytic(F.analytic_part(), F.M)
        ext = MeromorphicExtension(Polynomial([0.0]), Polynomial([1.0]), analytic,
                                   RationalFunction(Polynomial([0.0]), Polynomial([1.0])))
        residual = float(np.max(np.abs(ext.on(f.grid).values - f.values)) / (fmax or 1.0))
        return CertificationResult(CERTIFIED, 0, ext, (), residual, tuple(notes))
    notes.append(f"negative energy of 1/(f + c): {rep.negative_energy:.3e}")
    res = CertificationResult(INCONCLUSIVE, 0, diagnostics=tuple(notes))
    if probes <= 0:
        return res
    return _with_witness(res, lambda: witness_search(shifted, ProbeFamily(PF_PLUS_ONE, budget=0), probes, seed))
