"""Holomorphic and meromorphic extendibility tests and degree-bounded rational recovery."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateFit, NoRationalModel, RankUnstable, RootFindingFailed
from .spectral import COEFF_FLOOR, BoundaryFunction, Polynomial, analyze

HOLOMORPHIC = "holomorphic"
MEROMORPHIC = "meromorphic"
NOT_WITHIN_BUDGET = "not_within_budget"

HANKEL_MAX = 64
RANK_TOL = 1e-8
GAP_RATIO = 0.1
FIT_TOL = 1e-8
INSIDE_MARGIN = 1e-9
CLUSTER_TOL = 1e-7


@dataclass(frozen=True)
class ExtensionReport:
    verdict: str
    budget: int
    negative_energy: float
    hankel_singular_values: tuple[float, ...] = ()
    pole_estimates: tuple[tuple[complex, int], ...] = ()
    rank: int = 0

    @property
    def pole_count(self) -> int:
        return sum(m for _, m in self.pole_estimates)

    def poles(self) -> list[complex]:
        return [p for p, m in self.pole_estimates for _ in range(m)]

    def lines(self) -> list[str]:
        out = [
            f"verdict={self.verdict}",
            f"budget={self.budget}",
            f"rank={self.rank}",
            f"pole_count={self.pole_count}",
            f"negative_energy={self.negative_energy:.12g}",
        ]
        sv = self.hankel_singular_values[: max(self.rank + 2, 3)]
        out.append("hankel_sv=" + ",".join(f"{s:.3e}" for s in sv))
        for i, (p, m) in enumerate(self.pole_estimates):
            out.append(f"pole[{i}]={p.real:.12g}{p.imag:+.12g}j multiplicity={m}")
        return out


@dataclass(frozen=True, eq=False)
class RationalFunction:
    """``num / den`` with the denominator's lowest-order nonzero coefficient scaled to 1.

    For denominators not vanishing at the origin this is ``den(0) == 1``.
    """

    num: Polynomial
    den: Polynomial

    def __post_init__(self):
        if self.den.is_zero():
            raise ValueError("zero denominator")
        lead = self.den.coeffs[np.nonzero(self.den.coeffs)[0][0]]
        object.__setattr__(self, "num", Polynomial(self.num.coeffs / lead))
        object.__setattr__(self, "den", Polynomial(self.den.coeffs / lead))

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree)

    def __call__(self, z):
        return self.num(z) / self.den(z)

    def on(self, grid) -> BoundaryFunction:
        return BoundaryFunction(grid, self(grid.z))

    def common_roots(self, tol: float = 1e-8) -> list[complex]:
        rn = self.num.roots()
        return [r for r in self.den.roots() if rn.size and np.min(np.abs(rn - r)) < tol]


def cluster_roots(roots, tol: float = CLUSTER_TOL) -> list[tuple[complex, int]]:
    """Group roots closer than ``tol`` (single linkage); return (mean, count) pairs."""
    roots = [complex(r) for r in roots]
    groups: list[list[complex]] = []
    for r in sorted(roots, key=lambda x: (x.real, x.imag)):
        for grp in groups:
            if min(abs(r - q) for q in grp) < tol:
                grp.append(r)
                break
        else:
            groups.append([r])
    out = [(complex(np.mean(g)), len(g)) for g in groups]
    return sorted(out, key=lambda pm: (abs(pm[0]), np.angle(pm[0])))


def pole_locations(r: RationalFunction) -> list[tuple[complex, int]]:
    """Denominator roots strictly inside the disc, with multiplicities."""
    try:
        roots = r.den.roots()
    except np.linalg.LinAlgError as exc:
        raise RootFindingFailed(str(exc)) from exc
    if not np.all(np.isfinite(roots)):
        raise RootFindingFailed("non-finite denominator root")
    inside = roots[np.abs(roots) < 1 - INSIDE_MARGIN]
    return cluster_roots(inside)


def holomorphic_test(f: BoundaryFunction, tol: float = RANK_TOL) -> tuple[bool, ExtensionReport]:
    """Vanishing of the negative Fourier modes, up to ``tol`` in relative amplitude."""
    s = analyze(f).floored(COEFF_FLOOR)
    neg = s.negative_energy()
    total = s.total_energy()
    ok = neg <= tol ** 2 * total
    verdict = HOLOMORPHIC if ok else NOT_WITHIN_BUDGET
    return ok, ExtensionReport(verdict, 0, neg)


def hankel_matrix(f: BoundaryFunction, size: int | None = None) -> np.ndarray:
    """``H[i, j] = c_{-(i + j + 1)}`` for ``0 <= i, j < size`` (floored coefficients)."""
    s = analyze(f).floored(COEFF_FLOOR)
    K = size or min(HANKEL_MAX, s.M // 2)
    seq = np.zeros(2 * K, dtype=complex)
    neg = s.antianalytic_part()
    m = min(seq.size, neg.size)
    seq[:m] = neg[:m]
    idx = np.arange(K)
    return seq[idx[:, None] + idx[None, :]]


def _shift_poles(U: np.ndarray) -> np.ndarray:
    # rows of the Hankel range shift by multiplication with the poles
    phi = np.linalg.lstsq(U[:-1], U[1:], rcond=None)[0]
    return np.linalg.eigvals(phi)


def meromorphic_test(f: BoundaryFunction, J: int, tol: float = RANK_TOL) -> ExtensionReport:
    """Decide whether ``f`` extends meromorphically with at most ``J`` poles.

    The numerical rank ``r`` of the Hankel matrix of negative coefficients
    counts the poles (Kronecker).  Poles come from the shift invariance of
    the dominant singular subspace.  A rank within the budget must be
    separated from the next singular value by a factor of ten, otherwise
    RankUnstable is raised.
    """
    if J < 0:
        raise ValueError("pole budget must be nonnegative")
    s = analyze(f).floored(COEFF_FLOOR)
    neg = s.negative_energy()
    H = hankel_matrix(f)
    U, sv, _ = np.linalg.svd(H)
    if sv.size == 0 or sv[0] == 0:
        return ExtensionReport(HOLOMORPHIC, J, neg, tuple(float(x) for x in sv), (), 0)
    r = int(np.sum(sv > tol * sv[0]))
    svt = tuple(float(x) for x in sv)
    if r > J:
        return ExtensionReport(NOT_WITHIN_BUDGET, J, neg, svt, (), r)
    nxt = sv[r] if r < sv.size else 0.0
    if nxt / sv[r - 1] > GAP_RATIO:
        raise RankUnstable(f"singular values {sv[r - 1]:.3e}, {nxt:.3e} are not separated")
    poles = _shift_poles(U[:, :r])
    if np.any(np.abs(poles) >= 1 - INSIDE_MARGIN):
        raise RankUnstable("rank-r model places a pole outside the open disc")
    return ExtensionReport(MEROMORPHIC, J, neg, svt, tuple(cluster_roots(poles)), r)


def fit_rational(values: np.ndarray, z: np.ndarray, num_deg: int, den_deg: int):
    """Least-squares ``Q * values ~ P`` with ``deg P <= num_deg``, ``deg Q <= den_deg``, ``Q(0) = 1``.

    Returns ``(P, Q, residual, rank_deficient)`` where the residual is
    ``||Q values - P||_2 / ||values||_2`` on the nodes.
    """
    cols = [z ** k for k in range(num_deg + 1)]
    cols += [-(z ** k) * values for k in range(1, den_deg + 1)]
    A = np.stack(cols, axis=1)
    scale = np.linalg.norm(A, axis=0)
    scale[scale == 0] = 1
    sol, _, rank, _ = np.linalg.lstsq(A / scale, values, rcond=None)
    sol = sol / scale
    P = Polynomial(sol[: num_deg + 1])
    Q = Polynomial(np.concatenate([[1.0], sol[num_deg + 1:]]))
    norm = np.linalg.norm(values)
    res = np.linalg.norm(Q(z) * values - P(z)) / norm if norm else 0.0
    return P, Q, float(res), rank < A.shape[1]


def rational_recover(f: BoundaryFunction, N: int, tol: float = FIT_TOL, seed: int = 0) -> RationalFunction:
    """Represent ``f`` as ``P/Q`` with both degrees at most ``N``.

    Denominator degrees are tried from 0 upwards so that the accepted model
    has no common factors; the numerator is allowed degree ``N`` throughout.
    """
    if N < 0:
        raise ValueError("degree bound must be nonnegative")
    z = f.z
    vals = np.asarray(f.values)
    best = np.inf
    for j in range(N + 1):
        P, Q, res, deficient = fit_rational(vals, z, N, j)
        if deficient and res <= tol:
            rng = np.random.default_rng(seed)
            jitter = vals * (1 + 1e-14 * rng.standard_normal(vals.size))
            P, Q, res, deficient = fit_rational(jitter, z, N, j)
            if deficient:
                raise DegenerateFit(f"rank-deficient fit at denominator degree {j}")
        best = min(best, res)
        if res <= tol:
            return RationalFunction(P, Q)
    raise NoRationalModel(f"best relative residual {best:.3e} at degree {N} exceeds {tol:g}")
