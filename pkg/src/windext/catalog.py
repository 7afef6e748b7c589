"""Test functions with analytically known extendibility, pole budget and winding."""
from __future__ import annotations

import ast
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import BadParams, UnknownCase
from .spectral import BoundaryFunction, CircleGrid, Polynomial, ZeroFactorSet


@dataclass(frozen=True)
class Truth:
    """Ground truth fixed by construction.

    ``pole_budget`` is the least number of poles of a meromorphic extension
    (``None``: no extension with finitely many poles).  ``winding`` is
    ``None`` when it is undefined (boundary zeros) or not known in closed form.
    """

    extendible: bool
    pole_budget: int | None
    winding: int | None
    boundary_zeros: ZeroFactorSet = field(default_factory=ZeroFactorSet)


@dataclass(frozen=True, eq=False)
class CatalogCase:
    name: str
    f: BoundaryFunction
    truth: Truth
    params: Mapping[str, object] = field(default_factory=dict)

    def lines(self) -> list[str]:
        t = self.truth
        out = [f"case={self.name}", f"grid_n={self.f.n}", f"extendible={str(t.extendible).lower()}",
               f"pole_budget={'none' if t.pole_budget is None else t.pole_budget}",
               f"winding={'undefined' if t.winding is None else t.winding}"]
        out.extend(f"param.{k}={v}" for k, v in sorted(self.params.items()))
        return out


def _roots_inside(roots) -> int:
    return int(sum(abs(r) < 1 for r in roots))


def _check_off_circle(roots, what: str) -> None:
    for r in roots:
        if abs(abs(r) - 1) < 1e-9:
            raise BadParams(f"{what} root {r} lies on the unit circle")


def _monomial(grid, n: int = 1):
    n = int(n)
    f = BoundaryFunction(grid, grid.z ** n)
    return f, Truth(n >= 0, max(0, -n), n)


def _conj_z(grid):
    return BoundaryFunction(grid, np.conj(grid.z)), Truth(False, 1, -1)


def _rational(grid, num=(1.0,), den=(1.0,)):
    """``num/den`` with ascending coefficient lists; common roots are not cancelled."""
    P, Q = Polynomial(num), Polynomial(den)
    if Q.is_zero():
        raise BadParams("zero denominator")
    if P.is_zero():
        return BoundaryFunction(grid, np.zeros(grid.n, complex)), Truth(True, 0, None)
    pr, qr = P.roots(), Q.roots()
    _check_off_circle(qr, "denominator")
    for r in qr:
        if pr.size and np.min(np.abs(pr - r)) < 1e-9:
            raise BadParams("numerator and denominator share a root")
    zeros_bd = [r for r in pr if abs(abs(r) - 1) < 1e-9]
    poles = _roots_inside(qr)
    f = BoundaryFunction(grid, P(grid.z) / Q(grid.z))
    if zeros_bd:
        bz = ZeroFactorSet.of([(r, 1) for r in zeros_bd])
        return f, Truth(poles == 0, poles, None, bz)
    return f, Truth(poles == 0, poles, _roots_inside(pr) - poles)


def _blaschke(grid, zeros=(0.5,)):
    zeros = [complex(a) for a in zeros]
    if any(abs(a) >= 1 for a in zeros):
        raise BadParams("Blaschke zeros must lie in the open disc")
    z = grid.z
    v = np.ones(grid.n, dtype=complex)
    for a in zeros:
        v *= (z - a) / (1 - np.conj(a) * z)
    return BoundaryFunction(grid, v), Truth(True, 0, len(zeros))


def _pole_counterexample(grid):
    z = grid.z
    return BoundaryFunction(grid, z / (z - 0.5)), Truth(False, 1, 0)


def _nonvanishing_winding(grid, N: int = 1):
    # z^N (2 + cos t) = z^(N-1) (z^2/2 + 2z + 1/2): a pole of order 1 - N at 0 when N < 1
    N = int(N)
    v = grid.z ** N * (2 + np.cos(grid.theta))
    return BoundaryFunction(grid, v), Truth(N >= 1, max(0, 1 - N), N)


def _boundary_zero_times(grid, nodes="1:1", base="pole_counterexample"):
    zs = parse_factor_list(nodes) if isinstance(nodes, str) else ZeroFactorSet.of(nodes)
    if any(abs(abs(fac.point) - 1) > 1e-12 for fac in zs):
        raise BadParams("boundary_zero_times needs nodes on the circle")
    inner = make_case(base, {}, grid)
    v = inner.f.values.copy()
    for fac in zs:
        v = v * (grid.z - fac.point) ** fac.multiplicity
    t = inner.truth
    return BoundaryFunction(grid, v), Truth(t.extendible, t.pole_budget, None, zs)


def _smooth_bump(grid, width: float = 0.5):
    """``exp((cos t - 1) / width^2)``: positive, real and not rational, so no finite-pole extension."""
    width = float(width)
    if width < 0.35:
        # below this the minimum exp(-2/width^2) falls under the default zero guard
        raise BadParams("width must be at least 0.35")
    v = np.exp((np.cos(grid.theta) - 1) / width ** 2).astype(complex)
    return BoundaryFunction(grid, v), Truth(False, None, 0)


_REGISTRY: dict[str, tuple[Callable, str]] = {
    "monomial": (_monomial, "z^n (params: n)"),
    "conj_z": (_conj_z, "conj(z) = 1/z on the circle"),
    "rational": (_rational, "num/den (params: num, den as ascending coefficient lists)"),
    "blaschke": (_blaschke, "finite Blaschke product (params: zeros)"),
    "pole_counterexample": (_pole_counterexample, "z/(z - 1/2): winding criterion holds, no holomorphic extension"),
    "nonvanishing_winding": (_nonvanishing_winding, "z^N (2 + cos t) (params: N)"),
    "boundary_zero_times": (_boundary_zero_times, "prod (z - a)^m times a base case (params: nodes, base)"),
    "smooth_bump": (_smooth_bump, "exp((cos t - 1)/width^2) (params: width)"),
}


def case_names() -> list[str]:
    return sorted(_REGISTRY)


def describe(name: str) -> str:
    if name not in _REGISTRY:
        raise UnknownCase(name)
    return _REGISTRY[name][1]


def parse_param_value(text: str):
    """Python literal if it parses as one (numbers, lists, tuples), else the raw string."""
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return text


def parse_factor_list(text: str) -> ZeroFactorSet:
    """``"1:2,-1:1"`` or ``"0.5:1:in,1j:1:bd"`` into a zero-factor set (location tags are checked)."""
    from .spectral import Location

    tags = {"in": Location.INSIDE, "bd": Location.BOUNDARY, "out": Location.OUTSIDE}
    pairs = []
    for item in filter(None, (s.strip() for s in text.split(","))):
        parts = item.split(":")
        if len(parts) not in (2, 3):
            raise BadParams(f"bad factor {item!r}; expected point:multiplicity[:in|bd|out]")
        try:
            point = complex(parts[0].replace("i", "j"))
            mult = int(parts[1])
        except ValueError as exc:
            raise BadParams(f"bad factor {item!r}") from exc
        if mult < 1:
            raise BadParams(f"multiplicity must be positive in {item!r}")
        if len(parts) == 3:
            if parts[2] not in tags:
                raise BadParams(f"unknown location tag {parts[2]!r}")
            if Location.of(point) != tags[parts[2]]:
                raise BadParams(f"point {point} is not {parts[2]}")
        pairs.append((point, mult))
    return ZeroFactorSet.of(pairs)


def make_case(name: str, params: Mapping[str, object] | None = None, grid: CircleGrid | None = None) -> CatalogCase:
    """Build a registry case; string parameter values are parsed as Python literals."""
    if name not in _REGISTRY:
        raise UnknownCase(f"unknown catalog case {name!r}; known: {', '.join(case_names())}")
    grid = grid or CircleGrid()
    params = dict(params or {})
    parsed = {k: parse_param_value(v) if isinstance(v, str) and k not in ("nodes", "base") else v
              for k, v in params.items()}
    builder = _REGISTRY[name][0]
    try:
        f, truth = builder(grid, **parsed)
    except TypeError as exc:
        raise BadParams(f"bad parameters for {name}: {exc}") from exc
    except (ValueError, np.linalg.LinAlgError) as exc:
        raise BadParams(f"bad parameter values for {name}: {exc}") from exc
    return CatalogCase(name, f, truth, params)


EXTENDIBLE = "extendible"
MEROMORPHIC = "meromorphic"
NON_EXTENDIBLE = "nonextendible"


def _random_roots(rng, count, lo, hi, avoid=(), sep=0.05):
    out: list[complex] = []
    while len(out) < count:
        r = rng.uniform(lo, hi) * np.exp(2j * np.pi * rng.random())
        if all(abs(r - q) >= sep for q in list(out) + list(avoid)):
            out.append(complex(r))
    return out


def _random_extendible(rng, grid):
    n_in = int(rng.integers(0, 3))
    n_out = int(rng.integers(0, 3))
    roots = _random_roots(rng, n_in, 0.0, 0.95) + _random_roots(rng, n_out, 1.05, 2.0)
    lead = complex(rng.standard_normal() + 1j * rng.standard_normal())
    p = Polynomial.from_roots(roots) * lead
    q = Polynomial(0.4 * (rng.standard_normal(4) + 1j * rng.standard_normal(4)))
    values = p(grid.z) * np.exp(q(grid.z))
    return values, roots, n_in


def random_case(kind: str, seed: int, grid: CircleGrid | None = None, J: int = 1) -> CatalogCase:
    """Seeded random case of class ``extendible``, ``meromorphic`` (exactly ``J`` poles) or ``nonextendible``.

    Extendible: polynomial (roots at least 0.05 off the circle) times
    ``exp`` of a cubic.  Meromorphic: that divided by ``J`` distinct
    factors ``z - b`` with ``|b| <= 0.8`` kept 0.05 away from the zeros.
    Non-extendible: an extendible case plus ``eps conj(z)^k``,
    ``eps`` in ``[0.1, 1]``, ``k`` in ``1..3``; this has a pole of order
    ``k`` at the origin, so its least pole budget is ``k``.
    """
    grid = grid or CircleGrid()
    rng = np.random.default_rng(seed)
    values, roots, n_in = _random_extendible(rng, grid)
    params = {"seed": seed}
    if kind == EXTENDIBLE:
        return CatalogCase(f"random_{kind}", BoundaryFunction(grid, values), Truth(True, 0, n_in), params)
    if kind == MEROMORPHIC:
        if J < 0:
            raise BadParams("J must be nonnegative")
        poles = _random_roots(rng, J, 0.0, 0.8, avoid=roots)
        den = Polynomial.from_roots(poles)
        params.update(J=J, poles=poles)
        v = values / den(grid.z)
        return CatalogCase(f"random_{kind}", BoundaryFunction(grid, v), Truth(J == 0, J, n_in - J), params)
    if kind == NON_EXTENDIBLE:
        eps = rng.uniform(0.1, 1.0)
        k = int(rng.integers(1, 4))
        params.update(eps=eps, k=k)
        v = values + eps * np.conj(grid.z) ** k
        return CatalogCase(f"random_{kind}", BoundaryFunction(grid, v), Truth(False, k, None), params)
    raise UnknownCase(f"unknown random class {kind!r}")
