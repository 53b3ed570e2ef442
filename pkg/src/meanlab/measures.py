"""Borel probability measures on [0,1]: integration, moments, regimes.

Three concrete measures: finite atomic combinations, the Lebesgue measure,
and absolutely continuous measures given by a density expression. Moments
are always centralized at the first raw moment. classify() reads the regime
off mu2, mu3, mu5 and attaches the derived exponents p, q, r that drive the
equality analysis, each present only when its defining denominator allows.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence, Union

import numpy as np

from . import expr as ex
from .errors import DegenerateMeasure, QuadratureNonFinite

__all__ = [
    "Measure", "Discrete", "Lebesgue", "Density",
    "MomentData", "Regime", "RegimeInfo",
    "integrate", "moments", "classify",
    "measure_to_json", "measure_from_json", "preset_measure", "PRESETS",
]

MAX_MOMENT_ORDER = 8
ATOM_WEIGHT_TOL = 1e-14
DENSITY_NORM_TOL = 1e-10
DEGENERATE_TOL = 1e-14
MOMENT_ZERO_TOL = 1e-12


@lru_cache(maxsize=16)
def _gauss_nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped to [0,1]."""
    x, w = np.polynomial.legendre.leggauss(order)
    return (x + 1.0) / 2.0, w / 2.0


class Measure:
    """Base for probability measures on [0,1]."""

    __slots__ = ()

    def _nodes(self) -> tuple[Sequence[float], Sequence[float]]:
        raise NotImplementedError

    def integrate(self, integrand: Callable[[float], float]) -> float:
        ts, ws = self._nodes()
        total = 0.0
        for t, w in zip(ts, ws):
            v = integrand(t)
            if not math.isfinite(v):
                raise QuadratureNonFinite(t, v)
            total += w * v
        return total


@dataclass(frozen=True)
class Discrete(Measure):
    """Finite convex combination of point masses sum w_k * delta_{t_k}."""

    atoms: tuple[tuple[float, float], ...]

    def __init__(self, atoms):
        pairs = tuple((float(t), float(w)) for t, w in atoms)
        if not pairs:
            raise ValueError("a discrete measure needs at least one atom")
        for t, w in pairs:
            if not (0.0 <= t <= 1.0):
                raise ValueError(f"atom location {t!r} outside [0, 1]")
            if not w > 0.0:
                raise ValueError(f"atom weight {w!r} must be positive")
        total = math.fsum(w for _, w in pairs)
        if abs(total - 1.0) > ATOM_WEIGHT_TOL:
            raise ValueError(f"atom weights sum to {total!r}, not 1")
        object.__setattr__(self, "atoms", pairs)

    def _nodes(self):
        ts = [t for t, _ in self.atoms]
        ws = [w for _, w in self.atoms]
        return ts, ws


@dataclass(frozen=True)
class Lebesgue(Measure):
    """Uniform measure on [0,1], integrated by Gauss-Legendre quadrature."""

    order: int = 32

    def __post_init__(self):
        if self.order < 2:
            raise ValueError("quadrature order must be at least 2")

    def _nodes(self):
        return _gauss_nodes(self.order)


@dataclass(frozen=True)
class Density(Measure):
    """Measure rho(t) dt with an expression density normalized on [0,1]."""

    rho: ex.Expr
    order: int = 32
    _weights: tuple[float, ...] = field(default=(), compare=False, repr=False)

    def __init__(self, rho: Union[ex.Expr, str], order: int = 32):
        if isinstance(rho, str):
            rho = ex.parse(rho)
        if order < 2:
            raise ValueError("quadrature order must be at least 2")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "order", order)
        ts, ws = _gauss_nodes(order)
        rf = ex.compile_scalar(rho)
        values = []
        for t, w in zip(ts, ws):
            v = rf(float(t))
            if not math.isfinite(v):
                raise QuadratureNonFinite(float(t), v)
            values.append(w * v)
        norm = math.fsum(values)
        if abs(norm - 1.0) > DENSITY_NORM_TOL:
            raise ValueError(
                f"density integrates to {norm!r} on [0, 1]; expected 1 within {DENSITY_NORM_TOL}"
            )
        # renormalize so the node weights form an exact probability measure
        object.__setattr__(self, "_weights", tuple(v / norm for v in values))

    def _nodes(self):
        ts, _ = _gauss_nodes(self.order)
        return ts, self._weights


def integrate(m: Measure, integrand: Callable[[float], float]) -> float:
    """Integral of the integrand against the measure."""
    return m.integrate(integrand)


@dataclass(frozen=True)
class MomentData:
    """First raw moment and centralized moments mu[n] for n = 0..nmax."""

    mu_hat1: float
    mu: tuple[float, ...]

    @property
    def nmax(self) -> int:
        return len(self.mu) - 1


def moments(m: Measure, nmax: int = 6) -> MomentData:
    """Centralized moments mu_n = integral of (t - mu_hat1)^n, n <= nmax."""
    if not (0 <= nmax <= MAX_MOMENT_ORDER):
        raise ValueError(f"nmax must be between 0 and {MAX_MOMENT_ORDER}")
    # quadrature backends hand back numpy scalars; pin plain floats so the
    # values repr cleanly and serialize everywhere
    mu_hat1 = float(m.integrate(lambda t: t))
    mu = [float(m.integrate(lambda t: 1.0))]
    for n in range(1, nmax + 1):
        mu.append(float(m.integrate(lambda t, _n=n: (t - mu_hat1) ** _n)))
    return MomentData(mu_hat1=mu_hat1, mu=tuple(mu))


class Regime(enum.Enum):
    MU3_NONZERO = "mu3_nonzero"
    MU3_ZERO_MU5_NONZERO = "mu3_zero_mu5_nonzero"
    EVEN_SYMMETRIC = "even_symmetric"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class RegimeInfo:
    """Classification plus the exponents the equality checks are built on.

    p, q, r are None whenever their defining denominators vanish: p needs
    mu4 > 0, q needs mu6 != 5 mu2 mu4, and r needs mu4 = 3 mu2^2 together
    with mu6 != 15 mu2^3. moment_condition_6 carries the raw value of
    6 mu6 mu2^2 - mu6 mu4 - 5 mu4^2 mu2, whose vanishing marks the measures
    for which the two exponent scales collapse into one power law.
    """

    regime: Regime
    p: float | None
    q: float | None
    r: float | None
    moment_condition_6: float
    moment_data: MomentData


def _is_zero(value: float, n: int, mu2: float) -> bool:
    # moments of measures on [0,1] are at most 1 in magnitude, so this is
    # an absolute cutoff except for the (impossible here) mu2 > 1 case
    return abs(value) <= MOMENT_ZERO_TOL * max(1.0, mu2 ** (n / 2.0))


def classify(m: Measure) -> RegimeInfo:
    """Decide which equality regime applies, from moments up to order 6."""
    md = moments(m, 6)
    mu2, mu3, mu4, mu5, mu6 = md.mu[2], md.mu[3], md.mu[4], md.mu[5], md.mu[6]
    if mu2 <= DEGENERATE_TOL:
        raise DegenerateMeasure(mu2)
    if not _is_zero(mu3, 3, mu2):
        regime = Regime.MU3_NONZERO
    elif not _is_zero(mu5, 5, mu2):
        regime = Regime.MU3_ZERO_MU5_NONZERO
    else:
        regime = Regime.EVEN_SYMMETRIC

    p = 3.0 * mu2 * mu2 / mu4 - 1.0 if mu4 > 0.0 else None

    q_den = mu6 - 5.0 * mu4 * mu2
    q = None
    if not _is_zero(q_den, 6, mu2) and mu4 > 0.0:
        q = (mu2 / mu4) * (10.0 * mu4 * mu4 - 3.0 * mu6 * mu2 - 15.0 * mu4 * mu2 * mu2) / q_den

    r = None
    r_den = 3.0 * mu6 - 45.0 * mu2 ** 3
    if _is_zero(mu4 - 3.0 * mu2 * mu2, 4, mu2) and not _is_zero(r_den, 6, mu2):
        r = (7.0 * mu6 - 45.0 * mu2 ** 3) / r_den

    cond6 = 6.0 * mu6 * mu2 * mu2 - mu6 * mu4 - 5.0 * mu4 * mu4 * mu2
    return RegimeInfo(
        regime=regime, p=p, q=q, r=r, moment_condition_6=cond6, moment_data=md
    )


# --------------------------------------------------------------- serialization

def measure_to_json(m: Measure) -> dict:
    if isinstance(m, Discrete):
        return {"type": "atoms", "atoms": [[t, w] for t, w in m.atoms]}
    if isinstance(m, Lebesgue):
        return {"type": "lebesgue"}
    if isinstance(m, Density):
        return {"type": "density", "rho": ex.to_string(m.rho), "order": m.order}
    raise TypeError(f"not a measure: {m!r}")


def measure_from_json(data: Union[str, dict]) -> Measure:
    if isinstance(data, str):
        data = json.loads(data)
    kind = data.get("type")
    if kind == "atoms":
        return Discrete(tuple((t, w) for t, w in data["atoms"]))
    if kind == "lebesgue":
        return Lebesgue()
    if kind == "density":
        return Density(data["rho"], order=int(data.get("order", 32)))
    raise ValueError(f"unknown measure type {kind!r}")


def preset_measure(name: str) -> Measure:
    """Named measures used throughout: 'ebm' for (delta_0 + delta_1)/2 and
    'lebesgue' for the uniform measure."""
    try:
        return PRESETS[name]()
    except KeyError:
        raise ValueError(f"unknown measure preset {name!r}; known: {sorted(PRESETS)}") from None


PRESETS: dict[str, Callable[[], Measure]] = {
    "ebm": lambda: Discrete(((0.0, 0.5), (1.0, 0.5))),
    "lebesgue": lambda: Lebesgue(),
}
