"""Initial-measure samplers, macroscopic profiles, and empirical functionals.

Initial conditions are site-wise product measures whose parameter follows a
macroscopic profile evaluated at x/N (local equilibrium).  The zero-range
marginal at parameter ``alpha`` is the geometric law

    P(k) = (1/(1+alpha)) * (alpha/(1+alpha))**k,      k = 0, 1, 2, ...

with mean ``alpha``; the exclusion marginal is Bernoulli.  Entropy-type
conditions on the initial measures hold automatically for bounded product
families and are not asserted numerically.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .lattice import ExclusionConfig, IncrementConfig

__all__ = [
    "ProfileSpec",
    "TestFunction",
    "EmpiricalRecord",
    "nu_tilde_pmf",
    "sample_zr_initial",
    "sample_exclusion_initial",
    "empirical_pairing",
    "block_density",
    "empirical_record",
    "default_dictionary",
]

PROFILE_KINDS = ("constant", "step", "bump", "linear-ramp", "table")
TEST_FUNCTION_KINDS = ("smooth-bump", "H_l-ramp", "indicator-smoothed")


def _mollifier(s: np.ndarray) -> np.ndarray:
    """Standard compact bump, value 1 at s=0, support |s| < 1."""
    out = np.zeros_like(s, dtype=float)
    inside = np.abs(s) < 1.0
    si = s[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - si * si))
    return out


def _mollifier_deriv(s: np.ndarray) -> np.ndarray:
    out = np.zeros_like(s, dtype=float)
    inside = np.abs(s) < 1.0
    si = s[inside]
    g = np.exp(1.0 - 1.0 / (1.0 - si * si))
    out[inside] = g * (-2.0 * si) / (1.0 - si * si) ** 2
    return out


def _smoothstep(t: np.ndarray) -> np.ndarray:
    t = np.clip(t, 0.0, 1.0)
    return t * t * (3.0 - 2.0 * t)


@dataclass(frozen=True)
class ProfileSpec:
    """Macroscopic initial profile (rho_0, zeta_0 or lambda_0-slope)."""

    kind: str
    params: dict
    support: tuple[float, float]

    def __post_init__(self) -> None:
        if self.kind not in PROFILE_KINDS:
            raise ValueError(f"unknown profile kind {self.kind!r}")
        lo, hi = self.support
        if not lo < hi:
            raise ValueError("profile support must be a nonempty interval")
        if self.kind == "table":
            us, values = self._table_data()
            if us.size < 2 or np.any(np.diff(us) <= 0):
                raise ValueError("table profile needs strictly increasing u column")
            if not np.all(np.isfinite(values)):
                raise ValueError("table profile has non-finite values")

    def _table_data(self) -> tuple[np.ndarray, np.ndarray]:
        if "us" in self.params:
            return (
                np.asarray(self.params["us"], dtype=float),
                np.asarray(self.params["values"], dtype=float),
            )
        path = Path(self.params["path"])
        us, values = [], []
        with path.open(newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                us.append(float(row[0]))
                values.append(float(row[1]))
        return np.asarray(us), np.asarray(values)

    def __call__(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        scalar = u.ndim == 0
        u = np.atleast_1d(u)
        lo, hi = self.support
        p = self.params
        if self.kind == "constant":
            out = np.full(u.shape, float(p["value"]))
        elif self.kind == "step":
            out = np.where(u < float(p["at"]), float(p["left"]), float(p["right"]))
        elif self.kind == "bump":
            base = float(p.get("base", 0.0))
            s = (u - float(p["center"])) / float(p["width"])
            out = base + float(p["height"]) * _mollifier(s)
        elif self.kind == "linear-ramp":
            u0, u1 = float(p["u0"]), float(p["u1"])
            v0, v1 = float(p["v0"]), float(p["v1"])
            out = v0 + (v1 - v0) * np.clip((u - u0) / (u1 - u0), 0.0, 1.0)
        else:  # table
            us, values = self._table_data()
            out = np.interp(u, us, values)
        out = np.where((u >= lo) & (u <= hi), out, 0.0)
        return float(out[0]) if scalar else out

    def validate_density(self, grid: np.ndarray | None = None) -> None:
        """Check the profile is a bounded nonnegative density on its support."""
        if grid is None:
            grid = np.linspace(*self.support, 513)
        vals = self(grid)
        if not np.all(np.isfinite(vals)):
            raise ValueError("density profile has non-finite values")
        if np.any(vals < 0):
            raise ValueError("density profile takes negative values")

    def validate_occupancy(self, grid: np.ndarray | None = None) -> None:
        """Check the profile lies in (0, 1] on its support."""
        if grid is None:
            grid = np.linspace(*self.support, 513)
        inside = (grid >= self.support[0]) & (grid <= self.support[1])
        vals = np.atleast_1d(self(grid))[inside]
        if np.any(vals <= 0) or np.any(vals > 1):
            raise ValueError("occupancy profile must lie in (0, 1] on its support")


@dataclass(frozen=True)
class TestFunction:
    """Compactly supported test function used for empirical pairings."""

    __test__ = False  # not a pytest collectable despite the name

    id: str
    kind: str
    params: dict

    def __post_init__(self) -> None:
        if self.kind not in TEST_FUNCTION_KINDS:
            raise ValueError(f"unknown test-function kind {self.kind!r}")

    @property
    def support(self) -> tuple[float, float]:
        p = self.params
        if self.kind == "smooth-bump":
            c, w = float(p["center"]), float(p["width"])
            return (c - w, c + w)
        if self.kind == "H_l-ramp":
            l = float(p["l"])
            return (0.0, l) if p.get("side", "left") == "right" else (-l, 0.0)
        return (float(p["a"]), float(p["b"]))

    def __call__(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        scalar = u.ndim == 0
        u = np.atleast_1d(u)
        p = self.params
        if self.kind == "smooth-bump":
            out = _mollifier((u - float(p["center"])) / float(p["width"]))
        elif self.kind == "H_l-ramp":
            l = float(p["l"])
            if p.get("side", "left") == "right":
                out = np.where(u >= 0, np.maximum(1.0 - u / l, 0.0), 0.0)
            else:
                out = np.where(u <= 0, np.maximum(1.0 + u / l, 0.0), 0.0)
        else:  # indicator-smoothed
            a, b, eps = float(p["a"]), float(p["b"]), float(p["edge"])
            out = _smoothstep((u - a) / eps) * _smoothstep((b - u) / eps)
        return float(out[0]) if scalar else out

    def deriv(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        scalar = u.ndim == 0
        u = np.atleast_1d(u)
        p = self.params
        if self.kind == "smooth-bump":
            w = float(p["width"])
            out = _mollifier_deriv((u - float(p["center"])) / w) / w
        elif self.kind == "H_l-ramp":
            l = float(p["l"])
            if p.get("side", "left") == "right":
                out = np.where((u > 0) & (u < l), -1.0 / l, 0.0)
            else:
                out = np.where((u > -l) & (u < 0), 1.0 / l, 0.0)
        else:
            a, b, eps = float(p["a"]), float(p["b"]), float(p["edge"])
            ta = np.clip((u - a) / eps, 0.0, 1.0)
            tb = np.clip((b - u) / eps, 0.0, 1.0)
            da = 6.0 * ta * (1.0 - ta) / eps
            db = -6.0 * tb * (1.0 - tb) / eps
            out = da * _smoothstep((b - u) / eps) + _smoothstep((u - a) / eps) * db
        return float(out[0]) if scalar else out


@dataclass
class EmpiricalRecord:
    """Pairings of the empirical measure against a test-function dictionary."""

    n_scale: int
    pairings: dict[str, float]
    block_centers: np.ndarray = field(default_factory=lambda: np.zeros(0))
    block_values: np.ndarray = field(default_factory=lambda: np.zeros(0))


# ---------------------------------------------------------------------------
# marginals and samplers
# ---------------------------------------------------------------------------


def nu_tilde_pmf(alpha: float, k) -> np.ndarray | float:
    """Geometric marginal with mean ``alpha``: (1/(1+a)) (a/(1+a))^k."""
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    k_arr = np.asarray(k)
    if np.any(k_arr < 0):
        raise ValueError("k must be nonnegative")
    if alpha == 0.0:
        out = np.where(k_arr == 0, 1.0, 0.0)
    else:
        q = alpha / (1.0 + alpha)
        out = (1.0 - q) * q**k_arr
    return float(out) if np.isscalar(k) else out


def sample_zr_initial(
    rho0: Callable[[np.ndarray], np.ndarray],
    N: int,
    window: tuple[int, int],
    rng: np.random.Generator,
) -> IncrementConfig:
    """Independent geometric counts with site means ``rho0(x/N)``."""
    lo, hi = window
    if hi < lo:
        raise ValueError("empty lattice window")
    sites = np.arange(lo, hi + 1)
    alpha = np.asarray(rho0(sites / N), dtype=float)
    if not np.all(np.isfinite(alpha)) or np.any(alpha < 0):
        raise ValueError("rho0 must be bounded and nonnegative on the window")
    # numpy's geometric counts trials >= 1; subtract one for the ZR marginal
    counts = rng.geometric(1.0 / (1.0 + alpha)) - 1
    return IncrementConfig(lo, counts.astype(np.int64))


def sample_exclusion_initial(
    zeta0: Callable[[np.ndarray], np.ndarray],
    N: int,
    window: tuple[int, int],
    rng: np.random.Generator,
) -> ExclusionConfig:
    """Independent Bernoulli occupancies with site means ``zeta0(x/N)``."""
    lo, hi = window
    if lo != 1:
        raise ValueError("exclusion windows start at site 1")
    sites = np.arange(lo, hi + 1)
    z = np.asarray(zeta0(sites / N), dtype=float)
    if np.any(z <= 0) or np.any(z > 1):
        raise ValueError("zeta0 must lie in (0, 1] on the window")
    occ = (rng.random(sites.size) < z).astype(np.int64)
    return ExclusionConfig(occ)


# ---------------------------------------------------------------------------
# empirical functionals
# ---------------------------------------------------------------------------


def _config_sites_values(config) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(config, IncrementConfig):
        return np.arange(config.lo, config.hi + 1), config.counts
    if isinstance(config, ExclusionConfig):
        return np.arange(1, config.box + 1), config.occupancy
    raise TypeError(f"unsupported configuration type {type(config)!r}")


def empirical_pairing(config, G: Callable, N: int) -> float:
    """Pair the empirical measure with G: (1/N) sum G(x/N) value(x)."""
    sites, values = _config_sites_values(config)
    if sites.size == 0:
        return 0.0
    return float(np.dot(np.asarray(G(sites / N), dtype=float), values) / N)


def block_density(config, N: int, eps: float) -> tuple[np.ndarray, np.ndarray]:
    """Sliding averages over blocks of ``floor(eps*N)`` sites.

    Returns block centers (macroscopic units) and block means.
    """
    b = int(np.floor(eps * N))
    if b < 1:
        raise ValueError("eps * N must be at least 1")
    sites, values = _config_sites_values(config)
    if values.size < b:
        return np.zeros(0), np.zeros(0)
    means = np.convolve(values, np.full(b, 1.0 / b), mode="valid")
    centers = (sites[: means.size] + (b - 1) / 2.0) / N
    return centers, means


def empirical_record(
    config,
    dictionary: Sequence[TestFunction],
    N: int,
    eps: float | None = 0.05,
) -> EmpiricalRecord:
    """Evaluate all dictionary pairings (and block densities) for one config."""
    pairings = {g.id: empirical_pairing(config, g, N) for g in dictionary}
    if eps is not None and int(np.floor(eps * N)) >= 1:
        centers, means = block_density(config, N, eps)
    else:
        centers, means = np.zeros(0), np.zeros(0)
    return EmpiricalRecord(N, pairings, centers, means)


def default_dictionary(side: str) -> list[TestFunction]:
    """Eight smooth bumps of varying center/width plus two ramps.

    ``side`` is 'left' (nonpositive axis), 'right' (nonnegative) or 'full'.
    """
    if side == "full":
        left = default_dictionary("left")
        right = default_dictionary("right")
        return left + [g for g in right if not g.id.startswith("ramp")]
    sign = -1.0 if side == "left" else 1.0
    fns: list[TestFunction] = []
    for i, c in enumerate((0.25, 0.75, 1.25, 1.75)):
        for w in (0.25, 0.5):
            fns.append(
                TestFunction(
                    f"bump{'L' if side == 'left' else 'R'}{i}w{int(w * 100)}",
                    "smooth-bump",
                    {"center": sign * c, "width": w},
                )
            )
    for l in (1, 2):
        fns.append(
            TestFunction(
                f"ramp{'L' if side == 'left' else 'R'}{l}",
                "H_l-ramp",
                {"l": float(l), "side": side},
            )
        )
    return fns
