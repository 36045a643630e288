"""Normality and spatial-autocorrelation diagnostics.

``ryan_joiner`` correlates the ordered sample with Blom normal scores and
bands its p-value using the Ryan-Joiner critical-value approximations at
alpha = 0.10, 0.05 and 0.01 (linear interpolation between them, reported as
"<0.010" or ">0.100" outside).

``morans_i`` works on an explicit weights matrix. Nothing is assumed about
which neighbours a community has; callers pick the specification.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass, field
from statistics import NormalDist

import numpy as np

from .errors import ConfigError, DegenerateError, DomainError, InsufficientDataError, SchemaError


@dataclass(frozen=True)
class DiagnosticResult:
    statistic: float
    p_value: float
    method: str
    detail: str = ""
    p_label: str = ""


def normal_scores(n: int) -> np.ndarray:
    """Blom scores ``Phi^-1((i - 3/8) / (n + 1/4))`` for i = 1..n."""
    nd = NormalDist()
    return np.array([nd.inv_cdf((i - 0.375) / (n + 0.25)) for i in range(1, n + 1)])


def ryan_joiner_critical(n: int) -> dict[float, float]:
    """Critical correlation below which normality is rejected at each alpha."""
    r = math.sqrt(n)
    return {
        0.10: 1.0071 - 0.1371 / r - 0.3682 / n + 0.7780 / n**2,
        0.05: 1.0063 - 0.1288 / r - 0.6118 / n + 1.3505 / n**2,
        0.01: 0.9963 - 0.0211 / r - 1.4106 / n + 3.1791 / n**2,
    }


def ryan_joiner(values) -> DiagnosticResult:
    x = np.asarray(values, dtype=float)
    if x.ndim != 1 or not np.all(np.isfinite(x)):
        raise DomainError("values must be a 1-d sequence of finite numbers")
    n = x.size
    if n < 4:
        raise InsufficientDataError(f"Ryan-Joiner needs n >= 4, got {n}")
    if np.ptp(x) == 0:
        raise DegenerateError("all values are equal")

    xs = np.sort(x)
    b = normal_scores(n)
    xc = xs - xs.mean()
    stat = float((xc @ b) / math.sqrt((xc @ xc) * (b @ b)))
    stat = min(stat, 1.0)

    crit = ryan_joiner_critical(n)
    c01, c05, c10 = crit[0.01], crit[0.05], crit[0.10]
    if stat < c01:
        p, label = 0.01, "<0.010"
    elif stat > c10:
        p, label = 0.10, ">0.100"
    else:
        p = float(np.interp(stat, [c01, c05, c10], [0.01, 0.05, 0.10]))
        label = f"{p:.3f}"
    return DiagnosticResult(
        statistic=stat,
        p_value=p,
        method="ryan-joiner",
        detail=f"n={n}; critical values r(0.10)={c10:.4f} r(0.05)={c05:.4f} r(0.01)={c01:.4f}",
        p_label=label,
    )


@dataclass(frozen=True)
class WeightsMatrix:
    weights: np.ndarray = field(repr=False)
    spec_label: str
    isolated: tuple[int, ...] = ()
    coincident: tuple[tuple[int, int], ...] = ()

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def s0(self) -> float:
        return float(self.weights.sum())


_SPEC = re.compile(r"^(?P<kind>knn|inverse-distance):(?P<args>[^\s]+)$")


def _parse_spec(spec: str):
    m = _SPEC.match(spec.strip())
    if not m:
        raise ConfigError(f"unknown weights spec {spec!r}; expected 'knn:K' or 'inverse-distance:band=B'")
    kind = m["kind"]
    parts = m["args"].split(",")
    row = False
    opts = {}
    for part in parts:
        if part == "row":
            row = True
        elif "=" in part:
            k, v = part.split("=", 1)
            opts[k] = v
        else:
            opts.setdefault("_pos", part)
    try:
        if kind == "knn":
            k = int(opts.pop("_pos", opts.pop("k", "")))
            if k < 1:
                raise ValueError
            params = {"k": k}
        else:
            band = float(opts.pop("band"))
            if not band > 0:
                raise ValueError
            params = {"band": band, "min_distance": float(opts.pop("min_distance", 1e-3))}
    except (KeyError, ValueError):
        raise ConfigError(f"bad parameters in weights spec {spec!r}") from None
    opts.pop("_pos", None)
    if opts:
        raise ConfigError(f"unknown option(s) {sorted(opts)} in weights spec {spec!r}")
    return kind, params, row


def build_weights(coords, spec: str) -> WeightsMatrix:
    """Spatial weights from planar coordinates (km).

    Supported specs:

    * ``knn:K`` - each point gets weight 1 to its K nearest neighbours
      (ties broken by input order); not symmetric in general.
    * ``inverse-distance:band=B`` - ``1/d_ij`` for ``0 < d_ij <= B``.
      Coincident points are flagged and their distance floored at
      ``min_distance`` (default 0.001 km), which caps the weight.

    Append ``,row`` to row-standardize.
    """
    xy = np.asarray(coords, dtype=float)
    if xy.ndim != 2 or xy.shape[1] != 2:
        raise DomainError("coords must be a sequence of (x, y) pairs")
    if not np.all(np.isfinite(xy)):
        raise DomainError("coords must be finite")
    n = xy.shape[0]
    if n < 2:
        raise InsufficientDataError("need at least 2 points")
    kind, params, row = _parse_spec(spec)

    diff = xy[:, None, :] - xy[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=-1))
    w = np.zeros((n, n))
    coincident = []

    if kind == "knn":
        k = params["k"]
        if k > n - 1:
            raise ConfigError(f"knn:{k} needs at least {k + 1} points, got {n}")
        for i in range(n):
            order = [j for j in np.argsort(dist[i], kind="stable") if j != i]
            w[i, order[:k]] = 1.0
    else:
        band, floor = params["band"], params["min_distance"]
        for i in range(n):
            for j in range(i + 1, n):
                d = dist[i, j]
                if d <= band:
                    if d < floor:
                        coincident.append((i, j))
                        d = floor
                    w[i, j] = w[j, i] = 1.0 / d

    isolated = tuple(int(i) for i in np.flatnonzero(w.sum(axis=1) == 0))
    if row:
        sums = w.sum(axis=1, keepdims=True)
        w = np.divide(w, sums, out=np.zeros_like(w), where=sums > 0)
    return WeightsMatrix(w, spec.strip(), isolated, tuple(coincident))


def weights_from_matrix(matrix, spec_label: str = "custom") -> WeightsMatrix:
    w = np.array(matrix, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise DomainError("weights must be a square matrix")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise DomainError("weights must be finite and nonnegative")
    if np.any(np.diag(w) != 0):
        raise DomainError("weights must have a zero diagonal")
    isolated = tuple(int(i) for i in np.flatnonzero(w.sum(axis=1) == 0))
    return WeightsMatrix(w, spec_label, isolated)


def _moran(z: np.ndarray, w: np.ndarray, s0: float) -> np.ndarray:
    # z: (..., n) centred values
    num = np.einsum("...i,ij,...j->...", z, w, z)
    den = np.einsum("...i,...i->...", z, z)
    return (z.shape[-1] / s0) * num / den


def morans_i(values, w: WeightsMatrix, permutations: int = 999, seed: int = 0) -> DiagnosticResult:
    """Global Moran's I with a seeded two-sided permutation test.

    p = min(1, 2 * (min(#{I_perm >= I}, #{I_perm <= I}) + 1) / (permutations + 1)).
    """
    x = np.asarray(values, dtype=float)
    n = x.size
    if n != w.n:
        raise DomainError(f"{n} values for a {w.n}x{w.n} weights matrix")
    if n < 4:
        raise InsufficientDataError(f"Moran's I needs n >= 4, got {n}")
    if not np.all(np.isfinite(x)):
        raise DomainError("values must be finite")
    if len(w.isolated) == n or w.s0 == 0:
        raise DegenerateError("every observation is isolated")
    z = x - x.mean()
    if not np.any(z):
        raise DegenerateError("values have zero variance")
    if permutations < 0:
        raise DomainError("permutations must be >= 0")

    stat = float(_moran(z, w.weights, w.s0))
    expected = -1.0 / (n - 1)
    if permutations == 0:
        p = 1.0
    else:
        rng = np.random.default_rng(seed)
        perms = np.stack([rng.permutation(z) for _ in range(permutations)])
        sims = _moran(perms, w.weights, w.s0)
        upper = int(np.sum(sims >= stat))
        lower = int(np.sum(sims <= stat))
        p = min(1.0, 2.0 * (min(upper, lower) + 1) / (permutations + 1))
    return DiagnosticResult(
        statistic=stat,
        p_value=p,
        method="morans-i",
        detail=f"weights={w.spec_label}; E[I]={expected:.4f}; permutations={permutations}; seed={seed}",
        p_label=f"{p:.3f}",
    )


def load_coords(path) -> dict[str, tuple[float, float]]:
    """Read a ``name,x_km,y_km`` coordinates file."""
    out = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"name", "x_km", "y_km"} <= set(reader.fieldnames):
            raise SchemaError("coordinates file needs columns name,x_km,y_km")
        for row in reader:
            out[row["name"].strip()] = (float(row["x_km"]), float(row["y_km"]))
    return out


__all__ = [
    "DiagnosticResult",
    "WeightsMatrix",
    "build_weights",
    "load_coords",
    "morans_i",
    "normal_scores",
    "ryan_joiner",
    "ryan_joiner_critical",
    "weights_from_matrix",
]
