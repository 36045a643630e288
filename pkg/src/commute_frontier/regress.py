"""Polynomial least squares (degree 1 to 3) with the usual OLS inference.

The design matrix is built on ``u = x / max|x|`` so the cubic normal
equations stay well conditioned for distances up to a few hundred km;
coefficients and standard errors are mapped back to the original ``x`` scale
before they are returned.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import DomainError, SingularFitError
from .special import f_tail_p, regularized_incomplete_beta, t_tail_p

DEGREE_NAMES = {1: "Linear", 2: "Quadratic", 3: "Cubic"}


class FitPoint(NamedTuple):
    x: float
    y: float


class Prediction(NamedTuple):
    value: float
    extrapolated: bool


@dataclass(frozen=True)
class PolynomialModel:
    """Fitted (or hand-specified) polynomial in distance, constant term first.

    Inference fields are ``None`` for models built with
    :meth:`from_coefficients`.
    """

    degree: int
    coefficients: tuple[float, ...]
    x_domain: tuple[float, float]
    n: int | None = None
    r2: float | None = None
    s: float | None = None
    coef_se: tuple[float, ...] | None = None
    coef_p: tuple[float, ...] | None = None
    f_stat: float | None = None
    overall_p: float | None = None
    label: str = ""

    @classmethod
    def from_coefficients(cls, coefficients: Sequence[float], x_domain=(0.0, math.inf),
                          label: str = "") -> "PolynomialModel":
        coefs = tuple(float(c) for c in coefficients)
        if not coefs or not all(math.isfinite(c) for c in coefs):
            raise DomainError("coefficients must be a non-empty sequence of finite numbers")
        return cls(degree=len(coefs) - 1, coefficients=coefs,
                   x_domain=(float(x_domain[0]), float(x_domain[1])), label=label)

    def __call__(self, x):
        """Horner evaluation; accepts scalars or arrays, no extrapolation flag."""
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for c in reversed(self.coefficients):
            out = out * x + c
        return out if out.ndim else float(out)

    @property
    def df_resid(self) -> int | None:
        return None if self.n is None else self.n - self.degree - 1

    def to_dict(self) -> dict:
        out = asdict(self)
        out["x_domain"] = list(self.x_domain)
        for key in ("coefficients", "coef_se", "coef_p"):
            if out[key] is not None:
                out[key] = list(out[key])
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "PolynomialModel":
        data = dict(data)
        for key in ("coefficients", "coef_se", "coef_p", "x_domain"):
            if data.get(key) is not None:
                data[key] = tuple(data[key])
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def predict(model: PolynomialModel, x: float) -> Prediction:
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x}")
    lo, hi = model.x_domain
    return Prediction(model(x), not (lo <= x <= hi))


def _as_arrays(points) -> tuple[np.ndarray, np.ndarray]:
    pts = list(points)
    x = np.array([float(p[0]) for p in pts])
    y = np.array([float(p[1]) for p in pts])
    return x, y


def fit_polynomial(points: Iterable[FitPoint], degree: int, label: str = "") -> PolynomialModel:
    """Ordinary least squares fit of ``y`` on ``x, x**2, ..., x**degree``.

    Parameters
    ----------
    points : iterable of FitPoint or (x, y) pairs
    degree : {1, 2, 3}

    Returns
    -------
    PolynomialModel
        Coefficients (constant first), r2 = 1 - SSE/SST,
        s = sqrt(SSE / (n - degree - 1)), two-sided t p-values per
        coefficient and the regression F-test p-value.
    """
    x, y = _as_arrays(points)
    return fit_xy(x, y, degree, label=label)


def fit_xy(x, y, degree: int, label: str = "") -> PolynomialModel:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if degree not in (1, 2, 3):
        raise DomainError(f"degree must be 1, 2 or 3, got {degree}")
    if x.shape != y.shape or x.ndim != 1:
        raise DomainError("x and y must be 1-d sequences of equal length")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise DomainError("non-finite value in fit input")
    n = x.size
    p = degree + 1
    if n < p + 1:
        raise SingularFitError(f"degree {degree} needs at least {p + 1} points, got {n}")

    scale = float(np.max(np.abs(x)))
    if scale == 0.0:
        raise SingularFitError("all x values are zero")
    u = x / scale
    X = np.vander(u, p, increasing=True)
    if np.linalg.matrix_rank(X) < p:
        raise SingularFitError(f"design matrix is rank deficient for degree {degree}")

    A = X.T @ X
    rhs = X.T @ y
    beta_u = np.linalg.solve(A, rhs)
    # one step of iterative refinement
    beta_u = beta_u + np.linalg.solve(A, rhs - A @ beta_u)

    resid = y - X @ beta_u
    sse = float(resid @ resid)
    sst = float(((y - y.mean()) ** 2).sum())
    df = n - p
    s2 = sse / df
    ssr = max(sst - sse, 0.0)

    unscale = scale ** -np.arange(p)
    coefs = beta_u * unscale
    se = np.sqrt(np.clip(np.diag(np.linalg.inv(A)), 0.0, None) * s2) * unscale

    coef_p = []
    for b, e in zip(coefs, se):
        if e > 0:
            coef_p.append(t_tail_p(b / e, df))
        else:
            coef_p.append(1.0 if b == 0 else 0.0)

    if sst == 0.0:
        r2, f_stat, overall_p = 0.0, 0.0, 1.0
    else:
        r2 = min(max(1.0 - sse / sst, 0.0), 1.0)
        if sse == 0.0:
            f_stat, overall_p = math.inf, 0.0
        else:
            f_stat = (ssr / degree) / s2
            overall_p = f_tail_p(f_stat, degree, df)

    return PolynomialModel(
        degree=degree,
        coefficients=tuple(float(c) for c in coefs),
        x_domain=(float(x.min()), float(x.max())),
        n=int(n),
        r2=float(r2),
        s=math.sqrt(s2),
        coef_se=tuple(float(e) for e in se),
        coef_p=tuple(float(q) for q in coef_p),
        f_stat=float(f_stat),
        overall_p=float(overall_p),
        label=label,
    )


def residuals(model: PolynomialModel, x, y) -> np.ndarray:
    return np.asarray(y, dtype=float) - model(np.asarray(x, dtype=float))


__all__ = [
    "DEGREE_NAMES",
    "FitPoint",
    "PolynomialModel",
    "Prediction",
    "f_tail_p",
    "fit_polynomial",
    "fit_xy",
    "predict",
    "regularized_incomplete_beta",
    "residuals",
    "t_tail_p",
]
