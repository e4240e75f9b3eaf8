"""Multiplier families h and the shape quantities the sharp theorems test.

A *family* is a small immutable value describing the coefficient multiplier
h: exponential decay, inverse power, power cutoff, polynomial-of-cutoff,
arithmetic-mean ratios (a sequence-only family), or user samples.  On top of
these the module computes:

* ``eval_h``                 -- pointwise h(x), vectorized
* ``lambda_rho_gamma``       -- (1 - (1 + gamma x) h(x)) / x^rho, evaluated
                                cancellation-free
* ``m_of_h``                 -- the decay index sup h'(x) x / (h(x) - 1)
* ``gamma_m``                -- largest admissible linear-perturbation slope
* ``check_Mm_membership``    -- nonnegative/decreasing/convex scan of the
                                (m-1)-th derivative a la the M_m classes
* ``check_lambda_conditions``-- convexity certificates for lambda = (1-h)/x

Shape checks run on divided differences over a log-uniform grid, with a
rigorous round-off floor subtracted so that boundary cases do not flag
spurious violations (see the report docstrings).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .special_functions import cesaro_number

__all__ = [
    "Exp",
    "InversePower",
    "RieszCutoff",
    "QPolynomial",
    "CesaroRatio",
    "Sampled",
    "MultiplierFamily",
    "LambdaParams",
    "ShapeReport",
    "LambdaConditionsReport",
    "eval_h",
    "one_minus_weighted_h",
    "lambda_rho_gamma",
    "m_of_h",
    "gamma_m",
    "check_Mm_membership",
    "check_lambda_conditions",
]


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Exp:
    """h(x) = exp(-x)."""


@dataclass(frozen=True)
class InversePower:
    """h(x) = (1 + x)^(-mu), mu > 0."""

    mu: float

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError("InversePower requires mu > 0")


@dataclass(frozen=True)
class RieszCutoff:
    """h(x) = (1 - x)_+^mu, mu > 0; identically zero for x >= 1."""

    mu: float

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError("RieszCutoff requires mu > 0")


@dataclass(frozen=True)
class QPolynomial:
    """h(x) = Q((u - x)_+) / Q(u) with Q(y) = sum a_k y^(mu_k).

    ``terms`` is a sequence of (a_k, mu_k) with a_k > 0 and mu_k >= 1; the
    unit form is u = 1 (the default).
    """

    terms: Tuple[Tuple[float, float], ...]
    u: float = 1.0

    def __post_init__(self):
        terms = tuple((float(a), float(mu)) for a, mu in self.terms)
        if not terms:
            raise ValueError("QPolynomial requires at least one term")
        for a, mu in terms:
            if not a > 0:
                raise ValueError("QPolynomial coefficients must be positive")
            if not mu >= 1:
                raise ValueError("QPolynomial exponents must be >= 1")
        if not self.u > 0:
            raise ValueError("QPolynomial requires u > 0")
        object.__setattr__(self, "terms", terms)

    def q_at_u(self) -> float:
        return sum(a * self.u**mu for a, mu in self.terms)


@dataclass(frozen=True)
class CesaroRatio:
    """Arithmetic-mean multiplier ratios nu_j = A_{m-j}^alpha / A_m^alpha.

    Sequence-only: there is no pointwise h, so ``eval_h`` refuses it.
    """

    m: int
    alpha: float

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("CesaroRatio requires m >= 0")
        if not self.alpha >= 1.0:
            raise ValueError("CesaroRatio requires alpha >= 1")

    def nu(self, j: int) -> float:
        """A_{m-j}^alpha / A_m^alpha, computed as a short stable product."""
        if j < 0:
            raise ValueError("index must be nonnegative")
        if j > self.m:
            return 0.0
        ratio = 1.0
        for k in range(self.m - j + 1, self.m + 1):
            ratio *= k / (self.alpha + k)
        return ratio


@dataclass(frozen=True)
class Sampled:
    """User-supplied h by linear interpolation on a strictly increasing grid."""

    grid: Tuple[float, ...]
    values: Tuple[float, ...]

    def __post_init__(self):
        grid = tuple(float(x) for x in self.grid)
        values = tuple(float(v) for v in self.values)
        if len(grid) != len(values) or len(grid) < 2:
            raise ValueError("Sampled requires matching grid/values, >= 2 points")
        if grid[0] <= 0.0 or any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("Sampled grid must be strictly increasing and > 0")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)


MultiplierFamily = Union[Exp, InversePower, RieszCutoff, QPolynomial, CesaroRatio, Sampled]


@dataclass(frozen=True)
class LambdaParams:
    """Perturbation parameters: decay order rho >= 1 and linear slope gamma."""

    rho: float
    gamma: float = 0.0

    def __post_init__(self):
        if not self.rho >= 1.0:
            raise ValueError("rho must be >= 1")


# ---------------------------------------------------------------------------
# Pointwise evaluation
# ---------------------------------------------------------------------------

def eval_h(family: MultiplierFamily, x):
    """h(x) for x >= 0 (scalar or numpy array).

    Exact closed forms for the analytic families; linear interpolation for
    Sampled (points outside the sample hull raise).  CesaroRatio has no
    pointwise h and refuses evaluation.
    """
    scalar = np.ndim(x) == 0
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xv < 0.0):
        raise ValueError("eval_h requires x >= 0")
    if isinstance(family, Exp):
        out = np.exp(-xv)
    elif isinstance(family, InversePower):
        out = (1.0 + xv) ** (-family.mu)
    elif isinstance(family, RieszCutoff):
        out = np.where(xv < 1.0, (1.0 - np.minimum(xv, 1.0)) ** family.mu, 0.0)
    elif isinstance(family, QPolynomial):
        y = np.maximum(family.u - xv, 0.0)
        q = np.zeros_like(y)
        for a, mu in family.terms:
            q += a * y**mu
        out = q / family.q_at_u()
    elif isinstance(family, Sampled):
        lo, hi = family.grid[0], family.grid[-1]
        if np.any(xv < lo) or np.any(xv > hi):
            raise ValueError(
                f"Sampled h evaluated outside its hull [{lo}, {hi}]"
            )
        out = np.interp(xv, family.grid, family.values)
    elif isinstance(family, CesaroRatio):
        raise ValueError("CesaroRatio is a sequence-only family; it has no pointwise h")
    else:
        raise TypeError(f"unknown family {family!r}")
    return float(out[0]) if scalar else out


def _expm1_minus_x(xv: np.ndarray) -> np.ndarray:
    """exp(x) - 1 - x, accurate near 0 (series below |x| = 0.5)."""
    out = np.expm1(xv) - xv
    small = np.abs(xv) < 0.5
    if np.any(small):
        z = xv[small]
        term = z * z / 2.0
        acc = term.copy()
        for k in range(3, 40):
            term = term * z / k
            acc += term
            if np.max(np.abs(term)) <= 1e-18 * np.max(np.abs(acc)):
                break
        out[small] = acc
    return out


def _binom_minus_linear(zv: np.ndarray, mu: float) -> np.ndarray:
    """(1 + z)^mu - 1 - mu z, accurate near 0 (binomial series below |z| = 0.5)."""
    out = np.expm1(mu * np.log1p(zv)) - mu * zv
    small = np.abs(zv) < 0.5
    if np.any(small):
        z = zv[small]
        term = 0.5 * mu * (mu - 1.0) * z * z
        acc = term.copy()
        for k in range(2, 80):
            term = term * (mu - k) * z / (k + 1.0)
            acc += term
            if np.max(np.abs(term)) <= 1e-18 * max(np.max(np.abs(acc)), 1e-300):
                break
        out[small] = acc
    return out


def _one_minus_h(family: MultiplierFamily, xv: np.ndarray) -> np.ndarray:
    """1 - h(x) computed without cancellation for small x."""
    if isinstance(family, Exp):
        return -np.expm1(-xv)
    if isinstance(family, InversePower):
        # 1 - (1+x)^-mu = -expm1(-mu log1p(x))
        return -np.expm1(-family.mu * np.log1p(xv))
    if isinstance(family, RieszCutoff):
        out = np.ones_like(xv)
        mask = xv < 1.0
        if np.any(mask):
            out[mask] = -np.expm1(family.mu * np.log1p(-xv[mask]))
        return out
    if isinstance(family, QPolynomial):
        qu = family.q_at_u()
        out = np.ones_like(xv)
        mask = xv < family.u
        if np.any(mask):
            xm = xv[mask]
            acc = np.zeros_like(xm)
            for a, mu in family.terms:
                # u^mu - (u-x)^mu, stable for x << u
                acc += -a * family.u**mu * np.expm1(mu * np.log1p(-xm / family.u))
            out[mask] = acc / qu
        return out
    return 1.0 - eval_h(family, xv)


def one_minus_weighted_h(family: MultiplierFamily, gamma: float, x):
    """1 - (1 + gamma x) h(x) for x >= 0, cancellation-free.

    The numerator's linear part is split off analytically, e.g. for the
    exponential family 1 - (1+gamma x)e^-x = e^-x [(e^x - 1 - x) + (1-gamma)x],
    so the result stays accurate even where the naive form cancels to
    O(x^2) -- exactly the regime probed at the critical slope with rho = 2.
    This is the coefficient bracket of the approximation-value series; it is
    evaluated identically for gamma = 0 and gamma != 0 (no separate branch).
    """
    scalar = np.ndim(x) == 0
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xv < 0.0):
        raise ValueError("one_minus_weighted_h requires x >= 0")
    g = gamma
    if isinstance(family, Exp):
        numer = -np.expm1(-xv) - g * xv * np.exp(-xv)
        small = xv < 0.5
        if np.any(small):
            xs = xv[small]
            numer[small] = np.exp(-xs) * (_expm1_minus_x(xs) + (1.0 - g) * xs)
    elif isinstance(family, InversePower):
        mu = family.mu
        loghv = -mu * np.log1p(xv)
        numer = -np.expm1(loghv) - g * xv * np.exp(loghv)
        small = xv < 0.5
        if np.any(small):
            xs = xv[small]
            numer[small] = np.exp(loghv[small]) * (
                _binom_minus_linear(xs, mu) + (mu - g) * xs
            )
    elif isinstance(family, RieszCutoff):
        mu = family.mu
        numer = np.ones_like(xv)
        mask = xv < 1.0
        if np.any(mask):
            xm = xv[mask]
            omh = -np.expm1(mu * np.log1p(-xm))  # 1 - (1-x)^mu
            numer[mask] = -_binom_minus_linear(-xm, mu) + (mu - g) * xm + g * xm * omh
    else:
        hv = np.atleast_1d(np.asarray(eval_h(family, xv), dtype=float))
        numer = _one_minus_h(family, xv) - g * xv * hv
    return float(numer[0]) if scalar else numer


def lambda_rho_gamma(family: MultiplierFamily, params: LambdaParams, x):
    """(1 - (1 + gamma x) h(x)) / x^rho for x > 0 (see one_minus_weighted_h)."""
    scalar = np.ndim(x) == 0
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xv <= 0.0):
        raise ValueError("lambda_rho_gamma requires x > 0")
    numer = np.atleast_1d(
        np.asarray(one_minus_weighted_h(family, params.gamma, xv), dtype=float)
    )
    out = numer / xv**params.rho
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# Decay index m(h)
# ---------------------------------------------------------------------------

_MINUS_INF = float("-inf")
_PLUS_INF = float("inf")


def m_of_h(family: MultiplierFamily, grid_spec: Optional[Tuple[float, float, int]] = None) -> float:
    """Decay index: the supremum of h'(x) x / (h(x) - 1).

    Closed form 1 for Exp, InversePower (any mu) and RieszCutoff with
    mu >= 1; +inf for RieszCutoff with mu < 1 (the quotient blows up at the
    cutoff); -inf sentinel iff h is identically 1.  Other families are
    scanned with difference quotients over a geometric grid (2048 probes on
    [1e-4, 1e4] unless ``grid_spec = (lo, hi, count)`` overrides); for
    Sampled input the result is a documented lower bound of the supremum.

    Raises if any probe finds h(x) > 1 + 1e-12 (the index presumes h <= 1).
    """
    if isinstance(family, Exp):
        return 1.0
    if isinstance(family, InversePower):
        return 1.0
    if isinstance(family, RieszCutoff):
        return 1.0 if family.mu >= 1.0 else _PLUS_INF
    if isinstance(family, CesaroRatio):
        raise ValueError("CesaroRatio is a sequence-only family; m(h) is undefined")

    if isinstance(family, Sampled):
        xs = np.asarray(family.grid, dtype=float)
    else:
        lo, hi, count = grid_spec if grid_spec is not None else (1e-4, 1e4, 2048)
        xs = np.geomspace(lo, hi, count)
    hv = np.atleast_1d(np.asarray(eval_h(family, xs), dtype=float))
    if np.any(hv > 1.0 + 1e-12):
        raise ValueError("m(h) requires h(x) <= 1; a probe exceeded 1")
    if np.max(np.abs(hv - 1.0)) <= 1e-14:
        return _MINUS_INF

    # difference quotient at geometric midpoints
    dh = np.diff(hv) / np.diff(xs)
    xm = np.sqrt(xs[:-1] * xs[1:])
    hm = np.atleast_1d(np.asarray(eval_h(family, xm), dtype=float))
    denom = hm - 1.0
    ok = np.abs(denom) > 1e-13
    if not np.any(ok):
        return _MINUS_INF
    quotients = dh[ok] * xm[ok] / denom[ok]
    return float(np.max(quotients))


# ---------------------------------------------------------------------------
# Admissible perturbation slope gamma_m(rho, h)
# ---------------------------------------------------------------------------

def gamma_m(family: MultiplierFamily, m: int, rho: float) -> float:
    """Largest gamma keeping lambda_{rho,gamma} inside the shape class M_m.

    Closed forms only (no numeric boundary search exists short of a full
    feasibility sweep):

    * Exp:                 1/(m+2) at rho=1;  1 at rho>=2
    * InversePower(mu>=1): (mu+m+1)/(m+2) at rho=1;  mu at rho>=2;
                           and exactly 1 for mu=1 at every rho>=1
    * RieszCutoff(mu>=m+1): (mu-m-1)/(m+2) at rho=1;  mu at rho>=2

    Anything else (including rho strictly between 1 and 2 for the
    non-degenerate rows) raises an unsupported-family error.
    """
    if not (isinstance(m, int) and m >= 1):
        raise ValueError("m must be a positive integer")
    rho = float(rho)
    if not rho >= 1.0:
        raise ValueError("rho must be >= 1")

    if isinstance(family, Exp):
        if rho == 1.0:
            return 1.0 / (m + 2.0)
        if rho >= 2.0:
            return 1.0
        raise ValueError("gamma_m supported only at rho = 1 or rho >= 2")
    if isinstance(family, InversePower):
        if family.mu == 1.0:
            return 1.0
        if family.mu >= 1.0:
            if rho == 1.0:
                return (family.mu + m + 1.0) / (m + 2.0)
            if rho >= 2.0:
                return family.mu
            raise ValueError("gamma_m supported only at rho = 1 or rho >= 2")
        raise ValueError("gamma_m for InversePower requires mu >= 1")
    if isinstance(family, RieszCutoff):
        if family.mu >= m + 1.0:
            if rho == 1.0:
                return (family.mu - m - 1.0) / (m + 2.0)
            if rho >= 2.0:
                return family.mu
            raise ValueError("gamma_m supported only at rho = 1 or rho >= 2")
        raise ValueError("gamma_m for RieszCutoff requires mu >= m + 1")
    raise ValueError(f"gamma_m has no closed form for {type(family).__name__}")


# ---------------------------------------------------------------------------
# Shape scans (divided differences with a round-off floor)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShapeReport:
    """Outcome of an M_m-style scan.

    ``worst_violation`` is the largest normalized defect across the three
    sign conditions after subtracting a rigorous round-off floor
    (eps * max|f| * sum_j 1/prod|x_j - x_l| per stencil); an exactly-member
    function therefore reports ~0 rather than amplifier noise.
    """

    order: int
    nonnegative: bool
    decreasing: bool
    convex: bool
    worst_violation: float
    source: str

    @property
    def passed(self) -> bool:
        return self.nonnegative and self.decreasing and self.convex


@dataclass(frozen=True)
class LambdaConditionsReport:
    """Certificates for lambda = (1 - h)/x: convexity, and convexity of
    -lambda' (the strengthened even-order route)."""

    convex: bool
    neg_derivative_convex: bool
    worst_violation: float
    source: str


def _divided_differences(xs: np.ndarray, fs: np.ndarray, order: int) -> np.ndarray:
    dd = fs.astype(float).copy()
    for j in range(1, order + 1):
        dd = (dd[1:] - dd[:-1]) / (xs[j:] - xs[:-j])
    return dd


def _stencil_floors(xs: np.ndarray, fs: np.ndarray, order: int) -> np.ndarray:
    """Round-off bound for each order-``order`` divided difference window."""
    n_win = len(xs) - order
    floors = np.empty(n_win)
    eps = np.finfo(float).eps
    for w in range(n_win):
        pts = xs[w : w + order + 1]
        amp = 0.0
        for j in range(order + 1):
            prod = 1.0
            for l in range(order + 1):
                if l != j:
                    prod *= abs(pts[j] - pts[l])
            amp += 1.0 / prod
        fmax = float(np.max(np.abs(fs[w : w + order + 1])))
        floors[w] = 4.0 * eps * fmax * amp
    return floors


def _sign_violation(xs: np.ndarray, fs: np.ndarray, order: int, sign: float) -> float:
    """Worst normalized violation of sign * dd_order >= 0 over the grid."""
    if order == 0:
        dd = fs.astype(float)
        floors = 4.0 * np.finfo(float).eps * np.abs(dd)
    else:
        dd = _divided_differences(xs, fs, order)
        floors = _stencil_floors(xs, fs, order)
    raw = -sign * dd - floors
    scale = np.ones_like(dd)
    absdd = np.abs(dd)
    for w in range(len(dd)):
        lo = max(0, w - 2)
        scale[w] = 1.0 + float(np.max(absdd[lo : w + 3]))
    viol = np.maximum(raw, 0.0) / scale
    return float(np.max(viol)) if len(viol) else 0.0


def _scan_m_class(xs: np.ndarray, fs: np.ndarray, m: int, tol: float):
    """Test nonneg/decreasing/convex of (-1)^(m-1) f^(m-1) via dd orders
    m-1, m, m+1."""
    s_base = 1.0 if (m - 1) % 2 == 0 else -1.0
    v_nonneg = _sign_violation(xs, fs, m - 1, s_base)
    v_decr = _sign_violation(xs, fs, m, -s_base)
    v_conv = _sign_violation(xs, fs, m + 1, s_base)
    worst = max(v_nonneg, v_decr, v_conv)
    return (v_nonneg <= tol, v_decr <= tol, v_conv <= tol, worst)


def check_Mm_membership(
    family: MultiplierFamily,
    m: int,
    grid_spec: Optional[Tuple[float, float, int]] = None,
    tol: float = 1e-8,
) -> ShapeReport:
    """Is (-1)^(m-1) h^(m-1) nonnegative, decreasing and convex?

    Analytic families short-circuit: Exp and InversePower belong to every
    class, RieszCutoff belongs iff mu >= m.  QPolynomial is scanned on a
    geometric grid ((1e-4, 1e4, 256) unless ``grid_spec`` overrides) and
    Sampled on its own grid.  m is capped at 6 -- higher-order difference
    quotients degrade too far to certify anything.
    """
    if not (isinstance(m, int) and 1 <= m <= 6):
        raise ValueError("m must be an integer in 1..6")

    if isinstance(family, (Exp, InversePower)):
        return ShapeReport(m, True, True, True, 0.0, "analytic")
    if isinstance(family, RieszCutoff):
        member = family.mu >= m
        return ShapeReport(m, member, member, member, 0.0 if member else _PLUS_INF, "analytic")
    if isinstance(family, CesaroRatio):
        raise ValueError("CesaroRatio is a sequence-only family; no pointwise shape scan")

    if isinstance(family, Sampled):
        xs = np.asarray(family.grid, dtype=float)
        fs = np.asarray(family.values, dtype=float)
    else:
        lo, hi, count = grid_spec if grid_spec is not None else (1e-4, 1e4, 256)
        xs = np.geomspace(lo, hi, count)
        fs = np.atleast_1d(np.asarray(eval_h(family, xs), dtype=float))
    if len(xs) < m + 3:
        raise ValueError("grid too coarse: need at least m + 3 points")
    nonneg, decr, conv, worst = _scan_m_class(xs, fs, m, tol)
    return ShapeReport(m, nonneg, decr, conv, worst, "numeric")


def check_lambda_conditions(
    family: MultiplierFamily,
    alpha_scaled: bool = False,
    alpha: float = 1.0,
    grid_spec: Optional[Tuple[float, float, int]] = None,
    tol: float = 1e-8,
) -> LambdaConditionsReport:
    """Certify convexity of lambda(x) = (1-h(x))/x and of -lambda'(x).

    Analytic families short-circuit: Exp and InversePower satisfy both;
    RieszCutoff has lambda convex iff mu >= 2 and -lambda' convex iff
    mu >= 3 (at the cutoff knot the slope of lambda jumps by a concave kink
    for mu < 2, of -lambda' for mu < 3).  Other families are scanned with
    second/third difference quotients.

    With ``alpha_scaled`` the scan probes the composed map t -> lambda(t^alpha)
    instead -- the form in which the coefficient sequence actually sees
    lambda.  For convex *decreasing* lambda and alpha <= 1 the composition
    with the concave power map preserves both certificates, so analytic
    short-circuits still apply there.
    """
    if isinstance(family, (Exp, InversePower)) and (not alpha_scaled or alpha <= 1.0):
        return LambdaConditionsReport(True, True, 0.0, "analytic")
    if isinstance(family, RieszCutoff) and (not alpha_scaled or alpha <= 1.0):
        return LambdaConditionsReport(family.mu >= 2.0, family.mu >= 3.0,
                                      0.0 if family.mu >= 3.0 else _PLUS_INF,
                                      "analytic")
    if isinstance(family, CesaroRatio):
        raise ValueError("CesaroRatio is a sequence-only family; no lambda conditions")

    params = LambdaParams(rho=1.0, gamma=0.0)
    if isinstance(family, Sampled):
        xs = np.asarray(family.grid, dtype=float)
    else:
        lo, hi, count = grid_spec if grid_spec is not None else (1e-4, 1e4, 512)
        xs = np.geomspace(lo, hi, count)
    fs = lambda_rho_gamma(family, params, xs)
    if alpha_scaled:
        # lambda(t^alpha) at t = x^(1/alpha) takes the same values as
        # lambda at x; only the abscissas move.
        xs = xs ** (1.0 / alpha)
    fs = np.atleast_1d(np.asarray(fs, dtype=float))
    v_conv = _sign_violation(xs, fs, 2, 1.0)
    v_third = _sign_violation(xs, fs, 3, -1.0)
    return LambdaConditionsReport(v_conv <= tol, v_third <= tol,
                                  max(v_conv, v_third), "numeric")
