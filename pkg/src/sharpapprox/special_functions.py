"""Self-contained special functions for the series and asymptotics engines.

Plain float64 numerics on top of ``math`` and ``numpy``:

* ``hurwitz_zeta(s, a)``       -- analytic continuation of sum_{k>=0} (k+a)^-s
* ``hurwitz_zeta_alternating`` -- sum_{k>=0} (-1)^k (k+a)^-s, entire in s
* ``digamma``                  -- logarithmic derivative of Gamma
* ``log_gamma``                -- thin wrapper over math.lgamma
* ``cesaro_number``            -- generalized binomial coefficients A_n^alpha

The zeta evaluators are self-written on purpose: downstream code needs them at
negative and fractional order (where partial sums are meaningless) and
vectorized over arrays of offsets, which is not something the stdlib provides.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "hurwitz_zeta",
    "hurwitz_zeta_alternating",
    "digamma",
    "log_gamma",
    "cesaro_number",
]

# ---------------------------------------------------------------------------
# Bernoulli numbers B_2, B_4, ..., B_24 (exact rationals, cast once)
# ---------------------------------------------------------------------------

_B2J = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
]
_EM_TERMS = len(_B2J)


# ---------------------------------------------------------------------------
# Hurwitz zeta
# ---------------------------------------------------------------------------

def _em_zeta(s: float, a: np.ndarray) -> np.ndarray:
    """Euler-Maclaurin evaluation of the Hurwitz zeta function.

    The correction series is asymptotic with term ratio roughly
    ((|s| + 2j) / (2 pi (N + a)))^2, so the truncation point N is pushed far
    enough out for the first omitted term to drop below double precision.
    For s < 0 the power sums grow and cancel against the corrections, so N is
    kept small there to limit round-off amplification; for negative integer s
    the rising factorial terminates and the formula is exact at any N.
    """
    amin = float(a.min())
    if s < 0.0 and s == math.floor(s):
        n_sum = 0
    elif s < 0.0:
        n_sum = max(1, int(math.ceil(8.0 - min(amin, 7.0))))
    else:
        x_target = max(15.0, 0.75 * (s + 25.0))
        n_sum = max(2, int(math.ceil(x_target - min(amin, 10.0))))

    if n_sum > 0:
        k = np.arange(n_sum, dtype=float)
        total = np.sum((a[None, :] + k[:, None]) ** (-s), axis=0)
    else:
        total = np.zeros_like(a)

    big = a + n_sum
    total = total + big ** (1.0 - s) / (s - 1.0) + 0.5 * big ** (-s)

    rising = s
    power = big ** (-s - 1.0)
    inv2 = big ** (-2.0)
    fact = 2.0
    for j in range(1, _EM_TERMS + 1):
        if j > 1:
            rising *= (s + 2.0 * j - 3.0) * (s + 2.0 * j - 2.0)
            fact *= (2.0 * j) * (2.0 * j - 1.0)
        if rising == 0.0:
            break
        total = total + (_B2J[j - 1] / fact) * rising * power
        power = power * inv2
    return total


def _sinpi_arr(x: np.ndarray) -> np.ndarray:
    """sin(pi x) with exact zeros at integer x (argument reduced before pi)."""
    y = np.fmod(x, 2.0)
    y = np.where(y > 1.0, y - 2.0, y)
    y = np.where(y < -1.0, y + 2.0, y)
    y = np.where(y > 0.5, 1.0 - y, y)
    y = np.where(y < -0.5, -1.0 - y, y)
    return np.sin(np.pi * y)


def _cospi_arr(x: np.ndarray) -> np.ndarray:
    """cos(pi x) with exact zeros at half-integer x."""
    y = np.fmod(np.abs(x), 2.0)
    y = np.where(y > 1.0, 2.0 - y, y)
    out = np.where(y <= 0.5, np.cos(np.pi * y), -np.cos(np.pi * (1.0 - y)))
    return np.where(y == 0.5, np.zeros_like(y), out)


def _reflection_zeta(s: float, a: float) -> float:
    """Hurwitz zeta for negative order via the conjugate series.

    Direct Euler-Maclaurin loses precision as s drops (the power sums dwarf
    the result), while the conjugate series
    2 Gamma(1-s) (2 pi)^(s-1) sum_k k^(s-1) sin(pi s/2 + 2 pi k b)
    converges rapidly once s <= -3.  Offsets above 1 are peeled off term by
    term, and integer orders get exact phase splitting (their sine factors
    have exact zeros that float products would miss).
    """
    m = int(math.ceil(a)) - 1
    b = a - m  # in (0, 1]
    kmax = 60 + int(10.0 ** min(4.0, 17.0 / abs(s)))
    k = np.arange(1.0, kmax + 1.0)
    sr = round(s)
    if abs(s - sr) < 1e-9:
        # integer order: split the phase exactly so that the sine factor of
        # the grid frequency does not drown in round-off (e.g. the exact
        # zeros at half-integer offsets)
        q = int(sr)
        if q % 2 == 0:
            phase = _sinpi_arr(2.0 * k * b)
            unit = 1.0 if (q // 2) % 2 == 0 else -1.0
        else:
            phase = _cospi_arr(2.0 * k * b)
            unit = 1.0 if ((q - 1) // 2) % 2 == 0 else -1.0
        series = unit * float(np.sum(k ** (s - 1.0) * phase))
    else:
        series = float(
            np.sum(k ** (s - 1.0) * np.sin(0.5 * math.pi * s + 2.0 * math.pi * k * b))
        )
    if series == 0.0:
        val = 0.0
    else:
        mag = (
            math.log(2.0)
            + math.lgamma(1.0 - s)
            - (1.0 - s) * math.log(2.0 * math.pi)
            + math.log(abs(series))
        )
        if mag < 709.0:
            val = math.copysign(math.exp(mag), series)
        else:
            val = math.copysign(math.inf, series)
    if m > 0:
        j = np.arange(m, dtype=float)
        val -= float(np.sum((j + b) ** (-s)))
    return val


def _cvz_alternating(s: float, a: float, n: int = 64) -> float:
    """Accelerated alternating sum of (k+a)^-s (Chebyshev-weight scheme).

    Error decays like (3 + sqrt 8)^-n, far below double precision at n=64.
    Used where the split into two plain zetas would cancel catastrophically.
    """
    d = (3.0 + 2.0 * math.sqrt(2.0)) ** n
    d = 0.5 * (d + 1.0 / d)
    b = -1.0
    c = -d
    total = 0.0
    for k in range(n):
        c = b - c
        total += c * (k + a) ** (-s)
        b *= (k + n) * (k - n) / ((k + 0.5) * (k + 1.0))
    return total / d


def _validate_offsets(a) -> tuple[bool, np.ndarray]:
    scalar = np.ndim(a) == 0
    arr = np.atleast_1d(np.asarray(a, dtype=float))
    if arr.size == 0:
        raise ValueError("offset array must be nonempty")
    if np.any(arr <= 0.0) or np.any(arr > 10.0):
        raise ValueError("offset a must lie in (0, 10]")
    return scalar, arr


def hurwitz_zeta(s: float, a):
    """Analytic continuation of sum_{k>=0} (k+a)^(-s).

    Parameters: real s != 1 (simple pole), offsets a in (0, 10] -- a float or
    a numpy array (vectorized over offsets, scalar order).

    Accuracy: a few 1e-13 absolute-or-relative over the whole domain; the
    Euler-Maclaurin route covers s > -3 (with a short truncation point for
    s < 0 to keep the cancelling power sums small) and the conjugate series
    takes over at s <= -3.
    """
    s = float(s)
    if s == 1.0:
        raise ValueError("hurwitz_zeta has a simple pole at s = 1")
    scalar, arr = _validate_offsets(a)
    if s <= -3.0:
        out = np.array([_reflection_zeta(s, float(v)) for v in arr])
    else:
        out = _em_zeta(s, arr)
    return float(out[0]) if scalar else out


def hurwitz_zeta_alternating(s: float, a):
    """Entire continuation of sum_{k>=0} (-1)^k (k+a)^(-s).

    Away from s = 1 this is the exact split 2^-s (zeta(s, a/2) -
    zeta(s, (a+1)/2)); near s = 1 the split cancels two poles, so an
    accelerated alternating sum is used instead.  Accepts the same offsets
    as ``hurwitz_zeta`` and is well defined at s = 1 (no pole).
    """
    s = float(s)
    scalar, arr = _validate_offsets(a)
    if abs(s - 1.0) <= 0.25:
        out = np.array([_cvz_alternating(s, float(v)) for v in arr])
    else:
        out = (2.0 ** (-s)) * (
            hurwitz_zeta(s, arr * 0.5) - hurwitz_zeta(s, (arr + 1.0) * 0.5)
        )
        out = np.atleast_1d(out)
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# Log-space variants at offset 1/2 (needed deep into asymptotic tails, where
# the plain values overflow float range but products with tiny factors don't)
# ---------------------------------------------------------------------------

def _eta(x: float) -> float:
    """Dirichlet eta = sum (-1)^(k-1) k^-x for x > 1 (direct, x >= 5 here)."""
    k = np.arange(1.0, 1001.0)
    return float(np.sum((-1.0) ** (k - 1.0) * k ** (-x)))


def _beta_series(x: float) -> float:
    """sum (-1)^k (2k+1)^-x for x > 1 (direct, x >= 5 here)."""
    k = np.arange(0.0, 1000.0)
    return float(np.sum((-1.0) ** k * (2.0 * k + 1.0) ** (-x)))


def _zeta_half_log(s: float) -> tuple[float, float]:
    """(sign, log|zeta(s, 1/2)|) for s <= -4.

    Uses zeta(s, 1/2) = -2 Gamma(1-s) (2 pi)^(s-1) sin(pi s/2) eta(1-s);
    even-integer orders are exact zeros.
    """
    sr = round(s)
    if abs(s - sr) < 1e-8:
        m = int(sr)
        if m % 2 == 0:
            return 0.0, -math.inf
        sin_val = 1.0 if m % 4 == 1 else -1.0
    else:
        sin_val = math.sin(0.5 * math.pi * s)
    if sin_val == 0.0:
        return 0.0, -math.inf
    loga = (
        math.log(2.0)
        + math.lgamma(1.0 - s)
        + (s - 1.0) * math.log(2.0 * math.pi)
        + math.log(abs(sin_val))
        + math.log(_eta(1.0 - s))
    )
    return -math.copysign(1.0, sin_val), loga


def _zeta_alt_half_log(s: float) -> tuple[float, float]:
    """(sign, log|alternating zeta at offset 1/2|) for s <= -4.

    Via 2^s times the odd-index L-value, whose reflection
    (pi/2)^(s-1) Gamma(1-s) cos(pi s/2) carries the growth; odd-integer
    orders are exact zeros.
    """
    sr = round(s)
    if abs(s - sr) < 1e-8:
        m = int(sr)
        if m % 2 != 0:
            return 0.0, -math.inf
        cos_val = 1.0 if m % 4 == 0 else -1.0
    else:
        cos_val = math.cos(0.5 * math.pi * s)
    if cos_val == 0.0:
        return 0.0, -math.inf
    loga = (
        s * math.log(2.0)
        + (s - 1.0) * math.log(0.5 * math.pi)
        + math.lgamma(1.0 - s)
        + math.log(abs(cos_val))
        + math.log(_beta_series(1.0 - s))
    )
    return math.copysign(1.0, cos_val), loga


# ---------------------------------------------------------------------------
# Digamma and log-gamma
# ---------------------------------------------------------------------------

def digamma(x: float) -> float:
    """Logarithmic derivative of Gamma for x > 0.

    Recurrence up to x >= 10, then the Bernoulli asymptotic series; absolute
    error a few 1e-16.
    """
    x = float(x)
    if x <= 0.0:
        raise ValueError("digamma implemented for x > 0 only")
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    total = math.log(x) - 0.5 / x
    t = inv2
    for j in range(1, 8):
        total -= _B2J[j - 1] / (2.0 * j) * t
        t *= inv2
    return acc + total


def log_gamma(x: float) -> float:
    """log|Gamma(x)| (stdlib lgamma; raises at the poles)."""
    return math.lgamma(x)


# ---------------------------------------------------------------------------
# Generalized binomial (Cesaro) numbers
# ---------------------------------------------------------------------------

def cesaro_number(n: int, alpha: float) -> float:
    """A_n^alpha = product_{k=1..n} (alpha + k) / k, with A_0 = 1.

    Negative n gives 0, as does any vanishing factor (alpha a negative
    integer >= -n).  Plain running product up to n = 170, log-space with sign
    tracking beyond (also used as a fallback if the plain product overflows).
    """
    n = int(n)
    alpha = float(alpha)
    if n < 0:
        return 0.0
    if n == 0:
        return 1.0
    if n <= 170:
        p = 1.0
        for k in range(1, n + 1):
            p *= (alpha + k) / k
        if math.isfinite(p):
            return p
    neg = 0
    logs = 0.0
    for k in range(1, n + 1):
        f = alpha + k
        if f == 0.0:
            return 0.0
        if f < 0.0:
            neg += 1
        logs += math.log(abs(f)) - math.log(k)
    sign = -1.0 if neg % 2 else 1.0
    if logs > 709.0:
        return math.copysign(math.inf, sign)
    return sign * math.exp(logs)
