import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sharpapprox.multipliers import (
    Exp,
    InversePower,
    QPolynomial,
    RieszCutoff,
    Sampled,
)
from sharpapprox.series_engine import (
    ApproximationResult,
    ClassParams,
    OperatorParams,
    approx_value,
    cesaro_mixing_identity,
    cesaro_value,
    check_applicability,
    en_from_cosine_coeffs,
    en_from_sine_coeffs,
    fejer_constant,
    q_means_value,
)

ZETA3 = 1.2020569031595942854
ODD_CUBES = (4.0 / math.pi) * (7.0 / 8.0) * ZETA3  # (4/pi) sum (2k+1)^-3


# ---------------------------------------------------------------------------
# coefficient-series entry points
# ---------------------------------------------------------------------------

def test_sine_series_zero():
    assert en_from_sine_coeffs(lambda k: 0.0, 1) == 0.0


def test_sine_series_geometric():
    q = 0.5
    v = en_from_sine_coeffs(
        lambda k: q**k, 1, 1e-12,
        tail_bound=lambda K: q ** (2 * K + 1) / ((2 * K + 1) * (1 - q * q)),
    )
    assert abs(v - (2.0 / math.pi) * math.atanh(q)) < 1e-11


def test_sine_series_cubic_decay():
    v = en_from_sine_coeffs(
        lambda k: 2.0 / k**2, 1, 1e-11,
        tail_bound=lambda K: 2.0 * (2 * K + 1) ** -3 + 0.5 * (2 * K + 1) ** -2,
    )
    assert abs(v - ODD_CUBES) < 1e-10


def test_sine_series_needs_termination():
    with pytest.raises(ValueError):
        # no tail bound and not finitely supported: must refuse, not guess
        en_from_sine_coeffs(lambda k: 1.0 / k, 1, 1e-6)


def test_cosine_series_values():
    assert en_from_cosine_coeffs(lambda k: 0.0, 1) == 0.0
    q = 0.5
    v = en_from_cosine_coeffs(lambda k: q**k, 1, 1e-12)
    assert abs(v - (2.0 / math.pi) * math.atan(q)) < 1e-11
    v = en_from_cosine_coeffs(lambda k: 2.0 / k**2, 1, 1e-12)
    assert abs(v - math.pi**2 / 8.0) < 1e-11


# ---------------------------------------------------------------------------
# approx_value
# ---------------------------------------------------------------------------

def test_value_saturates_at_large_delta():
    # h(x_k) is ~1e-22 for delta=50, so the value is the bare odd-square sum
    res = approx_value(ClassParams(1.0, 1, 1), OperatorParams(1.0, 50.0), Exp())
    assert abs(res.value - math.pi / 2.0) < 1e-15
    assert res.justification == "thZast1-case1"


def test_value_cutoff_all_ones():
    # cutoff multiplier dies before the first odd integer: every bracket is 1
    res = approx_value(ClassParams(2.0, 1, 1), OperatorParams(1.0, 1.0), RieszCutoff(1.0))
    assert abs(res.value - ODD_CUBES) < 1e-13
    assert res.tail_bound == 0.0


def test_gamma_zero_paths_identical():
    c = ClassParams(1.5, 1, 1)
    a = approx_value(c, OperatorParams(0.7, 0.3, gamma=0.0), Exp())
    b = approx_value(c, OperatorParams(0.7, 0.3), Exp())
    assert a.value == b.value  # same code path, bit for bit


def test_alternating_below_plain():
    for fam in (Exp(), InversePower(2.0), RieszCutoff(2.0)):
        vo = approx_value(ClassParams(2.0, 1, 1), OperatorParams(1.0, 0.5), fam).value
        ve = approx_value(ClassParams(2.0, 0, 1), OperatorParams(1.0, 0.5), fam).value
        assert ve <= vo


def test_n_scaling_law():
    # doubling n and shrinking delta by 2^-alpha reproduces the summand
    # arguments exactly, so values scale by 2^-r
    for fam, r in ((Exp(), 1.3), (InversePower(2.0), 0.7)):
        a, d = 0.8, 0.4
        v1 = approx_value(ClassParams(r, 1, 3), OperatorParams(a, d), fam).value
        v2 = approx_value(ClassParams(r, 1, 6), OperatorParams(a, d * 2.0**-a), fam).value
        assert abs(v2 / v1 - 2.0**-r) < 1e-14


def test_delta_monotonicity():
    vals = [
        approx_value(ClassParams(1.0, 1, 1), OperatorParams(1.0, d), Exp()).value
        for d in (0.1, 0.2, 0.5, 1.0, 3.0)
    ]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_refinement_within_tail_bound():
    for fam in (Exp(), InversePower(1.5)):
        op = OperatorParams(0.9, 0.25, gamma=0.3, rho=2.0)
        ra = approx_value(ClassParams(1.0, 1, 1), op, fam, tol=1e-8)
        rb = approx_value(ClassParams(1.0, 1, 1), op, fam, tol=1e-9)
        assert abs(ra.value - rb.value) <= ra.tail_bound + 1e-16


def test_divergent_combination_refused():
    # inverse-power with mu < 1 and a slope: coefficients grow too fast
    with pytest.raises(ValueError):
        approx_value(
            ClassParams(0.9, 1, 1),
            OperatorParams(2.0, 0.5, gamma=0.5),
            InversePower(0.5),
        )


def test_sampled_family_support_rules():
    g = np.linspace(0.05, 4.0, 200)
    vals = np.maximum(1.0 - g / 4.0, 0.0) ** 2
    vals[-1] = 0.0
    fam = Sampled(tuple(g), tuple(vals))
    res = approx_value(ClassParams(2.0, 1, 1), OperatorParams(1.0, 0.1), fam)
    assert res.tail_bound == 0.0
    assert res.justification == "unverified"
    # smallest argument below the hull: refuse rather than extrapolate
    with pytest.raises(ValueError):
        approx_value(ClassParams(2.0, 1, 1), OperatorParams(1.0, 0.01), fam)
    # trailing sample not zero: tail cannot be certified
    bad = Sampled((0.5, 1.0, 2.0), (0.9, 0.5, 0.1))
    with pytest.raises(ValueError):
        approx_value(ClassParams(2.0, 1, 1), OperatorParams(1.0, 1.0), bad)


@settings(max_examples=25, deadline=None)
@given(
    r=st.floats(min_value=0.5, max_value=3.0),
    delta=st.floats(min_value=0.05, max_value=5.0),
)
def test_value_within_structural_bounds(r, delta):
    # brackets sit in (0, 1), so the value sits strictly between 0 and the
    # all-ones sum (4/pi) 2^-(r+1) zeta(r+1, 1/2)
    res = approx_value(ClassParams(r, 1, 1), OperatorParams(1.0, delta), Exp())
    cap = fejer_constant(r + 1.0, 1)
    assert 0.0 < res.value < cap


# ---------------------------------------------------------------------------
# applicability routing
# ---------------------------------------------------------------------------

def test_applicability_examples():
    assert (
        check_applicability(ClassParams(0.5, 1, 4), OperatorParams(0.5, 0.1), Exp())
        == "thZast1-case1"
    )
    assert (
        check_applicability(ClassParams(1.0, 0, 2), OperatorParams(1.0, 0.1), Exp())
        == "thZast1-case2-strong"
    )
    assert (
        check_applicability(
            ClassParams(1.0, 0, 1), OperatorParams(1.0, 0.1), RieszCutoff(0.5)
        )
        == "unverified"
    )


def test_applicability_fallback_chain():
    # cutoff with mu=1: lambda not convex, not in M_2, but decay index 1 is
    # finite, so the plain-sign branch lands on the decay-index case
    tag = check_applicability(ClassParams(2.0, 1, 1), OperatorParams(1.0, 1.0), RieszCutoff(1.0))
    assert tag == "thZast-case1"
    # slope within the critical value: perturbed route, any n
    tag = check_applicability(
        ClassParams(1.0, 1, 3), OperatorParams(1.0, 0.5, gamma=0.2, rho=1.0), Exp()
    )
    assert tag == "thZast3-1i"
    # slope beyond the critical value but positive definite at alpha=1
    tag = check_applicability(
        ClassParams(1.0, 1, 1), OperatorParams(1.0, 0.5, gamma=1.0, rho=1.0), Exp()
    )
    assert tag == "thZast4"
    # same but n=2 blocks the positive-definite case
    tag = check_applicability(
        ClassParams(1.0, 1, 2), OperatorParams(1.0, 0.5, gamma=1.0, rho=1.0), Exp()
    )
    assert tag == "unverified"


def test_applicability_never_certifies_sampled():
    g = np.geomspace(0.01, 50.0, 400)
    fam = Sampled(tuple(g), tuple(np.exp(-g)))
    for beta in (0, 1):
        tag = check_applicability(ClassParams(2.0, beta, 1), OperatorParams(1.0, 0.5), fam)
        assert tag == "unverified"


# ---------------------------------------------------------------------------
# arithmetic means
# ---------------------------------------------------------------------------

def test_cesaro_value_m0():
    res = cesaro_value(ClassParams(2.0, 1, 1), 0, 1.0)
    assert abs(res.value - ODD_CUBES) < 1e-13
    assert res.justification == "thChezaro-1"


def test_cesaro_value_m1():
    res = cesaro_value(ClassParams(2.0, 1, 1), 1, 1.0)
    expect = (4.0 / math.pi) * (0.5 + ((7.0 / 8.0) * ZETA3 - 1.0))
    assert abs(res.value - expect) < 1e-13


def test_cesaro_value_brute_force():
    # independent check: direct ratio formula summed termwise
    res = cesaro_value(ClassParams(1.7, 0, 1), 6, 2.5)
    assert abs(res.value - 0.338760903087) < 1e-10
    assert res.justification == "unverified"  # r=1.7 outside both windows


def test_cesaro_requires_n1():
    with pytest.raises(ValueError):
        cesaro_value(ClassParams(2.0, 1, 2), 3, 1.0)
    with pytest.raises(ValueError):
        cesaro_value(ClassParams(2.0, 1, 1), 3, 0.5)  # alpha below 1


@pytest.mark.parametrize(
    "m,alpha,gamma_order",
    [(5, 2.0, 1.0), (0, 3.5, 2.0), (4, 2.0, 2.0), (6, 3.5, 1.0), (20, 2.0, 1.0)],
)
def test_mixing_identity(m, alpha, gamma_order):
    lhs, rhs = cesaro_mixing_identity(ClassParams(2.0, 1, 1), m, alpha, gamma_order)
    assert abs(lhs - rhs) < 1e-9


def test_mixing_identity_collapse():
    lhs, rhs = cesaro_mixing_identity(ClassParams(3.0, 0, 1), 8, 2.5, 2.5)
    assert abs(lhs - rhs) < 1e-14


def test_fejer_limit_of_means():
    # (m+1) x deviation of the first-order means approaches the constant
    r, beta, m = 2.0, 1, 1000
    K = fejer_constant(r, beta)
    v = cesaro_value(ClassParams(r, beta, 1), m, 1.0).value
    assert abs((m + 1) * v - K) <= 1.2 / (math.pi * m)


# ---------------------------------------------------------------------------
# cutoff-polynomial means
# ---------------------------------------------------------------------------

def test_q_means_all_ones():
    res = q_means_value(ClassParams(2.0, 1, 1), QPolynomial(((1.0, 1.0),)), 1.0, u=1.0)
    assert abs(res.value - ODD_CUBES) < 1e-13
    assert res.justification == "thPolinom-1"


def test_q_means_finite_head():
    res = q_means_value(ClassParams(2.0, 1, 1), QPolynomial(((1.0, 1.0),)), 1.0, u=4.0)
    expect = (4.0 / math.pi) * (0.25 + 0.75 / 27.0 + ((7.0 / 8.0) * ZETA3 - 1.0 - 1.0 / 27.0))
    assert abs(res.value - expect) < 1e-13


def test_q_means_homogeneous_forms_agree():
    q2 = QPolynomial(((1.0, 2.0),))
    ru = q_means_value(ClassParams(2.0, 1, 1), q2, 1.0, u=5.0)
    rd = q_means_value(ClassParams(2.0, 1, 1), q2, 1.0, delta=0.2)
    assert ru.value == pytest.approx(rd.value, abs=1e-15)


def test_q_means_tags_and_errors():
    q = QPolynomial(((1.0, 1.0),))
    assert q_means_value(ClassParams(2.0, 1, 1), q, 1.5, u=4.0).justification == "unverified"
    assert q_means_value(ClassParams(1.5, 1, 1), q, 1.0, u=4.0).justification == "unverified"
    assert q_means_value(ClassParams(2.5, 0, 1), q, 1.0, u=4.0).justification == "unverified"
    assert q_means_value(ClassParams(3.0, 0, 1), q, 1.0, u=4.0).justification == "thPolinom-2"
    with pytest.raises(ValueError):
        q_means_value(ClassParams(2.0, 1, 1), q, 1.0, u=4.0, delta=0.25)
    with pytest.raises(ValueError):
        q_means_value(ClassParams(2.0, 1, 2), q, 1.0, u=4.0)


# ---------------------------------------------------------------------------
# limiting constant
# ---------------------------------------------------------------------------

def test_fejer_constant_values():
    assert abs(fejer_constant(2.0, 1) - math.pi / 2.0) < 1e-15
    assert abs(fejer_constant(1.0, 0) - 1.0) < 1e-14
    assert abs(fejer_constant(3.0, 1) - ODD_CUBES) < 1e-14
    with pytest.raises(ValueError):
        fejer_constant(1.0, 1)
    with pytest.raises(ValueError):
        fejer_constant(0.0, 0)


# ---------------------------------------------------------------------------
# parameter records
# ---------------------------------------------------------------------------

def test_parameter_validation():
    with pytest.raises(ValueError):
        ClassParams(0.0, 1, 1)
    with pytest.raises(ValueError):
        ClassParams(1.0, 1, 0)
    with pytest.raises(ValueError):
        ClassParams(1.0, 1, 1, p="two")
    with pytest.raises(ValueError):
        OperatorParams(0.0, 1.0)
    with pytest.raises(ValueError):
        OperatorParams(1.0, -1.0)
    with pytest.raises(ValueError):
        OperatorParams(1.0, 1.0, rho=0.5)
    with pytest.raises(ValueError):
        ApproximationResult(1.0, 0.0, 3, "thUnknown")
    with pytest.raises(ValueError):
        ApproximationResult(1.0, -0.1, 3, "unverified")


def test_p_does_not_change_value():
    a = approx_value(ClassParams(1.5, 1, 1, p="one"), OperatorParams(1.0, 0.5), Exp())
    b = approx_value(ClassParams(1.5, 1, 1, p="infinity"), OperatorParams(1.0, 0.5), Exp())
    assert a.value == b.value
