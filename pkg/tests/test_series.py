import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from harmlens import DivisionError, PowerSeries


def _series(coeffs):
    return PowerSeries(np.asarray(coeffs, dtype=complex))


def _rand(order, seed):
    rng = np.random.default_rng(seed)
    c = rng.standard_normal(order + 1) + 1j * rng.standard_normal(order + 1)
    return PowerSeries(c)


def test_mul_matches_polynomial_product():
    a = _rand(12, 0)
    b = _rand(12, 1)
    got = a.mul(b).coeffs
    full = np.polynomial.polynomial.polymul(a.coeffs, b.coeffs)
    assert np.allclose(got, full[:13], rtol=0, atol=1e-12)


def test_mul_commutes():
    a = _rand(9, 2)
    b = _rand(9, 3)
    assert np.allclose(a.mul(b).coeffs, b.mul(a).coeffs)


def test_div_roundtrip():
    a = _rand(15, 4)
    b = _rand(15, 5)
    b = PowerSeries(b.coeffs + np.array([3.0] + [0.0] * 15))  # keep b(0) away from 0
    back = a.mul(b).div(b)
    assert np.allclose(back.coeffs, a.coeffs, rtol=0, atol=1e-10)


def test_div_rejects_vanishing_constant_term():
    a = _rand(4, 6)
    b = _series([0.0, 1.0, 0.0, 0.0, 0.0])
    with pytest.raises(DivisionError):
        a.div(b)


def test_order_mismatch_is_an_error():
    a = _series([1.0, 2.0])
    b = _series([1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        a.add(b)


def test_derivative_antiderivative_roundtrip():
    a = _rand(10, 7)
    back = a.derivative().antiderivative()
    # antiderivative raises the order by one and zeroes the constant term
    assert back.order == a.order
    assert back.coeffs[0] == 0
    assert np.allclose(back.coeffs[1:], a.coeffs[1:])


def test_eval_matches_horner_oracle():
    a = _rand(8, 8)
    z = np.array([0.3 + 0.1j, -0.2j, 0.45])
    want = np.array([np.polyval(a.coeffs[::-1], zz) for zz in z])
    assert np.allclose(a.eval(z), want, rtol=1e-14, atol=0)


def test_zeros_has_matching_order():
    z = PowerSeries.zeros(6)
    assert z.order == 6
    assert np.all(z.coeffs == 0)


@given(st.integers(min_value=0, max_value=9), st.integers(min_value=0, max_value=2 ** 31))
@settings(max_examples=40, deadline=None)
def test_add_sub_inverse(order, seed):
    a = _rand(order, seed)
    b = _rand(order, seed + 1)
    assert np.allclose(a.add(b).sub(b).coeffs, a.coeffs, rtol=0, atol=1e-12)


@given(st.integers(min_value=1, max_value=9), st.integers(min_value=0, max_value=2 ** 31))
@settings(max_examples=40, deadline=None)
def test_derivative_is_linear(order, seed):
    a = _rand(order, seed)
    b = _rand(order, seed + 2)
    lhs = a.add(b).derivative()
    rhs = a.derivative().add(b.derivative())
    assert np.allclose(lhs.coeffs, rhs.coeffs, rtol=0, atol=1e-12)


@given(
    st.complex_numbers(max_magnitude=0.7, allow_nan=False, allow_infinity=False),
    st.integers(min_value=0, max_value=2 ** 31),
)
@settings(max_examples=40, deadline=None)
def test_mul_eval_consistent(z, seed):
    a = _rand(6, seed)
    b = _rand(6, seed + 3)
    # truncated product only agrees through the kept order; compare against
    # the truncated convolution evaluated directly
    prod = a.mul(b)
    direct = prod.eval(np.array([z]))[0]
    full = np.polynomial.polynomial.polymul(a.coeffs, b.coeffs)[:7]
    want = np.polyval(full[::-1], z)
    assert abs(direct - want) < 1e-9 * max(1.0, abs(want))


def test_scale_and_shift_const():
    a = _series([1.0, 2.0, 3.0])
    assert np.allclose(a.scale(2.0).coeffs, [2.0, 4.0, 6.0])
    assert np.allclose(a.shift_const(5.0).coeffs, [6.0, 2.0, 3.0])
