"""Truncated power series with exact coefficient arithmetic.

All series in a computation are expected to share a truncation order; binary
operations insist on it rather than guessing a promotion rule. Convolution,
antidifferentiation and Horner evaluation are the only operations the rest of
the package needs, plus division for recovering the dilatation factor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DivisionError

DIV_CONST_TOL = 1e-12


@dataclass(frozen=True)
class PowerSeries:
    """Coefficients c[0..N] of sum c_n z^n, truncated at order N."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=complex)
        arr = np.array(arr, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("coefficients must be a nonempty 1-d array")

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @classmethod
    def zeros(cls, order: int) -> "PowerSeries":
        return cls(np.zeros(order + 1, dtype=complex))

    def _check_order(self, other: "PowerSeries"):
        if self.order != other.order:
            raise ValueError(
                f"order mismatch: {self.order} vs {other.order}"
            )

    def add(self, other: "PowerSeries") -> "PowerSeries":
        self._check_order(other)
        return PowerSeries(self.coeffs + other.coeffs)

    def sub(self, other: "PowerSeries") -> "PowerSeries":
        self._check_order(other)
        return PowerSeries(self.coeffs - other.coeffs)

    def scale(self, c: complex) -> "PowerSeries":
        return PowerSeries(self.coeffs * c)

    def shift_const(self, c: complex) -> "PowerSeries":
        """Add the constant c to the series."""
        out = np.array(self.coeffs, copy=True)
        out[0] += c
        return PowerSeries(out)

    def mul(self, other: "PowerSeries") -> "PowerSeries":
        """Cauchy product truncated back to the shared order."""
        self._check_order(other)
        full = np.convolve(self.coeffs, other.coeffs)
        return PowerSeries(full[: self.order + 1])

    def div(self, other: "PowerSeries") -> "PowerSeries":
        """Series quotient; requires a non-vanishing constant term in the divisor."""
        self._check_order(other)
        b = other.coeffs
        if abs(b[0]) < DIV_CONST_TOL:
            raise DivisionError(
                f"divisor constant term {b[0]} below {DIV_CONST_TOL}"
            )
        n = self.order + 1
        out = np.zeros(n, dtype=complex)
        for k in range(n):
            acc = self.coeffs[k]
            if k:
                acc = acc - np.dot(out[:k], b[k:0:-1])
            out[k] = acc / b[0]
        return PowerSeries(out)

    def derivative(self) -> "PowerSeries":
        n = np.arange(1, self.order + 1)
        return PowerSeries(self.coeffs[1:] * n)

    def antiderivative(self) -> "PowerSeries":
        """Termwise antiderivative with constant 0; order grows by one."""
        out = np.zeros(self.order + 2, dtype=complex)
        out[1:] = self.coeffs / np.arange(1, self.order + 2)
        return PowerSeries(out)

    def eval(self, z):
        """Horner evaluation, scalar or elementwise on arrays."""
        arr = np.asarray(z, dtype=complex)
        acc = np.full(arr.shape, self.coeffs[-1], dtype=complex)
        for c in self.coeffs[-2::-1]:
            acc = acc * arr + c
        if arr.ndim == 0:
            return complex(acc)
        return acc

    def __eq__(self, other):
        return isinstance(other, PowerSeries) and np.array_equal(
            self.coeffs, other.coeffs
        )
