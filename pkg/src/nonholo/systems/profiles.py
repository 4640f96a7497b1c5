"""Scalar profile functions with explicit derivatives, complex-safe."""

import numpy as np


class Profile:
    """A smooth function of one variable carrying its derivatives.

    Built from explicit callables or from polynomial coefficients; the
    derivative attributes d1 and d2 are plain callables.
    """

    def __init__(self, fun, d1, d2=None, label="profile"):
        self.fun = fun
        self.d1 = d1
        self.d2 = d2 if d2 is not None else _missing_d2
        self.label = label

    @classmethod
    def from_poly(cls, coeffs, label="poly"):
        P = np.polynomial.Polynomial(coeffs)
        return cls(P, P.deriv(1), P.deriv(2), label=label)

    @classmethod
    def constant(cls, value, label="const"):
        return cls.from_poly([value], label=label)

    def __call__(self, s):
        return self.fun(s)

    def __repr__(self):
        return f"Profile({self.label})"


def _missing_d2(s):
    raise NotImplementedError("profile has no second derivative configured")
