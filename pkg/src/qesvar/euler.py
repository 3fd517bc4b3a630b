"""Series solutions of ODEs written in Euler form.

An equation ``[F(D) + P(x, d/dx)] y = 0`` with ``D = x d/dx`` is solved by a
power series anchored at a root ``lam`` of ``F``.  ``P`` is a sum of
monomial terms ``c(E) * x**p * (d/dx)**q`` (q in {0, 1}), each of which
raises the x-degree by ``p - q``.  The coefficient of ``x**(lam + s*k)``
follows from the graded recursion::

    F(lam + s*k) * c_k = - sum_t coef_t * w_t(lam + s*k - shift_t) * c_{k - shift_t/s}

where ``w_t(m)`` is ``m`` for derivative terms and 1 otherwise.  All
coefficients are exact polynomials in the energy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

import numpy as np

from .poly import Poly, isolate_real_roots, rational_root_in, to_rational

__all__ = [
    "MonomialTerm",
    "EulerOperator",
    "XSeries",
    "Resonance",
    "IrrationalIndicialRoot",
    "OrderTooLow",
    "indicial_roots",
    "generate_series",
    "termination_polynomial",
    "apply_operator",
]


class Resonance(ArithmeticError):
    """F vanishes at a later exponent of the series; no plain power series."""

    def __init__(self, k: int, exponent):
        super().__init__(f"indicial polynomial vanishes at exponent {exponent} (order {k})")
        self.k = k
        self.exponent = exponent


class IrrationalIndicialRoot(ValueError):
    pass


class OrderTooLow(ValueError):
    pass


@dataclass(frozen=True)
class MonomialTerm:
    x_power: int
    d_power: int
    coefficient: Poly  # in the energy variable

    def __post_init__(self):
        if self.d_power not in (0, 1):
            raise ValueError("d_power must be 0 or 1")
        if not isinstance(self.coefficient, Poly):
            object.__setattr__(self, "coefficient", Poly((self.coefficient,)))
        if self.shift <= 0:
            raise ValueError("every term must raise the x-degree")

    @property
    def shift(self) -> int:
        return self.x_power - self.d_power

    def weight(self, m):
        return m if self.d_power else 1


@dataclass(frozen=True)
class EulerOperator:
    """``F(D) + sum(terms)``; ``f_of_d`` is F as a polynomial in D."""

    f_of_d: Poly
    terms: tuple[MonomialTerm, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not self.f_of_d:
            raise ValueError("F(D) must be nonzero")
        object.__setattr__(self, "terms", tuple(self.terms))

    @property
    def step(self) -> int:
        return reduce(math.gcd, (t.shift for t in self.terms), 0) or 1


@dataclass(frozen=True)
class XSeries:
    """Truncated series ``sum_k coeffs[k](E) * x**(indicial_root + step*k)``."""

    indicial_root: Fraction
    coeffs: tuple[Poly, ...]
    step: int = 2

    @property
    def truncation_order(self) -> int:
        return len(self.coeffs) - 1

    def exponent(self, k: int):
        return self.indicial_root + self.step * k

    @property
    def max_degree(self):
        return self.exponent(self.truncation_order)

    def _int_root(self) -> int:
        lam = self.indicial_root
        if lam.denominator != 1 or lam < 0:
            raise ValueError(f"series at x^{lam} is not a polynomial in x")
        return int(lam)

    def n_terms(self, degree: int | None) -> int:
        if degree is None:
            return len(self.coeffs)
        lam = self._int_root()
        if degree < lam:
            raise ValueError(f"degree {degree} below leading power {lam}")
        k = (degree - lam) // self.step
        if k > self.truncation_order:
            raise OrderTooLow(f"series has order {self.truncation_order}, need {k}")
        return k + 1

    def as_x_poly(self, degree: int | None = None) -> Poly:
        """Truncation as a polynomial in x with energy-polynomial coefficients."""
        lam = self._int_root()
        out = [Fraction(0)] * (lam + self.step * (self.n_terms(degree) - 1) + 1)
        for k in range(self.n_terms(degree)):
            out[lam + self.step * k] = self.coeffs[k]
        return Poly(out)

    def instantiate(self, E, degree: int | None = None) -> Poly:
        """Polynomial in x at a fixed energy (exact when ``E`` is rational)."""
        if isinstance(E, (int, float)):
            E = Fraction(E)
        lam = self._int_root()
        nk = self.n_terms(degree)
        out = [Fraction(0)] * (lam + self.step * (nk - 1) + 1)
        for k in range(nk):
            out[lam + self.step * k] = self.coeffs[k](E)
        return Poly(out)

    def coefficient_matrix(self, energies, degree: int | None = None) -> np.ndarray:
        """Float x-coefficients (lowest power first), one row per energy."""
        lam = self._int_root()
        E = np.atleast_1d(np.asarray(energies, dtype=float))
        nk = self.n_terms(degree)
        out = np.zeros((E.size, lam + self.step * (nk - 1) + 1))
        for k in range(nk):
            c = self.coeffs[k].to_float_array()
            out[:, lam + self.step * k] = np.polynomial.polynomial.polyval(E, c) if c.size else 0.0
        return out

    def labelled(self, k: int) -> Poly:
        """``coeffs[k]`` times ``(lam + step*k)!``: the factorial-normalized label."""
        return self.coeffs[k] * math.factorial(int(self.exponent(k)))


def indicial_roots(op: EulerOperator) -> list[Fraction]:
    F = op.f_of_d
    ivs = isolate_real_roots(F)
    if sum(iv.multiplicity_hint for iv in ivs) < F.degree:
        raise IrrationalIndicialRoot(f"F(D) = {F.format('D')} has non-real roots")
    out = []
    for iv in ivs:
        r = rational_root_in(F, iv)
        if r is None:
            raise IrrationalIndicialRoot(f"F(D) = {F.format('D')} has an irrational root")
        out.append(r)
    return out


def generate_series(op: EulerOperator, lam, order: int) -> XSeries:
    lam = to_rational(lam)
    F = op.f_of_d
    if F(lam):
        raise ValueError(f"{lam} is not an indicial root")
    if order < 0:
        raise ValueError("order must be nonnegative")
    s = op.step
    by_offset = [(t, t.shift // s) for t in op.terms]
    c: list[Poly] = [Poly((1,))]
    for k in range(1, order + 1):
        m = lam + s * k
        fm = F(m)
        if not fm:
            raise Resonance(k, m)
        acc = Poly()
        for t, j in by_offset:
            if j <= k:
                w = t.weight(m - t.shift)
                if w:
                    acc = acc + t.coefficient * c[k - j] * w
        c.append(acc * (-1 / fm))
    return XSeries(lam, tuple(c), s)


def termination_polynomial(series: XSeries, n: int) -> Poly:
    """Energy coefficient of the first power past ``x**n``."""
    k, r = divmod(n + series.step - series.indicial_root, series.step)
    if r or k < 1:
        raise ValueError(f"degree {n} is not in the x^{series.indicial_root} sector")
    k = int(k)
    if k > series.truncation_order:
        raise OrderTooLow(f"need order {k}, series has {series.truncation_order}")
    return series.coeffs[k]


def apply_operator(op: EulerOperator, u: Poly, E) -> Poly:
    """``(F(D) + P)|_E`` applied to the polynomial ``u`` in x.

    ``E`` can be a number or a Poly (symbolic energy), in which case the
    result has polynomial coefficients.
    """
    if not u:
        return Poly()
    top = u.degree + max((t.shift for t in op.terms), default=0)
    out = [Fraction(0)] * (top + 1)
    for m, um in enumerate(u.coeffs):
        if not um:
            continue
        out[m] = out[m] + op.f_of_d(m) * um
        for t in op.terms:
            w = t.weight(m)
            if w:
                out[m + t.shift] = out[m + t.shift] + t.coefficient(E) * um * w
    return Poly(out)
