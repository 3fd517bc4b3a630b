"""Exact univariate polynomials over the rationals.

Coefficients are stored lowest power first and are either
:class:`fractions.Fraction` values or, for polynomials whose coefficients are
themselves polynomials (an x-series whose coefficients depend on the energy),
nested :class:`Poly` instances.  Ring operations work for both; division,
gcd and Sturm sequences require a field and therefore Fraction coefficients.

Real-root tools (:func:`sturm_count`, :func:`isolate_real_roots`,
:func:`refine_root`) run entirely in exact arithmetic and only convert to
float when returning a refined root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

import numpy as np

Rational = Fraction

__all__ = [
    "Rational",
    "Poly",
    "RootInterval",
    "ZeroPolynomial",
    "NoSignChange",
    "to_rational",
    "poly_arith",
    "poly_derivative",
    "sturm_sequence",
    "sturm_count",
    "isolate_real_roots",
    "refine_root",
    "rational_root_in",
    "cauchy_bound",
]


class ZeroPolynomial(ValueError):
    """Raised when an operation needs a nonzero polynomial."""


class NoSignChange(ValueError):
    """Raised when a refinement interval does not bracket a root."""


def to_rational(value) -> Fraction:
    """Convert ints, Fractions and floats to an exact Fraction.

    Floats are converted through their shortest decimal repr, so ``0.1``
    becomes ``1/10`` rather than the binary expansion.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            raise ValueError(f"cannot rationalize {value!r}")
        return Fraction(repr(float(value)))
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot convert {type(value).__name__} to Fraction")


def _coerce(c):
    if isinstance(c, Poly):
        return c
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, np.integer)):
        return Fraction(int(c))
    if isinstance(c, (float, np.floating)):
        # exact binary value; callers wanting decimal intent use to_rational
        return Fraction(float(c))
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


class Poly:
    """Immutable polynomial in one variable, lowest power first.

    The zero polynomial has an empty coefficient tuple and degree ``-inf``.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "_c", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors -------------------------------------------------
    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def monomial(cls, power: int, c=1) -> "Poly":
        return cls([0] * power + [c])

    # -- basic properties ---------------------------------------------
    @property
    def coeffs(self) -> tuple:
        return self._c

    @property
    def degree(self):
        return len(self._c) - 1 if self._c else -math.inf

    @property
    def leading(self):
        if not self._c:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self._c[-1]

    def coeff(self, k: int):
        return self._c[k] if 0 <= k < len(self._c) else Fraction(0)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def __len__(self) -> int:
        return len(self._c)

    def __iter__(self):
        return iter(self._c)

    # -- arithmetic -------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, Poly):
            return other
        return Poly((other,))

    def __add__(self, other):
        if not isinstance(other, (Poly, int, Fraction, float, np.integer, np.floating)):
            return NotImplemented
        o = self._lift(other)
        n = max(len(self._c), len(o._c))
        return Poly(self.coeff(k) + o.coeff(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self._c)

    def __sub__(self, other):
        if not isinstance(other, (Poly, int, Fraction, float, np.integer, np.floating)):
            return NotImplemented
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, Poly):
            if not self._c or not other._c:
                return Poly()
            out = [Fraction(0)] * (len(self._c) + len(other._c) - 1)
            for i, a in enumerate(self._c):
                if not a:
                    continue
                for j, b in enumerate(other._c):
                    if b:
                        out[i + j] = out[i + j] + a * b
            return Poly(out)
        if isinstance(other, (int, Fraction, float, np.integer, np.floating)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        # scalar * poly; nested coefficients may be Poly on the left
        if isinstance(other, Poly):
            return other.__mul__(self)
        return self.__mul__(other)

    def scale(self, c) -> "Poly":
        c = _coerce(c)
        return Poly(c * a for a in self._c)

    def __truediv__(self, c):
        if isinstance(c, Poly):
            return NotImplemented
        c = _coerce(c)
        return Poly(a / c for a in self._c)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out, base = Poly((1,)), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self._c == other._c
        if isinstance(other, (int, Fraction, float)):
            return self._c == Poly((other,))._c
        return NotImplemented

    def __hash__(self):
        return hash(self._c)

    def __call__(self, x):
        """Horner evaluation; ``x`` may be a number, array or Poly."""
        acc = 0
        for c in reversed(self._c):
            acc = acc * x + c
        if isinstance(acc, int) and not isinstance(x, Poly):
            return Fraction(acc) if isinstance(x, (int, Fraction)) else float(acc)
        return acc

    def derivative(self) -> "Poly":
        return Poly(k * self._c[k] for k in range(1, len(self._c)))

    def map_coeffs(self, fn) -> "Poly":
        return Poly(fn(c) for c in self._c)

    def to_float_array(self) -> np.ndarray:
        """Coefficients as a float64 array (lowest power first)."""
        return np.array([float(c) for c in self._c], dtype=float)

    # -- field operations -------------------------------------------------
    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self._c)
        dq = len(r) - len(other._c)
        if dq < 0:
            return Poly(), self
        q = [Fraction(0)] * (dq + 1)
        lead = other._c[-1]
        for k in range(dq, -1, -1):
            t = r[k + len(other._c) - 1] / lead
            q[k] = t
            if t:
                for j, b in enumerate(other._c):
                    r[k + j] -= t * b
        return Poly(q), Poly(r[: len(other._c) - 1])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> "Poly":
        return self / self.leading

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while b:
            a, b = b, a % b
        return a.monic() if a else a

    def squarefree(self) -> "Poly":
        """Product of the distinct irreducible factors (same real roots)."""
        if not self:
            raise ZeroPolynomial("squarefree part of zero polynomial")
        g = self.gcd(self.derivative())
        return self // g if g.degree > 0 else self

    # -- printing -----------------------------------------------------------
    def __repr__(self):
        return f"Poly({[str(c) for c in self._c]})"

    def format(self, var: str = "x") -> str:
        if not self._c:
            return "0"
        parts = []
        for k, c in enumerate(self._c):
            if not c:
                continue
            cs = f"({c.format('E')})" if isinstance(c, Poly) else str(c)
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            if mono and cs == "1":
                parts.append(mono)
            elif mono and cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(cs + ("*" + mono if mono else ""))
        return " + ".join(parts).replace("+ -", "- ")

    __str__ = format


def poly_arith(p: Poly, q, op: str) -> Poly:
    """Dispatch ``add``, ``sub``, ``mul`` or ``scale`` (q a scalar for scale)."""
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op == "scale":
        return p.scale(q)
    raise ValueError(f"unknown op {op!r}")


def poly_derivative(p: Poly) -> Poly:
    return p.derivative()


# ---------------------------------------------------------------------------
# Real roots
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RootInterval:
    """Open interval (lo, hi) holding exactly one distinct real root."""

    lo: Fraction
    hi: Fraction
    multiplicity_hint: int = 1

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("RootInterval needs lo < hi")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo < x < self.hi


def cauchy_bound(p: Poly) -> Fraction:
    """All real roots of ``p`` lie strictly inside (-B, B)."""
    if not p:
        raise ZeroPolynomial("Cauchy bound of zero polynomial")
    lead = abs(p.leading)
    return 1 + max((abs(c) / lead for c in p.coeffs[:-1]), default=Fraction(0))


def sturm_sequence(p: Poly) -> list[Poly]:
    if not p:
        raise ZeroPolynomial("Sturm sequence of zero polynomial")
    seq = [p, p.derivative()]
    while seq[-1]:
        r = seq[-2] % seq[-1]
        if not r:
            break
        seq.append(-r)
    if not seq[-1]:
        seq.pop()
    return seq


def _variations(seq: Sequence[Poly], x) -> int:
    signs = [s for s in (_sign(q(x)) for q in seq) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _deflate_at(p: Poly, r: Fraction) -> Poly:
    lin = Poly((-r, 1))
    while p.degree > 0 and not p(r):
        p = p // lin
    return p


def sturm_count(p: Poly, lo, hi, seq: Sequence[Poly] | None = None) -> int:
    """Number of distinct real roots of ``p`` in the open interval (lo, hi).

    An endpoint that is itself a root is divided out of ``p`` first
    (exact deflation), which leaves the open-interval count unchanged.
    """
    if not p:
        raise ZeroPolynomial("cannot count roots of the zero polynomial")
    lo, hi = to_rational(lo), to_rational(hi)
    if lo >= hi:
        return 0
    if not p(lo) or not p(hi):
        p = _deflate_at(_deflate_at(p, lo), hi)
        seq = None
    if p.degree < 1:
        return 0
    if seq is None:
        seq = sturm_sequence(p)
    return _variations(seq, lo) - _variations(seq, hi)


def _multiplicity(p: Poly, iv: RootInterval) -> int:
    m = 1
    g = p.gcd(p.derivative())
    while g.degree > 0 and sturm_count(g, iv.lo, iv.hi) > 0:
        m += 1
        g = g.gcd(g.derivative())
    return m


def isolate_real_roots(p: Poly) -> list[RootInterval]:
    """Disjoint open intervals, one per distinct real root, sorted ascending."""
    if not p:
        raise ZeroPolynomial("cannot isolate roots of the zero polynomial")
    if p.degree < 1:
        return []
    q = p.squarefree()
    seq = sturm_sequence(q)
    B = cauchy_bound(q)
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(-B, B, sturm_count(q, -B, B, seq))]
    while stack:
        lo, hi, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if not q(mid):
            w = (hi - lo) / 4
            while not q(mid - w) or not q(mid + w) or sturm_count(q, mid - w, mid + w, seq) != 1:
                w /= 2
            out.append((mid - w, mid + w))
            stack.append((lo, mid - w, sturm_count(q, lo, mid - w)))
            stack.append((mid + w, hi, sturm_count(q, mid + w, hi)))
        else:
            stack.append((lo, mid, sturm_count(q, lo, mid, seq)))
            stack.append((mid, hi, sturm_count(q, mid, hi, seq)))
    out.sort()
    return [RootInterval(lo, hi, _multiplicity(p, RootInterval(lo, hi))) for lo, hi in out]


def refine_root(p: Poly, iv: RootInterval, tol: float = 1e-12) -> float:
    """Bisect the squarefree part of ``p`` on ``iv`` down to width ``tol``.

    A single Newton step polishes the midpoint when the derivative there
    exceeds 1e-6 in magnitude and the step stays inside the bracket.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    q = p.squarefree()
    lo, hi = iv.lo, iv.hi
    flo, fhi = _sign(q(lo)), _sign(q(hi))
    if flo == 0:
        return float(lo)
    if fhi == 0:
        return float(hi)
    if flo == fhi:
        raise NoSignChange(f"no sign change on ({float(lo)}, {float(hi)})")
    tol_q = to_rational(tol)
    while hi - lo > tol_q:
        mid = (lo + hi) / 2
        fm = _sign(q(mid))
        if fm == 0:
            return float(mid)
        if fm == flo:
            lo = mid
        else:
            hi = mid
    mid = (lo + hi) / 2
    dq = float(q.derivative()(mid))
    if abs(dq) > 1e-6:
        polished = float(mid) - float(q(mid)) / dq
        if float(lo) <= polished <= float(hi):
            return polished
    return float(mid)


def rational_root_in(p: Poly, iv: RootInterval) -> Fraction | None:
    """Return the root in ``iv`` if it is rational, else None.

    A rational root a/b of the integer-cleared primitive polynomial has b
    dividing the leading coefficient D.  Two distinct fractions with
    denominators at most D differ by at least 1/D**2, so once the bracket
    is narrower than that, ``limit_denominator(D)`` names the only
    candidate, which is then checked exactly.
    """
    q = p.squarefree()
    den = math.lcm(*(c.denominator for c in q.coeffs))
    ints = [int(c * den) for c in q.coeffs]
    g = math.gcd(*ints)
    D = abs(ints[-1] // g)
    lo, hi = iv.lo, iv.hi
    flo = _sign(q(lo))
    if flo == 0:
        return lo
    if not q(hi):
        return hi
    target = Fraction(1, 2 * D * D)
    while hi - lo > target:
        mid = (lo + hi) / 2
        fm = _sign(q(mid))
        if fm == 0:
            return mid
        if fm == flo:
            lo = mid
        else:
            hi = mid
    cand = ((lo + hi) / 2).limit_denominator(D)
    if iv.lo < cand < iv.hi and not q(cand):
        return cand
    return None
