"""Energy-as-variational-parameter estimates for non-terminating sectors.

The series of a sector is cut at a fixed degree, giving a polynomial
``u(x; E)``.  Its weighted residual

    Delta(E) = | integral psi0(x)^2 u(x; E) (H~ - E) u(x; E) dx |

is scanned over E.  Minima of ``Delta`` (including exact zeros of the
signed integral) are candidate eigenvalues; each is labelled by the number
of real zeros of ``u`` and kept or flagged using the exactly known levels
that bound it.

The integral is contracted against precomputed moments of ``psi0^2``, so
``Delta`` carries no quadrature noise.  :func:`quadrature_residual` is an
independent pointwise check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate

from .euler import EulerOperator, XSeries, apply_operator, generate_series
from .poly import Poly
from .qes import (
    Measure,
    QesModel,
    _params,
    count_nodes,
    derive_measure,
    euler_operator,
    qes_condition,
    solve_exact_spectrum,
)

__all__ = [
    "TruncatedState",
    "MomentTable",
    "Minimum",
    "DeltaCurve",
    "NodeCheck",
    "StateEstimate",
    "MomentOverflow",
    "EmptyWindow",
    "truncated_state",
    "build_moment_table",
    "signed_residual",
    "residual_inner_product",
    "residual_polynomial",
    "quadrature_residual",
    "scan_delta",
    "node_filter",
    "identify_states",
]

# Gamma(1/4), Gamma(1/2), Gamma(3/4) to 20 significant digits
GAMMA_QUARTER = 3.6256099082219083119
GAMMA_HALF = 1.7724538509055160273
GAMMA_THREE_QUARTERS = 1.2254167024651776451

ZERO_XTOL = 1e-14
MIN_XTOL = 1e-8
LEVEL_MATCH_TOL = 1e-6


class MomentOverflow(ValueError):
    pass


class EmptyWindow(ValueError):
    pass


@dataclass(frozen=True)
class TruncatedState:
    model: QesModel
    parity: str
    degree: int
    series: XSeries
    operator: EulerOperator
    measure: Measure
    shift: Fraction

    @property
    def half_line(self) -> bool:
        return self.measure.barrier


def truncated_state(model: QesModel, parity: str, degree: int) -> TruncatedState:
    """Cut the ``parity`` sector series of ``model`` at x-degree ``degree``."""
    if parity not in ("even", "odd"):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    lam = 0 if parity == "even" else 1
    if degree < lam or (degree - lam) % 2:
        raise ValueError(f"degree {degree} is inconsistent with {parity} parity")
    if model.has_barrier and lam:
        raise ValueError("the centrifugal model only has the x^0 polynomial sector")
    op = euler_operator(model)
    series = generate_series(op, lam, (degree - lam) // 2)
    return TruncatedState(
        model, parity, degree, series, op, derive_measure(model), _params(model).shift
    )


# ---------------------------------------------------------------------------
# Moments of psi0^2
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MomentTable:
    """``moments[m]`` is the integral of ``x^(2m+4l) psi0(x)^2``."""

    quadratic: float
    quartic: float
    l: float
    half_line: bool
    moments: tuple[float, ...]
    method: str

    @property
    def max_power(self) -> int:
        return 2 * (len(self.moments) - 1)

    def power(self, k: int) -> float:
        """Moment of ``x^k`` (times the ``x^(4l)`` factor)."""
        if k % 2:
            if self.half_line:
                raise ValueError("odd moments are not tabulated on the half line")
            return 0.0
        if k // 2 >= len(self.moments):
            raise MomentOverflow(f"x^{k} exceeds table capacity x^{self.max_power}")
        return self.moments[k // 2]

    def hankel(self, size: int) -> np.ndarray:
        """``H[i, j] = power(i + j)`` for ``i, j < size``."""
        if 2 * (size - 1) > self.max_power:
            raise MomentOverflow(f"need x^{2 * (size - 1)}, table has x^{self.max_power}")
        k = np.add.outer(np.arange(size), np.arange(size))
        vals = np.zeros(2 * size - 1)
        vals[::2] = self.moments[:size]
        return vals[k]


def _gamma_quarter_lattice(m: int) -> float:
    """Gamma((2m+1)/4) by upward recurrence from the embedded constants."""
    z = 0.25 if m % 2 == 0 else 0.75
    g = GAMMA_QUARTER if m % 2 == 0 else GAMMA_THREE_QUARTERS
    for _ in range(m // 2):
        g *= z
        z += 1.0
    return g


def _cutoff(c2: float, c4: float, power: float) -> float:
    L = 1.0
    while 2 * (c2 * L * L + c4 * L**4) - power * math.log(L) < 40.0:
        L *= 1.25
    return L


def build_moment_table(measure: Measure, max_degree: int) -> MomentTable:
    if not measure.quartic > 0:
        raise ValueError("measure must have a positive quartic exponent")
    c2, c4, l = measure.quadratic, measure.quartic, measure.l
    half = measure.barrier
    count = max_degree // 2 + 1
    if c2 == 0 and l == 0:
        kappa = 2 * c4
        mom = tuple(
            0.5 * kappa ** (-(2 * m + 1) / 4) * _gamma_quarter_lattice(m) * (0.5 if half else 1.0)
            for m in range(count)
        )
        return MomentTable(c2, c4, l, half, mom, "gamma")
    mom = []
    for m in range(count):
        p = 2 * m + 4 * l
        L = _cutoff(c2, c4, p)
        val, _ = integrate.quad(
            lambda x: x**p * math.exp(-2 * (c2 * x * x + c4 * x**4)),
            0.0, L, epsabs=0.0, epsrel=1e-13, limit=400,
        )
        mom.append(val if half else 2 * val)
    return MomentTable(c2, c4, l, half, tuple(mom), "quadrature")


# ---------------------------------------------------------------------------
# Residual
# ---------------------------------------------------------------------------


def _table_for(state: TruncatedState) -> MomentTable:
    return build_moment_table(state.measure, 2 * state.degree + 4)


def _residual_rows(state: TruncatedState, E: np.ndarray):
    """Float coefficients of u and of (H~ - E) u, one row per energy."""
    Et = E - float(state.shift)
    U = state.series.coefficient_matrix(Et)
    d = U.shape[1]
    F = state.operator.f_of_d
    out = np.zeros((E.size, d + 4))
    fvals = np.array([float(F(m)) for m in range(d)])
    out[:, :d] += U * fvals
    for t in state.operator.terms:
        cvals = np.polynomial.polynomial.polyval(Et, t.coefficient.to_float_array())
        w = np.array([float(t.weight(m)) for m in range(d)])
        out[:, t.shift:t.shift + d] += cvals[:, None] * U * w
    # Euler form is -x^2 (H~ - E)
    R = -out[:, 2:]
    return U, R


def signed_residual(state: TruncatedState, energies, normalize: bool = False,
                    table: MomentTable | None = None) -> np.ndarray:
    """Signed weighted residual <u, (H~ - E) u> for an array of energies."""
    E = np.atleast_1d(np.asarray(energies, dtype=float))
    table = table or _table_for(state)
    U, R = _residual_rows(state, E)
    size = R.shape[1]
    H = table.hankel(size)
    Up = np.zeros((E.size, size))
    Up[:, : U.shape[1]] = U
    val = np.einsum("ei,ij,ej->e", Up, H, R)
    if normalize:
        val = val / np.einsum("ei,ij,ej->e", Up, H, Up)
    return val


def residual_polynomial(state: TruncatedState, E) -> Poly:
    """Exact ``(H~ - E) u`` at a rational energy."""
    E = Fraction(E)
    u = state.series.instantiate(E - state.shift)
    euler = apply_operator(state.operator, u, E - state.shift)
    if euler.coeff(0) or euler.coeff(1):
        raise ArithmeticError("Euler form not divisible by x^2")
    return -Poly(euler.coeffs[2:])


def residual_inner_product(state: TruncatedState, E, normalize: bool = False,
                           table: MomentTable | None = None) -> float:
    """``Delta(E)``.

    A rational ``E`` takes the exact route: the residual polynomial is formed
    in exact arithmetic, so an exact eigenpair returns 0.0 exactly.
    """
    table = table or _table_for(state)
    if isinstance(E, (Fraction, int)):
        u = state.series.instantiate(Fraction(E) - state.shift)
        q = u * residual_polynomial(state, E)
        if not q:
            return 0.0
        val = math.fsum(float(c) * table.power(k) for k, c in enumerate(q.coeffs) if c)
        if normalize:
            uu = u * u
            val /= math.fsum(float(c) * table.power(k) for k, c in enumerate(uu.coeffs) if c)
        return abs(val)
    return float(abs(signed_residual(state, [E], normalize, table)[0]))


def quadrature_residual(state: TruncatedState, E: float, normalize: bool = False) -> float:
    """Signed residual by adaptive quadrature of the pointwise integrand.

    ``H~`` is applied here from the conjugation formula
    ``-u'' - 2 w' u' + (V - w'' - w'^2) u`` with ``w = log psi0``, independent
    of the Euler-form machinery used by :func:`signed_residual`.
    """
    m = state.model
    meas = state.measure
    c2, c4, l = meas.quadratic, meas.quartic, meas.l
    u = state.series.coefficient_matrix([E - float(state.shift)])[0]
    du = np.polynomial.polynomial.polyder(u)
    d2u = np.polynomial.polynomial.polyder(u, 2)
    pv = np.polynomial.polynomial.polyval

    def integrand(x):
        wp = -2 * c2 * x - 4 * c4 * x**3
        wpp = -2 * c2 - 12 * c4 * x**2
        if l:
            wp += 2 * l / x
            wpp -= 2 * l / x**2
        ux = pv(x, u)
        hu = -pv(x, d2u) - 2 * wp * pv(x, du) + (m.potential(x) - wpp - wp * wp - E) * ux
        return meas(x) ** 2 * ux * hu

    lo = 0.0 if meas.barrier else -np.inf
    val, _ = integrate.quad(integrand, lo, np.inf, epsabs=0.0, epsrel=1e-12, limit=400)
    if normalize:
        nn, _ = integrate.quad(lambda x: meas(x) ** 2 * pv(x, u) ** 2, lo, np.inf,
                               epsabs=0.0, epsrel=1e-12, limit=400)
        val /= nn
    return val


# ---------------------------------------------------------------------------
# Nodes and physicality
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NodeCheck:
    nodes: int
    passed: bool


def _rationalize(E: float) -> Fraction:
    return Fraction(round(E * 10**12), 10**12)


def node_filter(state: TruncatedState, E: float, expected_nodes: int | None = None) -> NodeCheck:
    """Count real zeros of ``u(.; E)`` exactly (E rounded to 1e-12)."""
    Eq = E if isinstance(E, Fraction) else _rationalize(E)
    u = state.series.instantiate(Eq - state.shift)
    n = count_nodes(u, state.half_line)
    return NodeCheck(n, expected_nodes is None or n == expected_nodes)


def _known_levels(model: QesModel) -> dict[int, float]:
    cond = qes_condition(model)
    if not cond.satisfied or model.n % 2:
        return {}
    return {e.node_count: e.energy for e in solve_exact_spectrum(model)}


def _is_physical(E: float, nodes: int, known: dict[int, float]) -> bool:
    if nodes in known:
        return abs(E - known[nodes]) <= LEVEL_MATCH_TOL * max(1.0, abs(E))
    below = [e for k, e in known.items() if k < nodes]
    above = [e for k, e in known.items() if k > nodes]
    return (not below or E > max(below)) and (not above or E < min(above))


# ---------------------------------------------------------------------------
# Scanning
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Minimum:
    E_star: float
    delta_star: float
    node_count: int
    physical: bool
    kind: str  # "zero" or "min"


@dataclass(frozen=True)
class DeltaCurve:
    energies: np.ndarray
    delta: np.ndarray
    signed: np.ndarray
    minima: tuple[Minimum, ...]
    parity: str
    degree: int
    normalized: bool

    @property
    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.energies.tolist(), self.delta.tolist()))

    def physical_minima(self) -> list[Minimum]:
        return [m for m in self.minima if m.physical]


def _bisect_zero(f, lo: float, hi: float, flo: float) -> float:
    while hi - lo > ZERO_XTOL * max(1.0, abs(lo)):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _golden(f, a: float, b: float, tol: float = MIN_XTOL) -> float:
    g = (math.sqrt(5) - 1) / 2
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def scan_delta(state: TruncatedState, window, step: float, normalize: bool = False,
               table: MomentTable | None = None) -> DeltaCurve:
    lo, hi = float(window[0]), float(window[1])
    if not lo < hi:
        raise EmptyWindow(f"empty energy window [{lo}, {hi}]")
    if not step > 0:
        raise ValueError("step must be positive")
    table = table or _table_for(state)
    n = int(round((hi - lo) / step)) + 1
    Es = np.linspace(lo, hi, max(n, 3))
    g = signed_residual(state, Es, normalize, table)
    a = np.abs(g)

    def fs(E):
        return float(signed_residual(state, [E], normalize, table)[0])

    raw: list[tuple[float, float, str]] = []
    near_zero = np.zeros(Es.size, dtype=bool)
    for i in range(Es.size):
        if g[i] == 0:
            raw.append((float(Es[i]), 0.0, "zero"))
            near_zero[max(i - 1, 0):i + 2] = True
        elif i + 1 < Es.size and g[i] * g[i + 1] < 0:
            raw.append((_bisect_zero(fs, float(Es[i]), float(Es[i + 1]), float(g[i])), 0.0, "zero"))
            near_zero[i:i + 2] = True
    for i in range(1, Es.size - 1):
        if a[i] < a[i - 1] and a[i] < a[i + 1] and not near_zero[i]:
            Em = _golden(lambda E: abs(fs(E)), float(Es[i - 1]), float(Es[i + 1]))
            raw.append((Em, abs(fs(Em)), "min"))
    raw.sort()

    known = _known_levels(state.model)
    cands = []
    for E, dval, kind in raw:
        nodes = node_filter(state, E).nodes
        cands.append([E, dval, nodes, _is_physical(E, nodes, known), kind])
    # one physical candidate per level: smaller Delta wins, then lower E
    best: dict[int, int] = {}
    for idx, c in enumerate(cands):
        if c[3] and (c[2] not in best or c[1] < cands[best[c[2]]][1]):
            best[c[2]] = idx
    minima = tuple(
        Minimum(E, dval, nodes, phys and best.get(nodes) == idx, kind)
        for idx, (E, dval, nodes, phys, kind) in enumerate(cands)
    )
    return DeltaCurve(Es, a, g, minima, state.parity, state.degree, normalize)


@dataclass(frozen=True)
class StateEstimate:
    level_index: int
    E_star: float
    delta_star: float
    physical: bool


def identify_states(model: QesModel, parity: str, degree: int, window, step: float,
                    normalize: bool = False) -> list[StateEstimate]:
    """All Delta minima in ``window`` labelled by node count, ordered by E."""
    curve = scan_delta(truncated_state(model, parity, degree), window, step, normalize)
    return [StateEstimate(m.node_count, m.E_star, m.delta_star, m.physical) for m in curve.minima]
