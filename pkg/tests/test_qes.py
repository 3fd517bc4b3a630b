import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qesvar.poly import Poly, isolate_real_roots, refine_root
from qesvar.qes import (
    CentrifugalParams,
    ConditionViolated,
    OddSectorUnavailable,
    QesModel,
    UnsupportedModel,
    assemble_wavefunction,
    centrifugal_params,
    derive_measure,
    energy_shift,
    printed_formula_checks,
    qes_condition,
    solve_exact_spectrum,
)


def test_derive_measure_examples(double_well):
    m = derive_measure(double_well)
    assert (m.a, m.b, m.l) == (0.0, 0.25, 0.0)
    m2 = derive_measure(QesModel(alpha=0.0, beta=4.0, gamma=4.0))
    assert (m2.a, m2.b) == (0.5, 0.5)
    assert derive_measure(QesModel(alpha=1.0, beta=2.0, gamma=3.0)).l == 0.0
    with pytest.raises(UnsupportedModel):
        derive_measure(QesModel(alpha=-1.0, beta=1.0, gamma=1.0, sigma=1.0))


def test_barrier_measure():
    m = QesModel.from_centrifugal(1.5, 1.0, 4.0, 2)
    meas = derive_measure(m)
    assert meas.a == 2.0
    assert meas.l == pytest.approx(0.25 + 0.5 * math.sqrt(0.25 + m.sigma), abs=1e-14)
    assert (meas.quadratic, meas.quartic) == (0.0, 0.5)


@pytest.mark.parametrize(
    "alpha, implied, ok",
    [(-11.0, 4.0, True), (-7.0, 2.0, True), (0.0, -1.5, False)],
)
def test_qes_condition_examples(alpha, implied, ok):
    m = QesModel(alpha=alpha, n=4 if alpha == -11 else (2 if alpha == -7 else 0))
    c = qes_condition(m)
    assert c.implied_n == pytest.approx(implied, abs=1e-14)
    assert c.satisfied is ok


def test_exact_spectrum_double_well(double_well):
    spec = solve_exact_spectrum(double_well)
    assert [e.energy_exact for e in spec] == [-8, 0, 8]
    assert [e.polynomial for e in spec] == [
        Poly((1, 0, 4, 0, 2)),
        Poly((1, 0, 0, 0, Fraction(-2, 3))),
        Poly((1, 0, -4, 0, 2)),
    ]
    assert [e.node_count for e in spec] == [0, 2, 4]
    assert all(e.polynomial.degree == 4 for e in spec)


def test_exact_spectrum_n2():
    spec = solve_exact_spectrum(QesModel(alpha=-7.0, n=2))
    # beta = 0: E = +-(8 sqrt(gamma))^(1/2)
    assert spec.energies == pytest.approx([-math.sqrt(8), math.sqrt(8)], abs=1e-13)


def test_exact_spectrum_barrier_n2():
    m = QesModel.from_centrifugal(1.5, 1.0, 1.0, 2)
    spec = solve_exact_spectrum(m)
    a, s = 1.0, 1.5
    assert spec.energies == pytest.approx([-math.sqrt(32 * a * s), math.sqrt(32 * a * s)], abs=1e-12)
    for e in spec:
        c = e.polynomial.to_float_array()
        # proportional to a x^2 - E/4
        assert c[2] / c[0] == pytest.approx(a / (-e.energy / 4), rel=1e-10)


def test_exact_spectrum_errors(double_well):
    with pytest.raises(ConditionViolated) as info:
        solve_exact_spectrum(QesModel(alpha=-10.0, n=4))
    assert info.value.implied_n == pytest.approx(3.5)
    with pytest.raises(OddSectorUnavailable):
        solve_exact_spectrum(double_well, sector=1)
    with pytest.raises(ConditionViolated):
        solve_exact_spectrum(QesModel(alpha=-9.0, n=3))


def test_ground_state_only_for_n0():
    spec = solve_exact_spectrum(QesModel(alpha=-3.0, n=0))
    assert len(spec) == 1 and spec.entries[0].energy == 0.0


@pytest.mark.parametrize("idx, nodes", [(0, 0), (1, 2), (2, 4)])
def test_wavefunction_nodes(double_well, idx, nodes):
    entry = solve_exact_spectrum(double_well).entries[idx]
    psi = assemble_wavefunction(double_well, entry)
    xs = np.linspace(-4, 4, 80001)
    v = psi(xs)
    assert np.count_nonzero(np.diff(np.sign(v)) != 0) == nodes
    if idx == 0:
        assert psi(0.0) == 1.0


def test_wavefunction_normalization(double_well):
    psi = assemble_wavefunction(double_well, solve_exact_spectrum(double_well).entries[0])
    # P^2 = 1 + 8x^2 + 20x^4 + 16x^6 + 4x^8 against exp(-x^4/2): closed-form moments
    mom = lambda k: 2 ** ((k + 1) / 4 - 1) * math.gamma((k + 1) / 4)
    expect = sum(c * mom(k) for k, c in zip((0, 2, 4, 6, 8), (1, 8, 20, 16, 4)))
    assert psi.norm_squared() == pytest.approx(expect, rel=1e-10)


def _fd_hamiltonian_residual(model, psi, E, xs, h=1e-4):
    d2 = (psi(xs + h) - 2 * psi(xs) + psi(xs - h)) / h**2
    hpsi = -d2 + model.potential(xs) * psi(xs)
    return np.max(np.abs(hpsi - E * psi(xs))) / (np.max(np.abs(psi(xs))) * max(1.0, abs(E)))


@pytest.mark.parametrize(
    "model",
    [
        QesModel.double_well(),
        QesModel(alpha=-7.0, n=2),
        QesModel(alpha=-6.75, beta=1.0, n=2),
        QesModel(alpha=-13.75, beta=-2.0, gamma=4.0, n=2),
    ],
)
def test_similarity_consistency(model):
    assert qes_condition(model).satisfied
    xs = np.linspace(-3, 3, 121)
    for e in solve_exact_spectrum(model):
        psi = assemble_wavefunction(model, e)
        assert _fd_hamiltonian_residual(model, psi, e.energy, xs) <= 1e-5


def test_similarity_consistency_barrier():
    m = QesModel.from_centrifugal(1.5, 1.0, 1.0, 2)
    xs = np.linspace(0.2, 3, 100)
    for e in solve_exact_spectrum(m):
        psi = assemble_wavefunction(m, e)
        assert _fd_hamiltonian_residual(m, psi, e.energy, xs) <= 1e-5


@settings(max_examples=25, deadline=None)
@given(
    st.integers(-6, 6).map(lambda k: k / 2),
    st.sampled_from([1.0, 4.0, 0.25]),
    st.sampled_from([0, 2, 4]),
)
def test_shift_covariance(beta, gamma, n):
    sg = math.sqrt(gamma)
    alpha = beta * beta / (4 * gamma) - (2 * n + 3) * sg
    m = QesModel(alpha=alpha, beta=beta, gamma=gamma, n=n)
    spec = solve_exact_spectrum(m)
    shifted = [float(e.energy_exact - Fraction(repr(beta)) / (2 * Fraction(repr(sg))))
               if e.energy_exact is not None else e.energy - energy_shift(m) for e in spec]
    Q = spec.termination
    roots = [refine_root(Q, iv, 1e-14) for iv in isolate_real_roots(Q)]
    assert shifted == pytest.approx(roots, abs=1e-12)
    assert [r + beta / (2 * sg) for r in roots] == pytest.approx(spec.energies, abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.76, 5.0), st.floats(-3.0, 3.0), st.sampled_from([1.0, 2.0, 9.0]))
def test_centrifugal_round_trip(s, mu, gamma):
    alpha, sigma = CentrifugalParams(s, mu).couplings(gamma)
    back = centrifugal_params(QesModel(alpha=alpha, gamma=gamma, sigma=sigma))
    assert back.s == pytest.approx(s, abs=1e-12)
    assert back.mu == pytest.approx(mu, abs=1e-12)


def test_printed_formula_log_surfaces_discrepancies():
    recs = {r.check: r for r in printed_formula_checks(QesModel(alpha=-7.0, n=2))}
    assert recs["n2_energies"].agree
    assert recs["n2_termination_polynomial"].agree
    assert not recs["n2_polynomials_x2_coefficient"].agree
    recs = {r.check: r for r in printed_formula_checks(QesModel.from_centrifugal(1.5, 1.0, 1.0, 2))}
    assert recs["barrier_n2_energies"].agree
    assert not recs["barrier_condition_sign"].agree
    assert recs["barrier_mu_equals_half_n"].agree
