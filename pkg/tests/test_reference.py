import numpy as np
import pytest
from scipy.linalg import eigh_tridiagonal

from qesvar.qes import QesModel
from qesvar.reference import (
    ConvergenceFailure,
    GridMismatch,
    ReferenceSpectrum,
    count_sign_changes,
    discretize,
    eigenvalues_bisect,
    inverse_iteration,
    reference_spectrum,
    richardson_refine,
    sturm_counts,
)


def harmonic(x):
    return x * x


def test_harmonic_levels():
    raw = reference_spectrum(harmonic, 3, L=10, N=4000, richardson=False)
    assert raw.eigenvalues == pytest.approx([1, 3, 5], abs=1e-3)
    ext = reference_spectrum(harmonic, 3, L=10, N=4000)
    assert ext.extrapolated
    assert abs(ext[0] - 1) < 1e-8
    assert abs(ext[0] - 1) < abs(raw[0] - 1)


def test_discretization_layout(double_well):
    sys = discretize(double_well, L=5, N=999)
    h = sys.h
    mid = sys.N // 2
    assert sys.grid[mid] == pytest.approx(0.0, abs=1e-14)
    assert sys.diagonal[mid] == pytest.approx(2 / h**2 + double_well.potential(0.0), rel=1e-15)
    assert sys.off_diagonal == pytest.approx(-1 / h**2)
    np.testing.assert_allclose(sys.diagonal, sys.diagonal[::-1], rtol=1e-12)
    lo, hi = sys.gershgorin()
    assert lo <= sys.diagonal.min() and hi >= sys.diagonal.max()


def test_free_particle_diagonal():
    sys = discretize(lambda x: np.zeros_like(x), L=1, N=101)
    assert np.all(sys.diagonal == 2 / sys.h**2)


def test_bisection_matches_lapack(double_well):
    sys = discretize(double_well, L=5, N=800)
    ours = eigenvalues_bisect(sys, 12, 1e-11).eigenvalues
    theirs = eigh_tridiagonal(sys.diagonal, np.full(sys.N - 1, sys.off_diagonal),
                              eigvals_only=True, select="i", select_range=(0, 11))
    np.testing.assert_allclose(ours, theirs, atol=1e-9)


def test_levels_are_simple(double_well):
    sys = discretize(double_well, L=5, N=1000)
    ev = eigenvalues_bisect(sys, 10).eigenvalues
    gaps = np.diff(ev)
    assert np.all(gaps > 0)
    lo = sturm_counts(sys, ev - gaps.min() / 4)
    hi = sturm_counts(sys, ev + gaps.min() / 4)
    assert np.all(hi - lo == 1)
    assert np.array_equal(lo, np.arange(10))


def test_convergence_is_monotone(double_well):
    errs = []
    exact = -8.0
    for N in (500, 1001, 2003):
        e0 = eigenvalues_bisect(discretize(double_well, 5, N), 1).eigenvalues[0]
        assert e0 < exact  # raw levels approach from below
        errs.append(abs(e0 - exact))
    assert errs[0] > errs[1] > errs[2]
    # second-order: halving h divides the error by about 4
    assert errs[1] / errs[2] == pytest.approx(4, rel=0.05)


def test_box_size_insensitive(double_well):
    a = eigenvalues_bisect(discretize(double_well, 5.0, 3999), 8).eigenvalues
    b = eigenvalues_bisect(discretize(double_well, 6.0, 4799), 8).eigenvalues
    np.testing.assert_allclose(a, b, atol=1e-9)


def test_node_labels(double_well):
    sys = discretize(double_well, 5, 2000)
    ev = eigenvalues_bisect(sys, 6).eigenvalues
    for k, E in enumerate(ev):
        assert count_sign_changes(inverse_iteration(sys, E)) == k


def test_exact_levels_recovered(double_well, ref_spectrum):
    for k, E in ((0, -8.0), (2, 0.0), (4, 8.0)):
        assert ref_spectrum[k] == pytest.approx(E, abs=1e-7)
    assert len(ref_spectrum) == 20


def test_richardson_guards():
    a = ReferenceSpectrum(np.array([1.0, 2.0]), 5.0, 100)
    same = richardson_refine(a, a)
    assert np.array_equal(same.eigenvalues, a.eigenvalues) and not same.extrapolated
    with pytest.raises(GridMismatch):
        richardson_refine(a, ReferenceSpectrum(np.array([1.0, 2.0]), 5.0, 150))
    with pytest.raises(GridMismatch):
        richardson_refine(a, ReferenceSpectrum(np.array([1.0, 2.0]), 6.0, 201))


def test_bad_arguments(double_well):
    sys = discretize(double_well, 5, 50)
    with pytest.raises(ValueError):
        eigenvalues_bisect(sys, 0)
    with pytest.raises(ValueError):
        eigenvalues_bisect(sys, 51)
    with pytest.raises(ValueError):
        discretize(double_well, -1, 50)
    with pytest.raises(ConvergenceFailure):
        eigenvalues_bisect(sys, 2, tol=1e-300)


def test_other_model():
    m = QesModel(alpha=-13.75, beta=-2.0, gamma=4.0, n=2)
    ref = reference_spectrum(m, 4, L=4, N=1500)
    from qesvar.qes import solve_exact_spectrum
    exact = solve_exact_spectrum(m).energies
    assert ref[0] == pytest.approx(exact[0], abs=1e-6)
    assert ref[2] == pytest.approx(exact[1], abs=1e-6)


def test_published_levels(ref_spectrum):
    assert ref_spectrum[1] == pytest.approx(-7.917350, abs=1e-4)
    assert ref_spectrum[6] == pytest.approx(21.1575028, abs=1e-3)
    assert ref_spectrum[19] == pytest.approx(167.1841151, abs=1e-3)
    assert np.all(np.diff(ref_spectrum.eigenvalues) > 0)
