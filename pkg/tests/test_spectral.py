from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st

from conftest import complete_graph, cycle_graph
from surplab.generators import GraphSpec, generate
from surplab.spectral import (
    ConvergenceError,
    adjacency_spectrum,
    eigendecompose,
    hadamard,
    power_sums,
    principal_vector_check,
    psd_check,
    spectrum_symmetry_gap,
    weyl_check,
)


def gnp(n: int, p: float, seed: int):
    return generate(GraphSpec("gnp", {"n": n, "p": p}, seed))


def test_complete_graph_spectrum():
    dec = adjacency_spectrum(complete_graph(6))
    assert dec.eigenvalues[0] == pytest.approx(5.0)
    assert np.allclose(dec.eigenvalues[1:], -1.0)
    assert len(dec.negative_indices()) == 5


def test_eigenvalues_descending_and_reconstruct():
    G = gnp(15, 0.4, 3)
    dec = adjacency_spectrum(G)
    assert np.all(np.diff(dec.eigenvalues) <= 1e-12)
    assert np.allclose(dec.reconstruct(), G.adjacency, atol=1e-8)
    assert dec.max_residual <= dec.residual_tol


def test_jacobi_matches_lapack():
    a = gnp(20, 0.5, 11).adjacency
    jac = eigendecompose(a, solver="jacobi")
    lap = eigendecompose(a, solver="lapack")
    assert np.allclose(jac.eigenvalues, lap.eigenvalues, atol=1e-8)


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        eigendecompose(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        eigendecompose(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        eigendecompose(np.eye(2), solver="qr")


def test_sweep_cap_raises_convergence_error():
    a = np.array([[2.0, 1.0], [1.0, 2.0]])
    with pytest.raises(ConvergenceError) as info:
        eigendecompose(a, max_sweeps=0)
    assert info.value.best_residual == pytest.approx(1.0)


def test_empty_matrix():
    dec = eigendecompose(np.zeros((0, 0)))
    assert dec.n == 0


@hsettings(max_examples=30, deadline=None)
@given(st.integers(min_value=1, max_value=18), st.floats(min_value=0.0, max_value=1.0), st.integers(0, 2**32))
def test_power_sum_identities(n, p, seed):
    G = gnp(n, p, seed)
    ps = power_sums(adjacency_spectrum(G), G)
    assert ps.frobenius_residual <= 1e-5 * max(1.0, 2 * G.m) + 1e-6


def test_psd_check():
    v = np.arange(1.0, 5.0)
    assert psd_check(np.outer(v, v)).psd
    verdict = psd_check(np.diag([1.0, -1.0]))
    assert not verdict.psd
    assert verdict.min_eigenvalue == pytest.approx(-1.0)


def test_hadamard_of_psd_is_psd():
    rng = np.random.default_rng(0)
    X = rng.standard_normal((6, 3))
    Y = rng.standard_normal((6, 2))
    assert psd_check(hadamard([X @ X.T, Y @ Y.T])).psd
    with pytest.raises(ValueError):
        hadamard([np.eye(2), np.eye(3)])
    with pytest.raises(ValueError):
        hadamard([])


@hsettings(max_examples=25, deadline=None)
@given(st.integers(min_value=2, max_value=16), st.floats(min_value=0.0, max_value=1.0), st.integers(0, 2**32))
def test_weyl_interlacing(n, p, seed):
    assert weyl_check(gnp(n, p, seed)).ok


def test_weyl_needs_two_vertices():
    with pytest.raises(ValueError):
        weyl_check(complete_graph(1))


def test_bipartite_spectrum_is_symmetric():
    assert spectrum_symmetry_gap(adjacency_spectrum(cycle_graph(6))) < 1e-8
    assert spectrum_symmetry_gap(adjacency_spectrum(complete_graph(3))) > 1.0


def test_principal_vector_bounds_on_near_clique():
    G = generate(GraphSpec("clique_minus_matching", {"n": 12}, 0))
    report = principal_vector_check(G)
    assert report.applicable
    assert report.violations == ()
    assert not principal_vector_check(cycle_graph(8)).applicable
