import numpy as np
import pytest

from fracform import (DirichletForm, ReducibleForm, assemble_level1,
                      effective_conductivity, effective_conductivity_level1, energy,
                      harmonic_extension, is_irreducible, renormalize)
from fracform.renorm import level1_pinned_minimizer

from conftest import random_form, random_weights


def cell_sum_energy(T, E, r, v):
    """Level-1 energy straight from its definition as a weighted sum over cells."""
    return sum(ri * energy(E, v[cell]) for ri, cell in zip(r, T.cell_array))


def brute_force_trace(T, E, r):
    """Trace onto the boundary by minimizing the cell-sum energy directly.

    The energy is quadratic in the interior values, so its Hessian and
    gradient are recovered exactly from point evaluations."""
    n, n1 = T.n_boundary, T.n_level1
    m = n1 - n

    def S(u, x):
        return cell_sum_energy(T, E, r, np.concatenate([u, x]))

    def minimum(u):
        f0 = S(u, np.zeros(m))
        eye = np.eye(m)
        lin = np.array([S(u, e) - S(u, -e) for e in eye]) / 2
        diag = np.array([S(u, e) + S(u, -e) - 2 * f0 for e in eye]) / 2
        H = np.diag(diag)
        for a in range(m):
            for b in range(a + 1, m):
                H[a, b] = H[b, a] = (S(u, eye[a] + eye[b]) - f0 - lin[a] - lin[b]
                                     - diag[a] - diag[b]) / 2
        x = np.linalg.solve(2 * H, -lin)
        return x, S(u, x)

    # off-diagonal of the traced quadratic form by polarization
    q = lambda w: minimum(w)[1]  # noqa: E731
    eye = np.eye(n)
    C = np.zeros((n, n))
    for a in range(n):
        for b in range(a + 1, n):
            C[a, b] = C[b, a] = -(q(eye[a] + eye[b]) - q(eye[a]) - q(eye[b])) / 2
    return C, minimum


def test_assembly_equals_cell_sum(gaskets, ring):
    rng = np.random.default_rng(0)
    for T in list(gaskets.values()) + [ring]:
        E = random_form(rng, T.n_boundary)
        r = random_weights(rng, T.n_cells)
        L1 = assemble_level1(T, E, r)
        for _ in range(5):
            v = rng.normal(size=T.n_level1)
            assert L1.energy(v) == pytest.approx(cell_sum_energy(T, E, r, v), rel=1e-12)
        assert assemble_level1(T, E, 2 * r).energy(v) == pytest.approx(2 * L1.energy(v))


def test_gasket3_indicator_energy(gaskets):
    T, E = gaskets[3], DirichletForm.unit(3)
    v = np.zeros(6)
    v[0] = 1.0
    # only cell 1 sees P_1: two unit edges with difference one
    assert assemble_level1(T, E, np.ones(3)).energy(v) == 2.0


def test_ring_support_stays_inside_cells(ring):
    L1 = assemble_level1(ring, DirichletForm.unit(20), np.ones(20))
    cell_sets = [set(c) for c in ring.cell_array]
    for a, b in L1.edges():
        assert any(a in s and b in s for s in cell_sets)
    assert len(L1.edges()) == 20 * 190


def test_harmonic_extension_gasket3(gaskets):
    T = gaskets[3]
    v = harmonic_extension(T, DirichletForm.unit(3), np.ones(3), [1.0, 0.0, 0.0])
    _, minimum = brute_force_trace(T, DirichletForm.unit(3), np.ones(3))
    x, _ = minimum(np.array([1.0, 0.0, 0.0]))
    np.testing.assert_allclose(x, [0.4, 0.4, 0.2], atol=1e-12)
    np.testing.assert_allclose(v[3:], x, atol=1e-12)


def test_harmonic_extension_constant_and_minimal(ring):
    rng = np.random.default_rng(1)
    E, r = random_form(rng, 20), random_weights(rng, 20)
    v = harmonic_extension(ring, E, r, np.full(20, 2.5))
    np.testing.assert_allclose(v, 2.5, rtol=1e-12)
    u = rng.normal(size=20)
    v = harmonic_extension(ring, E, r, u)
    L1 = assemble_level1(ring, E, r)
    base = L1.energy(v)
    for _ in range(100):
        w = v + 0.1 * rng.normal(size=380)
        w[:20] = u
        assert L1.energy(w) >= base


def test_renormalize_goldens(gaskets):
    F = renormalize(gaskets[2], DirichletForm.unit(2), np.ones(2))
    assert F.coefficients[0] == pytest.approx(0.5, abs=1e-15)
    C, _ = brute_force_trace(gaskets[3], DirichletForm.unit(3), np.ones(3))
    assert C[np.triu_indices(3, 1)] == pytest.approx([0.6] * 3, abs=1e-12)
    F = renormalize(gaskets[3], DirichletForm.unit(3), np.ones(3))
    np.testing.assert_allclose(F.coefficients, 0.6, rtol=1e-12)


def test_renormalize_matches_brute_force_on_random_gasket_forms(gaskets):
    rng = np.random.default_rng(5)
    for n in (3, 4):
        T = gaskets[n]
        E, r = random_form(rng, n), random_weights(rng, n)
        C, _ = brute_force_trace(T, E, r)
        np.testing.assert_allclose(renormalize(T, E, r).matrix(), C, rtol=1e-8)


def test_renormalize_homogeneity(ring, gaskets):
    rng = np.random.default_rng(2)
    for T in (gaskets[4], ring):
        E, r = random_form(rng, T.n_boundary), random_weights(rng, T.n_cells)
        F = renormalize(T, E, r)
        np.testing.assert_allclose(renormalize(T, E.scaled(10.0), r).coefficients,
                                   10 * F.coefficients, rtol=1e-12)
        np.testing.assert_allclose(renormalize(T, E, 0.3 * r).coefficients,
                                   0.3 * F.coefficients, rtol=1e-12)
        assert is_irreducible(F)
        assert np.all(F.coefficients >= 0)


def test_trace_identity_small(gaskets):
    rng = np.random.default_rng(4)
    T = gaskets[5]
    E, r = random_form(rng, 5, sparsity=0.3), random_weights(rng, 5)
    F = renormalize(T, E, r)
    L1 = assemble_level1(T, E, r)
    for _ in range(20):
        u = rng.normal(size=5)
        assert energy(F, u) == pytest.approx(L1.energy(harmonic_extension(T, E, r, u)), rel=1e-10)


def test_level1_route_agrees(ring):
    rng = np.random.default_rng(8)
    E, r = random_form(rng, 20), random_weights(rng, 20)
    F = renormalize(ring, E, r)
    for a, b in [(1, 2), (1, 11), (4, 17), (20, 19)]:
        assert effective_conductivity_level1(ring, E, r, a, b) == pytest.approx(
            effective_conductivity(F, a, b), rel=1e-9)
    v, e = level1_pinned_minimizer(ring, E, r, 1, 11)
    assert v[0] == 0.0 and v[10] == 1.0


def test_gasket2_interval_golden(gaskets):
    assert effective_conductivity_level1(gaskets[2], DirichletForm.unit(2), np.ones(2), 1, 2) \
        == pytest.approx(0.5)
    assert effective_conductivity_level1(gaskets[3], DirichletForm.unit(3), np.ones(3), 1, 3) \
        == pytest.approx(0.9)


def test_reducible_and_mismatched_inputs(gaskets):
    T = gaskets[4]
    bad = DirichletForm.from_pairs(4, {(1, 2): 1.0, (3, 4): 1.0})
    with pytest.raises(ReducibleForm):
        renormalize(T, bad, np.ones(4))
    with pytest.raises(ReducibleForm):
        harmonic_extension(T, bad, np.ones(4), np.zeros(4))
    with pytest.raises(ValueError):
        renormalize(T, DirichletForm.unit(3), np.ones(4))
    with pytest.raises(ValueError):
        renormalize(T, DirichletForm.unit(4), [1, 1, 1, -1])
