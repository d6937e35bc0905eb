import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rieszned.ar1 import (
    ar1_ned_certificate,
    center_noise,
    closed_form,
    generate_ar1,
    geometric_sum,
    power_decay_check,
    random_noise,
    tail_bound,
    verify_averaging_pull,
    verify_projection_optimality,
)
from rieszned.errors import (
    IncompatibleOperators,
    NonZeroConditionalMean,
    NotContractive,
    OperatorsNotNested,
    ThetaNotContractive,
    ThetaNotInRangeOfT,
)
from rieszned.lattice import cond_exp, global_mean, make_space, uniform_space
from rieszned.process import ProcessWindow, ned_defect, verify_ned
from strategies import nested_pair, spaces, vectors

INF = np.inf


def two_block_T(atoms=8):
    half = atoms // 2
    return cond_exp(uniform_space(atoms), [list(range(half)), list(range(half, atoms))])


class TestNoise:
    def test_block_constant_raw_centres_to_zero(self):
        T = two_block_T(4)
        raw = ProcessWindow.from_vectors(1, [[1, 1, 2, 2], [0, 0, -3, -3]])
        np.testing.assert_array_equal(center_noise(raw, T).values, 0)

    def test_uniform_two_atoms(self):
        T = global_mean(uniform_space(2))
        np.testing.assert_allclose(center_noise(ProcessWindow.from_vectors(1, [[1, 3]]), T)[1], [-1, 1])

    def test_weighted(self):
        T = global_mean(make_space(2, [0.25, 0.75]))
        eps = center_noise(ProcessWindow.from_vectors(1, [[1, 3]]), T)[1]
        np.testing.assert_allclose(eps, [-1.5, 0.5])
        np.testing.assert_allclose(T(eps), 0, atol=1e-15)

    def test_seeded(self):
        T = two_block_T()
        a, b = random_noise(T, 5, seed=3, levels=2), random_noise(T, 5, seed=3, levels=2)
        np.testing.assert_array_equal(a.values, b.values)
        np.testing.assert_allclose(T(a.values), 0, atol=1e-15)


class TestGenerate:
    def test_zero_noise(self):
        T = global_mean(uniform_space(3))
        inst = generate_ar1(0.7, ProcessWindow(1, np.zeros((5, 3))), T)
        np.testing.assert_array_equal(inst.process.values, 0)

    def test_no_memory(self):
        T = two_block_T()
        noise = random_noise(T, 6, seed=0)
        np.testing.assert_array_equal(generate_ar1(0.0, noise, T).process.values, noise.values)

    def test_hand_recursion(self):
        T = global_mean(uniform_space(2))
        noise = ProcessWindow.from_vectors(1, [[1, -1], [1, -1]])
        inst = generate_ar1(0.5, noise, T)
        np.testing.assert_allclose(inst.process[2], [1.5, -1.5])
        np.testing.assert_allclose(inst.g_bound, [1, 1])

    def test_closed_form_matches_recursion(self):
        T = two_block_T()
        noise = random_noise(T, 20, seed=4)
        theta = np.array([0.9] * 4 + [-0.3] * 4)
        inst = generate_ar1(theta, noise, T)
        np.testing.assert_allclose(closed_form(theta, noise), inst.process.values, atol=1e-12)

    def test_theta_must_be_block_constant(self):
        T = two_block_T(4)
        with pytest.raises(ThetaNotInRangeOfT):
            generate_ar1(np.array([0.1, 0.2, 0.3, 0.3]), random_noise(T, 3), T)

    def test_theta_must_contract(self):
        T = two_block_T(4)
        with pytest.raises(ThetaNotContractive):
            generate_ar1(1.0, random_noise(T, 3), T)
        with pytest.raises(ThetaNotContractive):
            generate_ar1(-1.2, random_noise(T, 3), T)

    def test_noise_needs_zero_mean(self):
        T = global_mean(uniform_space(2))
        with pytest.raises(NonZeroConditionalMean):
            generate_ar1(0.5, ProcessWindow.from_vectors(1, [[1, 2]]), T)


class TestCertificate:
    def test_half_theta_unit_noise(self):
        T = global_mean(uniform_space(2))
        v = np.array([1.0, -1.0])
        inst = generate_ar1(0.5, ProcessWindow.from_vectors(1, [v, -v, v, v]), T)
        cert = ar1_ned_certificate(inst)
        np.testing.assert_allclose(cert.d, 1)
        for m in range(4):
            np.testing.assert_allclose(cert.xi[m], 0.5**m)

    def test_zero_theta(self):
        T = two_block_T()
        inst = generate_ar1(0.0, random_noise(T, 5, seed=2, levels=2), T)
        cert = ar1_ned_certificate(inst)
        np.testing.assert_array_equal(cert.xi, 0)
        fam = inst.family()
        for n in range(1, 6):
            for m in range(5):
                np.testing.assert_allclose(ned_defect(inst.process, fam, n, m), 0, atol=1e-15)

    def test_per_block_xi(self):
        T = two_block_T()
        theta = np.array([0.5] * 4 + [0.25] * 4)
        cert = ar1_ned_certificate(generate_ar1(theta, random_noise(T, 6, seed=1), T))
        for m in range(6):
            np.testing.assert_allclose(cert.xi[m, :4], 0.5**m)
            np.testing.assert_allclose(cert.xi[m, 4:], 0.25 ** (m + 1) / 0.75)

    @pytest.mark.parametrize("p", [1, 2, INF])
    @pytest.mark.parametrize("seed", range(4))
    def test_passes_for_each_p(self, p, seed):
        T = two_block_T()
        theta = np.array([0.75] * 4 + [-0.5] * 4)
        inst = generate_ar1(theta, random_noise(T, 10, seed=seed, levels=2), T)
        assert verify_ned(inst.process, inst.family(), ar1_ned_certificate(inst, p)).passed

    @pytest.mark.parametrize("seed", range(4))
    def test_optimality_bridge(self, seed):
        T = two_block_T()
        inst = generate_ar1(0.5, random_noise(T, 10, seed=seed, levels=3), T)
        fam = inst.family()
        cert = ar1_ned_certificate(inst)
        for n in range(1, 11):
            for m in range(6):
                defect = ned_defect(inst.process, fam, n, m)
                tail = tail_bound(inst, n, m)
                assert np.all(defect <= tail + 1e-12)
                assert np.all(tail <= cert.bound(n, m) + 1e-12)


class TestSeries:
    def test_geometric_examples(self):
        partial, closed = geometric_sum([0.5, 0.25], 60)
        np.testing.assert_allclose(closed, [2, 4 / 3])
        np.testing.assert_allclose(partial, closed, atol=1e-15)
        for terms in range(4):
            partial, closed = geometric_sum(np.zeros(3), terms)
            np.testing.assert_array_equal(partial, 1)
            np.testing.assert_array_equal(closed, 1)

    @given(st.lists(st.floats(0.0, 0.95), min_size=1, max_size=4), st.integers(0, 40))
    def test_geometric_tail(self, theta, terms):
        theta = np.array(theta)
        partial, closed = geometric_sum(theta, terms)
        assert np.all(np.abs(partial - closed) <= theta ** (terms + 1) / (1 - theta) + 1e-12)

    def test_power_decay_examples(self):
        assert power_decay_check([0.5, 0.5], 1e-3) == 10
        assert power_decay_check([0.0], 1e-3) == 1
        assert power_decay_check([0.9, 0.1], 0.5) == 7

    @given(st.floats(0.01, 0.99), st.floats(1e-6, 0.5), st.floats(1e-6, 0.5))
    def test_power_decay_monotone_in_tolerance(self, theta, t1, t2):
        lo, hi = sorted((t1, t2))
        assert power_decay_check([theta], lo) >= power_decay_check([theta], hi)

    def test_not_contractive(self):
        with pytest.raises(NotContractive):
            power_decay_check([1.0], 0.1)
        with pytest.raises(NotContractive):
            geometric_sum([-0.1], 3)
        with pytest.raises(ValueError):
            power_decay_check([0.5], 0.0)


class TestProjections:
    def test_worked_decomposition(self):
        sp = uniform_space(4)
        S, T = cond_exp(sp, [[0, 1], [2, 3]]), global_mean(sp)
        f = np.array([1.0, 2, 3, 4])
        sf = S(f)
        np.testing.assert_allclose(T((f - sf) ** 2), 0.25)
        np.testing.assert_allclose(T(f**2), 7.5)
        np.testing.assert_allclose(T(sf**2), 7.25)
        r = verify_projection_optimality(f, S, T, trials=30)
        assert r.passed and r.parts[0].passed

    def test_in_range_gives_zero(self):
        sp = uniform_space(4)
        S, T = cond_exp(sp, [[0, 1], [2, 3]]), global_mean(sp)
        r = verify_projection_optimality(np.array([1.0, 1, 2, 2]), S, T, trials=5)
        assert r.passed and np.allclose(r.location["lhs"], 0)

    def test_incompatible(self):
        sp = uniform_space(4)
        with pytest.raises(IncompatibleOperators):
            verify_projection_optimality(np.ones(4), cond_exp(sp, [[0, 1], [2, 3]]), cond_exp(sp, [[0, 2], [1, 3]]))

    @given(spaces(2, 8), st.data(), st.integers(0, 2**16))
    def test_random_optimality(self, sp, data, seed):
        fine, coarse = data.draw(nested_pair(sp))
        f = data.draw(vectors(sp.size))
        assert verify_projection_optimality(f, cond_exp(sp, fine), cond_exp(sp, coarse), trials=10, seed=seed).passed

    @given(spaces(2, 8), st.data())
    def test_averaging_pull(self, sp, data):
        fine, coarse = data.draw(nested_pair(sp))
        g, h = data.draw(vectors(sp.size)), data.draw(vectors(sp.size))
        U, V = cond_exp(sp, fine), cond_exp(sp, coarse)
        assert verify_averaging_pull(U, V, g, h).passed
        assert verify_averaging_pull(U, U, g, h).passed

    def test_averaging_pull_needs_nesting(self):
        sp = uniform_space(4)
        with pytest.raises(OperatorsNotNested):
            verify_averaging_pull(cond_exp(sp, [[0, 1], [2, 3]]), cond_exp(sp, [[0, 2], [1, 3]]), np.ones(4), np.ones(4))

def test_averaging_pull_rejects_reversed_order():
    sp = uniform_space(4)
    fine, coarse = cond_exp(sp, [[0], [1], [2, 3]]), cond_exp(sp, [[0, 1], [2, 3]])
    with pytest.raises(OperatorsNotNested):
        verify_averaging_pull(coarse, fine, np.ones(4), np.ones(4))
