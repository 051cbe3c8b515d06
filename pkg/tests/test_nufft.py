import numpy as np
import pytest

from dfsswe.nufft import NufftPlan, nudft2_direct, nufft2_type2
from dfsswe.transforms import ComplexCoeffs


def random_coeffs(rng, N, M, conj_sym=False):
    F = rng.standard_normal((2 * N + 1, 2 * M + 1)) + 1j * rng.standard_normal(
        (2 * N + 1, 2 * M + 1)
    )
    if conj_sym:
        F = 0.5 * (F + np.conj(F[::-1, ::-1]))
    return ComplexCoeffs(N, M, F)


def test_direct_trivial_cases():
    N = M = 4
    zero = ComplexCoeffs(N, M, np.zeros((2 * N + 1, 2 * M + 1), dtype=complex))
    th = np.array([0.3, 1.7, 2.9])
    ph = np.array([0.1, 4.2, 5.5])
    assert np.allclose(nudft2_direct(zero, th, ph), 0.0)

    one = ComplexCoeffs(N, M, np.zeros((2 * N + 1, 2 * M + 1), dtype=complex))
    one.F[N, M] = 1.0
    assert np.allclose(nudft2_direct(one, th, ph), 1.0)


def test_direct_hand_evaluated_mode():
    # only F[n=1, m=2] = 1 at (theta, phi) = (pi/2, pi/2):
    # e^{i * 1 * pi/2} * e^{i * 2 * pi/2} = e^{i 3 pi / 2} = -i
    N = M = 3
    c = ComplexCoeffs(N, M, np.zeros((2 * N + 1, 2 * M + 1), dtype=complex))
    c.F[N + 1, M + 2] = 1.0
    val = nudft2_direct(c, np.array([np.pi / 2]), np.array([np.pi / 2]))
    assert val[0] == pytest.approx(-1j)


def test_plan_validation():
    with pytest.raises(ValueError):
        NufftPlan(8, 8, eps=1e-20)
    with pytest.raises(ValueError):
        NufftPlan(8, 8, eps=0.5)
    plan = NufftPlan(8, 8, eps=1e-9)
    assert plan.w >= 2
    assert plan.n_fine[0] >= 2 * (2 * 8 + 1)


def test_fast_matches_trivial_cases():
    N = M = 6
    plan = NufftPlan(N, M, eps=1e-10)
    c = ComplexCoeffs(N, M, np.zeros((2 * N + 1, 2 * M + 1), dtype=complex))
    c.F[N, M] = 1.0
    th = np.linspace(0, np.pi, 17)
    ph = np.linspace(0, 2 * np.pi, 17)
    assert np.allclose(nufft2_type2(plan, c, th, ph), 1.0, atol=1e-9)


@pytest.mark.parametrize("eps", [1e-6, 1e-9, 1e-12])
def test_fast_matches_direct_random(eps):
    rng = np.random.default_rng(42)
    N = M = 24
    plan = NufftPlan(N, M, eps=eps)
    for _ in range(5):
        c = random_coeffs(rng, N, M)
        th = rng.uniform(0, 2 * np.pi, 200)
        ph = rng.uniform(0, 2 * np.pi, 200)
        ref = nudft2_direct(c, th, ph)
        val = nufft2_type2(plan, c, th, ph)
        bound = 10.0 * eps * np.abs(c.F).sum()
        assert np.abs(val - ref).max() <= bound


def test_accuracy_monotonic_in_eps():
    rng = np.random.default_rng(1)
    N = M = 20
    c = random_coeffs(rng, N, M)
    th = rng.uniform(0, 2 * np.pi, 500)
    ph = rng.uniform(0, 2 * np.pi, 500)
    ref = nudft2_direct(c, th, ph)
    errs = []
    for eps in (1e-4, 1e-7, 1e-10):
        val = nufft2_type2(plan := NufftPlan(N, M, eps=eps), c, th, ph)
        errs.append(np.abs(val - ref).max())
    assert errs[1] <= errs[0] * 1e-2
    assert errs[2] <= errs[1] * 1e-2


def test_linearity_and_translation():
    rng = np.random.default_rng(2)
    N = M = 10
    plan = NufftPlan(N, M, eps=1e-12)
    c1 = random_coeffs(rng, N, M)
    c2 = random_coeffs(rng, N, M)
    th = rng.uniform(0, np.pi, 50)
    ph = rng.uniform(0, 2 * np.pi, 50)
    a, b = 1.3, -0.4
    comb = ComplexCoeffs(N, M, a * c1.F + b * c2.F)
    v = nufft2_type2(plan, comb, th, ph)
    v12 = a * nufft2_type2(plan, c1, th, ph) + b * nufft2_type2(plan, c2, th, ph)
    assert np.abs(v - v12).max() <= 1e-12 * np.abs(v).max() + 1e-13

    v_shift = nufft2_type2(plan, c1, th, ph + 2 * np.pi)
    v_base = nufft2_type2(plan, c1, th, ph)
    assert np.abs(v_shift - v_base).max() <= 1e-13 * (1 + np.abs(v_base).max())


def test_batched_evaluation():
    rng = np.random.default_rng(3)
    N = M = 8
    plan = NufftPlan(N, M, eps=1e-11)
    cs = [random_coeffs(rng, N, M) for _ in range(3)]
    th = rng.uniform(0, np.pi, 40)
    ph = rng.uniform(0, 2 * np.pi, 40)
    stacked = np.stack([c.F for c in cs])
    out = nufft2_type2(plan, stacked, th, ph)
    for i, c in enumerate(cs):
        single = nufft2_type2(plan, c, th, ph)
        assert np.allclose(out[i], single, rtol=0, atol=1e-14)


def test_rejects_nonfinite_targets():
    plan = NufftPlan(4, 4, eps=1e-8)
    c = ComplexCoeffs(4, 4, np.zeros((9, 9), dtype=complex))
    with pytest.raises(ValueError):
        nufft2_type2(plan, c, np.array([np.nan]), np.array([0.0]))


def test_real_path_matches_complex_path():
    rng = np.random.default_rng(5)
    N = M = 16
    plan = NufftPlan(N, M, eps=1e-12)
    c = random_coeffs(rng, N, M, conj_sym=True)
    th = rng.uniform(0, np.pi, 300)
    ph = rng.uniform(0, 2 * np.pi, 300)
    ref = nudft2_direct(c, th, ph)
    assert np.abs(ref.imag).max() < 1e-12 * np.abs(ref.real).max()
    v_real = nufft2_type2(plan, c, th, ph, real=True)
    assert v_real.dtype.kind == "f"
    assert np.abs(v_real - ref.real).max() <= 10 * plan.eps * np.abs(c.F).sum()
