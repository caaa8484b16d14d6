"""Acceptance criteria 1-9; each test prints one PASS/FAIL line."""
import math
import time

import numpy as np
import pytest

from conftest import a2_model, constant_model, linear_model, piecewise_model
from sibuya import (
    ConstantRate,
    JumpModel,
    LinearRate,
    PiecewiseConstantRate,
    PricingInputs,
    ReducedParams,
    SibuyaModel,
    copula,
    empirical_copula,
    extremal_dependence,
    extremal_dependence_enumerated,
    ftd_fair_spread,
    ftd_present_value,
    hierarchical_copula,
    joint_survival,
    joint_survival_expsum,
    joint_survival_jointure,
    level_curve,
    marginal_survival_inverse,
    mc_break_even_spread,
    reduced_params,
    sample,
    sample_hierarchical,
    tail_dependence_analytic,
    tail_dependence_numeric,
)


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n[acceptance] criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
        assert ok, detail

    return emit


def _random_rate(g):
    kind = g.integers(3)
    if kind == 0:
        return ConstantRate(g.uniform(0.01, 2.0))
    if kind == 1:
        return LinearRate(g.uniform(0.0, 2.0), g.uniform(0.01, 2.0))
    k = int(g.integers(1, 4))
    breaks = tuple(np.cumsum(g.uniform(0.1, 2.0, k)))
    return PiecewiseConstantRate(breaks, tuple(g.uniform(0.0, 2.0, k)) + (g.uniform(0.01, 2.0),))


def _random_model(g, d):
    return SibuyaModel(tuple(_random_rate(g) for _ in range(d)), JumpModel(g.uniform(0.0, 5.0), _random_rate(g)))


def _random_times(model, g, n):
    """Times at marginal survival levels in (0.05, 1), so joint survival stays measurable."""
    v = g.uniform(0.05, 1.0, (n, model.d))
    return np.stack([marginal_survival_inverse(model, i, v[:, i]) for i in range(model.d)], axis=1)


def test_criterion_1_joint_survival_oracle(report):
    g = np.random.default_rng(101)
    fixtures = {
        "constant d=5": constant_model((0.05, 0.1, 0.2, 0.02, 0.3), 0.4, 1.5),
        "linear d=2": linear_model(),
        "piecewise d=3": piecewise_model(),
    }
    worst, slowest = 0.0, 0.0
    for seed, (name, m) in enumerate(fixtures.items()):
        start = time.perf_counter()
        batch = sample(m, 10**6, seed=1000 + seed)
        slowest = max(slowest, time.perf_counter() - start)
        t = _random_times(m, g, 10)
        exact = joint_survival(m, t)
        emp = np.array([np.mean(np.all(batch.default_times > ti, axis=1)) for ti in t])
        se = np.sqrt(exact * (1 - exact) / batch.n)
        worst = max(worst, float(np.max(np.abs(emp - exact) / se)))
    ok = worst <= 3.0 and slowest <= 60.0
    report(1, ok, f"max |emp - exact| = {worst:.2f} SE (limit 3), slowest sampler {slowest:.1f} s (limit 60)")


def test_criterion_2_closed_form_cross_equality(report):
    g = np.random.default_rng(202)
    worst = 0.0
    for _ in range(1000):
        m = _random_model(g, int(g.integers(2, 7)))
        t = _random_times(m, g, 1)[0]
        base = joint_survival(m, t)
        for other in (joint_survival_jointure(m, t), joint_survival_expsum(m, t)):
            worst = max(worst, abs(other - base) / base)
    worst_a = 0.0
    for _ in range(200):
        d = int(g.integers(2, 7))
        m = constant_model(tuple(g.uniform(0.0, 1.0, d)), g.uniform(0.01, 2.0), g.uniform(0.0, 5.0))
        u = g.uniform(0.0, 1.0, (5, d))
        a, b = copula(m, u, "constant"), copula(m, u, "composition")
        worst_a = max(worst_a, float(np.max(np.abs(a - b))))
    ok = worst <= 1e-12 and worst_a <= 1e-12
    report(2, ok, f"three joint forms rel. diff {worst:.1e}, power form vs composition {worst_a:.1e} (limit 1e-12)")


def _levy_frailty(u, mu, lam, H):
    psi = lambda x: mu * x + lam * -math.expm1(-x * H)  # noqa: E731
    d = u.shape[-1]
    us = np.sort(u, axis=-1)
    # ascending order statistics; the smallest argument carries exponent one
    expo = np.array([(psi(k + 1) - psi(k)) / psi(1) for k in range(d)])
    return np.prod(us**expo, axis=-1)


def test_criterion_3_marshall_olkin_and_levy_frailty(report):
    m = a2_model()
    th = reduced_params(m).theta
    grid = np.linspace(0.0, 1.0, 101)
    u1, u2 = np.meshgrid(grid, grid, indexing="ij")
    mo = np.minimum(u1 ** (1 - th[0]) * u2, u1 * u2 ** (1 - th[1]))
    res_mo = float(np.max(np.abs(copula(m, np.stack([u1, u2], -1)) - mo)))
    g = np.random.default_rng(303)
    res_lf = 0.0
    for d in range(2, 9):
        mu, lam, H = g.uniform(0.0, 0.5), g.uniform(0.05, 2.0), g.uniform(0.1, 5.0)
        hom = constant_model((mu,) * d, lam, H)
        u = g.uniform(0.0, 1.0, (500, d))
        res_lf = max(res_lf, float(np.max(np.abs(copula(hom, u) - _levy_frailty(u, mu, lam, H)))))
    ok = res_mo <= 1e-12 and res_lf <= 1e-12
    report(3, ok, f"Marshall-Olkin residual {res_mo:.1e}, Levy-frailty residual d=2..8 {res_lf:.1e} (limit 1e-12)")


def test_criterion_4_linear_model_tail_dependence(report):
    start = time.perf_counter()
    lo1, up1 = tail_dependence_numeric(linear_model())
    lo2, up2 = tail_dependence_numeric(linear_model((0.0, 0.0)))
    elapsed = time.perf_counter() - start
    ok = (
        abs(up1.value - 0.44) <= 0.01
        and abs(up2.value - 1.00) <= 0.01
        and abs(lo1.value) <= 1e-6
        and abs(lo2.value) <= 1e-6
        and elapsed <= 1.0
    )
    report(
        4,
        ok,
        f"linear model lambda_u={up1.value:.4f} lambda_l={lo1.value:.1e}; zero-offset model lambda_u={up2.value:.4f} "
        f"lambda_l={lo2.value:.1e}; {elapsed:.2f} s",
    )


def test_criterion_5_extremal_dependence(report):
    g = np.random.default_rng(505)
    worst, worst_d2, eps_l_max = 0.0, 0.0, 0.0
    for d in range(2, 13):
        for _ in range(100):
            p = ReducedParams(tuple(g.uniform(0.0, 1.0, d)), g.uniform(0.01, 3.0), g.uniform(0.0, 6.0))
            eps_l, eps_u = extremal_dependence(p)
            eps_l_max = max(eps_l_max, abs(eps_l))
            worst = max(worst, abs(eps_u - extremal_dependence_enumerated(p)))
            if d == 2:
                lam_u = tail_dependence_analytic(p)[1]
                worst_d2 = max(worst_d2, abs(eps_u * (2 - lam_u) - lam_u))
    ok = worst <= 1e-10 and eps_l_max == 0.0 and worst_d2 <= 1e-10
    report(5, ok, f"closed vs 2^d enumeration {worst:.1e}, d=2 identity {worst_d2:.1e}, max |eps_l| {eps_l_max}")


def test_criterion_6_extreme_value_and_plod(report):
    g = np.random.default_rng(606)
    max_stab = 0.0
    grid = np.linspace(0.0, 1.0, 41)
    for d in (2, 3, 4):
        m = constant_model(tuple(g.uniform(0.0, 0.5, d)), g.uniform(0.1, 2.0), g.uniform(0.1, 4.0))
        pts = np.stack(np.meshgrid(*([grid] * min(d, 3)), indexing="ij"), -1).reshape(-1, min(d, 3))
        if d == 4:
            pts = np.concatenate([pts, g.uniform(0, 1, (len(pts), 1))], axis=1)
        for s in (0.3, 2.0, 5.5):
            max_stab = max(max_stab, float(np.max(np.abs(copula(m, pts**s) - copula(m, pts) ** s))))
    plod_min = np.inf
    models = [a2_model(), linear_model(), linear_model((0.0, 0.0)), piecewise_model()]
    for m in models:
        u = g.uniform(0.0, 1.0, (5000, m.d))
        plod_min = min(plod_min, float(np.min(copula(m, u) - np.prod(u, axis=1))))
    rect_min = np.inf
    for m in models[:3]:
        a = g.uniform(0.0, 1.0, (10**4, 2))
        b = a + (1 - a) * g.uniform(0.0, 1.0, (10**4, 2))
        vol = (
            copula(m, b)
            - copula(m, np.stack([a[:, 0], b[:, 1]], 1))
            - copula(m, np.stack([b[:, 0], a[:, 1]], 1))
            + copula(m, a)
        )
        rect_min = min(rect_min, float(np.min(vol)))
    ok = max_stab <= 1e-12 and plod_min >= -1e-14 and rect_min >= -1e-12
    report(6, ok, f"max-stability residual {max_stab:.1e}, min C - prod u {plod_min:.1e}, min 2-box volume {rect_min:.1e}")


def test_criterion_7_pricing(report):
    mu, cds = (0.05,) * 5, 0.1206
    inp = PricingInputs(cds, 0.4, 0.02, 5.0)
    s_ind = ftd_fair_spread(constant_model(mu, 0.5, 0.0), inp)
    s_com = ftd_fair_spread(constant_model(mu, 50.0, 50.0), inp)
    pv = ftd_present_value(constant_model(mu, 0.5, 0.0), PricingInputs(cds, 0.4, 0.02, 5.0, s_ind), "quadrature")
    grid = np.linspace(0.5, 10.0, 20)
    round_trip = 0.0
    for target in (0.12, 0.2, 0.3):
        for H, lam in level_curve(mu, inp, target, grid):
            if not math.isnan(lam):
                round_trip = max(round_trip, abs(ftd_fair_spread(constant_model(mu, lam, H), inp) - target))
    m = constant_model(mu, 0.5, 1.0)
    s_mc, se = mc_break_even_spread(m, inp, 10**6, seed=707)
    s_cf = ftd_fair_spread(m, inp)
    ok = (
        abs(s_ind - 0.3618) <= 1e-12
        and abs(s_com - 0.07236) <= 1e-3
        and abs(pv) <= 1e-8
        and round_trip <= 1e-8
        and abs(s_mc - s_cf) <= 3 * se
    )
    report(
        7,
        ok,
        f"s*(H=0)={s_ind:.12g}, s*(comonotone)={s_com:.5f}, |PV|={abs(pv):.1e}, level-curve {round_trip:.1e}, "
        f"MC {s_mc:.5f}+-{se:.5f} vs {s_cf:.5f}",
    )


def test_criterion_8_generalizations(report):
    a2, lin = a2_model(), linear_model()
    batch = sample_hierarchical([a2, lin], 10**6, seed=808)
    corr = np.corrcoef(batch.uniforms[:10**5].T)[:2, 2:]
    pts = np.array([[0.5, 0.5, 0.5, 0.5], [0.3, 0.8, 0.6, 0.4], [0.9, 0.7, 0.2, 0.95]])
    p, se = empirical_copula(batch, pts)
    hier_z = float(np.max(np.abs(p - hierarchical_copula([a2, lin], pts)) / se))
    mix_z = 0.0
    for alpha in (0.0, 0.5, 1.0):
        m = constant_model((0.1, 0.1), 0.5, 1.0, alpha=alpha)
        mb = sample(m, 10**6, seed=809)
        u = np.array([[0.4, 0.8], [0.5, 0.5], [0.9, 0.2]])
        want = alpha * u.min(axis=1) + (1 - alpha) * copula(constant_model((0.1, 0.1), 0.5, 1.0), u)
        p, _ = empirical_copula(mb, u)
        mix_z = max(mix_z, float(np.max(np.abs(p - want) / np.sqrt(want * (1 - want) / mb.n))))
    ok = float(np.max(np.abs(corr))) <= 0.01 and hier_z <= 3 and mix_z <= 3
    report(8, ok, f"cross-sector max |rho| {np.max(np.abs(corr)):.4f}, hierarchical {hier_z:.2f} SE, mixture {mix_z:.2f} SE")


def test_criterion_9_reproducibility(report, tmp_path):
    m = piecewise_model()
    blobs = []
    for threads in (1, 4, 8):
        path = tmp_path / f"t{threads}.csv"
        sample(m, 200000, seed=909, threads=threads).to_csv(path)
        blobs.append(path.read_bytes())
    ok = blobs[0] == blobs[1] == blobs[2]
    report(9, ok, f"byte-identical CSVs for threads 1/4/8 ({len(blobs[0])} bytes)")
