"""Pricing a first-to-default swap on a five-name basket.

With flat CDS curves and constant model rates, the first-to-default
survival curve is exp(-beta l t), so the fair spread is (1 - R) beta l.
beta runs from d (no common jumps) down towards 1 (very large, frequent
jumps); level curves show the (H, lam) pairs that give the same spread.

Run: python3 demos/04_first_to_default.py
"""
import numpy as np

from sibuya import (
    ConstantRate,
    JumpModel,
    PricingInputs,
    SibuyaModel,
    ftd_fair_spread,
    ftd_present_value,
    level_curve,
    mc_break_even_spread,
)

MU = (0.05,) * 5
market = PricingInputs(cds_intensity=0.1206, recovery=0.4, rate=0.02, maturity=5.0)


def basket(H, lam):
    return SibuyaModel(tuple(ConstantRate(m) for m in MU), JumpModel(H, ConstantRate(lam)))


print("fair spread by jump size and intensity")
print("  H \\ lam " + "".join(f"{lam:>9.2f}" for lam in (0.0, 0.1, 0.5, 2.0, 10.0)))
for H in (0.0, 0.5, 1.0, 3.0, 10.0):
    row = [ftd_fair_spread(basket(H, lam), market) for lam in (0.0, 0.1, 0.5, 2.0, 10.0)]
    print(f"  {H:6.1f}  " + "".join(f"{s:9.5f}" for s in row))

m = basket(1.0, 0.5)
s = ftd_fair_spread(m, market)
print(f"\nH=1, lam=0.5: s* = {s:.6f}")
print(f"  PV at s*, closed form {ftd_present_value(m, PricingInputs(0.1206, 0.4, 0.02, 5.0, s), 'closed'):.2e}")
print(f"  PV at s*, quadrature  {ftd_present_value(m, PricingInputs(0.1206, 0.4, 0.02, 5.0, s), 'quadrature'):.2e}")
s_mc, se = mc_break_even_spread(m, market, 10**6, seed=5)
print(f"  Monte Carlo break-even {s_mc:.6f} +- {se:.6f}")

print("\nlevel curves lam(H)")
grid = np.linspace(0.5, 10.0, 8)
for target in (0.15, 0.25, 0.33):
    lams = [lam for _, lam in level_curve(MU, market, target, grid)]
    print(f"  s* = {target:.2f}: " + " ".join("   n/a" if np.isnan(x) else f"{x:6.3f}" for x in lams))
