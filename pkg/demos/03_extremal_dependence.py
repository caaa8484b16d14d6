"""Extremal dependence in d dimensions.

epsilon_u measures how often the best name defaults given that the worst
one has, deep in the tail.  For constant rates the inclusion-exclusion
sum over all subsets collapses to lam (1 - e^-H)^d / (lambda_max beta).
Here the collapsed value, the 2^d enumeration and a brute-force limit of
the survival-copula sieve are compared.

Run: python3 demos/03_extremal_dependence.py
"""
import numpy as np

from sibuya import (
    ConstantRate,
    JumpModel,
    SibuyaModel,
    extremal_dependence,
    extremal_dependence_enumerated,
    extremal_dependence_numeric,
)

g = np.random.default_rng(3)
print(" d   closed form   enumeration   numeric limit")
for d in (2, 3, 4, 6, 8):
    mu = g.uniform(0.02, 0.4, d)
    m = SibuyaModel(tuple(ConstantRate(x) for x in mu), JumpModel(1.0, ConstantRate(0.5)))
    closed = extremal_dependence(m)[1]
    enum = extremal_dependence_enumerated(m)
    numeric = extremal_dependence_numeric(m)[1].value
    print(f"{d:2d}   {closed:.8f}    {enum:.8f}    {numeric:.8f}")

# the closed form needs no enumeration, so large baskets are free
m = SibuyaModel((ConstantRate(0.05),) * 125, JumpModel(2.0, ConstantRate(0.3)))
print(f"\nd = 125: epsilon_u = {extremal_dependence(m)[1]:.3e}")
