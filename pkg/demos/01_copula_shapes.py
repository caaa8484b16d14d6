"""How a common jump process shapes the copula.

Two entities with their own drifts share a Poisson jump process.  With
constant rates the copula is Marshall-Olkin; with linear rates it is
asymmetric and its upper tail dependence depends on the drift offsets.

Run: python3 demos/01_copula_shapes.py
"""
from pathlib import Path

import numpy as np

from sibuya import copula, dependence_report, load_model, model_from_dict, reduced_params

HERE = Path(__file__).parent

pair = load_model(HERE / "models" / "constant_pair.json")
p = reduced_params(pair)
print("constant rates")
print(f"  marginal intensities  {p.lambdas.round(5)}")
print(f"  singular weights      {p.theta.round(5)}")
print(f"  C(0.5, 0.5)           {copula(pair, [0.5, 0.5]):.6f}")
print(f"  diagonal exponent     {p.beta:.6f}")

lin = load_model(HERE / "models" / "linear_pair.json")
print("\nlinear rates, large jumps")
for u in ([0.2, 0.7], [0.7, 0.2]):
    print(f"  C{tuple(u)} = {copula(lin, u):.6f}")

# the drift offsets b_i damp the upper tail; dropping them pushes it to one
rep = dependence_report(lin)
print(f"  tail dependence       lower {rep.lambda_lower:.2e}  upper {rep.lambda_upper:.4f}  ({rep.method})")

doc = lin.to_dict()
for r in doc["drifts"]:
    r["b"] = 0.0
no_offset = model_from_dict(doc)
rep0 = dependence_report(no_offset)
print(f"  without drift offsets upper {rep0.lambda_upper:.4f}")

# a coarse copula surface, as the `surface` command would write it
g = np.linspace(0.0, 1.0, 6)
grid = np.stack(np.meshgrid(g, g, indexing="ij"), -1)
print("\n  C(u1, u2) on a 6x6 grid (rows u1, columns u2)")
for row in copula(lin, grid):
    print("  " + " ".join(f"{v:6.3f}" for v in row))
