"""How fast does tunneling die when the lattice deepens?

The lowest band of the 1D sinusoidal lattice V0 sin^2(kx), solved by
plane-wave expansion, gives the tight-binding amplitude J as a quarter of
the band width.  Deep lattices follow J ~ V0^(3/4) exp(-2 sqrt(V0/E_R)):
the celebrated exponential depth dependence, but with a power-law
prefactor that is clearly visible at laboratory depths.  The exponential
law alone (log-slope -2) is reached only asymptotically; over
V0/E_R in [15, 30] the measured slope is about -1.65.
"""

import os

import numpy as np

from curvedlattice import depth_to_J, sinusoidal_scan, tunneling_slope

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

v0s = np.linspace(2.0, 30.0, 29)
rows = sinusoidal_scan(v0s)
path = os.path.join(OUT, "tunneling_scan.csv")
with open(path, "w") as fh:
    fh.write("V0_over_ER,E_min,E_max,J_over_ER\n")
    for row in rows:
        fh.write(",".join(repr(v) for v in row) + "\n")
print(f"band scan written to {path}")

print("\n V0/E_R    J/E_R        asymptotic    ratio")
asym = lambda v: (4 / np.sqrt(np.pi)) * v**0.75 * np.exp(-2 * np.sqrt(v))
for v0 in (5.0, 10.0, 20.0, 30.0):
    j = sinusoidal_scan([v0])[0][3]
    print(f"  {v0:5.1f}   {j:.6e}   {asym(v0):.6e}   {j / asym(v0):.3f}")

deep = [r for r in rows if 15.0 <= r[0] <= 30.0]
slope = tunneling_slope([r[0] for r in deep], [r[3] for r in deep])
print(f"\nmeasured log-slope over V0/E_R in [15, 30]: {slope:.4f}")
print("pure exponential law would give -2; the V0^(3/4) prefactor adds ~ +1.5/sqrt(V0)")

# the same law drives the time-dependent scenarios: a depth ramp of
# Delta A rescales J by exp(-2 Delta A), valid while J < 2/pi^2
j_ref = 0.02
for d_a in (0.0, 0.5, 1.0, -1.2):
    j, valid = depth_to_J(d_a, j_ref=j_ref)
    print(f"depth offset {d_a:+.1f}: J = {j:.5f} (tight-binding valid: {valid})")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    s = np.sqrt(v0s)
    js = np.array([r[3] for r in rows])
    fig, ax = plt.subplots(figsize=(6.5, 4.2))
    ax.semilogy(s, js, "o", ms=4, label="plane-wave band width / 4")
    ax.semilogy(s, asym(v0s), "-", label=r"$(4/\sqrt{\pi})V_0^{3/4}e^{-2\sqrt{V_0}}$")
    ax.semilogy(s, js[-1] * np.exp(-2 * (s - s[-1])), "--", label="pure exponential, slope -2")
    ax.set_xlabel(r"$\sqrt{V_0/E_R}$")
    ax.set_ylabel(r"$J/E_R$")
    ax.legend()
    fig.tight_layout()
    fig.savefig(os.path.join(OUT, "tunneling_vs_depth.png"), dpi=120)
    print(f"figure written to {OUT}/tunneling_vs_depth.png")
except ImportError:
    print("matplotlib not installed; skipped the figure")
