"""
Odd states from truncated series
================================

The odd sector has no exact states.  Truncating the odd series at degree
5, 9 or 13 and scanning the weighted residual Delta(E) still locates the
first excited levels.  Figures are written next to this script.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from qesvar import QesModel
from qesvar.euler import generate_series
from qesvar.qes import euler_operator
from qesvar.variational import scan_delta, truncated_state

out = Path(__file__).with_suffix("")
model = QesModel.double_well()

# the odd series, with coefficients as polynomials in E
series = generate_series(euler_operator(model), 1, 4)
for k in range(5):
    print(f"c_{k} * {2 * k + 1}! =", series.labelled(k).format("E"))

fig, ax = plt.subplots()
for degree, style in ((5, "--"), (9, "-")):
    curve = scan_delta(truncated_state(model, "odd", degree), (-8.1, -7.7), 0.001)
    ax.plot(curve.energies, curve.delta, style, label=f"degree {degree}")
    for m in curve.physical_minima():
        print(f"degree {degree}: E* = {m.E_star:.6f}, nodes = {m.node_count}")
ax.set_xlabel("E")
ax.set_ylabel("Delta")
ax.legend()
fig.savefig(f"{out}_level1.png", dpi=120)

# a wider window: not every minimum is a physical state
curve = scan_delta(truncated_state(model, "odd", 9), (-12, 24), 0.01)
for m in curve.minima:
    print(f"{m.E_star:10.5f}  nodes={m.node_count}  physical={m.physical}")
fig, ax = plt.subplots()
ax.semilogy(curve.energies, curve.delta + 1e-12)
ax.set_xlabel("E")
ax.set_ylabel("Delta")
fig.savefig(f"{out}_odd_wide.png", dpi=120)
