"""
Variational estimates next to the reference
===========================================

Reproduces the comparison table through the library (the same numbers the
``qesvar report`` command writes).
"""

from qesvar.cli import RunConfig, build_report

cfg = RunConfig(table=((1, 5), (1, 9), (3, 5), (3, 9), (5, 5), (5, 9), (5, 13)))
report = build_report(cfg)

print(f"{'level':>5} {'deg':>4} {'E*':>12} {'E_ref':>12} {'dev %':>8}")
for e in report.variational["entries"]:
    E = "--" if e["E_star"] is None else f"{e['E_star']:.6f}"
    dev = "--" if e["deviation_percent"] is None else f"{e['deviation_percent']:.3f}"
    print(f"{e['level']:>5} {e['degree']:>4} {E:>12} {e['E_ref']:>12.6f} {dev:>8}")
