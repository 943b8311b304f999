"""Capacity lower bound from a quantum-classical witness: dephasing and erasure channels."""

import numpy as np

from qcorr import dephasing_channel, erasure_channel, holevo_capacity
from qcorr import bounds as bd

print(" channel          eps        lower bound   capacity")
for d in (2, 3, 4):
    ch = dephasing_channel(d)
    theta = bd.dephased_witness(ch)
    print(f" dephasing d={d}   {bd.complement_witness_distance(ch, theta):.2e}   "
          f"{bd.chi_capacity_lower_bound(ch, theta):11.6f}   {holevo_capacity(ch, restarts=4).value:.6f}")
for d in (2, 3):
    for p in (0.1, 0.3, 0.5):
        ch = erasure_channel(d, p)
        theta = bd.erasure_witness(d, p)
        print(f" erasure d={d} p={p}  {bd.complement_witness_distance(ch, theta):.4f}   "
              f"{bd.chi_capacity_lower_bound(ch, theta):11.6f}   {holevo_capacity(ch, restarts=4).value:.6f}"
              f"   ((1-p) ln d = {(1 - p) * np.log(d):.6f})")
