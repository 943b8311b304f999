"""Continuity bounds: the pin/dephasing pair and the energy-constrained trend."""

import numpy as np

from qcorr import Channel, complementary, dephasing_channel, diamond_distance, holevo_capacity
from qcorr import bounds as bd

pin = Channel([np.array([[1, 0], [0, 0]]), np.array([[0, 1], [0, 0]])])
deph = dephasing_channel(2)

d = diamond_distance(pin, deph, restarts=16)
dc = diamond_distance(complementary(pin), complementary(deph), restarts=16)
gap = abs(holevo_capacity(pin, restarts=4).value - holevo_capacity(deph, restarts=4).value)
print(f"diamond(pin, dephasing)        in [{d.lower:.6f}, {d.upper:.6f}]")
print(f"diamond(complements)           in [{dc.lower:.6f}, {dc.upper:.6f}]")
print(f"capacity gap                   {gap:.6f}   (ln 2 = {np.log(2):.6f})")
print(f"bound from the channels        {bd.cap_cb(d.upper / 2, 2):.6f}")
print(f"bound from the complements     {bd.cap_cb(dc.upper / 2, 2):.6f}")

G = bd.growth_osc(1, (1.0,))
F = bd.growth_from_hamiltonian(bd.number_operator(32))
print("\n   eps      eps*F(2E/eps^2)+2g   min_t CB_t(1,2)   min_t CB_t(1,1)    (E = 1)")
for eps in (1e-1, 1e-2, 1e-3, 1e-4):
    print(f"{eps:8.0e}   {bd.chi_cb_ec(eps, 1.0, F):16.6f}   {bd.chi_cb_ec_tight(eps, 1.0, G):15.6f}"
          f"   {bd.cb_min(1.0, eps, 1, 1, G):15.6f}")
