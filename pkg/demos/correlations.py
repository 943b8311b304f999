"""Classical correlation, discord and entanglement of formation on small examples."""

import numpy as np

from qcorr import (
    DensityMatrix,
    chi_A,
    classical_correlation,
    discord,
    entanglement_of_formation,
    make_rng,
    random_pure,
    von_neumann_entropy,
    wootters_entanglement_of_formation,
)

# GHZ: C_B(AB) = ln 2, E_F(AC) = 0
v = np.zeros(8)
v[[0, 7]] = 2 ** -0.5
ghz = DensityMatrix(np.outer(v, v), (2, 2, 2), ("A", "B", "C"))
print("GHZ  C_B(AB) =", round(classical_correlation(ghz.ptrace("AB"), "B", restarts=4).value, 6),
      " E_F(AC) =", round(entanglement_of_formation(ghz.ptrace("AC"), "A", restarts=4).value, 6))

# Werner family: discord and E_F against the concurrence formula
phi = np.zeros((4, 4))
phi[np.ix_([0, 3], [0, 3])] = 0.5
print("\n   p    discord    E_F(opt)   E_F(Wootters)")
for p in np.linspace(0.0, 1.0, 6):
    rho = DensityMatrix(p * phi + (1 - p) * np.eye(4) / 4, (2, 2), ("A", "B"))
    d = discord(rho, "B", restarts=4).value
    ef = entanglement_of_formation(rho, "A", restarts=8).value
    print(f"{p:5.2f}  {d:9.6f}  {ef:9.6f}  {wootters_entanglement_of_formation(rho):9.6f}")

# C_B(AB) + E_F(AC) = S(A) for a random pure state on 2x2x3
psi = random_pure((2, 2, 3), make_rng(0), labels=("A", "B", "C")).density()
cb = classical_correlation(psi.ptrace("AB"), "B", restarts=8).value
ef = entanglement_of_formation(psi.ptrace("AC"), "A", restarts=8).value
print(f"\nrandom pure state: C_B + E_F = {cb + ef:.8f}, S(A) = {von_neumann_entropy(psi.ptrace('A')):.8f}")
print(f"chi_A(AC) = {chi_A(psi.ptrace('AC'), 'A', restarts=8).value:.8f} (= S(A) - E_F for this state)")
