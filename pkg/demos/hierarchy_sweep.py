"""Sweep the bound hierarchy on a noisy 4-qubit chain.

Prints every lower bound side by side for amplitude damping, once with
log-negativity and once with negativity, and flags any rung that is out of
order. The log-negativity sweep shows the one place the chain can break.
"""

import numpy as np

from locent import dense, localizable, noise
from locent.localizable import Frame
from locent.graphs import from_edge_list


def sweep(measure):
    g = from_edge_list(4, [(0, 1), (1, 2), (2, 3)])
    frame = Frame.from_sequence(g, [1])  # joins qubits 0 and 2
    pure = dense.to_density(dense.graph_state(g))
    print(f"\nmeasure = {measure}")
    print(f"{'q':>5} {'E_pauli':>9} {'E0':>9} {'E_red':>9} {'E_wlb':>9}  broken")
    for q in np.linspace(0, 1, 11):
        rho = noise.apply_noise(pure, noise.NoiseLayer.uniform(4, "AD", q))
        rep = localizable.hierarchy_report(rho, g, (0, 2), frame, measure=measure)
        broken = [k for k, ok in rep.check().items() if not ok]
        print(f"{q:5.2f} {rep.e_pauli:9.6f} {rep.e_zero:9.6f} {rep.e_reduced:9.6f} {rep.e_wlb:9.6f}  {', '.join(broken)}")


if __name__ == "__main__":
    sweep("log_negativity")
    sweep("negativity")
