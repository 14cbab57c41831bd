"""Where does entanglement between two qubits die as neighbourhoods grow?

For symmetric neighbourhood counts (n, n, n) the critical noise strength has
a closed form under bit flip. The scan below compares it with a numerical
root of the analytic E0 curve and then shows how other channel pairs shift
the threshold.
"""

from locent.analytic import NeighborhoodCounts, critical_noise, critical_noise_numeric

print(f"{'n':>3} {'closed form':>12} {'bisection':>12}")
for n in range(1, 11):
    print(f"{n:3d} {critical_noise(n):12.8f} {critical_noise_numeric(NeighborhoodCounts.symmetric(n)):12.8f}")

print("\nthreshold by channel pair at n = 2")
for pair in ("00", "01", "11", "13", "22", "33"):
    q_c = critical_noise_numeric(NeighborhoodCounts.symmetric(2), pair=pair)
    print(f"  pair {pair}: q_c = {q_c:.6f}")
