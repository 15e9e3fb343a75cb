"""Minimum of n line weights: Monte Carlo vs quadrature vs asymptote.

E[M_n] drives the zero-infimum growth regimes, so it pays to have three
independent ways to compute it: a one-uniform-per-replica Monte Carlo, exact
adaptive quadrature of (1 - t^beta)^n, and the Gamma-function asymptote.
"""

from linefpp.environment import Power
from linefpp.estimators import mn_asymptote, mn_mean_power, mn_monte_carlo


def main():
    for beta in (1.0, 2.0):
        print(f"beta = {beta}")
        print(f"{'n':>7} {'Monte Carlo':>12} {'quadrature':>12} {'asymptote':>12}")
        for n in (1, 10, 100, 1000, 10000):
            mc = mn_monte_carlo(Power(beta, 1.0), n, replicas=50_000, master_seed=11)
            exact = mn_mean_power(beta, n)
            asym = mn_asymptote(beta, 1.0, n)
            print(f"{n:>7} {mc.mean:>12.6f} {exact:>12.6f} {asym:>12.6f}")


if __name__ == "__main__":
    main()
