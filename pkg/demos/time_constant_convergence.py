"""Watch T(0, n e1)/n converge to the support infimum.

For laws with infimum a > 0 the normalized passage time converges to a
(cheap lines form highways, so the limit is the infimum, not the mean of the
law). The table below shows the Monte Carlo mean closing in on a = 1.
"""

from linefpp.environment import ShiftedBernoulli
from linefpp.estimators import estimate_point_time

LAW = ShiftedBernoulli(1.0, 1.0, 0.05)  # a = 1, mean 1.05


def main():
    print("law: 1 + jump of size 1 with probability 0.05 (a = 1)")
    print(f"{'n':>6} {'mean T/n':>10} {'stderr':>10}")
    for n in (16, 32, 64, 128, 256, 512):
        s = estimate_point_time(LAW, 2, (1, 0), n, replicas=32, master_seed=2024)
        print(f"{n:>6} {s.mean:>10.5f} {s.stderr:>10.5f}")


if __name__ == "__main__":
    main()
