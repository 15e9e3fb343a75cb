"""How fast B_t fills the limiting L1 diamond.

Outer inclusion (B_t inside the diamond of radius t/a) is a hard guarantee.
Inner inclusion is asymptotic: the fraction of the (1 - eps)-scaled diamond
covered by B_t climbs to 1 as t grows.
"""

from linefpp.environment import Environment, ShiftedBernoulli
from linefpp.estimators import shape_metrics


def main():
    env = Environment(97, ShiftedBernoulli(1.0, 1.0, 0.05), 2)
    print(f"{'t':>6} {'outer ok':>9} {'inner fill (eps=0.25)':>22} {'ball size':>10}")
    for t in (25.0, 50.0, 100.0, 200.0, 400.0):
        m = shape_metrics(env, t, eps=0.25)
        print(f"{t:>6.0f} {str(m.outer_ok):>9} {m.inner_fraction:>22.4f} {m.ball_size:>10}")


if __name__ == "__main__":
    main()
