"""Three growth regimes when the passage-time infimum is zero.

For power-law weights with CDF t^beta near 0, E[T(0, n e1)] is bounded when
beta < 1, grows like log n when beta = 1, and grows like n^(1 - 1/beta) when
beta > 1.  The classifier fits all three candidate models to a grid of n and
reports the winner.  Demo scale; the acceptance tests run the full grid.
"""

from linefpp.estimators import classify_regime

GRID = [16, 32, 64, 128, 256]


def main():
    for beta in (0.5, 1.0, 2.0):
        rep = classify_regime(beta, GRID, replicas=30, master_seed=7)
        print(f"beta = {beta}")
        print(f"  model        : {rep.model}")
        print(f"  exponent     : {rep.exponent:.4f}")
        print(f"  growth ratio : {rep.growth_ratio:.3f}  (E[T(max n)] / E[T(min n)])")
        means = ", ".join(f"{m:.3f}" for m in rep.means)
        print(f"  means        : {means}")


if __name__ == "__main__":
    main()
