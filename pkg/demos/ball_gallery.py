"""Grow balls B_t under different passage-time laws and rasterize them.

With a positive support infimum the ball converges to an L1 diamond; with
rare cheap lines the boundary grows spikes along those lines first, which is
easy to see in the PGM rasters this script writes next to itself.
"""

import os

from linefpp.environment import Environment, ShiftedBernoulli, ShiftedExponential, parse_distribution
from linefpp.exports import ball_raster_rows, write_pgm
from linefpp.search import grow_ball

OUT = os.path.join(os.path.dirname(__file__), "out")


def main():
    os.makedirs(OUT, exist_ok=True)
    laws = {
        "two_point_rare_jump": ShiftedBernoulli(1.0, 1.0, 0.05),
        "two_point_rare_cheap": ShiftedBernoulli(1.0, 1.0, 0.95),
        "shifted_exponential": ShiftedExponential(0.5, 1.0),
    }
    for name, dist in laws.items():
        env = Environment(42, dist, 2)
        for t in (30.0, 60.0, 120.0):
            ball = grow_ball(env, t, budget=10_000_000)
            rows = ball_raster_rows(ball.points, ball.bbox)
            path = os.path.join(OUT, f"ball_{name}_t{int(t)}.pgm")
            write_pgm(path, rows, comment=f"{name} t={t}")
            print(f"{name:24s} t={t:6.1f}  {len(ball.points):7d} points  -> {path}")


if __name__ == "__main__":
    main()
