"""Print the walk regime for each study density as a small table.

For every density in the study roster: the mean of log rho, the walk class,
the tail exponent kappa when one exists, and the ballistic speed when finite.
"""
import sys

from rwre import Beta, SplitBeta, TriangleMix, TwoBump, Uniform, classify

ROSTER = [
    Uniform(),
    Beta(3, 3),
    Beta(5, 2),
    TriangleMix(),
    SplitBeta(),
    TwoBump(0.27, 0.67),
    TwoBump(0.3, 0.7),
    TwoBump(0.38, 0.7),
]


def fmt(v, spec=".4f"):
    return "-" if v is None else format(v, spec)


def main():
    print(f"{'density':<20} {'E[log rho]':>11} {'class':<28} {'kappa':>7} {'speed':>7}")
    for density in ROSTER:
        rep = classify(density)
        print(
            f"{density.label:<20} {rep.mean_log_rho:>11.4f} {rep.walk_class:<28} "
            f"{fmt(rep.kappa, '.3f'):>7} {fmt(rep.ballistic_speed, '.3f'):>7}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
