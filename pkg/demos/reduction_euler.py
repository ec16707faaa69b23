"""Euler characteristic of the reduction complex against the HVir vacuum character.

    python3 demos/reduction_euler.py [max_weight]
"""
import sys

from nwvoa.brst import euler_profile, reduced_structure_check


def main(n: int):
    for c in reduced_structure_check(mode_bound=2):
        print(f"{'ok ' if c['pass'] else 'BAD'} {c['name']} {c['detail']}")
    print("\n h  euler  character  nonzero J_tot sectors")
    for row in euler_profile(n):
        secs = {m: v for m, v in row["sectors"].items() if v}
        print(f"{row['h']:>2}  {row['euler']:>5}  {row['character']:>9}  {secs}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 4)
