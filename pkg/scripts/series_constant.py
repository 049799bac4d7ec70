"""Fit the constant bounding the small-theta series errors of the desk collision.

The errors are scaled as |R - R_series| d2^2 / theta^2, |I1 - I1_series| / |I1| / theta^2 and
|I2 - I2_series| d2^2 / theta^3. The printed maximum, rounded up with a safety margin, is the
constant frozen in the tests.
"""

import math

import numpy as np

from qtstar.packet import CollisionSetup, pointer_expansion


def main():
    m2 = 1000.0
    d1 = math.sqrt(m2)
    s = CollisionSetup.build(1.0, m2, 64.0, d1, 10 * d1)
    d2 = s.pointer.d ** 2
    worst = 0.0
    print(f"{'theta':>8}{'R':>12}{'I1':>12}{'I2':>12}")
    for theta in np.geomspace(0.01, 0.1, 11):
        t = theta * d2 * s.m2 / s.hbar
        if t < s.collision_time:
            continue
        e = pointer_expansion(s, t)
        r = abs(e.R_coeff - e.R_series) * d2 / theta ** 2
        i1 = abs(e.I1 - e.I1_series) / abs(e.I1) / theta ** 2
        i2 = abs(e.I2 - e.I2_series) * d2 / theta ** 3
        worst = max(worst, r, i1, i2)
        print(f"{theta:8.4f}{r:12.4e}{i1:12.4e}{i2:12.4e}")
    print(f"largest scaled error {worst:.4f}; frozen C = {math.ceil(worst * 1.1 * 10) / 10:.1f}")


if __name__ == "__main__":
    main()
