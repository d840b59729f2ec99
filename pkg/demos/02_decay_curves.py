"""
Long-term decay curves
======================

B(m) = sum_i cos(m * theta_i) measures how much more attention a similar
token receives than a random one at relative distance m.  The classic upper
bound on |q^T R_m k| decays too, but it stays positive, so it cannot show the
point where similar tokens stop winning.
"""
from pathlib import Path

import ropebound as rb

out = Path("demo_output")
out.mkdir(exist_ok=True)

for base in (500, 10_000, 1_000_000):
    sched = rb.make_standard(base, 128)
    curve = rb.sample_curve(sched, "b", 100_000, stride=10)
    low = curve.values.argmin()
    print(f"base {base:>9}: B(0)={curve.values[0]:.0f}  min B={curve.values[low]:.2f} at m={curve.m[low]}")
    curve.to_csv(out / f"b_curve_base{base}.csv")

upper = rb.sample_curve(rb.make_standard(10_000, 128), "upper", 30_000, stride=25)
print("upper-bound factor at m=0:", upper.values[0], " at m=30000:", round(upper.values[-1], 2))
upper.to_csv(out / "upper_bound_base10000.csv")
print("CSV files written to", out.resolve())
