"""
Rotation-angle schedules
========================

Every analysis in ropebound consumes a ThetaSchedule: the d/2 rotation
frequencies of a RoPE head plus the recipe that produced them.
"""
import numpy as np

import ropebound as rb

# The standard schedule: theta_i = base^(-2i/d).  theta_0 is always 1.
std = rb.make_standard(10_000, 128)
print(std.label, std.thetas[:3], "...", std.thetas[-1])

# Position interpolation divides every frequency by the scale factor s,
# which is the same as shrinking the relative distance m to m/s.
pi = rb.make_pi_scaled(10_000, 8, 128)
x = np.random.default_rng(0).standard_normal(128)
print("PI at m=8000 equals standard at m=1000:",
      np.allclose(rb.rotate(x, 8000, pi), rb.rotate(x, 1000, std)))

# NTK-aware scaling raises the base instead, so that the lowest frequency is
# interpolated while the highest is left alone.
print("NTK base for s=8:", rb.ntk_base(10_000, 8, 128))
ntk = rb.make_ntk_scaled(10_000, 8, 128)
print("lowest frequency ratio std/ntk:", std.thetas[-1] / ntk.thetas[-1])

# The two fine-tuning schedules compared in the violation-count experiment.
m1, m2 = rb.make_method1(), rb.make_method2()
print(m1.label, m1.thetas[-1])
print(m2.label, "theta_43, theta_44 =", m2.thetas[43], m2.thetas[44])

# The string grammar used by the command line.
for spec in ("std:500", "pi:10000:4", "ntk:10000:8", "method2"):
    print(f"{spec:>12} -> {rb.parse_schedule(spec).label}")
