"""
Checking the attention gap by simulation
========================================

With i.i.d. query and key components, the expected score of a similar key
k* = q + eps minus that of a random key k is 2 sigma^2 B(m).
"""
import ropebound as rb

sched = rb.make_standard(10_000, 128)
for m in (0, 1024, 4096):
    rep = rb.estimate_gap(sched, m, rb.McConfig(n_samples=100_000, seed=7))
    print(f"m={m:>5}: estimate {rep.gap_hat:8.3f} +- {rep.stderr:.3f}   theory {rep.theory:8.3f}   z={rep.z:+.2f}")

# Unequal component variances weight each frequency by its pair variance.
sigmas = [1.0] * 64 + [0.5] * 64
rep = rb.estimate_gap_hetero(sched, 1024, sigmas, rb.McConfig(n_samples=100_000, seed=7))
print(f"hetero m=1024: estimate {rep.gap_hat:.3f}  theory {rep.theory:.3f}  z={rep.z:+.2f}")

# When B(m) is negative, the similar key loses the argmax more often.
small = rb.make_standard(500, 128)
cfg = rb.McConfig(n_samples=20_000, seed=11)
for m in (10, 896):
    print(f"base 500, m={m:>3}: B={rb.b_value(small, m):7.2f}  "
          f"win rate among 16 keys {rb.argmax_win_rate(small, m, 16, cfg):.3f}")
