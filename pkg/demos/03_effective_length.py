"""
Effective context length and the base lower bound
=================================================

A schedule keeps its discrimination ability up to the first m where B(m)
turns negative.  Searching over the base gives the smallest base that keeps
B non-negative over a whole target context.
"""
import ropebound as rb

for base in (500, 10_000, 1_000_000):
    res = rb.effective_length(rb.make_standard(base, 128), 10 ** 6)
    print(f"base {base:>9}: effective length {res.effective_length}")

# A small base never makes it past a few hundred tokens, whatever is trained.
for length in (4096, 32_768):
    bound = rb.lower_bound_base(length, 128)
    lo, hi = bound.bracket
    print(f"L={length}: base >= {bound.base:.4g}  (bracket {lo:.6g} .. {hi:.6g})")

# Passing bases are not one interval.  Probes inside the final bracket show
# the pattern the bisection could not see.
bound = rb.lower_bound_base(8192, 128)
print("probe pattern inside the 8k bracket:", [ok for _, ok in bound.probes])
