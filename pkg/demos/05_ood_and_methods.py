"""
Out-of-distribution angles and the two fine-tuning schedules
============================================================

A dimension is out of distribution after extension if training never swept a
full period of it and the extended context pushes its angle past the trained
range.
"""
import ropebound as rb

train = rb.make_standard(10_000, 128)

rep = rb.ood_report(train, 4096, train, 32_768)
print("same base, 4k -> 32k, OOD dims:", rep.ood_dims)

small = rb.make_standard(500, 128)
print("base 500, 4k -> 1M, any OOD:", rb.ood_report(small, 4096, small, 10 ** 6).any_ood)

ntk = rb.make_ntk_scaled(10_000, 8, 128)
print("NTK s=8, lowest dim OOD:", rb.ood_report(train, 4096, ntk, 32_768).per_dim[-1].ood)

# Both methods avoid OOD angles, but only Method 1 keeps B non-negative.
for sched in (rb.make_method1(), rb.make_method2()):
    ood = rb.ood_report(train, 4096, sched, 32_768).any_ood
    counts = [rb.violation_count(sched, 1, n) for n in (15 * 1024, 30 * 1024)]
    print(f"{sched.label:>8}: OOD {ood}, negative-B counts up to 15k/30k: {counts}")
