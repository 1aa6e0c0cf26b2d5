# %% [markdown]
# # Row-parallel integral engines
#
# Every engine produces the same table; they differ in how many additions and
# lockstep column steps they need.

# %%
import numpy as np

from intimg import compute, compute_naive, delayed_row_schedule

rng = np.random.default_rng(0)
img = rng.integers(0, 256, (240, 360), dtype=np.uint8)
reference = compute_naive(img)

# %%
for strategy, n in [("serial", None), ("two_row", None), ("four_row", None),
                    ("n_row", 8), ("diff_row", None)]:
    ii, trace = compute(img, strategy, n)
    assert ii == reference
    per_pixel = trace.additions / img.size
    print(f"{trace.strategy:10s} adds={trace.additions:>8,d} ({per_pixel:.2f}/px) cycles={trace.cycles:>7,d}")

# %% [markdown]
# Running every row at once with the plain recurrences only works as a
# wavefront: row r can start column c at cycle r + c.

# %%
sched = delayed_row_schedule(5, 5)
print(sched.cycles)
print("makespan:", sched.makespan, "cycles for 25 values")
