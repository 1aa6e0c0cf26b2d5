# %% [markdown]
# # Storing fewer integral bits
#
# Depth: keep 5 of every 3x3 block. Width: keep values modulo 2**L where L
# only has to cover the largest box filter.

# %%
import numpy as np

from intimg import (
    Rect,
    box_filter_compressed,
    box_filter_modular,
    box_filter_sum,
    compress_plus_pattern,
    compute_naive,
    memory_report,
    reduce_word_length,
    word_length_exact,
    word_length_variant,
)

rng = np.random.default_rng(1)
img = rng.integers(0, 256, (181, 200), dtype=np.uint8)
ii = compute_naive(img)

# %%
c = compress_plus_pattern(ii, img)
print("kept", c.stored_count, "of", c.trimmed_height * c.trimmed_width, "values")
rect = Rect(10, 20, 60, 80)
print(box_filter_sum(ii, rect), box_filter_compressed(c, rect))

# %% [markdown]
# Box filters up to 65x129 (the SURF decomposition) only need 22 bits, or
# 21 if boxes are never completely saturated.

# %%
bits = word_length_exact(8, 65, 129)
red = reduce_word_length(ii, bits, 65, 129)
print(bits, word_length_variant(8, 65, 129), box_filter_modular(red, Rect(0, 0, 128, 64)),
      box_filter_sum(ii, Rect(0, 0, 128, 64)))

# %%
for method in ("full", "exact", "variant", "method1", "method2_exact", "method2_variant"):
    r = memory_report(1920, 1080, 8, method, 65, 129)
    print(f"{method:16s} {r.word_bits:2d} bits  {r.bytes / 2**20:6.2f} MiB  -{r.reduction_pct:5.2f}%")
