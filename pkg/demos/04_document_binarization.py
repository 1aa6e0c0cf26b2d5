# %% [markdown]
# # Adaptive binarization
#
# Local mean and deviation over a 15x15 window from integral images of the
# page and its square; the result does not depend on the integral engine.

# %%
import tempfile
from pathlib import Path

from intimg import BinarizeParams, binarize, binarize_naive
from intimg.binarize import synthetic_document
from intimg.pgm import write_pbm, write_pgm

page = synthetic_document(240, 320, seed=4)
params = BinarizeParams(window=15, k=0.5, R=128)

# %%
results = {s: binarize(page, params, s) for s in ("serial", "two_row", "four_row", "diff_row")}
oracle = binarize_naive(page, params)
print({s: r == oracle for s, r in results.items()})
print(f"ink fraction: {oracle.bits.mean():.3f}")

# %%
out = Path(tempfile.mkdtemp())
write_pgm(out / "page.pgm", page)
write_pbm(out / "page.pbm", oracle.bits)
print("wrote", sorted(p.name for p in out.iterdir()), "to", out)
