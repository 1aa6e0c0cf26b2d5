# %% [markdown]
# # Line-buffer sizing
#
# A recursive engine keeps one full row of K-bit integral values. Keeping
# adjacent-column differences instead needs only N bits per word.

# %%
from intimg import internal_memory_report, strategy_cost_table
from intimg.hw import published_reduction_check

sizes = [(360, 240), (720, 576), (800, 640), (1280, 720), (1920, 1080), (2048, 1536), (2048, 2048)]

# %%
print(f"{'size':>10} {'K':>3} {'N':>3} {'std bits':>9} {'diff bits':>9} {'red %':>6} {'width %':>7}")
for w, h in sizes:
    r = internal_memory_report(w, h)
    print(f"{w}x{h:<5} {r.K:3d} {r.N:3d} {r.standard_bits:9d} {r.diff_bits:9d} "
          f"{r.reduction_pct:6.2f} {r.width_reduction_pct:7.2f}")

# %% [markdown]
# Two of the published reduction figures do not follow from ceil-log2 widths.

# %%
for row in published_reduction_check():
    mark = "  <-- differs" if row["anomalous"] else ""
    print(f"{row['width']}x{row['height']}: computed {row['computed_pct']:.1f}%, "
          f"published {row['published_pct']}%{mark}")

# %%
for row in strategy_cost_table(sizes[:2]):
    print({k: row[k] for k in ("width", "height", "naive_adds", "serial_adds", "parallel_adds",
                               "serial_cycles", "four_row_cycles")})
