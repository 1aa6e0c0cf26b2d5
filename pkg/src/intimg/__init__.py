"""Integral images: row-parallel computation, hardware cost models and compact storage."""
from .binarize import BinarizeParams, BinaryImage, binarize, binarize_naive
from .core import (
    CostTrace,
    Image,
    IntegralImage,
    compute,
    compute_four_row,
    compute_n_row,
    compute_naive,
    compute_serial,
    compute_two_row,
    delayed_row_schedule,
)
from .hw import (
    BitWidthReport,
    DiffRowState,
    compute_diff_row,
    internal_memory_report,
    strategy_cost_table,
)
from .storage import (
    CompressedIntegral,
    MemoryReport,
    Rect,
    ReducedIntegral,
    box_filter_compressed,
    box_filter_modular,
    box_filter_sum,
    compress_plus_pattern,
    memory_report,
    reconstruct_cell,
    reduce_word_length,
    word_length_exact,
    word_length_full,
    word_length_variant,
)

__version__ = "0.1.0"
