"""
Significant itemset mining with Westfall-Young permutation thresholds.

The main entry points are ``compute_threshold`` (calibrate the corrected
significance threshold in a single enumeration pass) and
``extract_significant`` (list the patterns that pass it).
"""
__version__ = "0.1.0"

from .engine import CalibrationResult, SignificantPattern, compute_threshold, extract_significant
from .errors import (
    DegenerateLabels, Exhausted, LimitsExceeded, MalformedInput, MalformedMatrix, WylightError)
from .exact_test import ONE_TAILED, TWO_TAILED, min_attainable_pvalue, psi_table, pvalue_table
from .miner import TransactionDatabase, parse_fimi, parse_labels
from .permutation import LabelVector, PermutationMatrix, generate_permutations, load_permutations

__all__ = [
    "CalibrationResult", "SignificantPattern", "compute_threshold", "extract_significant",
    "DegenerateLabels", "Exhausted", "LimitsExceeded", "MalformedInput", "MalformedMatrix",
    "WylightError", "ONE_TAILED", "TWO_TAILED", "min_attainable_pvalue", "psi_table",
    "pvalue_table", "TransactionDatabase", "parse_fimi", "parse_labels", "LabelVector",
    "PermutationMatrix", "generate_permutations", "load_permutations",
]
