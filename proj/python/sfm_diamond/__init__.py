# SPDX-License-Identifier: Apache-2.0
"""Submodular function minimization over products of diamond lattices."""

from _sfm_diamond import (
    SfmError,
    brute_min,
    certify,
    generate,
    greedy_base,
    is_submodular,
    minimize,
    verify,
)

__all__ = [
    "SfmError",
    "brute_min",
    "certify",
    "generate",
    "greedy_base",
    "is_submodular",
    "minimize",
    "verify",
]
