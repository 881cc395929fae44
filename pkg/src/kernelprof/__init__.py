"""kernelprof: measure micro-kernel performance profiles across
implementation variants and call-boundary regimes, then model them
(arithmetic intensity, roofline classification, invocation-cost fitting)
to pick the best implementation for a given working-set range.
"""

__version__ = "0.1.0"
