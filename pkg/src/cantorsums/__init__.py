"""
Cantor-type integer sequences C_{p,α} = FS({⌊pⁿα⌋}) with exact arithmetic:
digit streams, generator tables, a bitset engine for subset sums and
sumsets, arithmetic-progression tools and the end-to-end verifiers.
"""

__version__ = "0.1.0"
