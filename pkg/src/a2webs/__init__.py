"""Exact calculus for trivalent planar webs.

Subpackages cover web storage and canonical forms (webcore), the
reduction engine and generator algebra (spider), weighted consistent
labelings (labelings), web immanants (immanants), complementary-minor
decompositions (minors), the two-label diagram bridge (tlbridge), and
weighted planar networks (networks).  All arithmetic is exact.
"""

__version__ = "0.1.0"
