"""
pregeomzol - Source Package

A desk-scale workbench for random (strongly) l-colourable structures over
finite pregeometries: vector, affine and projective spaces over prime fields,
plus the trivial pregeometry.

DESIGN PRINCIPLES:
1. Exact oracles first, Monte Carlo second
2. Fail early, fail visibly (caps raise, violations are reported)
3. Deterministic under a seed
4. Every run is reproducible from its manifest
"""

__version__ = "1.0.0"
__author__ = "pregeomzol maintainers"
