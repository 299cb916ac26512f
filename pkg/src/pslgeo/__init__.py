"""pslgeo: hyperbolic-plane models, the PSL(2,Z) tessellation of the upper
half-plane, the symmetric space of unit-determinant SPD matrices, and
constructive word-metric algorithms on PSL(d,Z)."""

__version__ = "0.1.0"
