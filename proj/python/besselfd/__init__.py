"""Meshless Helmholtz solver with oscillatory kernels."""

from _besselfd import (
    NodeSet,
    derivative_weights,
    hankel1_0,
    hex_grid,
    j0,
    j1,
    kernel_spectrum,
    solve_reference,
    square_grid,
    stencils,
    y0,
    y1,
)

__all__ = [
    "NodeSet",
    "derivative_weights",
    "hankel1_0",
    "hex_grid",
    "j0",
    "j1",
    "kernel_spectrum",
    "solve_reference",
    "square_grid",
    "stencils",
    "y0",
    "y1",
]
