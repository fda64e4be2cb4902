"""Exact modular cocycles, transverse densities and orientability checks.

Modules: ``symcore`` (rational functions and log sums), ``chars`` (line
characters of GL_r), ``algebroid`` (Lie algebroids in a frame), ``groupoid``
(pair, discrete and Lie action models), ``vanest`` (differentiation of
cocycles at the units), ``cech`` (parity graphs over covers), ``cli``.
"""

__version__ = "0.1.0"
