"""ocat: a verification workbench for finite strict higher categories.

Subpackages cover the graded cell model and its axioms, equivalence
search and degree invariants, functors/modifications, presheaves and
the representability criterion, limits and adjunctions, exact rational
linear algebra, symbol cohomology, and jet/operator duality, plus a
small presentation DSL and CLI.
"""

__version__ = "0.1.0"
