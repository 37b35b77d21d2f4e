"""eulercalc: exact calculus for Eulerian sequences of homology classes.

Subpackages follow the engine's layers: finite groups and characters
(fingroup, repring), windowed graded modules with exact F_p linear algebra
(falg, fplin), bar-resolution group homology (grouphom), the sequence
calculus itself (eulerian), the composition product (wreath), the
classical Steenrod oracle (oracle), shipped instance data (instances) and
the operation-label calculus (opcatalog).
"""

__version__ = "0.1.0"
