"""Special monoids: pieces, units, Schützenberger graphs of 1, and end probes.

The modules are layered: ``presentations`` and ``rewriting`` handle words and
equality, ``pieces`` and ``units`` build the invertible-piece structure and
the units graph, ``graph`` and ``treecons`` provide folding and trees of
copies, ``schutz`` builds balls of the Schützenberger graph of 1 three ways,
and ``cli`` ties them together.
"""

__version__ = "0.1.0"
