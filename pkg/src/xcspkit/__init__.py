"""Constraint programming toolkit built around the XCSP3-core kernel.

Subpackages:

- :mod:`xcspkit.model` -- instance data model and ground-truth checkers
- :mod:`xcspkit.io` -- XCSP3 XML parsing and canonical serialization
- :mod:`xcspkit.generators` -- benchmark instance generators
- :mod:`xcspkit.engine` -- propagation + backtracking solver
- :mod:`xcspkit.harness` -- solution verification, campaigns, rankings
- :mod:`xcspkit.cli` -- command-line entry point
"""

__version__ = "0.1.0"
