"""Two-spinor calculus: spinor algebra, the chiral Dirac layer and V-A amplitudes."""

__version__ = "0.1.0"
