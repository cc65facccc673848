"""qgauss - quantum least-constraint hydrodynamics workbench"""

__version__ = "0.1.0"
