"""LatinLab: Latin squares, rainbow Hamilton cycles and absorption at desk scale."""
__version__ = "1.0.0"
