"""Exact computations with Soergel bimodules, moment graphs and nil-Hecke rings."""
from .coxeter import CoxeterGroup, GroupElement, load_realization, preset
from .polyring import Poly, RatFun

__all__ = ["CoxeterGroup", "GroupElement", "load_realization", "preset", "Poly", "RatFun"]
__version__ = "0.1.0"
