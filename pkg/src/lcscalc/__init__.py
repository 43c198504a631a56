"""Exact exterior calculus for locally conformally symplectic geometry."""

from .dga import PresentedCDGA, betti, betti_twisted, model_family
from .exterior import Chart, CoordinateMap, DifferentialForm, exterior_derivative, pullback, wedge
from .hodge import HLContext
from .lcs import ContactForm, LcsStructure, build_collar, verify_contact, verify_lcs
from .parser import parse_chart, parse_form, parse_scalar, parse_structure
from .scalar import ScalarExpr, ScalarRing

__all__ = [
    "Chart", "ContactForm", "CoordinateMap", "DifferentialForm", "HLContext", "LcsStructure",
    "PresentedCDGA", "ScalarExpr", "ScalarRing", "betti", "betti_twisted", "build_collar",
    "exterior_derivative", "model_family", "parse_chart", "parse_form", "parse_scalar",
    "parse_structure", "pullback", "verify_contact", "verify_lcs", "wedge",
]
