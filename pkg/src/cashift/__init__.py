"""Linear cellular automaton shifts over F_p: languages, exact measures,
mixing diagnostics and homomorphisms."""

__version__ = "0.1.0"

from .ca import CAShift, ca_normalize, canonical_residue, constant_points, ideal_member
from .errors import BudgetError, NotCAFormError, ParseError, TheoremViolation
from .factor import Factorization, univariate_factor, verify_factor_hint
from .homs import (
    LocalRule,
    additivity_check,
    apply_local_rule,
    aut_group,
    dual_hom_search,
    equivariance_check,
    functional_eq_check,
    hom_search,
    poly_map_check,
    verify_unit_pair,
)
from .laurent import LaurentPoly, frobenius_power, parse_poly, shape
from .mixing import horizontal_mixing_check, mixing_scan, nonmixing_certificate
from .shift import (
    Configuration,
    MeasureValue,
    Window,
    cylinder_measure,
    evolve,
    language,
    language_by_projection,
    render,
)

__all__ = [name for name in dir() if not name.startswith("_")]
