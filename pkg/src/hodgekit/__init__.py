"""Exact verification of Hodge-index type statements for Lorentzian forms,
tropical fans and matroids."""
from .errors import (ConstructionError, HodgekitError, InputError, NotNefError, PreconditionError,
                     TheoremViolation)
from .forms import HomogeneousForm, PolarizedForm, is_c_lorentzian, is_lorentzian_orthant, polarize
from .instance import (LorentzInstance, NefCollection, build_bergman, build_diagonal_torus,
                       build_from_fan, build_symmetric_torus, load_instance)
from .matroid import Matroid

__version__ = "0.1.0"

__all__ = [
    "ConstructionError", "HodgekitError", "InputError", "NotNefError", "PreconditionError",
    "TheoremViolation", "HomogeneousForm", "PolarizedForm", "is_c_lorentzian",
    "is_lorentzian_orthant", "polarize", "LorentzInstance", "NefCollection", "build_bergman",
    "build_diagonal_torus", "build_from_fan", "build_symmetric_torus", "load_instance", "Matroid",
]
