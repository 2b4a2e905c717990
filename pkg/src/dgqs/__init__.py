"""Exact computations with DG modules over connected cochain DG algebras:
cohomology, minimal models, semi-free filtrations, splitting of
projective summands, and the cone length / ghost length / level
invariants."""

__version__ = "0.1.0"

from .algebra import (AlgebraElement, GradedAlgebra, PolynomialDGAlgebra, TableAlgebra,
                      ValidationReport, alg_diff, alg_mul, make_dg_polynomial, make_table_algebra,
                      validate_algebra)
from .builders import koszul_complex, multiplication_cone
from .errors import (BudgetExceeded, DGError, Inconclusive, ParseError, ValidationError,
                     WindowTooSmall)
from .field import Field
from .filtration import (ClassBounds, MinimalModel, SemifreeFiltration, cone_length,
                         dg_free_class, find_filtration, minimize)
from .homology import cohomology, induced_map, is_ghost, is_quasi_iso, minimal_cohomology_generators
from .invariants import ghost_dimension, ghost_length, ghost_tower, level
from .kernels import BACKEND
from .module import (BasedDGModule, ModuleMap, compose, d_hom, direct_sum, free_module, homotopic,
                     identity, mapping_cone, null_homotopy, suspend, validate_module)
from .quillen_suslin import (Projector, cone_presentation, extract_free_basis,
                             split_categorically_projective, split_semiprojective)
from .workspace import Workspace, parse_workspace

__all__ = [n for n in dir() if not n.startswith("_")]
