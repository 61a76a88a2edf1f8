"""kcx: exact connections, curvature and torsion over affine presentations.

The package is layered bottom-up:

- `fields`, `poly`, `parse`: exact arithmetic and the expression grammar
- `groebner`, `linsolve`: normal forms for ideals/submodules, exact solving
- `algebra`, `modules`: presented algebras and modules, differentials, tensors
- `tangent`: tangent algebras, bundles and their structure maps
- `connections`, `curvature`, `solve`, `dualnum`: the geometry on top
- `workspace`, `cli`, `gallery`: definition files, commands, worked examples
"""

from .algebra import (
    AlgebraElement,
    AlgebraMorphism,
    PresentedAlgebra,
    apply_morphism,
    compose_morphisms,
    element_equal,
    identity_morphism,
    localize,
    make_algebra,
    make_morphism,
    tensor_over_base,
)
from .connections import (
    AxiomReport,
    Connection,
    apply_connection,
    connection_equal,
    free_canonical_connection,
    from_horizontal,
    make_connection,
    pullback_connection,
    retract_connection,
    to_horizontal,
    to_vertical,
    verify_connection_axioms,
    vertical_from_horizontal,
)
from .curvature import (
    check_curvature_correspondence,
    check_torsion_correspondence,
    module_curvature,
    module_torsion,
    tangent_curvature,
    tangent_torsion,
)
from .dualnum import dual_bundle, dual_connection_solve, dual_numbers_structure
from .errors import (
    BaseMismatch,
    BracketingConditionFailure,
    KcxError,
    MembershipFailure,
    ModuleNotKahler,
    SectionRetractionFailure,
    WellDefinednessFailure,
)
from .fields import GF, QQ, Field
from .groebner import (
    IdealBasis,
    ModuleBasis,
    groebner_basis,
    module_groebner_basis,
    module_normal_form,
    normal_form,
)
from .linsolve import AffineSolutionSpace, LinearEquation, affine_linear_solve
from .modules import (
    ModuleElement,
    ModuleMorphism,
    PresentedModule,
    element_is_zero,
    free_module,
    kahler_module,
    make_module,
    tensor_modules,
    universal_derivation,
    wedge_square,
)
from .parse import ParseError, poly_normalize
from .poly import Polynomial, formal_partial, poly_substitute
from .solve import glued_connection_check, solve_connection_space
from .tangent import (
    bracketing,
    bundle_combine,
    bundle_context,
    sym_algebra_bundle,
    tangent_algebra,
    tangent_apply_functor,
    tangent_structure_maps,
    u_map,
)
from .workspace import Workspace, parse_workspace, render_workspace

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
