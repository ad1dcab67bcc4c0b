"""Product-quotient surfaces with p_g = q = 0, and Z_2^r cover calculus."""

from .groups import (
    CatalogError,
    FiniteGroup,
    GroupCatalog,
    automorphisms,
    conjugacy_classes,
    element_order,
    load_catalog,
    subgroup_generated,
)
from .orbifold import (
    GeneratingVector,
    Signature,
    enumerate_generating_vectors,
    hurwitz_orbits,
    rh_genus,
    stabilizer_set,
)
from .geometry import (
    Basket,
    SingularityType,
    action_is_free,
    euler_and_chi,
    fixed_point_data,
    hj_expansion,
    is_rdp,
    kx_squared,
    resolution_correction,
    surface_invariants,
)
from .pi1 import (
    AbelianInvariants,
    Presentation,
    abelianization,
    coset_enumeration_bounded,
    fiber_product_presentation,
    pi1_presentation,
    smith_normal_form,
    torsion_normal_generators,
)
from .covers import (
    BuildingData,
    DivisorClass,
    PicardLattice,
    burniat_configuration,
    cover_equations,
    double_cover_invariants,
    is_cover_irreducible,
    validate_building_data,
)
from .classify import Bounds, ClassificationRecord, classify

__version__ = "0.1.0"
