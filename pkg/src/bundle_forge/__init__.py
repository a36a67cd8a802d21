"""Exact computer-algebra and quadrature verification of monopole bundles
over the two-sphere: projectors, connections, Chern numbers, and the
partial isometry between the tangent projector and the real charge-2
projector."""

from .exact_ring import (
    GaussianRational,
    VolumeUnits,
    XPoly,
    ZPoly,
    monomial_integral,
    reduce_x,
    reduce_z,
    x_to_z,
    z_to_x,
)
from .forms import (
    SphereTwoForm,
    XForm,
    ZForm,
    exterior_derivative,
    integrate_s2,
    restrict_to_sphere,
    wedge,
)
from .kets import (
    EquivariantKet,
    ScaledXMatrix,
    ScaledXVector,
    connection_form,
    curvature_scalar,
    equivariance_type,
    monopole_ket,
    named_real_objects,
    pairing,
    tilde_ket2,
)
from .bundles import (
    ChernReport,
    Section,
    WeightedProjector,
    chern_form_exact,
    chern_number_exact,
    covariant_derivative,
    exact_gauge,
    isometry_verify,
    normal_projector,
    projector_from_ket,
    real_form,
    section_pairing,
    sum_of_dyads,
    tangent_projector,
    transpose,
    verify_axioms,
)
from .quadbench import (
    NumericProjectorField,
    SphereGrid,
    chern_number_quad,
    gauge_field,
    monte_carlo_integral,
    tangent_frame_check,
)

__version__ = "0.1.0"
