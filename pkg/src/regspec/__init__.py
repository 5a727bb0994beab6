"""Exact limiting spectral moments of randomly weighted d-regular graphs."""

__version__ = "0.1.0"

from .capp import (
    Capp,
    DistinguishedTriple,
    EnumerationLimitError,
    InvalidPatternError,
    MultiplicityPoly,
    WalkDiagram,
    canonicalize,
    count_by_signature,
    diagram_of,
    enumerate_capps,
    enumerate_triples,
    is_valid_capp,
    multiplicity_poly,
    signature_of,
)
from .moments import (
    DomainError,
    EigenmomentTable,
    MomentSequence,
    PolyInD,
    deviation_table,
    eigenmoments,
    eighth_moment_closed_form,
    kesten_moment_exact,
    moment_expansion,
    moment_expansion_symbolic,
    semicircle_moment,
)
from .ensemble import (
    RegularGraph,
    WeightedGraph,
    WeightSpec,
    assign_weights,
    count_cycles,
    sample_regular_graph,
    weight_moments,
)
from .spectra import (
    MomentEstimate,
    SpectralSample,
    eigen_spectrum,
    empirical_density,
    kesten_density,
    kesten_moment_numeric,
    monte_carlo_moments,
    trace_moments,
)
