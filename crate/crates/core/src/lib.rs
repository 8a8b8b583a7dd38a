//! Combinatorics of pointed Prym moduli boundaries: weighted stable graphs,
//! degree-2 harmonic morphisms, Prym structures and their strata, symbolic
//! pullbacks of boundary classes, and the modular-form dimension counts
//! behind the genus-1 computations.

pub mod canon;
pub mod error;
pub mod graph;
pub mod harmonic;
pub mod modforms;
mod morphism_canon;
pub mod prym;
pub mod psi;
pub mod pullback;
pub mod repro;
pub mod report;
pub mod specialize;
pub mod strata;

pub use canon::{canonical_code, canonical_form, CanonicalGraph};
pub use error::{Error, Result};
pub use graph::{validate_graph, validate_structure, GraphBuilder, StabilityClass, WeightedGraph};
pub use harmonic::{validate_harmonic, validate_harmonic_in, HarmonicMorphism, Variant};
pub use report::{Issue, IssueKind, ValidationReport};
pub use prym::{
    classify, contract, enumerate_prym_structures, enumerate_prym_structures_with, validate_prym,
    validate_prym_in, Classification, PrymStructure, VertexClass, VertexData,
};
pub use psi::{PsiExpression, PsiSymbol};
pub use strata::{
    build_gluing, build_elliptic_pair_gluing, enumerate_strata, enumerate_strata_in, nontaut_bound,
    stratum_factors, Ambient, FactorKind, GluingParams, StratumDescriptor, StratumFactor,
};
pub use specialize::{enumerate_generic_pairs, specializations, EdgeColor, GenericPair};
pub use pullback::{normal_bundle_c1, normal_bundle_top, pullback_boundary_class, q1, q2, PullbackResult, PullbackTerm};
pub use modforms::{cusp_dim, cusp_dim_gamma12, eichler_shimura_dim, eisenstein_dim, first_nonzero_cusp_weight, CurveData};
