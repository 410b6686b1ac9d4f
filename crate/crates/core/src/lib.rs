//! Exact computations in the polynomial representation of the type-A rational
//! Cherednik algebra over fields of positive characteristic.

pub mod catalog;
pub mod dunkl;
pub mod error;
pub mod group;
pub mod hilbert;
pub mod kernel;
pub mod linalg;
pub mod poly;
pub mod run;
pub mod scalar;
pub mod stability;
pub mod upoly;

pub use catalog::{certify, singular_catalog, CatalogCheck, Certification, Family};
pub use dunkl::{check_commutators, CommutatorReport, DunklContext, OperatorMatrix};
pub use error::{Error, Result};
pub use group::{apply_transposition, divided_difference, Reducer, Transposition};
pub use hilbert::{
    baby_verma_series, compare, computed_hilbert, conjectured_hilbert, default_degree_cap, q_bracket, q_factorial,
    q_r_polynomial, shape_check_t1, Comparison, ConjectureVariant, CongruenceData, Provenance, Series, ShapeReport,
};
pub use kernel::{
    contravariant_pairing, gram_oracle, gram_oracle_kernel, is_in_kernel, is_singular, GradedKernel, KernelExport,
    KernelStatus, Level, Membership,
};
pub use linalg::RowEchelon;
pub use poly::{format_poly, monomials_of_degree, parse_poly, Monomial, MonomialBasis, Poly, ReducedPoly};
pub use run::{compute_hilbert, export_kernel, FastEval, FastEvalReport, HilbertRequest, HilbertRun};
pub use scalar::{CMode, CoeffDomain, ExtField, PolyRing, PrimeField, RatFunc, RatFuncField, Ring, Scalar};
pub use stability::{
    is_stably_in_kernel, iterated_difference, membership_at, verify_top_generator, GeneratorReport, NEvidence,
    StabilityInstance, StabilityOptions, StabilityVerdict,
};
pub use upoly::UPoly;
