//! Integer homology of finite chain complexes through lambda-AT-models.
//!
//! A lambda-AT-model `((C, d), H, f, g, φ, λ)` is built by incremental
//! elimination without computing a Smith normal form. From it come the
//! Betti numbers (`|H_q|`), the candidate torsion primes (primes dividing
//! `λ`), and, after one AT-model over `Z/p` per candidate prime, the number
//! of invariant factors of each `H_q(C; Z)` that are powers of `p`.
//!
//! The [`oracle`] module computes the same invariants through Smith normal
//! forms and is used to cross-check results.

pub mod atmodel;
pub mod builders;
pub mod chain;
pub mod cli;
pub mod coeff;
pub mod complex;
mod engine;
pub mod error;
pub mod homology;
pub mod oracle;
pub mod reduce;

pub use atmodel::{
    compute_lambda_at_model, normalize_sign, representative_cycles, to_at_model_mod_p, to_rational_at_model,
    torsion_prime_candidates, verify_model, Identity, LambdaATModel, RationalATModel, Violation,
};
pub use builders::{
    cubical_chain_complex, cubical_from_voxels, simplicial_chain_complex, simplicial_from_facets, CubicalComplex,
    ElementaryCube, SimplicialComplex,
};
pub use chain::{Chain, GeneratorId, GradedMap};
pub use coeff::CoefficientSpec;
pub use complex::{reduce_mod_p, verify_complex, ChainComplex};
pub use error::{Error, Result};
pub use homology::{compute_integer_homology, euler_characteristic, torsion_recurrence, HomologyReport, TorsionTable};
pub use oracle::{homology_via_snf, rho_at_model, smith_normal_form, torsion_witnesses, IntegerMatrix, SNFResult};
pub use reduce::{compose, compose_model, preprocess, verify_contraction, ChainContraction};
