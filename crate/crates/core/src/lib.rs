//! Generalized n-inner products on R^m: the Gram-determinant and diagonal
//! forms, randomized axiom checks, orthogonality and Cauchy-Schwarz, and
//! angles between subspaces together with their orthogonal complements.

pub mod axioms;
pub mod error;
pub mod forms;
pub mod grassmann;
pub mod linalg;
pub mod ninner;
pub mod sample;
pub mod subspace;

pub use axioms::{
    check_all, check_definition_1_1, overall_verdict, AxiomId, AxiomReport, BiasedForm,
    SampleConfig, Verdict, Witness,
};
pub use error::{Error, Result};
pub use forms::{form_inner, form_norm, generalized_delta, wedge_of_tuple, IndexTuple, NForm};
pub use grassmann::{
    complementary_minor, distance_matrix, dual_angle_check, dual_n_inner, grassmann_distance,
    laplace_identity_check, orthogonal_complement, pluecker_norm, subspace_angle, AngleResult,
    ComplementaryMinor, DualAngleCheck, SubspacePair,
};
pub use linalg::{determinant, numerical_rank, orthonormalize, Matrix};
pub use ninner::{
    misiak_reduce, n_inner, n_norm, pluecker_coordinates, DiagonalNForm, GramNForm, NInnerForm,
    NInnerProduct, VectorTuple,
};
pub use subspace::{
    cauchy_schwarz, decompose, is_orthogonal_to_subspace, CauchySchwarzVerdict, Decomposition,
    EqualityCase, Subspace,
};
