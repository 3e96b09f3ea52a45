//! Exact-arithmetic engine for generalized inverses of matrices viewed as
//! morphisms of a matrix category with involution.
//!
//! The crate computes {1,3}-, {1,4}-, Moore-Penrose, group, core and dual
//! core inverses over ℚ and ℚ(i) through several independent constructive
//! routes, returns equation-level certificates for every result, and
//! machine-checks the invertibility equivalences, factorization identities
//! and bordered-matrix criteria the routes rest on.
//!
//! Everything is exact: scalars are arbitrary-precision rationals or
//! Gaussian rationals in canonical form, equality is structural, and no
//! tolerances exist anywhere.

pub mod batch;
pub mod error;
pub mod geninv;
pub mod io;
pub mod mat;
pub mod morphism;
pub mod random;
pub mod scalar;
pub mod theorems;

pub use error::{EngineError, GenError, MatError};
pub use geninv::{
    all_four_inverses, core_via_annihilator, core_via_composition, core_via_kernel,
    core_via_projectors, default_annihilator, dual_core_via_cokernel, dual_core_via_composition,
    dual_core_via_projectors, group_inverse, group_inverse_hartwig, mp_inverse, mp_routes,
    one_three_inverse, one_four_inverse, verify, AllFour, Certificate, EquationCheck,
    GenInvResult, InverseKind, MpRoutes, NotInvertibleReason, Route, UnitData,
};
pub use mat::{Invertibility, Mat, RrefResult, SingularWitness};
pub use morphism::{
    cokernel, inner_inverse, is_epic, is_monic, kernel, InvertOutcome, Morphism, Obj,
    PredicateOutcome,
};
pub use random::{gen_random, random_dense, random_with_rank, IndexClass};
pub use scalar::{ArithOp, Field, Scalar};
pub use theorems::{
    bordered_assemble, check_annihilator_theorem, check_bordered_core, check_bordered_dual,
    check_bordered_group, check_core_kernel_theorem, check_ring_unit_core, index_oracle,
    lemma13_witnesses, star_invertibility, Bordered, HypothesisCheck, StarInvertibility,
    TheoremReport, WitnessPair,
};
