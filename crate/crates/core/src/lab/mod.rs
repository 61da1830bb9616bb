//! Numerical counterparts of the analytic lemmas: singular strata, character
//! damping, the invariant projection and equidistribution of Hecke points.

pub mod damping;
pub mod equidist;
pub mod projection;
pub mod singular;

pub use damping::{character_damping, damping_factor, DirichletCharacter};
pub use equidist::{
    box_test_set, equidist_discrepancies, equidist_discrepancy, equidist_trend, fd_integral,
    trend_csv, TestFunction, TrendRow,
};
pub use projection::{
    dense_projection, invariance_defect, norm_identity, project_invariants, projection_on_units,
};
pub use singular::{
    singular_quadratic_roots, singular_stratum_index, verify_singular_hecke, LemmaReport,
    QuadraticRoots, SingularPoint,
};
