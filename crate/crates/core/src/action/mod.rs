//! Hecke operators acting on finite-level matrix spaces and on the upper
//! half-plane.

pub mod finite;
pub mod plane;

pub use finite::{
    hecke_apply_finite, orbit_table, FiniteLevelFn, FnValue, OrbitTable,
};
pub use plane::{hecke_points, mobius, reduce_fd, t_f_average, HPoint};
