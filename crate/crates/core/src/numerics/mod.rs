//! Numerical cross-checks of the closed-form geometry: Jacobi fields by
//! RK4, Monte Carlo volume growth, and finite-difference Busemann
//! Laplacians in the SPD model of `SL(n,R)/SO(n)`.

pub mod busemann;
pub mod jacobi;
pub mod kernels;
pub mod spd;
pub mod volume;

pub use busemann::{busemann_probe, BusemannProbe};
pub use jacobi::jacobi_verify;
pub use kernels::{log_sinh_ratio, sinh_ratio, sqrt_coth};
pub use spd::{spd_distance, spd_geodesic, spd_log, SpdPoint};
pub use volume::{entropy_estimate, volume_ball, VolumeEstimate, VolumeGrowthCurve};
