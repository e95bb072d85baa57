//! Exact combinatorics of the local theta correspondence for real unitary
//! groups `U(p,q) × U(r,s)`: parameters, packets, nonvanishing of theta
//! lifts of tempered representations, and explicit lifts.

pub mod atobe;
pub mod error;
pub mod lift;
pub mod oracle;
pub mod packets;
pub mod scalar;
pub mod wire;

pub use atobe::{
    atobe_invariants, c_count, dual_param, nonvanishing, reduce_x, AtobeInvariants, SignedSet,
};
pub use error::{Result, ThetaError};
pub use lift::{
    eta_transfer, ktype_correspond, theta_lift_lds, theta_lift_tempered, KType, TemperedLift,
    ZetaRule,
};
pub use packets::*;
pub use scalar::*;
