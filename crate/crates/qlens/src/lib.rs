//! Spectral geometry of the quantum lens spaces `L_q(p, r)`.

pub mod bundle;
pub mod error;
pub mod hilbert;
pub mod lens;
pub mod ncalgebra;
pub mod qarith;
