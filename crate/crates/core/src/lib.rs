//! Exact traveling waves of the third- and fifth-order KdV–BBM equations,
//! their Weierstrass-elliptic classification, finite-difference residual
//! oracles and a pseudospectral exponential integrator for the PDEs.

pub mod cli;
pub mod elliptic;
pub mod spectral;
pub mod verify;
pub mod waves;
