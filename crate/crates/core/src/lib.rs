//! Exact spectral computations on the buckyball graph: construction by
//! truncation, characteristic polynomial, Green and pseudo-Green matrices,
//! the sharp constants of the discrete Sobolev inequalities, and the
//! half-size block reduction.

pub mod exec;
pub mod graph;
pub mod green;
pub mod linalg;
pub mod reference;
pub mod sobolev;
pub mod spectral;
pub mod symmetry;
pub mod verify;
