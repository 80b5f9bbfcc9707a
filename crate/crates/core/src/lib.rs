//! Full-rank certificates for the unfoldings of rational triangles.
//!
//! A triangle with angles `q_i * pi / k` unfolds to a translation surface
//! that is a cyclic cover of the sphere. The crate computes the eigenspace
//! data of that cover, runs the divisor/unit-group criterion that certifies
//! a full-rank orbit closure, and turns the result into a dense-orbit
//! verdict. Two supporting checks ride along: the loop-space dimension of
//! strongly connected digraphs, and the planar integrals whose
//! nonvanishing drives the rank bounds.

pub mod angle;
pub mod bform;
pub mod certify;
pub mod digraph;
pub mod error;
pub mod hodge;
pub mod quad;
pub mod report;

pub use angle::{AngleSystem, GcdPolicy, ResidueSet};
pub use certify::{make_certificate, Certificate, Entry, Filters, Statistics, Verdict};
pub use digraph::{Digraph, LoopVector};
pub use error::{Error, Result};
