//! Global error bounds for the tensor complementarity problem `TCP(q, A)`:
//! find `x >= 0` with `A x^{m-1} + q >= 0` and `x . (A x^{m-1} + q) = 0`.
//!
//! The crate covers the multilinear primitives ([`tensor`]), the operators
//! `T_A`/`F_A` and the constants `alpha(T_A)`/`alpha(F_A)` ([`operators`]), a
//! support-enumeration solver ([`solve`]), and the error/solution bounds built
//! on top of them ([`bounds`]). [`io`] and [`cli`] provide the problem-file
//! format and the command-line front end.
//!
//! Data-parallel loops (grid sweeps, support enumeration, instance batches)
//! run on rayon when the `parallel` feature is enabled and sequentially
//! otherwise; see [`Execution`].

pub mod bounds;
pub mod cli;
pub mod error;
mod exec;
pub mod io;
pub mod operators;
pub mod report;
pub mod solve;
pub mod tensor;

pub use bounds::{BoundReport, Diagnostic, ResidualData};
pub use error::{Result, TcpError};
pub use exec::Execution;
pub use operators::{AlphaEstimate, AlphaKind, AlphaMethod, GridSpec, PVerdict};
pub use solve::{SolutionCertificate, SolveOptions, TcpInstance};
pub use tensor::DenseTensor;
