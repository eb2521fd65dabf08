//! Two-dimensional Yang-Mills theory as a computable gluing calculus.
//!
//! The crate evaluates partition functions and Wilson-loop expectation
//! values of 2D Yang-Mills with structure group SU(2) on arbitrary oriented
//! surfaces with boundaries and corners. Surfaces are assembled from
//! polygons by identifying edges; boundary states live in the reduced space
//! of class functions and are represented as truncated character expansions.
//! The same building blocks are exposed at the perturbative level
//! (propagator kernels, tree and wheel amplitudes, corner operator
//! algebras), so every closed-form identity used by the gluing calculus can
//! be cross-checked numerically against an independent code path.
//!
//! Module map:
//!
//! * [`lie_core`] — su(2) kernel: brackets, exp/log, BCH, Bernoulli
//!   numbers, the `F±`/`G±` generating functions and the det-sinh Jacobian.
//! * [`rep_su2`] — irreps, characters, Haar class quadrature,
//!   Clebsch-Gordan tensors, fusion numbers and 6-j symbols.
//! * [`surface`] — polygon gluing data, derived topology, boundary moves.
//! * [`tqft_state`] — character-expansion states, heat-kernel cylinders,
//!   circle and arc gluing, the closed-form surface partition function.
//! * [`diagrams`] — axial-gauge propagator kernels, wheel traces, tree
//!   resummation; the numerical verification layer.
//! * [`corner_algebra`] — graded corner algebras, the BCH star product and
//!   the small-model BFV operator with exact rational coefficients.
//! * [`wilson`] — Wilson loops via fusion numbers and 6-j symbols, with
//!   Monte Carlo Haar oracles.
//! * [`job`] — config/result documents and the verification suites behind
//!   the `ym2d` command-line tool.

pub mod corner_algebra;
pub mod diagrams;
pub mod job;
pub mod lie_core;
pub mod numerics;
pub mod rep_su2;
pub mod surface;
pub mod tqft_state;
pub mod wilson;
