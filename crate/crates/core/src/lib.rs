//! Four-party symmetric states, exact coordinate geometry, and the filtering
//! protocol that uses them to raise the maximally entangled fraction of a
//! noisy bipartite state.
//!
//! The crate is split along the natural seams of the problem:
//!
//! - [`tensor`]: dense complex operator algebra on labeled tensor spaces
//!   (tensor products, subsystem permutation, partial transpose and trace,
//!   hermitian spectra, seeded sampling, JSON I/O).
//! - [`states`]: the symmetric state families (exchange-symmetric "Werner"
//!   states, isotropic states, and the four-parameter family living on
//!   (A1, A2, B1, B2)) together with twirls and threshold predicates.
//! - [`geometry`]: exact rational geometry of the coordinate vector
//!   (l1, l2, l3): the state simplex, the positive-partial-transpose
//!   polytope, their intersection, the separable polytope, and the region
//!   classifier.
//! - [`activation`]: the two-pair filtering protocol, evaluated both by
//!   brute force on the full six-subsystem space and through a closed form
//!   validated against it, plus the Bell-basis measurement variant.
//! - [`witness`]: the entanglement witness for the symmetric family and its
//!   empirical positivity check on product states.
//! - [`distill`]: numerical one-copy distillability certification by
//!   Schmidt-rank-two minimization of the partial transpose.
//! - [`selfcheck`]: the cross-validation suite wired into the CLI.
//!
//! Floating point is used for operators and optimization; every polytope
//! verdict and every published coordinate is computed in exact rational
//! arithmetic (see [`rational`]).

pub mod activation;
pub mod distill;
pub mod error;
pub mod geometry;
pub mod rational;
pub mod selfcheck;
pub mod states;
pub mod tensor;
pub mod tol;
pub mod witness;

pub use error::{Error, Result};
pub use rational::{parse_rational, rat, rat_int, rat_to_f64, Rat};
pub use tensor::{
    flip_operator, max_entangled_projector, max_entangled_state, LabeledOperator, PureState,
    SubsystemLayout,
};
