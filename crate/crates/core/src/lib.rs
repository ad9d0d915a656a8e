//! Finite combinatorics of ab-initio (Hrushovski) smooth classes of graphs.
//!
//! * [`graph`], [`iso`]: graphs with named vertices, the pre-dimension
//!   `δ_α`, free amalgams and induced-copy enumeration.
//! * [`smooth`]: self-sufficiency (`≤_α`), closures, class membership for
//!   `K_α⁺`, `K_α^f`, `K_α^μ`, zero-minimal algebraicity and generic windows.
//! * [`density`]: maximum density, degeneracy and vertex-colouring
//!   refutations of the one-point Ramsey property.
//! * [`convex`]: coloring matrices, Dirac weights and an exact LP decision of
//!   the convex Ramsey condition.
//! * [`analysis`]: closed embeddings, component graphs over `A`, cycles,
//!   tree-pairs and the inductive colouring construction.
//! * [`witness`]: the explicit triangle/cycle tree-pair and its verifier.

pub mod analysis;
pub mod budget;
pub mod convex;
pub mod density;
pub mod error;
pub mod flow;
pub mod graph;
pub mod iso;
pub mod lp;
pub mod rational;
pub mod smooth;
pub mod witness;

pub use budget::Budget;
pub use error::{Error, Result};
pub use graph::{delta, delta_of, free_amalgam, induced, order_expand, relative_delta, Embedding, Glue, Graph, GraphJson, VertexSet};
pub use iso::{are_isomorphic, enumerate_copies};
pub use rational::{parse_rational, Rational};
