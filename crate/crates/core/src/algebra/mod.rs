//! Exact graded-commutative algebra: generators, polynomials, Lie data and
//! background tensors.

pub mod generator;
pub mod lie;
pub mod poly;
pub mod tensors;

pub use generator::{GenData, Generator, GhostDegree, Role};
pub use lie::{lie_bracket, trace_pair, LieAlgebraData, LieValued};
pub use poly::{base_theta, base_x, normal_form, q, qi, Expr, Monomial, Poly, Q};
pub use tensors::{permutation_sign, BackgroundTensors};
