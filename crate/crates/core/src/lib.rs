//! The strong ring of simplicial complexes.
//!
//! Elements are integer combinations of Cartesian products of finite simplicial
//! complexes. Addition is disjoint union, multiplication is the Cartesian product
//! of cell sets. The crate builds the operators attached to ring elements
//! (exterior derivative, Dirac and Hodge operators, connection Laplacians), the
//! exact integer linear algebra needed to evaluate them, and the invariants and
//! spectral checks that tie them together.
//!
//! ```
//! use strongring::{parse_ring_expression, invariants::euler_characteristic};
//!
//! let g = parse_ring_expression("C4 - 2*K3 + L2*L3").unwrap();
//! assert_eq!(euler_characteristic(&g), -1);
//! ```

pub mod basis;
pub mod complex;
pub mod dynamics;
pub mod error;
pub mod expr;
pub mod generators;
pub mod graph;
pub mod invariants;
pub mod linalg;
pub mod operators;
pub mod poly;
pub mod ring;
pub mod spectral;
pub mod stanley_reisner;
pub mod verify;

pub use basis::{CellBasis, ProductCell};
pub use complex::{Simplex, SimplicialComplex};
pub use error::{Error, Result};
pub use expr::parse_ring_expression;
pub use generators::{generate, GeneratorSpec};
pub use graph::Graph;
pub use linalg::{IntMatrix, RatMatrix};
pub use ring::{ProductTerm, RingElement};
