//! Exact-arithmetic engine for the incidence configurations of polygons
//! inscribed in a conic: Pascal lines, Steiner/Kirkman points, mystic conics
//! and their pencils, dual and degenerate variants, label symmetries, and
//! nets of lines and conics.
//!
//! Everything that carries a mathematical verdict runs over arbitrary
//! precision rationals; floating point exists only in the SVG renderer.
//! Curves of degree d are homogeneous ternary forms stored as primitive
//! integer coefficient vectors in graded-lex order (x > y > z), which makes
//! equality, hashing and census bookkeeping exact.

pub mod error;
pub mod rat;
pub mod linalg;
pub mod poly;
pub mod projective;
pub mod scene;
pub mod decomposition;
pub mod hexagon;
pub mod octagon;
pub mod symmetry;
pub mod nets;
pub mod dual_degenerate;
pub mod render;

pub use error::Error;
pub use rat::Rat;
pub use linalg::RatMatrix;
pub use poly::HomoPoly;
pub use projective::{Conic, HLine, HPoint};
pub use scene::Scene;
pub use decomposition::{Pencil, ResidualCertificate};
