pub mod cli;
pub mod error;
pub mod idmodule;
pub mod idring;
pub mod linalg;
pub mod manifest;
pub mod parse;
pub mod poly;
pub mod report;
pub mod ring;
pub mod scalars;
pub mod series;
pub mod pvgalois;
pub mod solver;

pub use error::{Error, Result};
pub use poly::Poly;
pub use ring::{Matrix, RingElem};
pub use scalars::{binomial, generalized_binomial, FieldSpec, Scalar};
pub use series::{mat_inverse, BiSeries, TruncSeries};
