pub mod attacks;
pub mod code;
pub mod error;
pub mod experiment;
pub mod field;
pub mod grs;
pub mod io;
pub mod matrix;
pub mod poly;
pub mod schemes;
pub mod vector;

pub use code::{LinearCode, SquareDimReport};
pub use error::{Error, Result};
pub use field::{Fe, Field, FieldSpec};
pub use grs::GrsSpec;
pub use matrix::{EchelonBasis, Matrix};
