pub mod annular;
pub mod bundled;
pub mod dualdata;
pub mod error;
pub mod invertibility;
pub mod io;
pub mod linalg;
pub mod repdecomp;
pub mod skeletal;
pub mod vecg;

pub use error::{Error, Result};
