//! Exact computations with ruling curves on a hyperplane section of a smooth
//! quadric threefold, the hyperelliptic curves of marked lines they carry, and
//! the reconstruction of a ruling curve from its spin hyperelliptic datum.

pub mod bipoly;
pub mod checks;
pub mod correspondence;
pub mod error;
pub mod field;
pub mod io;
pub mod form;
pub mod incidence;
pub mod jacobian;
pub mod linalg;
pub mod model;
pub mod poly;
pub mod quadric;
pub mod reconstruction;
pub mod roots;
pub mod symmetry;

pub use error::{Error, FieldError, Result};
