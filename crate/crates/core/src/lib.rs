//! Exact computation of genus-zero graph quasimap invariants of GIT
//! quotients `V//G` from weight and root data, through Jeffrey-Kirwan
//! residues, together with the Vafa-Intriligator finite sum used to
//! cross-check generating series.

pub mod error;
pub mod git_model;
pub mod invariants;
pub mod jk_residue;
pub mod linalg;
pub mod presets;
pub mod ratfun;
pub mod vafa_intriligator;

pub use error::{Error, Result};
