//! Exact symbolic computation for operadic twisting, brace trees and Hochschild actions.

pub mod algebra;
pub mod brace;
pub mod classical;
pub mod cobar;
pub mod complexes;
pub mod conv;
pub mod exactalg;
pub mod gerbr;
pub mod hochschild;
pub mod homology;
pub mod operad;
pub mod suite;
pub mod trees;
pub mod twisting;
pub mod vectors;

pub use exactalg::{Perm, Q};
pub use operad::{Elem, Operad};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("arity: {0}")]
    Arity(String),
    #[error("parse: {0}")]
    Parse(String),
    #[error("index {0} out of range")]
    Index(usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
