//! Bilingual corpus filtering, comparable-document alignment and MT
//! evaluation metrics.

pub mod cli;
pub mod corpus_io;
pub mod error;
pub mod filter;
pub mod metrics;
pub mod seq_align;
pub mod similarity;
pub mod textnorm;

pub use error::{Error, Result};
