//! Transcript scoring for speech recognition benchmarks.
//!
//! Text is normalized with [`textnorm`], aligned with a factored
//! Levenshtein transducer ([`fst`], [`align`]) and scored with TER and mTER
//! ([`metrics`]). [`dataset`] reads the corpus file formats.

pub mod align;
pub mod dataset;
pub mod error;
pub mod fst;
pub mod metrics;
pub mod textnorm;
pub mod types;

pub use align::{align_dae, align_dp, align_fst, DaeResult};
pub use error::{Error, Result};
pub use fst::{build_lev, LevTransducer, SymbolTable};
pub use metrics::{corpus_aggregate, mter, rank_models, ter, CorpusScore, Rate, UtteranceScore};
pub use textnorm::{normalize, NormConfig, Stage};
pub use types::{tokenize, Alignment, AlternativeSet, EditOp, OpKind, Token, TokenSeq};
