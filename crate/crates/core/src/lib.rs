//! Synthetic grammatical-error generation for morphologically rich languages
//! and the evaluation side of grammatical error correction.
//!
//! * [`corpus`] reads and writes plain, tagged, parallel and split corpora
//!   and filters low-quality sentences.
//! * [`tokenizer`] splits text into tokens while keeping the whitespace
//!   between them.
//! * [`morpho`] holds the lexicons behind the grammatical noise.
//! * [`noise`] corrupts sentences and builds parallel pairs and typed test
//!   sets with invertible edit logs.
//! * [`gleu`] and [`span`] score correction output.

pub mod corpus;
pub mod gleu;
pub mod morpho;
pub mod noise;
pub mod span;
pub mod tokenizer;
