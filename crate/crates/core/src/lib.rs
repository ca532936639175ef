//! Reconstruction of shredded documents from scanned strip sheets.
//!
//! The pipeline runs shred → compose → segment → preprocess → score →
//! assemble → stitch → evaluate. Every stage is deterministic given its
//! inputs and seed.

pub mod assembler;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod manifest;
pub mod oracle;
pub mod pgm;
pub mod pipeline;
pub mod preprocess;
pub mod raster;
pub mod segmenter;
pub mod shredder;
pub mod similarity;
pub mod stitch;

pub use assembler::{build_score_table, greedy_assemble, Chain, ChainMember, Reconstruction, SeamScoreTable, TableOptions};
pub use corpus::{generate_corpus, DocClass};
pub use error::{Error, Result};
pub use eval::{adjacency_accuracy, evaluate, page_purity, EvalReport};
pub use oracle::brute_force_assemble;
pub use pgm::{read_pgm, write_pgm};
pub use preprocess::{edge_profile, normalize_orientation, remove_blanks, EdgeProfile, Upright};
pub use raster::{binarize, to_gray, BinaryRaster, GrayRaster};
pub use segmenter::{segment_sheet, SegmentedStrip};
pub use shredder::{compose_sheet, shred, shred_document, GroundTruth, Strip, StripId, StripSet};
pub use similarity::{build_template_bank, match_pair, seam_score, Orientation, SeamScore, TemplateBank};
pub use stitch::stitch;
