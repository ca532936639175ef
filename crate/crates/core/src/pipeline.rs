//! In-memory composition of the stages, shared by the command line and tests.

use serde::{Deserialize, Serialize};

use crate::assembler::{
    build_score_table_traced, greedy_assemble, Reconstruction, ScoringStrip, TableOptions, TraceRecord,
};
use crate::corpus::{generate_corpus, DocClass};
use crate::error::Result;
use crate::eval::{evaluate, EvalReport};
use crate::preprocess::{normalize_orientation, remove_blanks, Upright};
use crate::raster::BinaryRaster;
use crate::segmenter::{relabel_ground_truth, segment_sheet};
use crate::shredder::{compose_sheet_with_layout, shred_document, GroundTruth, Strip, StripId};
use crate::similarity::TemplateBank;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssemblyOptions {
    pub m: usize,
    pub epsilon: f64,
    pub early_stop: bool,
    pub orientation_hints: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Assembly {
    /// Flips are relative to the strips as given, not as normalized.
    pub reconstruction: Reconstruction,
    pub removed: Vec<StripId>,
    pub orientation: Vec<(StripId, Upright)>,
    pub evaluations: usize,
}

/// Blank removal, orientation normalization, scoring and greedy assembly.
pub fn assemble_strips(
    strips: &[Strip],
    bank: &TemplateBank,
    opts: &AssemblyOptions,
    trace: impl FnMut(TraceRecord),
) -> Result<Assembly> {
    let (kept, removed) = remove_blanks(strips.to_vec(), opts.epsilon);
    let oriented: Vec<_> = kept.iter().map(normalize_orientation).collect();
    let scoring = oriented
        .iter()
        .map(|o| ScoringStrip::new(&o.strip, o.upright.is_confident()))
        .collect::<Result<Vec<_>>>()?;
    let table = build_score_table_traced(
        &scoring,
        bank,
        TableOptions {
            early_stop: opts.early_stop,
            use_orientation_hints: opts.orientation_hints,
        },
        trace,
    )?;
    let mut reconstruction = greedy_assemble(&table, opts.m)?;
    for chain in &mut reconstruction.chains {
        for member in &mut chain.members {
            if let Some(o) = oriented.iter().find(|o| o.strip.id == member.id) {
                member.flipped ^= o.upright.corrected();
            }
        }
    }
    let mut orientation: Vec<(StripId, Upright)> = oriented.iter().map(|o| (o.strip.id, o.upright)).collect();
    orientation.sort_by_key(|(id, _)| *id);
    let mut removed: Vec<StripId> = removed.iter().map(|s| s.id).collect();
    removed.sort();
    Ok(Assembly {
        reconstruction: reconstruction.normalized(),
        removed,
        orientation,
        evaluations: table.evaluations,
    })
}

/// Seed for page `index` of a generated document.
pub fn page_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

pub fn generate_document(class: DocClass, pages: usize, width: usize, height: usize, seed: u64) -> Result<Vec<BinaryRaster>> {
    (0..pages)
        .map(|i| generate_corpus(class, width, height, page_seed(seed, i)))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct DocumentRun {
    pub ground_truth: GroundTruth,
    pub strips: Vec<Strip>,
    pub assembly: Assembly,
    pub report: EvalReport,
}

/// Shred, scan onto a sheet, segment it again, reconstruct and score.
pub fn run_document(
    class: DocClass,
    pages: &[BinaryRaster],
    gap: usize,
    seed: u64,
    bank: &TemplateBank,
    opts: &AssemblyOptions,
) -> Result<DocumentRun> {
    let (set, gt) = shred_document(pages, opts.m, seed)?;
    let (sheet, layout) = compose_sheet_with_layout(&set, gap, seed)?;
    let segments = segment_sheet(&sheet)?;
    let bounds: Vec<_> = segments.iter().map(|s| s.bounds).collect();
    let (ground_truth, _) = relabel_ground_truth(&gt, &layout, &bounds)?;
    let strips: Vec<Strip> = segments.into_iter().map(|s| s.into_strip()).collect();
    let assembly = assemble_strips(&strips, bank, opts, |_| {})?;
    let report = evaluate(&assembly.reconstruction, &ground_truth, class)?;
    Ok(DocumentRun {
        ground_truth,
        strips,
        assembly,
        report,
    })
}
