#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use unshred::assembler::{Chain, ChainMember, Reconstruction, ScoringStrip};
use unshred::shredder::{GroundTruth, Strip, StripId};

/// The ground-truth reconstruction: one chain per page, stored flips.
pub fn truth_reconstruction(gt: &GroundTruth) -> Reconstruction {
    let chains = (0..gt.pages)
        .map(|page| Chain {
            members: gt
                .page_order(page)
                .into_iter()
                .map(|id| ChainMember {
                    id,
                    flipped: gt.placement[&id].flipped,
                })
                .collect(),
            seam_scores: vec![],
        })
        .filter(|c| !c.members.is_empty())
        .collect();
    Reconstruction {
        chains,
        unplaced: vec![],
    }
}

/// Whether placing `p` (rotated iff `pf`) directly left of `q` (rotated iff
/// `qf`) restores a neighbourhood of the original pages.
pub fn is_true_seam(gt: &GroundTruth, p: StripId, pf: bool, q: StripId, qf: bool) -> bool {
    let (a, b) = (gt.placement[&p], gt.placement[&q]);
    if a.page != b.page {
        return false;
    }
    let (ra, rb) = (pf ^ a.flipped, qf ^ b.flipped);
    match (ra, rb) {
        (false, false) => b.position == a.position + 1,
        (true, true) => a.position == b.position + 1,
        _ => false,
    }
}

pub fn scoring(strips: &[Strip]) -> Vec<ScoringStrip> {
    strips
        .iter()
        .map(|s| ScoringStrip::new(s, false).unwrap())
        .collect()
}

/// Every file under `root`, keyed by relative path.
pub fn tree(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(root).unwrap().to_path_buf();
                out.insert(rel, std::fs::read(&path).unwrap());
            }
        }
    }
    out
}
