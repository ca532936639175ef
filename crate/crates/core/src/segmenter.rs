//! Recovering strips from a composed scan sheet.
//!
//! Every 4-connected component of non-background pixels is one strip. The
//! bounding box of the component is cropped and binarized.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{BinaryRaster, GrayRaster, DEFAULT_THRESHOLD};
use crate::shredder::{GroundTruth, SheetPlacement, Strip, StripId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub left: usize,
    pub top: usize,
    pub width: usize,
    pub height: usize,
}

impl Bounds {
    fn overlaps(&self, other: &Bounds) -> bool {
        self.left < other.left + other.width
            && other.left < self.left + self.width
            && self.top < other.top + other.height
            && other.top < self.top + self.height
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentedStrip {
    pub id: StripId,
    pub raster: BinaryRaster,
    pub bounds: Bounds,
}

impl SegmentedStrip {
    pub fn into_strip(self) -> Strip {
        Strip {
            id: self.id,
            raster: self.raster,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SegmentConfig {
    /// Intensities at or below this are background.
    pub background_threshold: u8,
    /// In-strip intensities strictly below this are ink.
    pub ink_threshold: u8,
    pub max_components: usize,
}

impl Default for SegmentConfig {
    fn default() -> Self {
        Self {
            background_threshold: 16,
            ink_threshold: DEFAULT_THRESHOLD,
            max_components: 10_000,
        }
    }
}

pub fn segment_sheet(sheet: &GrayRaster) -> Result<Vec<SegmentedStrip>> {
    segment_sheet_with(sheet, &SegmentConfig::default())
}

pub fn segment_sheet_with(sheet: &GrayRaster, cfg: &SegmentConfig) -> Result<Vec<SegmentedStrip>> {
    let (w, h) = (sheet.width(), sheet.height());
    let is_fg = |x: usize, y: usize| sheet.get(x, y) > cfg.background_threshold;
    let mut seen = vec![false; w * h];
    let mut boxes: Vec<Bounds> = Vec::new();
    let mut stack = Vec::new();

    for y0 in 0..h {
        for x0 in 0..w {
            if seen[y0 * w + x0] || !is_fg(x0, y0) {
                continue;
            }
            if boxes.len() == cfg.max_components {
                return Err(Error::SheetTooFragmented {
                    max: cfg.max_components,
                });
            }
            let (mut x_min, mut x_max, mut y_min, mut y_max) = (x0, x0, y0, y0);
            seen[y0 * w + x0] = true;
            stack.push((x0, y0));
            while let Some((x, y)) = stack.pop() {
                x_min = x_min.min(x);
                x_max = x_max.max(x);
                y_min = y_min.min(y);
                y_max = y_max.max(y);
                let mut visit = |nx: usize, ny: usize| {
                    let i = ny * w + nx;
                    if !seen[i] && is_fg(nx, ny) {
                        seen[i] = true;
                        stack.push((nx, ny));
                    }
                };
                if x > 0 {
                    visit(x - 1, y);
                }
                if x + 1 < w {
                    visit(x + 1, y);
                }
                if y > 0 {
                    visit(x, y - 1);
                }
                if y + 1 < h {
                    visit(x, y + 1);
                }
            }
            boxes.push(Bounds {
                left: x_min,
                top: y_min,
                width: x_max - x_min + 1,
                height: y_max - y_min + 1,
            });
        }
    }

    boxes.sort_by_key(|b| (b.top, b.left));
    boxes
        .into_iter()
        .enumerate()
        .map(|(k, b)| {
            let raster = BinaryRaster::from_fn(b.width, b.height, |x, y| {
                let v = sheet.get(b.left + x, b.top + y);
                v > cfg.background_threshold && v < cfg.ink_threshold
            })?;
            Ok(SegmentedStrip {
                id: StripId(k as u32),
                raster,
                bounds: b,
            })
        })
        .collect()
}

/// Checks that no two segment boxes overlap.
pub fn boxes_disjoint(segments: &[SegmentedStrip]) -> bool {
    segments.iter().enumerate().all(|(i, a)| {
        segments[i + 1..]
            .iter()
            .all(|b| !a.bounds.overlaps(&b.bounds))
    })
}

/// Re-keys ground truth from shredder ids to segment ids by matching each
/// segment's bounding box against the sheet layout.
pub fn relabel_ground_truth(
    gt: &GroundTruth,
    layout: &[SheetPlacement],
    segments: &[Bounds],
) -> Result<(GroundTruth, Vec<StripId>)> {
    let by_bounds: HashMap<(usize, usize, usize, usize), StripId> = layout
        .iter()
        .map(|p| ((p.left, p.top, p.width, p.height), p.id))
        .collect();
    let mut placement = BTreeMap::new();
    let mut source = Vec::with_capacity(segments.len());
    for (k, b) in segments.iter().enumerate() {
        let key = (b.left, b.top, b.width, b.height);
        let original = by_bounds.get(&key).ok_or_else(|| {
            Error::Consistency(format!("segment {k} at {key:?} matches no sheet placement"))
        })?;
        let p = gt.placement.get(original).ok_or_else(|| {
            Error::Consistency(format!("strip {original} missing from ground truth"))
        })?;
        placement.insert(StripId(k as u32), *p);
        source.push(*original);
    }
    Ok((
        GroundTruth {
            pages: gt.pages,
            strips_per_page: gt.strips_per_page,
            placement,
        },
        source,
    ))
}
