//! Simulated shredding and scan-sheet composition.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{BinaryRaster, GrayRaster};

/// Intensity of ink pixels on a composed sheet; distinct from the pure black background.
pub const SHEET_INK: u8 = 64;
pub const SHEET_PAPER: u8 = 255;
pub const SHEET_BACKGROUND: u8 = 0;

#[derive(
    Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct StripId(pub u32);

impl std::fmt::Display for StripId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strip {
    pub id: StripId,
    pub raster: BinaryRaster,
}

/// Where a strip came from: page `page`, position `position` counted from the left,
/// stored rotated by 180 degrees when `flipped`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    pub page: usize,
    pub position: usize,
    pub flipped: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundTruth {
    pub pages: usize,
    pub strips_per_page: usize,
    pub placement: BTreeMap<StripId, Placement>,
}

impl GroundTruth {
    /// Strip ids of `page` in left-to-right order.
    pub fn page_order(&self, page: usize) -> Vec<StripId> {
        let mut ids: Vec<(usize, StripId)> = self
            .placement
            .iter()
            .filter(|(_, p)| p.page == page)
            .map(|(&id, p)| (p.position, id))
            .collect();
        ids.sort();
        ids.into_iter().map(|(_, id)| id).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Geometry {
    pub page_width: usize,
    pub page_height: usize,
    /// Nominal strip width `floor(X / m)`; the last strip of a page may be wider.
    pub strip_width: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StripSet {
    pub strips: Vec<Strip>,
    pub geometry: Geometry,
}

/// Inclusive-exclusive column ranges of an even left-to-right partition into `m` strips.
/// The last strip absorbs `X mod m` extra columns.
pub fn column_ranges(page_width: usize, m: usize) -> Result<Vec<(usize, usize)>> {
    if page_width < 2 || m == 0 || m > page_width / 2 {
        return Err(Error::geometry(format!(
            "cannot cut a page {page_width} px wide into {m} strips of at least 2 px"
        )));
    }
    let w = page_width / m;
    Ok((0..m)
        .map(|j| {
            let end = if j + 1 == m { page_width } else { (j + 1) * w };
            (j * w, end)
        })
        .collect())
}

pub fn shred(page: &BinaryRaster, m: usize, seed: u64) -> Result<(StripSet, GroundTruth)> {
    shred_document(std::slice::from_ref(page), m, seed)
}

/// Cuts every page into `m` strips, then shuffles and randomly turns strips upside
/// down across the whole document.
pub fn shred_document(
    pages: &[BinaryRaster],
    m: usize,
    seed: u64,
) -> Result<(StripSet, GroundTruth)> {
    let Some(first) = pages.first() else {
        return Err(Error::geometry("document has no pages"));
    };
    let (page_width, page_height) = (first.width(), first.height());
    if let Some(bad) = pages
        .iter()
        .find(|p| p.width() != page_width || p.height() != page_height)
    {
        return Err(Error::geometry(format!(
            "page dimensions differ: {}x{} vs {page_width}x{page_height}",
            bad.width(),
            bad.height()
        )));
    }
    let ranges = column_ranges(page_width, m)?;

    let mut pieces = Vec::with_capacity(pages.len() * m);
    for (i, page) in pages.iter().enumerate() {
        for (j, &(a, b)) in ranges.iter().enumerate() {
            pieces.push((i, j, page.crop_columns(a, b)?));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pieces.shuffle(&mut rng);

    let mut strips = Vec::with_capacity(pieces.len());
    let mut placement = BTreeMap::new();
    for (k, (page, position, raster)) in pieces.into_iter().enumerate() {
        let flipped = rng.gen_bool(0.5);
        let id = StripId(k as u32);
        let raster = if flipped { raster.rotate180() } else { raster };
        strips.push(Strip { id, raster });
        placement.insert(
            id,
            Placement {
                page,
                position,
                flipped,
            },
        );
    }

    Ok((
        StripSet {
            strips,
            geometry: Geometry {
                page_width,
                page_height,
                strip_width: page_width / m,
            },
        },
        GroundTruth {
            pages: pages.len(),
            strips_per_page: m,
            placement,
        },
    ))
}

/// Location of one strip on a composed sheet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SheetPlacement {
    pub id: StripId,
    pub left: usize,
    pub top: usize,
    pub width: usize,
    pub height: usize,
}

pub fn compose_sheet(strips: &StripSet, gap: usize, seed: u64) -> Result<GrayRaster> {
    compose_sheet_with_layout(strips, gap, seed).map(|(sheet, _)| sheet)
}

/// Lays the strips out in a seeded random order on a black canvas, one row,
/// `gap` background pixels around and between them.
pub fn compose_sheet_with_layout(
    strips: &StripSet,
    gap: usize,
    seed: u64,
) -> Result<(GrayRaster, Vec<SheetPlacement>)> {
    if gap == 0 {
        return Err(Error::geometry("sheet gap must be at least 1 pixel"));
    }
    let mut order: Vec<&Strip> = strips.strips.iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    order.shuffle(&mut rng);

    let width = gap + order.iter().map(|s| s.raster.width() + gap).sum::<usize>();
    let height = 2 * gap + order.iter().map(|s| s.raster.height()).max().unwrap_or(0);
    let mut sheet = GrayRaster::filled(width, height, SHEET_BACKGROUND);
    let mut layout = Vec::with_capacity(order.len());
    let mut left = gap;
    for strip in order {
        let r = &strip.raster;
        for y in 0..r.height() {
            for x in 0..r.width() {
                let v = if r.get(x, y) { SHEET_INK } else { SHEET_PAPER };
                sheet.set(left + x, gap + y, v);
            }
        }
        layout.push(SheetPlacement {
            id: strip.id,
            left,
            top: gap,
            width: r.width(),
            height: r.height(),
        });
        left += r.width() + gap;
    }
    Ok((sheet, layout))
}
