//! Strip preprocessing: blank removal, orientation normalization and edge
//! extraction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::BinaryRaster;
use crate::shredder::Strip;

/// Default blank threshold: strips with at most 0.1% ink are blank.
pub const DEFAULT_EPSILON: f64 = 0.001;

/// Upper/lower ink ratio (in percent) a strip must exceed to be oriented confidently.
pub const ORIENTATION_RATIO_PERCENT: u64 = 115;

pub fn ink_density(raster: &BinaryRaster) -> f64 {
    raster.ink_count() as f64 / (raster.width() * raster.height()) as f64
}

/// Splits strips into `(kept, removed)`, preserving input order in both.
pub fn remove_blanks(strips: Vec<Strip>, epsilon: f64) -> (Vec<Strip>, Vec<Strip>) {
    strips
        .into_iter()
        .partition(|s| ink_density(&s.raster) > epsilon)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Upright {
    ConfidentUpright,
    ConfidentFlippedAndCorrected,
    Ambiguous,
}

impl Upright {
    pub fn is_confident(self) -> bool {
        !matches!(self, Upright::Ambiguous)
    }

    /// Whether the normalized raster is rotated relative to the input.
    pub fn corrected(self) -> bool {
        matches!(self, Upright::ConfidentFlippedAndCorrected)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedStrip {
    pub strip: Strip,
    pub upright: Upright,
}

/// Ink mass in the upper and lower thirds of every text-line band, summed.
///
/// A band is a maximal run of rows whose ink count is above the mean row ink
/// count of the strip.
pub fn band_asymmetry(raster: &BinaryRaster) -> (u64, u64) {
    let rows: Vec<u64> = (0..raster.height())
        .map(|y| raster.row(y).iter().filter(|&&c| c).count() as u64)
        .collect();
    let total: u64 = rows.iter().sum();
    let h = rows.len() as u64;
    // row density above mean  <=>  ink * h > total
    let above: Vec<bool> = rows.iter().map(|&r| r * h > total).collect();

    let (mut upper, mut lower) = (0, 0);
    let mut y = 0;
    while y < rows.len() {
        if !above[y] {
            y += 1;
            continue;
        }
        let start = y;
        while y < rows.len() && above[y] {
            y += 1;
        }
        let third = (y - start) / 3;
        upper += rows[start..start + third].iter().sum::<u64>();
        lower += rows[y - third..y].iter().sum::<u64>();
    }
    (upper, lower)
}

/// Rights a strip when its text-line bands are clearly top-heavy or
/// bottom-heavy; leaves it alone otherwise.
pub fn normalize_orientation(strip: &Strip) -> OrientedStrip {
    let (upper, lower) = band_asymmetry(&strip.raster);
    let upright = if upper * 100 > lower * ORIENTATION_RATIO_PERCENT {
        Upright::ConfidentUpright
    } else if lower * 100 > upper * ORIENTATION_RATIO_PERCENT {
        Upright::ConfidentFlippedAndCorrected
    } else {
        Upright::Ambiguous
    };
    let raster = if upright.corrected() {
        strip.raster.rotate180()
    } else {
        strip.raster.clone()
    };
    OrientedStrip {
        strip: Strip {
            id: strip.id,
            raster,
        },
        upright,
    }
}

/// The two outermost pixel columns on each side of a strip.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeProfile {
    pub left_outer: Vec<bool>,
    pub left_inner: Vec<bool>,
    pub right_inner: Vec<bool>,
    pub right_outer: Vec<bool>,
}

impl EdgeProfile {
    pub fn height(&self) -> usize {
        self.left_outer.len()
    }

    /// Profile of the same strip turned upside down.
    pub fn rotated(&self) -> EdgeProfile {
        let rev = |c: &Vec<bool>| c.iter().rev().copied().collect::<Vec<_>>();
        EdgeProfile {
            left_outer: rev(&self.right_outer),
            left_inner: rev(&self.right_inner),
            right_inner: rev(&self.left_inner),
            right_outer: rev(&self.left_outer),
        }
    }
}

pub fn edge_profile(raster: &BinaryRaster) -> Result<EdgeProfile> {
    let (w, h) = (raster.width(), raster.height());
    if w < 2 || h < 4 {
        return Err(Error::DegenerateStrip {
            width: w,
            height: h,
        });
    }
    Ok(EdgeProfile {
        left_outer: raster.column(0),
        left_inner: raster.column(1),
        right_inner: raster.column(w - 2),
        right_outer: raster.column(w - 1),
    })
}
