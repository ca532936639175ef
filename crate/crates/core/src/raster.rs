//! Binary and grayscale rasters.
//!
//! A [`BinaryRaster`] is the working representation of pages, strips and
//! template windows: `true` is ink, `false` is paper. [`GrayRaster`] only
//! exists at the edges of the system (PGM files and composed scan sheets).

use std::fmt;

use crate::error::{Error, Result};

/// Default binarization threshold: intensities strictly below it are ink.
pub const DEFAULT_THRESHOLD: u8 = 128;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryRaster {
    width: usize,
    height: usize,
    cells: Vec<bool>,
}

impl BinaryRaster {
    pub fn new(width: usize, height: usize, cells: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::geometry(format!(
                "binary raster must be at least 1x1, got {width}x{height}"
            )));
        }
        if cells.len() != width * height {
            return Err(Error::geometry(format!(
                "expected {} cells for {width}x{height}, got {}",
                width * height,
                cells.len()
            )));
        }
        Ok(Self {
            width,
            height,
            cells,
        })
    }

    /// All-paper raster.
    pub fn blank(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![false; width * height])
    }

    pub fn filled(width: usize, height: usize, ink: bool) -> Result<Self> {
        Self::new(width, height, vec![ink; width * height])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self> {
        let mut cells = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                cells.push(f(x, y));
            }
        }
        Self::new(width, height, cells)
    }

    /// Parses rows of `#`/`1` (ink) and `.`/`0` (paper). Handy in tests.
    pub fn from_rows(rows: &[&str]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.chars().count());
        let mut cells = Vec::with_capacity(width * height);
        for row in rows {
            if row.chars().count() != width {
                return Err(Error::geometry("ragged rows"));
            }
            for c in row.chars() {
                match c {
                    '#' | '1' => cells.push(true),
                    '.' | '0' => cells.push(false),
                    other => return Err(Error::geometry(format!("bad cell character {other:?}"))),
                }
            }
        }
        Self::new(width, height, cells)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.cells[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, ink: bool) {
        self.cells[y * self.width + x] = ink;
    }

    pub fn column(&self, x: usize) -> Vec<bool> {
        (0..self.height).map(|y| self.get(x, y)).collect()
    }

    pub fn row(&self, y: usize) -> &[bool] {
        &self.cells[y * self.width..(y + 1) * self.width]
    }

    pub fn ink_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    /// Rotation by 180 degrees (an upside-down strip).
    pub fn rotate180(&self) -> Self {
        let mut cells = self.cells.clone();
        cells.reverse();
        Self {
            width: self.width,
            height: self.height,
            cells,
        }
    }

    /// Columns `start..end` as a new raster.
    pub fn crop_columns(&self, start: usize, end: usize) -> Result<Self> {
        if start >= end || end > self.width {
            return Err(Error::geometry(format!(
                "column range {start}..{end} outside raster of width {}",
                self.width
            )));
        }
        Self::from_fn(end - start, self.height, |x, y| self.get(start + x, y))
    }

    /// Side-by-side concatenation; all parts must share a height.
    pub fn hconcat<'a>(parts: impl IntoIterator<Item = &'a BinaryRaster>) -> Result<Self> {
        let parts: Vec<&BinaryRaster> = parts.into_iter().collect();
        let Some(first) = parts.first() else {
            return Err(Error::geometry("nothing to concatenate"));
        };
        let height = first.height;
        if let Some(bad) = parts.iter().find(|p| p.height != height) {
            return Err(Error::geometry(format!(
                "height mismatch: {} vs {}",
                bad.height, height
            )));
        }
        let width: usize = parts.iter().map(|p| p.width).sum();
        let mut cells = Vec::with_capacity(width * height);
        for y in 0..height {
            for p in &parts {
                cells.extend_from_slice(p.row(y));
            }
        }
        Self::new(width, height, cells)
    }
}

impl fmt::Debug for BinaryRaster {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryRaster {}x{}", self.width, self.height)?;
        for y in 0..self.height {
            let row: String = self
                .row(y)
                .iter()
                .map(|&c| if c { '#' } else { '.' })
                .collect();
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

/// 8-bit grayscale raster, 0 = black.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayRaster {
    width: usize,
    height: usize,
    cells: Vec<u8>,
}

impl GrayRaster {
    pub fn new(width: usize, height: usize, cells: Vec<u8>) -> Result<Self> {
        if cells.len() != width * height {
            return Err(Error::geometry(format!(
                "expected {} samples for {width}x{height}, got {}",
                width * height,
                cells.len()
            )));
        }
        Ok(Self {
            width,
            height,
            cells,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        Self {
            width,
            height,
            cells: vec![value; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.cells[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.cells[y * self.width + x] = v;
    }
}

/// Ink wherever the intensity is strictly below `threshold`.
pub fn binarize(gray: &GrayRaster, threshold: u8) -> Result<BinaryRaster> {
    BinaryRaster::new(
        gray.width,
        gray.height,
        gray.cells.iter().map(|&v| v < threshold).collect(),
    )
}

/// Ink becomes black (0), paper white (255).
pub fn to_gray(raster: &BinaryRaster) -> GrayRaster {
    GrayRaster {
        width: raster.width,
        height: raster.height,
        cells: raster
            .cells
            .iter()
            .map(|&ink| if ink { 0 } else { 255 })
            .collect(),
    }
}
