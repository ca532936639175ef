//! Seeded synthetic pages for the three document classes.
//!
//! Text classes are lines of words made of top-anchored glyph blocks, so
//! every line carries more ink in its upper part than its lower part.
//! Image pages are stripes at 45°, wide enough that any 4×4 window sees at
//! most one edge.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::BinaryRaster;

pub const MIN_PAGE_SIDE: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocClass {
    Handwritten,
    Typeset,
    Image,
}

impl DocClass {
    pub const ALL: [DocClass; 3] = [DocClass::Handwritten, DocClass::Typeset, DocClass::Image];

    pub fn name(self) -> &'static str {
        match self {
            DocClass::Handwritten => "handwritten",
            DocClass::Typeset => "typeset",
            DocClass::Image => "image",
        }
    }
}

impl std::fmt::Display for DocClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for DocClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DocClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown document class {s:?}")))
    }
}

pub fn generate_corpus(class: DocClass, width: usize, height: usize, seed: u64) -> Result<BinaryRaster> {
    if width < MIN_PAGE_SIDE || height < MIN_PAGE_SIDE {
        return Err(Error::geometry(format!(
            "page {width}x{height} is smaller than {MIN_PAGE_SIDE}x{MIN_PAGE_SIDE}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut page = BinaryRaster::blank(width, height)?;
    match class {
        DocClass::Typeset => text_page(&mut page, &mut rng, false),
        DocClass::Handwritten => text_page(&mut page, &mut rng, true),
        DocClass::Image => stripe_page(&mut page, &mut rng),
    }
    Ok(page)
}

fn fill(page: &mut BinaryRaster, left: usize, top: usize, w: usize, h: usize) {
    for y in top..(top + h).min(page.height()) {
        for x in left..(left + w).min(page.width()) {
            page.set(x, y, true);
        }
    }
}

fn text_page(page: &mut BinaryRaster, rng: &mut ChaCha8Rng, handwritten: bool) {
    let (w, h) = (page.width(), page.height());
    let glyph_h = 3 * (h / 64).clamp(1, 4);
    let third = glyph_h / 3;
    let pitch = glyph_h + (glyph_h * 2 / 3).max(2);
    let jitter = if handwritten { third.max(1) } else { 0 };
    let (mx, my) = ((w / 16).max(1), (h / 16).max(1) + jitter);
    let right = w - mx;

    let mut line_top = my;
    while line_top + glyph_h + jitter + my <= h {
        let mut x = mx;
        while x + 4 <= right {
            let dy = if jitter > 0 {
                rng.gen_range(0..=2 * jitter) as isize - jitter as isize
            } else {
                0
            };
            let top = (line_top as isize + dy) as usize;
            // a word: touching glyph blocks, all reaching up to the same top row
            for _ in 0..rng.gen_range(2..=5) {
                let gw = if handwritten { rng.gen_range(2..=10) } else { rng.gen_range(4..=9) };
                let gw = gw.min(right - x);
                if gw == 0 {
                    break;
                }
                let gh = rng.gen_range(third..=glyph_h);
                fill(page, x, top, gw, gh);
                x += gw;
            }
            x += if handwritten { rng.gen_range(3..=10) } else { rng.gen_range(5..=8) };
        }
        line_top += pitch;
    }
}

/// Ink profile along the diagonal coordinate: a solid block followed by a
/// fading tail of narrower stripes, repeated with random lengths.
fn stripe_profile(len: usize, rng: &mut ChaCha8Rng) -> Vec<bool> {
    let mut out = Vec::with_capacity(len + 128);
    let lead = rng.gen_range(0..40);
    out.extend(std::iter::repeat(false).take(lead));
    while out.len() < len {
        let segments = [
            (true, rng.gen_range(30..=44)),
            (false, rng.gen_range(8..=10)),
            (true, rng.gen_range(12..=16)),
            (false, rng.gen_range(8..=11)),
            (true, rng.gen_range(8..=10)),
            (false, rng.gen_range(26..=40)),
        ];
        for (ink, n) in segments {
            out.extend(std::iter::repeat(ink).take(n));
        }
    }
    out.truncate(len);
    out
}

fn stripe_page(page: &mut BinaryRaster, rng: &mut ChaCha8Rng) {
    let (w, h) = (page.width(), page.height());
    let rising = rng.gen_bool(0.5);
    let profile = stripe_profile(w + h, rng);
    for y in 0..h {
        for x in 0..w {
            // both directions make the coordinate grow downwards
            let t = if rising { y + w - 1 - x } else { x + y };
            page.set(x, y, profile[t]);
        }
    }
}
