//! Seam similarity: the 4x4 continuity template bank, seam windows and the
//! scalar seam score.
//!
//! A seam window is the 4x4 neighbourhood straddling the boundary between two
//! strips: the two rightmost columns of the left strip followed by the two
//! leftmost columns of the right strip, over four consecutive rows. A window
//! with ink that equals a bank template is a hit. The score of a seam is
//! `1 + (informative windows that miss)`, so `1` means every inked window
//! looks like a continuous line or edge.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::preprocess::EdgeProfile;
use crate::raster::GrayRaster;

/// A 4x4 binary grid packed row-major: bit `row * 4 + col`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Grid4(pub u16);

impl Grid4 {
    pub const EMPTY: Grid4 = Grid4(0);
    pub const FULL: Grid4 = Grid4(u16::MAX);

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut bits = 0u16;
        for row in 0..4 {
            for col in 0..4 {
                if f(col, row) {
                    bits |= 1 << (row * 4 + col);
                }
            }
        }
        Grid4(bits)
    }

    /// Parses four rows of `#`/`.`.
    pub fn from_rows(rows: [&str; 4]) -> Self {
        let cells: Vec<Vec<bool>> = rows
            .iter()
            .map(|r| r.chars().map(|c| c == '#' || c == '1').collect())
            .collect();
        Self::from_fn(|col, row| cells[row][col])
    }

    #[inline]
    pub fn get(self, col: usize, row: usize) -> bool {
        self.0 >> (row * 4 + col) & 1 == 1
    }

    pub fn ink(self) -> u32 {
        self.0.count_ones()
    }

    /// Row-major `0`/`1` string; the bank is ordered lexicographically by it.
    pub fn cell_string(self) -> String {
        (0..16)
            .map(|i| if self.0 >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    pub fn rotate180(self) -> Self {
        Grid4(self.0.reverse_bits())
    }
}

impl fmt::Debug for Grid4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.cell_string().replace('1', "#").replace('0', ".");
        write!(f, "Grid4[{}|{}|{}|{}]", &s[0..4], &s[4..8], &s[8..12], &s[12..16])
    }
}

impl PartialOrd for Grid4 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Grid4 {
    // Lexicographic on the row-major cell string: the lowest bit is the first character.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other.0.reverse_bits().cmp(&self.0.reverse_bits()).reverse()
    }
}

pub type Template = Grid4;

/// Infinite straight-line shapes whose 4x4 samples make up the bank.
/// `a*x + b*y` compared against `c`.
#[derive(Clone, Copy, Debug)]
enum BaseShape {
    Line { a: i64, b: i64, c: i64 },
    HalfPlane { a: i64, b: i64, c: i64 },
}

impl BaseShape {
    fn contains(self, x: i64, y: i64) -> bool {
        match self {
            BaseShape::Line { a, b, c } => a * x + b * y == c,
            BaseShape::HalfPlane { a, b, c } => a * x + b * y >= c,
        }
    }
}

/// The six base patterns: horizontal line, vertical line, diagonal line,
/// horizontal edge, vertical edge, diagonal edge. Restricted to the window
/// they are:
///
/// ```text
/// ####  #...  #...  ....  ..##  #...
/// ....  #...  .#..  ....  ..##  ##..
/// ....  #...  ..#.  ####  ..##  ###.
/// ....  #...  ...#  ####  ..##  ####
/// ```
const BASES: [BaseShape; 6] = [
    BaseShape::Line { a: 0, b: 1, c: 0 },
    BaseShape::Line { a: 1, b: 0, c: 0 },
    BaseShape::Line { a: -1, b: 1, c: 0 },
    BaseShape::HalfPlane { a: 0, b: 1, c: 2 },
    BaseShape::HalfPlane { a: 1, b: 0, c: 2 },
    BaseShape::HalfPlane { a: -1, b: 1, c: 0 },
];

/// The eight symmetries of the square window, as maps on window coordinates.
fn symmetry(k: usize, x: i64, y: i64) -> (i64, i64) {
    match k {
        0 => (x, y),
        1 => (3 - y, x),     // rotate 90
        2 => (3 - x, 3 - y), // rotate 180
        3 => (y, 3 - x),     // rotate 270
        4 => (3 - x, y),     // mirror left-right
        5 => (x, 3 - y),     // mirror top-bottom
        6 => (y, x),         // transpose
        _ => (3 - y, 3 - x), // anti-transpose
    }
}

/// Translations large enough that every further shift yields an empty or full window.
const MAX_SHIFT: i64 = 8;

#[derive(Clone)]
pub struct TemplateBank {
    templates: Vec<Template>,
    lookup: Vec<u64>,
}

impl TemplateBank {
    pub fn from_templates(templates: impl IntoIterator<Item = Template>) -> Self {
        let set: BTreeSet<Template> = templates.into_iter().collect();
        let mut lookup = vec![0u64; 1 << 10];
        for t in &set {
            lookup[usize::from(t.0 >> 6)] |= 1 << (t.0 & 63);
        }
        Self {
            templates: set.into_iter().collect(),
            lookup,
        }
    }

    #[inline]
    pub fn contains(&self, grid: Grid4) -> bool {
        self.lookup[usize::from(grid.0 >> 6)] >> (grid.0 & 63) & 1 == 1
    }

    pub fn templates(&self) -> &[Template] {
        &self.templates
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }
}

impl fmt::Debug for TemplateBank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TemplateBank")
            .field("len", &self.templates.len())
            .finish()
    }
}

/// Closes the six base patterns under mirroring, rotation and translation.
///
/// Translation moves the underlying line or edge rather than the 16 sampled
/// cells, so a shifted edge stays an edge and can grow into the full block.
/// Windows left without ink are dropped.
pub fn build_template_bank() -> TemplateBank {
    let mut out = BTreeSet::new();
    for base in BASES {
        for k in 0..8 {
            for dy in -MAX_SHIFT..=MAX_SHIFT {
                for dx in -MAX_SHIFT..=MAX_SHIFT {
                    let grid = Grid4::from_fn(|col, row| {
                        let (sx, sy) = symmetry(k, col as i64, row as i64);
                        base.contains(sx - dx, sy - dy)
                    });
                    if grid != Grid4::EMPTY {
                        out.insert(grid);
                    }
                }
            }
        }
    }
    TemplateBank::from_templates(out)
}

/// Renders the bank as a contact sheet of 4x4 tiles, 8 per row, on a gray grid.
pub fn bank_contact_sheet(bank: &TemplateBank) -> GrayRaster {
    const PER_ROW: usize = 8;
    let rows = bank.len().div_ceil(PER_ROW).max(1);
    let mut sheet = GrayRaster::filled(PER_ROW * 5 + 1, rows * 5 + 1, 128);
    for (i, t) in bank.templates().iter().enumerate() {
        let (ox, oy) = ((i % PER_ROW) * 5 + 1, (i / PER_ROW) * 5 + 1);
        for row in 0..4 {
            for col in 0..4 {
                sheet.set(ox + col, oy + row, if t.get(col, row) { 0 } else { 255 });
            }
        }
    }
    sheet
}

/// The two columns of a strip that face a seam, outermost first.
#[derive(Clone, Copy, Debug)]
pub struct SeamSide<'a> {
    pub outer: &'a [bool],
    pub inner: &'a [bool],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeamWindow {
    pub cells: Grid4,
    pub y_offset: usize,
}

fn check_lengths(left: SeamSide<'_>, right: SeamSide<'_>) -> Result<usize> {
    let y = left.outer.len();
    if left.inner.len() != y || right.outer.len() != y || right.inner.len() != y {
        return Err(Error::geometry("seam columns differ in length"));
    }
    if y < 4 {
        return Err(Error::DegenerateStrip {
            width: 2,
            height: y,
        });
    }
    Ok(y)
}

#[inline]
fn row_bits(left: SeamSide<'_>, right: SeamSide<'_>, y: usize) -> u16 {
    u16::from(left.inner[y])
        | u16::from(left.outer[y]) << 1
        | u16::from(right.outer[y]) << 2
        | u16::from(right.inner[y]) << 3
}

/// Every 4-row window across the seam between `left` (the strip on the left,
/// contributing its right edge) and `right`.
pub fn seam_windows(left: SeamSide<'_>, right: SeamSide<'_>) -> Result<Vec<SeamWindow>> {
    let y = check_lengths(left, right)?;
    Ok((0..=y - 4)
        .map(|y0| {
            let bits = (0..4).fold(0u16, |acc, r| acc | row_bits(left, right, y0 + r) << (4 * r));
            SeamWindow {
                cells: Grid4(bits),
                y_offset: y0,
            }
        })
        .collect())
}

/// Seam score: `Value(1)` is a perfect continuity match, larger is worse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SeamScore {
    Value(u32),
    /// No window along the seam carries any ink.
    Unmatchable,
}

impl SeamScore {
    pub const PERFECT: SeamScore = SeamScore::Value(1);

    pub fn is_perfect(self) -> bool {
        self == Self::PERFECT
    }

    pub fn value(self) -> Option<u32> {
        match self {
            SeamScore::Value(v) => Some(v),
            SeamScore::Unmatchable => None,
        }
    }
}

impl fmt::Display for SeamScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeamScore::Value(v) => write!(f, "{v}"),
            SeamScore::Unmatchable => f.write_str("unmatchable"),
        }
    }
}

impl Serialize for SeamScore {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SeamScore::Value(v) => s.serialize_u32(*v),
            SeamScore::Unmatchable => s.serialize_str("unmatchable"),
        }
    }
}

impl<'de> Deserialize<'de> for SeamScore {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u32),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) if v >= 1 => Ok(SeamScore::Value(v)),
            Raw::Str(s) if s == "unmatchable" => Ok(SeamScore::Unmatchable),
            _ => Err(serde::de::Error::custom(
                "seam score must be an integer >= 1 or \"unmatchable\"",
            )),
        }
    }
}

/// Score plus the counts it was derived from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeamEvaluation {
    pub score: SeamScore,
    pub informative_windows: u32,
    pub hits: u32,
}

pub fn evaluate_seam(
    left: SeamSide<'_>,
    right: SeamSide<'_>,
    bank: &TemplateBank,
) -> Result<SeamEvaluation> {
    let y = check_lengths(left, right)?;
    let mut window = 0u16;
    for r in 0..3 {
        window |= row_bits(left, right, r) << (4 * (r + 1));
    }
    let (mut informative, mut hits) = (0u32, 0u32);
    for y_end in 3..y {
        window = window >> 4 | row_bits(left, right, y_end) << 12;
        if window != 0 {
            informative += 1;
            if bank.contains(Grid4(window)) {
                hits += 1;
            }
        }
    }
    let score = if informative == 0 {
        SeamScore::Unmatchable
    } else {
        SeamScore::Value(1 + informative - hits)
    };
    Ok(SeamEvaluation {
        score,
        informative_windows: informative,
        hits,
    })
}

pub fn seam_score(left: SeamSide<'_>, right: SeamSide<'_>, bank: &TemplateBank) -> Result<SeamScore> {
    evaluate_seam(left, right, bank).map(|e| e.score)
}

/// The four edge pairings of a two-strip match, in priority order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Orientation {
    /// right edge of p against left edge of q
    #[serde(rename = "R_L")]
    RL,
    /// right edge of p against the inverted right edge of q
    #[serde(rename = "R_invR")]
    RInvR,
    /// inverted left edge of p against left edge of q
    #[serde(rename = "invL_L")]
    InvLL,
    /// inverted left edge of p against inverted right edge of q
    #[serde(rename = "invL_invR")]
    InvLInvR,
}

impl Orientation {
    pub const ALL: [Orientation; 4] = [
        Orientation::RL,
        Orientation::RInvR,
        Orientation::InvLL,
        Orientation::InvLInvR,
    ];

    /// Whether p is placed upside down.
    pub fn left_flipped(self) -> bool {
        matches!(self, Orientation::InvLL | Orientation::InvLInvR)
    }

    /// Whether q is placed upside down.
    pub fn right_flipped(self) -> bool {
        matches!(self, Orientation::RInvR | Orientation::InvLInvR)
    }

    pub fn from_flips(left_flipped: bool, right_flipped: bool) -> Self {
        match (left_flipped, right_flipped) {
            (false, false) => Orientation::RL,
            (false, true) => Orientation::RInvR,
            (true, false) => Orientation::InvLL,
            (true, true) => Orientation::InvLInvR,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Orientation::RL => "R_L",
            Orientation::RInvR => "R_invR",
            Orientation::InvLL => "invL_L",
            Orientation::InvLInvR => "invL_invR",
        }
    }
}

/// Edge profile of a strip together with its upside-down counterpart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedProfile {
    pub upright: EdgeProfile,
    pub rotated: EdgeProfile,
}

impl OrientedProfile {
    pub fn new(profile: EdgeProfile) -> Self {
        let rotated = profile.rotated();
        Self {
            upright: profile,
            rotated,
        }
    }

    fn get(&self, flipped: bool) -> &EdgeProfile {
        if flipped {
            &self.rotated
        } else {
            &self.upright
        }
    }

    /// The edge this strip shows on its right when placed as the left member.
    pub fn right_side(&self, flipped: bool) -> SeamSide<'_> {
        let p = self.get(flipped);
        SeamSide {
            outer: &p.right_outer,
            inner: &p.right_inner,
        }
    }

    pub fn left_side(&self, flipped: bool) -> SeamSide<'_> {
        let p = self.get(flipped);
        SeamSide {
            outer: &p.left_outer,
            inner: &p.left_inner,
        }
    }
}

pub fn evaluate_orientation(
    p: &OrientedProfile,
    q: &OrientedProfile,
    orientation: Orientation,
    bank: &TemplateBank,
) -> Result<SeamEvaluation> {
    evaluate_seam(
        p.right_side(orientation.left_flipped()),
        q.left_side(orientation.right_flipped()),
        bank,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairMatch {
    pub best: SeamScore,
    pub at: Orientation,
    /// Number of seam scores computed.
    pub evaluations: usize,
}

/// Scores `p` to the left of `q` under each requested orientation and keeps
/// the lowest score. Ties go to the earlier orientation in [`Orientation::ALL`].
pub fn match_pair(
    p: &OrientedProfile,
    q: &OrientedProfile,
    bank: &TemplateBank,
    orientations: &[Orientation],
) -> Result<PairMatch> {
    let mut requested = orientations.to_vec();
    requested.sort();
    requested.dedup();
    let mut best: Option<(SeamScore, Orientation)> = None;
    for &o in &requested {
        let score = evaluate_orientation(p, q, o, bank)?.score;
        if best.is_none_or(|(b, _)| score < b) {
            best = Some((score, o));
        }
    }
    let (best, at) = best.ok_or_else(|| Error::Config("match_pair needs an orientation".into()))?;
    Ok(PairMatch {
        best,
        at,
        evaluations: requested.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preprocess::edge_profile;
    use crate::raster::BinaryRaster;

    fn side<'a>(outer: &'a [bool], inner: &'a [bool]) -> SeamSide<'a> {
        SeamSide { outer, inner }
    }

    #[test]
    fn grid_order_is_cell_string_order() {
        let mut grids: Vec<Grid4> = [1u16, 2, 3, 0x8000, 0x0100, 0xffff, 0]
            .into_iter()
            .map(Grid4)
            .collect();
        grids.sort();
        let strings: Vec<String> = grids.iter().map(|g| g.cell_string()).collect();
        let mut sorted = strings.clone();
        sorted.sort();
        assert_eq!(strings, sorted);
    }

    #[test]
    fn bank_basics() {
        let bank = build_template_bank();
        assert!(bank.contains(Grid4::from_rows(["####", "....", "....", "...."])));
        assert!(bank.contains(Grid4::FULL));
        assert!(!bank.contains(Grid4::EMPTY));
        assert!(bank.templates().windows(2).all(|w| w[0] < w[1]));
        for t in bank.templates() {
            assert!(bank.contains(t.rotate180()));
        }
        // a corner is not a continuity pattern
        assert!(!bank.contains(Grid4::from_rows(["....", "....", "..##", "..##"])));
    }

    #[test]
    fn bank_size_matches_independent_enumeration() {
        // Oracle: test every one of the 2^16 grids against the ideal shapes
        // directly. Each of the four directions gives lines `f == c` and
        // edges `f >= c` / `f <= c`.
        let dirs: [fn(i32, i32) -> i32; 4] = [|_, y| y, |x, _| x, |x, y| y - x, |x, y| x + y];
        let mut expected = BTreeSet::new();
        for bits in 1..=u16::MAX {
            let g = Grid4(bits);
            let matches = |pred: &dyn Fn(i32, i32) -> bool| {
                (0..4).all(|r| (0..4).all(|c| g.get(c, r) == pred(c as i32, r as i32)))
            };
            let hit = dirs.iter().any(|f| {
                (-6..=12).any(|c| {
                    matches(&|x, y| f(x, y) == c)
                        || matches(&|x, y| f(x, y) >= c)
                        || matches(&|x, y| f(x, y) <= c)
                })
            });
            if hit {
                expected.insert(g);
            }
        }
        let bank = build_template_bank();
        assert_eq!(expected.len(), 51);
        assert_eq!(bank.len(), 51);
        assert_eq!(bank.templates(), expected.into_iter().collect::<Vec<_>>().as_slice());
    }

    #[test]
    fn window_counts() {
        let c4 = vec![false; 4];
        assert_eq!(seam_windows(side(&c4, &c4), side(&c4, &c4)).unwrap().len(), 1);
        let c10 = vec![true; 10];
        let ws = seam_windows(side(&c10, &c10), side(&c10, &c10)).unwrap();
        assert_eq!(ws.len(), 7);
        assert_eq!(
            ws.iter().map(|w| w.y_offset).collect::<Vec<_>>(),
            (0..7).collect::<Vec<_>>()
        );
        assert!(ws.iter().all(|w| w.cells == Grid4::FULL));
        let c3 = vec![true; 3];
        assert!(seam_windows(side(&c3, &c3), side(&c3, &c3)).is_err());
    }

    #[test]
    fn window_column_order() {
        // left strip: inner column inked; right strip: outer column inked
        let on = vec![true; 4];
        let off = vec![false; 4];
        let ws = seam_windows(side(&off, &on), side(&on, &off)).unwrap();
        assert_eq!(ws[0].cells, Grid4::from_rows(["#.#.", "#.#.", "#.#.", "#.#."]));
    }

    #[test]
    fn sliding_score_matches_window_list() {
        let bank = build_template_bank();
        let cols: Vec<Vec<bool>> = (0..4)
            .map(|c| (0..13).map(|y| (y * 5 + c * 3) % 7 < 3).collect())
            .collect();
        let (l, r) = (side(&cols[0], &cols[1]), side(&cols[2], &cols[3]));
        let ws = seam_windows(l, r).unwrap();
        let informative = ws.iter().filter(|w| w.cells != Grid4::EMPTY).count() as u32;
        let hits = ws.iter().filter(|w| bank.contains(w.cells)).count() as u32;
        let e = evaluate_seam(l, r, &bank).unwrap();
        assert_eq!((e.informative_windows, e.hits), (informative, hits));
    }

    fn profile(r: &BinaryRaster) -> OrientedProfile {
        OrientedProfile::new(edge_profile(r).unwrap())
    }

    #[test]
    fn solid_and_blank_seams() {
        let bank = build_template_bank();
        let ink = profile(&BinaryRaster::filled(3, 8, true).unwrap());
        let m = match_pair(&ink, &ink, &bank, &Orientation::ALL).unwrap();
        assert_eq!((m.best, m.at, m.evaluations), (SeamScore::PERFECT, Orientation::RL, 4));
        for o in Orientation::ALL {
            let e = evaluate_orientation(&ink, &ink, o, &bank).unwrap();
            assert_eq!(e.score, SeamScore::PERFECT);
        }

        let paper = profile(&BinaryRaster::blank(3, 8).unwrap());
        let m = match_pair(&paper, &paper, &bank, &[Orientation::RL]).unwrap();
        assert_eq!((m.best, m.evaluations), (SeamScore::Unmatchable, 1));
    }

    #[test]
    fn diagonal_line_seam_is_perfect() {
        let bank = build_template_bank();
        let page = BinaryRaster::from_fn(6, 6, |x, y| x == y).unwrap();
        let p = page.crop_columns(0, 3).unwrap();
        let q = page.crop_columns(3, 6).unwrap();
        // oracle: every window of the page spanning columns 1..5 is inked iff it meets the diagonal
        for y0 in 0..3 {
            let w = Grid4::from_fn(|c, r| page.get(1 + c, y0 + r));
            assert!(w == Grid4::EMPTY || bank.contains(w), "{w:?}");
        }
        let m = match_pair(&profile(&p), &profile(&q), &bank, &[Orientation::RL]).unwrap();
        assert_eq!(m.best, SeamScore::PERFECT);
    }

    #[test]
    fn inverted_cases_use_rotated_strips() {
        let bank = build_template_bank();
        let page = BinaryRaster::from_fn(8, 12, |x, y| y >= x + 2).unwrap();
        let p = page.crop_columns(0, 4).unwrap();
        let q = page.crop_columns(4, 8).unwrap();
        let expect = |a: &BinaryRaster, b: &BinaryRaster| {
            evaluate_seam(
                profile(a).right_side(false),
                profile(b).left_side(false),
                &bank,
            )
            .unwrap()
        };
        let (pp, qp) = (profile(&p), profile(&q));
        let cases = [
            (Orientation::RL, expect(&p, &q)),
            (Orientation::RInvR, expect(&p, &q.rotate180())),
            (Orientation::InvLL, expect(&p.rotate180(), &q)),
            (Orientation::InvLInvR, expect(&p.rotate180(), &q.rotate180())),
        ];
        for (o, e) in cases {
            assert_eq!(evaluate_orientation(&pp, &qp, o, &bank).unwrap(), e, "{o:?}");
        }
        assert_eq!(cases[0].1.score, SeamScore::PERFECT);
        // q stored upside down: only the R_invR case lines it up
        let m = match_pair(&pp, &profile(&q.rotate180()), &bank, &Orientation::ALL).unwrap();
        assert_eq!((m.best, m.at), (SeamScore::PERFECT, Orientation::RInvR));
    }

    #[test]
    fn score_serde() {
        assert_eq!(serde_json::to_string(&SeamScore::Value(3)).unwrap(), "3");
        assert_eq!(
            serde_json::to_string(&SeamScore::Unmatchable).unwrap(),
            "\"unmatchable\""
        );
        let back: SeamScore = serde_json::from_str("\"unmatchable\"").unwrap();
        assert_eq!(back, SeamScore::Unmatchable);
        assert!(serde_json::from_str::<SeamScore>("0").is_err());
        assert!(SeamScore::Value(u32::MAX) < SeamScore::Unmatchable);
        assert_eq!(serde_json::to_string(&Orientation::InvLInvR).unwrap(), "\"invL_invR\"");
    }

    #[test]
    fn empty_orientation_list_is_an_error() {
        let bank = build_template_bank();
        let p = profile(&BinaryRaster::filled(2, 4, true).unwrap());
        assert!(match_pair(&p, &p, &bank, &[]).is_err());
    }
}
