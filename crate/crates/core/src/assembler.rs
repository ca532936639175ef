//! Global reconstruction: pairwise seam scores and greedy chain assembly.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::preprocess::edge_profile;
use crate::shredder::{Strip, StripId};
use crate::similarity::{
    evaluate_orientation, Orientation, OrientedProfile, SeamEvaluation, SeamScore, TemplateBank,
};

/// One of the two physical long edges of a strip, named in its stored orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

/// Physical edge of p used when p sits left of the seam.
pub(crate) fn left_member_edge(o: Orientation) -> Side {
    if o.left_flipped() {
        Side::Left
    } else {
        Side::Right
    }
}

/// Physical edge of q used when q sits right of the seam.
pub(crate) fn right_member_edge(o: Orientation) -> Side {
    if o.right_flipped() {
        Side::Right
    } else {
        Side::Left
    }
}

/// A strip ready for scoring.
#[derive(Clone, Debug)]
pub struct ScoringStrip {
    pub id: StripId,
    pub profile: OrientedProfile,
    /// Orientation was settled upstream, so only the upright pairing is meaningful.
    pub confident: bool,
}

impl ScoringStrip {
    pub fn new(strip: &Strip, confident: bool) -> Result<Self> {
        Ok(Self {
            id: strip.id,
            profile: OrientedProfile::new(edge_profile(&strip.raster)?),
            confident,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreEntry {
    pub score: SeamScore,
    pub orientation: Orientation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct TableOptions {
    pub early_stop: bool,
    pub use_orientation_hints: bool,
}

/// One seam evaluation, as written to the score trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub p: StripId,
    pub q: StripId,
    pub orientation: Orientation,
    pub score: SeamScore,
    pub informative_windows: u32,
    pub hits: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SeamScoreTable {
    pub ids: Vec<StripId>,
    pub entries: BTreeMap<(StripId, StripId), ScoreEntry>,
    /// Strips whose stored right edge is finalized.
    pub locked_right: BTreeSet<StripId>,
    /// Strips whose stored left edge is finalized.
    pub locked_left: BTreeSet<StripId>,
    pub evaluations: usize,
}

impl SeamScoreTable {
    /// A table from precomputed entries, e.g. for testing the assembler alone.
    pub fn from_entries(
        ids: impl IntoIterator<Item = StripId>,
        entries: impl IntoIterator<Item = ((StripId, StripId), ScoreEntry)>,
    ) -> Self {
        let mut ids: Vec<StripId> = ids.into_iter().collect();
        ids.sort();
        ids.dedup();
        Self {
            ids,
            entries: entries.into_iter().filter(|((p, q), _)| p != q).collect(),
            ..Self::default()
        }
    }

    fn is_locked(&self, id: StripId, side: Side) -> bool {
        match side {
            Side::Left => self.locked_left.contains(&id),
            Side::Right => self.locked_right.contains(&id),
        }
    }

    fn lock(&mut self, id: StripId, side: Side) {
        match side {
            Side::Left => self.locked_left.insert(id),
            Side::Right => self.locked_right.insert(id),
        };
    }
}

pub fn build_score_table(
    strips: &[ScoringStrip],
    bank: &TemplateBank,
    options: TableOptions,
) -> Result<SeamScoreTable> {
    build_score_table_traced(strips, bank, options, |_| {})
}

/// Scores every ordered pair `(p, q)`, `p != q`, in ascending id order.
///
/// With early stop, a perfect seam locks the two edges it joins and every
/// later evaluation that would touch a locked edge is skipped.
pub fn build_score_table_traced(
    strips: &[ScoringStrip],
    bank: &TemplateBank,
    options: TableOptions,
    mut trace: impl FnMut(TraceRecord),
) -> Result<SeamScoreTable> {
    if let Some(first) = strips.first() {
        let h = first.profile.upright.height();
        if let Some(bad) = strips.iter().find(|s| s.profile.upright.height() != h) {
            return Err(Error::geometry(format!(
                "strip {} is {} px tall, strip {} is {h}",
                bad.id,
                bad.profile.upright.height(),
                first.id
            )));
        }
    }
    let mut sorted: Vec<&ScoringStrip> = strips.iter().collect();
    sorted.sort_by_key(|s| s.id);
    if sorted.windows(2).any(|w| w[0].id == w[1].id) {
        return Err(Error::Config("duplicate strip ids".into()));
    }

    let mut table = SeamScoreTable {
        ids: sorted.iter().map(|s| s.id).collect(),
        ..SeamScoreTable::default()
    };
    for p in &sorted {
        for q in &sorted {
            if p.id == q.id {
                continue;
            }
            let orientations: &[Orientation] =
                if options.use_orientation_hints && p.confident && q.confident {
                    &[Orientation::RL]
                } else {
                    &Orientation::ALL
                };
            let mut best: Option<ScoreEntry> = None;
            for &o in orientations {
                let (pe, qe) = (left_member_edge(o), right_member_edge(o));
                if options.early_stop && (table.is_locked(p.id, pe) || table.is_locked(q.id, qe)) {
                    continue;
                }
                let SeamEvaluation {
                    score,
                    informative_windows,
                    hits,
                } = evaluate_orientation(&p.profile, &q.profile, o, bank)?;
                table.evaluations += 1;
                trace(TraceRecord {
                    p: p.id,
                    q: q.id,
                    orientation: o,
                    score,
                    informative_windows,
                    hits,
                });
                if best.is_none_or(|b| score < b.score) {
                    best = Some(ScoreEntry {
                        score,
                        orientation: o,
                    });
                }
                if options.early_stop && score.is_perfect() {
                    table.lock(p.id, pe);
                    table.lock(q.id, qe);
                    break;
                }
            }
            if let Some(entry) = best {
                table.entries.insert((p.id, q.id), entry);
            }
        }
    }
    Ok(table)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ChainMember {
    pub id: StripId,
    /// Placed rotated 180 degrees relative to the stored raster.
    pub flipped: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub members: Vec<ChainMember>,
    pub seam_scores: Vec<SeamScore>,
}

impl Chain {
    pub fn singleton(id: StripId) -> Self {
        Self {
            members: vec![ChainMember { id, flipped: false }],
            seam_scores: vec![],
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The same arrangement viewed upside down.
    pub fn reversed(&self) -> Self {
        Self {
            members: self
                .members
                .iter()
                .rev()
                .map(|m| ChainMember {
                    id: m.id,
                    flipped: !m.flipped,
                })
                .collect(),
            seam_scores: self.seam_scores.iter().rev().copied().collect(),
        }
    }

    /// Prefers the reading with fewer flipped members, then the one starting
    /// with the smaller id.
    pub fn canonical(self) -> Self {
        let flipped = self.members.iter().filter(|m| m.flipped).count();
        let n = self.members.len();
        let reverse = match (2 * flipped).cmp(&n) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => self.members.last().map(|m| m.id) < self.members.first().map(|m| m.id),
        };
        if reverse {
            self.reversed()
        } else {
            self
        }
    }
}

/// An unordered physical adjacency, keyed with the smaller id on the left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Seam {
    pub left: ChainMember,
    pub right: ChainMember,
}

impl Seam {
    pub fn new(left: ChainMember, right: ChainMember) -> Self {
        if left.id <= right.id {
            Self { left, right }
        } else {
            Self {
                left: ChainMember {
                    id: right.id,
                    flipped: !right.flipped,
                },
                right: ChainMember {
                    id: left.id,
                    flipped: !left.flipped,
                },
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Reconstruction {
    pub chains: Vec<Chain>,
    pub unplaced: Vec<StripId>,
}

impl Reconstruction {
    pub fn strip_ids(&self) -> Vec<StripId> {
        let mut ids: Vec<StripId> = self
            .chains
            .iter()
            .flat_map(|c| c.members.iter().map(|m| m.id))
            .chain(self.unplaced.iter().copied())
            .collect();
        ids.sort();
        ids
    }

    /// Oriented adjacencies, independent of chain direction and chain order.
    pub fn seams(&self) -> BTreeSet<Seam> {
        self.chains
            .iter()
            .flat_map(|c| c.members.windows(2).map(|w| Seam::new(w[0], w[1])))
            .collect()
    }

    /// Canonical chain orientation, chains ordered by first member.
    pub fn normalized(mut self) -> Self {
        self.chains = self.chains.into_iter().map(Chain::canonical).collect();
        self.chains.sort_by_key(|c| c.members.first().map(|m| m.id));
        self.unplaced.sort();
        self
    }
}

/// Best-first merging of strips into chains of at most `m` strips.
///
/// Candidate seams are taken in ascending score order (ties: p id, q id,
/// orientation). A seam is accepted when both physical edges are still free,
/// the strips are in different chains and the merged chain fits in `m`.
pub fn greedy_assemble(table: &SeamScoreTable, m: usize) -> Result<Reconstruction> {
    if m == 0 {
        return Err(Error::geometry("pages must hold at least one strip"));
    }
    let mut ids = table.ids.clone();
    for (p, q) in table.entries.keys() {
        ids.push(*p);
        ids.push(*q);
    }
    ids.sort();
    ids.dedup();

    let mut candidates: Vec<(SeamScore, StripId, StripId, Orientation)> = table
        .entries
        .iter()
        .filter(|(_, e)| e.score != SeamScore::Unmatchable)
        .map(|(&(p, q), e)| (e.score, p, q, e.orientation))
        .collect();
    candidates.sort();

    let mut chains: Vec<Option<Chain>> = ids.iter().map(|&id| Some(Chain::singleton(id))).collect();
    let mut chain_of: HashMap<StripId, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let mut used: BTreeSet<(StripId, Side)> = BTreeSet::new();

    for (score, p, q, o) in candidates {
        let (pe, qe) = (left_member_edge(o), right_member_edge(o));
        if used.contains(&(p, pe)) || used.contains(&(q, qe)) {
            continue;
        }
        let (ci, cj) = (chain_of[&p], chain_of[&q]);
        if ci == cj {
            continue;
        }
        let (a, b) = (chains[ci].as_ref().unwrap(), chains[cj].as_ref().unwrap());
        if a.len() + b.len() > m {
            continue;
        }
        let (fp, fq) = (o.left_flipped(), o.right_flipped());
        let a = orient_end(a, p, fp, true)?;
        let b = orient_end(b, q, fq, false)?;
        let mut merged = a;
        merged.seam_scores.push(score);
        merged.seam_scores.extend(b.seam_scores);
        merged.members.extend(b.members);
        for mem in &merged.members {
            chain_of.insert(mem.id, ci);
        }
        chains[ci] = Some(merged);
        chains[cj] = None;
        used.insert((p, pe));
        used.insert((q, qe));
    }

    let mut rec = Reconstruction::default();
    for chain in chains.into_iter().flatten() {
        if chain.len() == 1 && m > 1 {
            rec.unplaced.push(chain.members[0].id);
        } else {
            rec.chains.push(chain);
        }
    }
    Ok(rec.normalized())
}

/// Turns `chain` so that `id` sits at its right end (`at_right`) or left end
/// with the requested flip state.
fn orient_end(chain: &Chain, id: StripId, flipped: bool, at_right: bool) -> Result<Chain> {
    let want = ChainMember { id, flipped };
    let end = |c: &Chain| {
        if at_right {
            c.members.last().copied()
        } else {
            c.members.first().copied()
        }
    };
    if end(chain) == Some(want) {
        return Ok(chain.clone());
    }
    let rev = chain.reversed();
    if end(&rev) == Some(want) {
        return Ok(rev);
    }
    Err(Error::Invariant(format!(
        "strip {id} has a free edge but is not at a chain end"
    )))
}
