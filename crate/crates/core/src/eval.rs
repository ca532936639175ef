//! Ground-truth metrics for a reconstruction.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::assembler::{Chain, Reconstruction};
use crate::corpus::DocClass;
use crate::error::{Error, Result};
use crate::shredder::{GroundTruth, Placement, StripId};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub adjacency_accuracy: f64,
    pub page_purity: f64,
    pub pages_perfect: usize,
    pub strips_total: usize,
    pub strips_unplaced: usize,
    pub doc_class: DocClass,
}

fn lookup(gt: &GroundTruth, id: StripId) -> Result<Placement> {
    gt.placement
        .get(&id)
        .copied()
        .ok_or_else(|| Error::Consistency(format!("strip {id} is not in the ground truth")))
}

/// Surviving strips of every page in left-to-right order.
fn survivor_pages(rec: &Reconstruction, gt: &GroundTruth) -> Result<BTreeMap<usize, Vec<StripId>>> {
    let mut pages: BTreeMap<usize, Vec<(usize, StripId)>> = BTreeMap::new();
    for id in rec.strip_ids() {
        let p = lookup(gt, id)?;
        pages.entry(p.page).or_default().push((p.position, id));
    }
    Ok(pages
        .into_iter()
        .map(|(page, mut v)| {
            v.sort();
            (page, v.into_iter().map(|(_, id)| id).collect())
        })
        .collect())
}

/// Neighbour pairs `(left, right)` in the original pages, counted among
/// strips that made it into the reconstruction.
fn truth_pairs(rec: &Reconstruction, gt: &GroundTruth) -> Result<BTreeSet<(StripId, StripId)>> {
    Ok(survivor_pages(rec, gt)?
        .values()
        .flat_map(|order| order.windows(2).map(|w| (w[0], w[1])).collect::<Vec<_>>())
        .collect())
}

/// The original left-to-right pair a chain neighbourhood stands for, if the
/// two members are oriented consistently with each other.
fn recovered_pairs(rec: &Reconstruction, gt: &GroundTruth) -> Result<BTreeSet<(StripId, StripId)>> {
    let mut out = BTreeSet::new();
    for chain in &rec.chains {
        for w in chain.members.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (pa, pb) = (lookup(gt, a.id)?, lookup(gt, b.id)?);
            // rotated relative to the page it came from
            let ra = a.flipped ^ pa.flipped;
            let rb = b.flipped ^ pb.flipped;
            match (ra, rb) {
                (false, false) => out.insert((a.id, b.id)),
                (true, true) => out.insert((b.id, a.id)),
                _ => false,
            };
        }
    }
    Ok(out)
}

/// Fraction of original neighbour pairs that are neighbours in some chain
/// with matching orientation. A chain read upside down still counts.
pub fn adjacency_accuracy(rec: &Reconstruction, gt: &GroundTruth) -> Result<f64> {
    let truth = truth_pairs(rec, gt)?;
    if truth.is_empty() {
        return Ok(1.0);
    }
    let found = recovered_pairs(rec, gt)?;
    Ok(truth.intersection(&found).count() as f64 / truth.len() as f64)
}

/// Strip-weighted mean over chains of the share of members from the chain's
/// majority page.
pub fn page_purity(rec: &Reconstruction, gt: &GroundTruth) -> Result<f64> {
    let (mut majority_total, mut total) = (0usize, 0usize);
    for chain in &rec.chains {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for m in &chain.members {
            *counts.entry(lookup(gt, m.id)?.page).or_default() += 1;
        }
        majority_total += counts.values().max().copied().unwrap_or(0);
        total += chain.len();
    }
    // unplaced strips must still be known
    for id in &rec.unplaced {
        lookup(gt, *id)?;
    }
    Ok(if total == 0 {
        1.0
    } else {
        majority_total as f64 / total as f64
    })
}

fn chain_is_page(chain: &Chain, order: &[StripId], gt: &GroundTruth) -> bool {
    let reads_as = |c: &Chain| {
        c.members.len() == order.len()
            && c.members.iter().zip(order).all(|(m, id)| {
                m.id == *id && gt.placement.get(id).is_some_and(|p| p.flipped == m.flipped)
            })
    };
    reads_as(chain) || reads_as(&chain.reversed())
}

pub fn evaluate(rec: &Reconstruction, gt: &GroundTruth, doc_class: DocClass) -> Result<EvalReport> {
    let pages = survivor_pages(rec, gt)?;
    let pages_perfect = pages
        .values()
        .filter(|order| rec.chains.iter().any(|c| chain_is_page(c, order, gt)))
        .count();
    Ok(EvalReport {
        adjacency_accuracy: adjacency_accuracy(rec, gt)?,
        page_purity: page_purity(rec, gt)?,
        pages_perfect,
        strips_total: gt.placement.len(),
        strips_unplaced: rec.unplaced.len(),
        doc_class,
    })
}

/// Aligned plain-text comparison table, one row per report.
pub fn report_table(reports: &[EvalReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<12} {:>10} {:>8} {:>8} {:>7} {:>9}",
        "class", "adjacency", "purity", "perfect", "strips", "unplaced"
    );
    for r in reports {
        let _ = writeln!(
            out,
            "{:<12} {:>10.4} {:>8.4} {:>8} {:>7} {:>9}",
            r.doc_class.name(),
            r.adjacency_accuracy,
            r.page_purity,
            r.pages_perfect,
            r.strips_total,
            r.strips_unplaced
        );
    }
    if let Some(top) = reports.iter().map(|r| r.adjacency_accuracy).max_by(f64::total_cmp) {
        let best: Vec<&str> = reports
            .iter()
            .filter(|r| r.adjacency_accuracy == top)
            .map(|r| r.doc_class.name())
            .collect();
        let typeset_best = reports
            .iter()
            .any(|r| r.doc_class == DocClass::Typeset && r.adjacency_accuracy == top);
        let _ = writeln!(
            out,
            "best adjacency: {}; typeset best or tied: {}",
            best.join(", "),
            if typeset_best { "yes" } else { "no" }
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembler::ChainMember;

    /// Two pages of four strips, nothing flipped; ids 0..4 page 0, 4..8 page 1.
    fn truth() -> GroundTruth {
        GroundTruth {
            pages: 2,
            strips_per_page: 4,
            placement: (0..8)
                .map(|i| {
                    (
                        StripId(i),
                        Placement {
                            page: i as usize / 4,
                            position: i as usize % 4,
                            flipped: false,
                        },
                    )
                })
                .collect(),
        }
    }

    fn chain(ids: &[u32]) -> Chain {
        Chain {
            members: ids
                .iter()
                .map(|&i| ChainMember {
                    id: StripId(i),
                    flipped: false,
                })
                .collect(),
            seam_scores: vec![],
        }
    }

    fn rec(chains: Vec<Chain>) -> Reconstruction {
        Reconstruction {
            chains,
            unplaced: vec![],
        }
    }

    #[test]
    fn perfect_and_reversed() {
        let gt = truth();
        let good = rec(vec![chain(&[0, 1, 2, 3]), chain(&[4, 5, 6, 7])]);
        assert_eq!(adjacency_accuracy(&good, &gt).unwrap(), 1.0);
        let r = evaluate(&good, &gt, DocClass::Typeset).unwrap();
        assert_eq!(r.pages_perfect, 2);
        assert_eq!(r.page_purity, 1.0);

        let reversed = rec(good.chains.iter().map(|c| c.reversed()).collect());
        assert_eq!(adjacency_accuracy(&reversed, &gt).unwrap(), 1.0);
        assert_eq!(evaluate(&reversed, &gt, DocClass::Typeset).unwrap().pages_perfect, 2);
    }

    #[test]
    fn one_wrong_seam() {
        let mut gt = truth();
        gt.placement.retain(|id, _| id.0 < 4);
        gt.pages = 1;
        let r = rec(vec![chain(&[0, 1, 3, 2])]);
        // true pairs 0|1, 1|2, 2|3; upright 3|2 is not 2|3, so only 0|1 is recovered
        assert!((adjacency_accuracy(&r, &gt).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        let r = rec(vec![chain(&[0, 1, 2]), chain(&[3])]);
        assert!((adjacency_accuracy(&r, &gt).unwrap() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn mismatched_flip_is_not_recovered() {
        let gt = truth();
        let mut c = chain(&[0, 1, 2, 3]);
        c.members[1].flipped = true;
        let r = rec(vec![c, chain(&[4, 5, 6, 7])]);
        assert!((adjacency_accuracy(&r, &gt).unwrap() - 4.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn purity_counts() {
        let gt = truth();
        let mixed = rec(vec![chain(&[0, 1, 4, 5]), chain(&[2, 3, 6, 7])]);
        assert_eq!(page_purity(&mixed, &gt).unwrap(), 0.5);
        assert_eq!(page_purity(&rec(vec![]), &gt).unwrap(), 1.0);
        let uneven = rec(vec![chain(&[0, 1, 2, 4]), chain(&[3])]);
        assert_eq!(page_purity(&uneven, &gt).unwrap(), 4.0 / 5.0);
    }

    #[test]
    fn unknown_strip() {
        let gt = truth();
        let r = rec(vec![chain(&[0, 99])]);
        assert!(matches!(adjacency_accuracy(&r, &gt), Err(Error::Consistency(_))));
        assert!(matches!(page_purity(&r, &gt), Err(Error::Consistency(_))));
    }

    #[test]
    fn empty_truth_set_is_one() {
        let gt = truth();
        let r = Reconstruction {
            chains: vec![],
            unplaced: vec![StripId(0), StripId(5)],
        };
        assert_eq!(adjacency_accuracy(&r, &gt).unwrap(), 1.0);
    }

    #[test]
    fn random_partition_purity_by_enumeration() {
        // oracle: hypergeometric count over the 70 ways to choose chain one's 4 strips
        // k page-0 strips in chain one: C(4,k) C(4,4-k) ways, purity (max(k,4-k)*2)/8
        let binom = |n: u64, k: u64| -> u64 { (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1)) };
        let mut expected_num = 0.0;
        for k in 0..=4u64 {
            let ways = binom(4, k) * binom(4, 4 - k);
            expected_num += ways as f64 * (2 * k.max(4 - k)) as f64 / 8.0;
        }
        let expected = expected_num / 70.0;
        assert!((expected - 44.0 / 70.0).abs() < 1e-12);

        let gt = truth();
        let mut sum = 0.0;
        let mut count = 0;
        for mask in 0u32..256 {
            if mask.count_ones() != 4 {
                continue;
            }
            let first: Vec<u32> = (0..8).filter(|i| mask >> i & 1 == 1).collect();
            let second: Vec<u32> = (0..8).filter(|i| mask >> i & 1 == 0).collect();
            sum += page_purity(&rec(vec![chain(&first), chain(&second)]), &gt).unwrap();
            count += 1;
        }
        assert_eq!(count, 70);
        assert!((sum / count as f64 - expected).abs() < 1e-12);
    }

    #[test]
    fn table_lists_every_class() {
        let mk = |c, a| EvalReport {
            adjacency_accuracy: a,
            page_purity: 1.0,
            pages_perfect: 1,
            strips_total: 8,
            strips_unplaced: 0,
            doc_class: c,
        };
        let t = report_table(&[
            mk(DocClass::Handwritten, 0.5),
            mk(DocClass::Typeset, 0.9),
            mk(DocClass::Image, 1.0),
        ]);
        assert!(t.contains("handwritten"));
        assert!(t.contains("typeset"));
        assert!(t.lines().count() == 5);
        assert!(t.contains("best adjacency: image; typeset best or tied: no"));
    }
}
