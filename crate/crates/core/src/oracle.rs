//! Exhaustive reconstruction for small instances.
//!
//! Every partition of the strips into the minimum number of chains
//! (`ceil(N / m)`, each at most `m` long), every order within a chain and
//! every per-strip flip is considered. The arrangement with the smallest sum
//! of seam scores wins; unmatchable seams cost [`UNMATCHABLE_PENALTY`].
//! Branches whose partial cost plus one per missing seam already exceeds the
//! best complete arrangement are cut, which never changes the optimum.

use crate::assembler::{Chain, ChainMember, Reconstruction};
use crate::error::{Error, Result};
use crate::preprocess::edge_profile;
use crate::shredder::Strip;
use crate::similarity::{evaluate_orientation, Orientation, OrientedProfile, SeamScore, TemplateBank};

pub const MAX_BRUTE_FORCE_STRIPS: usize = 8;
pub const UNMATCHABLE_PENALTY: u64 = 1_000_000;

type Arrangement = Vec<Vec<(usize, bool)>>;

struct Search {
    n: usize,
    m: usize,
    chains_needed: usize,
    /// `cost[(a * n + b) * 4 + orientation]` for a left of b.
    cost: Vec<u64>,
    best: Option<(u64, Arrangement)>,
}

impl Search {
    fn seam(&self, a: (usize, bool), b: (usize, bool)) -> u64 {
        let o = Orientation::from_flips(a.1, b.1) as usize;
        self.cost[(a.0 * self.n + b.0) * 4 + o]
    }

    fn offer(&mut self, cost: u64, arrangement: &Arrangement) {
        let better = match &self.best {
            None => true,
            Some((c, a)) => cost < *c || (cost == *c && arrangement < a),
        };
        if better {
            self.best = Some((cost, arrangement.clone()));
        }
    }

    fn bound_exceeded(&self, cost: u64, placed_seams: usize) -> bool {
        let remaining = (self.n - self.chains_needed) - placed_seams;
        matches!(&self.best, Some((c, _)) if cost + remaining as u64 > *c)
    }

    /// `chain` is being built; `growing_right` is the first phase (members
    /// after the anchor), then members are prepended before it.
    fn dfs(
        &mut self,
        used: u32,
        closed: &mut Arrangement,
        chain: &mut Vec<(usize, bool)>,
        growing_right: bool,
        cost: u64,
        seams: usize,
    ) {
        if self.bound_exceeded(cost, seams) {
            return;
        }
        let all = (1u32 << self.n) - 1;
        if chain.is_empty() {
            if used == all {
                if closed.len() == self.chains_needed {
                    self.offer(cost, closed);
                }
                return;
            }
            let anchor = (!used).trailing_zeros() as usize;
            chain.push((anchor, false));
            self.dfs(used | 1 << anchor, closed, chain, true, cost, seams);
            chain.pop();
            return;
        }

        if chain.len() < self.m {
            for v in 0..self.n {
                if used >> v & 1 == 1 {
                    continue;
                }
                for f in [false, true] {
                    if growing_right {
                        let add = self.seam(*chain.last().unwrap(), (v, f));
                        chain.push((v, f));
                        self.dfs(used | 1 << v, closed, chain, true, cost + add, seams + 1);
                        chain.pop();
                    } else {
                        let add = self.seam((v, f), chain[0]);
                        chain.insert(0, (v, f));
                        self.dfs(used | 1 << v, closed, chain, false, cost + add, seams + 1);
                        chain.remove(0);
                    }
                }
            }
        }

        if growing_right {
            self.dfs(used, closed, chain, false, cost, seams);
        } else {
            let remaining = self.n - used.count_ones() as usize;
            let chains_left = self.chains_needed.saturating_sub(closed.len() + 1);
            if closed.len() < self.chains_needed
                && remaining <= chains_left * self.m
                && remaining >= chains_left
            {
                let done = std::mem::take(chain);
                closed.push(done);
                self.dfs(used, closed, chain, true, cost, seams);
                *chain = closed.pop().unwrap();
            }
        }
    }
}

pub fn brute_force_assemble(
    strips: &[Strip],
    bank: &TemplateBank,
    m: usize,
) -> Result<Reconstruction> {
    let n = strips.len();
    if n > MAX_BRUTE_FORCE_STRIPS {
        return Err(Error::TooLarge {
            strips: n,
            limit: MAX_BRUTE_FORCE_STRIPS,
        });
    }
    if m == 0 {
        return Err(Error::geometry("pages must hold at least one strip"));
    }
    if n == 0 {
        return Ok(Reconstruction::default());
    }
    let mut order: Vec<&Strip> = strips.iter().collect();
    order.sort_by_key(|s| s.id);
    let profiles = order
        .iter()
        .map(|s| edge_profile(&s.raster).map(OrientedProfile::new))
        .collect::<Result<Vec<_>>>()?;

    let mut cost = vec![0u64; n * n * 4];
    let mut score = vec![SeamScore::Unmatchable; n * n * 4];
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            for o in Orientation::ALL {
                let s = evaluate_orientation(&profiles[a], &profiles[b], o, bank)?.score;
                let i = (a * n + b) * 4 + o as usize;
                score[i] = s;
                cost[i] = s.value().map_or(UNMATCHABLE_PENALTY, u64::from);
            }
        }
    }

    let mut search = Search {
        n,
        m,
        chains_needed: n.div_ceil(m),
        cost,
        best: None,
    };
    search.dfs(0, &mut Vec::new(), &mut Vec::new(), true, 0, 0);
    let (_, arrangement) = search
        .best
        .ok_or_else(|| Error::Invariant("exhaustive search found no arrangement".into()))?;

    let chains = arrangement
        .into_iter()
        .map(|chain| {
            let members: Vec<ChainMember> = chain
                .iter()
                .map(|&(i, flipped)| ChainMember {
                    id: order[i].id,
                    flipped,
                })
                .collect();
            let seam_scores = chain
                .windows(2)
                .map(|w| {
                    let o = Orientation::from_flips(w[0].1, w[1].1) as usize;
                    score[(w[0].0 * n + w[1].0) * 4 + o]
                })
                .collect();
            Chain {
                members,
                seam_scores,
            }
        })
        .collect();
    Ok(Reconstruction {
        chains,
        unplaced: vec![],
    }
    .normalized())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::BinaryRaster;
    use crate::shredder::StripId;
    use crate::similarity::build_template_bank;

    fn strip(id: u32, raster: BinaryRaster) -> Strip {
        Strip {
            id: StripId(id),
            raster,
        }
    }

    #[test]
    fn single_strip() {
        let bank = build_template_bank();
        let rec = brute_force_assemble(&[strip(4, BinaryRaster::blank(3, 5).unwrap())], &bank, 1)
            .unwrap();
        assert_eq!(rec.chains, vec![Chain::singleton(StripId(4))]);
    }

    #[test]
    fn two_adjacent_strips() {
        let bank = build_template_bank();
        // one diagonal edge through the page: asymmetric content
        let page = BinaryRaster::from_fn(8, 10, |x, y| y >= x + 1).unwrap();
        let a = strip(0, page.crop_columns(0, 4).unwrap());
        let b = strip(1, page.crop_columns(4, 8).unwrap());
        let rec = brute_force_assemble(&[b.clone(), a.clone()], &bank, 2).unwrap();
        assert_eq!(rec.chains.len(), 1);
        assert_eq!(rec.chains[0].seam_scores, vec![SeamScore::PERFECT]);
        let seams = rec.seams();
        let expected = Reconstruction {
            chains: vec![Chain {
                members: vec![
                    ChainMember { id: StripId(0), flipped: false },
                    ChainMember { id: StripId(1), flipped: false },
                ],
                seam_scores: vec![SeamScore::PERFECT],
            }],
            unplaced: vec![],
        };
        assert_eq!(seams, expected.seams());
    }

    #[test]
    fn refuses_large_instances() {
        let bank = build_template_bank();
        let strips: Vec<Strip> = (0..9)
            .map(|i| strip(i, BinaryRaster::blank(2, 4).unwrap()))
            .collect();
        assert!(matches!(
            brute_force_assemble(&strips, &bank, 9),
            Err(Error::TooLarge { strips: 9, limit: 8 })
        ));
    }

    #[test]
    fn chain_count_and_lengths() {
        let bank = build_template_bank();
        let strips: Vec<Strip> = (0..5)
            .map(|i| strip(i, BinaryRaster::from_fn(2, 6, |x, y| (x + y + i as usize) % 3 == 0).unwrap()))
            .collect();
        let rec = brute_force_assemble(&strips, &bank, 2).unwrap();
        assert_eq!(rec.chains.len(), 3);
        assert!(rec.chains.iter().all(|c| c.len() <= 2));
        assert_eq!(rec.strip_ids().len(), 5);
    }

    #[test]
    fn deterministic() {
        let bank = build_template_bank();
        let strips: Vec<Strip> = (0..6)
            .map(|i| strip(i, BinaryRaster::filled(3, 6, true).unwrap()))
            .collect();
        let a = brute_force_assemble(&strips, &bank, 3).unwrap();
        let b = brute_force_assemble(&strips, &bank, 3).unwrap();
        assert_eq!(a, b);
    }

    fn cost_of(rec: &Reconstruction) -> u64 {
        rec.chains
            .iter()
            .flat_map(|c| c.seam_scores.iter())
            .map(|s| s.value().map_or(UNMATCHABLE_PENALTY, u64::from))
            .sum()
    }

    /// Unpruned reference: every order, every flip vector, every split of
    /// the order into the required number of consecutive chains.
    fn naive_min_cost(strips: &[Strip], bank: &TemplateBank, m: usize) -> u64 {
        let n = strips.len();
        let profiles: Vec<OrientedProfile> = strips
            .iter()
            .map(|s| OrientedProfile::new(edge_profile(&s.raster).unwrap()))
            .collect();
        let seam = |a: usize, fa: bool, b: usize, fb: bool| {
            evaluate_orientation(&profiles[a], &profiles[b], Orientation::from_flips(fa, fb), bank)
                .unwrap()
                .score
                .value()
                .map_or(UNMATCHABLE_PENALTY, u64::from)
        };
        let chains = n.div_ceil(m);
        let mut best = u64::MAX;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut perms = vec![];
        permutations(&mut perm, 0, &mut perms);
        for order in perms {
            for flips in 0u32..1 << n {
                let f = |i: usize| flips >> order[i] & 1 == 1;
                // cut mask: bit i set means a chain ends after position i
                for cuts in 0u32..1 << (n - 1) {
                    if cuts.count_ones() as usize != chains - 1 {
                        continue;
                    }
                    let (mut len, mut ok, mut cost) = (1, true, 0);
                    for i in 0..n - 1 {
                        if cuts >> i & 1 == 1 {
                            ok &= len <= m;
                            len = 1;
                        } else {
                            cost += seam(order[i], f(i), order[i + 1], f(i + 1));
                            len += 1;
                        }
                    }
                    if ok && len <= m {
                        best = best.min(cost);
                    }
                }
            }
        }
        best
    }

    fn permutations(v: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == v.len() {
            out.push(v.clone());
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permutations(v, k + 1, out);
            v.swap(k, i);
        }
    }

    #[test]
    fn optimum_matches_unpruned_enumeration() {
        let bank = build_template_bank();
        let mut state = 0x2545_f491_4f6c_dd1du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for case in 0..40 {
            let n = 1 + (next() % 5) as usize;
            let m = 1 + (next() % 4) as usize;
            let strips: Vec<Strip> = (0..n)
                .map(|i| {
                    let bits = next();
                    strip(i as u32, BinaryRaster::from_fn(3, 6, |x, y| bits >> (y * 3 + x) & 1 == 1).unwrap())
                })
                .collect();
            let rec = brute_force_assemble(&strips, &bank, m).unwrap();
            assert_eq!(rec.chains.len(), n.div_ceil(m), "case {case}");
            assert_eq!(cost_of(&rec), naive_min_cost(&strips, &bank, m), "case {case}: n={n} m={m}");
        }
    }
}
