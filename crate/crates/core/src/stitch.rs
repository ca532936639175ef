//! Stitching chains back into page rasters.

use std::collections::HashMap;

use crate::assembler::Chain;
use crate::error::{Error, Result};
use crate::raster::BinaryRaster;
use crate::shredder::{Strip, StripId};

/// Concatenates the chain's strips left to right, turning flipped members
/// upside down first. Pixel-exact, no blending.
pub fn stitch(chain: &Chain, strips: &[Strip]) -> Result<BinaryRaster> {
    let by_id: HashMap<StripId, &BinaryRaster> = strips.iter().map(|s| (s.id, &s.raster)).collect();
    let parts = chain
        .members
        .iter()
        .map(|m| {
            let r = by_id
                .get(&m.id)
                .ok_or_else(|| Error::Consistency(format!("chain refers to unknown strip {}", m.id)))?;
            Ok(if m.flipped { r.rotate180() } else { (*r).clone() })
        })
        .collect::<Result<Vec<_>>>()?;
    if parts.is_empty() {
        return Err(Error::geometry("cannot stitch an empty chain"));
    }
    BinaryRaster::hconcat(&parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembler::ChainMember;
    use crate::shredder::shred;

    fn chain(members: &[(u32, bool)]) -> Chain {
        Chain {
            members: members
                .iter()
                .map(|&(id, flipped)| ChainMember {
                    id: StripId(id),
                    flipped,
                })
                .collect(),
            seam_scores: vec![],
        }
    }

    #[test]
    fn single_member_is_identity() {
        let r = BinaryRaster::from_rows(&["#..", ".#.", "..#", "###"]).unwrap();
        let strips = vec![Strip { id: StripId(0), raster: r.clone() }];
        assert_eq!(stitch(&chain(&[(0, false)]), &strips).unwrap(), r);
        assert_eq!(stitch(&chain(&[(0, true)]), &strips).unwrap(), r.rotate180());
    }

    #[test]
    fn ground_truth_chain_restores_page() {
        let page = BinaryRaster::from_fn(13, 7, |x, y| (x * x + y) % 4 == 1).unwrap();
        let (set, gt) = shred(&page, 4, 77).unwrap();
        let members: Vec<(u32, bool)> = gt
            .page_order(0)
            .into_iter()
            .map(|id| (id.0, gt.placement[&id].flipped))
            .collect();
        assert_eq!(stitch(&chain(&members), &set.strips).unwrap(), page);
    }

    #[test]
    fn flipping_one_member_changes_only_its_columns() {
        let rows = ["##..#.", ".#.##.", "#...##", "..#..#"];
        let r = BinaryRaster::from_rows(&rows).unwrap();
        let strips: Vec<Strip> = (0..3)
            .map(|j| Strip {
                id: StripId(j as u32),
                raster: r.crop_columns(2 * j, 2 * j + 2).unwrap(),
            })
            .collect();
        let plain = stitch(&chain(&[(0, false), (1, false), (2, false)]), &strips).unwrap();
        let flipped = stitch(&chain(&[(0, false), (1, true), (2, false)]), &strips).unwrap();
        // pixel-diff oracle: only columns 2..4 may differ, and they hold the rotated middle strip
        let middle = strips[1].raster.rotate180();
        for y in 0..4 {
            for x in 0..6 {
                if (2..4).contains(&x) {
                    assert_eq!(flipped.get(x, y), middle.get(x - 2, y));
                } else {
                    assert_eq!(flipped.get(x, y), plain.get(x, y));
                }
            }
        }
        assert_ne!(plain, flipped);
    }

    #[test]
    fn errors() {
        let strips = vec![
            Strip { id: StripId(0), raster: BinaryRaster::blank(2, 4).unwrap() },
            Strip { id: StripId(1), raster: BinaryRaster::blank(2, 5).unwrap() },
        ];
        assert!(matches!(stitch(&chain(&[(0, false), (1, false)]), &strips), Err(Error::Geometry(_))));
        assert!(matches!(stitch(&chain(&[(7, false)]), &strips), Err(Error::Consistency(_))));
        assert!(stitch(&chain(&[]), &strips).is_err());
    }
}
