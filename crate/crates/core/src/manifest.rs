//! JSON manifests that glue the command-line stages together.
//!
//! File names inside a manifest are relative to the manifest's directory.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::assembler::{Chain, ChainMember, Reconstruction};
use crate::corpus::DocClass;
use crate::error::{Error, Result};
use crate::pgm::read_pgm;
use crate::raster::binarize;
use crate::segmenter::SegmentedStrip;
use crate::shredder::{GroundTruth, Placement, Strip, StripId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthEntry {
    pub id: StripId,
    pub file: String,
    pub page: usize,
    pub position: usize,
    pub flipped: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthManifest {
    pub pages: usize,
    pub strips_per_page: usize,
    pub page_width: usize,
    pub page_height: usize,
    pub strips: Vec<TruthEntry>,
    /// Set when the pages were generated rather than read from files.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub doc_class: Option<DocClass>,
}

impl TruthManifest {
    pub fn new(gt: &GroundTruth, page_width: usize, page_height: usize, file: impl Fn(StripId) -> String) -> Self {
        Self {
            pages: gt.pages,
            strips_per_page: gt.strips_per_page,
            page_width,
            page_height,
            strips: gt
                .placement
                .iter()
                .map(|(&id, p)| TruthEntry {
                    id,
                    file: file(id),
                    page: p.page,
                    position: p.position,
                    flipped: p.flipped,
                })
                .collect(),
            doc_class: None,
        }
    }

    pub fn ground_truth(&self) -> Result<GroundTruth> {
        let mut placement = BTreeMap::new();
        for s in &self.strips {
            if s.page >= self.pages || s.position >= self.strips_per_page {
                return Err(Error::Consistency(format!(
                    "strip {} placed at page {} position {} outside {}x{}",
                    s.id, s.page, s.position, self.pages, self.strips_per_page
                )));
            }
            let p = Placement {
                page: s.page,
                position: s.position,
                flipped: s.flipped,
            };
            if placement.insert(s.id, p).is_some() {
                return Err(Error::Consistency(format!("strip {} listed twice", s.id)));
            }
        }
        Ok(GroundTruth {
            pages: self.pages,
            strips_per_page: self.strips_per_page,
            placement,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentEntry {
    pub id: StripId,
    pub file: String,
    pub left: usize,
    pub top: usize,
    pub width: usize,
    pub height: usize,
}

impl SegmentEntry {
    pub fn new(s: &SegmentedStrip, file: String) -> Self {
        Self {
            id: s.id,
            file,
            left: s.bounds.left,
            top: s.bounds.top,
            width: s.bounds.width,
            height: s.bounds.height,
        }
    }
}

/// Either manifest that lists strip files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StripManifest {
    Truth(TruthManifest),
    Segments(Vec<SegmentEntry>),
}

impl StripManifest {
    pub fn files(&self) -> Vec<(StripId, &str)> {
        match self {
            StripManifest::Truth(t) => t.strips.iter().map(|s| (s.id, s.file.as_str())).collect(),
            StripManifest::Segments(v) => v.iter().map(|s| (s.id, s.file.as_str())).collect(),
        }
    }

    /// Reads and binarizes every listed strip, in manifest order.
    pub fn load_strips(&self, dir: &Path, threshold: u8) -> Result<Vec<Strip>> {
        self.files()
            .into_iter()
            .map(|(id, file)| {
                let path = dir.join(file);
                let bytes = std::fs::read(&path).map_err(|e| Error::io(&path, e))?;
                let gray = read_pgm(&bytes).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                Ok(Strip {
                    id,
                    raster: binarize(&gray, threshold)?,
                })
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReconstructionManifest {
    pub chains: Vec<Vec<ChainMember>>,
    pub unplaced: Vec<StripId>,
    /// Strips dropped as blank before assembly.
    #[serde(default)]
    pub removed: Vec<StripId>,
    pub evaluations: usize,
    pub early_stop: bool,
    pub hints: bool,
}

impl ReconstructionManifest {
    pub fn reconstruction(&self) -> Reconstruction {
        Reconstruction {
            chains: self
                .chains
                .iter()
                .map(|members| Chain {
                    members: members.clone(),
                    seam_scores: vec![],
                })
                .collect(),
            unplaced: self.unplaced.clone(),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("manifest types always serialize");
    out.push(b'\n');
    out
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_slice(&bytes).map_err(|e| Error::json(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truth_round_trip() {
        let gt = GroundTruth {
            pages: 1,
            strips_per_page: 2,
            placement: [
                (StripId(0), Placement { page: 0, position: 1, flipped: true }),
                (StripId(1), Placement { page: 0, position: 0, flipped: false }),
            ]
            .into_iter()
            .collect(),
        };
        let m = TruthManifest::new(&gt, 10, 4, |id| format!("strip_{:04}.pgm", id.0));
        let text = String::from_utf8(to_json(&m)).unwrap();
        assert!(text.contains("\"file\": \"strip_0001.pgm\""));
        let back: TruthManifest = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.ground_truth().unwrap(), gt);
        match serde_json::from_str::<StripManifest>(&text).unwrap() {
            StripManifest::Truth(t) => assert_eq!(t, m),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn segments_parse_as_strip_manifest() {
        let text = r#"[{"id": 3, "file": "a.pgm", "left": 1, "top": 2, "width": 3, "height": 4}]"#;
        let m: StripManifest = serde_json::from_str(text).unwrap();
        assert_eq!(m.files(), vec![(StripId(3), "a.pgm")]);
    }

    #[test]
    fn inconsistent_truth() {
        let mut m = TruthManifest {
            pages: 1,
            strips_per_page: 1,
            page_width: 4,
            page_height: 4,
            strips: vec![TruthEntry {
                id: StripId(0),
                file: "x".into(),
                page: 0,
                position: 0,
                flipped: false,
            }],
            doc_class: None,
        };
        assert!(m.ground_truth().is_ok());
        m.strips.push(m.strips[0].clone());
        assert!(matches!(m.ground_truth(), Err(Error::Consistency(_))));
        m.strips.pop();
        m.strips[0].position = 3;
        assert!(matches!(m.ground_truth(), Err(Error::Consistency(_))));
    }

    #[test]
    fn reconstruction_schema() {
        let m = ReconstructionManifest {
            chains: vec![vec![ChainMember { id: StripId(2), flipped: true }]],
            unplaced: vec![StripId(5)],
            removed: vec![],
            evaluations: 12,
            early_stop: true,
            hints: false,
        };
        let v: serde_json::Value = serde_json::from_slice(&to_json(&m)).unwrap();
        assert_eq!(v["chains"][0][0]["id"], 2);
        assert_eq!(v["chains"][0][0]["flipped"], true);
        assert_eq!(v["unplaced"][0], 5);
        assert_eq!(v["hints"], false);
        assert_eq!(m.reconstruction().strip_ids(), vec![StripId(2), StripId(5)]);
    }
}
