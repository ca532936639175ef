//! Command-line front end. Every subcommand reads the previous stage's files
//! and writes its own, so stages can be run and replayed one at a time.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::corpus::{DocClass, MIN_PAGE_SIDE};
use crate::error::{Error, Result};
use crate::eval::{evaluate, report_table, EvalReport};
use crate::manifest::{
    read_json, to_json, ReconstructionManifest, SegmentEntry, StripManifest, TruthManifest,
};
use crate::pgm::{read_pgm, write_pgm};
use crate::pipeline::{assemble_strips, generate_document, AssemblyOptions};
use crate::raster::{binarize, to_gray, BinaryRaster, DEFAULT_THRESHOLD};
use crate::segmenter::{relabel_ground_truth, segment_sheet_with, Bounds, SegmentConfig};
use crate::shredder::{compose_sheet_with_layout, shred_document, Geometry, SheetPlacement, StripSet};
use crate::similarity::{bank_contact_sheet, build_template_bank};
use crate::stitch::stitch;

pub const TRUTH_FILE: &str = "truth.json";
pub const LAYOUT_FILE: &str = "sheet_layout.json";
pub const SHEET_FILE: &str = "sheet.pgm";
pub const SEGMENTS_FILE: &str = "segments.json";
pub const SEGMENT_TRUTH_FILE: &str = "segment_truth.json";
pub const RECONSTRUCTION_FILE: &str = "reconstruction.json";
pub const TRACE_FILE: &str = "trace.jsonl";
pub const REPORT_JSON: &str = "report.json";
pub const REPORT_TXT: &str = "report.txt";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Strips per page.
    pub m: usize,
    pub seed: u64,
    /// Strips with ink density at or below this are blank.
    pub epsilon: f64,
    /// Gray values strictly below this are ink.
    pub threshold: u8,
    pub early_stop: bool,
    pub orientation_hints: bool,
    /// Background pixels around and between strips on the scan sheet.
    pub gap: usize,
    /// Class to generate; the pipeline runs all three when unset.
    pub doc_class: Option<DocClass>,
    /// Pages to generate.
    pub pages: usize,
    pub page_width: usize,
    pub page_height: usize,
    pub out: PathBuf,
    pub verbose: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            m: 8,
            seed: 0,
            epsilon: crate::preprocess::DEFAULT_EPSILON,
            threshold: DEFAULT_THRESHOLD,
            early_stop: true,
            orientation_hints: true,
            gap: 3,
            doc_class: None,
            pages: 2,
            page_width: 256,
            page_height: 256,
            out: PathBuf::from("out"),
            verbose: false,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::geometry("m must be at least 1"));
        }
        if self.pages == 0 {
            return Err(Error::geometry("at least one page is required"));
        }
        if self.gap == 0 {
            return Err(Error::geometry("sheet gap must be at least 1 pixel"));
        }
        if !(0.0..1.0).contains(&self.epsilon) {
            return Err(Error::Config(format!("epsilon {} is outside [0, 1)", self.epsilon)));
        }
        if self.threshold == 0 {
            return Err(Error::Config("threshold 0 would make every pixel paper".into()));
        }
        Ok(())
    }

    fn assembly(&self) -> AssemblyOptions {
        AssemblyOptions {
            m: self.m,
            epsilon: self.epsilon,
            early_stop: self.early_stop,
            orientation_hints: self.orientation_hints,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "unshred", version, about = "Shred, scan and reconstruct document pages")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

/// Overrides for the configuration file; unset flags leave it alone.
#[derive(Debug, Default, Args)]
pub struct Flags {
    /// JSON configuration file
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Strips per page
    #[arg(long, global = true)]
    pub m: Option<usize>,
    /// Seed for page generation, shuffling and sheet layout
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Blank strip ink density threshold
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    /// Binarization threshold (values below are ink)
    #[arg(long, global = true)]
    pub threshold: Option<u8>,
    /// Keep scoring edges that already have a perfect match
    #[arg(long, global = true)]
    pub no_early_stop: bool,
    /// Score all four orientations even for confidently oriented strips
    #[arg(long, global = true)]
    pub no_orientation: bool,
    /// Sheet spacing in pixels
    #[arg(long, global = true)]
    pub gap: Option<usize>,
    /// handwritten, typeset or image
    #[arg(long, global = true)]
    pub class: Option<DocClass>,
    /// Pages to generate
    #[arg(long, global = true)]
    pub pages: Option<usize>,
    /// Generated page width
    #[arg(long, global = true)]
    pub width: Option<usize>,
    /// Generated page height
    #[arg(long, global = true)]
    pub height: Option<usize>,
    /// Output directory
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write the score trace and template bank
    #[arg(long, short, global = true)]
    pub verbose: bool,
}

impl Flags {
    pub fn resolve(&self) -> Result<PipelineConfig> {
        let mut cfg = match &self.config {
            Some(path) => read_json(path).map_err(|e| match e {
                Error::Json { path, source } => Error::Config(format!("{}: {source}", path.display())),
                other => other,
            })?,
            None => PipelineConfig::default(),
        };
        macro_rules! set {
            ($($flag:ident => $field:ident),*) => {
                $(if let Some(v) = self.$flag.clone() { cfg.$field = v; })*
            };
        }
        set!(m => m, seed => seed, epsilon => epsilon, threshold => threshold, gap => gap,
             pages => pages, width => page_width, height => page_height, out => out);
        if let Some(c) = self.class {
            cfg.doc_class = Some(c);
        }
        cfg.early_stop &= !self.no_early_stop;
        cfg.orientation_hints &= !self.no_orientation;
        cfg.verbose |= self.verbose;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cut pages into strips; writes strip PGMs and truth.json
    Shred {
        /// Page PGM files
        #[arg(value_name = "PAGE")]
        files: Vec<PathBuf>,
        /// Generate pages of --class instead of reading files
        #[arg(long)]
        generate: bool,
    },
    /// Lay the strips of a manifest out on a scan sheet
    Compose { manifest: PathBuf },
    /// Cut a scan sheet back into strips
    Segment {
        sheet: PathBuf,
        /// Sheet layout, to carry ground truth over to segment ids
        #[arg(long, requires = "truth")]
        layout: Option<PathBuf>,
        #[arg(long, requires = "layout")]
        truth: Option<PathBuf>,
    },
    /// Assemble strips into pages
    Reconstruct { manifest: PathBuf },
    /// Score a reconstruction against ground truth
    Evaluate { reconstruction: PathBuf, truth: PathBuf },
    /// Generate, shred, scan, segment, reconstruct and evaluate
    Pipeline,
}

/// Files and directories created by a command, removed again if it fails.
#[derive(Debug, Default)]
pub struct Outputs {
    files: Vec<PathBuf>,
    dirs: Vec<PathBuf>,
    verbose: bool,
}

impl Outputs {
    pub fn new(verbose: bool) -> Self {
        Self {
            verbose,
            ..Self::default()
        }
    }

    pub fn dir(&mut self, path: &Path) -> Result<()> {
        let missing: Vec<PathBuf> = path
            .ancestors()
            .take_while(|p| !p.as_os_str().is_empty() && !p.exists())
            .map(Path::to_path_buf)
            .collect();
        std::fs::create_dir_all(path).map_err(|e| Error::io(path, e))?;
        self.dirs.extend(missing.into_iter().rev());
        Ok(())
    }

    pub fn write(&mut self, path: &Path, bytes: &[u8]) -> Result<()> {
        if let Some(parent) = path.parent() {
            self.dir(parent)?;
        }
        std::fs::write(path, bytes).map_err(|e| Error::io(path, e))?;
        self.files.push(path.to_path_buf());
        if self.verbose {
            eprintln!("wrote {}", path.display());
        }
        Ok(())
    }

    pub fn files(&self) -> &[PathBuf] {
        &self.files
    }

    pub fn rollback(&mut self) {
        for f in self.files.drain(..).rev() {
            let _ = std::fs::remove_file(f);
        }
        for d in self.dirs.drain(..).rev() {
            let _ = std::fs::remove_dir(d);
        }
    }
}

fn read_page(path: &Path, threshold: u8) -> Result<BinaryRaster> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let gray = read_pgm(&bytes).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    binarize(&gray, threshold)
}

fn manifest_dir(path: &Path) -> &Path {
    path.parent().unwrap_or(Path::new(""))
}

fn strip_file(id: crate::shredder::StripId) -> String {
    format!("strips/strip_{:04}.pgm", id.0)
}

/// Returns the path of the ground-truth manifest.
pub fn cmd_shred(cfg: &PipelineConfig, pages: &[PathBuf], generate: bool, out: &mut Outputs) -> Result<PathBuf> {
    let (pages, class) = match (generate, pages.is_empty()) {
        (true, true) => {
            let class = cfg
                .doc_class
                .ok_or_else(|| Error::Config("--generate needs --class".into()))?;
            if cfg.page_width < MIN_PAGE_SIDE || cfg.page_height < MIN_PAGE_SIDE {
                return Err(Error::geometry(format!(
                    "generated pages must be at least {MIN_PAGE_SIDE}x{MIN_PAGE_SIDE}"
                )));
            }
            let pages = generate_document(class, cfg.pages, cfg.page_width, cfg.page_height, cfg.seed)?;
            for (i, p) in pages.iter().enumerate() {
                out.write(&cfg.out.join(format!("pages/page_{i:02}.pgm")), &write_pgm(&to_gray(p)))?;
            }
            (pages, Some(class))
        }
        (false, false) => (
            pages
                .iter()
                .map(|p| read_page(p, cfg.threshold))
                .collect::<Result<Vec<_>>>()?,
            cfg.doc_class,
        ),
        (true, false) => return Err(Error::Config("give page files or --generate, not both".into())),
        (false, true) => return Err(Error::Config("no page files given (or pass --generate)".into())),
    };
    let (set, gt) = shred_document(&pages, cfg.m, cfg.seed)?;
    for s in &set.strips {
        out.write(&cfg.out.join(strip_file(s.id)), &write_pgm(&to_gray(&s.raster)))?;
    }
    let mut manifest = TruthManifest::new(&gt, set.geometry.page_width, set.geometry.page_height, strip_file);
    manifest.doc_class = class;
    let path = cfg.out.join(TRUTH_FILE);
    out.write(&path, &to_json(&manifest))?;
    Ok(path)
}

/// Returns the path of the sheet PGM.
pub fn cmd_compose(cfg: &PipelineConfig, manifest_path: &Path, out: &mut Outputs) -> Result<PathBuf> {
    let manifest: StripManifest = read_json(manifest_path)?;
    let strips = manifest.load_strips(manifest_dir(manifest_path), cfg.threshold)?;
    let geometry = match &manifest {
        StripManifest::Truth(t) => Geometry {
            page_width: t.page_width,
            page_height: t.page_height,
            strip_width: t.page_width / t.strips_per_page.max(1),
        },
        StripManifest::Segments(_) => Geometry {
            page_width: strips.iter().map(|s| s.raster.width()).sum(),
            page_height: strips.iter().map(|s| s.raster.height()).max().unwrap_or(0),
            strip_width: strips.first().map_or(0, |s| s.raster.width()),
        },
    };
    let (sheet, layout) = compose_sheet_with_layout(&StripSet { strips, geometry }, cfg.gap, cfg.seed)?;
    let path = cfg.out.join(SHEET_FILE);
    out.write(&path, &write_pgm(&sheet))?;
    out.write(&cfg.out.join(LAYOUT_FILE), &to_json(&layout))?;
    Ok(path)
}

/// Returns the path of the segment manifest.
pub fn cmd_segment(
    cfg: &PipelineConfig,
    sheet_path: &Path,
    carry: Option<(&Path, &Path)>,
    out: &mut Outputs,
) -> Result<PathBuf> {
    let bytes = std::fs::read(sheet_path).map_err(|e| Error::io(sheet_path, e))?;
    let sheet = read_pgm(&bytes).map_err(|e| Error::Config(format!("{}: {e}", sheet_path.display())))?;
    let segments = segment_sheet_with(
        &sheet,
        &SegmentConfig {
            ink_threshold: cfg.threshold,
            ..SegmentConfig::default()
        },
    )?;
    let file = |id: crate::shredder::StripId| format!("segments/segment_{:04}.pgm", id.0);
    let mut entries = Vec::with_capacity(segments.len());
    for s in &segments {
        out.write(&cfg.out.join(file(s.id)), &write_pgm(&to_gray(&s.raster)))?;
        entries.push(SegmentEntry::new(s, file(s.id)));
    }
    let path = cfg.out.join(SEGMENTS_FILE);
    out.write(&path, &to_json(&entries))?;

    if let Some((layout_path, truth_path)) = carry {
        let layout: Vec<SheetPlacement> = read_json(layout_path)?;
        let truth: TruthManifest = read_json(truth_path)?;
        let bounds: Vec<Bounds> = segments.iter().map(|s| s.bounds).collect();
        let (gt, _) = relabel_ground_truth(&truth.ground_truth()?, &layout, &bounds)?;
        let mut relabeled = TruthManifest::new(&gt, truth.page_width, truth.page_height, file);
        relabeled.doc_class = truth.doc_class;
        out.write(&cfg.out.join(SEGMENT_TRUTH_FILE), &to_json(&relabeled))?;
    }
    Ok(path)
}

/// Returns the path of the reconstruction manifest.
pub fn cmd_reconstruct(cfg: &PipelineConfig, manifest_path: &Path, out: &mut Outputs) -> Result<PathBuf> {
    let manifest: StripManifest = read_json(manifest_path)?;
    let strips = manifest.load_strips(manifest_dir(manifest_path), cfg.threshold)?;
    let bank = build_template_bank();
    let mut trace = Vec::new();
    let assembly = assemble_strips(&strips, &bank, &cfg.assembly(), |r| {
        if cfg.verbose {
            trace.extend(serde_json::to_vec(&r).expect("trace records serialize"));
            trace.push(b'\n');
        }
    })?;
    let rec = &assembly.reconstruction;
    if rec.strip_ids().len() + assembly.removed.len() != strips.len() {
        return Err(Error::Invariant("assembly lost or duplicated strips".into()));
    }
    for (k, chain) in rec.chains.iter().enumerate() {
        let page = stitch(chain, &strips)?;
        out.write(&cfg.out.join(format!("stitched/chain_{k:03}.pgm")), &write_pgm(&to_gray(&page)))?;
    }
    let doc = ReconstructionManifest {
        chains: rec.chains.iter().map(|c| c.members.clone()).collect(),
        unplaced: rec.unplaced.clone(),
        removed: assembly.removed.clone(),
        evaluations: assembly.evaluations,
        early_stop: cfg.early_stop,
        hints: cfg.orientation_hints,
    };
    let path = cfg.out.join(RECONSTRUCTION_FILE);
    out.write(&path, &to_json(&doc))?;
    if cfg.verbose {
        out.write(&cfg.out.join(TRACE_FILE), &trace)?;
        out.write(&cfg.out.join("template_bank.pgm"), &write_pgm(&bank_contact_sheet(&bank)))?;
        eprintln!(
            "{} strips, {} chains, {} unplaced, {} blank, {} evaluations",
            strips.len(),
            rec.chains.len(),
            rec.unplaced.len(),
            assembly.removed.len(),
            assembly.evaluations
        );
    }
    Ok(path)
}

pub fn cmd_evaluate(
    cfg: &PipelineConfig,
    reconstruction_path: &Path,
    truth_path: &Path,
    out: &mut Outputs,
) -> Result<EvalReport> {
    let doc: ReconstructionManifest = read_json(reconstruction_path)?;
    let truth: TruthManifest = read_json(truth_path)?;
    let class = cfg
        .doc_class
        .or(truth.doc_class)
        .ok_or_else(|| Error::Config("document class unknown; pass --class".into()))?;
    let report = evaluate(&doc.reconstruction(), &truth.ground_truth()?, class)?;
    out.write(&cfg.out.join(REPORT_JSON), &to_json(&report))?;
    out.write(&cfg.out.join(REPORT_TXT), report_table(std::slice::from_ref(&report)).as_bytes())?;
    Ok(report)
}

/// Runs every stage through its files for each requested class, then writes
/// the comparison table.
pub fn cmd_pipeline(cfg: &PipelineConfig, out: &mut Outputs) -> Result<Vec<EvalReport>> {
    let classes = match cfg.doc_class {
        Some(c) => vec![c],
        None => DocClass::ALL.to_vec(),
    };
    let mut reports = Vec::with_capacity(classes.len());
    for class in classes {
        let dir = cfg.out.join(class.name());
        let sub = PipelineConfig {
            doc_class: Some(class),
            out: dir.clone(),
            ..cfg.clone()
        };
        if cfg.verbose {
            eprintln!("{class}: {} pages of {}x{}, m = {}", cfg.pages, cfg.page_width, cfg.page_height, cfg.m);
        }
        let truth = cmd_shred(&sub, &[], true, out)?;
        let sheet = cmd_compose(&sub, &truth, out)?;
        let segments = cmd_segment(&sub, &sheet, Some((&dir.join(LAYOUT_FILE), &truth)), out)?;
        let rec = cmd_reconstruct(&sub, &segments, out)?;
        reports.push(cmd_evaluate(&sub, &rec, &dir.join(SEGMENT_TRUTH_FILE), out)?);
    }
    out.write(&cfg.out.join(REPORT_JSON), &to_json(&reports))?;
    out.write(&cfg.out.join(REPORT_TXT), report_table(&reports).as_bytes())?;
    Ok(reports)
}

fn dispatch(cli: &Cli, out: &mut Outputs) -> Result<()> {
    let cfg = cli.flags.resolve()?;
    *out = Outputs::new(cfg.verbose);
    match &cli.command {
        Command::Shred { files, generate } => {
            cmd_shred(&cfg, files, *generate, out)?;
        }
        Command::Compose { manifest } => {
            cmd_compose(&cfg, manifest, out)?;
        }
        Command::Segment { sheet, layout, truth } => {
            let carry = layout.as_deref().zip(truth.as_deref());
            cmd_segment(&cfg, sheet, carry, out)?;
        }
        Command::Reconstruct { manifest } => {
            cmd_reconstruct(&cfg, manifest, out)?;
        }
        Command::Evaluate { reconstruction, truth } => {
            let report = cmd_evaluate(&cfg, reconstruction, truth, out)?;
            print!("{}", report_table(&[report]));
        }
        Command::Pipeline => {
            let reports = cmd_pipeline(&cfg, out)?;
            print!("{}", report_table(&reports));
        }
    }
    let _ = std::io::stdout().flush();
    Ok(())
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let mut out = Outputs::default();
    match dispatch(&cli, &mut out) {
        Ok(()) => 0,
        Err(e) => {
            out.rollback();
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
