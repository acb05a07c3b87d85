use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;
use thiserror::Error;

use tribound_core::cochain::cache::DeltaCache;
use tribound_core::cochain::{CochainError, CochainFn, DeltaReach};
use tribound_core::coloring::{enumerate_colorings, extend_coloring, Color, Modulus};
use tribound_core::diagram::{validate as validate_spec, Diagram, DiagramSpec, Side};
use tribound_core::invariant::{
    all_weights, certify_lower_bound_with, verify_certificate, weight as weigh, InvariantError,
};
use tribound_core::reference::FixtureLibrary;
use tribound_core::reproduce::reproduce as run_reproduction;

use crate::report::{set_text, set_value, CacheStats, RunReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Cap(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Cap(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Input(_) => "input",
            CliError::Cap(_) => "resource_cap",
        }
    }
}

impl From<CochainError> for CliError {
    fn from(e: CochainError) -> Self {
        match e {
            CochainError::CapExceeded { .. } | CochainError::SumOverflow { .. } => {
                CliError::Cap(e.to_string())
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<InvariantError> for CliError {
    fn from(e: InvariantError) -> Self {
        match e {
            InvariantError::Cochain(inner) => inner.into(),
            InvariantError::ZeroDepth => CliError::Usage(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Invalid,
    Mismatch,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Invalid => 2,
            Status::Mismatch => 3,
        }
    }
}

pub struct Outcome {
    pub report: RunReport,
    pub text: String,
    pub status: Status,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColoringChoice {
    All,
    Id(usize),
}

pub fn parse_coloring_choice(s: &str) -> Result<ColoringChoice, String> {
    if s == "all" {
        return Ok(ColoringChoice::All);
    }
    s.parse().map(ColoringChoice::Id).map_err(|_| format!("expected `all` or a coloring id, got `{s}`"))
}

/// `--cache`, then `TRIBOUND_CACHE`, then the user cache directory.
pub fn resolve_cache_dir(flag: Option<PathBuf>, disabled: bool) -> Option<PathBuf> {
    if disabled {
        return None;
    }
    let env = |k| std::env::var_os(k).filter(|v| !v.is_empty()).map(PathBuf::from);
    flag.or_else(|| env("TRIBOUND_CACHE"))
        .or_else(|| env("XDG_CACHE_HOME").map(|p| p.join("tribound")))
        .or_else(|| env("HOME").map(|p| p.join(".cache").join("tribound")))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn read_diagram(path: &Path) -> Result<Diagram, CliError> {
    let text = read_text(path)?;
    tribound_core::diagram::parse_diagram(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn modulus(n: u32) -> Result<Modulus, CliError> {
    Modulus::new(n).map_err(|e| CliError::Input(e.to_string()))
}

fn cochain(f: &str, n: u32) -> Result<CochainFn, CliError> {
    Ok(CochainFn::parse(f, modulus(n)?)?)
}

fn check_color(s: Color, n: Modulus) -> Result<(), CliError> {
    if n.contains(s) {
        Ok(())
    } else {
        Err(CliError::Input(format!("outer color {s} is not in Z({n})")))
    }
}

/// Levels for `f`, from the cache when possible.
fn load_reach(f: &CochainFn, cache: Option<&DeltaCache>, stats: &mut CacheStats) -> DeltaReach {
    if let Some(cache) = cache {
        stats.dir = Some(cache.dir().to_path_buf());
        if let Ok(Some(reach)) = cache.load(f) {
            stats.hits += 1;
            return reach;
        }
        stats.misses += 1;
    }
    DeltaReach::new(f)
}

fn store_reach(
    f: &CochainFn,
    reach: &DeltaReach,
    levels_before: usize,
    cache: Option<&DeltaCache>,
    stats: &mut CacheStats,
) -> Option<PathBuf> {
    let cache = cache?;
    if reach.levels().len() <= levels_before && stats.hits > 0 {
        return Some(cache.path_for(f));
    }
    match cache.store(f, reach) {
        Ok(path) => {
            stats.writes += 1;
            Some(path)
        }
        Err(e) => {
            eprintln!("warning: {e}");
            None
        }
    }
}

pub fn validate(path: &Path, emit_derived: bool) -> Result<Outcome, CliError> {
    let text = read_text(path)?;
    let spec = DiagramSpec::from_json(&text)
        .map_err(|e| CliError::Input(format!("{}: malformed diagram file: {e}", path.display())))?;
    let mut report = RunReport::new(
        "validate",
        json!({ "path": path, "emit_derived": emit_derived }),
    );
    let violations = validate_spec(&spec);
    if !violations.is_valid() {
        report.results = json!({ "valid": false, "violations": violations.violations });
        let text = format!("{}: invalid\n{violations}", path.display());
        return Ok(Outcome { report, text, status: Status::Invalid });
    }
    let d = Diagram::from_spec(&spec).map_err(|e| CliError::Input(e.to_string()))?;
    let mut results = json!({
        "valid": true,
        "name": d.name(),
        "crossings": d.crossings().len(),
        "edges": d.edges().len(),
        "arcs": d.arcs().len(),
        "faces": d.faces().len(),
        "components": d.components().len(),
        "outer_face": d.outer_face(),
        "hash": d.content_hash(),
    });
    let mut text = format!(
        "{}: valid\n  {} crossings, {} edges, {} arcs, {} faces, {} components, outer face {}\n",
        d.name(),
        d.crossings().len(),
        d.edges().len(),
        d.arcs().len(),
        d.faces().len(),
        d.components().len(),
        d.outer_face(),
    );
    if emit_derived {
        results["derived"] = serde_json::to_value(d.derived()).expect("derived data serializes");
        for c in d.crossings() {
            let _ = writeln!(text, "  crossing {}: sign {:+}", c.id, c.sign.value());
        }
        for a in d.arcs() {
            let edges: Vec<String> = a.edges.iter().map(|e| e.to_string()).collect();
            let _ = writeln!(text, "  arc {}: edges {}", a.id, edges.join(" "));
        }
        for f in d.faces() {
            let sides: Vec<String> =
                f.boundary.iter().map(|(e, s)| format!("{e}{}", if *s == Side::Left { "L" } else { "R" })).collect();
            let _ = writeln!(text, "  face {}: {}", f.id, sides.join(" "));
        }
    }
    report.results = results;
    Ok(Outcome { report, text, status: Status::Ok })
}

pub fn colorings(
    path: &Path,
    n: u32,
    outer: Option<Color>,
    nontrivial_only: bool,
) -> Result<Outcome, CliError> {
    let d = read_diagram(path)?;
    let m = modulus(n)?;
    if let Some(s) = outer {
        check_color(s, m)?;
    }
    let all = enumerate_colorings(&d, m);
    let trivial = all.iter().filter(|c| c.is_trivial()).count();
    let mut listed = Vec::new();
    let mut text = format!(
        "{}: {} colorings mod {n} ({} trivial, {} non-trivial)\n",
        d.name(),
        all.len(),
        trivial,
        all.len() - trivial
    );
    for (id, c) in all.iter().enumerate() {
        if nontrivial_only && c.is_trivial() {
            continue;
        }
        let arcs: Vec<(usize, Color)> =
            c.arc_colors().iter().enumerate().map(|(a, &v)| (a, v)).collect();
        let mut entry = json!({ "id": id, "trivial": c.is_trivial(), "arc_colors": arcs });
        let _ = write!(text, "  #{id} arcs {:?}", c.arc_colors());
        if let Some(s) = outer {
            let ec = extend_coloring(&d, c, s).map_err(|e| CliError::Input(e.to_string()))?;
            let regions: Vec<(usize, Color)> =
                ec.region_colors().iter().enumerate().map(|(f, &v)| (f, v)).collect();
            entry["region_colors"] = json!(regions);
            let _ = write!(text, " regions {:?}", ec.region_colors());
        }
        if c.is_trivial() {
            text.push_str(" (trivial)");
        }
        text.push('\n');
        listed.push(entry);
    }
    let mut report = RunReport::new(
        "colorings",
        json!({ "path": path, "n": n, "outer_color": outer, "nontrivial_only": nontrivial_only }),
    );
    report.results = json!({
        "diagram": d.name(),
        "count": all.len(),
        "trivial": trivial,
        "nontrivial": all.len() - trivial,
        "listed": listed.len(),
        "colorings": listed,
    });
    Ok(Outcome { report, text, status: Status::Ok })
}

pub fn weight(
    path: &Path,
    n: u32,
    f_text: &str,
    s: Color,
    choice: ColoringChoice,
) -> Result<Outcome, CliError> {
    let d = read_diagram(path)?;
    let f = cochain(f_text, n)?;
    check_color(s, f.modulus())?;
    let mut report = RunReport::new(
        "weight",
        json!({ "path": path, "n": n, "f": f_text, "outer_color": s, "coloring": match choice {
            ColoringChoice::All => json!("all"),
            ColoringChoice::Id(id) => json!(id),
        }}),
    );
    let mut text = String::new();
    match choice {
        ColoringChoice::Id(id) => {
            let all = enumerate_colorings(&d, f.modulus());
            let c = all.get(id).ok_or_else(|| {
                CliError::Input(format!("coloring id {id} out of range (0..{})", all.len()))
            })?;
            let ec = extend_coloring(&d, c, s).map_err(|e| CliError::Input(e.to_string()))?;
            let w = weigh(&d, &ec, &f)?;
            let _ = writeln!(text, "{} coloring #{id} {:?}, outer color {s}", d.name(), c.arc_colors());
            for t in &w.terms {
                let tr = &t.triple;
                let _ = writeln!(
                    text,
                    "  crossing {}: {:+} f({}, {}, {}) = {:+}",
                    tr.crossing,
                    tr.sign.value(),
                    tr.region,
                    tr.under,
                    tr.over,
                    t.contribution
                );
            }
            let _ = writeln!(text, "W = {}", w.value);
            report.results = json!({
                "diagram": d.name(),
                "f": f.canonical(),
                "coloring_id": id,
                "arc_colors": c.arc_colors(),
                "trivial": c.is_trivial(),
                "weight": w,
            });
        }
        ColoringChoice::All => {
            let weights = all_weights(&d, s, &f)?;
            let mut rows = Vec::new();
            let mut phi: Vec<i128> = Vec::new();
            let _ = writeln!(text, "{} outer color {s}, f = {}", d.name(), f.canonical());
            for (id, (ec, w)) in weights.iter().enumerate() {
                let trivial = ec.base().is_trivial();
                if !trivial {
                    phi.push(*w);
                }
                let _ = writeln!(
                    text,
                    "  #{id} {:?} W = {w}{}",
                    ec.base().arc_colors(),
                    if trivial { " (trivial)" } else { "" }
                );
                rows.push(json!({
                    "id": id,
                    "arc_colors": ec.base().arc_colors(),
                    "trivial": trivial,
                    "weight": w,
                }));
            }
            phi.sort_unstable();
            phi.dedup();
            let _ = writeln!(text, "phi = {}", set_text(&phi, None));
            report.results = json!({
                "diagram": d.name(),
                "f": f.canonical(),
                "colorings": rows,
                "phi": set_value(&phi, None),
            });
        }
    }
    Ok(Outcome { report, text, status: Status::Ok })
}

pub struct DeltaArgs<'a> {
    pub n: u32,
    pub f: &'a str,
    pub max_m: usize,
    pub cache: Option<PathBuf>,
    pub level_cap: Option<usize>,
}

pub fn delta(args: DeltaArgs<'_>) -> Result<Outcome, CliError> {
    let f = cochain(args.f, args.n)?;
    let cache = args.cache.as_ref().map(DeltaCache::new);
    let mut report = RunReport::new(
        "delta",
        json!({ "n": args.n, "f": args.f, "max_m": args.max_m, "level_cap": args.level_cap }),
    );
    let mut reach = load_reach(&f, cache.as_ref(), &mut report.cache);
    if let Some(cap) = args.level_cap {
        reach = reach.with_cap(cap);
    }
    let before = reach.levels().len();
    reach.extend_to(args.max_m)?;
    let dump = store_reach(&f, &reach, before, cache.as_ref(), &mut report.cache);

    let mut text = format!("f = {} (mod {})\n", f.canonical(), args.n);
    let _ = writeln!(text, "|Im(δf)| = {}", reach.image().len());
    let _ = writeln!(text, "Im(δf) = {}", set_text(reach.image(), dump.as_ref()));
    let mut levels = Vec::new();
    for m in 0..=args.max_m {
        let level = reach.level(m).expect("levels extended");
        let _ = writeln!(text, "Δ_{m} = {}", set_text(level, dump.as_ref()));
        levels.push(json!({ "level": m, "set": set_value(level, dump.as_ref()) }));
    }
    report.results = json!({
        "f": f.canonical(),
        "image_size": reach.image().len(),
        "image": set_value(reach.image(), dump.as_ref()),
        "signed_image_size": reach.signed_image().len(),
        "levels": levels,
        "cache_file": dump,
    });
    Ok(Outcome { report, text, status: Status::Ok })
}

pub struct CertifyArgs<'a> {
    pub source: &'a Path,
    pub target: &'a Path,
    pub n: u32,
    pub f: &'a str,
    pub s: Color,
    pub max_m: usize,
    pub cache: Option<PathBuf>,
}

pub fn certify(args: CertifyArgs<'_>) -> Result<Outcome, CliError> {
    let d = read_diagram(args.source)?;
    let d2 = read_diagram(args.target)?;
    let f = cochain(args.f, args.n)?;
    check_color(args.s, f.modulus())?;
    let cache = args.cache.as_ref().map(DeltaCache::new);
    let mut report = RunReport::new(
        "certify",
        json!({
            "source": args.source,
            "target": args.target,
            "n": args.n,
            "f": args.f,
            "outer_color": args.s,
            "max_m": args.max_m,
        }),
    );
    let mut reach = load_reach(&f, cache.as_ref(), &mut report.cache);
    let before = reach.levels().len();
    let cert = certify_lower_bound_with(&d, &d2, args.s, &f, args.max_m, &mut reach)?;
    store_reach(&f, &reach, before, cache.as_ref(), &mut report.cache);
    let verified = verify_certificate(&cert, &d, &d2, &f);

    let mut text = format!("{} -> {}, f = {} (mod {}), s = {}\n", d.name(), d2.name(), cert.f, cert.n, cert.outer_color);
    if cert.degenerate {
        let _ = writeln!(text, "  {} has no non-trivial coloring", d.name());
    } else {
        let _ = writeln!(
            text,
            "  coloring #{} {:?}, W = {}",
            cert.coloring_id.unwrap(),
            cert.coloring,
            cert.weight.unwrap()
        );
        let _ = writeln!(text, "  phi = {}", set_text(&cert.phi, None));
        let _ = writeln!(text, "  W - phi = {}", set_text(&cert.differences, None));
        for l in &cert.levels {
            let verdict = if l.hits.is_empty() {
                "disjoint".to_string()
            } else {
                format!("meets at {:?}", l.hits)
            };
            let _ = writeln!(text, "  Δ_{} ({} elements): {verdict}", l.level, l.cardinality);
        }
    }
    let _ = writeln!(text, "lower bound: {} (max_m {})", cert.certified_m, cert.max_m);
    match &verified {
        Ok(()) => text.push_str("certificate re-verified\n"),
        Err(e) => {
            let _ = writeln!(text, "certificate FAILED re-verification: {e}");
        }
    }
    let status = if cert.certified_m >= 1 && verified.is_ok() { Status::Ok } else { Status::Mismatch };
    report.results = json!({
        "certificate": cert,
        "verified": verified.is_ok(),
        "verification_error": verified.err().map(|e| e.to_string()),
    });
    Ok(Outcome { report, text, status })
}

pub fn reproduce(fixtures: Option<&Path>, cache: Option<PathBuf>) -> Result<Outcome, CliError> {
    let lib = match fixtures {
        Some(dir) => FixtureLibrary::from_dir(dir).map_err(|e| CliError::Input(e.to_string()))?,
        None => FixtureLibrary::bundled(),
    };
    let cache = cache.map(DeltaCache::new);
    let run = run_reproduction(&lib, cache.as_ref());
    let mut report = RunReport::new("reproduce", json!({ "fixtures": fixtures }));
    report.cache.dir = cache.as_ref().map(|c| c.dir().to_path_buf());
    report.cache.hits = run.cache_hits;

    let mut text = String::new();
    for c in &run.checks {
        if c.passed {
            let _ = writeln!(text, "PASS {}", c.name);
        } else {
            let _ = write!(text, "FAIL {}: expected {}, got {}", c.name, c.expected, c.actual);
            if let Some(detail) = &c.detail {
                let _ = write!(text, " ({detail})");
            }
            text.push('\n');
        }
    }
    for w in &run.warnings {
        let _ = writeln!(text, "warning: {w}");
    }
    let failed = run.checks.iter().filter(|c| !c.passed).count();
    let _ = writeln!(text, "{} checks, {} failed", run.checks.len(), failed);
    let bounds: Vec<_> = run
        .certificates
        .iter()
        .map(|c| json!({ "source": c.diagram.name, "target": c.target.name, "m": c.certified_m }))
        .collect();
    report.results = json!({
        "passed": run.all_passed(),
        "failed": failed,
        "checks": run.checks,
        "bounds": bounds,
        "certificates": run.certificates,
        "warnings": run.warnings,
    });
    let status = if run.all_passed() { Status::Ok } else { Status::Mismatch };
    Ok(Outcome { report, text, status })
}
