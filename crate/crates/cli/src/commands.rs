use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use serde::Serialize;
use slicing_core::embed::{
    donaldson_slicing_obstruction, embed_in_zn, orth_complement, plumbing_gram, DonaldsonReport, PlumbingSpec,
};
use slicing_core::forms::{admissible_determinants, enumerate_forms, FormConstraints};
use slicing_core::knots::{self, builtin_knot, ingest_table, KnotRecord, SliceQuery, TwoBridgeKnot};
use slicing_core::lattice::{canonical_form, GramMatrix};
use slicing_core::lens::{d_invariants, d_invariants_by_plumbing, DTable, LensSpace, Orientation};
use slicing_core::obstruct::{slicing_obstruction_with, CheckOptions, Conclusion, ObstructionReport};

use crate::cache::Cache;
use crate::GlobalOpts;

const OBSTRUCTED: u8 = 0;
const NOT_OBSTRUCTED: u8 = 1;

fn parse_fraction(s: &str) -> Result<(u64, u64)> {
    let (p, q) = s.split_once('/').ok_or_else(|| anyhow!("expected P/Q, got {s:?}"))?;
    Ok((p.trim().parse().context("numerator")?, q.trim().parse().context("denominator")?))
}

fn cache_for(g: &GlobalOpts) -> Result<Cache> {
    match &g.cache_dir {
        Some(d) => Cache::at(d.clone()),
        None => Ok(Cache::disabled()),
    }
}

fn check_options(g: &GlobalOpts) -> CheckOptions {
    CheckOptions {
        require_conjugation_symmetry: g.require_conjugation_symmetry,
        allow_square_quotient: g.experimental_square_quotient,
    }
}

/// Writes the JSON report to `--output`, then prints either the JSON or the summary.
fn emit<T: Serialize>(g: &GlobalOpts, report: &T, summary: impl FnOnce() -> String) -> Result<()> {
    let json = serde_json::to_string_pretty(report)?;
    if let Some(path) = &g.output {
        std::fs::write(path, format!("{json}\n")).with_context(|| format!("writing {}", path.display()))?;
    }
    if g.json {
        println!("{json}");
    } else {
        print!("{}", summary());
    }
    Ok(())
}

fn cached_forms(cache: &Cache, c: &FormConstraints) -> Result<Vec<GramMatrix>> {
    cache.get_or_compute("forms", c, || Ok(enumerate_forms(c)?))
}

fn cached_dtable(cache: &Cache, y: &LensSpace) -> Result<DTable> {
    cache.get_or_compute("dtable", y, || Ok(d_invariants(y)))
}

/// What `slice-check` runs on, after flag resolution.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub knot: KnotRecord,
    pub p: u32,
    pub n: u32,
    pub options: CheckOptions,
    pub forms_only: bool,
    pub cache: Cache,
}

#[derive(Args, Debug)]
pub struct SliceCheckArgs {
    /// Knot name, built in or from --table.
    #[arg(conflicts_with_all = ["knot", "two_bridge"])]
    name: Option<String>,
    /// Knot name, built in or from --table.
    #[arg(long, conflicts_with = "two_bridge")]
    knot: Option<String>,
    /// Two-bridge knot S(p, q) given as P/Q.
    #[arg(long, value_name = "P/Q")]
    two_bridge: Option<String>,
    /// CSV knot table to look names up in.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Positive crossing changes.
    #[arg(long, default_value_t = 0)]
    p: u32,
    /// Negative crossing changes (defaults to σ/2).
    #[arg(long)]
    n: Option<u32>,
    /// Only list the candidate forms; no d-invariant check.
    #[arg(long)]
    forms_only: bool,
}

fn resolve_knot(a: &SliceCheckArgs) -> Result<KnotRecord> {
    if let Some(s) = &a.two_bridge {
        let (p, q) = parse_fraction(s)?;
        let k = TwoBridgeKnot::new(p, q)?;
        return Ok(KnotRecord {
            name: k.to_string(),
            determinant: p,
            signature: knots::signature(&k),
            two_bridge: Some(k),
            slice_genus: None,
        });
    }
    let name = a.name.as_ref().or(a.knot.as_ref()).ok_or_else(|| anyhow!("no knot given"))?;
    if let Some(path) = &a.table {
        let rows = ingest_table(path)?;
        if let Some(r) = rows.into_iter().find(|r| &r.name == name) {
            return Ok(r);
        }
    }
    builtin_knot(name).ok_or_else(|| anyhow!("unknown knot {name:?}"))
}

fn canonical_signature(k: &KnotRecord) -> i64 {
    match &k.two_bridge {
        Some(tb) => knots::signature(&knots::canonical(tb).0),
        None => k.signature.abs(),
    }
}

#[derive(Serialize)]
struct FormsOnlyReport {
    knot: String,
    determinant: u64,
    signature: i64,
    p: u32,
    n: u32,
    forms: Vec<(u64, Vec<GramMatrix>)>,
}

pub fn slice_check(g: &GlobalOpts, a: &SliceCheckArgs) -> Result<u8> {
    let knot = resolve_knot(a)?;
    let sigma = canonical_signature(&knot);
    let n = match a.n {
        Some(n) => {
            if (n as i64) < sigma / 2 {
                eprintln!("warning: n = {n} is below σ/2 = {}; the signature bound applies", sigma / 2);
            }
            n
        }
        None => (sigma / 2) as u32,
    };
    let cfg = RunConfig {
        knot,
        p: a.p,
        n,
        options: check_options(g),
        forms_only: a.forms_only,
        cache: cache_for(g)?,
    };
    if cfg.forms_only {
        return forms_only(g, &cfg, sigma);
    }
    if cfg.knot.two_bridge.is_none() {
        bail!("{} has no two-bridge presentation; only --forms-only is available", cfg.knot.name);
    }
    let report = run_slice_check(&cfg)?;
    emit(g, &report, || slice_summary(&report))?;
    Ok(if report.conclusion == Conclusion::Obstructed { OBSTRUCTED } else { NOT_OBSTRUCTED })
}

pub fn run_slice_check(cfg: &RunConfig) -> Result<ObstructionReport> {
    let query = SliceQuery { knot: cfg.knot.clone(), p: cfg.p, n: cfg.n };
    let io = |e: anyhow::Error| slicing_core::Error::Io(format!("{e:#}"));
    Ok(slicing_obstruction_with(
        &query,
        &cfg.options,
        |c| cached_forms(&cfg.cache, c).map_err(io),
        |y| cached_dtable(&cfg.cache, y).map_err(io),
    )?)
}

fn forms_only(g: &GlobalOpts, cfg: &RunConfig, sigma: i64) -> Result<u8> {
    let r = (cfg.p + cfg.n) as usize;
    let det = cfg.knot.determinant;
    let mut forms = Vec::new();
    for d in admissible_determinants(det) {
        if d != det && !cfg.options.allow_square_quotient {
            continue;
        }
        let c = FormConstraints::new(r, d, cfg.n as usize)?;
        forms.push((d, cached_forms(&cfg.cache, &c)?));
    }
    let report = FormsOnlyReport { knot: cfg.knot.name.clone(), determinant: det, signature: sigma, p: cfg.p, n: cfg.n, forms };
    emit(g, &report, || {
        let mut s = format!("{}  det {}  σ = {}  p = {}  n = {}\n", report.knot, det, sigma, cfg.p, cfg.n);
        for (d, fs) in &report.forms {
            let _ = writeln!(s, "det {d}: {} form(s)", fs.len());
            for f in fs {
                let _ = writeln!(s, "  {f}");
            }
        }
        s
    })?;
    Ok(0)
}

fn slice_summary(r: &ObstructionReport) -> String {
    let mut s = String::new();
    let mirror = if r.mirrored { " (mirrored)" } else { "" };
    let _ = writeln!(s, "{}  {}{}  σ = {}  p = {}  n = {}", r.knot, r.two_bridge, mirror, r.signature, r.p, r.n);
    if !r.determinants_tried.is_empty() {
        let _ = writeln!(s, "determinants examined: {:?}", r.determinants_tried);
    }
    for f in &r.forms {
        let _ = writeln!(s, "form {}  det {}", f.gram, f.determinant);
        for v in &f.verdicts {
            let line = if !v.cyclic {
                "obstructed (discriminant group is not cyclic)".to_string()
            } else if v.obstructed {
                format!("obstructed (all {} matchings fail)", v.matchings_tried)
            } else {
                let w = v.witness.expect("unobstructed verdicts carry a witness");
                format!("not obstructed (matching offset {}, step {})", w.offset, w.step)
            };
            let _ = writeln!(s, "  {}: {line}", v.space);
        }
    }
    for note in &r.notes {
        let _ = writeln!(s, "note: {note}");
    }
    let verdict = match r.conclusion {
        Conclusion::Obstructed => "obstructed",
        Conclusion::NotObstructed => "not obstructed",
    };
    let _ = writeln!(s, "conclusion: {verdict}");
    s
}

#[derive(Args, Debug)]
pub struct EnumFormsArgs {
    /// Rank of the form (2r).
    #[arg(long)]
    rank: usize,
    #[arg(long)]
    det: u64,
    /// Number of even yᵢ².
    #[arg(long)]
    n_even: usize,
}

pub fn enum_forms(g: &GlobalOpts, a: &EnumFormsArgs) -> Result<u8> {
    if a.rank == 0 || a.rank % 2 == 1 {
        bail!("half-integer forms have even positive rank, got {}", a.rank);
    }
    let c = FormConstraints::new(a.rank / 2, a.det, a.n_even)?;
    let forms = cached_forms(&cache_for(g)?, &c)?;
    emit(g, &forms, || {
        let mut s = String::new();
        for f in &forms {
            let _ = writeln!(s, "{f}");
        }
        let _ = writeln!(s, "{} form(s)", forms.len());
        s
    })?;
    Ok(0)
}

#[derive(Args, Debug)]
pub struct DinvArgs {
    /// Lens space L(p, q) given as P/Q.
    #[arg(long, value_name = "P/Q")]
    lens: String,
    /// Use −L(p, q).
    #[arg(long)]
    reversed: bool,
    /// Cross-check against the plumbing computation.
    #[arg(long)]
    verify: bool,
}

pub fn dinv(g: &GlobalOpts, a: &DinvArgs) -> Result<u8> {
    let (p, q) = parse_fraction(&a.lens)?;
    let o = if a.reversed { Orientation::Reversed } else { Orientation::Positive };
    let y = LensSpace::new(p, q, o)?;
    let t = cached_dtable(&cache_for(g)?, &y)?;
    if a.verify && d_invariants_by_plumbing(&y)? != t {
        bail!("d-invariants of {y} disagree with the plumbing computation");
    }
    emit(g, &t, || {
        let mut s = format!("{y}\n");
        for (i, v) in t.values.iter().enumerate() {
            let _ = writeln!(s, "{i:>4}  {v}");
        }
        s
    })?;
    Ok(0)
}

#[derive(Args, Debug)]
pub struct EmbedArgs {
    /// Plumbing weights, comma separated.
    #[arg(long, value_delimiter = ',', required_unless_present_any = ["l_n", "l_n_dual"])]
    weights: Vec<u64>,
    /// Use the chain of 2n fours.
    #[arg(long, conflicts_with_all = ["weights", "l_n_dual"])]
    l_n: Option<usize>,
    /// Use the complementary chain of the 2n fours.
    #[arg(long, conflicts_with = "weights")]
    l_n_dual: Option<usize>,
    /// Target dimension m.
    #[arg(long)]
    dim: usize,
}

#[derive(Serialize)]
struct EmbedClass {
    images: Vec<Vec<i64>>,
    coordinates_used: usize,
    full: bool,
    complement: Option<GramMatrix>,
}

#[derive(Serialize)]
struct EmbedReport {
    weights: Vec<u64>,
    dim: usize,
    classes: Vec<EmbedClass>,
}

pub fn embed(g: &GlobalOpts, a: &EmbedArgs) -> Result<u8> {
    let spec = match (a.l_n, a.l_n_dual) {
        (Some(n), _) if n > 0 => PlumbingSpec::l_n(n),
        (_, Some(n)) if n > 0 => PlumbingSpec::l_n_dual(n),
        (None, None) => PlumbingSpec::new(a.weights.clone())?,
        _ => bail!("n must be positive"),
    };
    let q = plumbing_gram(&spec);
    let mut classes = Vec::new();
    for e in embed_in_zn(&q, a.dim)? {
        let complement = if a.dim > q.rank() { Some(canonical_form(&orth_complement(&e)?)?) } else { None };
        classes.push(EmbedClass { coordinates_used: e.coordinates_used(), full: e.is_full(), images: e.images, complement });
    }
    let report = EmbedReport { weights: spec.weights.clone(), dim: a.dim, classes };
    emit(g, &report, || {
        let mut s = format!("P{:?} into Z^{}: {} class(es)\n", report.weights, report.dim, report.classes.len());
        for (i, c) in report.classes.iter().enumerate() {
            let comp = c.complement.as_ref().map_or("-".to_string(), |m| m.to_string());
            let full = if c.full { "full" } else { "not full" };
            let _ = writeln!(s, "#{i} {:?}  {} coordinates ({full})  complement {comp}", c.images, c.coordinates_used);
        }
        s
    })?;
    Ok(0)
}

#[derive(Args, Debug)]
pub struct KnArgs {
    #[arg(long)]
    n: u32,
    /// Run the diagonalization argument for slicing with p + n ≤ r.
    #[arg(long)]
    check_donaldson: bool,
    #[arg(long, default_value_t = 3)]
    r: usize,
    /// Largest number of spare unit summands to certify.
    #[arg(long, default_value_t = 6)]
    k: usize,
}

#[derive(Serialize)]
struct KnReport {
    n: u32,
    knot: TwoBridgeKnot,
    signature: i64,
    continued_fraction: Vec<u64>,
    donaldson: Option<DonaldsonReport>,
}

pub fn kn(g: &GlobalOpts, a: &KnArgs) -> Result<u8> {
    let k = knots::kn_family(a.n)?;
    let donaldson = if a.check_donaldson {
        let cache = cache_for(g)?;
        let input = (a.n, a.r, a.k);
        Some(cache.get_or_compute("donaldson", &input, || {
            Ok(donaldson_slicing_obstruction(a.n as usize, a.r, a.k)?)
        })?)
    } else {
        None
    };
    let report =
        KnReport { n: a.n, knot: k, signature: knots::signature(&k), continued_fraction: k.continued_fraction(), donaldson };
    emit(g, &report, || kn_summary(&report))?;
    Ok(match &report.donaldson {
        Some(d) if !d.obstructed => NOT_OBSTRUCTED,
        _ => OBSTRUCTED,
    })
}

fn kn_summary(r: &KnReport) -> String {
    let mut s = format!("K_{} = {}  σ = {}  {:?}\n", r.n, r.knot, r.signature, r.continued_fraction);
    let Some(d) = &r.donaldson else { return s };
    let _ = writeln!(s, "dual chain: {} embedding class(es)", d.dual_embeddings.len());
    for (i, e) in d.dual_embeddings.iter().enumerate() {
        let tag = if e.complement_is_ln { "  (≅ L_n)" } else { "" };
        let _ = writeln!(s, "  #{i} Z^{}  complement {}{tag}", e.coordinates, e.complement);
    }
    for c in &d.cases {
        let bound = c.max_half_integer_rank.map_or("uncertified".to_string(), |b| format!("max half-integer rank {b}"));
        let verdict = if c.obstructed { "ruled out" } else { "open" };
        let _ = writeln!(s, "  p + n = {}, embedding #{}, k = {}: {bound}, {verdict}", c.r, c.embedding, c.k);
    }
    for note in &d.notes {
        let _ = writeln!(s, "note: {note}");
    }
    let verdict = if d.obstructed { "obstructed" } else { "not obstructed" };
    let _ = writeln!(s, "conclusion: {verdict} for p + n ≤ {} (k ≤ {})", d.r, d.k_budget);
    s
}

#[derive(Args, Debug)]
pub struct IngestArgs {
    /// CSV with columns name, determinant, signature, two_bridge_p, two_bridge_q, slice_genus.
    path: PathBuf,
}

pub fn ingest(g: &GlobalOpts, a: &IngestArgs) -> Result<u8> {
    let rows = ingest_table(&a.path)?;
    emit(g, &rows, || {
        let mut s = String::new();
        for r in &rows {
            let tb = r.two_bridge.map_or("-".to_string(), |k| k.to_string());
            let gs = r.slice_genus.map_or("-".to_string(), |x| x.to_string());
            let _ = writeln!(s, "{:<12} det {:>5}  σ {:>3}  {:<10} g_s {gs}", r.name, r.determinant, r.signature, tb);
        }
        let _ = writeln!(s, "{} knot(s) validated", rows.len());
        s
    })?;
    Ok(0)
}
