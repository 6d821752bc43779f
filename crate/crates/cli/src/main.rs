//! Command-line front end: every library verification as a subcommand with
//! machine-readable output. One record per instance on stdout, diagnostics
//! on stderr, a trailing summary with the violation count and minimum
//! margin. Exit 0 with no violations, 1 with violations, 2 on usage or
//! configuration errors.

use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use midspread::concentration::{
    check_laplace, check_tail, corollary4_check, corollary5_check, random_crossover_measure,
    random_lipschitz, w1h_check, Space,
};
use midspread::crossover::{encode, Crossover, MidpointPair};
use midspread::curvature::edge_curvature_sweep;
use midspread::hypercube::{hamming, random_subset, Vertex, VertexSet};
use midspread::measure::DiscreteMeasure;
use midspread::verify::{
    bm_entropy_check, bm_set_check, density_strata, fiber_analysis, injection_check,
    k_star_antipodal, log_log_slope, proof_chain_check, random_vertex_measure,
};
use midspread::weight::{Exact, Weight};
use midspread::{Error, Graph};

/// Transport arithmetic on C_n is quadratic in #C_n; past this the cost
/// matrix alone is out of reach for a desk run.
const CONC_C_TRANSPORT_CAP: usize = 12;

#[derive(Parser)]
#[command(
    name = "midspread",
    version,
    about = "Midpoint counting, entropy, transport, curvature, and concentration checks on the hypercube"
)]
struct Cli {
    /// Arithmetic for measures and transport: f64 or exact rationals.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Float)]
    mode: Mode,
    /// Record encoding on stdout.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Root of all randomness; the fixed default makes runs reproducible.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Float,
    Exact,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Coarse Ricci curvature along every edge of the N-cube or an ingested
    /// graph, via exact transportation between unit-ball measures.
    Ricci(RicciArgs),
    /// Midpoint-count inequality on vertex sets: targeted pairs or a seeded
    /// sweep.
    BmSet(BmSetArgs),
    /// Entropic midpoint inequality on random measures over the N-cube.
    BmEntropy(BmEntropyArgs),
    /// Injectivity of the pair-to-midpoints encoding on random set pairs.
    Inject(SweepArgs),
    /// Per-fiber cardinality bounds over every image pair of random set
    /// pairs.
    Fiber(SweepArgs),
    /// Every identity and estimate chained by the entropic proof, on random
    /// measure pairs.
    ProofChain(ProofChainArgs),
    /// Concentration suite on the crossover family C_n: isoperimetry,
    /// entropy and transport-entropy bounds, Laplace and tail estimates.
    ConcC(ConcArgs),
    /// Laplace and tail estimates on the symmetric group S_n.
    ConcS(ConcArgs),
    /// Largest admissible curvature constant for antipodal singletons, with
    /// its log-log trend in N.
    Ksweep(KsweepArgs),
}

#[derive(Args)]
struct RicciArgs {
    /// Hypercube dimension (adjacency is materialized; N <= 16).
    #[arg(long, conflicts_with = "graph")]
    n: Option<usize>,
    /// Edge-list file: one "u v" pair per line, '#' comments allowed.
    #[arg(long)]
    graph: Option<String>,
    /// Also report curvature across vertex pairs at distance 2..=D.
    #[arg(long)]
    max_pair_distance: Option<u32>,
}

#[derive(Args)]
struct BmSetArgs {
    /// Hypercube dimension.
    #[arg(long)]
    n: usize,
    /// First set as comma-separated bitstrings of length N; random sweep
    /// when omitted.
    #[arg(long, requires = "b")]
    a: Option<String>,
    /// Second set as comma-separated bitstrings of length N.
    #[arg(long, requires = "a")]
    b: Option<String>,
    /// Instances per density in sweep mode.
    #[arg(long, default_value_t = 100)]
    trials: u64,
    /// Comma-separated sweep densities; defaults to the stratified ladder.
    #[arg(long)]
    densities: Option<String>,
    /// Curvature constant override; defaults to 1/(2N).
    #[arg(long)]
    k: Option<f64>,
}

#[derive(Args)]
struct BmEntropyArgs {
    /// Hypercube dimension (midpoint mixtures are materialized; N <= 16).
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    /// Largest support per random measure.
    #[arg(long, default_value_t = 32)]
    support: usize,
    /// Curvature constant override; defaults to 1/(2N).
    #[arg(long)]
    k: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    /// Hypercube dimension.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    /// Comma-separated sweep densities; defaults to the stratified ladder.
    #[arg(long)]
    densities: Option<String>,
}

#[derive(Args)]
struct ProofChainArgs {
    /// Hypercube dimension.
    #[arg(long, default_value_t = 5)]
    n: usize,
    #[arg(long, default_value_t = 20)]
    trials: u64,
    /// Largest support per random endpoint measure.
    #[arg(long, default_value_t = 6)]
    support: usize,
}

#[derive(Args)]
struct ConcArgs {
    /// Ground-space parameter: C_n arity or S_n degree.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 50)]
    trials: u64,
}

#[derive(Args)]
struct KsweepArgs {
    /// Smallest even dimension.
    #[arg(long, default_value_t = 4)]
    min_n: usize,
    /// Largest even dimension (midpoints of antipodes are materialized;
    /// N <= 24).
    #[arg(long, default_value_t = 16)]
    max_n: usize,
}

// ---------------------------------------------------------------------------
// Output plumbing. Hand-rolled on purpose: a fixed field order and a fixed
// float format keep byte-identical output for a fixed configuration.

enum Val {
    U(u64),
    F(f64),
    S(String),
    B(bool),
}

impl From<u64> for Val {
    fn from(x: u64) -> Val {
        Val::U(x)
    }
}
impl From<usize> for Val {
    fn from(x: usize) -> Val {
        Val::U(x as u64)
    }
}
impl From<u32> for Val {
    fn from(x: u32) -> Val {
        Val::U(x as u64)
    }
}
impl From<f64> for Val {
    fn from(x: f64) -> Val {
        Val::F(x)
    }
}
impl From<String> for Val {
    fn from(x: String) -> Val {
        Val::S(x)
    }
}
impl From<&str> for Val {
    fn from(x: &str) -> Val {
        Val::S(x.to_string())
    }
}
impl From<bool> for Val {
    fn from(x: bool) -> Val {
        Val::B(x)
    }
}

/// Twelve significant digits in scientific notation, stable across runs.
fn fmt_f(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.11e}")
    }
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

struct Sink {
    format: OutputFormat,
    header_done: bool,
}

impl Sink {
    fn new(format: OutputFormat) -> Sink {
        Sink { format, header_done: false }
    }

    fn row(&mut self, fields: &[(&str, Val)]) {
        match self.format {
            OutputFormat::Csv => {
                if !self.header_done {
                    let names: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
                    println!("{}", names.join(","));
                    self.header_done = true;
                }
                let cells: Vec<String> = fields
                    .iter()
                    .map(|(_, v)| match v {
                        Val::U(x) => x.to_string(),
                        Val::F(x) => fmt_f(*x),
                        Val::S(x) => x.clone(),
                        Val::B(x) => x.to_string(),
                    })
                    .collect();
                println!("{}", cells.join(","));
            }
            OutputFormat::Json => {
                let cells: Vec<String> = fields
                    .iter()
                    .map(|(k, v)| {
                        let value = match v {
                            Val::U(x) => x.to_string(),
                            Val::F(x) => {
                                if x.is_finite() {
                                    fmt_f(*x)
                                } else {
                                    format!("\"{}\"", fmt_f(*x))
                                }
                            }
                            Val::S(x) => format!("\"{}\"", json_escape(x)),
                            Val::B(x) => x.to_string(),
                        };
                        format!("\"{}\":{}", json_escape(k), value)
                    })
                    .collect();
                println!("{{{}}}", cells.join(","));
            }
        }
    }

    fn summary(&mut self, violations: u64, min_margin: f64, extra: &[(&str, Val)]) {
        match self.format {
            OutputFormat::Csv => {
                let mut line = format!(
                    "# summary violations={violations} min_margin={}",
                    fmt_f(min_margin)
                );
                for (k, v) in extra {
                    let cell = match v {
                        Val::U(x) => x.to_string(),
                        Val::F(x) => fmt_f(*x),
                        Val::S(x) => x.clone(),
                        Val::B(x) => x.to_string(),
                    };
                    let _ = write!(line, " {k}={cell}");
                }
                println!("{line}");
            }
            OutputFormat::Json => {
                let mut fields: Vec<(&str, Val)> = vec![
                    ("record", Val::S("summary".into())),
                    ("violations", Val::U(violations)),
                    ("min_margin", Val::F(min_margin)),
                ];
                for (k, v) in extra {
                    let copied = match v {
                        Val::U(x) => Val::U(*x),
                        Val::F(x) => Val::F(*x),
                        Val::S(x) => Val::S(x.clone()),
                        Val::B(x) => Val::B(*x),
                    };
                    fields.push((k, copied));
                }
                self.row(&fields);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Shared argument digestion.

fn parse_densities(raw: &Option<String>, n: usize) -> Result<Vec<f64>, Error> {
    match raw {
        None => Ok(density_strata(n).to_vec()),
        Some(s) => s
            .split(',')
            .map(|tok| {
                let d: f64 = tok
                    .trim()
                    .parse()
                    .map_err(|_| Error::Unsupported(format!("bad density {tok:?}")))?;
                if d > 0.0 && d <= 1.0 {
                    Ok(d)
                } else {
                    Err(Error::BadDensity(d))
                }
            })
            .collect(),
    }
}

fn parse_set(raw: &str, n: usize) -> Result<VertexSet, Error> {
    let mut members = Vec::new();
    for tok in raw.split(',') {
        let v = Vertex::from_str(tok.trim())?;
        if v.dim() != n {
            return Err(Error::DimensionMismatch(v.dim(), n));
        }
        members.push(v);
    }
    VertexSet::new(n, members)
}

/// Per-instance seed derived from the root seed; splitmix increment keeps
/// neighboring instances decorrelated.
fn instance_seed(root: u64, index: u64) -> u64 {
    root.wrapping_add(index.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

struct Tally {
    violations: u64,
    min_margin: f64,
}

impl Tally {
    fn new() -> Tally {
        Tally { violations: 0, min_margin: f64::INFINITY }
    }

    fn record(&mut self, margin: f64, ok: bool) {
        self.min_margin = self.min_margin.min(margin);
        if !ok {
            self.violations += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Subcommands.

fn run_ricci<W: Weight>(args: &RicciArgs, sink: &mut Sink) -> Result<u64, Error> {
    let graph = match (&args.n, &args.graph) {
        (Some(n), None) => Graph::hypercube(*n)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Unsupported(format!("cannot read {path}: {e}")))?;
            Graph::parse_edge_list(&text)?
        }
        _ => {
            return Err(Error::Unsupported(
                "exactly one of --n or --graph is required".into(),
            ))
        }
    };
    let report = edge_curvature_sweep::<W>(&graph, args.max_pair_distance)?;
    let mut tally = Tally::new();
    for (kind, rows) in [("edge", &report.edges), ("pair", &report.pairs)] {
        for pc in rows {
            tally.record(pc.kappa.to_f64(), true);
            sink.row(&[
                ("record", kind.into()),
                ("x", pc.x.into()),
                ("y", pc.y.into()),
                ("distance", pc.distance.into()),
                ("w1", pc.w1.to_f64().into()),
                ("kappa", pc.kappa.to_f64().into()),
                ("w1_repr", format!("{}", pc.w1).into()),
                ("kappa_repr", format!("{}", pc.kappa).into()),
            ]);
        }
    }
    if !report.locality_ok {
        tally.violations += 1;
    }
    sink.summary(
        tally.violations,
        tally.min_margin,
        &[("locality_ok", report.locality_ok.into())],
    );
    Ok(tally.violations)
}

fn bm_set_row(
    sink: &mut Sink,
    tally: &mut Tally,
    instance: u64,
    density: &str,
    rep: &midspread::verify::BmSetReport,
) {
    tally.record(rep.margin, rep.holds);
    sink.row(&[
        ("instance", instance.into()),
        ("density", density.into()),
        ("dim", rep.dim.into()),
        ("card_a", rep.card_a.into()),
        ("card_b", rep.card_b.into()),
        ("card_m", rep.card_m.into()),
        ("distance", rep.set_distance.into()),
        ("k_used", rep.k_used.into()),
        ("lhs", rep.lhs.into()),
        ("rhs", rep.rhs.into()),
        ("margin", rep.margin.into()),
        ("holds", rep.holds.into()),
    ]);
}

fn require_cube_dim(n: usize) -> Result<(), Error> {
    if n < 1 || n > midspread::hypercube::MAX_DIM {
        return Err(Error::DimensionOutOfRange(n, midspread::hypercube::MAX_DIM));
    }
    Ok(())
}

fn run_bm_set(args: &BmSetArgs, seed: u64, sink: &mut Sink) -> Result<u64, Error> {
    require_cube_dim(args.n)?;
    let mut tally = Tally::new();
    match (&args.a, &args.b) {
        (Some(a), Some(b)) => {
            let a = parse_set(a, args.n)?;
            let b = parse_set(b, args.n)?;
            let rep = bm_set_check(&a, &b, args.k)?;
            bm_set_row(sink, &mut tally, 0, "explicit", &rep);
        }
        _ => {
            if args.trials < 1 {
                return Err(Error::Unsupported("trials must be at least 1".into()));
            }
            let densities = parse_densities(&args.densities, args.n)?;
            let mut instance = 0u64;
            for density in &densities {
                for _ in 0..args.trials {
                    let s = instance_seed(seed, instance);
                    let a = random_subset(args.n, *density, s)?;
                    let b = random_subset(args.n, *density, s ^ 0x5a5a_5a5a)?;
                    let rep = bm_set_check(&a, &b, args.k)?;
                    bm_set_row(sink, &mut tally, instance, &fmt_f(*density), &rep);
                    instance += 1;
                }
            }
        }
    }
    sink.summary(tally.violations, tally.min_margin, &[]);
    Ok(tally.violations)
}

fn run_bm_entropy<W: Weight>(
    args: &BmEntropyArgs,
    seed: u64,
    sink: &mut Sink,
) -> Result<u64, Error> {
    if args.trials < 1 {
        return Err(Error::Unsupported("trials must be at least 1".into()));
    }
    let mut tally = Tally::new();
    for instance in 0..args.trials {
        let s = instance_seed(seed, instance);
        let mu0: DiscreteMeasure<Vertex, W> =
            random_vertex_measure(args.n, args.support, s)?;
        let mu1: DiscreteMeasure<Vertex, W> =
            random_vertex_measure(args.n, args.support, s ^ 0x1111_1111)?;
        let rep = bm_entropy_check(&mu0, &mu1, args.k)?;
        tally.record(rep.margin_entropy, rep.holds && rep.forms_agree);
        sink.row(&[
            ("instance", instance.into()),
            ("dim", rep.dim.into()),
            ("support_0", mu0.len().into()),
            ("support_1", mu1.len().into()),
            ("entropy_mid", rep.entropy_mid.into()),
            ("entropy_0", rep.entropy_0.into()),
            ("entropy_1", rep.entropy_1.into()),
            ("w1", rep.w1.into()),
            ("k_used", rep.k_used.into()),
            ("margin_entropy", rep.margin_entropy.into()),
            ("margin_relative", rep.margin_relative.into()),
            ("transport_quantization", rep.transport_quantization.into()),
            ("forms_agree", rep.forms_agree.into()),
            ("holds", rep.holds.into()),
        ]);
    }
    sink.summary(tally.violations, tally.min_margin, &[]);
    Ok(tally.violations)
}

fn run_inject(args: &SweepArgs, seed: u64, sink: &mut Sink) -> Result<u64, Error> {
    require_cube_dim(args.n)?;
    if args.trials < 1 {
        return Err(Error::Unsupported("trials must be at least 1".into()));
    }
    let densities = parse_densities(&args.densities, args.n)?;
    let mut tally = Tally::new();
    let mut instance = 0u64;
    for density in &densities {
        for _ in 0..args.trials {
            let s = instance_seed(seed, instance);
            let a = random_subset(args.n, *density, s)?;
            let b = random_subset(args.n, *density, s ^ 0x5a5a_5a5a)?;
            let rep = injection_check(&a, &b)?;
            let ok = rep.injective && rep.images_in_m && rep.square_dominates;
            tally.record(if ok { 0.0 } else { -1.0 }, ok);
            sink.row(&[
                ("instance", instance.into()),
                ("density", fmt_f(*density).into()),
                ("dim", rep.dim.into()),
                ("card_a", rep.card_a.into()),
                ("card_b", rep.card_b.into()),
                ("card_m", rep.card_m.into()),
                ("pairs", rep.pairs.into()),
                ("collisions", rep.collisions.into()),
                ("injective", rep.injective.into()),
                ("images_in_m", rep.images_in_m.into()),
                ("square_dominates", rep.square_dominates.into()),
            ]);
            instance += 1;
        }
    }
    sink.summary(tally.violations, tally.min_margin, &[]);
    Ok(tally.violations)
}

fn run_fiber(args: &SweepArgs, seed: u64, sink: &mut Sink) -> Result<u64, Error> {
    require_cube_dim(args.n)?;
    if args.trials < 1 {
        return Err(Error::Unsupported("trials must be at least 1".into()));
    }
    let densities = parse_densities(&args.densities, args.n)?;
    let mut tally = Tally::new();
    let mut instance = 0u64;
    for density in &densities {
        for _ in 0..args.trials {
            let s = instance_seed(seed, instance);
            let a = random_subset(args.n, *density, s)?;
            let b = random_subset(args.n, *density, s ^ 0x5a5a_5a5a)?;
            let mut pairs: std::collections::BTreeSet<MidpointPair> =
                std::collections::BTreeSet::new();
            for x in a.iter() {
                for y in b.iter() {
                    let d = hamming(x, y)? as usize;
                    pairs.insert(encode(Crossover::canonical(d)?, x, y)?);
                }
            }
            for pair in &pairs {
                let rep = fiber_analysis(&a, &b, pair)?;
                let ok = rep.separation_ok && rep.within_bound;
                let margin = rep.bound.ln() - (rep.card_fiber.max(1) as f64).ln();
                tally.record(margin, ok);
                sink.row(&[
                    ("instance", instance.into()),
                    ("density", fmt_f(*density).into()),
                    ("m", pair.m().to_string().into()),
                    ("m_prime", pair.m_prime().to_string().into()),
                    ("arity", rep.arity.into()),
                    ("card_fiber", rep.card_fiber.into()),
                    ("card_family", rep.card_family.into()),
                    ("set_distance", rep.set_distance.into()),
                    (
                        "separation",
                        match rep.separation {
                            Some(k) => Val::U(k as u64),
                            None => Val::S(String::new()),
                        },
                    ),
                    ("bound", rep.bound.into()),
                    ("within_bound", rep.within_bound.into()),
                    ("separation_ok", rep.separation_ok.into()),
                    ("vacuous", rep.vacuous.into()),
                ]);
            }
            instance += 1;
        }
    }
    sink.summary(tally.violations, tally.min_margin, &[]);
    Ok(tally.violations)
}

fn run_proof_chain<W: Weight>(
    args: &ProofChainArgs,
    seed: u64,
    sink: &mut Sink,
) -> Result<u64, Error> {
    if args.trials < 1 {
        return Err(Error::Unsupported("trials must be at least 1".into()));
    }
    let mut tally = Tally::new();
    for instance in 0..args.trials {
        let s = instance_seed(seed, instance);
        let mu0: DiscreteMeasure<Vertex, W> =
            random_vertex_measure(args.n, args.support, s)?;
        let mu1: DiscreteMeasure<Vertex, W> =
            random_vertex_measure(args.n, args.support, s ^ 0x1111_1111)?;
        let rep = proof_chain_check(&mu0, &mu1)?;
        let links_ok = rep.links.iter().filter(|l| l.ok).count();
        let first_bad = rep
            .links
            .iter()
            .find(|l| !l.ok)
            .map(|l| l.name.to_string())
            .unwrap_or_default();
        tally.record(rep.final_margin, rep.ok);
        sink.row(&[
            ("instance", instance.into()),
            ("dim", rep.dim.into()),
            ("links", rep.links.len().into()),
            ("links_ok", links_ok.into()),
            ("first_bad_link", first_bad.into()),
            ("final_margin", rep.final_margin.into()),
            ("ok", rep.ok.into()),
        ]);
    }
    sink.summary(tally.violations, tally.min_margin, &[]);
    Ok(tally.violations)
}

fn run_conc_c<W: Weight>(args: &ConcArgs, seed: u64, sink: &mut Sink) -> Result<u64, Error> {
    if args.trials < 1 {
        return Err(Error::Unsupported("trials must be at least 1".into()));
    }
    if args.n > CONC_C_TRANSPORT_CAP {
        return Err(Error::TooLarge(format!(
            "conc-c runs transport over all of C_n; n must stay within {CONC_C_TRANSPORT_CAP}"
        )));
    }
    let space = Space::crossover_family(args.n)?;
    let lambdas = [2.0, -2.0, 1.0, -1.0, 0.5, -0.5];
    let ts = [1.0, 2.0, 3.0];
    let mut tally = Tally::new();
    for instance in 0..args.trials {
        let s = instance_seed(seed, instance);
        let xi: DiscreteMeasure<Crossover, W> = random_crossover_measure(args.n, s)?;
        let wh = w1h_check(args.n, &xi)?;
        let c5 = corollary5_check(args.n, &xi)?;

        // Random nonempty subset of the family for the isoperimetric bound.
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(s ^ 0xc0c0_c0c0);
        let mut subset: Vec<Crossover> = Vec::new();
        while subset.is_empty() {
            for i in 0..space.len() {
                if rng.random::<f64>() < 0.5 {
                    subset.push(space.crossover_at(i)?);
                }
            }
        }
        let c4 = corollary4_check(args.n, &subset)?;

        let f = random_lipschitz(&space, s ^ 0xfafa_fafa)?;
        let lap = check_laplace(&space, &f, &lambdas)?;
        let tail = check_tail(&space, &f, &ts)?;

        let ok = wh.holds
            && c5.holds
            && c5.symmetry_ok
            && c4.holds
            && c4.separator_lipschitz
            && c4.separator_mean_zero
            && c4.separator_cap_ok
            && lap.violations == 0
            && tail.violations == 0;
        let margin = wh.margin.min(c5.margin).min(-lap.max_margin);
        tally.record(margin, ok);
        sink.row(&[
            ("instance", instance.into()),
            ("n", args.n.into()),
            ("w1h_w1", wh.w1.into()),
            ("w1h_entropy", wh.relative_entropy.into()),
            ("w1h_margin", wh.margin.into()),
            ("w1h_holds", wh.holds.into()),
            ("entropy", c5.entropy.into()),
            ("w1_to_complement", c5.w1_to_complement.into()),
            ("entropy_bound", c5.bound.into()),
            ("entropy_margin", c5.margin.into()),
            ("entropy_holds", c5.holds.into()),
            ("complement_symmetry", c5.symmetry_ok.into()),
            ("iso_card", c4.card_a.into()),
            ("iso_separation", c4.separation.into()),
            ("iso_bound", c4.bound.into()),
            ("iso_holds", c4.holds.into()),
            ("separator_ok", (c4.separator_lipschitz
                && c4.separator_mean_zero
                && c4.separator_cap_ok)
                .into()),
            ("laplace_max_margin", lap.max_margin.into()),
            ("laplace_violations", (lap.violations as u64).into()),
            ("tail_violations", (tail.violations as u64).into()),
            ("ok", ok.into()),
        ]);
    }
    sink.summary(tally.violations, tally.min_margin, &[]);
    Ok(tally.violations)
}

fn run_conc_s(args: &ConcArgs, seed: u64, sink: &mut Sink) -> Result<u64, Error> {
    if args.trials < 1 {
        return Err(Error::Unsupported("trials must be at least 1".into()));
    }
    let space = Space::symmetric_group(args.n)?;
    let lambdas = [2.0, -2.0, 1.0, -1.0, 0.5, -0.5];
    let ts = [1.0, 2.0, 3.0];
    let mut tally = Tally::new();
    for instance in 0..args.trials {
        let s = instance_seed(seed, instance);
        let f = random_lipschitz(&space, s)?;
        let lap = check_laplace(&space, &f, &lambdas)?;
        let tail = check_tail(&space, &f, &ts)?;
        let ok = lap.violations == 0 && tail.violations == 0;
        tally.record(-lap.max_margin, ok);
        sink.row(&[
            ("instance", instance.into()),
            ("n", args.n.into()),
            ("space_size", space.len().into()),
            ("variance_constant", space.variance_constant().into()),
            ("mean", lap.mean.into()),
            ("laplace_max_margin", lap.max_margin.into()),
            ("laplace_violations", (lap.violations as u64).into()),
            ("tail_violations", (tail.violations as u64).into()),
            ("ok", ok.into()),
        ]);
    }
    sink.summary(tally.violations, tally.min_margin, &[]);
    Ok(tally.violations)
}

fn run_ksweep(args: &KsweepArgs, sink: &mut Sink) -> Result<u64, Error> {
    if args.min_n < 2 || args.min_n > args.max_n {
        return Err(Error::Unsupported(
            "ksweep needs 2 <= min-n <= max-n".into(),
        ));
    }
    let mut points = Vec::new();
    for n in (args.min_n..=args.max_n).filter(|n| n % 2 == 0) {
        let k = k_star_antipodal(n)?;
        points.push((n as f64, k));
        sink.row(&[("n", n.into()), ("k_star", k.into())]);
    }
    let slope = log_log_slope(&points)?;
    sink.summary(0, f64::INFINITY, &[("log_log_slope", slope.into())]);
    Ok(0)
}

fn dispatch(cli: &Cli, sink: &mut Sink) -> Result<u64, Error> {
    let exact = cli.mode == Mode::Exact;
    match &cli.cmd {
        Cmd::Ricci(a) => {
            if exact {
                run_ricci::<Exact>(a, sink)
            } else {
                run_ricci::<f64>(a, sink)
            }
        }
        Cmd::BmSet(a) => run_bm_set(a, cli.seed, sink),
        Cmd::BmEntropy(a) => {
            if exact {
                run_bm_entropy::<Exact>(a, cli.seed, sink)
            } else {
                run_bm_entropy::<f64>(a, cli.seed, sink)
            }
        }
        Cmd::Inject(a) => run_inject(a, cli.seed, sink),
        Cmd::Fiber(a) => run_fiber(a, cli.seed, sink),
        Cmd::ProofChain(a) => {
            if exact {
                run_proof_chain::<Exact>(a, cli.seed, sink)
            } else {
                run_proof_chain::<f64>(a, cli.seed, sink)
            }
        }
        Cmd::ConcC(a) => {
            if exact {
                run_conc_c::<Exact>(a, cli.seed, sink)
            } else {
                run_conc_c::<f64>(a, cli.seed, sink)
            }
        }
        Cmd::ConcS(a) => run_conc_s(a, cli.seed, sink),
        Cmd::Ksweep(a) => run_ksweep(a, sink),
    }
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe like any line-oriented unix tool instead
    // of panicking mid-write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let mut sink = Sink::new(cli.format);
    let code = match dispatch(&cli, &mut sink) {
        Ok(0) => 0u8,
        Ok(_) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    let _ = std::io::stdout().flush();
    ExitCode::from(code)
}
