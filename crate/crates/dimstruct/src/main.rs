//! Command-line front end: reads the JSON structure/map files, runs the
//! library checks, and reports results. Exit codes: 0 all checks pass,
//! 1 a mathematical violation was found (witness on stdout), 2 usage or
//! input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num::BigRational;

use dimstruct::constructions::{
    direct_product, i_direct_product, l_direct_product, measure_sum, normalization, quotient,
    sum, sup_combine, Combiner, Partition,
};
use dimstruct::error::{Error, Result};
use dimstruct::extension::{check_pre_axioms, embed_into, extend, PreDimensionStructure};
use dimstruct::extval::ExtVal;
use dimstruct::fileio::{emit_structure, parse_map_text, parse_structure_text, FileKind, StructureFile};
use dimstruct::gallery;
use dimstruct::morphisms::{dim_transport_check, sign_collapse, verify_map, MapKind};
use dimstruct::poset::FinitePoset;
use dimstruct::props::proposition_suite;
use dimstruct::random::{generate_valid, shrink_failing, GenMode};
use dimstruct::structure::{check_axioms, DimensionStructure};

#[derive(Parser)]
#[command(name = "dimstruct", version, about = "verify dimension structures over finite posets")]
struct Cli {
    /// Suppress witness output
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the axiom checks on a structure or pre-structure file
    Check { file: PathBuf },
    /// Print the classification flags of a valid structure
    Classify { file: PathBuf },
    /// Print the dimension of one point
    Dim {
        file: PathBuf,
        #[arg(long)]
        point: String,
    },
    /// Print one measurement value
    Mu {
        file: PathBuf,
        #[arg(long)]
        point: String,
        #[arg(long)]
        at: String,
    },
    /// Compare two points in the dimension preorder
    Order {
        file: PathBuf,
        /// Two point names, comma separated
        #[arg(long)]
        points: String,
    },
    /// Check synchronization against the file's point_order
    Sync {
        file: PathBuf,
        /// Cap on the subset size for the supremum condition
        #[arg(long)]
        alpha: Option<usize>,
    },
    /// Build a structure from one or more inputs and write it out
    Combine {
        /// One of: product, min-product, i-product, l-product, sum,
        /// measure-sum, sup, normalize, quotient, sign
        #[arg(long)]
        op: String,
        files: Vec<PathBuf>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Complete a pre-structure by adjoining missing infima
    Extend {
        file: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Where to write the JSON report (stdout if omitted)
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Verify that the completion of PRE equals EXT and embeds into TARGET
    Embed {
        pre: PathBuf,
        ext: PathBuf,
        target: PathBuf,
    },
    /// Verify a map file between two structures
    MapVerify {
        /// morphism, iso, or semi-iso
        #[arg(long)]
        kind: String,
        a: PathBuf,
        b: PathBuf,
        map: PathBuf,
    },
    /// Fuzz generated structures through the full proposition suite
    Suite {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: u64,
        /// Shrink any failing candidate before reporting it
        #[arg(long)]
        shrink: bool,
    },
    /// Evaluate an analytic example family
    Gallery {
        #[command(subcommand)]
        family: Family,
    },
}

#[derive(Subcommand)]
enum Family {
    /// Iterated-accumulation signatures
    Ranked {
        /// Signature as rank:count pairs, e.g. "0:2,1:3"
        #[arg(long)]
        counts: String,
        #[arg(long)]
        probe: Option<u32>,
    },
    /// Growth-rate terms c * f_m(n) * n^pow * (log n)^logexp
    Growth {
        #[arg(long, default_value_t = 0)]
        tower: u32,
        #[arg(long)]
        pow: String,
        #[arg(long, default_value_t = 0)]
        logexp: i32,
        #[arg(long, default_value = "1")]
        coeff: String,
        /// Probe as tower:alpha, e.g. "0:3/2"
        #[arg(long)]
        probe: Option<String>,
    },
    /// Coordinate-scale distance of two integer-indexed vectors
    Scale {
        /// Vector as index:value pairs, e.g. "3:1/2,-1:2"
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        probe: Option<i64>,
    },
    /// Length structure of an interval union
    Leb {
        /// Intervals as lo:hi pairs, e.g. "1/2:5/2,3:4"
        #[arg(long)]
        intervals: String,
        #[arg(long)]
        probe: Option<i64>,
    },
    /// Exponential-tower height and preimage
    Tower {
        #[arg(long)]
        value: f64,
        #[arg(long)]
        precision: Option<f64>,
        #[arg(long)]
        probe: Option<u32>,
    },
    /// Stabilization structure of a decreasing map on 0..size
    Iterate {
        #[arg(long)]
        size: i64,
        /// Map as from:to pairs, e.g. "0:0,1:0,2:1"
        #[arg(long)]
        map: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// Violations of the mathematics get exit 1; malformed input gets exit 2.
fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Validation(_)
        | Error::PreInvalid(_)
        | Error::PostValidation(_)
        | Error::Verification(_)
        | Error::CombinerLaw(_, _) => 1,
        _ => 2,
    }
}

fn load(path: &Path) -> Result<StructureFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_structure_text(&text)
}

fn load_structure(path: &Path) -> Result<DimensionStructure> {
    let file = load(path)?;
    if file.kind != FileKind::Structure {
        return Err(Error::Shape(format!(
            "{} is a pre-structure; a full structure is required",
            path.display()
        )));
    }
    DimensionStructure::validate(file.data)
}

fn load_pre(path: &Path) -> Result<PreDimensionStructure> {
    let file = load(path)?;
    PreDimensionStructure::validate(file.data)
}

fn write_structure(path: &Path, d: &DimensionStructure) -> Result<()> {
    let file = StructureFile {
        kind: FileKind::Structure,
        data: d.data(),
        point_order: None,
    };
    std::fs::write(path, emit_structure(&file))
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn ratio(text: &str) -> Result<BigRational> {
    match ExtVal::parse(text)? {
        ExtVal::Zero => Ok(BigRational::from_integer(0.into())),
        ExtVal::Fin(q) => Ok(q),
        ExtVal::Inf => Err(Error::Parse(format!("{text:?} must be finite"))),
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable report")
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.cmd {
        Cmd::Check { file } => {
            let f = load(file)?;
            let report = match f.kind {
                FileKind::Structure => check_axioms(&f.data)?,
                FileKind::Pre => check_pre_axioms(&f.data)?,
            };
            if report.passed() {
                println!("check: pass");
                Ok(0)
            } else {
                println!("check: FAIL");
                if !cli.quiet {
                    println!("{report}");
                }
                Ok(1)
            }
        }
        Cmd::Classify { file } => {
            let d = load_structure(file)?;
            println!("{}", json(&d.classify()?));
            Ok(0)
        }
        Cmd::Dim { file, point } => {
            let d = load_structure(file)?;
            println!("dim {point} = {}", d.dim(point)?);
            Ok(0)
        }
        Cmd::Mu { file, point, at } => {
            let d = load_structure(file)?;
            println!("mu({point}, {at}) = {}", d.mu(point, at)?);
            Ok(0)
        }
        Cmd::Order { file, points } => {
            let (x, y) = points
                .split_once(',')
                .ok_or_else(|| Error::Parse("--points needs two names, comma separated".into()))?;
            let d = load_structure(file)?;
            println!("{x} vs {y}: {:?}", d.leq_d(x.trim(), y.trim())?);
            Ok(0)
        }
        Cmd::Sync { file, alpha } => {
            let f = load(file)?;
            let pairs = f.point_order.as_ref().ok_or_else(|| {
                Error::Shape("sync requires a point_order member in the file".into())
            })?;
            let d = DimensionStructure::validate(f.data)?;
            let order = FinitePoset::new(d.points().to_vec(), pairs)?;
            let report = d.check_synchronization(&order, *alpha)?;
            if report.synchronized() {
                println!("sync: pass");
                Ok(0)
            } else {
                println!("sync: FAIL");
                if !cli.quiet {
                    println!("{}", json(&report));
                }
                Ok(1)
            }
        }
        Cmd::Combine { op, files, out } => {
            let built = combine(op, files)?;
            write_structure(out, &built)?;
            println!("combine {op}: wrote {}", out.display());
            Ok(0)
        }
        Cmd::Extend { file, out, report } => {
            let pre = load_pre(file)?;
            let result = extend(&pre)?;
            write_structure(out, &result.extended)?;
            let text = json(&result);
            match report {
                Some(path) => std::fs::write(path, text)
                    .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?,
                None => println!("{text}"),
            }
            Ok(0)
        }
        Cmd::Embed { pre, ext, target } => {
            let pre = load_pre(pre)?;
            let expected = load_structure(ext)?;
            let target = load_structure(target)?;
            let result = extend(&pre)?;
            if result.extended.data() != expected.data() {
                println!("embed: FAIL");
                if !cli.quiet {
                    println!("the completion of the pre-structure differs from {}", ext.display());
                }
                return Ok(1);
            }
            let report = embed_into(&pre, &result, &target)?;
            if report.passed() {
                println!("embed: pass");
                Ok(0)
            } else {
                println!("embed: FAIL");
                if !cli.quiet {
                    println!("{}", json(&report));
                }
                Ok(1)
            }
        }
        Cmd::MapVerify { kind, a, b, map } => {
            let kind = match kind.as_str() {
                "morphism" => MapKind::Morphism,
                "iso" => MapKind::Isomorphism,
                "semi-iso" => MapKind::SemiIsomorphism,
                other => {
                    return Err(Error::Parse(format!(
                        "--kind must be morphism, iso, or semi-iso, not {other:?}"
                    )))
                }
            };
            let d1 = load_structure(a)?;
            let d2 = load_structure(b)?;
            let text = std::fs::read_to_string(map)
                .map_err(|e| Error::Parse(format!("{}: {e}", map.display())))?;
            let m = parse_map_text(&text)?;
            let flag = verify_map(&d1, &d2, &m, kind)?;
            if flag.holds {
                let transport = dim_transport_check(&d1, &d2, &m, kind)?;
                println!("map-verify: pass");
                if !cli.quiet {
                    println!("{}", json(&transport));
                }
                Ok(0)
            } else {
                println!("map-verify: FAIL");
                if !cli.quiet {
                    println!("{}", json(&flag));
                }
                Ok(1)
            }
        }
        Cmd::Suite { seed, count, shrink } => suite(cli, *seed, *count, *shrink),
        Cmd::Gallery { family } => run_gallery(family),
    }
}

fn combine(op: &str, files: &[PathBuf]) -> Result<DimensionStructure> {
    let need = |n: usize| -> Result<()> {
        if files.len() == n {
            Ok(())
        } else {
            Err(Error::Shape(format!("{op} takes exactly {n} input file(s)")))
        }
    };
    let loaded = || -> Result<Vec<DimensionStructure>> {
        if files.is_empty() {
            return Err(Error::Shape(format!("{op} needs at least one input file")));
        }
        files.iter().map(|p| load_structure(p)).collect()
    };
    match op {
        "product" | "min-product" => {
            need(2)?;
            let c = if op == "product" { Combiner::Product } else { Combiner::Min };
            direct_product(&load_structure(&files[0])?, &load_structure(&files[1])?, c)
        }
        "i-product" => {
            let ds = loaded()?;
            let refs: Vec<&DimensionStructure> = ds.iter().collect();
            i_direct_product(&refs)
        }
        "l-product" => {
            need(2)?;
            l_direct_product(&load_structure(&files[0])?, &load_structure(&files[1])?)
        }
        "sum" => {
            let ds = loaded()?;
            // blocks stack in argument order along a chain index
            let ids: Vec<String> = (1..=ds.len()).map(|i| i.to_string()).collect();
            let index = FinitePoset::chain(ids.clone());
            let family: Vec<(String, DimensionStructure)> =
                ids.into_iter().zip(ds).collect();
            sum(&index, &family)
        }
        "measure-sum" => {
            let ds = loaded()?;
            let refs: Vec<&DimensionStructure> = ds.iter().collect();
            measure_sum(&refs)
        }
        "sup" => {
            let ds = loaded()?;
            let refs: Vec<&DimensionStructure> = ds.iter().collect();
            sup_combine(&refs)
        }
        "normalize" => {
            need(1)?;
            normalization(&load_structure(&files[0])?)
        }
        "quotient" => {
            need(1)?;
            let d = load_structure(&files[0])?;
            let partition = Partition::by_mu_d(&d)?;
            quotient(&d, &partition)
        }
        "sign" => {
            need(1)?;
            sign_collapse(&load_structure(&files[0])?)
        }
        other => Err(Error::Parse(format!("unknown combine op {other:?}"))),
    }
}

fn suite(cli: &Cli, seed: u64, count: u64, shrink: bool) -> Result<u8> {
    let mut failures = 0u64;
    for i in 0..count {
        let s = seed.wrapping_add(i);
        let mode = if i % 2 == 0 { GenMode::ValidGeneral } else { GenMode::ValidPrincipal };
        let d = generate_valid(s, 6, 6, mode)?;
        let results = proposition_suite(&d, None)?;
        let bad: Vec<_> = results.iter().filter(|r| !r.pass).collect();
        if bad.is_empty() {
            continue;
        }
        failures += 1;
        println!("suite: seed {s} FAILED");
        if !cli.quiet {
            for r in &bad {
                println!("  {}: {}", r.id, r.witness.as_deref().unwrap_or(""));
            }
            if shrink {
                let failing_ids: Vec<&str> = bad.iter().map(|r| r.id).collect();
                let shrunk = shrink_failing(&d.data(), |cand| {
                    DimensionStructure::validate(cand.clone())
                        .and_then(|d| proposition_suite(&d, None))
                        .map(|rs| rs.iter().any(|r| !r.pass && failing_ids.contains(&r.id)))
                        .unwrap_or(false)
                });
                let file = StructureFile {
                    kind: FileKind::Structure,
                    data: shrunk,
                    point_order: None,
                };
                println!("  shrunk candidate:\n{}", emit_structure(&file));
            }
        }
    }
    println!(
        "suite: {count} structures from seed {seed}, {failures} failure(s)"
    );
    Ok(if failures == 0 { 0 } else { 1 })
}

fn run_gallery(family: &Family) -> Result<u8> {
    match family {
        Family::Ranked { counts, probe } => {
            let mut pairs = Vec::new();
            for item in counts.split(',').filter(|s| !s.is_empty()) {
                let (r, c) = item
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("bad rank:count pair {item:?}")))?;
                pairs.push((
                    r.trim().parse().map_err(|_| Error::Parse(format!("bad rank {r:?}")))?,
                    c.trim().parse().map_err(|_| Error::Parse(format!("bad count {c:?}")))?,
                ));
            }
            let h = gallery::ranked::RankedSet::new(&pairs);
            println!("dim = {}", gallery::ranked::ranked_dim(&h));
            if let Some(n) = probe {
                println!("mu_{n} = {}", gallery::ranked::ranked_mu(&h, *n));
            }
            Ok(0)
        }
        Family::Growth { tower, pow, logexp, coeff, probe } => {
            let x = gallery::growth::GrowthSeq::new(*tower, ratio(pow)?, *logexp, ratio(coeff)?)?;
            let (m, beta, mu) = gallery::growth::growth_dim_tower(&x);
            println!("dim = ({m}, {beta}) with mu = {mu}");
            if let Some(p) = probe {
                let (k, alpha) = p
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("bad probe {p:?}")))?;
                let k: u32 =
                    k.trim().parse().map_err(|_| Error::Parse(format!("bad tower {k:?}")))?;
                let alpha = ratio(alpha)?;
                let v = gallery::growth::growth_measure(
                    &x,
                    k,
                    &alpha,
                    gallery::growth::LimitKind::LimInf,
                );
                println!("probe ({k}, {alpha}) = {v}");
            }
            Ok(0)
        }
        Family::Scale { x, y, probe } => {
            let parse_vec = |text: &str| -> Result<gallery::scale::ScaleVector> {
                let mut pairs = Vec::new();
                for item in text.split(',').filter(|s| !s.is_empty()) {
                    let (n, v) = item
                        .split_once(':')
                        .ok_or_else(|| Error::Parse(format!("bad index:value pair {item:?}")))?;
                    pairs.push((
                        n.trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad index {n:?}")))?,
                        ratio(v)?,
                    ));
                }
                Ok(gallery::scale::ScaleVector::new(&pairs))
            };
            let (vx, vy) = (parse_vec(x)?, parse_vec(y)?);
            println!("dim = {}", gallery::scale::scale_dim(&vx, &vy)?);
            if let Some(n) = probe {
                println!("rho_{n} = {}", gallery::scale::scale_rho(&vx, &vy, *n));
            }
            Ok(0)
        }
        Family::Leb { intervals, probe } => {
            let mut pieces = Vec::new();
            for item in intervals.split(',').filter(|s| !s.is_empty()) {
                let (lo, hi) = item
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("bad lo:hi pair {item:?}")))?;
                pieces.push((ratio(lo)?, ratio(hi)?));
            }
            let h = gallery::lebesgue::IntervalSet::new(&pieces);
            match gallery::lebesgue::leb_dim(&h) {
                Some(n) => println!("dim = {n}"),
                None => println!("dim = bottom (measure-zero set)"),
            }
            if let Some(n) = probe {
                println!("mu_{n} = {}", gallery::lebesgue::leb_mu(&h, *n));
            }
            Ok(0)
        }
        Family::Tower { value, precision, probe } => {
            let z = match precision {
                Some(p) => gallery::tower::TowerNumber::with_precision(*value, *p)?,
                None => gallery::tower::TowerNumber::new(*value)?,
            };
            let (height, mu) = gallery::tower::tower_decompose(&z)?;
            println!("height = {height}, mu = {mu}");
            if let Some(k) = probe {
                println!("mu_{k} = {}", gallery::tower::tower_mu(&z, *k)?);
            }
            Ok(0)
        }
        Family::Iterate { size, map, out } => {
            let order = FinitePoset::chain((0..*size).map(|i| i.to_string()).collect());
            let mut pairs = Vec::new();
            for item in map.split(',').filter(|s| !s.is_empty()) {
                let (a, b) = item
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("bad from:to pair {item:?}")))?;
                pairs.push((a.trim().to_string(), b.trim().to_string()));
            }
            let d = gallery::iterate::iterate_structure(&order, &pairs)?;
            for x in d.points() {
                println!("dim {x} = {}", d.dim(x)?);
            }
            if let Some(path) = out {
                write_structure(path, &d)?;
            }
            Ok(0)
        }
    }
}
