use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use polydev::development::{
    build_correspondence, parse_development, serialize_development, validate_development, vertex_map_by_name,
    vertex_map_from_json, CombinatorialMap, Development, MapFile,
};
use polydev::oracle::{
    apply_affine, extract_development, generate, oracle_affine_equivalent, random_affine_seeded, EmbeddedPolyhedron,
    GeneratorKind,
};
use polydev::recognizer::{recognize, report_json, summary, RecognizeOptions};
use polydev::solver::SolverConfig;
use polydev::suspension::suspension_certificate;
use polydev::verdict::{Verdict, VerdictKind};

#[derive(Parser)]
#[command(name = "polydev", version, about = "Affine-equivalence tests for polyhedra given by their developments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a development file and print the issues found.
    Validate {
        path: PathBuf,
        /// Length tolerance relative to the longest edge.
        #[arg(long, default_value_t = 1e-9)]
        eps_len: f64,
    },
    /// Run the full recognizer on two developments.
    Recognize(PairArgs),
    /// Run the suspension certificate on two developments.
    Suspension {
        #[command(flatten)]
        pair: PairArgs,
        /// Try every pole pair of the first development.
        #[arg(long)]
        all_pairings: bool,
    },
    /// Write a generated polyhedron and its development.
    Generate {
        /// One of: bipyramid, perturbed-bipyramid, prism, cube, tilted-box,
        /// trapezohedron, antiprism, suspension.
        kind: String,
        #[arg(short, long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the image under a random affine map drawn from the seed.
        #[arg(long)]
        affine: bool,
        /// Output prefix; files are PREFIX.poly.json and PREFIX.dev.json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit an affine map between two embedded polyhedra.
    Oracle {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-9)]
        eps_aff: f64,
    },
}

#[derive(Args)]
struct PairArgs {
    a: PathBuf,
    b: PathBuf,
    /// Vertex correspondence {"vertices": {"a": "b", ...}}; default pairs equal names.
    #[arg(long)]
    map: Option<PathBuf>,
    /// Also enumerate the patches of the second development.
    #[arg(long)]
    symmetric: bool,
    #[arg(long, default_value_t = SolverConfig::default().max_depth)]
    max_depth: u32,
    /// Boxes processed per system before giving up.
    #[arg(long, default_value_t = SolverConfig::default().max_boxes)]
    max_boxes: usize,
    /// Residual tolerance εres (also the α inflation).
    #[arg(long, default_value_t = SolverConfig::default().eps_res)]
    tol: f64,
    /// Print the evidence document instead of the summary.
    #[arg(long)]
    json: bool,
    #[arg(long)]
    jobs: Option<usize>,
    /// Include per-patch wall-clock times in the evidence.
    #[arg(long)]
    timings: bool,
    #[arg(long, default_value_t = 1e-9)]
    eps_len: f64,
}

enum Failure {
    Input(String),
    Internal(String),
}

type Outcome = Result<ExitCode, Failure>;

fn input<E: std::fmt::Display>(ctx: &Path) -> impl Fn(E) -> Failure + '_ {
    move |e| Failure::Input(format!("{}: {e}", ctx.display()))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(input(path))
}

fn load_dev(path: &Path, eps_len: f64) -> Result<Development, Failure> {
    let dev = parse_development(&read(path)?).map_err(input(path))?;
    let report = validate_development(&dev, eps_len);
    if !report.is_valid() {
        let text = serde_json::to_string(&report).map_err(|e| Failure::Internal(e.to_string()))?;
        return Err(Failure::Input(format!("{}: invalid development: {text}", path.display())));
    }
    Ok(dev)
}

fn load_pair(p: &PairArgs) -> Result<(Development, Development, CombinatorialMap), Failure> {
    let dev = load_dev(&p.a, p.eps_len)?;
    let dev2 = load_dev(&p.b, p.eps_len)?;
    let vm = match &p.map {
        Some(m) => vertex_map_from_json(&dev, &dev2, &read(m)?).map_err(input(m)),
        None => vertex_map_by_name(&dev, &dev2).map_err(|e| Failure::Input(format!("default map by names: {e}"))),
    }?;
    let map = build_correspondence(&dev, &dev2, &vm).map_err(|e| Failure::Input(e.to_string()))?;
    Ok((dev, dev2, map))
}

fn config(p: &PairArgs) -> SolverConfig {
    SolverConfig {
        max_depth: p.max_depth,
        max_boxes: p.max_boxes,
        eps_res: p.tol,
        ..SolverConfig::default()
    }
}

fn emit(v: &Verdict, json: bool, timings: bool) -> ExitCode {
    if json {
        println!("{}", report_json(v, timings));
    } else {
        print!("{}", summary(v));
    }
    if v.kind == VerdictKind::NotAffineEquivalent {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))?;
    println!("{}", path.display());
    Ok(())
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn emit_poly(prefix: &Path, p: &EmbeddedPolyhedron) -> Result<(), Failure> {
    let dev = extract_development(p).map_err(|e| Failure::Internal(e.to_string()))?;
    let json = serde_json::to_string_pretty(p).map_err(|e| Failure::Internal(e.to_string()))?;
    write(&with_suffix(prefix, ".poly.json"), &json)?;
    write(&with_suffix(prefix, ".dev.json"), &serialize_development(&dev))
}

fn run(cli: Cli) -> Outcome {
    match cli.cmd {
        Cmd::Validate { path, eps_len } => {
            let dev = parse_development(&read(&path)?).map_err(input(&path))?;
            let report = validate_development(&dev, eps_len);
            println!("{}", serde_json::to_string_pretty(&report).map_err(|e| Failure::Internal(e.to_string()))?);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Recognize(p) => {
            let (dev, dev2, map) = load_pair(&p)?;
            let opts = RecognizeOptions {
                symmetric: p.symmetric,
                jobs: p.jobs,
                eps_len: p.eps_len,
                ..RecognizeOptions::default()
            };
            let v = recognize(&dev, &dev2, &map, &config(&p), &opts).map_err(|e| Failure::Input(e.to_string()))?;
            Ok(emit(&v, p.json, p.timings))
        }
        Cmd::Suspension { pair, all_pairings } => {
            let (dev, dev2, map) = load_pair(&pair)?;
            let v = suspension_certificate(&dev, &dev2, &map, pair.eps_len, &config(&pair), all_pairings)
                .map_err(|e| Failure::Input(e.to_string()))?;
            Ok(emit(&v, pair.json, pair.timings))
        }
        Cmd::Generate {
            kind,
            n,
            seed,
            affine,
            out,
        } => {
            let k = GeneratorKind::parse(&kind).ok_or_else(|| Failure::Input(format!("unknown generator {kind:?}")))?;
            let p = generate(k, n, seed).map_err(|e| Failure::Input(e.to_string()))?;
            emit_poly(&out, &p)?;
            if affine {
                let q = apply_affine(&p, &random_affine_seeded(seed)).map_err(|e| Failure::Internal(e.to_string()))?;
                emit_poly(&with_suffix(&out, ".image"), &q)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Oracle { a, b, map, eps_aff } => {
            let pa: EmbeddedPolyhedron = serde_json::from_str(&read(&a)?).map_err(input(&a))?;
            let pb: EmbeddedPolyhedron = serde_json::from_str(&read(&b)?).map_err(input(&b))?;
            for (p, path) in [(&pa, &a), (&pb, &b)] {
                p.check_planarity().map_err(input(path))?;
            }
            let pairs: Option<Vec<(String, String)>> = match &map {
                Some(m) => {
                    let f: MapFile = serde_json::from_str(&read(m)?).map_err(input(m))?;
                    Some(f.vertices.into_iter().collect())
                }
                None => None,
            };
            match oracle_affine_equivalent(&pa, &pb, pairs.as_deref(), eps_aff) {
                Some(m) => {
                    let rows = |k: usize| [m.linear[(k, 0)], m.linear[(k, 1)], m.linear[(k, 2)]];
                    let doc = serde_json::json!({
                        "affine": true,
                        "linear": [rows(0), rows(1), rows(2)],
                        "translation": [m.translation[0], m.translation[1], m.translation[2]],
                        "det": m.det(),
                    });
                    println!("{}", serde_json::to_string_pretty(&doc).map_err(|e| Failure::Internal(e.to_string()))?);
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    println!("{}", serde_json::json!({ "affine": false }));
                    Ok(ExitCode::from(1))
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(code)) => code,
        Ok(Err(Failure::Input(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Ok(Err(Failure::Internal(msg))) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
        Err(_) => ExitCode::from(3),
    }
}
