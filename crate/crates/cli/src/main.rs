use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use rainbow_hcd::graph::{cycle_sequence, walecki, SimpleGraph};
use rainbow_hcd::io::{parse_instance, CertificateFile, LabeledInstance};
use rainbow_hcd::oracle::{exhaustive_rainbow_hcd, OracleOptions, Outcome, DEFAULT_BUDGET};
use rainbow_hcd::solver::{solve, ProblemInstance, SolveOptions};
use rainbow_hcd::{gen, Error};

const EXIT_PARSE: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;
const EXIT_BUDGET: u8 = 4;
const EXIT_VERIFY: u8 = 5;

#[derive(Parser)]
#[command(name = "rainbow-hcd", version, about = "Rainbow Hamiltonian cycle decompositions of K_{2n+1}")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a certificate for an instance file.
    Solve {
        instance: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the certificate here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the stage path to standard error.
        #[arg(long)]
        trace: bool,
        /// Use the main pipeline even for small or linear-forest instances.
        #[arg(long)]
        force_pipeline: bool,
    },
    /// Check a certificate against an instance.
    Verify { certificate: PathBuf, instance: PathBuf },
    /// Exhaustive search (small n only).
    Oracle {
        instance: PathBuf,
        /// Node cap for the search.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Comma-separated class per edge, e.g. `0,0,1`; need not be rainbow.
        #[arg(long)]
        precolor: Option<String>,
        /// Number of cycles; defaults to the number of edges.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        allow_large: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print Walecki's decomposition of K_{2n+1}.
    Walecki {
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Solve and verify a batch of generated instances.
    Bench {
        /// Inclusive range `A..B` of edge counts.
        #[arg(long, default_value = "1..5")]
        n_range: String,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Every isomorphism class instead of random samples (n <= 6).
        #[arg(long)]
        exhaustive: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn new(code: u8, msg: impl Into<String>) -> Self {
        Failure { code, msg: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::InvalidInput(_) => EXIT_PARSE,
            Error::InfeasibleInput(_) => EXIT_INFEASIBLE,
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_INTERNAL,
        };
        Failure { code, msg: e.to_string() }
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn write_or_print(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::new(EXIT_INTERNAL, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_instance(path: &Path) -> Result<LabeledInstance, Failure> {
    Ok(parse_instance(&read(path)?)?)
}

fn certificate_json(inst: &LabeledInstance, seed: u64, force_pipeline: bool) -> Result<(String, Vec<String>), Failure> {
    let problem = ProblemInstance::new(inst.h.clone())?;
    let sol = solve(&problem, &SolveOptions { seed, force_pipeline })?;
    let file = CertificateFile::new(&sol.certificate, &inst.labels, seed, sol.trace.clone());
    Ok((file.to_json(), sol.trace))
}

fn cmd_solve(instance: &Path, seed: u64, out: Option<&Path>, trace: bool, force_pipeline: bool) -> CmdResult {
    let inst = load_instance(instance)?;
    let (json, stages) = certificate_json(&inst, seed, force_pipeline)?;
    if trace {
        for s in &stages {
            eprintln!("{s}");
        }
    }
    write_or_print(out, &json)
}

fn cmd_verify(certificate: &Path, instance: &Path) -> CmdResult {
    let file = CertificateFile::from_json(&read(certificate)?)?;
    let inst = load_instance(instance)?;
    let report = file.to_certificate().verify();
    println!("{report}");
    if !report.passed() {
        return Err(Failure::new(EXIT_VERIFY, "certificate failed verification"));
    }
    let got = file.label_edges()?;
    if got != inst.label_edges() || file.h_edges.len() != inst.h.num_edges() {
        println!("FAIL instance: certificate edges {got:?} differ from the instance");
        return Err(Failure::new(EXIT_VERIFY, "certificate is for a different instance"));
    }
    println!("ok   instance: h_edges match the instance through label_map");
    Ok(())
}

fn cmd_oracle(
    instance: &Path,
    budget: u64,
    precolor: Option<&str>,
    n: Option<usize>,
    allow_large: bool,
    out: Option<&Path>,
) -> CmdResult {
    let inst = load_instance(instance)?;
    let n = n.unwrap_or(inst.h.num_edges());
    let pre: Option<Vec<usize>> = precolor
        .map(|s| {
            s.split(',')
                .map(|c| c.trim().parse::<usize>().map_err(|_| Failure::new(EXIT_PARSE, format!("bad class {c:?}"))))
                .collect()
        })
        .transpose()?;
    let r = exhaustive_rainbow_hcd(&inst.h, n, pre.as_deref(), &OracleOptions { budget, allow_large })?;
    match r.outcome {
        Outcome::Found(w) => {
            println!("found ({} nodes)", r.nodes_explored);
            for (i, c) in w.decomposition.classes().iter().enumerate() {
                let seq = cycle_sequence(c, w.decomposition.order()).unwrap_or_default();
                println!("C{}: {seq:?}", i + 1);
            }
            if let Some(p) = out {
                let cert = w.into_certificate(&inst.h);
                let trace = vec!["oracle".to_string()];
                write_or_print(Some(p), &CertificateFile::new(&cert, &inst.labels, 0, trace).to_json())?;
            }
            Ok(())
        }
        Outcome::ProvedNone => {
            println!("proved none ({} nodes)", r.nodes_explored);
            Err(Failure::new(EXIT_INFEASIBLE, "no decomposition exists"))
        }
    }
}

fn cmd_walecki(n: usize, format: Format) -> CmdResult {
    if n == 0 {
        return Err(Failure::new(EXIT_PARSE, "n must be positive"));
    }
    let d = walecki(n);
    let cycles: Vec<Vec<usize>> = d.classes().iter().map(|c| cycle_sequence(c, d.order()).expect("Walecki cycle")).collect();
    match format {
        Format::Text => {
            for (i, c) in cycles.iter().enumerate() {
                let s: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                println!("C{}: {}", i + 1, s.join(" "));
            }
        }
        Format::Json => {
            let doc = serde_json::json!({ "n": n, "order": d.order(), "cycles": cycles });
            println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
        }
    }
    Ok(())
}

fn parse_range(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::new(EXIT_PARSE, format!("expected A..B, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok((a, b))
}

struct BenchRow {
    id: String,
    n: usize,
    route: String,
    millis: f64,
    result: Result<String, String>,
}

fn cmd_bench(range: &str, samples: usize, seed: u64, exhaustive: bool) -> CmdResult {
    let (lo, hi) = parse_range(range)?;
    if exhaustive && hi > 6 {
        return Err(Failure::new(EXIT_PARSE, "--exhaustive supports n <= 6"));
    }
    let mut jobs: Vec<(String, SimpleGraph)> = Vec::new();
    for n in lo..=hi {
        if exhaustive {
            for (i, h) in gen::graphs_with_edges(n).into_iter().enumerate() {
                jobs.push((format!("n{n}-class{i}"), h));
            }
        } else {
            for i in 0..samples {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 32) ^ i as u64);
                jobs.push((format!("n{n}-sample{i}"), gen::random_instance(&mut rng, n)));
            }
        }
    }
    let rows: Vec<BenchRow> = jobs
        .par_iter()
        .map(|(id, h)| {
            let start = Instant::now();
            let labels: Vec<u64> = (0..h.num_vertices() as u64).collect();
            let inst = LabeledInstance { h: h.clone(), labels };
            let (route, result) = match certificate_json(&inst, seed, false) {
                Ok((json, trace)) => {
                    let ok = CertificateFile::from_json(&json)
                        .map(|f| f.to_certificate().verify().passed())
                        .unwrap_or(false);
                    let sum = hex::encode(Sha256::digest(json.as_bytes()));
                    let route = trace.first().cloned().unwrap_or_default();
                    (route, if ok { Ok(sum[..16].to_string()) } else { Err("verification failed".into()) })
                }
                Err(f) => (String::new(), Err(f.msg)),
            };
            BenchRow { id: id.clone(), n: h.num_edges(), route, millis: start.elapsed().as_secs_f64() * 1e3, result }
        })
        .collect();
    println!("{:<18} {:>3} {:<24} {:>10}  checksum", "instance", "n", "stage path", "ms");
    let mut failed = 0;
    for r in &rows {
        let tail = match &r.result {
            Ok(sum) => sum.clone(),
            Err(e) => {
                failed += 1;
                format!("FAILED: {e}")
            }
        };
        println!("{:<18} {:>3} {:<24} {:>10.2}  {tail}", r.id, r.n, r.route, r.millis);
    }
    println!("{} instances, {} failed", rows.len(), failed);
    if failed > 0 {
        return Err(Failure::new(EXIT_INTERNAL, format!("{failed} instances failed")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Solve { instance, seed, out, trace, force_pipeline } => {
            cmd_solve(&instance, seed, out.as_deref(), trace, force_pipeline)
        }
        Cmd::Verify { certificate, instance } => cmd_verify(&certificate, &instance),
        Cmd::Oracle { instance, budget, precolor, n, allow_large, out } => {
            cmd_oracle(&instance, budget, precolor.as_deref(), n, allow_large, out.as_deref())
        }
        Cmd::Walecki { n, format } => cmd_walecki(n, format),
        Cmd::Bench { n_range, samples, seed, exhaustive } => cmd_bench(&n_range, samples, seed, exhaustive),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
