use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use congruence_kit::config::Config;
use congruence_kit::error::{KitError, Result};
use congruence_kit::formats::{load_paramodular, load_table, read_json, read_text, to_json, write_json, write_text, GenusFile, PrimesFile};
use congruence_kit::mirror::{default_dir, Mirror};
use congruence_kit::par::Threads;
use congruence_kit::pipeline::{self, PipelineOptions, CURVE_LABELS, SCALAR_PRIMES};
use congruence_kit::stages;
use congruence_kit_core::congruence::{CompareOptions, CongruenceReport};
use congruence_kit_core::quinlat::{builtin, QuadForm};
use congruence_kit_core::rqfield::PrimeIdealF;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "congruence-kit", version, about = "Certified congruences between Hilbert and paramodular eigenforms of level 79")]
struct Cli {
    /// `key = value` configuration file; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Progress on stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate a genus of positive quinary lattices by 2-neighbors.
    Genus {
        /// Builtin name (`q1975`, `q79`, `sum-of-squares`, optionally
        /// prefixed `builtin:`) or a file holding 15 coefficients.
        #[arg(long)]
        seed: String,
        #[arg(long, default_value_t = 2)]
        prime: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hecke matrix of `T_p` (degree 1) or `T_{1,p²}` (degree 2) on a genus.
    Hecke {
        #[arg(long)]
        genus: PathBuf,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        degree: u8,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Surface invariants and Sturm bounds.
    Sturm {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Prime ideals of `F` with a totally positive generator of trace below
    /// the bound.
    Primes {
        /// Use the Sturm bound for this residue characteristic.
        #[arg(long, conflicts_with = "trace_bound")]
        ell: Option<u64>,
        #[arg(long)]
        trace_bound: Option<i64>,
        /// `sqrt5`, `two` or a prime label; repeatable.
        #[arg(long)]
        exclude: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two eigenvalue tables modulo a prime.
    Verify {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        /// `lambda5` or `q1`.
        #[arg(long, default_value = "lambda5")]
        residue: String,
        #[arg(long)]
        exclude: Vec<String>,
        /// Primes file; defaults to the primes of the left table.
        #[arg(long)]
        primes: Option<PathBuf>,
        /// Multiply right-hand values by `N(p)`.
        #[arg(long)]
        twist: bool,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Paramodular congruence certificate.
    Theorem1 {
        #[arg(long)]
        genus: PathBuf,
        #[arg(long)]
        para: PathBuf,
        #[arg(long)]
        h: PathBuf,
        /// Comma-separated primes for the genus-side scalars.
        #[arg(long, value_delimiter = ',')]
        scalar_primes: Option<Vec<u64>>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Congruence modulo the prime above 2.
    Mod2 {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        h: PathBuf,
        #[arg(long)]
        primes: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Compare a rational table with point counts of curves from the mirror.
    Curve {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        primes: PathBuf,
        /// Curve labels; defaults to the two level-79 curves.
        #[arg(long)]
        label: Vec<String>,
        #[command(flatten)]
        src: Sources,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run every stage and write all artifacts.
    Pipeline {
        #[arg(long)]
        out: Option<PathBuf>,
        /// Reuse a stored genus instead of enumerating it.
        #[arg(long)]
        genus: Option<PathBuf>,
        #[arg(long)]
        seed: Option<String>,
        #[arg(long, value_delimiter = ',')]
        scalar_primes: Option<Vec<u64>>,
        #[command(flatten)]
        src: Sources,
    },
}

#[derive(Args)]
struct Sources {
    /// Directory holding the eigenvalue tables.
    #[arg(long)]
    fixtures: Option<PathBuf>,
    /// Curve mirror directory.
    #[arg(long)]
    mirror: Option<PathBuf>,
}

struct Ctx {
    config: Config,
    par: Threads,
    json: bool,
    verbose: bool,
}

impl Ctx {
    fn fixtures(&self, flag: Option<PathBuf>) -> PathBuf {
        self.config.path(flag, "fixtures").unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures")))
    }

    fn mirror(&self, src: &Sources) -> Mirror {
        let fixtures = self.fixtures(src.fixtures.clone());
        Mirror::locate(self.config.path(src.mirror.clone(), "mirror"), default_dir(&fixtures))
    }

    fn emit<T: Serialize>(&self, value: &T, text: String) {
        if self.json {
            print!("{}", to_json(value));
        } else {
            print!("{text}");
        }
    }

    /// Prints and optionally stores a certificate; a failing verdict is an
    /// error naming the failing primes.
    fn certificate(&self, rep: &CongruenceReport, report: Option<&Path>) -> Result<()> {
        if let Some(p) = report {
            write_json(p, rep)?;
        }
        self.emit(rep, rep.render_text());
        if rep.passed() {
            return Ok(());
        }
        let bad: Vec<String> = rep
            .rows
            .iter()
            .filter(|r| !r.pass)
            .map(|r| r.prime.clone())
            .chain(rep.subchecks.iter().filter(|c| !c.pass).map(|c| c.name.clone()))
            .collect();
        Err(KitError::Verification(bad.join("; ")))
    }
}

fn seed_form(s: &str) -> Result<QuadForm> {
    if let Some(name) = s.strip_prefix("builtin:") {
        return builtin(name).ok_or_else(|| KitError::Usage(format!("unknown builtin form {name:?}")));
    }
    if let Some(q) = builtin(s) {
        return Ok(q);
    }
    let path = Path::new(s);
    if !path.exists() {
        return Err(KitError::Usage(format!("{s:?} is neither a builtin form nor a file")));
    }
    read_text(path)?.trim().parse().map_err(|e| KitError::format(path, e))
}

fn primes_from(path: &Path) -> Result<Vec<PrimeIdealF>> {
    let file: PrimesFile = read_json(path)?;
    file.primes.iter().map(|s| s.parse().map_err(|_| KitError::format(path, format!("bad prime label {s:?}")))).collect()
}

fn excluded(list: &[String]) -> Result<Vec<PrimeIdealF>> {
    list.iter().map(|s| stages::parse_prime(s)).collect()
}

fn write_or_print<T: Serialize>(ctx: &Ctx, out: Option<&Path>, value: &T, text: String) -> Result<()> {
    if let Some(p) = out {
        write_json(p, value)?;
    }
    ctx.emit(value, text);
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let par = Threads::new(config.threads(cli.threads)?);
    let verbose = cli.verbose || config.get("verbose") == Some("true");
    let ctx = Ctx { config, par, json: cli.json, verbose };

    match cli.cmd {
        Cmd::Genus { seed, prime, out } => {
            let q = seed_form(&seed)?;
            let g = stages::genus(&q, prime, &ctx.par)?;
            let text = format!("seed {}: {} classes\n", g.seed, g.class_count);
            write_or_print(&ctx, out.as_deref(), &g, text)
        }
        Cmd::Hecke { genus, p, degree, out } => {
            let g = read_json::<GenusFile>(&genus)?.to_genus(&genus)?;
            let h = stages::hecke(&g, p, degree, &ctx.par)?;
            let mut text = format!("T_{p} degree {degree} on {} classes\n", h.size);
            if let (Some(d), Some(s)) = (&h.dims, h.scalar_v1) {
                text.push_str(&format!("dim ker(T2+5) = {}, dim ker T2 = {}, mod-5 meet = {}, scalar on V1 = {s}\n", d.v1, d.v2, d.meet_mod5));
            }
            write_or_print(&ctx, out.as_deref(), &h, text)
        }
        Cmd::Sturm { out } => {
            let s = stages::sturm()?;
            let mut text = format!("d = {}, cusps = {}, ratio = {}, j = {}\n", s.d, s.cusps, s.ratio, s.j);
            for b in &s.bounds {
                text.push_str(&format!("l = {}: bound {}, trace < {}\n", b.ell, b.bound, b.trace_bound));
            }
            write_or_print(&ctx, out.as_deref(), &s, text)
        }
        Cmd::Primes { ell, trace_bound, exclude, out } => {
            let tb = match (ell, trace_bound) {
                (_, Some(t)) => t,
                (Some(l), None) => stages::sturm()?.trace_bound(l).ok_or_else(|| KitError::Usage(format!("no Sturm bound for l = {l}")))?,
                (None, None) => return Err(KitError::Usage("give --ell or --trace-bound".into())),
            };
            let p = stages::primes(tb, &excluded(&exclude)?)?;
            let text = format!("{} primes with trace < {tb}\n", p.count);
            write_or_print(&ctx, out.as_deref(), &p, text)
        }
        Cmd::Verify { left, right, residue, exclude, primes, twist, report } => {
            let (l, r) = (load_table(&left)?, load_table(&right)?);
            let map = stages::residue_map(&residue, &[&l, &r])?;
            let primes = primes.as_deref().map(primes_from).transpose()?;
            let opts = CompareOptions { excluded: excluded(&exclude)?, primes, twist_right_by_norm: twist };
            ctx.certificate(&stages::verify(&l, &r, &map, &opts)?, report.as_deref())
        }
        Cmd::Theorem1 { genus, para, h, scalar_primes, report } => {
            let g = read_json::<GenusFile>(&genus)?.to_genus(&genus)?;
            let (para, h) = (load_paramodular(&para)?, load_table(&h)?);
            let primes = match scalar_primes {
                Some(p) => p,
                None => ctx.config.primes("scalar_primes")?.unwrap_or_else(|| SCALAR_PRIMES.to_vec()),
            };
            let (inputs, deg2) = stages::theorem1_inputs(&g, &primes, &ctx.par)?;
            let t5 = if primes.contains(&5) { Some(stages::t5_on_level79_genus(&ctx.par)?) } else { None };
            ctx.certificate(&stages::theorem1(&inputs, deg2, t5, &para, &h)?, report.as_deref())
        }
        Cmd::Mod2 { f, h, primes, report } => {
            let rep = stages::mod2(&load_table(&f)?, &load_table(&h)?, primes_from(&primes)?)?;
            ctx.certificate(&rep, report.as_deref())
        }
        Cmd::Curve { f, primes, label, src, report } => {
            let mirror = ctx.mirror(&src);
            let labels: Vec<String> = if label.is_empty() { CURVE_LABELS.iter().map(|s| s.to_string()).collect() } else { label };
            let curves = labels.iter().map(|l| mirror.fetch_curve(l)).collect::<Result<Vec<_>>>()?;
            let rep = stages::curve_check(&load_table(&f)?, &curves, &primes_from(&primes)?, &ctx.par)?;
            ctx.certificate(&rep, report.as_deref())
        }
        Cmd::Pipeline { out, genus, seed, scalar_primes, src } => {
            let out = ctx.config.path(out, "out").ok_or_else(|| KitError::Usage("give --out or `out` in the config".into()))?;
            let seed = seed.or_else(|| ctx.config.get("seed").map(String::from)).unwrap_or_else(|| "q1975".into());
            let scalar_primes = match scalar_primes {
                Some(p) => p,
                None => ctx.config.primes("scalar_primes")?.unwrap_or_else(|| SCALAR_PRIMES.to_vec()),
            };
            let opts = PipelineOptions {
                fixtures: ctx.fixtures(src.fixtures.clone()),
                mirror: ctx.mirror(&src),
                out: out.clone(),
                seed: seed_form(&seed)?,
                genus: ctx.config.path(genus, "genus"),
                scalar_primes,
                verbose: ctx.verbose,
            };
            let summary = pipeline::run(&opts, &ctx.par)?;
            write_json(&out.join("summary.json"), &summary)?;
            write_text(&out.join("summary.txt"), &summary.render_text())?;
            ctx.emit(&summary, summary.render_text());
            if summary.pass {
                Ok(())
            } else {
                let bad: Vec<String> = summary.stages.iter().filter(|s| !s.pass).map(|s| format!("{} ({})", s.stage, s.detail)).collect();
                Err(KitError::Verification(bad.join("; ")))
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
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
