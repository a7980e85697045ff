//! The full run: genus → hecke → sturm → primes → curve oracle → congruence
//! certificates. Every stage writes its artifact to the output directory.

use std::path::{Path, PathBuf};

use congruence_kit_core::congruence::{CompareOptions, CongruenceReport};
use congruence_kit_core::genus::GenusData;
use congruence_kit_core::quinlat::QuadForm;
use congruence_kit_core::rqfield::PrimeIdealF;
use serde::Serialize;

use crate::error::{KitError, Result};
use crate::formats::{load_paramodular, load_table, read_json, write_json, write_text, GenusFile};
use crate::mirror::Mirror;
use crate::par::Threads;
use crate::stages;

/// Curves whose conductors are `(1 + 4√5)` and `(1 − 4√5)`.
pub const CURVE_LABELS: [&str; 2] = ["2.2.5.1-79.1-a1", "2.2.5.1-79.2-a2"];

/// Primes at which genus-side Hecke scalars are compared with `ν_p(F₇₉)`.
pub const SCALAR_PRIMES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub fixtures: PathBuf,
    pub out: PathBuf,
    pub mirror: Mirror,
    pub seed: QuadForm,
    /// Reuse a stored genus instead of enumerating it.
    pub genus: Option<PathBuf>,
    pub scalar_primes: Vec<u64>,
    pub verbose: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageResult {
    pub stage: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PipelineSummary {
    pub stages: Vec<StageResult>,
    pub pass: bool,
}

impl PipelineSummary {
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        for r in &self.stages {
            s.push_str(&format!("[{}] {}: {}\n", if r.pass { "pass" } else { "FAIL" }, r.stage, r.detail));
        }
        s.push_str(if self.pass { "pipeline: pass\n" } else { "pipeline: fail\n" });
        s
    }
}

struct Run<'a> {
    opts: &'a PipelineOptions,
    summary: PipelineSummary,
}

impl Run<'_> {
    fn note(&self, msg: &str) {
        if self.opts.verbose {
            eprintln!("{msg}");
        }
    }

    fn out(&self, name: &str) -> PathBuf {
        self.opts.out.join(name)
    }

    fn push(&mut self, stage: &str, pass: bool, detail: String) {
        self.note(&format!("{stage}: {}", if pass { "pass" } else { "FAIL" }));
        self.summary.stages.push(StageResult { stage: stage.to_string(), pass, detail });
    }

    /// Records a certificate; the detail names failing rows and subchecks.
    fn report(&mut self, stage: &str, file: &str, rep: &CongruenceReport) -> Result<()> {
        write_json(&self.out(file), rep)?;
        write_text(&self.out(&file.replace(".json", ".txt")), &rep.render_text())?;
        let mut detail = format!("{} rows, {} failures", rep.checked, rep.failures);
        let bad: Vec<String> = rep
            .rows
            .iter()
            .filter(|r| !r.pass)
            .map(|r| r.prime.clone())
            .chain(rep.subchecks.iter().filter(|c| !c.pass).map(|c| c.name.clone()))
            .take(5)
            .collect();
        if !bad.is_empty() {
            detail.push_str(&format!("; first: {}", bad.join("; ")));
        }
        self.push(stage, rep.passed(), detail);
        Ok(())
    }
}

fn fixture(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

/// Runs every stage. Returns the summary; `Err` only for I/O or internal
/// failures.
pub fn run(opts: &PipelineOptions, par: &Threads) -> Result<PipelineSummary> {
    let mut run = Run { opts, summary: PipelineSummary { stages: Vec::new(), pass: false } };

    run.note("genus");
    let gfile: GenusFile = match &opts.genus {
        Some(p) => read_json(p)?,
        None => stages::genus(&opts.seed, 2, par)?,
    };
    write_json(&run.out("genus.json"), &gfile)?;
    let g: GenusData = gfile.to_genus(&run.out("genus.json"))?;
    run.push("genus", true, format!("{} classes", g.len()));

    run.note("hecke");
    let h2 = stages::hecke(&g, 2, 1, par)?;
    write_json(&run.out("hecke-2.json"), &h2)?;
    let dims = h2.dims.clone().ok_or_else(|| KitError::internal("hecke", "no kernel dimensions"))?;
    run.push("hecke", true, format!("ker(T2+5) {}, ker T2 {}, mod-5 meet {}", dims.v1, dims.v2, dims.meet_mod5));

    run.note("sturm");
    let sturm = stages::sturm()?;
    write_json(&run.out("sturm.json"), &sturm)?;
    let main_tb = sturm.trace_bound(5).ok_or_else(|| KitError::internal("sturm", "no bound for l = 5"))?;
    let mod2_tb = sturm.trace_bound(2).ok_or_else(|| KitError::internal("sturm", "no bound for l = 2"))?;
    run.push("sturm", true, format!("bounds: tr < {main_tb} (mod lambda), tr < {mod2_tb} (mod q1)"));

    run.note("primes");
    let sqrt5 = PrimeIdealF::sqrt5();
    let pmain = stages::primes(main_tb, &[sqrt5])?;
    let pmod2 = stages::primes(mod2_tb, &[])?;
    write_json(&run.out("primes-main.json"), &pmain)?;
    write_json(&run.out("primes-mod2.json"), &pmod2)?;
    run.push("primes", true, format!("{} primes with tr < {main_tb} excluding (sqrt5); {} with tr < {mod2_tb}", pmain.count, pmod2.count));
    let main_primes = stages::parse_primes(&pmain)?;
    let mod2_primes = stages::parse_primes(&pmod2)?;

    let f = load_table(&fixture(&opts.fixtures, "f79.tbl"))?;
    let h = load_table(&fixture(&opts.fixtures, "h79.tbl"))?;
    let gt = load_table(&fixture(&opts.fixtures, "g79.tbl"))?;
    let para = load_paramodular(&fixture(&opts.fixtures, "f79para.tbl"))?;

    run.note("curve");
    let curves = CURVE_LABELS.iter().map(|l| opts.mirror.fetch_curve(l)).collect::<Result<Vec<_>>>()?;
    let curve_rep = stages::curve_check(&f, &curves, &mod2_primes, par)?;
    run.report("curve", "curve.json", &curve_rep)?;
    if !curve_rep.passed() {
        // congruence verdicts need agreeing f-eigenvalue sources
        return Ok(finish(run));
    }

    run.note("main");
    let lambda = stages::residue_map("lambda5", &[&f, &h])?;
    let opts_main = CompareOptions { excluded: vec![sqrt5], primes: Some(main_primes), twist_right_by_norm: false };
    let rep = stages::verify(&f, &h, &lambda, &opts_main)?;
    run.report("main", "main.json", &rep)?;

    run.note("twist");
    let opts_twist = CompareOptions { excluded: vec![sqrt5], primes: None, twist_right_by_norm: true };
    let rep = stages::verify(&h, &gt, &lambda, &opts_twist)?;
    run.report("twist", "twist.json", &rep)?;

    run.note("theorem1");
    let (inputs, deg2) = stages::theorem1_inputs(&g, &opts.scalar_primes, par)?;
    let t5 = if opts.scalar_primes.contains(&5) { Some(stages::t5_on_level79_genus(par)?) } else { None };
    let rep = stages::theorem1(&inputs, deg2, t5, &para, &h)?;
    run.report("theorem1", "theorem1.json", &rep)?;

    run.note("mod2");
    let rep = stages::mod2(&f, &h, mod2_primes)?;
    run.report("mod2", "mod2.json", &rep)?;

    Ok(finish(run))
}

fn finish(mut run: Run<'_>) -> PipelineSummary {
    run.summary.pass = run.summary.stages.iter().all(|s| s.pass);
    run.summary
}
