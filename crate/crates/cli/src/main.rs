//! `mgf`: generate corpora, decompose, verify, trace, search and reproduce the
//! counterexamples.
//!
//! Exit codes: 0 success, 1 a paper constant was violated, 2 usage error,
//! 3 invalid input.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mgf_core::decomp::{corollary_c_split, davis, gundy, krickeberg, regular_davis};
use mgf_core::document::{Body, DecompositionDoc, Document, MartingaleDoc, SearchDoc};
use mgf_core::norms::{conditional_square_function, diagonal_weak_norm, norm, weak_norm, CsfMode};
use mgf_core::search::{maximize_ratio, minimize_bminus, Objective, SearchConfig};
use mgf_core::space::{corpus, regularity_constant, CorpusSpec, Instance, Martingale};
use mgf_core::verify::{
    counterexample_report, cwikel_report, positive_parts, proof_trace_theorem_a, proof_trace_theorem_b, run_suite_on,
    CapProvenance, CapsTable, SuiteCheck, SuiteConfig, SuiteReport,
};
use mgf_core::{parallel, Error};
use serde::Serialize;

use output::{config_hash, num, opt, Sink, Table};

#[derive(Debug)]
pub enum Failure {
    /// A paper constant was exceeded.
    Assertion(String),
    Usage(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownCheck(_) => Failure::Usage(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Assertion(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Input(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "mgf", version, about = "Martingale decompositions and weak-type inequality checks")]
struct Cli {
    /// Worker threads; 0 picks the default. Outputs do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Output directory; CSV goes to stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
enum Command {
    /// Generate a corpus document.
    Gen(CorpusArgs),
    /// Decompose one instance.
    Decompose(DecomposeArgs),
    /// Norm table for every instance.
    Norms(NormsArgs),
    /// Run the check suite; exits 1 if a paper constant is violated.
    Verify(VerifyArgs),
    /// Step-by-step proof traces over the dyadic threshold grid.
    Trace(TraceArgs),
    /// Adversarial or decomposition search.
    Search(SearchArgs),
    /// The weak-norm separation families and Cwikel's example.
    Counterexample(CounterexampleArgs),
}

#[derive(Args, Serialize, Clone)]
struct CorpusArgs {
    /// dyadic, uniform, random-tree, rademacher, phi-family, xi-family.
    #[arg(long = "kind", id = "corpus_kind", value_name = "KIND", default_value = "dyadic")]
    kind: String,
    #[arg(long, default_value_t = 6)]
    depth: usize,
    #[arg(long, default_value_t = 2)]
    branching: usize,
    #[arg(long, default_value_t = 0.0)]
    skew: f64,
    /// gaussian, uniform, positive, sparse, heavy-tail.
    #[arg(long, default_value = "gaussian")]
    values: String,
    #[arg(long, default_value_t = 16)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Read instances from a corpus document instead of generating them.
    #[arg(long)]
    input: Option<PathBuf>,
}

impl CorpusArgs {
    fn spec(&self) -> Result<CorpusSpec, Failure> {
        let usage = |e: Error| Failure::Usage(e.to_string());
        Ok(CorpusSpec {
            kind: self.kind.parse().map_err(usage)?,
            depth: self.depth,
            max_branching: self.branching,
            skew: self.skew,
            values: self.values.parse().map_err(usage)?,
            count: self.count,
            seed: self.seed,
        })
    }

    fn instances(&self) -> Result<Vec<Instance>, Failure> {
        match &self.input {
            Some(path) => Ok(Document::load(path)?.body.instances()?),
            None => Ok(corpus(&self.spec()?)?),
        }
    }

    fn martingales(&self) -> Result<Vec<(usize, Martingale)>, Failure> {
        Ok(self
            .instances()?
            .into_iter()
            .filter_map(|i| i.martingale().ok().map(|m| (i.index, m.clone())))
            .collect())
    }

    /// Content hash of the input document, if any.
    fn input_hash(&self) -> Result<Option<String>, Failure> {
        self.input
            .as_ref()
            .map(|p| {
                std::fs::read(p)
                    .map(|bytes| output::config_hash(&bytes))
                    .map_err(|e| Failure::Input(format!("cannot read {}: {e}", p.display())))
            })
            .transpose()
    }
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum DecompositionKind {
    Davis,
    Gundy,
    Krickeberg,
    Corc,
    Regular,
}

/// `--kind` names the decomposition here, so the generator moves to `--generator`.
#[derive(Args, Serialize)]
#[command(mut_arg("corpus_kind", |a| a.long("generator").value_name("GENERATOR")))]
struct DecomposeArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long, value_enum)]
    kind: DecompositionKind,
    #[arg(long, default_value_t = 0)]
    instance: usize,
    /// Gundy threshold.
    #[arg(long)]
    lambda: Option<f64>,
    /// Regularity constant for `regular`; defaults to the tree's.
    #[arg(long = "k")]
    k: Option<f64>,
}

#[derive(Args, Serialize)]
struct NormsArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long = "p", value_delimiter = ',', default_values_t = [1.0, 2.0, 3.0])]
    p: Vec<f64>,
    /// paper or trivial: how the first conditional square term is read.
    #[arg(long, default_value = "paper")]
    csf: String,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Comma-separated check ids; all by default.
    #[arg(long, value_delimiter = ',')]
    checks: Vec<String>,
    #[arg(long = "p", value_delimiter = ',', default_values_t = [1.0, 1.5, 2.0, 3.0, 4.0])]
    p: Vec<f64>,
    #[arg(long, default_value = "dyadic", value_parser = ["dyadic"])]
    lambda_grid: String,
    /// Calibrated caps file.
    #[arg(long)]
    caps: Option<PathBuf>,
    /// Freeze this run's calibrated maxima into a caps file.
    #[arg(long)]
    calibrate: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum TheoremArg {
    A,
    B,
    Both,
}

#[derive(Args, Serialize)]
struct TraceArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long, value_enum, default_value = "both")]
    theorem: TheoremArg,
    #[arg(long, default_value = "dyadic", value_parser = ["dyadic"])]
    lambda_grid: String,
}

#[derive(Args, Serialize)]
struct SearchArgs {
    /// The filtration is instance 0's tree; `bminus` decomposes `--instance`.
    #[command(flatten)]
    corpus: CorpusArgs,
    /// theorem_a, theorem_b, corollary_c, gundy_ii, dual_doob[p=P] or bminus[p=P].
    #[arg(long)]
    objective: String,
    #[arg(long, default_value_t = 1000)]
    iterations: usize,
    #[arg(long, default_value_t = 4)]
    restarts: usize,
    #[arg(long, default_value_t = 0.5)]
    scale: f64,
    #[arg(long, default_value_t = 0.999)]
    decay: f64,
    #[arg(long, default_value_t = 0)]
    instance: usize,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Family {
    Phi,
    Xi,
    Cwikel,
}

#[derive(Args, Serialize)]
struct CounterexampleArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Family sizes for phi/xi.
    #[arg(long, value_delimiter = ',', default_values_t = [2, 10, 100, 1000])]
    m: Vec<usize>,
    #[arg(long = "p", default_value_t = 1.5)]
    p: f64,
    #[arg(long, default_value_t = 0.6)]
    alpha: f64,
    /// Truncations for cwikel.
    #[arg(long, value_delimiter = ',', default_values_t = [10, 100, 1000, 10000, 100000, 1000000])]
    ks: Vec<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let jobs = cli.jobs;
    match parallel::with_jobs(jobs, || run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Assertion(m) => eprintln!("assertion failed: {m}"),
                Failure::Usage(m) => eprintln!("usage error: {m}"),
                Failure::Input(m) => eprintln!("invalid input: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn sink<C: Serialize>(cli: &Cli, config: &C, corpus: Option<&CorpusArgs>) -> Result<Sink, Failure> {
    let input = match corpus {
        Some(c) => c.input_hash()?,
        None => None,
    };
    let hash = config_hash(&(config, input));
    Sink::new(cli.out.clone(), hash)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Gen(a) => gen(&sink(cli, &cli.command, Some(a))?, a),
        Command::Decompose(a) => decompose(&sink(cli, &cli.command, Some(&a.corpus))?, a),
        Command::Norms(a) => norms(&sink(cli, &cli.command, Some(&a.corpus))?, a),
        Command::Verify(a) => verify(&sink(cli, &cli.command, Some(&a.corpus))?, a),
        Command::Trace(a) => trace(&sink(cli, &cli.command, Some(&a.corpus))?, a),
        Command::Search(a) => search(&sink(cli, &cli.command, Some(&a.corpus))?, a),
        Command::Counterexample(a) => counterexample(&sink(cli, &cli.command, None)?, a),
    }
}

fn gen(sink: &Sink, a: &CorpusArgs) -> Result<(), Failure> {
    let spec = a.spec()?;
    let instances = a.instances()?;
    let path = sink.document("corpus.json", Body::corpus(&spec, &instances))?;
    let mut t = Table::new(["instance", "depth", "leaves", "regularity", "l1_norm"]);
    for i in &instances {
        let tree = i.sequence.tree();
        let l1 = i.martingale().map(|m| num(m.l1_norm())).unwrap_or_default();
        t.push(vec![
            i.index.to_string(),
            tree.depth().to_string(),
            tree.leaf_count().to_string(),
            num(regularity_constant(tree)),
            l1,
        ]);
    }
    sink.table("corpus.csv", &t)?;
    if let Some(p) = path {
        eprintln!("wrote {} instances to {}", instances.len(), p.display());
    }
    Ok(())
}

fn pick(a: &CorpusArgs, index: usize) -> Result<Martingale, Failure> {
    a.martingales()?
        .into_iter()
        .find(|(i, _)| *i == index)
        .map(|(_, m)| m)
        .ok_or_else(|| Failure::Input(format!("no martingale instance {index}")))
}

fn decompose(sink: &Sink, a: &DecomposeArgs) -> Result<(), Failure> {
    let f = pick(&a.corpus, a.instance)?;
    let (body, parts): (Body, Vec<(&str, Vec<Vec<f64>>)>) = match a.kind {
        DecompositionKind::Davis => {
            let p = davis(&f);
            (Body::Decomposition(DecompositionDoc::from_pair("davis", &f, &p)), vec![("dg", rows(&p.dg())), ("dh", rows(&p.dh()))])
        }
        DecompositionKind::Regular => {
            let k = a.k.unwrap_or_else(|| regularity_constant(f.tree()));
            let p = regular_davis(&f, k)?;
            (Body::Decomposition(DecompositionDoc::from_pair("regular", &f, &p)), vec![("dg", rows(&p.dg())), ("dh", rows(&p.dh()))])
        }
        DecompositionKind::Gundy => {
            let lambda = a.lambda.ok_or_else(|| Failure::Usage("gundy needs --lambda".into()))?;
            let t = gundy(&f, lambda)?;
            let parts = vec![
                ("dalpha", rows(&t.alpha.differences())),
                ("dbeta", rows(&t.beta.differences())),
                ("dgamma", rows(&t.gamma.differences())),
            ];
            (Body::Decomposition(DecompositionDoc::from_gundy(&f, &t)), parts)
        }
        DecompositionKind::Krickeberg => {
            let (pos, neg) = krickeberg(&f);
            let doc = DecompositionDoc {
                kind: "krickeberg".into(),
                f: MartingaleDoc::from_martingale(&f),
                lambda: None,
                parts: vec![
                    ("positive".into(), MartingaleDoc::from_martingale(&pos)),
                    ("negative".into(), MartingaleDoc::from_martingale(&neg)),
                ],
            };
            (Body::Decomposition(doc), vec![("positive", levels(&pos)), ("negative", levels(&neg))])
        }
        DecompositionKind::Corc => {
            let s = corollary_c_split(&f);
            let (dg, dh) = (rows(&s.dg), rows(&s.dh));
            (Body::Split { f: MartingaleDoc::from_martingale(&f), dg: dg.clone(), dh: dh.clone() }, vec![("dg", dg), ("dh", dh)])
        }
    };
    sink.document("decomposition.json", body)?;
    let mut t = Table::new(["part", "level", "atom", "value"]);
    for (name, levels) in parts {
        for (i, vals) in levels.iter().enumerate() {
            for (atom, v) in vals.iter().enumerate() {
                t.push(vec![name.to_string(), (i + 1).to_string(), atom.to_string(), num(*v)]);
            }
        }
    }
    sink.table("decomposition.csv", &t)
}

fn rows(fs: &[mgf_core::space::AdaptedFunction]) -> Vec<Vec<f64>> {
    fs.iter().map(|f| f.values().to_vec()).collect()
}

fn levels(f: &Martingale) -> Vec<Vec<f64>> {
    (1..=f.depth()).map(|k| f.level(k).values().to_vec()).collect()
}

fn norms(sink: &Sink, a: &NormsArgs) -> Result<(), Failure> {
    let mode: CsfMode = a.csf.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
    if let Some(p) = a.p.iter().find(|p| !(**p >= 1.0)) {
        return Err(Failure::Usage(format!("exponent p = {p} must be >= 1")));
    }
    let mut header = vec!["instance".to_string()];
    header.extend(a.p.iter().map(|p| format!("f_l{p}")));
    header.extend(["f_weak", "maximal_l1", "maximal_weak", "csf_l1", "csf_weak", "diff_diagonal_weak"].map(String::from));
    let fs = a.corpus.martingales()?;
    let lines: Vec<Result<Vec<String>, Error>> = parallel::map_slice(&fs, |(i, f)| {
        let tree = f.tree();
        let x = f.terminal();
        let star = f.maximal(f.depth())?;
        let s = conditional_square_function(f, mode);
        let mut row = vec![i.to_string()];
        for p in &a.p {
            row.push(num(norm(tree, x, *p)?));
        }
        row.extend([
            num(weak_norm(tree, x)),
            num(norm(tree, &star, 1.0)?),
            num(weak_norm(tree, &star)),
            num(norm(tree, &s, 1.0)?),
            num(weak_norm(tree, &s)),
            num(diagonal_weak_norm(tree, &f.differences()).value),
        ]);
        Ok(row)
    });
    let mut t = Table::new(header);
    for l in lines {
        t.push(l?);
    }
    sink.table("norms.csv", &t)
}

fn checks(names: &[String]) -> Result<Vec<SuiteCheck>, Failure> {
    if names.is_empty() {
        return Ok(SuiteCheck::ALL.to_vec());
    }
    names.iter().map(|n| n.parse::<SuiteCheck>().map_err(|e| Failure::Usage(e.to_string()))).collect()
}

fn verify(sink: &Sink, a: &VerifyArgs) -> Result<(), Failure> {
    let caps = match &a.caps {
        Some(p) => CapsTable::load(p)?,
        None => CapsTable::default(),
    };
    let config = SuiteConfig { checks: checks(&a.checks)?, p_values: a.p.clone() };
    let instances = a.corpus.instances()?;
    let report = run_suite_on(&instances, &config, &caps)?;

    let mut t = Table::new(["instance", "id", "lambda", "lhs", "rhs", "ratio", "cap", "provenance", "pass"]);
    for r in &report.rows {
        t.push(vec![
            r.instance.to_string(),
            r.id.clone(),
            opt(r.lambda),
            num(r.lhs),
            num(r.rhs),
            num(r.ratio),
            num(r.cap.value),
            r.cap.provenance.as_str().into(),
            r.pass.to_string(),
        ]);
    }
    sink.table("suite.csv", &t)?;
    let summary = summary_table(&report);
    sink.table("summary.csv", &summary)?;
    if sink.dir.is_some() {
        eprint!("{}", summary_text(&report));
    }
    sink.document("suite.json", Body::Suite(report.clone()))?;
    if let Some(path) = &a.calibrate {
        let corpus = match &a.corpus.input {
            Some(p) => format!("document {}", p.display()),
            None => serde_json::to_string(&a.corpus.spec()?).expect("spec serialises"),
        };
        std::fs::write(path, CapsTable::calibrate(&report, &corpus).to_json() + "\n")
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
    }

    for r in report.failures().iter().filter(|r| r.cap.provenance == CapProvenance::Calibrated) {
        eprintln!("warning: {} ratio {} exceeds calibrated cap {} at instance {}", r.id, r.ratio, r.cap.value, r.instance);
    }
    let paper = report.paper_failures();
    if paper.is_empty() {
        return Ok(());
    }
    let mut messages = Vec::new();
    for r in &paper {
        let witness = instances
            .iter()
            .find(|i| i.index == r.instance)
            .and_then(|i| i.martingale().ok())
            .map(|m| {
                let name = format!("witness-{}-{}.json", sanitize(&r.id), r.instance);
                sink.document(&name, Body::Martingale(MartingaleDoc::from_martingale(m)))
            })
            .transpose()?
            .flatten();
        let at = witness.map(|p| p.display().to_string()).unwrap_or_else(|| "(no --out)".into());
        messages.push(format!(
            "{} ratio {} > paper cap {} at instance {} lambda {} witness {at}",
            r.id,
            r.ratio,
            r.cap.value,
            r.instance,
            opt(r.lambda)
        ));
    }
    Err(Failure::Assertion(messages.join("\n")))
}

fn sanitize(id: &str) -> String {
    id.chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '.' { c } else { '-' }).collect()
}

fn summary_table(report: &SuiteReport) -> Table {
    let mut t =
        Table::new(["id", "count", "max_ratio", "median_ratio", "worst_instance", "worst_lambda", "cap", "provenance", "failures"]);
    for s in &report.summaries {
        t.push(vec![
            s.id.clone(),
            s.count.to_string(),
            num(s.max_ratio),
            num(s.median_ratio),
            s.worst_instance.map(|i| i.to_string()).unwrap_or_default(),
            opt(s.worst_lambda),
            num(s.cap.value),
            s.cap.provenance.as_str().into(),
            s.failures.to_string(),
        ]);
    }
    t
}

fn summary_text(report: &SuiteReport) -> String {
    let mut out = String::new();
    for s in &report.summaries {
        let status = if s.failures == 0 { "ok" } else { "FAIL" };
        out.push_str(&format!(
            "{status:4} {:32} n={:<6} max={:<12.6} cap={} ({})\n",
            s.id,
            s.count,
            s.max_ratio,
            s.cap.value,
            s.cap.provenance.as_str()
        ));
    }
    out
}

fn trace(sink: &Sink, a: &TraceArgs) -> Result<(), Failure> {
    let fs = a.corpus.martingales()?;
    let (run_a, run_b) = match a.theorem {
        TheoremArg::A => (true, false),
        TheoremArg::B => (false, true),
        TheoremArg::Both => (true, true),
    };
    let per: Vec<Result<Vec<(usize, usize, mgf_core::verify::ProofTrace)>, Error>> = parallel::map_slice(&fs, |(i, f)| {
        let mut out = Vec::new();
        for (part, g) in positive_parts(f).iter().enumerate() {
            for lambda in mgf_core::verify::dyadic_lambdas(g) {
                if run_a {
                    out.push((*i, part, proof_trace_theorem_a(g, lambda)?));
                }
                if run_b {
                    out.push((*i, part, proof_trace_theorem_b(g, lambda)?));
                }
            }
        }
        Ok(out)
    });
    let mut traces = Vec::new();
    for p in per {
        traces.extend(p?);
    }
    let mut t = Table::new(["instance", "part", "theorem", "lambda", "entry", "value", "scale", "constant", "bound", "ratio", "pass"]);
    let mut failed = Vec::new();
    for (i, part, tr) in &traces {
        let theorem = match tr.kind {
            mgf_core::verify::TraceKind::TheoremA => "a",
            mgf_core::verify::TraceKind::TheoremB => "b",
        };
        for e in &tr.entries {
            t.push(vec![
                i.to_string(),
                part.to_string(),
                theorem.into(),
                num(tr.lambda),
                e.name.clone(),
                num(e.value),
                num(e.scale),
                num(e.constant),
                num(e.bound),
                num(e.ratio()),
                e.pass.to_string(),
            ]);
            if !e.pass {
                failed.push(format!("{theorem}/{} at instance {i} part {part} lambda {}: {} > {}", e.name, tr.lambda, e.value, e.bound));
            }
        }
    }
    sink.table("traces.csv", &t)?;
    sink.document("traces.json", Body::Traces { traces: traces.into_iter().map(|(_, _, t)| t).collect() })?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Assertion(failed.join("\n")))
    }
}

fn search(sink: &Sink, a: &SearchArgs) -> Result<(), Failure> {
    let objective: Objective = a.objective.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
    let cfg = SearchConfig {
        objective,
        filtration: a.corpus.spec()?,
        iterations: a.iterations,
        restarts: a.restarts,
        initial_scale: a.scale,
        decay: a.decay,
        seed: a.corpus.seed,
        check_invariants: true,
    };
    let (result, f) = match objective {
        Objective::Bminus(p) => {
            let f = pick(&a.corpus, a.instance)?;
            (minimize_bminus(&f, p, &cfg)?, Some(f))
        }
        _ => (maximize_ratio(&cfg)?, None),
    };
    sink.document("search.json", Body::Search(SearchDoc::new(&cfg, &result, f.as_ref())?))?;
    let mut t = Table::new(["restart", "iteration", "value"]);
    for e in &result.log {
        t.push(vec![result.restart.to_string(), e.iteration.to_string(), num(e.value)]);
    }
    sink.table("search_log.csv", &t)?;
    eprintln!("{objective}: best {} (restart {}, {} accepted steps)", result.value, result.restart, result.log.len() - 1);
    Ok(())
}

fn counterexample(sink: &Sink, a: &CounterexampleArgs) -> Result<(), Failure> {
    match a.family {
        Family::Phi | Family::Xi => {
            let mut t = Table::new(["family", "m", "sum_weak", "diagonal_weak", "harmonic"]);
            for &m in &a.m {
                let r = counterexample_report(m)?;
                let (name, sum, diag) = match a.family {
                    Family::Phi => ("phi", r.phi_sum, r.phi_diagonal),
                    _ => ("xi", r.xi_sum, r.xi_diagonal),
                };
                t.push(vec![name.into(), m.to_string(), num(sum), num(diag), num(mgf_core::norms::harmonic(m))]);
            }
            sink.table("counterexample.csv", &t)
        }
        Family::Cwikel => {
            let r = cwikel_report(a.p, a.alpha, &a.ks)?;
            let mut t = Table::new(["k_max", "a0_norm_f1", "a1_sum", "lp_sum"]);
            for row in &r.rows {
                t.push(vec![row.k_max.to_string(), num(row.a0_norm_f1), num(row.a1_sum), num(row.lp_sum)]);
            }
            sink.table("cwikel.csv", &t)
        }
    }
}
