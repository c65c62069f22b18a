//! `fpsrw`: command-line front end for truncated power-series rewriting.
//!
//! Exit status is 0 whenever a result was computed, including negative
//! answers (not a member, divergence, failed check), and 1 on usage, parse,
//! configuration or precision errors.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use fps_rewrite::cofactor::verify_cofactor_identity;
use fps_rewrite::confluence::{check_standard_basis, join, JoinResult};
use fps_rewrite::oracle::{cross_validate, MembershipOracle, DEFAULT_SEED};
use fps_rewrite::tars;
use fps_rewrite::{
    limit_coefficients, Coeff, MembershipVerdict, Monomial, ReductionResult, RewriteStep,
    RewriteSystem, Ring, Series, SystemConfig, TieBreak,
};

#[derive(Parser, Debug)]
#[command(name = "fpsrw", version, about = "Rewriting on truncated formal power series")]
struct Cli {
    /// Emit the structured record as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct SystemArgs {
    /// JSON system file: {vars, order, field, generators, precision}.
    #[arg(long)]
    system: PathBuf,
    /// Working precision D; defaults to the system file's value.
    #[arg(long)]
    precision: Option<u32>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Tie {
    Smallest,
    Largest,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduce a series to a normal form modulo (X)^D with the leading strategy.
    Reduce {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        input: String,
        /// Generator choice when several leading monomials divide.
        #[arg(long, value_enum, default_value = "smallest")]
        tie: Tie,
    },
    /// Decide membership in I + (X)^D.
    Member {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        input: String,
    },
    /// Membership with the full cofactor trace.
    Cofactor {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        input: String,
    },
    /// Join two series by rewriting the leading difference on both sides.
    Join {
        #[command(flatten)]
        sys: SystemArgs,
        g: String,
        h: String,
    },
    /// Check modulo (X)^D that all S-series reduce to zero.
    CheckSb {
        #[command(flatten)]
        sys: SystemArgs,
    },
    /// Adic distance between two series.
    Delta {
        #[arg(long)]
        system: PathBuf,
        f: String,
        g: String,
    },
    /// Abstract topological rewriting systems.
    Tars {
        #[command(subcommand)]
        command: TarsCommand,
    },
    /// Linear-algebra membership oracle.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Print the version.
    Version,
}

#[derive(Subcommand, Debug)]
enum TarsCommand {
    /// Refute infinitary confluence of a built-in system.
    Demo {
        #[arg(value_parser = ["cyclic", "nbar"])]
        system: String,
        /// Resolution, as 2^-k or a positive rational.
        #[arg(long, default_value = "2^-10")]
        eps: String,
        #[arg(long, default_value_t = 1000)]
        max_steps: usize,
    },
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    /// Solve membership by Gaussian elimination.
    Member {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        input: String,
    },
    /// Compare reduction verdicts with the oracle on random inputs.
    CrossValidate {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

struct Loaded {
    ring: Ring,
    sys: RewriteSystem,
    precision: u32,
}

fn load(path: &PathBuf, precision: Option<u32>) -> Result<Loaded> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading system file {}", path.display()))?;
    let cfg = SystemConfig::from_json(&text)?;
    let (ring, sys) = cfg.build()?;
    let precision = precision.unwrap_or(cfg.precision);
    if precision == 0 {
        anyhow::bail!("InvalidArgument: precision must be at least 1");
    }
    Ok(Loaded { ring, sys, precision })
}

impl SystemArgs {
    fn load(&self) -> Result<Loaded> {
        load(&self.system, self.precision)
    }
}

/// One trace line in JSON: a rewrite step with its position.
#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
struct TraceEntry {
    k: usize,
    monomial: Monomial,
    generator: usize,
    quotient: Monomial,
    coeff: Coeff,
}

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
struct ReduceRecord {
    precision: u32,
    normal_form: Series,
    trace: Vec<TraceEntry>,
    cofactors: Vec<Series>,
}

impl From<ReductionResult> for ReduceRecord {
    fn from(r: ReductionResult) -> Self {
        ReduceRecord {
            precision: r.precision,
            normal_form: r.normal_form,
            trace: r
                .steps
                .into_iter()
                .enumerate()
                .map(|(k, s)| TraceEntry {
                    k,
                    monomial: s.monomial,
                    generator: s.generator,
                    quotient: s.quotient,
                    coeff: s.coeff,
                })
                .collect(),
            cofactors: r.cofactors,
        }
    }
}

impl From<ReduceRecord> for ReductionResult {
    fn from(r: ReduceRecord) -> Self {
        ReductionResult {
            precision: r.precision,
            normal_form: r.normal_form,
            steps: r
                .trace
                .into_iter()
                .map(|t| RewriteStep {
                    monomial: t.monomial,
                    generator: t.generator,
                    quotient: t.quotient,
                    coeff: t.coeff,
                })
                .collect(),
            cofactors: r.cofactors,
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

fn step_line(out: &mut String, l: &Loaded, k: usize, step: &RewriteStep) {
    let g = &l.sys.generators()[step.generator];
    let _ = writeln!(
        out,
        "  {k}: {}  via s{} = {}  q = {}  coeff {}",
        l.ring.render_monomial(&step.monomial),
        step.generator,
        l.ring.render(g.series()),
        l.ring.render_monomial(&step.quotient),
        step.coeff
    );
}

fn cofactor_lines(out: &mut String, l: &Loaded, cofactors: &[Series], certified: Option<&[u32]>) {
    for (i, c) in cofactors.iter().enumerate() {
        let _ = write!(out, "  f{i} = {}", l.ring.render(c));
        if let Some(p) = certified.and_then(|p| p.get(i)) {
            let _ = write!(out, "  (final mod (X)^{p})");
        }
        out.push('\n');
    }
}

fn run(cli: Cli) -> Result<String> {
    let json = cli.json;
    let mut out = String::new();
    match cli.command {
        Command::Reduce { sys, input, tie } => {
            let l = sys.load()?;
            let f = l.ring.parse(&input)?;
            let tie = match tie {
                Tie::Smallest => TieBreak::SmallestIndex,
                Tie::Largest => TieBreak::LargestIndex,
            };
            let res = l.sys.reduce_with(&f, l.precision, tie)?;
            if json {
                return to_json(&ReduceRecord::from(res));
            }
            let _ = writeln!(out, "{}", l.ring.render_residue(&res.normal_form));
            let _ = writeln!(out, "trace ({} steps):", res.steps.len());
            for (k, s) in res.steps.iter().enumerate() {
                step_line(&mut out, &l, k, s);
            }
            out.push_str("cofactors:\n");
            cofactor_lines(&mut out, &l, &res.cofactors, None);
        }
        Command::Member { sys, input } => {
            let l = sys.load()?;
            let f = l.ring.parse(&input)?;
            let verdict = limit_coefficients(&f, &l.sys, l.precision)?;
            if json {
                #[derive(Serialize)]
                struct MemberRecord {
                    precision: u32,
                    member: bool,
                    #[serde(skip_serializing_if = "Option::is_none")]
                    irreducible: Option<Monomial>,
                }
                let irreducible = match &verdict {
                    MembershipVerdict::NotInIdealModD { irreducible, .. } => Some(irreducible.clone()),
                    MembershipVerdict::InIdealModD { .. } => None,
                };
                return to_json(&MemberRecord {
                    precision: l.precision,
                    member: verdict.is_member(),
                    irreducible,
                });
            }
            member_text(&mut out, &l, &verdict);
        }
        Command::Cofactor { sys, input } => {
            let l = sys.load()?;
            let f = l.ring.parse(&input)?;
            let verdict = limit_coefficients(&f, &l.sys, l.precision)?;
            if json {
                return to_json(&verdict);
            }
            member_text(&mut out, &l, &verdict);
            if let MembershipVerdict::InIdealModD { cofactors, certified, .. } = &verdict {
                cofactor_lines(&mut out, &l, cofactors, Some(certified));
                let ok = verify_cofactor_identity(&f, &verdict, &l.sys, l.precision);
                let _ = writeln!(out, "identity check: {}", if ok { "ok" } else { "FAILED" });
            }
            let trace = verdict.trace();
            let _ = writeln!(out, "trace ({} rounds):", trace.records.len());
            for r in &trace.records {
                let step = RewriteStep {
                    monomial: r.monomial.clone(),
                    generator: r.generator,
                    quotient: r.quotient.clone(),
                    coeff: r.coeff.clone(),
                };
                step_line(&mut out, &l, r.k, &step);
            }
        }
        Command::Join { sys, g, h } => {
            let l = sys.load()?;
            let res = join(&l.ring.parse(&g)?, &l.ring.parse(&h)?, &l.sys, l.precision)?;
            if json {
                return to_json(&res);
            }
            match &res {
                JoinResult::Joined { precision, common, .. } => {
                    let _ = writeln!(
                        out,
                        "JOINED mod (X)^{precision}: {}",
                        l.ring.render(common)
                    );
                }
                JoinResult::Diverged { monomial, g, h, .. } => {
                    let _ = writeln!(
                        out,
                        "DIVERGED at irreducible {}\n  g = {}\n  h = {}",
                        l.ring.render_monomial(monomial),
                        l.ring.render_residue(g),
                        l.ring.render_residue(h)
                    );
                }
            }
            let _ = writeln!(out, "rounds ({}):", res.rounds().len());
            for (k, r) in res.rounds().iter().enumerate() {
                let _ = writeln!(
                    out,
                    "  {k}: {}  via s{}  q = {}  g-coeff {}  h-coeff {}",
                    l.ring.render_monomial(&r.monomial),
                    r.generator,
                    l.ring.render_monomial(&r.quotient),
                    r.g_coeff,
                    r.h_coeff
                );
            }
        }
        Command::CheckSb { sys } => {
            let l = sys.load()?;
            let report = check_standard_basis(&l.sys, l.precision)?;
            if json {
                return to_json(&report);
            }
            let n = report.pairs.len();
            if report.passed {
                let _ = writeln!(out, "PASS ({n} pairs)");
            } else {
                let bad = report.failures().count();
                let _ = writeln!(out, "FAIL ({bad} of {n} pairs)");
            }
            for p in &report.pairs {
                let _ = write!(
                    out,
                    "  S({},{}) = {}  ->  {}",
                    p.i,
                    p.j,
                    l.ring.render(&p.s_series),
                    l.ring.render_residue(&p.normal_form)
                );
                if let Some(w) = &p.witness {
                    let _ = write!(out, "  witness {}", l.ring.render_monomial(w));
                }
                out.push('\n');
            }
        }
        Command::Delta { system, f, g } => {
            let l = load(&system, None)?;
            let d = l.ring.parse(&f)?.delta(&l.ring.parse(&g)?)?;
            if json {
                return to_json(&d);
            }
            let _ = writeln!(out, "{d}");
        }
        Command::Tars {
            command: TarsCommand::Demo { system, eps, max_steps },
        } => {
            let eps = tars::parse_eps(&eps)?;
            let report = tars::demo(&system, &eps, max_steps)?;
            if json {
                return to_json(&report);
            }
            let [b, c] = &report.normal_forms;
            let _ = writeln!(
                out,
                "{}: {} from {} towards {b} and {c} at eps = {}",
                report.system,
                if report.refuted { "REFUTED (not infinitary confluent)" } else { "INCONCLUSIVE" },
                report.source,
                report.eps
            );
            if let Some(paths) = &report.paths {
                for (nf, p) in report.normal_forms.iter().zip(paths) {
                    let _ = writeln!(out, "  ~> {nf} ({} steps): {}", p.len() - 1, p.join(" -> "));
                }
            }
            if let Some(reason) = &report.reason {
                let _ = writeln!(out, "  {reason}");
            }
        }
        Command::Oracle {
            command: OracleCommand::Member { sys, input },
        } => {
            let l = sys.load()?;
            let f = l.ring.parse(&input)?;
            let oracle = MembershipOracle::new(&l.sys, l.precision)?;
            let solution = oracle.solve(&f)?;
            if json {
                return to_json(&solution);
            }
            let (rows, cols) = (oracle.matrix().rows().len(), oracle.matrix().columns().len());
            let _ = writeln!(
                out,
                "{} I + (X)^{}  ({rows} rows, {cols} columns, rank {})",
                if solution.is_some() { "IN" } else { "NOT IN" },
                l.precision,
                oracle.rank()
            );
            if let Some(s) = &solution {
                cofactor_lines(&mut out, &l, &s.cofactors, None);
            }
        }
        Command::Oracle {
            command: OracleCommand::CrossValidate { sys, trials, seed },
        } => {
            let l = sys.load()?;
            let report = cross_validate(&l.sys, l.precision, trials, seed)?;
            if json {
                return to_json(&report);
            }
            let _ = writeln!(
                out,
                "{} comparisons ({} trials, seed {seed}, D = {}): {} members, {} disagreements",
                report.comparisons,
                report.trials,
                report.precision,
                report.members_found,
                report.disagreements.len()
            );
            for d in &report.disagreements {
                let _ = writeln!(
                    out,
                    "  {:?}: {} (reduction {}, oracle {})",
                    d.class,
                    l.ring.render(&d.input),
                    d.reduction_member,
                    d.oracle_member
                );
            }
        }
        Command::Version => {
            let _ = writeln!(out, "fpsrw {}", env!("CARGO_PKG_VERSION"));
        }
    }
    Ok(out)
}

fn member_text(out: &mut String, l: &Loaded, verdict: &MembershipVerdict) {
    match verdict {
        MembershipVerdict::InIdealModD { .. } => {
            let _ = writeln!(out, "IN I + (X)^{}", l.precision);
        }
        MembershipVerdict::NotInIdealModD { residual, irreducible, .. } => {
            let _ = writeln!(
                out,
                "NOT IN I + (X)^{}: residual {} has irreducible leading monomial {}",
                l.precision,
                l.ring.render_residue(residual),
                l.ring.render_monomial(irreducible)
            );
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            if !out.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
