//! `ckl`: check, derive and transform proofs in epistemic logic with
//! common knowledge.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ckl_core::derived;
use ckl_core::files::{read_proof, read_theory, write_proof};
use ckl_core::formula::expand_everyone;
use ckl_core::meta::{internalize, internalize_full, HypDerivation};
use ckl_core::oracle::{valid_on_small_models, Bounds, Verdict};
use ckl_core::puzzles::{self, muddy, wisemen, Variant};
use ckl_core::taut::is_tautology;
use ckl_core::{parse_formula, parse_group, Agent, Basis, Domain, Formula, Group, Theorem, Theory};

#[derive(Parser)]
#[command(
    name = "ckl",
    version,
    about = "Proof kernel for epistemic logic with common knowledge"
)]
struct Cli {
    /// Print one JSON record instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Render formulas in infix notation with agent names.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a proof file and print its conclusion.
    Check {
        proof: PathBuf,
        /// Theory file; defaults to the proof header.
        #[arg(long)]
        theory: Option<PathBuf>,
    },
    /// Run a derived-rule construction.
    Derive {
        /// One of: t_c, e_from_c, k_c, kg_c, four_c, fb, a10, a10_in_ck,
        /// fb_in_tec, a10_from_r10, internal_mp, internal_kg, internal_lfb.
        name: String,
        /// Comma-separated agent ids.
        #[arg(long, default_value = "")]
        group: String,
        /// Comma-separated formulas.
        #[arg(long, default_value = "")]
        args: String,
        /// Agent for internal_kg.
        #[arg(long)]
        agent: Option<u32>,
        #[arg(long, value_enum, default_value_t = BasisArg::Ck)]
        basis: BasisArg,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Turn a derivation from proper axioms into a theorem under common
    /// knowledge of those axioms.
    Internalize {
        proof: PathBuf,
        #[arg(long)]
        theory: Option<PathBuf>,
        /// Comma-separated axiom names to discharge.
        #[arg(long, default_value = "")]
        hyps: String,
        /// Comma-separated agents.
        #[arg(long)]
        group: String,
        /// Keep every hypothesis under C, without the final weakening.
        #[arg(long)]
        full: bool,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Rebuild a puzzle theorem.
    Puzzle {
        #[command(subcommand)]
        puzzle: PuzzleCommand,
    },
    /// Decide whether a formula is a propositional tautology.
    Taut { formula: String },
    /// Search small reflexive Kripke models for a countermodel.
    Refute {
        formula: String,
        #[arg(long, default_value_t = 3)]
        worlds: usize,
        #[arg(long, default_value_t = 2)]
        agents: usize,
        #[arg(long, default_value_t = 2)]
        atoms: usize,
    },
    /// Unfold shared knowledge into conjunctions of individual knowledge.
    Expand {
        formula: String,
        /// Expand `E_G formula` for this group instead.
        #[arg(long)]
        group: Option<String>,
    },
}

#[derive(Subcommand)]
enum PuzzleCommand {
    Wisemen {
        #[arg(long, value_enum)]
        result: WiseResult,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    Muddy {
        /// Number of children.
        #[arg(long)]
        children: u32,
        #[arg(long, conflicts_with = "final_")]
        round: Option<u32>,
        #[arg(long, value_enum, default_value_t = VariantArg::Axiom)]
        variant: VariantArg,
        /// The final theorem instead of one round.
        #[arg(long = "final")]
        final_: bool,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Ck,
    Tec,
    Tecprime,
}

impl From<BasisArg> for Basis {
    fn from(b: BasisArg) -> Basis {
        match b {
            BasisArg::Ck => Basis::Ck,
            BasisArg::Tec => Basis::Tec,
            BasisArg::Tecprime => Basis::TecPrime,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum WiseResult {
    First,
    Second,
    Corollary,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Axiom,
    Internal,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Axiom => Variant::Axiom,
            VariantArg::Internal => Variant::Internal,
        }
    }
}

#[derive(Serialize)]
struct Stats {
    nodes: u64,
    depth: usize,
    millis: u64,
}

#[derive(Serialize)]
struct ErrorRecord {
    code: String,
    path: Option<Vec<usize>>,
    message: String,
}

#[derive(Serialize)]
struct Record {
    ok: bool,
    conclusion: Option<String>,
    verdict: Option<String>,
    stats: Option<Stats>,
    error: Option<ErrorRecord>,
}

/// What a subcommand produced before formatting.
struct Outcome {
    ok: bool,
    conclusion: Option<String>,
    verdict: Option<String>,
    detail: Option<String>,
    proof: Option<(u64, usize)>,
}

impl Outcome {
    fn theorem(th: &Theorem, shown: String) -> Self {
        Outcome {
            ok: true,
            conclusion: Some(shown),
            verdict: None,
            detail: None,
            proof: Some((th.proof().tree_size(), th.proof().depth())),
        }
    }

    fn verdict(ok: bool, conclusion: String, verdict: &str, detail: Option<String>) -> Self {
        Outcome {
            ok,
            conclusion: Some(conclusion),
            verdict: Some(verdict.to_owned()),
            detail,
            proof: None,
        }
    }
}

struct Ctx {
    pretty: bool,
}

impl Ctx {
    fn show(&self, f: &Formula, domain: Option<&Domain>) -> String {
        if self.pretty {
            f.pretty(domain).to_string()
        } else {
            f.to_string()
        }
    }

    fn finish(&self, t: &Theory, th: &Theorem, emit: Option<&Path>) -> anyhow::Result<Outcome> {
        if let Some(path) = emit {
            fs::write(path, write_proof(t, th))
                .with_context(|| format!("cannot write {}", path.display()))?;
        }
        Ok(Outcome::theorem(
            th,
            self.show(th.conclusion(), Some(t.domain())),
        ))
    }
}

fn read_file(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_theory(path: &Path) -> anyhow::Result<Theory> {
    let text = read_file(path)?;
    let t = read_theory(&text).with_context(|| format!("in {}", path.display()))?;
    if t.domain().is_empty() && text.contains("(forall") {
        eprintln!(
            "warning: {} declares no agents; `forall` expands to true",
            path.display()
        );
    }
    Ok(t)
}

fn split_list(text: &str) -> Vec<&str> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect()
}

fn group_arg(text: &str, domain: Option<&Domain>) -> anyhow::Result<Group> {
    Ok(parse_group(
        &format!("({})", split_list(text).join(" ")),
        domain,
    )?)
}

fn formula_arg(text: &str) -> anyhow::Result<Formula> {
    Ok(parse_formula(text, None)?)
}

/// Reads a proof and the theory it is checked in.
fn load_proof(
    proof: &Path,
    theory: Option<&Path>,
) -> anyhow::Result<(ckl_core::files::ProofFile, Theory)> {
    let theory = theory.map(load_theory).transpose()?;
    let text = read_file(proof)?;
    let file = read_proof(&text, theory.as_ref().map(Theory::domain))
        .with_context(|| format!("in {}", proof.display()))?;
    let theory = match theory {
        Some(t) => t,
        None => file.default_theory()?,
    };
    Ok((file, theory))
}

const DERIVATIONS: &[(&str, usize)] = &[
    ("t_c", 1),
    ("e_from_c", 1),
    ("k_c", 2),
    ("kg_c", 1),
    ("four_c", 1),
    ("fb", 1),
    ("a10", 1),
    ("a10_in_ck", 1),
    ("fb_in_tec", 1),
    ("a10_from_r10", 1),
    ("internal_mp", 2),
    ("internal_kg", 1),
    ("internal_lfb", 2),
];

fn run_derivation(
    t: &Theory,
    name: &str,
    g: &Group,
    args: &[Formula],
    agent: Option<Agent>,
) -> anyhow::Result<Theorem> {
    let Some(&(_, arity)) = DERIVATIONS.iter().find(|(n, _)| *n == name) else {
        let names: Vec<_> = DERIVATIONS.iter().map(|(n, _)| *n).collect();
        bail!(Usage(format!(
            "unknown derivation `{name}`; expected one of {}",
            names.join(", ")
        )));
    };
    if args.len() != arity {
        bail!(Usage(format!(
            "`{name}` takes {arity} formula argument(s), got {}",
            args.len()
        )));
    }
    let a = &args[0];
    let th = match name {
        "t_c" => derived::t_c(t, g, a)?,
        "e_from_c" => derived::e_from_c(t, g, a)?,
        "k_c" => derived::k_c(t, g, a, &args[1])?,
        "kg_c" => derived::kg_c(t, g, &t.ax_taut(a)?)?,
        "four_c" => derived::four_c(t, g, a)?,
        "fb" => match t.basis() {
            Basis::Ck => t.ax_fb(g, a)?,
            _ => derived::fb_in_tec(t, g, a)?,
        },
        "a10" => derived::a10(t, g, a)?,
        "a10_in_ck" => derived::a10_in_ck(t, g, a)?,
        "fb_in_tec" => derived::fb_in_tec(t, g, a)?,
        "a10_from_r10" => derived::a10_from_r10(t, g, a)?,
        "internal_mp" => derived::internal_mp(t, g, a, &args[1])?,
        "internal_kg" => {
            let i = agent.ok_or_else(|| anyhow!(Usage("internal_kg needs --agent".into())))?;
            derived::internal_kg(t, g, i, a)?
        }
        "internal_lfb" => derived::internal_lfb(t, g, a, &args[1])?,
        _ => unreachable!("listed in DERIVATIONS"),
    };
    Ok(th)
}

#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let ctx = Ctx { pretty: cli.pretty };
    match &cli.command {
        Command::Check { proof, theory } => {
            let (file, t) = load_proof(proof, theory.as_deref())?;
            let th = file.check(&t)?;
            ctx.finish(&t, &th, None)
        }
        Command::Derive {
            name,
            group,
            args,
            agent,
            basis,
            emit,
        } => {
            let g = group_arg(group, None)?;
            let args = split_list(args)
                .into_iter()
                .map(formula_arg)
                .collect::<anyhow::Result<Vec<_>>>()?;
            let agent = agent.map(Agent);
            let top = g
                .members()
                .iter()
                .copied()
                .chain(agent)
                .chain(args.iter().flat_map(Formula::agents))
                .map(|a| a.id() + 1)
                .max()
                .unwrap_or(0);
            let t = Theory::new("derive", Domain::range(top), (*basis).into());
            let th = run_derivation(&t, name, &g, &args, agent)?;
            ctx.finish(&t, &th, emit.as_deref())
        }
        Command::Internalize {
            proof,
            theory,
            hyps,
            group,
            full,
            emit,
        } => {
            let (file, t) = load_proof(proof, theory.as_deref())?;
            let g = group_arg(group, Some(t.domain()))?;
            let d = HypDerivation::new(t, split_list(hyps), file.root.clone())?;
            let th = if *full {
                internalize_full(&d, &g)?
            } else {
                internalize(&d, &g)?
            };
            ctx.finish(&d.stripped_theory(), &th, emit.as_deref())
        }
        Command::Puzzle { puzzle } => match puzzle {
            PuzzleCommand::Wisemen { result, emit } => {
                let (t, th) = match result {
                    WiseResult::First => (wisemen::axiom_theory(), puzzles::wisemen_first()?),
                    WiseResult::Second => (wisemen::pure_theory(), puzzles::wisemen_second()?),
                    WiseResult::Corollary => (
                        wisemen::first_derivation()?.stripped_theory(),
                        puzzles::wisemen_corollary()?,
                    ),
                };
                ctx.finish(&t, &th, emit.as_deref())
            }
            PuzzleCommand::Muddy {
                children,
                round,
                variant,
                final_,
                emit,
            } => {
                let variant = Variant::from(*variant);
                let (t, th) = if *final_ {
                    (
                        muddy::final_theory(*children, variant)?,
                        puzzles::muddy_final(*children, variant)?,
                    )
                } else {
                    let p =
                        round.ok_or_else(|| anyhow!(Usage("give --round P or --final".into())))?;
                    let d = muddy::progress_derivation(*children, p)?;
                    match variant {
                        Variant::Axiom => {
                            let th = d.theory().check_proof(d.root())?;
                            (d.theory().clone(), th)
                        }
                        Variant::Internal => {
                            let th = internalize(&d, &muddy::children(*children))?;
                            (d.stripped_theory(), th)
                        }
                    }
                };
                ctx.finish(&t, &th, emit.as_deref())
            }
        },
        Command::Taut { formula } => {
            let f = formula_arg(formula)?;
            let yes = is_tautology(&f)?;
            let verdict = if yes { "tautology" } else { "not a tautology" };
            Ok(Outcome::verdict(yes, ctx.show(&f, None), verdict, None))
        }
        Command::Refute {
            formula,
            worlds,
            agents,
            atoms,
        } => {
            let f = formula_arg(formula)?;
            let bounds = Bounds {
                worlds: *worlds,
                agents: *agents,
                atoms: *atoms,
            };
            let verdict = valid_on_small_models(&f, bounds)?;
            let shown = ctx.show(&f, None);
            Ok(match &verdict {
                Verdict::Valid => Outcome::verdict(true, shown, "valid within bounds", None),
                Verdict::Countermodel { .. } => {
                    Outcome::verdict(false, shown, "countermodel", Some(verdict.to_string()))
                }
            })
        }
        Command::Expand { formula, group } => {
            let f = formula_arg(formula)?;
            let out = match group {
                Some(g) => expand_everyone(&group_arg(g, None)?, &f),
                None => f.unfold_everyone(),
            };
            Ok(Outcome {
                ok: true,
                conclusion: Some(ctx.show(&out, None)),
                verdict: None,
                detail: None,
                proof: None,
            })
        }
    }
}

/// Exit code and record for a failed run: 2 for unusable input, 1 for a
/// rejected proof.
fn failure(e: &anyhow::Error) -> (u8, ErrorRecord) {
    let message = format!("{e:#}");
    if let Some(core) = e.downcast_ref::<ckl_core::Error>() {
        use ckl_core::Error as E;
        let code = match core.innermost() {
            E::Parse(_)
            | E::Malformed(_)
            | E::OutOfRange(_)
            | E::ResourceLimit(_)
            | E::TautologyTooLarge { .. }
            | E::DuplicateAgent(_)
            | E::DuplicateAxiom(_) => 2,
            _ => 1,
        };
        let path = core.path().map(|p| p.0.clone());
        return (
            code,
            ErrorRecord {
                code: core.code().to_owned(),
                path,
                message,
            },
        );
    }
    let code = if e.downcast_ref::<Usage>().is_some() {
        "Usage"
    } else {
        "Io"
    };
    (
        2,
        ErrorRecord {
            code: code.to_owned(),
            path: None,
            message,
        },
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(&cli);
    let millis = start.elapsed().as_millis() as u64;
    let (exit, record, detail) = match result {
        Ok(out) => {
            let stats = out.proof.map(|(nodes, depth)| Stats {
                nodes,
                depth,
                millis,
            });
            let record = Record {
                ok: out.ok,
                conclusion: out.conclusion,
                verdict: out.verdict,
                stats,
                error: None,
            };
            (if out.ok { 0 } else { 1 }, record, out.detail)
        }
        Err(e) => {
            let (exit, err) = failure(&e);
            let record = Record {
                ok: false,
                conclusion: None,
                verdict: None,
                stats: None,
                error: Some(err),
            };
            (exit, record, None)
        }
    };
    if cli.json {
        println!(
            "{}",
            serde_json::to_string(&record).expect("record serializes")
        );
    } else {
        if let Some(c) = &record.conclusion {
            println!("{c}");
        }
        if let Some(v) = &record.verdict {
            println!("{v}");
        }
        if let Some(d) = detail {
            print!("{d}");
        }
        if let Some(err) = &record.error {
            eprintln!("error: {}", err.message);
        }
    }
    ExitCode::from(exit)
}
