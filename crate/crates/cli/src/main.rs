//! `bvdef` command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage or domain errors, 2 when a check
//! runs to completion and fails (verification, invariance, conservativity).

use std::error::Error;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bvdef::action::{check_invariance, symmetric_generators, Permutation};
use bvdef::models::enumerate_models;
use bvdef::predicates::{check_extensionality, invariant_atoms, predicate_from_formula, union_of_atoms, Predicate};
use bvdef::space::{conservativity_report, Mode, Space};
use bvdef::syntax::{parse_formula, x_vars, Formula, Theory};
use bvdef::synthesis::{synthesize_definition, verify_definition, SynthesisError};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

type Result<T> = std::result::Result<T, Box<dyn Error>>;

/// Boolean-valued models of finite theories and definability of invariant predicates.
#[derive(Debug, Parser)]
#[command(name = "bvdef", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ClassArgs {
    /// Theory file (`relation`, `function`, `constant`, `axiom` lines).
    #[arg(long)]
    theory: PathBuf,
    /// Largest model size.
    #[arg(long)]
    max_size: usize,
}

#[derive(Debug, Args)]
struct SpaceArgs {
    #[command(flatten)]
    class: ClassArgs,
    /// Number of indices enumerated by each point.
    #[arg(long = "K")]
    k: usize,
    #[arg(long, default_value_t = Mode::Balanced)]
    mode: Mode,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the models of the theory up to isomorphism.
    Models {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the space of enumerated models.
    Space {
        #[command(flatten)]
        space: SpaceArgs,
        /// Include the point list.
        #[arg(long)]
        points: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a formula at index tuple `--xi`, or export it as a predicate
    /// in `y`/`y1..yn` with `--arity`.
    Eval {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        formula: String,
        /// Comma-separated indices bound to x1, x2, …
        #[arg(long, default_value = "")]
        xi: String,
        #[arg(long, conflicts_with = "xi")]
        arity: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a predicate for extensionality and invariance.
    Invariance {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        predicate: PathBuf,
        /// Random permutations checked besides the generators.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List invariant atoms, or export a union of them.
    Atoms {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, default_value_t = 1)]
        arity: usize,
        /// Comma-separated atom indices; the union is written to `--out`.
        #[arg(long, requires = "out")]
        union: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Synthesize a defining formula for a predicate.
    Synthesize {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        predicate: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a formula defines a predicate.
    Verify {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        predicate: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare "holds in every model" with "has value X" for sentences.
    Conservativity {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long = "formula")]
        formulas: Vec<String>,
        /// File with one sentence per line; `#` starts a comment.
        #[arg(long)]
        sentences: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm_up_to(n: usize) -> usize {
    (1..=n).fold(1, |acc, i| acc / gcd(acc, i) * i)
}

fn theory(args: &ClassArgs) -> Result<Theory> {
    Theory::load(&args.theory).map_err(|e| format!("{}: {e}", args.theory.display()).into())
}

fn build_space(args: &SpaceArgs) -> Result<Space> {
    let n = args.class.max_size;
    if args.mode == Mode::Balanced && !args.k.is_multiple_of(lcm_up_to(n)) {
        return Err(
            format!("balanced mode needs K divisible by lcm(1..{n}) = {}, got K = {}", lcm_up_to(n), args.k).into()
        );
    }
    let class = enumerate_models(&theory(&args.class)?, n)?;
    Ok(Space::build(class, args.k, args.mode)?)
}

fn parse_indices(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>().map_err(|_| format!("`{s}` is not an index").into()))
        .collect()
}

fn formula(space: &Space, text: &str) -> Result<Formula> {
    parse_formula(text, space.class().signature()).map_err(|e| format!("`{text}`: {e}").into())
}

fn emit(value: &Value, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()).into()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn success(ok: bool) -> u8 {
    if ok {
        0
    } else {
        2
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Models { class, out } => {
            let models = enumerate_models(&theory(&class)?, class.max_size)?;
            emit(&models.to_json(), out.as_deref())?;
            Ok(0)
        }
        Command::Space { space, points, out } => {
            let s = build_space(&space)?;
            emit(&s.to_json(points), out.as_deref())?;
            Ok(0)
        }
        Command::Eval { space, formula: text, xi, arity, out } => {
            let s = build_space(&space)?;
            let f = formula(&s, &text)?;
            if let Some(arity) = arity {
                let p = predicate_from_formula(&s, &f, arity)?;
                emit(&p.to_json(), out.as_deref())?;
                return Ok(0);
            }
            let xi = parse_indices(&xi)?;
            let value = s.evaluate_bound(&f, &x_vars(xi.len()), &xi)?;
            let report = json!({
                "formula": f.to_string(),
                "xi": xi,
                "space_hash": s.hash(),
                "size": value.len(),
                "points": value,
            });
            emit(&report, out.as_deref())?;
            Ok(0)
        }
        Command::Invariance { space, predicate, samples, seed, out } => {
            let s = build_space(&space)?;
            let p = Predicate::load(&predicate, &s)?;
            let mut perms = symmetric_generators(s.k())?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            perms.extend((0..samples).map(|_| Permutation::random(s.k(), &mut rng)));
            let ext = check_extensionality(&s, &p)?;
            let inv = check_invariance(&s, &p, &perms)?;
            let ok = ext.holds && inv.invariant;
            emit(&json!({ "extensional": ext, "invariance": inv }), out.as_deref())?;
            Ok(success(ok))
        }
        Command::Atoms { space, arity, union, out } => {
            let s = build_space(&space)?;
            let atoms = invariant_atoms(&s, arity)?;
            if let Some(selection) = union {
                let selection = parse_indices(&selection)?;
                if let Some(&bad) = selection.iter().find(|&&a| a >= atoms.len()) {
                    return Err(format!("atom {bad} out of range (there are {})", atoms.len()).into());
                }
                let p = union_of_atoms(&s, arity, &atoms, &selection)?;
                emit(&p.to_json(), out.as_deref())?;
                return Ok(0);
            }
            let list: Vec<Value> = atoms
                .iter()
                .enumerate()
                .map(|(i, a)| json!({ "index": i, "size": a.len(), "members": a.members() }))
                .collect();
            let report = json!({ "arity": arity, "space_hash": s.hash(), "count": atoms.len(), "atoms": list });
            emit(&report, out.as_deref())?;
            Ok(0)
        }
        Command::Synthesize { space, predicate, out } => {
            let s = build_space(&space)?;
            let p = Predicate::load(&predicate, &s)?;
            match synthesize_definition(&s, &p) {
                Ok(result) => {
                    emit(&result.to_json(), out.as_deref())?;
                    Ok(success(result.verified))
                }
                Err(SynthesisError::NotExtensional(v)) => {
                    emit(&json!({ "verified": false, "not_extensional": v }), out.as_deref())?;
                    Ok(2)
                }
                Err(SynthesisError::NotInvariant(v)) => {
                    emit(&json!({ "verified": false, "not_invariant": v }), out.as_deref())?;
                    Ok(2)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Verify { space, predicate, formula: text, out } => {
            let s = build_space(&space)?;
            let p = Predicate::load(&predicate, &s)?;
            let psi = formula(&s, &text)?;
            let report = verify_definition(&s, &p, &psi)?;
            emit(&json!(report), out.as_deref())?;
            Ok(success(report.holds))
        }
        Command::Conservativity { space, formulas, sentences, out } => {
            let s = build_space(&space)?;
            let mut texts = formulas;
            if let Some(path) = sentences {
                let body = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
                texts.extend(
                    body.lines()
                        .map(|l| l.split('#').next().unwrap_or("").trim())
                        .filter(|l| !l.is_empty())
                        .map(str::to_string),
                );
            }
            if texts.is_empty() {
                return Err("no sentences given (use --formula or --sentences)".into());
            }
            let sentences = texts.iter().map(|t| formula(&s, t)).collect::<Result<Vec<_>>>()?;
            let report = conservativity_report(&s, &sentences)?;
            emit(&report.to_json(), out.as_deref())?;
            Ok(success(report.all_agree()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
