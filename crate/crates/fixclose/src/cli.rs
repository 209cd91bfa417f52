//! Command-line front end.
//!
//! Exit status: 0 for a definitive answer, 1 for usage or input errors, 2 for
//! evidence-only or otherwise inconclusive results, 3 when a search cap is hit.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use fixclose_core::closure::{self, audit, reduce_witnesses};
use fixclose_core::extensions::{algebraic_extensions, fringe, is_free_factor};
use fixclose_core::fixpoints::{find_retraction, fix_approx, reduce_family, stable_image};
use fixclose_core::whitehead::stabilizer_generators;
use fixclose_core::{
    Alphabet, Answer, Budget, Error, ExtensionSet, Morphism, RetractionSearch, SubgroupGraph, Word,
};

use crate::dot::to_dot;
use crate::formats::{
    alphabet, format_basis, format_morphisms, inferred_rank, parse_gens_file, parse_morphisms,
    parse_word_list, FormatError,
};
use crate::report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Longest fixed-word enumeration the CLI will attempt.
pub const MAX_FIXED_LEN: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Structured,
    Dot,
}

#[derive(Debug, Parser)]
#[command(
    name = "fixclose",
    version,
    about = "Fixed subgroups of free groups: auto-fixed and endo-fixed tests"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct InputArgs {
    /// Rank of the ambient free group (inferred from the input when omitted).
    #[arg(long, global = true)]
    pub rank: Option<usize>,
    /// Generators of H, comma separated (`1` or empty for the trivial subgroup).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gens: Option<String>,
    /// File with one generator of H per line.
    #[arg(long, global = true)]
    pub gens_file: Option<PathBuf>,
    /// Generators of the second subgroup for `intersect` and `freefactor`.
    #[arg(long, global = true)]
    pub with: Option<String>,
    /// File of morphisms (`x -> word` lines, blank line between morphisms).
    #[arg(long, global = true)]
    pub morphism_file: Option<PathBuf>,
    /// Inline morphism such as `a->a;b->ab`; repeatable.
    #[arg(long, global = true)]
    pub morphism: Vec<String>,
    /// Word argument for `member` and `acl-member`.
    #[arg(long, global = true)]
    pub word: Option<String>,
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_len: Option<u64>,
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub fringe_cap: Option<u64>,
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub retraction_bound: Option<u64>,
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_iter: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Canonical folded core graph of H.
    Fold,
    /// Whether `--word` lies in H.
    Member,
    /// Free basis of H read off a spanning tree.
    Basis,
    /// H intersected with the subgroup given by `--with`.
    Intersect,
    /// Fringe of H: every quotient of its core graph.
    Fringe,
    /// Algebraic extensions of H.
    Ae,
    /// Whether H is a free factor of the subgroup given by `--with`.
    Freefactor,
    /// Generators of the automorphisms fixing H pointwise.
    Stab,
    /// Fixed subgroup of the given morphisms, up to `--max-len`.
    Fix,
    /// Stable image of one morphism.
    StableImage,
    /// Search for a retraction of F onto H.
    Retract,
    /// Whether `--word` lies in the auto-closure of H.
    AclMember,
    /// Decide whether H is the fixed subgroup of a family of automorphisms.
    AutoFixed,
    /// Decide whether H is the fixed subgroup of a family of endomorphisms.
    EndoFixed,
    /// Thin a morphism family without changing its bounded fixed words.
    ReduceFamily,
    /// Re-check a structured verdict report.
    Audit {
        /// Report file produced with `--format structured`.
        report: PathBuf,
    },
}

/// Everything a command needs besides its inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    pub alphabet: Alphabet,
    pub budget: Budget,
    pub format: Format,
}

/// A command failure together with its exit status.
#[derive(Debug)]
struct Failure {
    status: i32,
    message: String,
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure {
            status: EXIT_INPUT,
            message: e.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Budget { .. } => EXIT_BUDGET,
            Error::Inconclusive(_) => EXIT_INCONCLUSIVE,
            _ => EXIT_INPUT,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        status: EXIT_INPUT,
        message: message.into(),
    }
}

/// Output of a successful command.
struct Outcome {
    status: i32,
    text: String,
}

fn done(status: i32, text: String) -> Result<Outcome, Failure> {
    Ok(Outcome { status, text })
}

/// Parsed command inputs.
struct Inputs {
    gens: Option<Vec<Word>>,
    with: Option<Vec<Word>>,
    morphisms: Vec<Morphism>,
    word: Option<Word>,
}

fn read_file(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn load(args: &InputArgs) -> Result<(Inputs, RunConfig), Failure> {
    let rank = args.rank;
    if let Some(r) = rank {
        alphabet(r).map_err(input_error)?;
    }
    let mut gens = match (&args.gens, &args.gens_file) {
        (Some(_), Some(_)) => {
            return Err(input_error("give either --gens or --gens-file, not both"))
        }
        (Some(g), None) => Some(parse_word_list(g, rank, "--gens")?),
        (None, Some(p)) => Some(parse_gens_file(
            &read_file(p)?,
            rank,
            &p.display().to_string(),
        )?),
        (None, None) => None,
    };
    let with = args
        .with
        .as_deref()
        .map(|t| parse_word_list(t, rank, "--with"))
        .transpose()?;
    let word = args
        .word
        .as_deref()
        .map(|t| parse_word_list(t, rank, "--word"))
        .transpose()?;
    let word = match word {
        Some(mut ws) if ws.len() == 1 => Some(ws.remove(0)),
        Some(_) => return Err(input_error("--word takes exactly one word")),
        None => None,
    };
    let mut texts: Vec<(String, String)> = Vec::new();
    if let Some(p) = &args.morphism_file {
        texts.push((read_file(p)?, p.display().to_string()));
    }
    for m in &args.morphism {
        texts.push((m.replace(';', "\n"), String::from("--morphism")));
    }

    let mut used: Vec<&Word> = Vec::new();
    used.extend(gens.iter().flatten());
    used.extend(with.iter().flatten());
    used.extend(word.iter());
    let rank = match rank {
        Some(r) => r,
        None => {
            // Morphisms fix the rank through the letters they map, so parse them once untyped.
            let mut r = inferred_rank(used);
            for (t, src) in &texts {
                for m in parse_morphisms(t, None, src)? {
                    r = r.max(m.rank());
                }
            }
            r
        }
    };
    let alpha = alphabet(rank).map_err(input_error)?;
    let mut morphisms = Vec::new();
    for (t, src) in &texts {
        morphisms.extend(parse_morphisms(t, Some(rank), src)?);
    }
    if let Some(g) = gens.as_mut() {
        g.retain(|w| !w.is_empty());
    }
    for w in gens
        .iter()
        .flatten()
        .chain(with.iter().flatten())
        .chain(word.iter())
    {
        alpha.check(w).map_err(|e| input_error(e.to_string()))?;
    }
    let mut budget = Budget::default();
    let set = |slot: &mut usize, v: Option<u64>| {
        if let Some(v) = v {
            *slot = usize::try_from(v).unwrap_or(usize::MAX);
        }
    };
    set(&mut budget.max_len, args.max_len);
    set(&mut budget.fringe_cap, args.fringe_cap);
    set(&mut budget.retraction_bound, args.retraction_bound);
    set(&mut budget.max_iter, args.max_iter);
    let config = RunConfig {
        alphabet: alpha,
        budget,
        format: args.format,
    };
    Ok((
        Inputs {
            gens,
            with,
            morphisms,
            word,
        },
        config,
    ))
}

impl Inputs {
    fn h(&self, alpha: Alphabet) -> Result<SubgroupGraph, Failure> {
        let gens = self
            .gens
            .as_ref()
            .ok_or_else(|| input_error("this command needs --gens or --gens-file"))?;
        Ok(SubgroupGraph::from_generators(alpha, gens)?)
    }

    fn k(&self, alpha: Alphabet) -> Result<SubgroupGraph, Failure> {
        let gens = self
            .with
            .as_ref()
            .ok_or_else(|| input_error("this command needs --with"))?;
        Ok(SubgroupGraph::from_generators(alpha, gens)?)
    }

    fn word(&self) -> Result<&Word, Failure> {
        self.word
            .as_ref()
            .ok_or_else(|| input_error("this command needs --word"))
    }

    fn morphisms(&self) -> Result<&[Morphism], Failure> {
        if self.morphisms.is_empty() {
            return Err(input_error(
                "this command needs --morphism-file or --morphism",
            ));
        }
        Ok(&self.morphisms)
    }
}

fn subgroup_out(h: &SubgroupGraph, key: &str, format: Format) -> String {
    match format {
        Format::Text => format!("{}\n", format_basis(h)),
        Format::Structured => {
            format!(
                "{key}: {}\nrank: {}\nvertices: {}\n",
                format_basis(h),
                h.rank(),
                h.vertex_count()
            )
        }
        Format::Dot => to_dot(h, key),
    }
}

fn yes_no(key: &str, value: bool, format: Format) -> String {
    match format {
        Format::Structured => format!("{key}: {value}\n"),
        _ => format!("{}\n", if value { "yes" } else { "no" }),
    }
}

fn extension_out(set: &ExtensionSet, format: Format) -> String {
    let mut s = String::new();
    for (i, m) in set.members.iter().enumerate() {
        match format {
            Format::Text => {
                let _ = writeln!(s, "{}", format_basis(m));
            }
            Format::Structured => {
                let _ = writeln!(s, "member: {}", format_basis(m));
            }
            Format::Dot => s.push_str(&to_dot(m, &format!("H{i}"))),
        }
    }
    s
}

fn morphisms_out(ms: &[Morphism], key: &str, format: Format) -> String {
    match format {
        Format::Structured => {
            let mut s = String::new();
            for m in ms {
                let _ = writeln!(s, "{key}:");
                for line in m.to_string().lines() {
                    let _ = writeln!(s, "  {line}");
                }
            }
            s
        }
        _ if ms.is_empty() => String::new(),
        _ => format!("{}\n", format_morphisms(ms)),
    }
}

fn verdict_out(v: &fixclose_core::Verdict, format: Format) -> Result<Outcome, Failure> {
    let text = match format {
        Format::Structured => report::structured(v),
        Format::Text => report::text(v),
        Format::Dot => to_dot(&v.closure_bound, "closure_bound"),
    };
    let status = if v.answer == Answer::Evidence {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    };
    done(status, text)
}

fn execute(command: &Command, inputs: &Inputs, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let alpha = cfg.alphabet;
    let budget = &cfg.budget;
    let format = cfg.format;
    match command {
        Command::Fold => {
            let h = inputs.h(alpha)?;
            let text = match format {
                Format::Text => {
                    let mut s = format!("vertices: {}\n", h.vertex_count());
                    for (a, x, b) in h.edges() {
                        let _ = writeln!(s, "{a} -{x}-> {b}");
                    }
                    s
                }
                _ => subgroup_out(&h, "subgroup", format),
            };
            done(EXIT_OK, text)
        }
        Command::Member => {
            let h = inputs.h(alpha)?;
            done(
                EXIT_OK,
                yes_no("member", h.contains(inputs.word()?), format),
            )
        }
        Command::Basis => done(EXIT_OK, subgroup_out(&inputs.h(alpha)?, "basis", format)),
        Command::Intersect => {
            let i = inputs.h(alpha)?.intersect(&inputs.k(alpha)?)?;
            done(EXIT_OK, subgroup_out(&i, "intersection", format))
        }
        Command::Fringe => done(
            EXIT_OK,
            extension_out(&fringe(&inputs.h(alpha)?, budget.fringe_cap)?, format),
        ),
        Command::Ae => done(
            EXIT_OK,
            extension_out(&algebraic_extensions(&inputs.h(alpha)?, budget)?, format),
        ),
        Command::Freefactor => {
            let ff = is_free_factor(&inputs.h(alpha)?, &inputs.k(alpha)?, budget)?;
            done(EXIT_OK, yes_no("free-factor", ff, format))
        }
        Command::Stab => {
            let h = inputs.h(alpha)?;
            let gens = stabilizer_generators(alpha, &h.basis(), &budget.whitehead)?;
            done(EXIT_OK, morphisms_out(&gens, "generator", format))
        }
        Command::Fix => {
            if budget.max_len > MAX_FIXED_LEN {
                return Err(Error::Budget {
                    cap: fixclose_core::Cap::FixedWordLength,
                    limit: MAX_FIXED_LEN,
                    needed: budget.max_len,
                }
                .into());
            }
            let fa = fix_approx(
                inputs.morphisms()?,
                budget.max_len,
                MAX_FIXED_LEN,
                budget.max_iter,
            )?;
            let mut text = subgroup_out(&fa.subgroup, "fix", format);
            if format == Format::Structured {
                let _ = writeln!(text, "exact: {}", fa.exact);
                let rules: Vec<String> = fa.rules.iter().map(ToString::to_string).collect();
                let _ = writeln!(text, "rules: {}", rules.join(" "));
            } else if format == Format::Text && !fa.exact {
                text.push_str("# lower bound only: fixed words up to the length bound\n");
            }
            done(if fa.exact { EXIT_OK } else { EXIT_INCONCLUSIVE }, text)
        }
        Command::StableImage => {
            let [m] = inputs.morphisms()? else {
                return Err(input_error("stable-image takes exactly one morphism"));
            };
            let r = stable_image(m, budget.max_iter);
            let mut text = subgroup_out(&r.subgroup, "stable-image", format);
            if format == Format::Structured {
                let _ = writeln!(
                    text,
                    "iterations: {}\nstabilized: {}",
                    r.iterations, r.stabilized
                );
            }
            done(
                if r.stabilized {
                    EXIT_OK
                } else {
                    EXIT_INCONCLUSIVE
                },
                text,
            )
        }
        Command::Retract => {
            let h = inputs.h(alpha)?;
            match find_retraction(&h, budget.retraction_bound, budget.retraction_nodes) {
                RetractionSearch::Found(rho) => {
                    done(EXIT_OK, morphisms_out(&[rho], "retraction", format))
                }
                RetractionSearch::NotFound { bound } => done(
                    EXIT_INCONCLUSIVE,
                    format!("no retraction with images of length at most {bound}\n"),
                ),
                RetractionSearch::Truncated { bound } => Err(Failure {
                    status: EXIT_BUDGET,
                    message: format!("retraction search hit its node cap (image bound {bound})"),
                }),
            }
        }
        Command::AclMember => {
            let h = inputs.h(alpha)?;
            done(
                EXIT_OK,
                yes_no(
                    "acl-member",
                    closure::acl_membership(&h, inputs.word()?, budget)?,
                    format,
                ),
            )
        }
        Command::AutoFixed => {
            let v = closure::auto_fixed_verdict(&inputs.h(alpha)?, budget);
            verdict_out(&reduce_witnesses(&v, budget), format)
        }
        Command::EndoFixed => {
            let v = closure::endo_fixed_verdict(&inputs.h(alpha)?, budget);
            verdict_out(&reduce_witnesses(&v, budget), format)
        }
        Command::ReduceFamily => {
            if budget.max_len > MAX_FIXED_LEN {
                return Err(Error::Budget {
                    cap: fixclose_core::Cap::FixedWordLength,
                    limit: MAX_FIXED_LEN,
                    needed: budget.max_len,
                }
                .into());
            }
            let r = reduce_family(inputs.morphisms()?, budget.max_len, MAX_FIXED_LEN)?;
            let mut text = morphisms_out(&r.members, "member", format);
            if r.warning {
                text.push_str(if format == Format::Structured {
                    "warning: more than 2n members needed at this length bound\n"
                } else {
                    "# warning: more than 2n members needed at this length bound\n"
                });
            }
            done(
                if r.warning {
                    EXIT_INCONCLUSIVE
                } else {
                    EXIT_OK
                },
                text,
            )
        }
        Command::Audit { .. } => unreachable!("handled before inputs are loaded"),
    }
}

fn run_audit(path: &PathBuf) -> Result<Outcome, Failure> {
    let text = read_file(path)?;
    let v = report::parse_structured(&text)
        .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    match audit(&v) {
        Ok(()) if v.answer == Answer::Evidence => done(
            EXIT_INCONCLUSIVE,
            String::from("evidence only: nothing to audit\n"),
        ),
        Ok(()) => done(EXIT_OK, format!("ok: {} {}\n", v.question, v.answer)),
        Err(e) => Err(Failure {
            status: EXIT_INCONCLUSIVE,
            message: format!("audit failed: {e}"),
        }),
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let status = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return status;
        }
    };
    let result = match &cli.command {
        Command::Audit { report } => run_audit(report),
        command => load(&cli.input).and_then(|(inputs, cfg)| execute(command, &inputs, &cfg)),
    };
    match result {
        Ok(o) => {
            let _ = out.write_all(o.text.as_bytes());
            o.status
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.status
        }
    }
}
