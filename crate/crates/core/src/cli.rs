//! Command-line front end. [`run`] parses arguments and returns the exit code
//! with the text to print, so it can be driven from tests.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use crate::affine::{build_fl, enumerate_up_values};
use crate::algnum::{AlgField, AlgNum};
use crate::automata::{genealogical_rep, genealogical_val, minimize, parse_dfa, write_dfa, Dfa, UpWord};
use crate::counting::{check_hypothesis, CountingTables, Verdict, DEFAULT_HORIZON};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::periodic::{aper_language, per_language, uper_omega};
use crate::pisot::{
    build_bertrand, digits_text, equivalence_check_with, field_from_coefficients, greedy_theta_expansion, pisot_check,
    random_samples, theta_expansion_of_one, Mismatch, DEFAULT_INTERVAL_DEPTH,
};
use crate::poly::{parse_rational, Poly};
use crate::realline::{
    interval_of_prefix, represent_both, represent_with, value_of_up, Algorithm, CellConvention, RepOptions,
    Representation, System, DEFAULT_MAX_STEPS,
};

/// Overrides the default step budget of `represent`.
pub const BUDGET_ENV: &str = "NUMERA_BUDGET_STEPS";

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_FORMAT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "numera", version, about = "Abstract numeration systems on regular languages")]
struct Cli {
    /// Append decimal approximations to exact values.
    #[arg(long, global = true)]
    exact: bool,
    /// Decimal digits of approximations.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u16).range(1..=1000))]
    digits: u16,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Args)]
struct AutomatonArg {
    /// Automaton file, or the name of a shipped fixture (ex5, binary, evena, fib).
    #[arg(long, short)]
    automaton: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Rescaled,
    Global,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// θ, the a-vector and the growth class of every state.
    Info(AutomatonArg),
    /// Rank of a word in genealogical order.
    Val {
        #[command(flatten)]
        a: AutomatonArg,
        #[arg(long)]
        word: String,
    },
    /// Word of a given rank.
    Rep {
        #[command(flatten)]
        a: AutomatonArg,
        #[arg(long)]
        n: BigUint,
    },
    /// The interval I_w of a left factor.
    Interval {
        #[command(flatten)]
        a: AutomatonArg,
        #[arg(long)]
        prefix: String,
    },
    /// Representation of a real number with its trace.
    Represent {
        #[command(flatten)]
        a: AutomatonArg,
        /// A rational `p/q`, or `[c0, c1, …]` for `c0 + c1·θ + …`.
        #[arg(long)]
        x: String,
        #[arg(long)]
        max_steps: Option<usize>,
        /// Also report the left-limit representation at cell endpoints.
        #[arg(long)]
        both: bool,
        #[arg(long, value_enum, default_value_t = AlgorithmArg::Rescaled)]
        algorithm: AlgorithmArg,
    },
    /// Value of an ultimately periodic word `u(v)^w`.
    ValueUp {
        #[command(flatten)]
        a: AutomatonArg,
        #[arg(long)]
        word: String,
    },
    /// Automaton of the periods.
    Per(AutomatonArg),
    /// Automaton of the preperiods.
    Aper(AutomatonArg),
    /// The ultimately periodic words as a union of blocks.
    Uper(AutomatonArg),
    /// Values of the fixed points of cycles of affine maps.
    FixedPoints {
        #[command(flatten)]
        a: AutomatonArg,
        #[arg(long, default_value_t = 4)]
        cycle_len: usize,
        #[arg(long, default_value_t = 2)]
        path_len: usize,
    },
    /// The minimal automaton with the states of a_q = 0 removed.
    Simplify(AutomatonArg),
    /// Checks the growth hypothesis.
    Check(AutomatonArg),
    /// θ-expansions and Bertrand systems of a real algebraic integer.
    Pisot {
        #[command(subcommand)]
        cmd: PisotCmd,
    },
}

#[derive(Debug, Args)]
struct PolyArg {
    /// Integer coefficients in ascending degree, e.g. `-1,-1,1` for x² − x − 1.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', required = true)]
    poly: Vec<i64>,
}

#[derive(Debug, Subcommand)]
enum PisotCmd {
    /// The θ-expansion of 1 and the Pisot status of θ.
    Expand1 {
        #[command(flatten)]
        p: PolyArg,
        /// Also expand this number of [0, 1].
        #[arg(long)]
        x: Option<String>,
        #[arg(long, default_value_t = 40)]
        n_digits: usize,
    },
    /// The automaton A′ and the sequence U.
    Build {
        #[command(flatten)]
        p: PolyArg,
        #[arg(long, default_value_t = 10)]
        terms: usize,
    },
    /// Compares greedy expansions with abstract representations.
    Equiv {
        #[command(flatten)]
        p: PolyArg,
        /// Semicolon-separated samples; random ones when absent.
        #[arg(long)]
        samples: Option<String>,
        #[arg(long, default_value_t = 50)]
        random: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 30)]
        n_digits: usize,
        #[arg(long, default_value_t = DEFAULT_INTERVAL_DEPTH)]
        max_len: usize,
    },
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            return (code, e.render().to_string());
        }
    };
    let out = Out { exact: cli.exact, digits: cli.digits as usize };
    match dispatch(&cli.cmd, &out) {
        Ok(text) => (0, text),
        Err(e) => (if e.is_format() { EXIT_FORMAT } else { EXIT_DOMAIN }, format!("error: {e}\n")),
    }
}

struct Out {
    exact: bool,
    digits: usize,
}

impl Out {
    fn num(&self, x: &AlgNum) -> String {
        if self.exact {
            format!("{x} ≈ {}", x.to_decimal(self.digits))
        } else {
            x.to_string()
        }
    }
}

fn load(path: &Path) -> Result<Dfa> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
            match fixtures::by_name(stem) {
                Some(t) if !path.exists() => t.to_string(),
                _ => return Err(Error::format(0, format!("cannot read {}: {e}", path.display()))),
            }
        }
    };
    Ok(minimize(&parse_dfa(&text)?))
}

fn parse_x(text: &str, f: &AlgField) -> Result<AlgNum> {
    let bad = || Error::format(0, format!("cannot parse number {text:?}"));
    let t = text.trim();
    if let Some(list) = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
        let c = list.split(',').map(|c| parse_rational(c).ok_or_else(bad)).collect::<Result<Vec<_>>>()?;
        return Ok(f.elem(Poly::new(c)));
    }
    Ok(f.from_q(parse_rational(t).ok_or_else(bad)?))
}

fn max_steps(flag: Option<usize>) -> Result<usize> {
    let steps = match (flag, std::env::var(BUDGET_ENV)) {
        (Some(n), _) => n,
        (None, Ok(v)) => v.trim().parse().map_err(|_| Error::format(0, format!("{BUDGET_ENV}={v:?} is not a number")))?,
        (None, Err(_)) => DEFAULT_MAX_STEPS,
    };
    if steps == 0 {
        return Err(Error::domain("the step budget must be positive"));
    }
    Ok(steps)
}

fn dispatch(cmd: &Cmd, out: &Out) -> Result<String> {
    let mut s = String::new();
    match cmd {
        Cmd::Info(a) => {
            let d = load(&a.automaton)?;
            let sys = System::new(&d)?;
            let g = crate::counting::growth_profile(&d, &CountingTables::new(&d, DEFAULT_HORIZON), &crate::counting::perron_theta(&d)?)?;
            writeln!(s, "alphabet: {}", d.alphabet().letters().join(" ")).unwrap();
            writeln!(s, "states: {}", d.num_states()).unwrap();
            writeln!(s, "theta = {}", out.num(&g.theta)).unwrap();
            writeln!(s, "theta ≈ {}", g.theta.to_decimal(out.digits)).unwrap();
            writeln!(s, "modulus = {}", g.field.modulus()).unwrap();
            writeln!(s, "polynomial degree = {}", g.poly_degree).unwrap();
            for q in d.states() {
                writeln!(s, "a({}) = {}  [{:?}]", d.name(q), out.num(g.a(q)), g.class[q]).unwrap();
            }
            writeln!(s, "simplified states: {}", sys.dfa().names().join(" ")).unwrap();
        }
        Cmd::Val { a, word } => {
            let d = load(&a.automaton)?;
            let w = d.alphabet().parse_word(word)?;
            writeln!(s, "{}", genealogical_val(&d, &w)?).unwrap();
        }
        Cmd::Rep { a, n } => {
            let d = load(&a.automaton)?;
            let w = genealogical_rep(&d, n)?;
            writeln!(s, "{}", if w.is_empty() { "ε".to_string() } else { d.alphabet().render(&w) }).unwrap();
        }
        Cmd::Interval { a, prefix } => {
            let sys = System::new(&load(&a.automaton)?)?;
            let w = sys.dfa().alphabet().parse_word(prefix)?;
            let iw = interval_of_prefix(&sys, &w)?;
            writeln!(s, "[{}, {}]", out.num(&iw.lower), out.num(&iw.upper)).unwrap();
        }
        Cmd::Represent { a, x, max_steps: flag, both, algorithm } => {
            let sys = System::new(&load(&a.automaton)?)?;
            let x = parse_x(x, sys.field())?;
            let steps = max_steps(*flag)?;
            if *both {
                let (right, left) = represent_both(&sys, &x, steps)?;
                write_rep(&mut s, &sys, &right, out);
                if let Some(left) = left {
                    writeln!(s, "left-limit representation:").unwrap();
                    write_rep(&mut s, &sys, &left, out);
                }
            } else {
                let opts = RepOptions {
                    max_steps: steps,
                    convention: CellConvention::Right,
                    algorithm: match algorithm {
                        AlgorithmArg::Rescaled => Algorithm::Rescaled,
                        AlgorithmArg::Global => Algorithm::Global,
                    },
                };
                write_rep(&mut s, &sys, &represent_with(&sys, &x, &opts)?, out);
            }
        }
        Cmd::ValueUp { a, word } => {
            let sys = System::new(&load(&a.automaton)?)?;
            let w = UpWord::parse(sys.dfa().alphabet(), word)?;
            writeln!(s, "{}", out.num(&value_of_up(&sys, &w)?)).unwrap();
        }
        Cmd::Per(a) => s = write_dfa(&per_language(&load(&a.automaton)?)?),
        Cmd::Aper(a) => s = write_dfa(&aper_language(&load(&a.automaton)?)),
        Cmd::Uper(a) => {
            let d = load(&a.automaton)?;
            s = uper_omega(&d)?.to_text(&d);
        }
        Cmd::FixedPoints { a, cycle_len, path_len } => {
            let sys = System::new(&load(&a.automaton)?)?;
            let fl = build_fl(&sys);
            let alphabet = sys.dfa().alphabet();
            for v in enumerate_up_values(&sys, *cycle_len, *path_len)? {
                let path = if v.path.is_empty() { "ε".to_string() } else { fl.render(&v.path) };
                writeln!(
                    s,
                    "value = {} (≈ {}) word = {} path = {} cycle = {}",
                    v.value,
                    v.value.to_decimal(out.digits.min(6)),
                    v.word.display(alphabet),
                    path,
                    fl.render(&v.cycle)
                )
                .unwrap();
            }
        }
        Cmd::Simplify(a) => s = write_dfa(System::new(&load(&a.automaton)?)?.dfa()),
        Cmd::Check(a) => {
            let d = load(&a.automaton)?;
            let r = check_hypothesis(&d, &CountingTables::new(&d, DEFAULT_HORIZON));
            let verdict = match r.verdict {
                Verdict::Pass => "pass",
                Verdict::Inconclusive => "inconclusive",
            };
            writeln!(s, "verdict: {verdict}").unwrap();
            writeln!(s, "infinite language: {}", r.language_infinite).unwrap();
            writeln!(s, "branching cycles: {}", r.branching_cycles).unwrap();
            if let Some(deg) = r.degree {
                writeln!(s, "polynomial degree: {deg}").unwrap();
            }
            if let Some(c) = r.constant {
                writeln!(s, "limit constant ≈ {c:.6}").unwrap();
            }
            writeln!(s, "converging: {}", r.converging).unwrap();
            for reason in &r.reasons {
                writeln!(s, "note: {reason}").unwrap();
            }
        }
        Cmd::Pisot { cmd } => pisot(cmd, out, &mut s)?,
    }
    Ok(s)
}

fn write_rep(s: &mut String, sys: &System, rep: &Representation, out: &Out) {
    let d = sys.dfa();
    match rep {
        Representation::Periodic { word, .. } => writeln!(s, "word = {}", word.display(d.alphabet())).unwrap(),
        Representation::PrefixOnly { prefix, trace } => writeln!(
            s,
            "prefix = {} (no repetition within {} steps)",
            d.alphabet().render(prefix),
            trace.steps.len()
        )
        .unwrap(),
    }
    let trace = rep.trace();
    for (i, st) in trace.steps.iter().enumerate() {
        writeln!(s, "step {i}: state {} y = {} letter {}", d.name(st.state), out.num(&st.y), d.alphabet().name(st.letter))
            .unwrap();
    }
    if let Some((i, j)) = trace.detection {
        writeln!(s, "repetition: step {j} repeats step {i}").unwrap();
    }
}

fn pisot(cmd: &PisotCmd, out: &Out, s: &mut String) -> Result<()> {
    match cmd {
        PisotCmd::Expand1 { p, x, n_digits } => {
            let f = field_from_coefficients(&p.poly)?;
            writeln!(s, "theta ≈ {}", f.theta_decimal(out.digits)).unwrap();
            writeln!(s, "status: {}", pisot_check(&f)).unwrap();
            let e = theta_expansion_of_one(&f)?;
            writeln!(s, "e(1) = {e}").unwrap();
            writeln!(s, "e*(1) = {}", digits_text(&e.e_star())).unwrap();
            if let Some(x) = x {
                let x = parse_x(x, &f)?;
                writeln!(s, "e(x) = {}", greedy_theta_expansion(&x, &f, *n_digits)?).unwrap();
            }
        }
        PisotCmd::Build { p, terms } => {
            let f = field_from_coefficients(&p.poly)?;
            let b = build_bertrand(&theta_expansion_of_one(&f)?, &f)?;
            writeln!(s, "status: {}", pisot_check(&f)).unwrap();
            let u: Vec<String> = b.u_sequence(*terms).iter().map(|x| x.to_string()).collect();
            writeln!(s, "U = {}", u.join(" ")).unwrap();
            s.push_str(&write_dfa(&b.a_prime));
        }
        PisotCmd::Equiv { p, samples, random, seed, n_digits, max_len } => {
            let f = field_from_coefficients(&p.poly)?;
            let b = build_bertrand(&theta_expansion_of_one(&f)?, &f)?;
            let xs = match samples {
                Some(list) => list.split(';').map(|x| parse_x(x, &f)).collect::<Result<Vec<_>>>()?,
                None => random_samples(&f, *random, 6, *seed),
            };
            let r = equivalence_check_with(&b, &xs, *n_digits, *max_len)?;
            writeln!(s, "status: {}", pisot_check(&f)).unwrap();
            writeln!(s, "samples: {}", r.samples).unwrap();
            writeln!(s, "left factors: {} (cases {} {} {})", r.words_checked, r.cases[0], r.cases[1], r.cases[2]).unwrap();
            for m in &r.mismatches {
                match m {
                    Mismatch::Digits { x, .. } => writeln!(s, "mismatch: digits of {}", out.num(x)),
                    Mismatch::OutOfRange { x } => writeln!(s, "mismatch: {} is outside [1/θ, 1]", out.num(x)),
                    Mismatch::Interval { word, .. } => {
                        writeln!(s, "mismatch: interval of {}", b.a_prime.alphabet().render(word))
                    }
                }
                .unwrap();
            }
            writeln!(s, "mismatches: {}", r.mismatches.len()).unwrap();
        }
    }
    Ok(())
}
