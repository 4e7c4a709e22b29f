//! Command-line surface: argument parsing, run configuration and report
//! emission. [`run`] is the whole program minus process I/O, so it can be
//! driven from tests.

use std::collections::BTreeSet;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};

use crate::algebra::Algebra;
use crate::builtin::{builtin, builtin_scaling, builtin_scalings, BUILTIN_NAMES};
use crate::contraction::{check_classical_commutation, ScalingMap};
use crate::error::{Error, Result};
use crate::hopf::{verify_hopf, verify_subalgebra};
use crate::invariants::{
    home_presentation, verify_casimir, verify_rmatrix_named, CASIMIR_NAMES, RMATRIX_NAMES,
};
use crate::pairing::{verify_pairing, Pairing, DEFAULT_DEGREE_BOUND};
use crate::presentation::{load_presentation_with, Presentation, ScalingSpec};
use crate::report::{Document, OutputFormat, Report};
use crate::scalar::{Ring, DEFAULT_DEGREE_CAP, DEFAULT_ORDER};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

pub const DEFAULT_SAMPLES: usize = 1000;
pub const DEFAULT_SEED: u64 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "hopfkit",
    version,
    about = "Verify Jordanian quantum algebras over truncated power series"
)]
pub struct Cli {
    /// Truncation order N: powers h^(N+1) and above are dropped.
    #[arg(long, global = true, env = "HOPFKIT_ORDER", default_value_t = DEFAULT_ORDER)]
    pub order: u32,
    /// Longest word any computation may produce.
    #[arg(long, global = true, default_value_t = DEFAULT_DEGREE_CAP)]
    pub degree_cap: usize,
    /// Truncation order used for R-matrix checks.
    #[arg(long, global = true, default_value_t = crate::invariants::QYBE_ORDER)]
    pub qybe_order: u32,
    /// Random samples drawn by the consistency and pairing checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Tree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum CheckKind {
    Hopf,
    Consistency,
    Casimir,
    Rmatrix,
    Pairing,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verify a built-in presentation or a presentation file.
    Verify {
        presentation: String,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [CheckKind::Hopf, CheckKind::Consistency])]
        checks: Vec<CheckKind>,
        /// Also verify that these generators span a Hopf subalgebra.
        #[arg(long, value_delimiter = ',')]
        subalgebra: Vec<String>,
    },
    /// Contract a presentation along a scaling map and compare with the target.
    Contract {
        #[arg(long)]
        from: String,
        /// Built-in scaling name or a file containing a scaling block.
        #[arg(long)]
        scaling: String,
        #[arg(long)]
        target: Option<String>,
    },
    /// Print the normal form of an expression.
    NormalForm { presentation: String, expr: String },
    /// Pair an element of uh-sl2 with an element of fun-slh2.
    Pair {
        #[arg(allow_hyphen_values = true)]
        expr_u: String,
        #[arg(allow_hyphen_values = true)]
        expr_f: String,
        #[arg(long, default_value_t = DEFAULT_DEGREE_BOUND)]
        degree: usize,
    },
    /// List built-in presentations, scaling maps and distinguished elements.
    List,
}

/// Exit code and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_PASS,
            stdout,
            stderr: String::new(),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome::ok(text)
            };
        }
    };
    match execute(&cli) {
        Ok(out) => out,
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

/// Exit code for an error that aborted a command.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_resource_limit() {
        EXIT_LIMIT
    } else if matches!(e, Error::NotClosed(_) | Error::SingularLimit { .. }) {
        EXIT_FAIL
    } else {
        EXIT_USAGE
    }
}

impl Cli {
    fn ring(&self) -> Result<Ring> {
        if self.degree_cap == 0 || self.qybe_order == 0 || self.samples == 0 {
            return Err(Error::Validation(
                "degree cap, QYBE order and sample count must be positive".into(),
            ));
        }
        Ok(Ring::new(self.order).with_degree_cap(self.degree_cap))
    }

    fn config(&self, command: String) -> Vec<(String, String)> {
        let format = match self.format {
            Format::Text => "text",
            Format::Tree => "tree",
        };
        vec![
            ("command".into(), command),
            ("order".into(), self.order.to_string()),
            ("degree-cap".into(), self.degree_cap.to_string()),
            ("qybe-order".into(), self.qybe_order.to_string()),
            ("samples".into(), self.samples.to_string()),
            ("seed".into(), self.seed.to_string()),
            ("format".into(), format.into()),
        ]
    }

    fn output_format(&self) -> OutputFormat {
        match self.format {
            Format::Text => OutputFormat::Text,
            Format::Tree => OutputFormat::Tree,
        }
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let ring = cli.ring()?;
    match &cli.command {
        Command::Verify {
            presentation,
            checks,
            subalgebra,
        } => {
            let p = resolve_presentation(presentation)?;
            let mut command = format!("verify {}", p.name);
            let kinds: BTreeSet<CheckKind> = checks.iter().copied().collect();
            let listed: Vec<&str> = kinds.iter().map(|k| check_name(*k)).collect();
            command.push_str(&format!(" --checks {}", listed.join(",")));
            if !subalgebra.is_empty() {
                command.push_str(&format!(" --subalgebra {}", subalgebra.join(",")));
            }
            let reports = verify(cli, ring, &p, &kinds, subalgebra)?;
            Ok(emit(cli, command, reports))
        }
        Command::Contract {
            from,
            scaling,
            target,
        } => {
            let source = resolve_presentation(from)?;
            let spec = resolve_scaling(scaling, &source.name)?;
            let target_p = match target {
                Some(t) => resolve_presentation(t)?,
                None => builtin(&spec.target)?,
            };
            let map = ScalingMap::resolve(&spec, &source, &target_p, ring)?;
            let mut reports = vec![map.compare()?];
            let stock = builtin(&spec.source).ok() == Some(source.clone())
                && builtin(&spec.target).ok() == Some(target_p.clone());
            if stock {
                reports.push(check_classical_commutation(&spec, ring)?);
            }
            let command = format!(
                "contract --from {} --scaling {} --target {}",
                source.name, spec.name, target_p.name
            );
            Ok(emit(cli, command, reports))
        }
        Command::NormalForm { presentation, expr } => {
            let p = resolve_presentation(presentation)?;
            let a = Algebra::new(&p, ring)?;
            let x = a.parse_element(expr)?;
            Ok(Outcome::ok(format!("{}\n", a.render(&a.normal_form(&x)?))))
        }
        Command::Pair {
            expr_u,
            expr_f,
            degree,
        } => {
            let pairing = Pairing::new(ring, *degree)?;
            let x = pairing.envelope().parse_element(expr_u)?;
            let f = pairing.functions().parse_element(expr_f)?;
            Ok(Outcome::ok(format!("{}\n", pairing.pair(&x, &f)?)))
        }
        Command::List => Ok(Outcome::ok(list())),
    }
}

fn check_name(k: CheckKind) -> &'static str {
    match k {
        CheckKind::Hopf => "hopf",
        CheckKind::Consistency => "consistency",
        CheckKind::Casimir => "casimir",
        CheckKind::Rmatrix => "rmatrix",
        CheckKind::Pairing => "pairing",
    }
}

fn homed(names: &[&'static str], presentation: &str) -> Vec<&'static str> {
    names
        .iter()
        .copied()
        .filter(|n| home_presentation(n).ok() == Some(presentation))
        .collect()
}

fn verify(
    cli: &Cli,
    ring: Ring,
    p: &Presentation,
    kinds: &BTreeSet<CheckKind>,
    subalgebra: &[String],
) -> Result<Vec<Report>> {
    let a = Algebra::new(p, ring)?;
    let stock = builtin(&p.name).ok().as_ref() == Some(p);
    let mut reports = Vec::new();
    for kind in kinds {
        match kind {
            CheckKind::Hopf => reports.push(verify_hopf(&a)?),
            CheckKind::Consistency => reports.push(a.check_consistency(cli.samples, cli.seed)?),
            CheckKind::Casimir => {
                let names = homed(&CASIMIR_NAMES, &p.name);
                if names.is_empty() || !stock {
                    return Err(unsupported("casimir", &p.name));
                }
                for n in names {
                    reports.push(verify_casimir(n, ring, cli.seed)?);
                }
            }
            CheckKind::Rmatrix => {
                let names = homed(&RMATRIX_NAMES, &p.name);
                if names.is_empty() || !stock {
                    return Err(unsupported("rmatrix", &p.name));
                }
                let r_ring = Ring::new(cli.qybe_order).with_degree_cap(ring.degree_cap);
                for n in names {
                    reports.push(verify_rmatrix_named(n, r_ring)?);
                }
            }
            CheckKind::Pairing => {
                if !stock || !matches!(p.name.as_str(), "uh-sl2" | "fun-slh2") {
                    return Err(unsupported("pairing", &p.name));
                }
                reports.push(verify_pairing(
                    ring,
                    DEFAULT_DEGREE_BOUND,
                    cli.samples,
                    cli.seed,
                )?);
            }
        }
    }
    if !subalgebra.is_empty() {
        let subset: Vec<&str> = subalgebra.iter().map(String::as_str).collect();
        reports.push(verify_subalgebra(&a, &subset)?);
    }
    Ok(reports)
}

fn unsupported(check: &str, presentation: &str) -> Error {
    Error::Validation(format!(
        "check '{check}' is only defined for the built-in presentations it belongs to, not {presentation}"
    ))
}

fn emit(cli: &Cli, command: String, reports: Vec<Report>) -> Outcome {
    let doc = Document {
        config: cli.config(command),
        reports,
    };
    let stdout = doc.render(cli.output_format());
    let mut stderr = String::new();
    for r in &doc.reports {
        let failed: Vec<&str> = r.failures().map(|c| c.id.as_str()).collect();
        if !failed.is_empty() {
            stderr.push_str(&format!(
                "failed [{} {}]: {}\n",
                r.kind,
                r.subject,
                failed.join(", ")
            ));
        }
    }
    Outcome {
        code: if doc.passed() { EXIT_PASS } else { EXIT_FAIL },
        stdout,
        stderr,
    }
}

fn read_file(arg: &str) -> Result<String> {
    std::fs::read_to_string(arg).map_err(|e| Error::UnknownName(format!("{arg}: {e}")))
}

fn load_file(arg: &str) -> Result<Presentation> {
    load_presentation_with(&read_file(arg)?, &|name| builtin(name).ok())
}

/// A built-in name, or else a path to a presentation file.
pub fn resolve_presentation(arg: &str) -> Result<Presentation> {
    if BUILTIN_NAMES.contains(&arg) || !Path::new(arg).exists() {
        return builtin(arg);
    }
    let p = load_file(arg)?;
    if p.generators.is_empty() {
        return Err(Error::Validation(format!("{arg} declares no algebra")));
    }
    Ok(p)
}

/// A built-in scaling name (disambiguated by `source`), or else a file
/// holding scaling blocks, of which the one whose source is `source` (or
/// the only one) is used.
pub fn resolve_scaling(arg: &str, source: &str) -> Result<ScalingSpec> {
    if !Path::new(arg).exists() {
        return builtin_scaling(arg, Some(source));
    }
    let mut specs = load_file(arg)?.scalings;
    if specs.len() > 1 {
        specs.retain(|s| s.source == source);
    }
    match specs.len() {
        1 => Ok(specs.remove(0)),
        0 => Err(Error::UnknownName(format!(
            "no scaling in {arg} for source {source}"
        ))),
        _ => Err(Error::UnknownName(format!(
            "several scalings in {arg} for source {source}"
        ))),
    }
}

fn list() -> String {
    let mut out = String::from("presentations:\n");
    for name in BUILTIN_NAMES {
        let gens = builtin(name)
            .map(|p| p.generators.join(" < "))
            .unwrap_or_default();
        out.push_str(&format!("  {name}: {gens}\n"));
    }
    out.push_str("scalings:\n");
    for s in builtin_scalings() {
        out.push_str(&format!("  {}: {} -> {}\n", s.name, s.source, s.target));
    }
    out.push_str("elements:\n");
    for name in CASIMIR_NAMES.iter().chain(RMATRIX_NAMES.iter()) {
        let home = home_presentation(name).unwrap_or("?");
        out.push_str(&format!("  {name} in {home}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hk(args: &str) -> Outcome {
        run(std::iter::once("hopfkit").chain(args.split_whitespace()))
    }

    #[test]
    fn verify_uh_sl2_hopf_passes() {
        let out = hk("verify uh-sl2 --checks hopf --order 3");
        assert_eq!(out.code, EXIT_PASS, "{}", out.stdout);
        assert!(out.stdout.starts_with("hopfkit-report v1\n"));
        assert!(out.stdout.contains("config: order = 3\n"));
    }

    #[test]
    fn osc4_fails_with_ids_on_stderr() {
        let out = hk("verify osc4 --checks hopf");
        assert_eq!(out.code, EXIT_FAIL);
        assert!(out.stderr.contains("H1.coproduct.[A+,N]"), "{}", out.stderr);
        assert!(out.stdout.contains("  witness: "));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(hk("verify").code, EXIT_USAGE);
        assert_eq!(hk("verify sl3").code, EXIT_USAGE);
        assert_eq!(hk("verify heis3 --checks casimir").code, EXIT_USAGE);
        assert_eq!(hk("normal-form uh-sl2 J3*Q").code, EXIT_USAGE);
        assert_eq!(hk("--help").code, EXIT_PASS);
    }

    #[test]
    fn degree_cap_exits_three() {
        let out = hk("normal-form uh-sl2 J+^4*J3 --degree-cap 3");
        assert_eq!(out.code, EXIT_LIMIT, "{}", out.stderr);
    }

    #[test]
    fn normal_form_and_pair() {
        assert_eq!(
            hk("normal-form uh-sl2 J3*J+").stdout,
            "2*J+ + J+*J3 + (1/3)*h^2*J+^3\n"
        );
        assert_eq!(hk("pair J3 a*b").stdout, "h\n");
    }

    #[test]
    fn list_names_everything() {
        let out = hk("list").stdout;
        for name in BUILTIN_NAMES
            .iter()
            .chain(&CASIMIR_NAMES)
            .chain(&RMATRIX_NAMES)
        {
            assert!(out.contains(name));
        }
        assert!(out.contains("poincare: uh-sl2 -> uh-p11"));
    }
}
