//! Argument parsing and subcommand dispatch.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use perazzo_core::closed_forms::{
    check_full, eliahou_kervaire, full_n, full_perazzo_betti, stable_violation, zf_betti,
};
use perazzo_core::doubling::{verify_full_perazzo, Tier, VerifyOptions, DEFAULT_ORACLE_MAX_VARS};
use perazzo_core::field::DEFAULT_PRIME;
use perazzo_core::ideals::{quotient_hf_and_hvector, zf_ideal};
use perazzo_core::inverse_system::{annihilator_min_gens, build_perazzo_form, inverse_system_hf};
use perazzo_core::resolution::{mapping_cone_betti, oracle_betti_of_ideal};
use perazzo_core::{
    Annihilator, BettiTable, Coefficients, Field, Form, HomogeneousIdeal, Monomial, PerazzoSpec,
    PolyRing, PrimeField, RationalField,
};
use serde_json::json;

use crate::formats::{
    form_to_json, parse_form, parse_ideal, parse_monomial, read_json, read_spec, FormJson,
    IdealJson,
};
use crate::render::{render_betti_table, render_report, OutputFormat};
use crate::CliError;

pub const CHAR_ENV: &str = "PERAZZO_CHAR";

#[derive(Debug, Parser)]
#[command(
    name = "perazzo",
    version,
    about = "Betti tables of full Perazzo algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct FieldArgs {
    /// Prime characteristic; 0 selects the rationals
    #[arg(long = "char", global = true)]
    pub characteristic: Option<u64>,
    /// Exact rational arithmetic
    #[arg(long, global = true)]
    pub rational: bool,
}

#[derive(Debug, Args, Clone, Default)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    pub format: OutputFormat,
    /// Shorthand for --format json
    #[arg(long, global = true)]
    pub json: bool,
    /// Write to a file instead of standard output
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
}

impl OutputArgs {
    pub fn format(&self) -> OutputFormat {
        if self.json {
            OutputFormat::Json
        } else {
            self.format
        }
    }
}

#[derive(Debug, Args, Clone, Default)]
pub struct SpecArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub d: Option<u32>,
    /// Use the linear forms of a spec file instead of sampling
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Oracle,
    Formula,
    Cone,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TierArg {
    Default,
    Deep,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a general-position full spec and print it with its form
    Gen {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Minimal generators of Ann(F) by degree
    Ann {
        #[arg(long)]
        form: PathBuf,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Hilbert function and h-vector of A_F or of R/I
    Hilbert {
        #[arg(long, conflicts_with = "ideal", required_unless_present = "ideal")]
        form: Option<PathBuf>,
        #[arg(long)]
        ideal: Option<PathBuf>,
        /// Last degree for an ideal
        #[arg(long)]
        top: Option<u32>,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Graded Betti table by oracle, closed form or mapping cone
    Betti {
        #[arg(long, value_enum, default_value_t = Method::Oracle)]
        method: Method,
        /// Target A_F
        #[arg(long, group = "target")]
        af: bool,
        /// Target the double-point scheme Z_F
        #[arg(long, group = "target")]
        zf: bool,
        /// Target R/I for an ideal file
        #[arg(long, group = "target")]
        ideal: Option<PathBuf>,
        /// Dual generator file for the A_F target
        #[arg(long, requires = "af")]
        form: Option<PathBuf>,
        /// Last Betti row computed by the oracle
        #[arg(long)]
        max_row: Option<u32>,
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the doubling checks on a full spec
    Verify {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum, default_value_t = TierArg::Default)]
        tier: TierArg,
        #[arg(long, default_value_t = DEFAULT_ORACLE_MAX_VARS)]
        oracle_max_vars: usize,
        /// Leave wall-clock time out of the report
        #[arg(long)]
        no_timing: bool,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Stability check and Eliahou-Kervaire table of a monomial ideal
    Ek {
        /// Comma-separated monomials in x1, x2, ...
        #[arg(long, conflicts_with = "ideal", required_unless_present = "ideal")]
        gens: Option<String>,
        #[arg(long)]
        ideal: Option<PathBuf>,
        #[arg(long)]
        nvars: Option<usize>,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

/// Rendered output and whether the command succeeded.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub success: bool,
    pub output: Option<PathBuf>,
}

impl Outcome {
    fn ok(text: String, out: &OutputArgs) -> Self {
        Outcome {
            text,
            success: true,
            output: out.output.clone(),
        }
    }
}

/// Picks the field: `--rational`, then `--char`, then the input file, then
/// `PERAZZO_CHAR`, then the default prime.
pub fn resolve_coefficients(
    args: &FieldArgs,
    file_char: Option<u64>,
    env: Option<&str>,
) -> Result<Coefficients, CliError> {
    if args.rational {
        if matches!(args.characteristic, Some(p) if p != 0) {
            return Err(CliError::Input("--rational conflicts with --char".into()));
        }
        return Ok(Coefficients::Rational);
    }
    if let Some(p) = args.characteristic.or(file_char) {
        return Ok(Coefficients::from_characteristic(p)?);
    }
    if let Some(v) = env {
        let p: u64 = v
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("{CHAR_ENV}={v:?} is not a number")))?;
        return Ok(Coefficients::from_characteristic(p)?);
    }
    Ok(Coefficients::Prime { p: DEFAULT_PRIME })
}

fn coefficients(args: &FieldArgs, file_char: Option<u64>) -> Result<Coefficients, CliError> {
    let env = std::env::var(CHAR_ENV).ok();
    resolve_coefficients(args, file_char, env.as_deref())
}

macro_rules! with_field {
    ($coeffs:expr, |$f:ident| $body:expr) => {
        match $coeffs {
            Coefficients::Prime { p } => {
                let $f = PrimeField::new(p as u64)?;
                $body
            }
            Coefficients::Rational => {
                let $f = RationalField;
                $body
            }
        }
    };
}

/// Upper end of the sampling range, so both field modes draw the same
/// forms for the default prime.
fn lambda_bound(coeffs: Coefficients) -> i64 {
    match coeffs {
        Coefficients::Prime { p } => p as i64 - 1,
        Coefficients::Rational => DEFAULT_PRIME as i64 - 1,
    }
}

/// Spec from `--spec`, or sampled from `--m --d --seed`.
fn obtain_spec<F: Field>(
    field: &F,
    args: &SpecArgs,
    bound: i64,
) -> Result<(PerazzoSpec, Option<usize>), CliError> {
    if let Some(path) = &args.spec {
        let spec = read_spec(path)?;
        for (flag, given, actual) in [
            ("--n", args.n, spec.n),
            ("--m", args.m, spec.m),
            ("--d", args.d.map(|d| d as usize), spec.d as usize),
        ] {
            if matches!(given, Some(g) if g != actual) {
                return Err(CliError::Input(format!(
                    "{flag} disagrees with the file given to --spec"
                )));
            }
        }
        spec.validate(field)?;
        return Ok((spec, None));
    }
    let (m, d) = full_params(args)?;
    let (spec, attempts) = PerazzoSpec::sample_full(field, m, d, args.seed, bound)?;
    Ok((spec, Some(attempts)))
}

/// `(m, d)` from the flags, with `--n` checked against fullness.
fn full_params(args: &SpecArgs) -> Result<(usize, u32), CliError> {
    let (Some(m), Some(d)) = (args.m, args.d) else {
        return Err(CliError::Input("need --m and --d (or --spec)".into()));
    };
    let n = full_n(m, d)?;
    if let Some(given) = args.n {
        check_full(given, m, d)?;
    }
    check_full(n, m, d)?;
    Ok((m, d))
}

fn file_char_of_form(path: &Path) -> Result<(FormJson, u64), CliError> {
    let j: FormJson = read_json(path)?;
    let c = j.characteristic;
    Ok((j, c))
}

fn file_char_of_ideal(path: &Path) -> Result<(IdealJson, u64), CliError> {
    let j: IdealJson = read_json(path)?;
    let c = j.ring.characteristic;
    Ok((j, c))
}

fn json_text(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("value serializes") + "\n"
}

fn text_only(format: OutputFormat, what: &str) -> Result<(), CliError> {
    if format == OutputFormat::Csv {
        return Err(CliError::Input(format!("{what} has no CSV output")));
    }
    Ok(())
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Gen { spec, field, out } => {
            let coeffs = coefficients(&field, None)?;
            text_only(out.format(), "gen")?;
            let text = with_field!(coeffs, |f| gen(
                &f,
                &spec,
                lambda_bound(coeffs),
                out.format()
            )?);
            Ok(Outcome::ok(text, &out))
        }
        Command::Ann { form, field, out } => {
            let (json, c) = file_char_of_form(&form)?;
            text_only(out.format(), "ann")?;
            let text = with_field!(coefficients(&field, Some(c))?, |f| ann(
                &f,
                &json,
                out.format()
            )?);
            Ok(Outcome::ok(text, &out))
        }
        Command::Hilbert {
            form,
            ideal,
            top,
            field,
            out,
        } => {
            let text = if let Some(path) = form {
                let (json, c) = file_char_of_form(&path)?;
                with_field!(coefficients(&field, Some(c))?, |f| {
                    let form = parse_form(&f, &json)?;
                    hilbert_output(
                        inverse_system_hf(&form).entries().to_vec(),
                        None,
                        out.format(),
                    )
                })
            } else {
                let path = ideal.expect("clap enforces a target");
                let (json, c) = file_char_of_ideal(&path)?;
                with_field!(coefficients(&field, Some(c))?, |f| {
                    let ideal = parse_ideal(&f, &json)?;
                    let top = top.unwrap_or_else(|| default_top(&ideal));
                    let (hf, h) = quotient_hf_and_hvector(&ideal, top);
                    hilbert_output(hf.values, Some(h.entries().to_vec()), out.format())
                })
            };
            Ok(Outcome::ok(text, &out))
        }
        Command::Betti {
            method,
            af,
            zf,
            ideal,
            form,
            max_row,
            spec,
            field,
            out,
        } => {
            let target = match (af, zf, &ideal) {
                (true, _, _) => Target::Af(form),
                (_, true, _) => Target::Zf,
                (_, _, Some(p)) => Target::Ideal(p.clone()),
                _ => return Err(CliError::Input("choose --af, --zf or --ideal".into())),
            };
            let file_char = match &target {
                Target::Ideal(p) => Some(file_char_of_ideal(p)?.1),
                Target::Af(Some(p)) => Some(file_char_of_form(p)?.1),
                _ => None,
            };
            let coeffs = coefficients(&field, file_char)?;
            let req = BettiRequest {
                method,
                target,
                max_row,
                spec,
                bound: lambda_bound(coeffs),
                format: out.format(),
            };
            let text = with_field!(coeffs, |f| betti(&f, &req)?);
            Ok(Outcome::ok(text, &out))
        }
        Command::Verify {
            spec,
            tier,
            oracle_max_vars,
            no_timing,
            field,
            out,
        } => {
            let coeffs = coefficients(&field, None)?;
            let opts = VerifyOptions {
                tier: match tier {
                    TierArg::Default => Tier::Default,
                    TierArg::Deep => Tier::Deep,
                },
                oracle_max_vars,
                seed: Some(spec.seed),
                record_timing: !no_timing,
            };
            let rep = with_field!(coeffs, |f| {
                let (s, attempts) = obtain_spec(&f, &spec, lambda_bound(coeffs))?;
                let opts = VerifyOptions {
                    seed: attempts.map(|_| spec.seed),
                    ..opts.clone()
                };
                verify_full_perazzo(&f, &s, &opts, attempts.unwrap_or(0))?
            });
            let format = if out.format() == OutputFormat::Csv {
                return Err(CliError::Input("verify has no CSV output".into()));
            } else {
                out.format()
            };
            Ok(Outcome {
                text: render_report(&rep, format),
                success: rep.passed(),
                output: out.output.clone(),
            })
        }
        Command::Ek {
            gens,
            ideal,
            nvars,
            field,
            out,
        } => {
            let monos = match (gens, ideal) {
                (Some(g), _) => parse_gens_list(&g, nvars)?,
                (None, Some(p)) => {
                    let (json, c) = file_char_of_ideal(&p)?;
                    with_field!(coefficients(&field, Some(c))?, |f| monomial_gens(
                        &f, &json
                    )?)
                }
                _ => return Err(CliError::Input("need --gens or --ideal".into())),
            };
            ek(&monos, &out)
        }
    }
}

fn gen<F: Field>(
    f: &F,
    args: &SpecArgs,
    bound: i64,
    format: OutputFormat,
) -> Result<String, CliError> {
    let (spec, attempts) = obtain_spec(f, args, bound)?;
    let s = PolyRing::perazzo(f.clone(), spec.n, spec.m, true);
    let form = build_perazzo_form(&s, &spec)?;
    Ok(match format {
        OutputFormat::Json => json_text(&json!({
            "characteristic": f.characteristic(),
            "seed": args.seed,
            "resamples": attempts,
            "spec": spec,
            "form": form_to_json(&form),
        })),
        _ => {
            let mut t = format!(
                "# characteristic {}, seed {}\nn = {}, m = {}, d = {}\n",
                f.characteristic(),
                args.seed,
                spec.n,
                spec.m,
                spec.d
            );
            for (i, l) in spec.linear_forms.iter().enumerate() {
                t.push_str(&format!("L_{i} = {l:?}\n"));
            }
            t.push_str(&format!("F = {form}\n"));
            t
        }
    })
}

fn ann<F: Field>(f: &F, json: &FormJson, format: OutputFormat) -> Result<String, CliError> {
    let form = parse_form(f, json)?;
    let ring = form.ring().dual();
    let a = Annihilator::new(&ring, form)?;
    let res = annihilator_min_gens(&a);
    Ok(match format {
        OutputFormat::Json => {
            let gens: serde_json::Map<String, serde_json::Value> = res
                .generators
                .iter()
                .map(|(t, g)| {
                    let forms: Vec<FormJson> = g.iter().map(form_to_json).collect();
                    (
                        t.to_string(),
                        serde_json::to_value(forms).expect("forms serialize"),
                    )
                })
                .collect();
            json_text(&json!({
                "characteristic": f.characteristic(),
                "hilbert_function": res.quotient_dims,
                "generator_counts": res.generators.iter().map(|(t, g)| (t.to_string(), g.len())).collect::<std::collections::BTreeMap<_, _>>(),
                "generators": gens,
            }))
        }
        _ => {
            let mut t = format!("# characteristic {}\n", f.characteristic());
            t.push_str(&format!("hilbert function: {:?}\n", res.quotient_dims));
            for (deg, g) in &res.generators {
                t.push_str(&format!("degree {deg}: {} generators\n", g.len()));
                for form in g {
                    t.push_str(&format!("  {form}\n"));
                }
            }
            t
        }
    })
}

fn default_top<F: Field>(ideal: &HomogeneousIdeal<F>) -> u32 {
    let sum: u32 = ideal.generators().iter().map(|g| g.degree()).sum();
    sum.max(ideal.max_generator_degree() + 1) + 1
}

fn hilbert_output(hf: Vec<u64>, h: Option<Vec<u64>>, format: OutputFormat) -> String {
    let h = h.unwrap_or_else(|| hf.clone());
    match format {
        OutputFormat::Json => json_text(&json!({"hilbert_function": hf, "h_vector": h})),
        OutputFormat::Csv => {
            let mut t = String::from("t,hf\n");
            for (k, v) in hf.iter().enumerate() {
                t.push_str(&format!("{k},{v}\n"));
            }
            t
        }
        OutputFormat::Text => format!("hilbert function: {hf:?}\nh-vector: {h:?}\n"),
    }
}

enum Target {
    Af(Option<PathBuf>),
    Zf,
    Ideal(PathBuf),
}

struct BettiRequest {
    method: Method,
    target: Target,
    max_row: Option<u32>,
    spec: SpecArgs,
    bound: i64,
    format: OutputFormat,
}

fn closed_form_params(req: &BettiRequest) -> Result<(usize, usize, u32), CliError> {
    if let Some(path) = &req.spec.spec {
        let s = read_spec(path)?;
        if !s.full {
            return Err(CliError::Input("closed forms need a full spec".into()));
        }
        return Ok((s.n, s.m, s.d));
    }
    let (m, d) = full_params(&req.spec)?;
    Ok((full_n(m, d)?, m, d))
}

fn betti<F: Field>(f: &F, req: &BettiRequest) -> Result<String, CliError> {
    let mut seed = None;
    let table: BettiTable = match (&req.target, req.method) {
        (Target::Ideal(_), Method::Formula | Method::Cone) => {
            return Err(CliError::Input(
                "an ideal only has the oracle method".into(),
            ))
        }
        (Target::Af(Some(_)), Method::Formula | Method::Cone) => {
            return Err(CliError::Input(
                "a form file only has the oracle method".into(),
            ))
        }
        (Target::Zf, Method::Cone) => {
            return Err(CliError::Input("the cone method computes A_F only".into()))
        }
        (Target::Ideal(path), Method::Oracle) => {
            let ideal = parse_ideal(f, &read_json(path)?)?;
            let max_row = req.max_row.unwrap_or_else(|| default_top(&ideal));
            oracle_betti_of_ideal(&ideal, max_row, None)?
        }
        (Target::Af(Some(path)), Method::Oracle) => {
            let form = parse_form(f, &read_json(path)?)?;
            let ring = form.ring().dual();
            let d = form.degree();
            let a = Annihilator::new(&ring, form)?;
            oracle_betti_of_ideal(&a, req.max_row.unwrap_or(d), None)?
        }
        (Target::Af(None), Method::Formula) => {
            let (n, m, d) = closed_form_params(req)?;
            full_perazzo_betti(n, m, d)?
        }
        (Target::Zf, Method::Formula) => {
            let (n, m, d) = closed_form_params(req)?;
            zf_betti(n, m, d)?
        }
        (Target::Af(None), Method::Cone) => {
            let (n, m, d) = closed_form_params(req)?;
            mapping_cone_betti(&zf_betti(n, m, d)?, n + m, d as i64)
        }
        (Target::Af(None) | Target::Zf, Method::Oracle) => {
            let (spec, attempts) = obtain_spec(f, &req.spec, req.bound)?;
            if attempts.is_some() {
                seed = Some(req.spec.seed);
            }
            let r = PolyRing::perazzo(f.clone(), spec.n, spec.m, false);
            let max_row = req.max_row.unwrap_or(spec.d);
            if matches!(req.target, Target::Zf) {
                let z = zf_ideal(&r, &spec)?;
                oracle_betti_of_ideal(&z, max_row, None)?
            } else {
                let s = PolyRing::perazzo(f.clone(), spec.n, spec.m, true);
                let a = Annihilator::new(&r, build_perazzo_form(&s, &spec)?)?;
                oracle_betti_of_ideal(&a, max_row, None)?
            }
        }
    };
    Ok(match req.format {
        OutputFormat::Json => json_text(&json!({
            "characteristic": f.characteristic(),
            "seed": seed,
            "method": format!("{:?}", req.method).to_lowercase(),
            "table": table,
        })),
        OutputFormat::Csv => render_betti_table(&table, OutputFormat::Csv),
        OutputFormat::Text => {
            let mut t = format!("# characteristic {}", f.characteristic());
            if let Some(s) = seed {
                t.push_str(&format!(", seed {s}"));
            }
            t.push('\n');
            t + &render_betti_table(&table, OutputFormat::Text)
        }
    })
}

/// Parses `x1^3, x1^2*x2` over `x1..xN`, with `N` the largest index used
/// unless given.
pub fn parse_gens_list(s: &str, nvars: Option<usize>) -> Result<Vec<Monomial>, CliError> {
    let mut max_index = 0usize;
    for tok in s.split(|c: char| !c.is_ascii_alphanumeric()) {
        if let Some(k) = tok.strip_prefix('x') {
            if let Ok(k) = k.parse::<usize>() {
                if k == 0 {
                    return Err(CliError::Input("variables are numbered from x1".into()));
                }
                max_index = max_index.max(k);
            }
        }
    }
    let nv = nvars.unwrap_or(max_index);
    if nv < max_index || nv == 0 {
        return Err(CliError::Input(format!(
            "need at least {max_index} variables"
        )));
    }
    let ring = PolyRing::new(
        PrimeField::default(),
        (1..=nv).map(|i| format!("x{i}")).collect(),
    );
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| parse_monomial(&ring, t))
        .collect()
}

fn monomial_gens<F: Field>(f: &F, json: &IdealJson) -> Result<Vec<Monomial>, CliError> {
    let ideal = parse_ideal(f, json)?;
    ideal
        .generators()
        .iter()
        .map(|g: &Form<F>| {
            let mut terms = g.terms();
            match (terms.next(), terms.next()) {
                (Some((m, _)), None) => Ok(m.clone()),
                _ => Err(CliError::Input(format!("{g} is not a monomial"))),
            }
        })
        .collect()
}

fn ek(monos: &[Monomial], out: &OutputArgs) -> Result<Outcome, CliError> {
    if monos.is_empty() {
        return Err(CliError::Input("no generators".into()));
    }
    let names: Vec<String> = (1..=monos[0].nvars()).map(|i| format!("x{i}")).collect();
    if let Some((g, w)) = stable_violation(monos) {
        let text = match out.format() {
            OutputFormat::Json => json_text(&json!({
                "stable": false,
                "generator": g.display_with(&names),
                "witness": w.display_with(&names),
            })),
            _ => format!(
                "not stable: {} needs {}\n",
                g.display_with(&names),
                w.display_with(&names)
            ),
        };
        return Ok(Outcome {
            text,
            success: false,
            output: out.output.clone(),
        });
    }
    let table = eliahou_kervaire(monos)?;
    let text = match out.format() {
        OutputFormat::Json => json_text(&json!({"stable": true, "table": table})),
        OutputFormat::Csv => render_betti_table(&table, OutputFormat::Csv),
        OutputFormat::Text => format!(
            "stable: yes\n{}",
            render_betti_table(&table, OutputFormat::Text)
        ),
    };
    Ok(Outcome::ok(text, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_precedence() {
        let none = FieldArgs::default();
        assert_eq!(
            resolve_coefficients(&none, None, None).unwrap(),
            Coefficients::Prime { p: 32003 }
        );
        assert_eq!(
            resolve_coefficients(&none, None, Some("101")).unwrap(),
            Coefficients::Prime { p: 101 }
        );
        assert_eq!(
            resolve_coefficients(&none, Some(7), Some("101")).unwrap(),
            Coefficients::Prime { p: 7 }
        );
        assert_eq!(
            resolve_coefficients(&none, Some(0), None).unwrap(),
            Coefficients::Rational
        );
        let flag = FieldArgs {
            characteristic: Some(11),
            rational: false,
        };
        assert_eq!(
            resolve_coefficients(&flag, Some(7), None).unwrap(),
            Coefficients::Prime { p: 11 }
        );
        let q = FieldArgs {
            characteristic: None,
            rational: true,
        };
        assert_eq!(
            resolve_coefficients(&q, Some(7), None).unwrap(),
            Coefficients::Rational
        );
        assert!(resolve_coefficients(&none, Some(12), None).is_err());
        assert!(resolve_coefficients(&none, None, Some("abc")).is_err());
    }

    #[test]
    fn generator_lists() {
        let g = parse_gens_list("x1^3, x1^2*x2, x2^2*x3", None).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g[2].exps(), [0, 2, 1]);
        assert_eq!(parse_gens_list("x1", Some(4)).unwrap()[0].nvars(), 4);
        assert!(parse_gens_list("x0^2", None).is_err());
        assert!(parse_gens_list("x3", Some(2)).is_err());
    }

    #[test]
    fn parses_subcommands() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
        let cli = Cli::try_parse_from([
            "perazzo", "verify", "--n", "3", "--m", "2", "--d", "4", "--json",
        ])
        .unwrap();
        assert!(matches!(cli.command, Command::Verify { .. }));
        assert!(Cli::try_parse_from(["perazzo", "betti", "--af", "--zf"]).is_err());
    }
}
