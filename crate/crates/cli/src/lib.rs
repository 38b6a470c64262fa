//! Command-line pipelines: derive, verify, enumerate and spectrum runs over
//! the spin-1 and spin-2 constructions, with JSON, LaTeX and text reports.

use std::fmt::Write as _;
use std::path::PathBuf;

use bwspin::clifford::{build_gamma_basis, find_r, GammaBasis, RMatrix};
use bwspin::fields::Momentum;
use bwspin::linsys::{equivalent, mass_spectrum, stacked_ranks, LinearSystem};
use bwspin::sampling::Sampler;
use bwspin::spin1::{self, ParameterSet, Reading};
use bwspin::spin2::{self, ModifiedCoeffs, Spin2Error};
use bwspin::C64;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Spin1,
    Spin1Signs,
    Spin2Standard,
    Spin2Modified,
    GEquation,
}

impl Target {
    fn name(self) -> &'static str {
        match self {
            Target::Spin1 => "spin1",
            Target::Spin1Signs => "spin1-signs",
            Target::Spin2Standard => "spin2-standard",
            Target::Spin2Modified => "spin2-modified",
            Target::GEquation => "g-equation",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Latex,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Derive,
    Verify,
    Enumerate,
    Spectrum,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Derive => "derive",
            Command::Verify => "verify",
            Command::Enumerate => "enumerate",
            Command::Spectrum => "spectrum",
        }
    }
}

/// Parses "1", "-0.5", "2i", "1+2i", "1.5e-3-0.2i".
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("not a complex number: `{s}`");
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|x| Complex::new(x, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re_part, im_part) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| bad())?,
    };
    let re = if re_part.is_empty() { 0.0 } else { re_part.parse::<f64>().map_err(|_| bad())? };
    Ok(Complex::new(re, im))
}

fn parse_list<X>(s: &str, n: usize, f: impl Fn(&str) -> Result<X, String>) -> Result<Vec<X>, String> {
    let v: Vec<X> = s.split(',').map(|x| f(x.trim())).collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(format!("expected {n} comma-separated values, got {}", v.len()));
    }
    Ok(v)
}

fn parse_alpha(s: &str) -> Result<[C64; 3], String> {
    parse_list(s, 3, parse_complex).map(|v| [v[0], v[1], v[2]])
}

fn parse_beta(s: &str) -> Result<[C64; 9], String> {
    parse_list(s, 9, parse_complex).map(|v| std::array::from_fn(|k| v[k]))
}

fn parse_eps(s: &str) -> Result<[i8; 4], String> {
    let v = parse_list(s, 4, |x| match x {
        "1" | "+1" | "+" => Ok(1i8),
        "-1" | "-" => Ok(-1),
        _ => Err(format!("sign entries must be +1 or -1, got `{x}`")),
    })?;
    Ok([v[0], v[1], v[2], v[3]])
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "1")]
    a: C64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0")]
    b: C64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0")]
    c: C64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0")]
    d: C64,
    /// Spin-2 mass.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    m: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    m1: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    m2: f64,
    /// Sign tuple, e.g. "1,-1,1,1".
    #[arg(long, value_parser = parse_eps, allow_hyphen_values = true, default_value = "1,1,1,1")]
    eps: [i8; 4],
    #[arg(long, value_parser = parse_alpha, allow_hyphen_values = true, default_value = "1,1,0")]
    alpha: [C64; 3],
    #[arg(long, value_parser = parse_beta, allow_hyphen_values = true, default_value = "1,1,0,1,1,0,1,1,0")]
    beta: [C64; 9],
    /// Number of sampled momenta.
    #[arg(long, default_value_t = 4)]
    momenta: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Build the linear systems for a target and report them.
    Derive {
        #[arg(value_enum)]
        target: Target,
        #[command(flatten)]
        common: Common,
    },
    /// Run the property checks for a target over sampled momenta.
    Verify {
        #[arg(value_enum)]
        target: Target,
        #[command(flatten)]
        common: Common,
    },
    /// List the sign-operator variants and their rowspace classes.
    Enumerate {
        #[arg(value_enum)]
        target: Target,
        #[command(flatten)]
        common: Common,
    },
    /// Roots in p² of the bracket polynomial.
    Spectrum {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Parser)]
#[command(name = "bwspin", version, about = "Generalized Bargmann-Wigner equations as linear systems")]
struct Cli {
    #[command(subcommand)]
    sub: Sub,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub target: Option<Target>,
    pub params: ParameterSet<f64>,
    pub coeffs: ModifiedCoeffs<f64>,
    pub momenta: usize,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_args<I, S>(args: I) -> Result<Self, clap::Error>
    where
        I: IntoIterator<Item = S>,
        S: Into<std::ffi::OsString> + Clone,
    {
        let cli = Cli::try_parse_from(args)?;
        let (command, target, c) = match cli.sub {
            Sub::Derive { target, common } => (Command::Derive, Some(target), common),
            Sub::Verify { target, common } => (Command::Verify, Some(target), common),
            Sub::Enumerate { target, common } => (Command::Enumerate, Some(target), common),
            Sub::Spectrum { common } => (Command::Spectrum, None, common),
        };
        let mut params = ParameterSet::new(c.a, c.b, c.c, c.d);
        params.m = c.m;
        params.m1 = c.m1;
        params.m2 = c.m2;
        params.eps = c.eps;
        Ok(Self {
            command,
            target,
            params,
            coeffs: ModifiedCoeffs { alpha: c.alpha, beta: c.beta },
            momenta: c.momenta,
            seed: c.seed,
            format: c.format,
            out: c.out,
        })
    }

    fn to_json(&self) -> Value {
        let p = &self.params;
        json!({
            "command": self.command.name(),
            "target": self.target.map(Target::name),
            "a": cj(&p.a), "b": cj(&p.b), "c": cj(&p.c), "d": cj(&p.d),
            "m": p.m, "m1": p.m1, "m2": p.m2, "eps": p.eps,
            "alpha": self.coeffs.alpha.iter().map(cj).collect::<Vec<_>>(),
            "beta": self.coeffs.beta.iter().map(cj).collect::<Vec<_>>(),
            "momenta": self.momenta,
            "seed": self.seed,
        })
    }
}

#[derive(Debug)]
pub enum RunError {
    /// Invalid configuration: exit code 2.
    Config(String),
    /// The engine could not produce a result: exit code 1.
    Engine(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Engine(_) => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let (kind, msg) = match self {
            RunError::Config(m) => ("config", m),
            RunError::Engine(m) => ("engine", m),
        };
        json!({"error": kind, "message": msg})
    }
}

impl From<Spin2Error> for RunError {
    fn from(e: Spin2Error) -> Self {
        match e {
            Spin2Error::ZeroMass | Spin2Error::Precondition(_) => RunError::Config(e.to_string()),
            other => RunError::Engine(other.to_string()),
        }
    }
}

impl From<spin1::Spin1Error> for RunError {
    fn from(e: spin1::Spin1Error) -> Self {
        match e {
            spin1::Spin1Error::BadSign(_) => RunError::Config(e.to_string()),
            other => RunError::Engine(other.to_string()),
        }
    }
}

impl From<bwspin::linsys::LinsysError> for RunError {
    fn from(e: bwspin::linsys::LinsysError) -> Self {
        RunError::Engine(e.to_string())
    }
}

/// Report plus the verdict of the checks it contains.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub systems: Vec<(String, LinearSystem<f64>)>,
    pub passed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.report).expect("serializable");
                s.push('\n');
                s
            }
            Format::Latex => {
                let mut s = String::new();
                for (name, sys) in &self.systems {
                    let _ = writeln!(s, "% system: {name}");
                    s.push_str(&emit_latex(sys));
                }
                s
            }
            Format::Text => render_text(&self.report),
        }
    }
}

fn render_text(report: &Value) -> String {
    let mut s = String::new();
    if let Some(cfg) = report.get("config") {
        let _ = writeln!(s, "{} {}", cfg["command"].as_str().unwrap_or(""), cfg["target"].as_str().unwrap_or(""));
    }
    if let Some(systems) = report.get("systems").and_then(Value::as_array) {
        for sys in systems {
            let _ = writeln!(
                s,
                "system {}: {} rows over {} unknowns",
                sys["name"].as_str().unwrap_or("?"),
                sys["rows"].as_array().map_or(0, Vec::len),
                sys["unknowns"].as_array().map_or(0, Vec::len)
            );
        }
    }
    if let Some(Value::Object(res)) = report.get("results") {
        for (k, v) in res {
            let _ = writeln!(s, "{k}: {v}");
        }
    }
    s
}

fn cj(z: &C64) -> Value {
    // adding 0.0 turns -0.0 into 0.0
    json!([z.re + 0.0, z.im + 0.0])
}

fn momentum_json(p: &Momentum<f64>) -> Value {
    Value::Array(p.p.iter().map(cj).collect())
}

fn fmt_num(x: f64) -> String {
    let r = (x * 1e6).round() / 1e6;
    if r == r.trunc() && r.abs() < 1e15 {
        format!("{}", r as i64)
    } else {
        format!("{r}")
    }
}

fn fmt_coeff(z: &C64) -> String {
    match (z.re.abs() < 1e-12, z.im.abs() < 1e-12) {
        (true, true) => "0".into(),
        (false, true) => fmt_num(z.re),
        (true, false) => format!("{}i", fmt_num(z.im)),
        (false, false) => format!("({}{}{}i)", fmt_num(z.re), if z.im < 0.0 { "-" } else { "+" }, fmt_num(z.im.abs())),
    }
}

fn latex_label(l: &str) -> String {
    let (name, rest) = l.split_once('[').unwrap_or((l, ""));
    let idx = rest.trim_end_matches(']');
    let name = match name {
        "phi" => "\\phi".to_string(),
        "phi~" => "\\tilde{\\phi}".to_string(),
        n if n.ends_with('~') => format!("\\tilde{{{}}}", n.trim_end_matches('~')),
        n => n.to_string(),
    };
    if idx.is_empty() {
        name
    } else {
        format!("{name}_{{{idx}}}")
    }
}

/// One aligned equation per row, tagged with the row provenance.
pub fn emit_latex(system: &LinearSystem<f64>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "% {} rows, {} unknowns", system.n_rows(), system.n_unknowns());
    let _ = writeln!(s, "\\begin{{align*}}");
    for row in system.rows() {
        let mut terms = Vec::new();
        for (z, l) in row.coeffs.iter().zip(system.unknowns()) {
            let c = fmt_coeff(z);
            if c == "0" {
                continue;
            }
            let c = match c.as_str() {
                "1" => String::new(),
                "-1" => "-".into(),
                _ => format!("{c}\\,"),
            };
            terms.push(format!("{c}{}", latex_label(l)));
        }
        let lhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ").replace("+ -", "- ") };
        let _ = writeln!(s, "  {lhs} &= 0 && \\text{{{}}} \\\\", row.provenance);
    }
    let _ = writeln!(s, "\\end{{align*}}");
    s
}

fn system_json(name: &str, sys: &LinearSystem<f64>) -> Value {
    let mut v = sys.to_json_value();
    v["name"] = json!(name);
    v["rank"] = json!(sys.rank());
    v["nullspace_dim"] = json!(sys.nullity());
    v
}

struct Algebra {
    basis: GammaBasis<f64>,
    r: RMatrix<f64>,
}

impl Algebra {
    fn new() -> Result<Self, RunError> {
        let basis = build_gamma_basis();
        let r = find_r(&basis).map_err(|e| RunError::Engine(e.to_string()))?;
        Ok(Self { basis, r })
    }
}

/// Alternates generic off-shell draws with on-shell draws on the given shells.
fn sample_momenta(seed: u64, n: usize, shells: &[C64]) -> Vec<(Momentum<f64>, bool)> {
    let mut s = Sampler::new(seed);
    (0..n)
        .map(|k| {
            if k % 2 == 1 && !shells.is_empty() {
                (s.on_shell(&shells[(k / 2) % shells.len()]), true)
            } else {
                (s.off_shell(shells), false)
            }
        })
        .collect()
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, RunError> {
    if cfg.momenta == 0 && !matches!(cfg.command, Command::Spectrum | Command::Enumerate) {
        return Err(RunError::Config("--momenta must be at least 1".into()));
    }
    let (systems, results, passed) = match (cfg.command, cfg.target) {
        (Command::Spectrum, _) => spectrum(cfg)?,
        (Command::Enumerate, Some(Target::Spin1Signs)) => enumerate_signs(cfg)?,
        (Command::Enumerate, Some(t)) => {
            return Err(RunError::Config(format!("enumerate supports only spin1-signs, got {}", t.name())))
        }
        (Command::Derive, Some(t)) => derive(cfg, t)?,
        (Command::Verify, Some(t)) => verify(cfg, t)?,
        (_, None) => return Err(RunError::Config("missing target".into())),
    };
    let report = json!({
        "config": cfg.to_json(),
        "conventions": bwspin::conventions(),
        "systems": systems.iter().map(|(n, s)| system_json(n, s)).collect::<Vec<_>>(),
        "results": results,
        "passed": passed,
    });
    Ok(Outcome { report, systems, passed })
}

type Parts = (Vec<(String, LinearSystem<f64>)>, Value, bool);

fn spectrum(cfg: &RunConfig) -> Result<Parts, RunError> {
    let p = &cfg.params;
    let s = mass_spectrum(&p.a, &p.b, &p.c, &p.d)?;
    let results = json!({
        "coefficients": s.coefficients.iter().map(cj).collect::<Vec<_>>(),
        "roots": s.roots.iter().map(cj).collect::<Vec<_>>(),
        "degree": s.degree,
        "double_root": s.double_root,
        "no_propagating_branch": s.no_propagating_branch,
        "mass_ratio": s.roots.iter().map(|x| cj(&(x / (p.m * p.m)))).collect::<Vec<_>>(),
    });
    Ok((vec![], results, true))
}

fn spin1_shells(p: &ParameterSet<f64>) -> Vec<C64> {
    p.shell_roots().unwrap_or_default().into_iter().filter(|x| x.norm() > 0.2 && x.norm() < 50.0).collect()
}

fn derive(cfg: &RunConfig, target: Target) -> Result<Parts, RunError> {
    let params = &cfg.params;
    match target {
        Target::Spin1 => {
            let (p, _) = sample_momenta(cfg.seed, 1, &spin1_shells(params)).remove(0);
            let proca = spin1::derive_spin1_system(params, &p);
            let dk = spin1::derive_duffin_kemmer(params, &p);
            let ast = spin1::eliminate_potentials(params, &p)?;
            let results = json!({
                "momentum": momentum_json(&p),
                "ast_contained": spin1::ast_containment(params, &p)?,
                "row_counts": {"proca": proca.n_rows(), "duffin_kemmer": dk.n_rows(), "ast": ast.n_rows()},
            });
            Ok((vec![("proca".into(), proca), ("duffin-kemmer".into(), dk), ("ast".into(), ast)], results, true))
        }
        Target::Spin1Signs => {
            let (p, _) = sample_momenta(cfg.seed, 1, &[]).remove(0);
            let k = spin1::make_sign_variant(params.eps)?;
            let sys = spin1::derive_sign_variant_system(&params.m1, &params.m2, k, &p);
            let results = json!({
                "momentum": momentum_json(&p),
                "coefficients": {"A1": k.a1, "A2": k.a2, "B1": k.b1, "B2": k.b2},
                "note": "the divergence row pairs A1 with B2",
            });
            Ok((vec![("sign-variant".into(), sys)], results, true))
        }
        Target::Spin2Standard => {
            let (p, _) = sample_momenta(cfg.seed, 1, &[Complex::new(params.m * params.m, 0.0)]).remove(0);
            let s = spin2::standard_spin2_system(&params.m, &p)?;
            let c = spin2::standard_spin2_constraints(&p);
            let results = json!({"momentum": momentum_json(&p)});
            Ok((
                vec![("dynamical".into(), s.dynamical), ("divergence-constraints".into(), s.constraints), ("algebraic-constraints".into(), c)],
                results,
                true,
            ))
        }
        Target::Spin2Modified => {
            let (p, _) = sample_momenta(cfg.seed, 1, &[Complex::new(params.m * params.m, 0.0)]).remove(0);
            let s = spin2::modified_spin2_system(&cfg.coeffs, &params.m, &p)?;
            let results = json!({"momentum": momentum_json(&p), "combined_nullspace_dim": s.combined.nullity()});
            Ok((vec![("dynamical".into(), s.dynamical), ("essential-constraints".into(), s.constraints)], results, true))
        }
        Target::GEquation => {
            let (p, _) = sample_momenta(cfg.seed, 1, &[Complex::new(params.m * params.m, 0.0)]).remove(0);
            let g = spin2::derive_g_equation(&cfg.coeffs, &params.m, &p)?;
            let results = json!({
                "momentum": momentum_json(&p),
                "contained": spin2::g_equation_containment(&cfg.coeffs, &params.m, &p)?,
            });
            Ok((vec![("g-equation".into(), g)], results, true))
        }
    }
}

fn verify(cfg: &RunConfig, target: Target) -> Result<Parts, RunError> {
    let params = &cfg.params;
    let alg = Algebra::new()?;
    let mut samples = Vec::new();
    let mut passed = true;
    let mut extra = serde_json::Map::new();
    match target {
        Target::Spin1 => {
            for (p, on_shell) in sample_momenta(cfg.seed, cfg.momenta, &spin1_shells(params)) {
                let ms = spin1::multispinor_spin1_system(params, &p, &alg.basis, &alg.r);
                let t = spin1::derive_tensor_system(params, &p, Reading::PauliMetric);
                let (r1, r2, rs) = stacked_ranks(&ms, &t)?;
                let ast = spin1::ast_containment(params, &p)?;
                let ok = r1 == r2 && r2 == rs && ast;
                passed &= ok;
                samples.push(json!({"momentum": momentum_json(&p), "on_shell": on_shell, "ranks": [r1, r2, rs], "ast_contained": ast, "ok": ok}));
            }
        }
        Target::Spin1Signs => {
            for (p, _) in sample_momenta(cfg.seed, cfg.momenta, &[]) {
                let mut all = true;
                for (eps, _) in spin1::enumerate_sign_variants() {
                    all &= spin1::negated_tuple_identity(&params.m1, &params.m2, eps, &p)?;
                }
                passed &= all;
                samples.push(json!({"momentum": momentum_json(&p), "negated_tuple_identity": all}));
            }
        }
        Target::Spin2Standard => {
            for (p, on_shell) in sample_momenta(cfg.seed, cfg.momenta, &[Complex::new(params.m * params.m, 0.0)]) {
                let r = spin2::verify_triviality(&params.m, &p)?;
                passed &= r.nullspace_dim == 0;
                samples.push(json!({"momentum": momentum_json(&p), "on_shell": on_shell, "report": r}));
            }
        }
        Target::Spin2Modified => {
            let point = ModifiedCoeffs::specialization_point();
            let mut recovered = true;
            let mut all_break = true;
            let mut sweep_json = Vec::new();
            for (p, on_shell) in sample_momenta(cfg.seed, cfg.momenta, &[Complex::new(params.m * params.m, 0.0)]) {
                let r = spin2::recovery_report(&point, &params.m, &p)?;
                recovered &= r.recovered;
                let mut entry = json!({"momentum": momentum_json(&p), "on_shell": on_shell, "recovery": r});
                if on_shell {
                    let sweep = spin2::perturbation_sweep(&params.m, &p, &Complex::new(1e-3, 0.0))?;
                    all_break &= sweep.iter().all(|(_, rec)| !rec);
                    entry["perturbation_still_recovers"] =
                        Value::Object(sweep.iter().map(|(n, rec)| (n.clone(), json!(rec))).collect());
                }
                sweep_json.push(entry);
            }
            samples = sweep_json;
            extra.insert("recovered".into(), json!(recovered));
            extra.insert("every_perturbation_breaks".into(), json!(all_break));
            let s = spin2::modified_spin2_system(&cfg.coeffs, &params.m, &sample_momenta(cfg.seed, 1, &[]).remove(0).0)?;
            extra.insert("combined_nullspace_dim_at_coefficients".into(), json!(s.combined.nullity()));
            passed = recovered && all_break;
        }
        Target::GEquation => {
            for (p, on_shell) in sample_momenta(cfg.seed, cfg.momenta, &[Complex::new(params.m * params.m, 0.0)]) {
                let contained = spin2::g_equation_containment(&cfg.coeffs, &params.m, &p)?;
                let g = spin2::derive_g_equation(&cfg.coeffs, &params.m, &p)?;
                let div = spin2::divergence_pair_defect(&g, &p);
                let mut entry = json!({"momentum": momentum_json(&p), "on_shell": on_shell, "contained": contained, "divergence_defect": div});
                let mut ok = contained && div <= 1e-10;
                if on_shell {
                    let tt = spin2::transverse_traceless_defect(&params.m, &p, &[Complex::new(1.0, 0.5), Complex::new(-0.3, 0.2)])?;
                    entry["transverse_traceless_defect"] = json!(tt);
                    ok &= tt <= 1e-10;
                }
                entry["ok"] = json!(ok);
                passed &= ok;
                samples.push(entry);
            }
        }
    }
    extra.insert("samples".into(), Value::Array(samples));
    Ok((vec![], Value::Object(extra), passed))
}

fn enumerate_signs(cfg: &RunConfig) -> Result<Parts, RunError> {
    let p = &cfg.params;
    let (mom, _) = sample_momenta(cfg.seed, 1, &[]).remove(0);
    let mut systems = Vec::new();
    let mut variants = Vec::new();
    for (eps, k) in spin1::enumerate_sign_variants() {
        let name = format!("eps[{},{},{},{}]", eps[0], eps[1], eps[2], eps[3]);
        let sys = spin1::derive_sign_variant_system(&p.m1, &p.m2, k, &mom);
        variants.push(json!({
            "eps": eps,
            "A1": k.a1, "A2": k.a2, "B1": k.b1, "B2": k.b2,
            "rank": sys.rank(),
            "negated_tuple_identity": spin1::negated_tuple_identity(&p.m1, &p.m2, eps, &mom)?,
        }));
        systems.push((name, sys));
    }
    let classes = spin1::sign_variant_classes(&p.m1, &p.m2, &mom)?;
    let first = &systems[0].1;
    let results = json!({
        "momentum": momentum_json(&mom),
        "variant_count": variants.len(),
        "variants": variants,
        "distinct_classes": classes.count,
        "class_labels": classes.labels,
        "first_two_equivalent": equivalent(first, &systems[1].1)?,
    });
    Ok((systems, results, true))
}

/// Runs a full command line and writes the report; returns the exit code.
pub fn main_with_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::from_args(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let first = e.to_string().lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            let err = RunError::Config(first);
            eprintln!("{}", err.to_json());
            return 2;
        }
    };
    match run(&cfg) {
        Ok(outcome) => {
            let text = outcome.render(cfg.format);
            match &cfg.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("{}", RunError::Config(format!("cannot write {}: {e}", path.display())).to_json());
                        return 2;
                    }
                }
                None => print!("{text}"),
            }
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}
