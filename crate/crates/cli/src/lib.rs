//! The `q2` command line. [`run`] takes the argument vector and output and
//! error streams, and returns the process exit code:
//!
//! - 0: success, including predicates that evaluate to false
//! - 1: domain or capacity errors, and suites with failing checks
//! - 2: usage errors, including malformed expressions

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use q2_core::canrep::{apply_basis, parse_generators, phase_apply, Phase};
use q2_core::element::bigint_json;
use q2_core::endo::{
    automorphism_probe, check_extension_detail, classify, enumerate_extendible, f_tower, make_inner_phi, make_u_p,
    mixed_family, pure_family, template_by_name, template_family, u_templates, verify_table, Mode, PermUnitary, Sign,
    LEVEL3_TABLE,
};
use q2_core::wgroup::{render, Diagram, RenderFormat};
use q2_core::{parse_element, Element, Error};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "q2", version, about = "Exact computations in the algebra Q_2 and its permutative endomorphisms")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Word depth for normal forms and diagrams, or iteration depth for `probe`.
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Level k of permutation unitaries (permutations of the 2^k words of length k).
    #[arg(long, global = true)]
    level: Option<usize>,
    /// Candidate image of U: a menu name (plus, minus, mixed1:h, mixed2:h, inner:CYCLES, inner-adj:CYCLES) or an expression.
    #[arg(long, global = true)]
    template: Option<String>,
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    /// Worker threads for parallel searches.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Brute,
    Constructive,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Dot,
    Tikz,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConstructKind {
    /// u_p^+ for a permutation p of level k-1
    Plus,
    /// u_p^- for a permutation p of level k-1
    Minus,
    /// p φ(p*), with Ũ = p U p*
    Inner,
    /// p φ(p*) f, with Ũ = p U* p*
    InnerFlip,
    /// F_k with k = --level
    Tower,
    /// the constructive family of --template
    Family,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal form with all β of equal length (--depth, default the longest β).
    Normalize { expr: String },
    /// Product of two or more elements.
    Mul {
        #[arg(num_args = 2.., required = true)]
        exprs: Vec<String>,
    },
    /// Whether two elements are equal.
    Eq { left: String, right: String },
    Adjoint { expr: String },
    /// Whether the element is a unitary Σ S_α U^k S_β* of the extended Thompson group.
    Unitary { expr: String },
    /// Membership in the Cuntz algebra, the Bunce-Deddens algebra, the UHF core and the diagonal.
    Membership { expr: String },
    /// Σ p_j U^{n_j} form of a gauge-invariant unitary.
    Putnam { expr: String },
    /// Bunce-Deddens times Cuntz factorization of a unitary (--depth).
    Factor { expr: String },
    /// Total charge of a unitary.
    Charge { expr: String },
    /// Tree-pair diagram of a unitary (--depth).
    Diagram { expr: String },
    /// Diagram drawing of a unitary (--depth).
    Render {
        expr: String,
        #[arg(long, value_enum, default_value = "dot")]
        format: FormatArg,
    },
    /// Minimal diagram of a unitary.
    Reduce { expr: String },
    /// Image of the basis vector e_n. With --phase, `expr` is a word in U, S1, S2, Uz and adjoints.
    Eval {
        expr: String,
        #[arg(allow_hyphen_values = true)]
        n: String,
        /// Phase a/2^n used by bare `Uz` letters.
        #[arg(long)]
        phase: Option<String>,
    },
    /// Checks both extension equations for a permutation unitary (cycles with --level, or an element).
    CheckExt { unitary: String },
    /// The menu of candidate images of U at --level.
    Templates,
    /// Builds unitaries from the known families.
    Construct {
        #[arg(value_enum)]
        kind: ConstructKind,
        /// Permutation of level k-1 in cycle notation.
        #[arg(default_value = "()")]
        perm: String,
    },
    /// Extendible permutation unitaries at --level for --template or --all-templates.
    Enumerate {
        #[arg(long)]
        all_templates: bool,
    },
    /// Looks for a certificate that λ_u is an automorphism (--depth iterations, default 6).
    Probe { unitary: String },
    /// Checks every row of a table of extendible unitaries.
    VerifyTable {
        /// Tab-separated table; the built-in level-3 table if omitted.
        #[arg(env = "QU2_TABLE")]
        path: Option<PathBuf>,
    },
    /// Checks the sizes of the constructive families and that their members extend.
    VerifyCounts {
        /// Pure unitaries sampled per sign at levels where the family is larger.
        #[arg(long, default_value_t = 1000)]
        sample: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => Failure::Usage(e.to_string()),
            other => Failure::Engine(other),
        }
    }
}

type Outcome = Result<Report, Failure>;

/// Text and JSON renderings of one result. `failed` marks suites with failing checks.
struct Report {
    text: String,
    json: Value,
    summary: Option<String>,
    failed: bool,
}

impl Report {
    fn new(text: impl Into<String>, json: Value) -> Self {
        Report { text: text.into(), json, summary: None, failed: false }
    }
}

/// Runs the command line `args` (including the program name), writing
/// results to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = write!(err, "{}", e.render());
            return 2;
        }
        Err(e) => {
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    let outcome = match cli.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(Failure::Usage(format!("cannot start {n} worker threads: {e}"))),
        },
        None => dispatch(&cli),
    };
    match outcome {
        Ok(report) => {
            let written = if cli.json {
                let mut r = writeln!(out, "{}", report.json);
                if let Some(s) = &report.summary {
                    r = r.and_then(|_| writeln!(out, "{}", json!({ "summary": s })));
                }
                r
            } else {
                let mut r = if report.text.is_empty() { Ok(()) } else { writeln!(out, "{}", report.text) };
                if let Some(s) = &report.summary {
                    r = r.and_then(|_| writeln!(out, "{s}"));
                }
                r
            };
            if written.is_err() {
                return 1;
            }
            i32::from(report.failed)
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Engine(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn expr(text: &str) -> Result<Element, Failure> {
    parse_element(text).map_err(|e| match e {
        Error::Parse { position, message } => {
            Failure::Usage(format!("parse error at position {position}: {message}\n  {text}\n  {:>1$}", "^", position + 1))
        }
        other => Failure::Engine(other),
    })
}

fn level(cli: &Cli) -> Result<usize, Failure> {
    cli.level.ok_or_else(|| Failure::Usage("this command needs --level".into()))
}

fn looks_like_cycles(text: &str) -> bool {
    let t = text.trim();
    t.starts_with('(') && t.chars().all(|c| c.is_ascii_digit() || c.is_whitespace() || "(),".contains(c))
}

/// A permutation unitary from cycle notation (needs --level) or from an element.
fn unitary(cli: &Cli, text: &str) -> Result<PermUnitary, Failure> {
    if looks_like_cycles(text) {
        return Ok(PermUnitary::parse_cycles(level(cli)?, text)?);
    }
    let e = expr(text)?;
    Ok(match cli.level {
        Some(k) => PermUnitary::from_element_at_level(&e, k)?,
        None => PermUnitary::from_element(&e)?,
    })
}

fn template(k: usize, text: &str) -> Result<(String, Element), Failure> {
    match template_by_name(k, text) {
        Ok(t) => Ok((t.name, t.element)),
        Err(name_err) => match (parse_element(text), name_err) {
            (Ok(e), _) => Ok((text.to_string(), e)),
            (Err(_), e @ Error::Domain(_)) => Err(e.into()),
            (Err(_), _) => Ok((text.to_string(), expr(text)?)),
        },
    }
}

fn element_report(e: &Element) -> Report {
    Report::new(e.to_string(), json!({ "element": e.to_json(), "text": e.to_string() }))
}

fn flag(b: bool) -> Report {
    Report::new(b.to_string(), json!({ "result": b }))
}

fn perm_json(u: &PermUnitary) -> Value {
    json!({ "level": u.level(), "cycles": u.cycle_notation(), "element": u.element().to_string() })
}

fn dispatch(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Normalize { expr: t } => Ok(element_report(&expr(t)?.normalize(cli.depth)?)),
        Command::Mul { exprs } => {
            let mut acc = Element::one();
            for t in exprs {
                acc = acc.mul(&expr(t)?);
            }
            Ok(element_report(&acc.compact()))
        }
        Command::Eq { left, right } => Ok(flag(expr(left)?.equals(&expr(right)?))),
        Command::Adjoint { expr: t } => Ok(element_report(&expr(t)?.adjoint().compact())),
        Command::Unitary { expr: t } => Ok(flag(expr(t)?.is_unitary())),
        Command::Membership { expr: t } => {
            let m = expr(t)?.membership();
            let text = format!("O2: {}\nBD: {}\nF2: {}\nD2: {}", m.in_o2, m.in_qt, m.in_f2, m.in_d2);
            Ok(Report::new(text, json!({ "o2": m.in_o2, "bd": m.in_qt, "f2": m.in_f2, "d2": m.in_d2 })))
        }
        Command::Putnam { expr: t } => {
            let form = expr(t)?.putnam_form()?;
            let lines: Vec<String> = form.parts.iter().map(|(p, n)| format!("({p}) U^{n}")).collect();
            let parts: Vec<Value> = form
                .parts
                .iter()
                .map(|(p, n)| json!({ "projection": p.to_json(), "text": p.to_string(), "exponent": bigint_json(n) }))
                .collect();
            Ok(Report::new(lines.join("\n"), json!({ "parts": parts })))
        }
        Command::Factor { expr: t } => {
            let (bd, v) = expr(t)?.bd_v_factor(cli.depth)?;
            Ok(Report::new(
                format!("BD: {bd}\nV: {v}"),
                json!({ "bd": bd.to_json(), "v": v.to_json(), "bd_text": bd.to_string(), "v_text": v.to_string() }),
            ))
        }
        Command::Charge { expr: t } => {
            let c = expr(t)?.total_charge()?;
            Ok(Report::new(c.to_string(), json!({ "charge": bigint_json(&c) })))
        }
        Command::Diagram { expr: t } => {
            let d = Diagram::from_element_at_depth(&expr(t)?, cli.depth)?;
            Ok(Report::new(d.to_string(), d.to_json()))
        }
        Command::Render { expr: t, format } => {
            let d = Diagram::from_element_at_depth(&expr(t)?, cli.depth)?;
            let f = match format {
                FormatArg::Dot => RenderFormat::Dot,
                FormatArg::Tikz => RenderFormat::Tikz,
            };
            let text = render(&d, f);
            Ok(Report::new(text.trim_end().to_string(), json!({ "format": format!("{format:?}").to_lowercase(), "source": text })))
        }
        Command::Reduce { expr: t } => {
            let d = Diagram::from_element(&expr(t)?)?.reduce();
            let e = d.to_element();
            Ok(Report::new(
                format!("{d}\n{e}"),
                json!({ "diagram": d.to_json(), "element": e.to_json(), "text": e.to_string() }),
            ))
        }
        Command::Eval { expr: t, n, phase } => eval(t, n, phase.as_deref()),
        Command::CheckExt { unitary: t } => check_ext(cli, t),
        Command::Templates => {
            let k = level(cli)?;
            let ts = u_templates(k)?;
            let text: Vec<String> = ts.iter().map(|t| t.to_string()).collect();
            let js: Vec<Value> = ts.iter().map(|t| json!({ "name": t.name, "element": t.element.to_string() })).collect();
            Ok(Report::new(text.join("\n"), json!({ "level": k, "templates": js })))
        }
        Command::Construct { kind, perm } => construct(cli, *kind, perm),
        Command::Enumerate { all_templates } => enumerate(cli, *all_templates),
        Command::Probe { unitary: t } => {
            let u = unitary(cli, t)?;
            let outcome = automorphism_probe(&u, cli.depth.unwrap_or(6));
            let text = match &outcome {
                q2_core::endo::ProbeOutcome::Stabilized { at, witness } => {
                    format!("stabilized at {at}\nwitness: {witness}")
                }
                q2_core::endo::ProbeOutcome::Inconclusive { depth, stalled_at: None } => {
                    format!("inconclusive after {depth} steps")
                }
                q2_core::endo::ProbeOutcome::Inconclusive { depth, stalled_at: Some(s) } => {
                    format!("inconclusive after {depth} steps (sequence constant from step {s}, witness check failed)")
                }
            };
            Ok(Report::new(text, outcome.to_json()))
        }
        Command::VerifyTable { path } => {
            let text = match path {
                Some(p) => std::fs::read_to_string(p)
                    .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display())))?,
                None => LEVEL3_TABLE.to_string(),
            };
            let report = verify_table(&text)?;
            let lines: Vec<String> = report.to_string().lines().map(str::to_string).collect();
            let body = lines[..lines.len() - 1].join("\n");
            let failed = report.verified() != report.total();
            Ok(Report {
                text: body,
                json: serde_json::to_value(&report).expect("report serializes"),
                summary: Some(report.summary()),
                failed,
            })
        }
        Command::VerifyCounts { sample, seed } => verify_counts(cli, *sample, *seed),
    }
}

fn eval(t: &str, n: &str, phase: Option<&str>) -> Outcome {
    let n: num_bigint::BigInt = n.parse().map_err(|_| Failure::Usage(format!("'{n}' is not an integer")))?;
    if let Some(z) = phase {
        let z: Phase = z.parse()?;
        let word = parse_generators(t)?;
        let v = phase_apply(&z, &word, n);
        return Ok(Report::new(v.to_string(), v.to_json()));
    }
    let image = apply_basis(&expr(t)?, &n);
    let text = if image.is_empty() {
        "0".to_string()
    } else {
        image
            .iter()
            .map(|(c, i)| if c == &num_traits::One::one() { format!("e_{i}") } else { format!("{c} e_{i}") })
            .collect::<Vec<_>>()
            .join(" + ")
    };
    let js: Vec<Value> = image.iter().map(|(c, i)| json!({ "coeff": c.to_string(), "index": bigint_json(i) })).collect();
    Ok(Report::new(text, json!({ "image": js })))
}

fn check_ext(cli: &Cli, t: &str) -> Outcome {
    let u = unitary(cli, t)?;
    let k = u.level();
    if let Some(name) = &cli.template {
        let (name, tilde) = template(k, name)?;
        let ext = check_extension_detail(&u.element(), &tilde)?;
        let text = format!("ext1: {}\next2: {}\nextends: {}", ext.ext1, ext.ext2, ext.holds());
        return Ok(Report::new(
            text,
            json!({ "unitary": perm_json(&u), "template": name, "u_tilde": tilde.to_string(),
                    "ext1": ext.ext1, "ext2": ext.ext2, "extends": ext.holds() }),
        ));
    }
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    let mut holds = Vec::new();
    for tpl in u_templates(k)? {
        let ext = check_extension_detail(&u.element(), &tpl.element)?;
        lines.push(format!("{:<16} ext1 {:<5} ext2 {:<5}", tpl.name, ext.ext1, ext.ext2));
        rows.push(json!({ "template": tpl.name, "ext1": ext.ext1, "ext2": ext.ext2 }));
        if ext.holds() {
            holds.push(tpl.name.clone());
        }
    }
    lines.push(format!("extends with: {}", if holds.is_empty() { "none".to_string() } else { holds.join(", ") }));
    Ok(Report::new(lines.join("\n"), json!({ "unitary": perm_json(&u), "checks": rows, "extends_with": holds })))
}

fn construct(cli: &Cli, kind: ConstructKind, perm: &str) -> Outcome {
    let k = level(cli)?;
    let single = |u: PermUnitary, tilde: Element| -> Outcome {
        let ext = check_extension_detail(&u.element(), &tilde)?;
        let text = format!("{}\n{}\nU -> {}\nverified: {}", u.cycle_notation(), u.element(), tilde, ext.holds());
        let mut js = perm_json(&u);
        js["u_tilde"] = json!(tilde.to_string());
        js["verified"] = json!(ext.holds());
        Ok(Report::new(text, js))
    };
    let base = || -> Result<PermUnitary, Failure> {
        if k < 2 {
            return Err(Failure::Engine(Error::Domain("constructions start at level 2".into())));
        }
        Ok(PermUnitary::parse_cycles(k - 1, perm)?)
    };
    match kind {
        ConstructKind::Plus | ConstructKind::Minus => {
            let plus = matches!(kind, ConstructKind::Plus);
            let u = make_u_p(&base()?, if plus { Sign::Plus } else { Sign::Minus });
            let n = num_bigint::BigInt::from(1) << (k - 1);
            single(u, Element::u_power(if plus { n } else { -n }))
        }
        ConstructKind::Inner | ConstructKind::InnerFlip => {
            let endo = make_inner_phi(&base()?, matches!(kind, ConstructKind::InnerFlip))?;
            single(endo.u, endo.u_tilde)
        }
        ConstructKind::Tower => Ok(element_report(&f_tower(k))),
        ConstructKind::Family => {
            let name = cli.template.as_deref().ok_or_else(|| Failure::Usage("family needs --template NAME".into()))?;
            let t = template_by_name(k, name)?;
            let fam = template_family(&t)?;
            let text: Vec<String> = fam.iter().map(|u| u.cycle_notation()).collect();
            let js: Vec<Value> = fam.iter().map(perm_json).collect();
            let mut r = Report::new(text.join("\n"), json!({ "template": t.name, "members": js }));
            r.summary = Some(format!("{} unitaries", fam.len()));
            Ok(r)
        }
    }
}

fn enumerate(cli: &Cli, all: bool) -> Outcome {
    let k = level(cli)?;
    let mode = match cli.mode {
        Some(ModeArg::Constructive) => Mode::Constructive,
        Some(ModeArg::Brute) | None => Mode::Brute,
    };
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    if all {
        if cli.template.is_some() {
            return Err(Failure::Usage("--all-templates and --template are exclusive".into()));
        }
        let pairs: Vec<(PermUnitary, String)> = match mode {
            Mode::Brute => {
                let c = classify(k)?;
                for (u, names) in &c.conflicts {
                    notes.push(format!("conflict: {} verifies against {}", u.cycle_notation(), names.join(", ")));
                }
                for (name, extra, missing) in &c.differences {
                    let cyc = |v: &[PermUnitary]| v.iter().map(|u| u.cycle_notation()).collect::<Vec<_>>().join(" ");
                    notes.push(format!("{name}: brute force only [{}], constructive only [{}]", cyc(extra), cyc(missing)));
                }
                c.pairs
            }
            Mode::Constructive => {
                let mut set = BTreeSet::new();
                for t in u_templates(k)? {
                    for u in template_family(&t)? {
                        set.insert((u, t.name.clone()));
                    }
                }
                set.into_iter().collect()
            }
        };
        for (u, name) in &pairs {
            lines.push(format!("{}\t{}", u.cycle_notation(), name));
            rows.push(json!({ "unitary": perm_json(u), "template": name }));
        }
    } else {
        let text = cli
            .template
            .as_deref()
            .ok_or_else(|| Failure::Usage("enumerate needs --template or --all-templates".into()))?;
        let (name, tilde) = template(k, text)?;
        for u in enumerate_extendible(k, &tilde, mode)? {
            lines.push(format!("{}\t{}", u.cycle_notation(), name));
            rows.push(json!({ "unitary": perm_json(&u), "template": name }));
        }
    }
    let count = rows.len();
    lines.extend(notes.iter().cloned());
    let mut r = Report::new(lines.join("\n"), json!({ "level": k, "results": rows, "notes": notes }));
    r.summary = Some(format!("{count} results"));
    Ok(r)
}

fn factorial(n: u64) -> u128 {
    (1..=n as u128).product()
}

fn verify_counts(cli: &Cli, sample_size: usize, seed: u64) -> Outcome {
    let levels: Vec<usize> = match cli.level {
        Some(k) => vec![k],
        None => vec![2, 3, 4],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    let (mut passed, mut total) = (0usize, 0usize);
    let mut record = |label: String, expected: u128, family: Vec<PermUnitary>, checked: Vec<PermUnitary>, tilde: Element| {
        let distinct = family.iter().collect::<BTreeSet<_>>().len();
        let extend = checked
            .iter()
            .filter(|u| check_extension_detail(&u.element(), &tilde).map(|e| e.holds()).unwrap_or(false))
            .count();
        let ok = family.len() as u128 == expected && distinct == family.len() && extend == checked.len();
        total += 1;
        passed += usize::from(ok);
        lines.push(format!(
            "{} {label}: {} distinct of {expected} expected, {extend}/{} extend",
            if ok { "ok  " } else { "FAIL" },
            distinct,
            checked.len()
        ));
        rows.push(json!({ "check": label, "ok": ok, "count": family.len(), "distinct": distinct,
                          "expected": expected.to_string(), "extend": extend, "checked": checked.len() }));
    };
    for k in levels {
        if k < 2 {
            return Err(Failure::Engine(Error::Domain("families start at level 2".into())));
        }
        for sign in [Sign::Plus, Sign::Minus] {
            let fam = pure_family(k, sign)?;
            let checked: Vec<PermUnitary> = if fam.len() <= sample_size {
                fam.clone()
            } else {
                let mut idx = sample(&mut rng, fam.len(), sample_size).into_vec();
                idx.sort_unstable();
                idx.into_iter().map(|i| fam[i].clone()).collect()
            };
            let n = num_bigint::BigInt::from(1) << (k - 1);
            let plus = matches!(sign, Sign::Plus);
            let tilde = Element::u_power(if plus { n } else { -n });
            let label = format!("k={k} {}", if plus { "plus" } else { "minus" });
            record(label, factorial(1 << (k - 1)), fam, checked, tilde);
        }
        for h in 0..=k - 2 {
            let expected = (factorial(1 << (k - h - 2)) << h).pow(2);
            for variant in [1u8, 2] {
                let fam = mixed_family(k, h, variant)?;
                let tilde = template_by_name(k, &format!("mixed{variant}:{h}"))?.element;
                record(format!("k={k} mixed{variant}:{h}"), expected, fam.clone(), fam, tilde);
            }
        }
    }
    Ok(Report {
        text: lines.join("\n"),
        json: json!({ "checks": rows }),
        summary: Some(format!("{passed}/{total} counts verified")),
        failed: passed != total,
    })
}
