//! The `cdyn` command line. Exit codes: 0 success, 2 a witness or refusal
//! was returned, 1 error.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::format::{self, CertificateDoc, Closure, Document};
use crate::generate::Generator;
use crate::homeo::{
    centralizer_index_sequence, difference_set_at, full_group_membership, period_structure, CentralizerResult,
    CylinderHomeo, FullGroupResult, Homeo, Odometer, DEFAULT_DEPTH,
};
use crate::measure::{measure_of, pushforward_measure_of, MeasureSpec};
use crate::rational::{fmt_rational, int, parse_rational, Rational};
use crate::space::{ClopenSet, Signature};
use crate::synth::{self, ApproxCertificate, ApproxMode, ApproxOutcome, Synthesis};
use crate::topology::{defect_over_partition, in_neighborhood_at, weak_distance_at, Certificate, DefectKind, WeakDistance};

#[derive(Parser, Debug)]
#[command(name = "cdyn", version, about = "Exact computation with homeomorphisms of the Cantor set")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    pub format: OutputFormat,
    /// Resolution for tower systems and tabulation.
    #[arg(long, default_value_t = DEFAULT_DEPTH, global = true)]
    pub depth: usize,
    /// Seed for `generate`; every other command is deterministic.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum DefectArg {
    TauPrime,
    BarTau,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Weak distance d_w(S, T).
    Dist { s: String, t: String },
    /// Membership of S in a neighborhood document.
    Member {
        s: String,
        #[arg(long)]
        neighborhood: String,
    },
    /// Lower bound for a defect functional over a partition.
    Defect {
        s: String,
        t: String,
        #[arg(long, value_enum)]
        kind: DefectArg,
        #[arg(long)]
        measure: String,
        #[arg(long)]
        partition: String,
        #[arg(long)]
        heuristic: bool,
    },
    /// Composite S∘T∘… (rightmost acts first).
    Compose {
        #[arg(required = true, num_args = 1..)]
        maps: Vec<String>,
    },
    /// Image of every cylinder of length `--depth`.
    Tabulate { t: String },
    /// The difference set E(S, T).
    Diff { s: String, t: String },
    /// Points of period at most `--bound`.
    Periods {
        t: String,
        #[arg(long, default_value_t = 8)]
        bound: usize,
    },
    /// Whether S lies in the topological full group of T.
    Fullgroup {
        s: String,
        t: String,
        #[arg(long, default_value_t = 8)]
        bound: usize,
    },
    /// Index sequence showing R commutes with an odometer, level by level.
    Centralizer {
        r: String,
        #[arg(long)]
        target: String,
    },
    /// Constructive approximation.
    Synth {
        #[arg(value_enum)]
        kind: SynthKind,
        #[command(flatten)]
        opts: SynthOpts,
    },
    /// Kakutani–Rokhlin castle with a large base-orbit.
    Rokhlin {
        #[command(flatten)]
        opts: SynthOpts,
    },
    /// Overlap graph of T over a partition, as DOT.
    GraphDot {
        #[arg(long)]
        target: String,
        #[arg(long)]
        partition: String,
    },
    /// Measure of a clopen set, optionally pushed forward by `--target`.
    Measure {
        #[arg(long)]
        measure: String,
        #[arg(long)]
        set: String,
        #[arg(long)]
        target: Option<String>,
        #[arg(long, default_value = "dyadic")]
        signature: String,
    },
    /// A random canonical document drawn from `--seed`.
    Generate,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum SynthKind {
    Odometer,
    Periodic,
    Rank1,
    Aperiodize,
    Fundamental,
    Rokhlin,
    Truncate,
}

#[derive(Args, Debug, Clone)]
pub struct SynthOpts {
    #[arg(long)]
    pub target: String,
    #[arg(long)]
    pub partition: Option<String>,
    #[arg(long = "measure")]
    pub measures: Vec<String>,
    #[arg(long)]
    pub epsilon: Option<String>,
    #[arg(long)]
    pub bound: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub period: Option<usize>,
}

/// What a command produced.
pub struct Report {
    pub text: String,
    pub json: Value,
    pub exit: i32,
}

impl Report {
    fn doc(doc: &Document, exit: i32) -> Self {
        Report { text: format::print(doc), json: format::to_json(doc), exit }
    }

    fn value(text: String, json: Value) -> Self {
        Report { text: format!("{text}\n"), json, exit: 0 }
    }

    fn note(mut self, line: &str, key: &str, value: Value) -> Self {
        let _ = writeln!(self.text, "# {line}");
        self.json[key] = value;
        self
    }
}

fn read_arg(text: &str) -> Result<String> {
    match text.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{path}: {e}"))),
        None => Ok(text.to_string()),
    }
}

/// `id[:sig]`, `swap`, `odometer:<sig>[:k]`, `@file`, or a homeo record.
pub fn parse_homeo(text: &str) -> Result<Homeo> {
    if let Some(path) = text.strip_prefix('@') {
        let body = read_arg(&format!("@{path}"))?;
        return match format::parse(&body)? {
            Document::Homeo(h) => Ok(h),
            _ => Err(Error::InvalidArgument(format!("{path} is not a homeo document"))),
        };
    }
    let t = text.trim();
    if t == "id" {
        return Ok(Homeo::identity(&Signature::dyadic()));
    }
    if let Some(s) = t.strip_prefix("id:") {
        return Ok(Homeo::identity(&format::parse_signature(s)?));
    }
    if t == "swap" {
        return Ok(Homeo::Cylinder(CylinderHomeo::swap()));
    }
    if let Some(rest) = t.strip_prefix("odometer:") {
        let (s, k) = match rest.rsplit_once(':') {
            Some((s, k)) if k.trim().parse::<i64>().is_ok() => (s, k.trim().parse().unwrap()),
            _ => (rest, 1),
        };
        return Ok(Homeo::Odometer(Odometer::new(&format::parse_signature(s)?, k)));
    }
    let t = t.strip_prefix("homeo ").unwrap_or(t);
    format::parse_with(t, |c| c.homeo())
}

fn parse_odometer(text: &str) -> Result<Odometer> {
    match parse_homeo(text)? {
        Homeo::Odometer(o) => Ok(o),
        _ => Err(Error::InvalidArgument(format!("{text} is not an odometer"))),
    }
}

fn parse_measure(sig: &Signature, text: &str) -> Result<MeasureSpec> {
    let body = read_arg(text)?;
    if text.starts_with('@') {
        return match format::parse(&body)? {
            Document::Measure(m) if m.signature() == sig => Ok(m),
            Document::Measure(_) => Err(Error::SignatureMismatch),
            _ => Err(Error::InvalidArgument(format!("{text} is not a measure document"))),
        };
    }
    format::parse_measure(sig, &body)
}

fn parse_rational_arg(name: &str, text: &Option<String>) -> Result<Rational> {
    let t = text.as_ref().ok_or_else(|| Error::InvalidArgument(format!("--{name} is required")))?;
    parse_rational(t)
}

fn partition(sig: &Signature, text: &Option<String>) -> Result<Vec<ClopenSet>> {
    let t = text.as_ref().ok_or_else(|| Error::InvalidArgument("--partition is required".into()))?;
    format::parse_clopens(sig, &read_arg(t)?)
}

fn rationals_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|r| json!(fmt_rational(r))).collect())
}

fn rationals_text(v: &[Rational]) -> String {
    v.iter().map(fmt_rational).collect::<Vec<_>>().join(", ")
}

fn witness(set: ClopenSet) -> Report {
    Report::doc(&Document::Certificate(CertificateDoc::Witness { set, closure: Closure::Forward }), 2)
}

fn distance_doc(d: &WeakDistance) -> CertificateDoc {
    match d {
        WeakDistance::Exact(v) => CertificateDoc::Distance(v.clone()),
        WeakDistance::Interval { lower, upper } => CertificateDoc::DistanceInterval(lower.clone(), upper.clone()),
    }
}

fn synth(kind: SynthKind, o: &SynthOpts) -> Result<Report> {
    let t = parse_homeo(&o.target)?;
    let sig = t.signature().clone();
    let measures = || -> Result<Vec<MeasureSpec>> { o.measures.iter().map(|m| parse_measure(&sig, m)).collect() };
    match kind {
        SynthKind::Odometer => match synth::odometer_in_weak_neighborhood(&t, &partition(&sig, &o.partition)?)? {
            Synthesis::Success(s) => Ok(Report::doc(&Document::Homeo(Homeo::Tower(s.tower)), 0)),
            Synthesis::Witness(f) => Ok(witness(f)),
        },
        SynthKind::Periodic => match synth::periodic_in_weak_neighborhood(&t, &partition(&sig, &o.partition)?)? {
            Synthesis::Success(s) => Ok(Report::doc(&Document::Homeo(Homeo::Cylinder(s.map)), 0).note(
                &format!("period {}", s.period),
                "period",
                json!(s.period),
            )),
            Synthesis::Witness(f) => Ok(witness(f)),
        },
        SynthKind::Rank1 => {
            let eps = parse_rational_arg("epsilon", &o.epsilon)?;
            let r = synth::rank1_in_uniform_neighborhood(&t, &measures()?, &eps, o.bound.unwrap_or(2))?;
            let line = format!("certificate measures [{}] < {}", rationals_text(&r.certificate), fmt_rational(&eps));
            Ok(Report::doc(&Document::Homeo(Homeo::Tower(r.tower)), 0).note(&line, "certificate", rationals_json(&r.certificate)))
        }
        SynthKind::Aperiodize => {
            let p = exact(&t)?;
            let eps = parse_rational_arg("epsilon", &o.epsilon)?;
            let period = o.period.ok_or_else(|| Error::InvalidArgument("--period is required".into()))?;
            let a = synth::aperiodize_periodic(&p, &eps, period)?;
            let line = format!("certificate distance {} < {}", fmt_rational(&a.certificate), fmt_rational(&eps));
            Ok(Report::doc(&Document::Homeo(Homeo::Cylinder(a.map)), 0).note(
                &line,
                "certificate",
                json!(fmt_rational(&a.certificate)),
            ))
        }
        SynthKind::Fundamental => {
            let period = o.period.ok_or_else(|| Error::InvalidArgument("--period is required".into()))?;
            Ok(Report::doc(&Document::Clopen(synth::fundamental_domain(&exact(&t)?, period)?), 0))
        }
        SynthKind::Rokhlin => {
            let n = o.n.ok_or_else(|| Error::InvalidArgument("--n is required".into()))?;
            let eps = parse_rational_arg("epsilon", &o.epsilon)?;
            let c = synth::rokhlin_castle(&t, n, &measures()?, &eps, o.bound.unwrap_or(n))?;
            let line = format!("bound {} > {}", rationals_text(&c.bounds), fmt_rational(&(int(1) - &eps)));
            let bounds = rationals_json(&c.bounds);
            Ok(Report::doc(&Document::Castle(c), 0).note(&line, "bound", bounds))
        }
        SynthKind::Truncate => {
            let s = parse_odometer(&o.target)?;
            let eps = parse_rational_arg("epsilon", &o.epsilon)?;
            let mode = if o.measures.is_empty() { ApproxMode::Weak(eps) } else { ApproxMode::Uniform(measures()?, eps) };
            match synth::periodic_approx_odometer(&s, &mode)? {
                ApproxOutcome::Success(q) => {
                    let (line, value) = match &q.certificate {
                        ApproxCertificate::Distance(d) => (format!("certificate distance {}", fmt_rational(d)), json!(fmt_rational(d))),
                        ApproxCertificate::Measures(v) => {
                            (format!("certificate measures [{}]", rationals_text(v)), rationals_json(v))
                        }
                    };
                    Ok(Report::doc(&Document::Homeo(Homeo::Cylinder(q.map)), 0)
                        .note(&format!("depth {} period {}", q.depth, q.period), "period", json!(q.period.to_string()))
                        .note(&line, "certificate", value))
                }
                ApproxOutcome::Obstruction { measure, atom, mass } => {
                    let text = format!("obstruction measure {measure} atom {} mass {}\n", format::point(&sig, &atom), fmt_rational(&mass));
                    let json = json!({"kind": "obstruction", "measure": measure, "atom": format::point(&sig, &atom), "mass": fmt_rational(&mass)});
                    Ok(Report { text, json, exit: 2 })
                }
            }
        }
    }
}

fn exact(h: &Homeo) -> Result<CylinderHomeo> {
    h.exact().ok_or(Error::Unresolvable(DEFAULT_DEPTH))
}

pub fn execute(cli: &Cli) -> Result<Report> {
    let depth = cli.depth;
    match &cli.command {
        Command::Dist { s, t } => {
            let d = weak_distance_at(&parse_homeo(s)?, &parse_homeo(t)?, depth)?;
            let text = match &d {
                WeakDistance::Exact(v) => fmt_rational(v),
                WeakDistance::Interval { lower, upper } => format!("{}..{}", fmt_rational(lower), fmt_rational(upper)),
            };
            Ok(Report::value(text, format::to_json(&Document::Certificate(distance_doc(&d)))))
        }
        Command::Member { s, neighborhood } => {
            let spec = match format::parse(&read_arg(neighborhood)?)? {
                Document::Neighborhood(n) => n,
                _ => return Err(Error::InvalidArgument("expected a neighborhood document".into())),
            };
            let m = in_neighborhood_at(&parse_homeo(s)?, &spec, depth)?;
            let (cert_text, cert_json) = match &m.certificate {
                Certificate::SetImages { mismatched } => {
                    let list = mismatched.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
                    (format!("mismatched [{list}]"), json!({"mismatched": mismatched}))
                }
                Certificate::Measures(v) => {
                    (format::certificate(&CertificateDoc::Measures(v.clone())), format::to_json(&Document::Certificate(CertificateDoc::Measures(v.clone()))))
                }
                Certificate::Distance(d) => {
                    let doc = distance_doc(d);
                    (format::certificate(&doc), format::to_json(&Document::Certificate(doc)))
                }
            };
            let verdict = if m.member { "member" } else { "not member" };
            Ok(Report {
                text: format!("{verdict}\n{cert_text}\n"),
                json: json!({"member": m.member, "certificate": cert_json}),
                exit: if m.member { 0 } else { 2 },
            })
        }
        Command::Defect { s, t, kind, measure, partition: p, heuristic } => {
            let (s, t) = (parse_homeo(s)?, parse_homeo(t)?);
            let sig = s.signature().clone();
            let mu = parse_measure(&sig, measure)?;
            let parts = partition(&sig, &Some(p.clone()))?;
            let kind = match kind {
                DefectArg::TauPrime => DefectKind::TauPrime,
                DefectArg::BarTau => DefectKind::BarTau,
            };
            let b = defect_over_partition(kind, &s, &t, &mu, &parts, *heuristic)?;
            let text = format!(
                "value {}\nwitness {}\nexhaustive {}\n",
                fmt_rational(&b.value),
                b.witness.fmt_words(),
                if b.exhaustive { "yes" } else { "no" }
            );
            let json = json!({"value": fmt_rational(&b.value), "witness": b.witness.fmt_words(), "exhaustive": b.exhaustive});
            Ok(Report { text, json, exit: 0 })
        }
        Command::Compose { maps } => {
            let mut iter = maps.iter().rev();
            let mut acc = parse_homeo(iter.next().expect("clap requires one map"))?;
            for m in iter {
                acc = parse_homeo(m)?.compose(&acc)?;
            }
            Ok(Report::doc(&Document::Homeo(acc), 0))
        }
        Command::Tabulate { t } => {
            let t = parse_homeo(t)?;
            let sep = t.signature().max_radix() > 10;
            let rows = t.tabulate(depth)?;
            let mut text = String::new();
            for (w, img) in &rows {
                let _ = writeln!(text, "{} -> {}", w.fmt_with(sep), img.fmt_words());
            }
            let json = Value::Array(rows.iter().map(|(w, img)| json!({"cylinder": w.fmt_with(sep), "image": img.fmt_words()})).collect());
            Ok(Report { text, json, exit: 0 })
        }
        Command::Diff { s, t } => {
            let (s, t) = (parse_homeo(s)?, parse_homeo(t)?);
            let sig = s.signature().clone();
            let d = difference_set_at(&s, &t, depth)?;
            let removed: Vec<String> = d.removed_points().iter().map(|p| format::point(&sig, p)).collect();
            let text = format!(
                "core {}\nremoved [{}]\nunresolved {}\n",
                d.core().fmt_words(),
                removed.join(","),
                d.unresolved().fmt_words()
            );
            let json = json!({"core": d.core().fmt_words(), "removed": removed, "unresolved": d.unresolved().fmt_words()});
            Ok(Report { text, json, exit: 0 })
        }
        Command::Periods { t, bound } => {
            let t = exact(&parse_homeo(t)?)?;
            let sig = t.signature().clone();
            let ps = period_structure(&t, *bound);
            let mut text = String::new();
            let mut parts = Vec::new();
            for (p, set) in ps.parts.iter().filter(|(_, s)| !s.is_empty()) {
                let _ = writeln!(text, "period {p} {}", set.fmt_words());
                parts.push(json!({"period": p, "set": set.fmt_words()}));
            }
            let mut isolated = Vec::new();
            for (p, x) in &ps.isolated {
                let _ = writeln!(text, "isolated {p} {}", format::point(&sig, x));
                isolated.push(json!({"period": p, "point": format::point(&sig, x)}));
            }
            let powers = ps.identity_powers.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
            let _ = writeln!(text, "identity-powers [{powers}]");
            let _ = writeln!(text, "aperiodic-up-to {bound} {}", if ps.aperiodic_up_to_bound { "yes" } else { "no" });
            let json = json!({
                "parts": parts, "isolated": isolated, "identity_powers": ps.identity_powers,
                "residual": ps.residual.fmt_words(), "aperiodic_up_to_bound": ps.aperiodic_up_to_bound,
            });
            Ok(Report { text, json, exit: 0 })
        }
        Command::Fullgroup { s, t, bound } => match full_group_membership(&parse_homeo(s)?, &parse_homeo(t)?, *bound)? {
            FullGroupResult::Member(parts) => {
                let mut text = String::new();
                for (k, set) in &parts {
                    let _ = writeln!(text, "power {k} on {}", set.fmt_words());
                }
                let json = json!({"member": true, "parts": parts.iter().map(|(k, s)| json!({"power": k, "set": s.fmt_words()})).collect::<Vec<_>>()});
                Ok(Report { text, json, exit: 0 })
            }
            FullGroupResult::Refused => Ok(Report { text: "refused\n".into(), json: json!({"member": false}), exit: 2 }),
        },
        Command::Centralizer { r, target } => {
            let r = parse_homeo(r)?;
            let s = parse_odometer(target)?;
            match centralizer_index_sequence(&r, &s, depth)? {
                CentralizerResult::Indices(v) => {
                    let list = v.iter().map(u128::to_string).collect::<Vec<_>>();
                    Ok(Report::value(format!("indices [{}]", list.join(",")), json!({"indices": list})))
                }
                CentralizerResult::Failure { level, cylinder, image } => {
                    let sep = s.signature().max_radix() > 10;
                    let text = format!("failure level {level} cylinder {} image {}\n", cylinder.fmt_with(sep), image.fmt_words());
                    let json = json!({"level": level, "cylinder": cylinder.fmt_with(sep), "image": image.fmt_words()});
                    Ok(Report { text, json, exit: 2 })
                }
            }
        }
        Command::Synth { kind, opts } => synth(*kind, opts),
        Command::Rokhlin { opts } => synth(SynthKind::Rokhlin, opts),
        Command::GraphDot { target, partition: p } => {
            let t = parse_homeo(target)?;
            let parts = partition(t.signature(), &Some(p.clone()))?;
            let g = synth::overlap_graph(&t, &parts)?;
            let dot = g.to_dot();
            Ok(Report { json: json!({"dot": dot}), text: dot, exit: 0 })
        }
        Command::Measure { measure, set, target, signature } => {
            let sig = match target {
                Some(t) => parse_homeo(t)?.signature().clone(),
                None => format::parse_signature(signature)?,
            };
            let mu = parse_measure(&sig, measure)?;
            let set = format::parse_clopen(&sig, &read_arg(set)?)?;
            let v = match target {
                Some(t) => pushforward_measure_of(&mu, &parse_homeo(t)?, &set)?,
                None => measure_of(&mu, &set)?,
            };
            Ok(Report::value(fmt_rational(&v), json!({"value": fmt_rational(&v)})))
        }
        Command::Generate => Ok(Report::doc(&Generator::new(cli.seed).document(), 0)),
    }
}

/// Runs one invocation; returns `(stdout, stderr, exit code)`.
pub fn run<I, S>(args: I) -> (String, String, i32)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let out = e.render().to_string();
            return if code == 0 { (out, String::new(), 0) } else { (String::new(), out, 1) };
        }
    };
    if cli.format == OutputFormat::Dot && !matches!(cli.command, Command::GraphDot { .. }) {
        return (String::new(), "error: dot output is only available for graph-dot\n".into(), 1);
    }
    match execute(&cli) {
        Ok(r) => {
            let out = match cli.format {
                OutputFormat::Json => format!("{}\n", serde_json::to_string_pretty(&r.json).expect("serializable")),
                _ => r.text,
            };
            (out, String::new(), r.exit)
        }
        Err(e) => (String::new(), format!("error: {e}\n"), 1),
    }
}

pub fn main() -> i32 {
    let (out, err, code) = run(std::env::args_os());
    print!("{out}");
    eprint!("{err}");
    code
}
