//! The `.cdyn` text format: one record per document, behind a `cdyn 1`
//! header. Printing is canonical and parsing rejects non-canonical lists, so
//! `parse(print(d)) == d`. See `docs/format.md` for the grammar.

mod json;
mod parse;

use crate::error::Result;
use crate::homeo::{Branch, Homeo};
use crate::measure::{MeasureKind, MeasureSpec};
use crate::rational::{fmt_rational, Rational};
use crate::space::{ClopenSet, Point, Signature};
use crate::synth::Castle;
use crate::topology::NeighborhoodSpec;

pub use json::to_json;
pub(crate) use parse::{parse_clopen, parse_clopens, parse_measure, parse_signature, parse_with, Cursor};

pub const VERSION: u32 = 1;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Closure {
    /// `TF ⊆ F`.
    Forward,
    /// `F ⊆ TF`.
    Backward,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CertificateDoc {
    Witness { set: ClopenSet, closure: Closure },
    Measures(Vec<Rational>),
    Distance(Rational),
    DistanceInterval(Rational, Rational),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Document {
    Signature(Signature),
    Clopen(ClopenSet),
    Measure(MeasureSpec),
    Homeo(Homeo),
    Neighborhood(NeighborhoodSpec),
    Castle(Castle),
    Certificate(CertificateDoc),
}

pub fn parse(text: &str) -> Result<Document> {
    Cursor::new(text).document()
}

pub fn print(doc: &Document) -> String {
    format!("cdyn {VERSION}\n{}\n", record(doc))
}

/// The record line of `doc`, without the header.
pub fn record(doc: &Document) -> String {
    match doc {
        Document::Signature(s) => format!("signature {}", sig(s)),
        Document::Clopen(c) => format!("clopen {} {}", sig(c.signature()), c.fmt_words()),
        Document::Measure(m) => format!("measure {} {}", sig(m.signature()), measure(m)),
        Document::Homeo(h) => format!("homeo {}", homeo(h)),
        Document::Neighborhood(n) => format!("neighborhood {}", neighborhood(n)),
        Document::Castle(c) => castle(c),
        Document::Certificate(c) => format!("certificate {}", certificate(c)),
    }
}

pub fn sig(s: &Signature) -> String {
    if s.is_dyadic() {
        return "dyadic".into();
    }
    let list = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
    format!("sig({}|{})", list(s.preperiod()), list(s.period()))
}

pub fn point(s: &Signature, p: &Point) -> String {
    p.fmt_with(parse::separated(s))
}

fn rationals(v: &[Rational]) -> String {
    format!("[{}]", v.iter().map(fmt_rational).collect::<Vec<_>>().join(","))
}

pub fn measure(m: &MeasureSpec) -> String {
    let s = m.signature();
    match m.kind() {
        k if *k == *MeasureSpec::uniform(s).kind() => "uniform".into(),
        MeasureKind::Product { preperiod, period } => {
            let rows = |v: &[Vec<Rational>]| v.iter().map(|r| rationals(r)).collect::<Vec<_>>().join(";");
            format!("product({}|{})", rows(preperiod), rows(period))
        }
        MeasureKind::Dirac(p) => format!("dirac {}", point(s, p)),
        MeasureKind::Mixture(comps) => {
            let parts: Vec<String> = comps.iter().map(|(w, c)| format!("{}: {}", fmt_rational(w), measure(c))).collect();
            format!("mix{{{}}}", parts.join("; "))
        }
    }
}

pub fn branches(s: &Signature, list: &[Branch]) -> String {
    let sep = parse::separated(s);
    format!("{{{}}}", list.iter().map(|b| b.fmt_with(sep)).collect::<Vec<_>>().join(","))
}

/// `<kind> <sig> <payload>`.
pub fn homeo(h: &Homeo) -> String {
    let (kind, payload) = homeo_parts(h);
    if payload.is_empty() {
        format!("{kind} {}", sig(h.signature()))
    } else {
        format!("{kind} {} {payload}", sig(h.signature()))
    }
}

fn homeo_parts(h: &Homeo) -> (&'static str, String) {
    let s = h.signature();
    match h {
        Homeo::Cylinder(c) => ("tree-pair", branches(s, c.branches())),
        Homeo::Odometer(o) if o.shift() == 1 => ("odometer", String::new()),
        Homeo::Odometer(o) => ("odometer", format!("shift {}", o.shift())),
        Homeo::Tower(t) => {
            let cycle: Vec<String> = t.cycle().iter().map(ClopenSet::fmt_words).collect();
            let links: Vec<String> = t.links().iter().map(|l| branches(s, &l.branches)).collect();
            ("tower", format!("cycle [{}] links [{}]", cycle.join(","), links.join(",")))
        }
        Homeo::Composite(factors) => {
            let parts: Vec<String> = factors
                .iter()
                .map(|(f, k)| {
                    let (kind, payload) = homeo_parts(f);
                    let inner = if payload.is_empty() { kind.to_string() } else { format!("{kind} {payload}") };
                    format!("({inner})^{k}")
                })
                .collect();
            ("composite", format!("[{}]", parts.join(", ")))
        }
    }
}

fn clopens(list: &[ClopenSet]) -> String {
    format!("[{}]", list.iter().map(ClopenSet::fmt_words).collect::<Vec<_>>().join(","))
}

fn measures(list: &[MeasureSpec]) -> String {
    format!("[{}]", list.iter().map(measure).collect::<Vec<_>>().join("; "))
}

pub fn neighborhood(n: &NeighborhoodSpec) -> String {
    match n {
        NeighborhoodSpec::P { base, sets } => format!("p base {} sets {}", homeo(base), clopens(sets)),
        NeighborhoodSpec::Uniform { base, measures: ms, epsilon } => {
            format!("uniform base {} measures {} epsilon {}", homeo(base), measures(ms), fmt_rational(epsilon))
        }
        NeighborhoodSpec::BarP { base, sets, measures: ms, epsilon } => format!(
            "barp base {} sets {} measures {} epsilon {}",
            homeo(base),
            clopens(sets),
            measures(ms),
            fmt_rational(epsilon)
        ),
        NeighborhoodSpec::WeakBall { base, radius } => format!("weak base {} radius {}", homeo(base), fmt_rational(radius)),
    }
}

pub fn castle(c: &Castle) -> String {
    let s = c.base_set.signature();
    let towers: Vec<String> = c.towers.iter().map(|t| clopens(&t.levels)).collect();
    format!("castle {} towers [{}] bounds {}", sig(s), towers.join(","), rationals(&c.bounds))
}

pub fn certificate(c: &CertificateDoc) -> String {
    match c {
        CertificateDoc::Witness { set, closure } => {
            let label = match closure {
                Closure::Forward => "forward-closed",
                Closure::Backward => "backward-closed",
            };
            format!("witness {} {} {label}", sig(set.signature()), set.fmt_words())
        }
        CertificateDoc::Measures(v) => format!("measures {}", rationals(v)),
        CertificateDoc::Distance(d) => format!("distance {}", fmt_rational(d)),
        CertificateDoc::DistanceInterval(lo, hi) => format!("distance {}..{}", fmt_rational(lo), fmt_rational(hi)),
    }
}
