use serde_json::{json, Value};

use crate::format::{self, CertificateDoc, Closure, Document};
use crate::homeo::{Branch, Homeo};
use crate::measure::{MeasureKind, MeasureSpec};
use crate::rational::{fmt_rational, Rational};
use crate::space::{ClopenSet, Signature};
use crate::topology::NeighborhoodSpec;

fn words(c: &ClopenSet) -> Value {
    let sep = c.signature().max_radix() > 10;
    Value::Array(c.words().iter().map(|w| json!(w.fmt_with(sep))).collect())
}

fn rationals(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|r| json!(fmt_rational(r))).collect())
}

fn branches(s: &Signature, list: &[Branch]) -> Value {
    let sep = s.max_radix() > 10;
    Value::Array(
        list.iter()
            .map(|b| json!({"domain": b.domain.fmt_with(sep), "image": b.image.fmt_with(sep), "shift": b.shift}))
            .collect(),
    )
}

fn measure(m: &MeasureSpec) -> Value {
    let s = m.signature();
    match m.kind() {
        k if *k == *MeasureSpec::uniform(s).kind() => json!({"type": "uniform"}),
        MeasureKind::Product { preperiod, period } => json!({
            "type": "product",
            "preperiod": preperiod.iter().map(|r| rationals(r)).collect::<Vec<_>>(),
            "period": period.iter().map(|r| rationals(r)).collect::<Vec<_>>(),
        }),
        MeasureKind::Dirac(p) => json!({"type": "dirac", "point": format::point(s, p)}),
        MeasureKind::Mixture(comps) => json!({
            "type": "mix",
            "components": comps.iter().map(|(w, c)| json!({"weight": fmt_rational(w), "measure": measure(c)})).collect::<Vec<_>>(),
        }),
    }
}

fn homeo(h: &Homeo) -> Value {
    let s = h.signature();
    let mut v = match h {
        Homeo::Cylinder(c) => json!({"type": "tree-pair", "branches": branches(s, c.branches())}),
        Homeo::Odometer(o) => json!({"type": "odometer", "shift": o.shift()}),
        Homeo::Tower(t) => json!({
            "type": "tower",
            "cycle": t.cycle().iter().map(words).collect::<Vec<_>>(),
            "links": t.links().iter().map(|l| branches(s, &l.branches)).collect::<Vec<_>>(),
        }),
        Homeo::Composite(factors) => json!({
            "type": "composite",
            "factors": factors.iter().map(|(f, k)| json!({"homeo": homeo(f), "power": k})).collect::<Vec<_>>(),
        }),
    };
    v["signature"] = json!(format::sig(s));
    v
}

fn neighborhood(n: &NeighborhoodSpec) -> Value {
    let ms = |list: &[MeasureSpec]| list.iter().map(measure).collect::<Vec<_>>();
    let sets = |list: &[ClopenSet]| list.iter().map(words).collect::<Vec<_>>();
    match n {
        NeighborhoodSpec::P { base, sets: s } => json!({"type": "p", "base": homeo(base), "sets": sets(s)}),
        NeighborhoodSpec::Uniform { base, measures, epsilon } => json!({
            "type": "uniform", "base": homeo(base), "measures": ms(measures), "epsilon": fmt_rational(epsilon),
        }),
        NeighborhoodSpec::BarP { base, sets: s, measures, epsilon } => json!({
            "type": "barp", "base": homeo(base), "sets": sets(s), "measures": ms(measures), "epsilon": fmt_rational(epsilon),
        }),
        NeighborhoodSpec::WeakBall { base, radius } => json!({"type": "weak", "base": homeo(base), "radius": fmt_rational(radius)}),
    }
}

/// The document as JSON, field for field with the text record.
pub fn to_json(doc: &Document) -> Value {
    let (kind, mut body) = match doc {
        Document::Signature(s) => ("signature", json!({"signature": format::sig(s)})),
        Document::Clopen(c) => ("clopen", json!({"signature": format::sig(c.signature()), "words": words(c)})),
        Document::Measure(m) => ("measure", json!({"signature": format::sig(m.signature()), "measure": measure(m)})),
        Document::Homeo(h) => ("homeo", json!({"homeo": homeo(h)})),
        Document::Neighborhood(n) => ("neighborhood", json!({"neighborhood": neighborhood(n)})),
        Document::Castle(c) => (
            "castle",
            json!({
                "signature": format::sig(c.base_set.signature()),
                "towers": c.towers.iter().map(|t| t.levels.iter().map(words).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "bounds": rationals(&c.bounds),
            }),
        ),
        Document::Certificate(c) => (
            "certificate",
            match c {
                CertificateDoc::Witness { set, closure } => json!({
                    "type": "witness",
                    "signature": format::sig(set.signature()),
                    "set": words(set),
                    "closure": if *closure == Closure::Forward { "forward-closed" } else { "backward-closed" },
                }),
                CertificateDoc::Measures(v) => json!({"type": "measures", "values": rationals(v)}),
                CertificateDoc::Distance(d) => json!({"type": "distance", "value": fmt_rational(d)}),
                CertificateDoc::DistanceInterval(lo, hi) => {
                    json!({"type": "distance", "lower": fmt_rational(lo), "upper": fmt_rational(hi)})
                }
            },
        ),
    };
    body["version"] = json!(format::VERSION);
    body["kind"] = json!(kind);
    body
}
