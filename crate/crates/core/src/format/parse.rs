use crate::error::{Error, Result};
use crate::format::{Closure, CertificateDoc, Document};
use crate::homeo::{Branch, BranchMap, CylinderHomeo, Homeo, Odometer, TowerSystem};
use crate::measure::MeasureSpec;
use crate::rational::Rational;
use crate::space::{ClopenSet, Point, Signature, Word};
use crate::synth::{Castle, Tower};
use crate::topology::NeighborhoodSpec;

pub(crate) struct Cursor {
    chars: Vec<char>,
    pos: usize,
}

impl Cursor {
    pub(crate) fn new(text: &str) -> Self {
        Cursor { chars: text.chars().collect(), pos: 0 }
    }

    pub(crate) fn err(&self, message: impl Into<String>) -> Error {
        let before = &self.chars[..self.pos.min(self.chars.len())];
        let line = before.iter().filter(|&&c| c == '\n').count() + 1;
        let column = before.iter().rev().take_while(|&&c| c != '\n').count() + 1;
        Error::Syntax { line, column, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while let Some(&c) = self.chars.get(self.pos) {
            if c == '#' {
                while self.chars.get(self.pos).is_some_and(|&c| c != '\n') {
                    self.pos += 1;
                }
            } else if c.is_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn peek_raw(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        let n = s.chars().count();
        if self.chars.len() >= self.pos + n && self.chars[self.pos..self.pos + n].iter().copied().eq(s.chars()) {
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(format!("expected {s:?}")))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.peek_raw().is_some_and(|c| c.is_ascii_lowercase() || (self.pos > start && (c == '-' || c.is_ascii_digit()))) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a keyword"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        let save = self.pos;
        match self.ident() {
            Ok(k) if k == kw => Ok(()),
            _ => {
                self.pos = save;
                self.skip_ws();
                Err(self.err(format!("expected {kw:?}")))
            }
        }
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.peek_raw().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let d = self.digits();
        d.parse().map_err(|_| self.err("expected a number"))
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let neg = self.eat("-");
        let v = self.uint()? as i64;
        Ok(if neg { -v } else { v })
    }

    fn rational(&mut self) -> Result<Rational> {
        self.skip_ws();
        let start = self.pos;
        self.eat("-");
        if self.digits().is_empty() {
            return Err(self.err("expected a rational"));
        }
        if self.peek_raw() == Some('/') {
            self.pos += 1;
            self.digits();
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        crate::rational::parse_rational(&text).map_err(|_| self.err(format!("bad rational {text:?}")))
    }

    /// A digit block: single characters, or `.`-separated numbers.
    fn digit_block(&mut self, separated: bool) -> Result<Vec<u32>> {
        let mut out = Vec::new();
        if separated {
            loop {
                let d = self.digits();
                if d.is_empty() {
                    break;
                }
                out.push(d.parse().map_err(|_| self.err("digit too large"))?);
                if self.peek_raw() == Some('.') && self.chars.get(self.pos + 1).is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        } else {
            while let Some(c) = self.peek_raw().and_then(|c| c.to_digit(10)) {
                out.push(c);
                self.pos += 1;
            }
        }
        Ok(out)
    }

    fn word(&mut self, sig: &Signature) -> Result<Word> {
        self.skip_ws();
        if self.eat("ε") || self.eat("*") {
            return Ok(Word::empty());
        }
        if self.peek_raw() == Some('e') {
            self.pos += 1;
            return Ok(Word::empty());
        }
        let digits = self.digit_block(separated(sig))?;
        if digits.is_empty() {
            return Err(self.err("expected a word"));
        }
        Word::checked(sig, digits).map_err(|e| self.err(e.to_string()))
    }

    fn point(&mut self, sig: &Signature) -> Result<Point> {
        self.skip_ws();
        let sep = separated(sig);
        let pre = self.digit_block(sep)?;
        self.expect("(")?;
        let cycle = self.digit_block(sep)?;
        self.expect(")")?;
        if cycle.is_empty() {
            return Err(self.err("empty cycle"));
        }
        let p = Point::new(pre, cycle);
        p.validate(sig).map_err(|e| self.err(e.to_string()))?;
        Ok(p)
    }

    fn signature(&mut self) -> Result<Signature> {
        self.skip_ws();
        if self.eat("dyadic") {
            return Ok(Signature::dyadic());
        }
        self.keyword("sig")?;
        self.expect("(")?;
        let mut lists = vec![Vec::new(), Vec::new()];
        for (i, list) in lists.iter_mut().enumerate() {
            if i == 1 {
                self.expect("|")?;
            }
            if !matches!(self.peek(), Some('|') | Some(')')) {
                loop {
                    list.push(self.uint()? as u32);
                    if !self.eat(",") {
                        break;
                    }
                }
            }
        }
        self.expect(")")?;
        let period = lists.pop().unwrap();
        let pre = lists.pop().unwrap();
        Signature::new(pre, period).map_err(|e| self.err(e.to_string()))
    }

    fn list<T>(&mut self, open: &str, close: &str, sep: &str, mut item: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        self.expect(open)?;
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(close) {
                return Ok(out);
            }
            self.expect(sep)?;
        }
    }

    fn clopen(&mut self, sig: &Signature) -> Result<ClopenSet> {
        let words = self.list("{", "}", ",", |c| c.word(sig))?;
        ClopenSet::from_canonical(sig, words)
    }

    fn clopens(&mut self, sig: &Signature) -> Result<Vec<ClopenSet>> {
        self.list("[", "]", ",", |c| c.clopen(sig))
    }

    fn branch(&mut self, sig: &Signature) -> Result<Branch> {
        let domain = self.word(sig)?;
        if !self.eat("->") && !self.eat("→") {
            return Err(self.err("expected \"->\""));
        }
        let image = self.word(sig)?;
        let shift = match self.peek_raw() {
            Some('+') => {
                self.pos += 1;
                self.uint()? as i64
            }
            Some('-') => {
                self.pos += 1;
                -(self.uint()? as i64)
            }
            _ => 0,
        };
        Ok(Branch::new(domain, image, shift))
    }

    fn branches(&mut self, sig: &Signature) -> Result<Vec<Branch>> {
        self.list("{", "}", ",", |c| c.branch(sig))
    }

    fn rationals(&mut self) -> Result<Vec<Rational>> {
        self.list("[", "]", ",", |c| c.rational())
    }

    pub(crate) fn measure(&mut self, sig: &Signature) -> Result<MeasureSpec> {
        let kind = self.ident()?;
        match kind.as_str() {
            "uniform" => Ok(MeasureSpec::uniform(sig)),
            "dirac" => {
                let p = self.point(sig)?;
                MeasureSpec::dirac(sig, p)
            }
            "product" => {
                self.expect("(")?;
                let mut parts = vec![Vec::new(), Vec::new()];
                for (i, part) in parts.iter_mut().enumerate() {
                    if i == 1 {
                        self.expect("|")?;
                    }
                    if self.peek() == Some('[') {
                        loop {
                            part.push(self.rationals()?);
                            if !self.eat(";") {
                                break;
                            }
                        }
                    }
                }
                self.expect(")")?;
                let period = parts.pop().unwrap();
                MeasureSpec::product(sig, parts.pop().unwrap(), period)
            }
            "mix" => {
                let comps = self.list("{", "}", ";", |c| {
                    let w = c.rational()?;
                    c.expect(":")?;
                    Ok((w, c.measure(sig)?))
                })?;
                let m = MeasureSpec::mixture(sig, comps.clone())?;
                let canonical = matches!(m.kind(), crate::measure::MeasureKind::Mixture(c) if *c == comps);
                if !canonical {
                    return Err(Error::NotCanonical("mixture components must be distinct, non-mixture, and sorted".into()));
                }
                Ok(m)
            }
            other => Err(self.err(format!("unknown measure {other:?}"))),
        }
    }

    fn measures(&mut self, sig: &Signature) -> Result<Vec<MeasureSpec>> {
        self.list("[", "]", ";", |c| c.measure(sig))
    }

    /// `<kind> <sig> <payload>`.
    pub(crate) fn homeo(&mut self) -> Result<Homeo> {
        let kind = self.ident()?;
        let sig = self.signature()?;
        self.homeo_payload(&kind, &sig)
    }

    fn homeo_payload(&mut self, kind: &str, sig: &Signature) -> Result<Homeo> {
        match kind {
            "id" | "identity" => Ok(Homeo::identity(sig)),
            "tree-pair" => {
                let given = self.branches(sig)?;
                let h = CylinderHomeo::new(sig, given.clone())?;
                if h.branches() != given.as_slice() {
                    return Err(Error::NotCanonical("branches must be sorted and unmergeable".into()));
                }
                Ok(Homeo::Cylinder(h))
            }
            "odometer" => {
                let shift = if self.eat("shift") { self.int()? } else { 1 };
                Ok(Homeo::Odometer(Odometer::new(sig, shift)))
            }
            "tower" => {
                self.keyword("cycle")?;
                let cycle = self.clopens(sig)?;
                self.keyword("links")?;
                let links = self.list("[", "]", ",", |c| c.branches(sig))?;
                let maps: Vec<BranchMap> = links.iter().map(|b| BranchMap::new(sig, b.clone())).collect();
                if maps.iter().zip(&links).any(|(m, b)| m.clone().canonical().branches != *b) {
                    return Err(Error::NotCanonical("link branches must be sorted and unmergeable".into()));
                }
                Ok(Homeo::Tower(TowerSystem::build(cycle, maps)?))
            }
            "composite" => {
                let factors = self.list("[", "]", ",", |c| {
                    c.expect("(")?;
                    let k = c.ident()?;
                    let h = c.homeo_payload(&k, sig)?;
                    c.expect(")")?;
                    c.expect("^")?;
                    Ok((h, c.int()?))
                })?;
                Ok(Homeo::Composite(factors))
            }
            other => Err(self.err(format!("unknown homeomorphism kind {other:?}"))),
        }
    }

    fn neighborhood(&mut self) -> Result<NeighborhoodSpec> {
        let kind = self.ident()?;
        self.keyword("base")?;
        let base = self.homeo()?;
        let sig = base.signature().clone();
        let spec = match kind.as_str() {
            "p" => {
                self.keyword("sets")?;
                NeighborhoodSpec::P { base, sets: self.clopens(&sig)? }
            }
            "uniform" => {
                self.keyword("measures")?;
                let measures = self.measures(&sig)?;
                self.keyword("epsilon")?;
                NeighborhoodSpec::Uniform { base, measures, epsilon: self.rational()? }
            }
            "barp" => {
                self.keyword("sets")?;
                let sets = self.clopens(&sig)?;
                self.keyword("measures")?;
                let measures = self.measures(&sig)?;
                self.keyword("epsilon")?;
                NeighborhoodSpec::BarP { base, sets, measures, epsilon: self.rational()? }
            }
            "weak" => {
                self.keyword("radius")?;
                NeighborhoodSpec::WeakBall { base, radius: self.rational()? }
            }
            other => return Err(self.err(format!("unknown neighborhood {other:?}"))),
        };
        spec.validate()?;
        Ok(spec)
    }

    fn castle(&mut self) -> Result<Castle> {
        let sig = self.signature()?;
        self.keyword("towers")?;
        let levels = self.list("[", "]", ",", |c| c.clopens(&sig))?;
        self.keyword("bounds")?;
        let bounds = self.rationals()?;
        let mut base_set = ClopenSet::empty(&sig);
        let mut towers = Vec::new();
        for l in levels {
            let base = l.first().cloned().ok_or_else(|| self.err("empty tower"))?;
            base_set = base_set.union(&base)?;
            towers.push(Tower { base, levels: l });
        }
        Ok(Castle { towers, base_set, bounds })
    }

    fn certificate(&mut self) -> Result<CertificateDoc> {
        match self.ident()?.as_str() {
            "witness" => {
                let sig = self.signature()?;
                let set = self.clopen(&sig)?;
                let closure = match self.ident()?.as_str() {
                    "forward-closed" => Closure::Forward,
                    "backward-closed" => Closure::Backward,
                    other => return Err(self.err(format!("unknown closure {other:?}"))),
                };
                Ok(CertificateDoc::Witness { set, closure })
            }
            "measures" => Ok(CertificateDoc::Measures(self.rationals()?)),
            "distance" => {
                let lo = self.rational()?;
                if self.eat("..") {
                    Ok(CertificateDoc::DistanceInterval(lo, self.rational()?))
                } else {
                    Ok(CertificateDoc::Distance(lo))
                }
            }
            other => Err(self.err(format!("unknown certificate {other:?}"))),
        }
    }

    pub(crate) fn document(&mut self) -> Result<Document> {
        let save = self.pos;
        if self.eat("cdyn") {
            let v = self.uint()?;
            if v != 1 {
                return Err(self.err(format!("unsupported version {v}")));
            }
        } else {
            self.pos = save;
        }
        let doc = match self.ident()?.as_str() {
            "signature" => Document::Signature(self.signature()?),
            "clopen" => {
                let sig = self.signature()?;
                Document::Clopen(self.clopen(&sig)?)
            }
            "measure" => {
                let sig = self.signature()?;
                Document::Measure(self.measure(&sig)?)
            }
            "homeo" => Document::Homeo(self.homeo()?),
            "neighborhood" => Document::Neighborhood(self.neighborhood()?),
            "castle" => Document::Castle(self.castle()?),
            "certificate" => Document::Certificate(self.certificate()?),
            other => return Err(self.err(format!("unknown record {other:?}"))),
        };
        if !self.at_end() {
            return Err(self.err("trailing input"));
        }
        Ok(doc)
    }
}

pub(crate) fn separated(sig: &Signature) -> bool {
    sig.max_radix() > 10
}

pub(crate) fn parse_with<T>(text: &str, f: impl FnOnce(&mut Cursor) -> Result<T>) -> Result<T> {
    let mut c = Cursor::new(text);
    let v = f(&mut c)?;
    if !c.at_end() {
        return Err(c.err("trailing input"));
    }
    Ok(v)
}

pub(crate) fn parse_signature(text: &str) -> Result<Signature> {
    parse_with(text, |c| c.signature())
}

pub(crate) fn parse_clopen(sig: &Signature, text: &str) -> Result<ClopenSet> {
    parse_with(text, |c| c.clopen(sig))
}

pub(crate) fn parse_measure(sig: &Signature, text: &str) -> Result<MeasureSpec> {
    parse_with(text, |c| c.measure(sig))
}

/// Comma-separated clopen sets, with or without enclosing brackets.
pub(crate) fn parse_clopens(sig: &Signature, text: &str) -> Result<Vec<ClopenSet>> {
    let t = text.trim();
    let wrapped = if t.starts_with('[') { t.to_string() } else { format!("[{t}]") };
    parse_with(&wrapped, |c| c.clopens(sig))
}
