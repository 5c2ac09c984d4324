//! Seeded random canonical documents, for fixtures and round-trip testing.
//! Nothing in the library's computations is randomized.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::format::{CertificateDoc, Closure, Document};
use crate::homeo::{Branch, CylinderHomeo, Homeo, Odometer};
use crate::measure::MeasureSpec;
use crate::rational::{ratio, Rational};
use crate::space::{ClopenSet, Point, Signature, Word};
use crate::topology::NeighborhoodSpec;

pub struct Generator {
    rng: ChaCha8Rng,
}

impl Generator {
    pub fn new(seed: u64) -> Self {
        Generator { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn signature(&mut self) -> Signature {
        match self.rng.gen_range(0..4) {
            0 | 1 => Signature::dyadic(),
            2 => Signature::constant(self.rng.gen_range(3..=12)),
            _ => {
                let pre = (0..self.rng.gen_range(0..3)).map(|_| self.rng.gen_range(2..=4)).collect();
                let per = (0..self.rng.gen_range(1..3)).map(|_| self.rng.gen_range(2..=4)).collect();
                Signature::new(pre, per).expect("radices ≥ 2")
            }
        }
    }

    pub fn word(&mut self, sig: &Signature, max_len: usize) -> Word {
        let len = self.rng.gen_range(0..=max_len);
        Word::new((0..len).map(|t| self.rng.gen_range(0..sig.radix(t))).collect())
    }

    pub fn clopen(&mut self, sig: &Signature) -> ClopenSet {
        let n = self.rng.gen_range(0..6);
        let words = (0..n).map(|_| self.word(sig, 4)).collect();
        ClopenSet::from_words(sig, words)
    }

    pub fn point(&mut self, sig: &Signature) -> Point {
        let pre_len = self.rng.gen_range(0..3);
        let pre: Vec<u32> = (0..pre_len).map(|t| self.rng.gen_range(0..sig.radix(t))).collect();
        // A cycle whose length is a multiple of the signature's period keeps
        // every digit within its level's radix.
        let per = sig.period().len() * self.rng.gen_range(1..=2);
        let start = pre_len.max(sig.preperiod().len());
        let mut digits = pre;
        while digits.len() < start {
            let t = digits.len();
            digits.push(self.rng.gen_range(0..sig.radix(t)));
        }
        let cycle = (0..per).map(|i| self.rng.gen_range(0..sig.radix(start + i))).collect();
        Point::new(digits, cycle)
    }

    /// A complete prefix code with at least `leaves` words, by splitting
    /// random leaves.
    fn prefix_code(&mut self, sig: &Signature, leaves: usize) -> Vec<Word> {
        let mut code = vec![Word::empty()];
        while code.len() < leaves {
            let i = self.rng.gen_range(0..code.len());
            let w = code.swap_remove(i);
            code.extend(w.children(sig));
        }
        code
    }

    /// A random element built from two prefix codes of equal size on a
    /// constant-radix signature.
    pub fn cylinder_homeo(&mut self, radix: u32) -> CylinderHomeo {
        let sig = Signature::constant(radix);
        let size = self.rng.gen_range(1..5);
        let mut a = self.prefix_code(&sig, size);
        let mut b = self.prefix_code(&sig, size);
        while a.len() != b.len() {
            let (short, other) = if a.len() < b.len() { (&mut a, b.len()) } else { (&mut b, a.len()) };
            let grown = self.prefix_code(&sig, other);
            *short = grown;
        }
        for i in (1..b.len()).rev() {
            let j = self.rng.gen_range(0..=i);
            b.swap(i, j);
        }
        let branches = a
            .into_iter()
            .zip(b)
            .map(|(u, v)| {
                let shift = if self.rng.gen_bool(0.25) { self.rng.gen_range(-2..=2) } else { 0 };
                Branch::new(u, v, shift)
            })
            .collect();
        CylinderHomeo::new(&sig, branches).expect("two complete prefix codes of equal size")
    }

    pub fn homeo(&mut self, depth: usize) -> Homeo {
        match self.rng.gen_range(0..if depth == 0 { 3 } else { 4 }) {
            0 => Homeo::Odometer(Odometer::new(&Signature::dyadic(), self.rng.gen_range(-3..=3))),
            1 | 2 => Homeo::Cylinder(self.cylinder_homeo(2)),
            _ => {
                let n = self.rng.gen_range(1..3);
                Homeo::Composite((0..n).map(|_| (self.homeo(depth - 1), self.rng.gen_range(-2..=2))).collect())
            }
        }
    }

    fn probability_row(&mut self, radix: u32) -> Vec<Rational> {
        let weights: Vec<i64> = (0..radix).map(|_| self.rng.gen_range(0..4)).collect();
        let total: i64 = weights.iter().sum();
        if total == 0 {
            return (0..radix).map(|_| ratio(1, radix as i64)).collect();
        }
        weights.into_iter().map(|w| ratio(w, total)).collect()
    }

    pub fn measure(&mut self, sig: &Signature, depth: usize) -> MeasureSpec {
        match self.rng.gen_range(0..if depth == 0 { 3 } else { 4 }) {
            0 => MeasureSpec::uniform(sig),
            1 => {
                let pre = (0..sig.preperiod().len()).map(|t| self.probability_row(sig.radix(t))).collect();
                let start = sig.preperiod().len();
                let per = (0..sig.period().len()).map(|i| self.probability_row(sig.radix(start + i))).collect();
                MeasureSpec::product(sig, pre, per).expect("rows sum to one")
            }
            2 => {
                let p = self.point(sig);
                MeasureSpec::dirac(sig, p).expect("digits in range")
            }
            _ => {
                let n = self.rng.gen_range(2..4);
                let weights: Vec<i64> = (0..n).map(|_| self.rng.gen_range(1..4)).collect();
                let total: i64 = weights.iter().sum();
                let comps = weights.iter().map(|&w| (ratio(w, total), self.measure(sig, depth - 1))).collect();
                MeasureSpec::mixture(sig, comps).expect("weights sum to one")
            }
        }
    }

    pub fn document(&mut self) -> Document {
        match self.rng.gen_range(0..6) {
            0 => Document::Signature(self.signature()),
            1 => {
                let sig = self.signature();
                Document::Clopen(self.clopen(&sig))
            }
            2 => {
                let sig = self.signature();
                Document::Measure(self.measure(&sig, 1))
            }
            3 => Document::Homeo(self.homeo(1)),
            4 => {
                let base = self.homeo(0);
                let sig = base.signature().clone();
                let radius = ratio(self.rng.gen_range(1..8), 4);
                match self.rng.gen_range(0..2) {
                    0 => Document::Neighborhood(NeighborhoodSpec::WeakBall { base, radius }),
                    _ => {
                        let measures = (0..self.rng.gen_range(1..3)).map(|_| self.measure(&sig, 0)).collect();
                        Document::Neighborhood(NeighborhoodSpec::Uniform { base, measures, epsilon: radius })
                    }
                }
            }
            _ => {
                let sig = self.signature();
                let set = self.clopen(&sig);
                let closure = if self.rng.gen_bool(0.5) { Closure::Forward } else { Closure::Backward };
                Document::Certificate(CertificateDoc::Witness { set, closure })
            }
        }
    }
}
