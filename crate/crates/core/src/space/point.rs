use std::fmt;

use num_integer::Integer;

use crate::error::Result;
use crate::space::{Signature, Word};

/// An eventually periodic point `preperiod · cycle^∞`.
///
/// Stored canonically: the cycle is primitive and the preperiod is as short
/// as possible, so structural equality is point equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    preperiod: Vec<u32>,
    cycle: Vec<u32>,
}

impl Point {
    pub fn new(preperiod: Vec<u32>, cycle: Vec<u32>) -> Self {
        assert!(!cycle.is_empty(), "point cycle must be nonempty");
        let n = cycle.len();
        let root = (1..=n)
            .find(|&d| n % d == 0 && (0..n).all(|i| cycle[i] == cycle[i % d]))
            .unwrap_or(n);
        let mut cycle = cycle[..root].to_vec();
        let mut preperiod = preperiod;
        while let Some(&last) = preperiod.last() {
            if last != *cycle.last().unwrap() {
                break;
            }
            preperiod.pop();
            cycle.rotate_right(1);
        }
        Point { preperiod, cycle }
    }

    pub fn constant(digit: u32) -> Self {
        Point::new(vec![], vec![digit])
    }

    pub fn preperiod(&self) -> &[u32] {
        &self.preperiod
    }

    pub fn cycle(&self) -> &[u32] {
        &self.cycle
    }

    pub fn digit(&self, i: usize) -> u32 {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.cycle[(i - self.preperiod.len()) % self.cycle.len()]
        }
    }

    /// Prepends `prefix`.
    pub fn behind(prefix: &[u32], tail: &Point) -> Point {
        let mut pre = prefix.to_vec();
        pre.extend_from_slice(&tail.preperiod);
        Point::new(pre, tail.cycle.clone())
    }

    /// The digits from index `n` on.
    pub fn tail(&self, n: usize) -> Point {
        if n <= self.preperiod.len() {
            return Point::new(self.preperiod[n..].to_vec(), self.cycle.clone());
        }
        let mut cycle = self.cycle.clone();
        let k = (n - self.preperiod.len()) % cycle.len();
        cycle.rotate_left(k);
        Point::new(vec![], cycle)
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word::new((0..len).map(|i| self.digit(i)).collect())
    }

    pub fn in_cylinder(&self, w: &Word) -> bool {
        w.digits().iter().enumerate().all(|(i, &d)| self.digit(i) == d)
    }

    /// Checks every digit against the signature; the check horizon covers
    /// one joint period of the point and the signature.
    pub fn validate(&self, sig: &Signature) -> Result<()> {
        let horizon = self.preperiod.len().max(sig.preperiod().len())
            + self.cycle.len().lcm(&sig.period().len());
        Word::new((0..horizon).map(|i| self.digit(i)).collect()).validate(sig)
    }

    /// First index where the digit streams differ, if any.
    pub fn first_difference(&self, other: &Point) -> Option<usize> {
        let horizon = self.preperiod.len().max(other.preperiod.len())
            + self.cycle.len().lcm(&other.cycle.len());
        (0..horizon).find(|&i| self.digit(i) != other.digit(i))
    }

    pub fn fmt_with(&self, separated: bool) -> String {
        let join = |v: &[u32]| {
            let parts: Vec<String> = v.iter().map(|d| d.to_string()).collect();
            if separated { parts.join(".") } else { parts.concat() }
        };
        format!("{}({})", join(&self.preperiod), join(&self.cycle))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = self.preperiod.iter().chain(&self.cycle).any(|&d| d > 9);
        write!(f, "{}", self.fmt_with(sep))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
