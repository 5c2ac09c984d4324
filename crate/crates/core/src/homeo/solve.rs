//! Digit automata for translations of eventually periodic tails.

use std::collections::{HashMap, VecDeque};

use crate::space::{Point, Signature};

/// `y + k` for a tail `y` whose first digit sits at level `start`.
pub(crate) fn add_to_point(sig: &Signature, start: usize, y: &Point, k: i64) -> Point {
    let pre = y.preperiod().len();
    let cyc = y.cycle().len();
    let mut seen: HashMap<(usize, usize, i64), usize> = HashMap::new();
    let mut digits = Vec::new();
    let mut carry = k;
    for i in 0.. {
        let class = if i < pre { i } else { pre + (i - pre) % cyc };
        if let Some(&j) = seen.get(&(sig.phase(start + i), class, carry)) {
            return Point::new(digits[..j].to_vec(), digits[j..].to_vec());
        }
        seen.insert((sig.phase(start + i), class, carry), i);
        let r = sig.radix(start + i) as i64;
        let s = y.digit(i) as i64 + carry;
        digits.push(s.rem_euclid(r) as u32);
        carry = s.div_euclid(r);
    }
    unreachable!()
}

/// The unique tail `y` (first digit at level `start`) with
/// `y + alpha = w · (y + beta)`, `w` nonempty. Levels `start` and
/// `start + |w|` must carry the same radices.
pub(crate) fn solve_shifted(sig: &Signature, start: usize, alpha: i64, w: &[u32], beta: i64) -> Point {
    assert!(!w.is_empty());
    let mut queue: VecDeque<u32> = w.iter().copied().collect();
    let (mut ca, mut cb) = (-alpha, beta);
    let mut seen: HashMap<(usize, i64, i64, Vec<u32>), usize> = HashMap::new();
    let mut digits = Vec::new();
    for i in 0.. {
        let key = (sig.phase(start + i), ca, cb, queue.iter().copied().collect::<Vec<_>>());
        if let Some(&j) = seen.get(&key) {
            return Point::new(digits[..j].to_vec(), digits[j..].to_vec());
        }
        seen.insert(key, i);
        let r = sig.radix(start + i) as i64;
        let z = queue.pop_front().expect("queue keeps its length") as i64;
        let s = z + ca;
        let y = s.rem_euclid(r);
        ca = s.div_euclid(r);
        let t = y + cb;
        queue.push_back(t.rem_euclid(r) as u32);
        cb = t.div_euclid(r);
        digits.push(y as u32);
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn carries_run_off_to_zero() {
        let sig = Signature::dyadic();
        assert_eq!(add_to_point(&sig, 0, &Point::constant(1), 1), Point::constant(0));
        assert_eq!(add_to_point(&sig, 0, &Point::constant(0), -1), Point::constant(1));
        assert_eq!(add_to_point(&sig, 0, &Point::constant(0), 3), Point::new(vec![1, 1], vec![0]));
    }

    #[test]
    fn solutions_satisfy_the_equation() {
        let sig = Signature::new(vec![3], vec![2]).unwrap();
        for (alpha, w, beta) in [(0, vec![0], 0), (0, vec![1, 0], 1), (2, vec![1], -1), (-5, vec![0, 1, 1], 3)] {
            let y = solve_shifted(&sig, 1, alpha, &w, beta);
            let lhs = add_to_point(&sig, 1, &y, alpha);
            let rhs = Point::behind(&w, &add_to_point(&sig, 1, &y, beta));
            assert_eq!(lhs, rhs, "alpha={alpha} w={w:?} beta={beta}");
        }
    }
}
