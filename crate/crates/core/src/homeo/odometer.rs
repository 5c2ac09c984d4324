use crate::homeo::branch::{Branch, BranchMap};
use crate::homeo::CylinderHomeo;
use crate::space::{Signature, Word};

/// The adding machine `x ↦ x + shift` on mixed-radix integers with digit 0
/// least significant.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Odometer {
    sig: Signature,
    shift: i64,
}

impl Odometer {
    pub fn new(sig: &Signature, shift: i64) -> Self {
        Odometer { sig: sig.clone(), shift }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn power(&self, n: i64) -> Odometer {
        Odometer { sig: self.sig.clone(), shift: self.shift * n }
    }

    pub fn inverse(&self) -> Odometer {
        self.power(-1)
    }

    pub fn to_cylinder(&self) -> CylinderHomeo {
        CylinderHomeo::from_map(self.map())
    }

    pub(crate) fn map(&self) -> BranchMap {
        BranchMap::new(&self.sig, vec![Branch::new(Word::empty(), Word::empty(), self.shift)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::ClopenSet;

    #[test]
    fn depth_two_action_is_a_four_cycle() {
        let sig = Signature::dyadic();
        let table = Odometer::new(&sig, 1).to_cylinder().tabulate(2);
        let got: Vec<(String, String)> =
            table.iter().map(|(w, img)| (w.fmt_with(false), img.fmt_words())).collect();
        let want = [("00", "{10}"), ("01", "{11}"), ("10", "{01}"), ("11", "{00}")];
        assert_eq!(got, want.map(|(a, b)| (a.to_string(), b.to_string())));
    }

    #[test]
    fn square_is_identity_on_first_level() {
        let sig = Signature::dyadic();
        let sq = Odometer::new(&sig, 1).power(2).to_cylinder();
        for (w, img) in sq.tabulate(1) {
            assert_eq!(img, ClopenSet::cylinder(&sig, w));
        }
    }
}
