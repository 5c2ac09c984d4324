mod common;

use proptest::prelude::*;

use cdyn::generate::Generator;
use cdyn::homeo::Homeo;
use cdyn::measure::{measure_of, pushforward_measure_of};
use cdyn::rational::{dyadic, int};
use cdyn::space::metric::{diameter, point_distance, set_distance};
use cdyn::space::{split, ClopenSet, Point, Signature, Word};

use common::oracle::{common_prefix, Set};

fn dy() -> Signature {
    Signature::dyadic()
}

fn words(max_len: usize) -> impl Strategy<Value = Vec<Vec<u32>>> {
    prop::collection::vec(prop::collection::vec(0u32..2, 0..=max_len), 0..6)
}

fn clopen(max_len: usize) -> impl Strategy<Value = ClopenSet> {
    words(max_len).prop_map(|ws| ClopenSet::from_words(&dy(), ws.into_iter().map(Word::new).collect()))
}

proptest! {
    #[test]
    fn canonicalization_is_idempotent(ws in words(8)) {
        let sig = dy();
        let once = ClopenSet::from_words(&sig, ws.iter().cloned().map(Word::new).collect());
        let twice = ClopenSet::from_words(&sig, once.words().to_vec());
        prop_assert_eq!(&twice, &once);
        prop_assert_eq!(ClopenSet::from_canonical(&sig, once.words().to_vec()).unwrap(), once.clone());
        // Canonicalizing never changes the set of points.
        prop_assert!(Set::of(&once).same(&sig, &Set::from_words(&sig, ws)));
    }

    #[test]
    fn boolean_operations_match_bitmasks(a in clopen(8), b in clopen(8)) {
        let sig = dy();
        let (x, y) = (Set::of(&a), Set::of(&b));
        prop_assert!(Set::of(&a.union(&b).unwrap()).same(&sig, &x.union(&sig, &y)));
        prop_assert!(Set::of(&a.intersect(&b).unwrap()).same(&sig, &x.intersect(&sig, &y)));
        prop_assert!(Set::of(&a.difference(&b).unwrap()).same(&sig, &x.minus(&sig, &y)));
        prop_assert!(Set::of(&a.complement()).same(&sig, &x.complement(&sig)));
        let sym = x.minus(&sig, &y).union(&sig, &y.minus(&sig, &x));
        prop_assert!(Set::of(&a.symmetric_difference(&b).unwrap()).same(&sig, &sym));
        prop_assert_eq!(a.is_subset(&b).unwrap(), x.subset(&sig, &y));
        prop_assert_eq!(a.is_disjoint(&b).unwrap(), x.intersect(&sig, &y).is_empty());
    }

    #[test]
    fn boolean_algebra_laws(a in clopen(6), b in clopen(6), c in clopen(6)) {
        let u = |p: &ClopenSet, q: &ClopenSet| p.union(q).unwrap();
        let i = |p: &ClopenSet, q: &ClopenSet| p.intersect(q).unwrap();
        prop_assert_eq!(u(&u(&a, &b), &c), u(&a, &u(&b, &c)));
        prop_assert_eq!(i(&i(&a, &b), &c), i(&a, &i(&b, &c)));
        prop_assert_eq!(u(&a, &b).complement(), i(&a.complement(), &b.complement()));
        prop_assert_eq!(i(&a, &b).complement(), u(&a.complement(), &b.complement()));
        prop_assert_eq!(a.complement().complement(), a.clone());
        prop_assert_eq!(i(&a, &u(&b, &c)), u(&i(&a, &b), &i(&a, &c)));
    }

    #[test]
    fn split_parts_partition_the_set(a in clopen(6), m in 1usize..12) {
        prop_assume!(!a.is_empty());
        let sig = dy();
        let parts = split(&a, m).unwrap();
        prop_assert_eq!(parts.len(), m);
        let mut seen = Set::from_words(&sig, []);
        for p in &parts {
            let p = Set::of(p);
            prop_assert!(!p.is_empty());
            prop_assert!(p.intersect(&sig, &seen).is_empty());
            seen = seen.union(&sig, &p);
        }
        prop_assert!(seen.same(&sig, &Set::of(&a)));
        prop_assert_eq!(split(&a, m).unwrap(), parts);
    }

    #[test]
    fn metric_matches_brute_force(a in clopen(8), b in clopen(8)) {
        prop_assume!(!a.is_empty() && !b.is_empty());
        let sig = dy();
        // Points `w·0^∞` for every depth-8 word w, grouped by set.
        let reps = |s: &Set| s.at(&sig, 8).words.into_iter().collect::<Vec<_>>();
        let (pa, pb) = (reps(&Set::of(&a)), reps(&Set::of(&b)));
        let d = |u: &[u32], v: &[u32]| if u == v { int(0) } else { dyadic(common_prefix(u, v)) };
        // Sup over representatives reaches the diameter except inside one
        // depth-8 cylinder, where it is 2^-8.
        let brute = pa.iter().flat_map(|u| pa.iter().map(move |v| d(u, v))).max().unwrap().max(dyadic(8));
        prop_assert_eq!(diameter(&a).unwrap().max(dyadic(8)), brute);
        if a.is_disjoint(&b).unwrap() {
            let brute = pa.iter().flat_map(|u| pb.iter().map(move |v| d(u, v))).min().unwrap();
            prop_assert_eq!(set_distance(&a, &b).unwrap(), brute);
        } else {
            prop_assert_eq!(set_distance(&a, &b).unwrap(), int(0));
        }
        for u in pa.iter().take(4) {
            for v in pb.iter().take(4) {
                let (x, y) = (Point::new(u.clone(), vec![0]), Point::new(v.clone(), vec![0]));
                prop_assert_eq!(point_distance(&x, &y), d(u, v));
            }
        }
    }

    #[test]
    fn measures_are_additive_and_monotone(seed in any::<u64>(), a in clopen(6), b in clopen(6)) {
        let sig = dy();
        let mu = Generator::new(seed).measure(&sig, 1);
        let b = b.difference(&a).unwrap();
        let ab = a.union(&b).unwrap();
        prop_assert_eq!(measure_of(&mu, &ab).unwrap(), measure_of(&mu, &a).unwrap() + measure_of(&mu, &b).unwrap());
        prop_assert!(measure_of(&mu, &a).unwrap() <= measure_of(&mu, &ab).unwrap());
        prop_assert_eq!(measure_of(&mu, &ClopenSet::full(&sig)).unwrap(), int(1));
    }

    #[test]
    fn pushforwards_are_probability_measures(seed in any::<u64>(), a in clopen(6)) {
        let sig = dy();
        let mut gen = Generator::new(seed);
        let mu = gen.measure(&sig, 1);
        let s = Homeo::Cylinder(gen.cylinder_homeo(2));
        prop_assert_eq!(pushforward_measure_of(&mu, &s, &ClopenSet::full(&sig)).unwrap(), int(1));
        let whole = pushforward_measure_of(&mu, &s, &a).unwrap() + pushforward_measure_of(&mu, &s, &a.complement()).unwrap();
        prop_assert_eq!(whole, int(1));
    }
}
