//! One line per acceptance criterion. Every library result is re-checked
//! against the brute-force models in `common::oracle`.

mod common;

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cdyn::format::{parse, print};
use cdyn::generate::Generator;
use cdyn::homeo::{centralizer_index_sequence, Branch, CentralizerResult, CylinderHomeo, Homeo, Odometer, TowerSystem};
use cdyn::measure::MeasureSpec;
use cdyn::rational::{dyadic, int, ratio, Rational};
use cdyn::space::{ClopenSet, Signature, Word};
use cdyn::synth::{
    aperiodize_periodic, fundamental_domain, min_circulation, odometer_in_weak_neighborhood,
    periodic_in_weak_neighborhood, rank1_in_uniform_neighborhood, rokhlin_castle, truncation, Synthesis,
};
use cdyn::topology::weak_distance;

use common::oracle::{add, extend, mass, uniform_mass, Digits, Map, Set};

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: cdyn::Result<T>) -> Result<T, String> {
    r.map_err(|e| format!("library error: {e}"))
}

fn main() {
    let criteria: [(&str, Check, Option<Duration>); 11] = [
        ("euler synthesis soundness", euler_soundness, Some(Duration::from_secs(10))),
        ("moving dichotomy consistency", moving_dichotomy, None),
        ("fundamental domain", fundamental_domains, None),
        ("rokhlin castle", rokhlin_castles, Some(Duration::from_secs(5))),
        ("periodic approximation bound", periodic_approximation, None),
        ("weak metric / p-topology", weak_vs_p, None),
        ("metric axioms", metric_axioms, None),
        ("centralizer test", centralizer, None),
        ("circulation optimality", circulation_optimality, Some(Duration::from_secs(30))),
        ("end-to-end rank-1 approximant", rank1_end_to_end, None),
        ("cli determinism and round-trip", cli_determinism, None),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = match catch_unwind(AssertUnwindSafe(check)) {
            Ok(r) => r,
            Err(p) => Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into())),
        };
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if elapsed > *l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
            (o, _) => o,
        };
        let (status, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {status} {name}: {detail} ({:.2}s)", i + 1, elapsed.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

// ---- shared fixtures -------------------------------------------------------

fn dy() -> Signature {
    Signature::dyadic()
}

/// A random partition of Ω into `m` atoms: a random complete prefix code
/// with a few spare leaves, grouped.
fn random_partition(rng: &mut ChaCha8Rng, sig: &Signature, m: usize) -> Vec<ClopenSet> {
    let spare = rng.gen_range(0..4);
    let mut leaves: Vec<Digits> = vec![vec![]];
    while leaves.len() < m + spare {
        let i = rng.gen_range(0..leaves.len());
        let w = leaves.swap_remove(i);
        leaves.extend((0..sig.radix(w.len())).map(|d| [w.as_slice(), &[d]].concat()));
    }
    leaves.shuffle(rng);
    let mut groups: Vec<Vec<Digits>> = leaves[..m].iter().map(|w| vec![w.clone()]).collect();
    for w in &leaves[m..] {
        let g = rng.gen_range(0..m);
        groups[g].push(w.clone());
    }
    let mut atoms: Vec<ClopenSet> = groups
        .into_iter()
        .map(|g| ClopenSet::from_words(sig, g.into_iter().map(Word::new).collect()))
        .collect();
    atoms.sort_by(|a, b| a.words().cmp(b.words()));
    atoms
}

/// Cylinders of length `len`, in lexicographic order.
fn level(sig: &Signature, len: usize) -> Vec<ClopenSet> {
    extend(sig, &[], len).into_iter().map(|w| ClopenSet::cylinder(sig, Word::new(w))).collect()
}

/// `partition` is pairwise disjoint and covers Ω.
fn is_partition(sig: &Signature, partition: &[Set]) -> bool {
    let mut seen = Set::from_words(sig, []);
    for a in partition {
        if a.is_empty() || !a.intersect(sig, &seen).is_empty() {
            return false;
        }
        seen = seen.union(sig, a);
    }
    seen.is_full(sig)
}

/// Re-checks a synthesized tower system against `t` on `partition`: the
/// cycle partitions Ω and refines the partition, each link maps its atom
/// onto the next, and `S F_i = T F_i` for every atom.
fn check_tower(t: &Map, partition: &[ClopenSet], tower: &TowerSystem) -> Result<(), String> {
    let sig = &t.sig;
    let cycle: Vec<Set> = tower.cycle().iter().map(Set::of).collect();
    ensure(is_partition(sig, &cycle), || "cycle is not a partition".into())?;
    let links = tower.link_branches();
    ensure(links.len() + 1 == cycle.len(), || "wrong number of links".into())?;
    for (j, link) in links.iter().enumerate() {
        let doms: Vec<Set> = link.iter().map(|b| Set::from_words(sig, [b.domain.digits().to_vec()])).collect();
        let imgs: Vec<Set> = link.iter().map(|b| Set::from_words(sig, [b.image.digits().to_vec()])).collect();
        let union = |v: &[Set]| v.iter().fold(Set::from_words(sig, []), |a, b| a.union(sig, b));
        let disjoint = |v: &[Set]| uniform_mass(sig, &union(v)) == v.iter().map(|s| uniform_mass(sig, s)).sum::<Rational>();
        ensure(disjoint(&doms) && union(&doms).same(sig, &cycle[j]), || format!("link {j} domain is not atom {j}"))?;
        ensure(disjoint(&imgs) && union(&imgs).same(sig, &cycle[j + 1]), || format!("link {j} range is not atom {}", j + 1))?;
    }
    let s_homeo = Homeo::Tower(tower.clone());
    for (i, f) in partition.iter().enumerate() {
        let fs = Set::of(f);
        let mut image = Set::from_words(sig, []);
        for (j, atom) in cycle.iter().enumerate() {
            if atom.subset(sig, &fs) {
                image = image.union(sig, &cycle[(j + 1) % cycle.len()]);
            } else {
                ensure(atom.intersect(sig, &fs).is_empty(), || format!("atom {j} straddles F_{i}"))?;
            }
        }
        ensure(image.same(sig, &t.image(&fs)), || format!("S F_{i} != T F_{i}"))?;
        ensure(Set::of(&lib(s_homeo.image(f))?).same(sig, &image), || format!("library image of F_{i} disagrees"))?;
    }
    Ok(())
}

/// `f` is a proper union of atoms with `TF ⊆ F` or `F ⊆ TF`.
fn check_witness(t: &Map, partition: &[ClopenSet], f: &ClopenSet) -> Result<(), String> {
    let sig = &t.sig;
    let fs = Set::of(f);
    ensure(!fs.is_empty() && !fs.is_full(sig), || "witness is not proper".into())?;
    for a in partition {
        let a = Set::of(a);
        ensure(a.subset(sig, &fs) || a.intersect(sig, &fs).is_empty(), || "witness is not a union of atoms".into())?;
    }
    let tf = t.image(&fs);
    ensure(tf.subset(sig, &fs) || fs.subset(sig, &tf), || format!("witness {} is not closed", f.fmt_words()))
}

fn check_periodic(t: &Map, partition: &[ClopenSet], map: &CylinderHomeo, period: u64) -> Result<(), String> {
    let sig = &t.sig;
    let p = Map::of(map);
    for (i, f) in partition.iter().enumerate() {
        let fs = Set::of(f);
        ensure(p.image(&fs).same(sig, &t.image(&fs)), || format!("P F_{i} != T F_{i}"))?;
    }
    ensure(map.power(period as i64).is_identity(), || format!("P^{period} is not the identity"))
}

// ---- 1 ---------------------------------------------------------------------

fn euler_soundness() -> Result<String, String> {
    let sig = dy();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut gen = Generator::new(1);
    let (mut ok, mut witnesses) = (0, 0);
    for case in 0..200 {
        let t = gen.cylinder_homeo(2);
        let m = rng.gen_range(2..=16);
        let partition = random_partition(&mut rng, &sig, m);
        let tm = Map::of(&t);
        let ctx = |e: String| format!("case {case} ({} atoms): {e}", partition.len());
        match lib(odometer_in_weak_neighborhood(&Homeo::Cylinder(t.clone()), &partition))? {
            Synthesis::Success(s) => {
                check_tower(&tm, &partition, &s.tower).map_err(ctx)?;
                ok += 1;
            }
            Synthesis::Witness(f) => {
                check_witness(&tm, &partition, &f).map_err(ctx)?;
                witnesses += 1;
            }
        }
    }
    Ok(format!("200 cases: {ok} syntheses, {witnesses} witnesses, all re-verified"))
}

// ---- 2 ---------------------------------------------------------------------

fn moving_dichotomy() -> Result<String, String> {
    let sig = dy();
    let w = |s: &str| Word::new(s.bytes().map(|b| (b - b'0') as u32).collect());
    let dissipative = lib(CylinderHomeo::new(
        &sig,
        vec![Branch::new(w("0"), w("00"), 0), Branch::new(w("10"), w("01"), 0), Branch::new(w("11"), w("1"), 0)],
    ))?;
    let halves = level(&sig, 1);
    let zero = ClopenSet::cylinder(&sig, w("0"));
    let d = Homeo::Cylinder(dissipative.clone());
    let dm = Map::of(&dissipative);
    match lib(odometer_in_weak_neighborhood(&d, &halves))? {
        Synthesis::Witness(f) if f == zero => check_witness(&dm, &halves, &f)?,
        other => return Err(format!("odometer synthesis on the dissipative map: {:?}", other.witness())),
    }
    match lib(periodic_in_weak_neighborhood(&d, &halves))? {
        Synthesis::Witness(f) if f == zero => check_witness(&dm, &halves, &f)?,
        other => return Err(format!("periodic synthesis on the dissipative map: {:?}", other.witness())),
    }

    let mut cases = vec![(CylinderHomeo::swap(), halves.clone(), "swap".to_string())];
    let odo = Odometer::new(&sig, 1).to_cylinder();
    for t in 0..=5 {
        cases.push((odo.clone(), level(&sig, t + 1), format!("odometer at ξ_{t}")));
    }
    for (t, partition, name) in &cases {
        let h = Homeo::Cylinder(t.clone());
        let tm = Map::of(t);
        match lib(odometer_in_weak_neighborhood(&h, partition))? {
            Synthesis::Success(s) => check_tower(&tm, partition, &s.tower).map_err(|e| format!("{name}: {e}"))?,
            Synthesis::Witness(f) => return Err(format!("{name}: odometer synthesis gave witness {}", f.fmt_words())),
        }
        match lib(periodic_in_weak_neighborhood(&h, partition))? {
            Synthesis::Success(p) => check_periodic(&tm, partition, &p.map, p.period).map_err(|e| format!("{name}: {e}"))?,
            Synthesis::Witness(f) => return Err(format!("{name}: periodic synthesis gave witness {}", f.fmt_words())),
        }
    }
    Ok(format!("dissipative map gives witness {{0}} twice; {} moving cases synthesize both ways", cases.len()))
}

// ---- 3 ---------------------------------------------------------------------

/// A prefix-exchange map permuting the words of `code` along `cycles`.
fn block_permutation(sig: &Signature, code: &[&str], cycles: &[&[usize]]) -> CylinderHomeo {
    let w = |s: &str| Word::new(s.bytes().map(|b| (b - b'0') as u32).collect());
    let mut image: Vec<usize> = (0..code.len()).collect();
    for c in cycles {
        for (i, &a) in c.iter().enumerate() {
            image[a] = c[(i + 1) % c.len()];
        }
    }
    let pairs: Vec<(Word, Word)> = (0..code.len()).map(|i| (w(code[i]), w(code[image[i]]))).collect();
    CylinderHomeo::from_pairs(sig, &pairs).expect("a permutation of a complete code")
}

fn fundamental_domains() -> Result<String, String> {
    let sig = dy();
    let six = ["00", "01", "100", "101", "110", "111"];
    let eight = ["000", "001", "010", "011", "100", "101", "110", "111"];
    let mut fixtures: Vec<(String, CylinderHomeo, usize)> = Vec::new();
    for t in 0..=3 {
        fixtures.push((format!("dyadic truncation {t}"), lib(truncation(&Odometer::new(&sig, 1), t))?, 1 << t));
    }
    fixtures.push(("ternary truncation 1".into(), lib(truncation(&Odometer::new(&Signature::constant(3), 1), 1))?, 3));
    let two_three = Signature::new(vec![], vec![2, 3]).expect("radices ≥ 2");
    fixtures.push(("(2,3) truncation 2".into(), lib(truncation(&Odometer::new(&two_three, 1), 2))?, 6));
    fixtures.push(("(2,3) truncation 2, shift 5".into(), lib(truncation(&Odometer::new(&two_three, 5), 2))?, 6));
    fixtures.push(("blocks p=1".into(), block_permutation(&sig, &six, &[]), 1));
    fixtures.push(("blocks p=2".into(), block_permutation(&sig, &six, &[&[0, 3], &[1, 5], &[2, 4]]), 2));
    fixtures.push(("blocks p=3".into(), block_permutation(&sig, &six, &[&[0, 1, 2], &[3, 5, 4]]), 3));
    fixtures.push(("blocks p=6".into(), block_permutation(&sig, &six, &[&[0, 4, 1, 5, 2, 3]]), 6));
    fixtures.push(("blocks p=4".into(), block_permutation(&sig, &eight, &[&[0, 7, 2, 5], &[1, 3, 6, 4]]), 4));
    fixtures.push(("blocks p=8".into(), block_permutation(&sig, &eight, &[&[0, 5, 3, 6, 1, 7, 2, 4]]), 8));
    fixtures.push(("swap".into(), CylinderHomeo::swap(), 2));
    for (name, p_map, p) in &fixtures {
        let psig = p_map.signature();
        let e = lib(fundamental_domain(p_map, *p)).map_err(|e| format!("{name}: {e}"))?;
        let pm = Map::of(p_map);
        let translates: Vec<Set> = (0..*p).map(|i| pm.iterate(&Set::of(&e), i)).collect();
        ensure(is_partition(psig, &translates), || format!("{name}: E = {} does not tile", e.fmt_words()))?;
    }
    Ok(format!("{} fixtures with p in {{1,2,3,4,6,8}} tile exactly", fixtures.len()))
}

// ---- 4 ---------------------------------------------------------------------

fn rokhlin_castles() -> Result<String, String> {
    let sig = dy();
    let third = || vec![vec![ratio(1, 3), ratio(2, 3)]];
    let product = MeasureSpec::product(&sig, vec![], third()).expect("a probability row");
    let mixture = MeasureSpec::mixture(&sig, vec![(ratio(1, 2), MeasureSpec::uniform(&sig)), (ratio(1, 2), product)])
        .expect("weights sum to one");
    let uniform_row = |_: usize, _: u32| ratio(1, 2);
    let mixture_row = |s: &Set| {
        let p = mass(s, &|_, d| if d == 0 { ratio(1, 3) } else { ratio(2, 3) });
        (uniform_mass(&dy(), s) + p) / int(2)
    };
    let mut runs = 0;
    let mut tightest: Option<Rational> = None;
    for shift in [1, 3, -1] {
        let t = Odometer::new(&sig, shift);
        let tm = Map::of(&t.to_cylinder());
        for n in [2, 3, 4] {
            for eps in [ratio(1, 4), ratio(1, 8)] {
                for mixed in [false, true] {
                    let name = format!("shift {shift}, n={n}, ε={eps}, {}", if mixed { "mixture" } else { "uniform" });
                    let mu = if mixed { mixture.clone() } else { MeasureSpec::uniform(&sig) };
                    let castle = lib(rokhlin_castle(&Homeo::Odometer(t.clone()), n, &[mu], &eps, 16))
                        .map_err(|e| format!("{name}: {e}"))?;
                    let mut levels = Vec::new();
                    let mut bases = Set::from_words(&sig, []);
                    for (k, tower) in castle.towers.iter().enumerate() {
                        ensure(tower.height() >= n, || format!("{name}: tower {k} has height {}", tower.height()))?;
                        ensure(tower.levels[0] == tower.base, || format!("{name}: tower {k} base is not level 0"))?;
                        bases = bases.union(&sig, &Set::of(&tower.base));
                        for j in 0..tower.height() {
                            let l = Set::of(&tower.levels[j]);
                            if j > 0 {
                                let below = Set::of(&tower.levels[j - 1]);
                                ensure(tm.image(&below).same(&sig, &l), || format!("{name}: tower {k} level {j} is not T of level {}", j - 1))?;
                            }
                            levels.push(l);
                        }
                    }
                    ensure(is_partition(&sig, &levels), || format!("{name}: levels do not partition Ω"))?;
                    ensure(bases.same(&sig, &Set::of(&castle.base_set)), || format!("{name}: base set is not the union of bases"))?;
                    let inv = tm.inverse();
                    let mut orbit = Set::from_words(&sig, []);
                    for j in 0..n {
                        orbit = orbit.union(&sig, &inv.iterate(&bases, j));
                    }
                    let bound = if mixed { mixture_row(&orbit) } else { mass(&orbit, &uniform_row) };
                    ensure(bound > int(1) - eps.clone(), || format!("{name}: μ(∪ T^-j B) = {bound}"))?;
                    ensure(castle.bounds == [bound.clone()], || format!("{name}: reported {:?}, oracle {bound}", castle.bounds))?;
                    let slack = bound - (int(1) - eps.clone());
                    tightest = Some(tightest.map_or(slack.clone(), |s: Rational| s.min(slack)));
                    runs += 1;
                }
            }
        }
    }
    Ok(format!("{runs} castles verified; least margin over 1-ε is {}", tightest.expect("ran")))
}

// ---- 5 ---------------------------------------------------------------------

fn periodic_approximation() -> Result<String, String> {
    let two_three = Signature::new(vec![], vec![2, 3]).expect("radices ≥ 2");
    let mut checked = 0;
    for sig in [dy(), two_three] {
        let s = Odometer::new(&sig, 1);
        for t in 1..=6 {
            let q = lib(truncation(&s, t))?;
            let qm = Map::of(&q);
            let name = format!("{:?} t={t}", sig.period());
            ensure(qm.branches.iter().all(|b| b.2 == 0 && b.0.len() <= t), || format!("{name}: not a prefix exchange of depth ≤ t"))?;
            let p = extend(&sig, &[], t).len();
            // Sx and Qx agree on the first t digits, and so do S⁻¹x and Q⁻¹x;
            // both sups are then at most 2^-t.
            for w in extend(&sig, &[], t) {
                let (fwd, _) = qm.piece(&w).expect("covered");
                let (back, _) = qm.inverse().piece(&w).expect("covered");
                ensure(fwd[..t] == add(&sig, &w, 0, 1).0[..], || format!("{name}: Q disagrees with S on {w:?}"))?;
                ensure(back[..t] == add(&sig, &w, 0, -1).0[..], || format!("{name}: Q⁻¹ disagrees with S⁻¹ on {w:?}"))?;
                let cyl = Set::from_words(&sig, [w.clone()]);
                ensure(qm.iterate(&cyl, p) == cyl, || format!("{name}: Q^{p} moves {w:?}"))?;
            }
            ensure(q.power(p as i64).is_identity(), || format!("{name}: library Q^{p} is not the identity"))?;
            let d = lib(weak_distance(&Homeo::Odometer(s.clone()), &Homeo::Cylinder(q.clone())))?;
            let d = d.exact().ok_or_else(|| format!("{name}: distance not exact"))?.clone();
            ensure(d <= dyadic(t - 1), || format!("{name}: d_w = {d} exceeds 2^(1-t)"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} truncations: d_w ≤ 2^(1-t) and Q^(p_t) = id"))
}

// ---- 6 ---------------------------------------------------------------------

/// The map swapping the two children of `[w]` and fixing everything else.
fn child_swap(sig: &Signature, w: &[u32]) -> CylinderHomeo {
    let mut branches = Vec::new();
    for i in 0..w.len() {
        let sibling = [&w[..i], &[1 - w[i]]].concat();
        branches.push(Branch::new(Word::new(sibling.clone()), Word::new(sibling), 0));
    }
    let c = |d: u32| Word::new([w, &[d]].concat());
    branches.push(Branch::new(c(0), c(1), 0));
    branches.push(Branch::new(c(1), c(0), 0));
    CylinderHomeo::new(sig, branches).expect("a complete code")
}

fn weak_vs_p() -> Result<String, String> {
    let sig = dy();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut gen = Generator::new(6);
    let (mut forward_hits, mut converse_hits) = (0, 0);
    for case in 0..200 {
        let t = gen.cylinder_homeo(2);
        let tm = Map::of(&t);
        let m = rng.gen_range(2..=6);
        let zeta: Vec<Set> = random_partition(&mut rng, &sig, m).iter().map(Set::of).collect();
        // ζ ∨ T⁻¹ζ
        let mut eta = Vec::new();
        for f in &zeta {
            for g in &zeta {
                let a = f.intersect(&sig, &tm.preimage(g));
                if !a.is_empty() {
                    eta.push(a);
                }
            }
        }
        let s = if case % 2 == 0 {
            gen.cylinder_homeo(2)
        } else {
            let deep = eta.iter().map(|a| a.len).max().expect("nonempty") + rng.gen_range(0..2);
            let w: Digits = (0..deep).map(|_| rng.gen_range(0..2)).collect();
            lib(t.compose(&child_swap(&sig, &w)))?
        };
        let sm = Map::of(&s);
        let d = lib(weak_distance(&Homeo::Cylinder(s.clone()), &Homeo::Cylinder(t.clone())))?;
        let d = d.exact().ok_or_else(|| format!("case {case}: distance not exact"))?.clone();

        let mut gap: Option<Rational> = None;
        for (i, f) in zeta.iter().enumerate() {
            let mut g = f.diameter();
            for (j, h) in zeta.iter().enumerate() {
                if i != j {
                    g = g.min(f.distance(&sig, h));
                }
            }
            gap = Some(gap.map_or(g.clone(), |x: Rational| x.min(g)));
        }
        if d < gap.expect("atoms") {
            forward_hits += 1;
            for (i, f) in zeta.iter().enumerate() {
                ensure(sm.image(f).same(&sig, &tm.image(f)), || format!("case {case}: d_w = {d} below the gap but S F_{i} != T F_{i}"))?;
            }
        }

        if eta.iter().all(|a| sm.image(a).same(&sig, &tm.image(a))) {
            converse_hits += 1;
            let delta = zeta.iter().map(Set::diameter).max().expect("atoms");
            ensure(d <= int(2) * delta.clone(), || format!("case {case}: agreement on ζ∨T⁻¹ζ but d_w = {d} > 2·{delta}"))?;
        }
    }
    Ok(format!("200 pairs: gap implication exercised {forward_hits} times, converse {converse_hits} times, no failures"))
}

// ---- 7 ---------------------------------------------------------------------

fn metric_axioms() -> Result<String, String> {
    let mut gen = Generator::new(7);
    let d = |a: &CylinderHomeo, b: &CylinderHomeo| -> Result<Rational, String> {
        let w = lib(weak_distance(&Homeo::Cylinder(a.clone()), &Homeo::Cylinder(b.clone())))?;
        w.exact().cloned().ok_or_else(|| "distance not exact".to_string())
    };
    let mut equal_pairs = 0;
    for case in 0..500 {
        let a = gen.cylinder_homeo(2);
        // Every tenth pair is equal as a map but built by a detour.
        let b = if case % 10 == 0 { lib(lib(a.compose(&a.inverse()))?.compose(&a))? } else { gen.cylinder_homeo(2) };
        let c = gen.cylinder_homeo(2);
        let (ab, ba, bc, ac) = (d(&a, &b)?, d(&b, &a)?, d(&b, &c)?, d(&a, &c)?);
        ensure(d(&a, &a)? == int(0), || format!("case {case}: d(S,S) ≠ 0"))?;
        ensure((ab == int(0)) == (a == b), || format!("case {case}: d(S,T) = {ab} but equality is {}", a == b))?;
        ensure(ab == ba, || format!("case {case}: asymmetric"))?;
        ensure(ac <= ab.clone() + bc.clone(), || format!("case {case}: {ac} > {ab} + {bc}"))?;
        equal_pairs += usize::from(a == b);
    }
    Ok(format!("500 triples ({equal_pairs} equal pairs): identity, symmetry and triangle hold exactly"))
}

// ---- 8 ---------------------------------------------------------------------

fn centralizer() -> Result<String, String> {
    let sig = dy();
    let s = Odometer::new(&sig, 1);
    let sm = Map::of(&s.to_cylinder());
    for k in -3..=5 {
        let r = s.to_cylinder().power(k);
        let rm = Map::of(&r);
        match lib(centralizer_index_sequence(&Homeo::Cylinder(r), &s, 5))? {
            CentralizerResult::Indices(ix) => {
                ensure(ix.len() == 6, || format!("k={k}: {} indices", ix.len()))?;
                for (t, &i) in ix.iter().enumerate() {
                    let p = 1i64 << (t + 1);
                    ensure(i as i64 == k.rem_euclid(p), || format!("k={k}: i_{t} = {i}, want {}", k.rem_euclid(p)))?;
                    for w in extend(&sig, &[], t + 1) {
                        let c = Set::from_words(&sig, [w]);
                        ensure(rm.image(&sm.image(&c)).same(&sig, &sm.image(&rm.image(&c))), || format!("k={k}: RS ≠ SR at level {t}"))?;
                    }
                }
            }
            CentralizerResult::Failure { level, .. } => return Err(format!("k={k}: failed at level {level}")),
        }
    }
    let swap = CylinderHomeo::swap();
    let rm = Map::of(&swap);
    match lib(centralizer_index_sequence(&Homeo::Cylinder(swap), &s, 5))? {
        CentralizerResult::Failure { level, cylinder, image } => {
            ensure(level <= 2, || format!("swap failed only at level {level}"))?;
            ensure(cylinder.len() == level + 1, || "witness cylinder has the wrong length".into())?;
            let c = Set::from_words(&sig, [cylinder.digits().to_vec()]);
            ensure(rm.image(&c).same(&sig, &Set::of(&image)), || "witness image is not R of the cylinder".into())?;
            let p = 1i64 << (level + 1);
            for i in 0..p {
                let matches = extend(&sig, &[], level + 1).into_iter().all(|w| {
                    let c = Set::from_words(&sig, [w.clone()]);
                    rm.image(&c).same(&sig, &Set::from_words(&sig, [add(&sig, &w, 0, i).0]))
                });
                ensure(!matches, || format!("swap equals S^{i} at level {level}"))?;
            }
            Ok(format!("S^k for k in -3..=5 give i_t ≡ k (mod p_t), t ≤ 5; swap fails at level {level}, verified"))
        }
        CentralizerResult::Indices(ix) => Err(format!("swap passed with {ix:?}")),
    }
}

// ---- 9 ---------------------------------------------------------------------

fn strongly_connected(adj: &[Vec<bool>]) -> bool {
    let n = adj.len();
    let reach = |fwd: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for u in 0..n {
                let arc = if fwd { adj[v][u] } else { adj[u][v] };
                if arc && !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|x| x)
    };
    reach(true) && reach(false)
}

/// The least total of a circulation with every arc at least 1, by the dual
/// program `|A| + max Σ_v b(v) π_v` over potentials with `π_j − π_i ≤ 1` on
/// arcs, `b(v) = outdeg − indeg`. With `π_0 = 0` every feasible potential
/// lies in `[−(n−1), n−1]`, so the maximum is found by enumeration.
fn dual_optimum(adj: &[Vec<bool>]) -> u64 {
    let n = adj.len();
    let arcs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| adj[i][j]).collect();
    let mut b = vec![0i64; n];
    for &(i, j) in &arcs {
        b[i] += 1;
        b[j] -= 1;
    }
    let r = n as i64 - 1;
    let mut pi = vec![-r; n];
    pi[0] = 0;
    let mut best = i64::MIN;
    loop {
        if arcs.iter().all(|&(i, j)| pi[j] - pi[i] <= 1) {
            best = best.max((0..n).map(|v| b[v] * pi[v]).sum());
        }
        let mut v = 1;
        while v < n && pi[v] == r {
            pi[v] = -r;
            v += 1;
        }
        if v >= n {
            break;
        }
        pi[v] += 1;
    }
    (arcs.len() as i64 + best) as u64
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn circulation_optimality() -> Result<String, String> {
    let mut cache: HashMap<(usize, u32), u64> = HashMap::new();
    let mut graphs = 0u64;
    for n in 1..=5usize {
        // Self-loops are included exhaustively up to three vertices.
        let loops = n <= 3;
        let slots: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| loops || i != j).collect();
        let slot_of = |i: usize, j: usize| slots.iter().position(|&s| s == (i, j)).expect("slot");
        let relabel: Vec<Vec<usize>> =
            permutations(n).iter().map(|p| slots.iter().map(|&(i, j)| slot_of(p[i], p[j])).collect()).collect();
        for mask in 0u32..(1 << slots.len()) {
            let mut adj = vec![vec![false; n]; n];
            for (s, &(i, j)) in slots.iter().enumerate() {
                adj[i][j] = mask >> s & 1 == 1;
            }
            if !strongly_connected(&adj) {
                continue;
            }
            graphs += 1;
            let m = min_circulation(&adj).ok_or_else(|| format!("no circulation for {adj:?}"))?;
            for i in 0..n {
                for j in 0..n {
                    ensure(adj[i][j] == (m[i][j] >= 1), || format!("{adj:?}: m = {m:?} off the arcs or zero on one"))?;
                }
                let out: u64 = m[i].iter().sum();
                let inn: u64 = (0..n).map(|j| m[j][i]).sum();
                ensure(out == inn, || format!("{adj:?}: unbalanced at {i}"))?;
            }
            let total: u64 = m.iter().flatten().sum();
            let canon = relabel
                .iter()
                .map(|r| (0..slots.len()).filter(|&s| mask >> s & 1 == 1).fold(0u32, |acc, s| acc | 1 << r[s]))
                .min()
                .expect("a permutation");
            let best = *cache.entry((n, canon)).or_insert_with(|| dual_optimum(&adj));
            ensure(total == best, || format!("{adj:?}: total {total}, optimum {best}"))?;
        }
    }
    Ok(format!("{graphs} labelled digraphs ({} up to isomorphism) all optimal", cache.len()))
}

// ---- 10 --------------------------------------------------------------------

fn rank1_end_to_end() -> Result<String, String> {
    let sig = dy();
    let ap = lib(aperiodize_periodic(&CylinderHomeo::swap(), &int(1), 2))?;
    let t = Homeo::Cylinder(ap.map.clone());
    let eps = ratio(1, 2);
    let r = lib(rank1_in_uniform_neighborhood(&t, &[MeasureSpec::uniform(&sig)], &eps, 16))?;
    ensure(r.certificate.len() == 1 && r.certificate[0] < eps, || format!("reported certificate {:?}", r.certificate))?;

    // D ⊇ {Sx ≠ Tx}: the cylinders where a link differs from T as an affine
    // piece, plus the top atom, where S is the return map. Then
    // E(S,T) = D ∪ T(D).
    let tm = Map::of(&ap.map);
    let cycle = r.tower.cycle();
    let mut d = Set::of(cycle.last().expect("nonempty cycle"));
    for link in r.tower.link_branches() {
        let lm = Map::new(&sig, &link);
        for b in &link {
            let len = b.domain.len().max(tm.depth());
            for c in extend(&sig, b.domain.digits(), len) {
                if lm.piece(&c) != tm.piece(&c) {
                    d = d.union(&sig, &Set::from_words(&sig, [c]));
                }
            }
        }
    }
    let e = d.union(&sig, &tm.image(&d));
    let bound = uniform_mass(&sig, &e);
    ensure(bound < eps, || format!("independent bound μ(E) ≤ {bound} is not below 1/2"))?;
    Ok(format!("μ(E) ≤ {bound} independently, reported {} < 1/2", r.certificate[0]))
}

// ---- 11 --------------------------------------------------------------------

fn cli_determinism() -> Result<String, String> {
    for f in common::FIXTURES {
        let runs: Vec<std::process::Output> = (0..3)
            .map(|_| std::process::Command::new(env!("CARGO_BIN_EXE_cdyn")).args(*f).output().expect("binary runs"))
            .collect();
        for o in &runs[1..] {
            ensure(o.stdout == runs[0].stdout && o.stderr == runs[0].stderr && o.status == runs[0].status, || {
                format!("{f:?} differs between runs")
            })?;
        }
        let (out, err, code) = common::run(f);
        ensure(out.as_bytes() == runs[0].stdout && err.as_bytes() == runs[0].stderr && Some(code) == runs[0].status.code(), || {
            format!("{f:?}: binary and library disagree")
        })?;
    }
    for seed in 0..1000 {
        let doc = Generator::new(seed).document();
        let text = print(&doc);
        let back = parse(&text).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(back == doc && print(&back) == text, || format!("seed {seed}: round trip changed the document"))?;
    }
    Ok(format!("{} fixtures byte-identical over 3 runs; 1000 documents round-trip", common::FIXTURES.len()))
}
