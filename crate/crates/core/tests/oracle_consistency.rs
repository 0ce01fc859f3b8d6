//! Cross-checks between the brute-force fiber oracle and the valuation
//! dynamics at the degenerate points where both speak: counts, stratum
//! multisets and the shape of the distinguished subgroups.

use cansub::dieudonne::{self, GroupType, ModelKind};
use cansub::field::Field;
use cansub::hecke::{self, Locus, ValPoint};
use cansub::rat::{rat, rat_int, Rat};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

fn stratum_multiset(ws: &[dieudonne::CyclicSubgroupWitness]) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for w in ws {
        *out.entry(w.stratum.clone().unwrap()).or_insert(0) += 1;
    }
    out
}

/// The rational fiber over an a-number-one point has p^2 + 1 members:
/// the marked subgroup plus one source per image of the correspondence.
#[test]
fn a1_fiber_count_matches_image_count() {
    let p = 3u64;
    let f = Field::new(p, 2).unwrap();
    let d = dieudonne::dmod_model(ModelKind::SupersingularA1, &f, 2, Some(&f.gen())).unwrap();
    let ws = dieudonne::enumerate_cyclic_subgroups(&d).unwrap();
    let q = ValPoint::deg2_flagged(Rat::zero(), Rat::one(), Locus::Supergeneral, None);
    let ms = hecke::up_image(&q, p, 0).unwrap();
    assert_eq!(ws.len() as u64, ms.total() + 1);

    // the stratum multiset of the fiber witnesses is pinned by the geometry
    let strata = stratum_multiset(&ws);
    let expected: BTreeMap<String, usize> = [
        ("W(B,1)".to_string(), 1),
        ("W(1,B)".to_string(), 1),
        ("W(1,1)".to_string(), 8),
    ]
    .into();
    assert_eq!(strata, expected);
}

/// At a superspecial vertex with full heights the image multiset splits
/// 1 + (p^2 - 1), mirroring the doubly-distinguished crossing witness.
#[test]
fn superspecial_fiber_against_vertex_split() {
    let p = 3u64;
    let f = Field::new(p, 2).unwrap();
    let d = dieudonne::dmod_model(ModelKind::Superspecial, &f, 2, None).unwrap();
    let ws = dieudonne::enumerate_cyclic_subgroups(&d).unwrap();
    assert_eq!(ws.len(), 2 * (p as usize * p as usize + 1) - 1);

    let strata = stratum_multiset(&ws);
    let expected: BTreeMap<String, usize> = [
        ("W(1,1)".to_string(), 9),
        ("W(2,2)".to_string(), 9),
        ("W(B,B)".to_string(), 1),
    ]
    .into();
    assert_eq!(strata, expected);

    // exactly one witness is simultaneously in every distinguished position
    let crossing: Vec<_> = ws
        .iter()
        .filter(|w| w.phi_set == vec![0, 1] && w.eta_set == vec![0, 1])
        .collect();
    assert_eq!(crossing.len(), 1);
    assert_eq!(crossing[0].group_type, Some(GroupType::AlphaPxAlphaP));

    let q = ValPoint::deg2_flagged(
        Rat::zero(),
        Rat::one(),
        Locus::Superspecial,
        Some(Rat::one()),
    );
    let ms = hecke::up_image(&q, p, 0).unwrap();
    assert_eq!(ms.entries.len(), 2);
    assert_eq!(ms.entries[0].mult, 1);
    assert_eq!(ms.entries[1].mult, p * p - 1);
    // every image obeys the vertex law nu_i + p nu_{i+1} = p
    for entry in &ms.entries {
        if let hecke::PrimeData::Two { nu, .. } = &entry.point.primes[0] {
            assert_eq!(
                nu[0].clone() + rat_int(p as i64) * nu[1].clone(),
                rat_int(p as i64)
            );
        }
    }
}

/// Critical indices of the fiber witnesses are exactly where both halves of
/// the admissible pair meet, matching the marked coordinate conventions.
#[test]
fn critical_indices_are_consistent() {
    let f = Field::new(3, 2).unwrap();
    for (kind, t2) in [
        (ModelKind::Superspecial, None),
        (ModelKind::SupersingularA1, Some(f.gen())),
        (ModelKind::Ordinary, None),
    ] {
        let d = dieudonne::dmod_model(kind, &f, 2, t2.as_ref()).unwrap();
        for w in dieudonne::enumerate_cyclic_subgroups(&d).unwrap() {
            assert!(dieudonne::is_admissible(2, &w.phi_set, &w.eta_set));
            for &i in &w.i_set {
                assert!(w.eta_set.contains(&i));
                assert!(w.phi_set.contains(&((i + 1) % 2)));
            }
        }
    }
}

/// The two edge laws agree at their common boundary (p+1)/(p^2+1).
#[test]
fn edge_laws_agree_at_the_cut() {
    let p = 3i64;
    let cut = rat(p + 1, p * p + 1);
    let q = ValPoint::deg2(Rat::zero(), cut.clone());
    let ms = hecke::up_image(&q, 3, 0).unwrap();
    // the upper law applies at the cut and gives p^2 equal images
    assert_eq!(ms.entries.len(), 1);
    if let hecke::PrimeData::Two { nu, .. } = &ms.entries[0].point.primes[0] {
        // 1 - 1/p - (1 - cut)/p^2 equals the lower law's generic value 1 - cut
        let upper = Rat::one() - rat(1, p) - (Rat::one() - cut.clone()) / rat_int(p * p);
        assert_eq!(nu[1], upper);
        assert_eq!(nu[1], Rat::one() - cut);
    }
}

/// Stepping at one prime leaves every other prime's data untouched.
#[test]
fn multi_prime_independence() {
    let q = ValPoint {
        primes: vec![
            hecke::PrimeData::One { nu: rat(1, 2) },
            hecke::PrimeData::Two {
                nu: vec![rat(1, 2), rat(3, 4)],
                w: None,
                flag: None,
                coords: None,
            },
        ],
    };
    let p = 3;
    // total multiplicity is p^f of the stepped prime
    let ms0 = hecke::up_image(&q, p, 0).unwrap();
    assert_eq!(ms0.total(), p);
    for e in &ms0.entries {
        assert_eq!(e.point.primes[1], q.primes[1]);
    }
    let ms1 = hecke::up_image(&q, p, 1).unwrap();
    assert_eq!(ms1.total(), p * p);
    for e in &ms1.entries {
        assert_eq!(e.point.primes[0], q.primes[0]);
    }
    // weighted sums at the untouched prime are constant along orbits
    let tree = hecke::orbit(&q, p, 1, 3).unwrap();
    fn check_first_prime(n: &hecke::OrbitNode, expect: &hecke::PrimeData) {
        assert_eq!(&n.point.primes[0], expect);
        for c in &n.children {
            check_first_prime(c, expect);
        }
    }
    check_first_prime(&tree, &q.primes[0]);
}

/// Expansion oracle for the polygon: multiply out a product of linear
/// factors (z - c_j u^{s_j}) with unit coefficients over F_9[[u]], read the
/// coefficient valuations, and recover the multiset of root valuations.
#[test]
fn newton_recovers_prescribed_roots() {
    use cansub::newton::newton_slopes;
    use cansub::series::Series;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    let f = Field::new(3, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0E0);
    let prec = 64;
    for _ in 0..25 {
        let nroots = rng.gen_range(2..=6usize);
        let svals: Vec<usize> = (0..nroots).map(|_| rng.gen_range(0..8usize)).collect();
        // polynomial in z with series coefficients, constant first
        let mut coeffs: Vec<Series> = vec![Series::one(&f, prec)];
        for &s in &svals {
            let c = f.rand_nonzero(&mut rng);
            let root = Series::monomial(&f, &c, s, prec);
            // multiply by (z - root)
            let mut next = vec![Series::zero(&f, prec); coeffs.len() + 1];
            for (k, a) in coeffs.iter().enumerate() {
                next[k + 1] = next[k + 1].add(&f, a);
                next[k] = next[k].sub(&f, &a.mul(&f, &root).truncate(&f, prec));
            }
            coeffs = next;
        }
        let pts: Vec<(u64, cansub::Rat)> = coeffs
            .iter()
            .enumerate()
            .filter_map(|(k, c)| c.val(&f).finite().map(|v| (k as u64, rat_int(v as i64))))
            .collect();
        let slopes = newton_slopes(&pts).unwrap();
        // flatten into a sorted multiset of valuations
        let mut recovered: Vec<usize> = Vec::new();
        for s in &slopes {
            let v: i64 = s.val.to_integer().try_into().unwrap();
            for _ in 0..s.mult {
                recovered.push(v as usize);
            }
        }
        recovered.sort_unstable();
        let mut expected = svals.clone();
        expected.sort_unstable();
        assert_eq!(recovered, expected);
    }
}

/// Along canonical orbits the weighted sums increase strictly toward the
/// ordinary value 1 + p and never overshoot it.
#[test]
fn canonical_orbit_sums_increase_to_the_ordinary_value() {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    let p = 3u64;
    let top = rat_int(1 + p as i64);
    let mut rng = ChaCha8Rng::seed_from_u64(0x0E1);
    let mut tried = 0;
    while tried < 50 {
        // interior canonical starts: both coordinates strictly below 1, so
        // the contraction toward the ordinary vertex is strict forever
        let den = rng.gen_range(2..=16i64);
        let q = ValPoint::deg2(
            rat(rng.gen_range(0..den), den),
            rat(rng.gen_range(0..den), den),
        );
        if hecke::region_classify(&q, p, 0).unwrap().region != hecke::Region::Canonical {
            continue;
        }
        tried += 1;
        let tree = hecke::orbit(&q, p, 0, 5).unwrap();
        fn walk(n: &hecke::OrbitNode, parent: Option<&Vec<Rat>>, top: &Rat) {
            let sums: Vec<Rat> = n
                .sums
                .iter()
                .map(|s| cansub::rat::parse_rat(s).unwrap())
                .collect();
            for s in &sums {
                assert!(s < top, "interior orbits stay strictly below 1 + p");
            }
            if let Some(ps) = parent {
                for (a, b) in ps.iter().zip(&sums) {
                    assert!(b > a, "sum stalled below the ordinary value");
                }
            }
            for c in &n.children {
                walk(c, Some(&sums), top);
            }
        }
        walk(&tree, None, &top);
    }
}

/// The anti-canonical rule governs the low edge: region classification runs
/// before any stratum-specific law.
#[test]
fn low_edge_dispatches_through_the_anti_rule() {
    let q = ValPoint::deg2(Rat::zero(), rat(1, 5));
    let ms = hecke::up_image(&q, 3, 0).unwrap();
    assert_eq!(ms.entries.len(), 2);
    assert_eq!(ms.entries[0].branch, hecke::Branch::AntiBranch);
    if let hecke::PrimeData::Two { nu, .. } = &ms.entries[0].point.primes[0] {
        assert_eq!(nu, &vec![rat(3, 5), Rat::zero()]);
    }
    if let hecke::PrimeData::Two { nu, .. } = &ms.entries[1].point.primes[0] {
        assert_eq!(nu, &vec![Rat::one(), rat(4, 5)]);
    }
}
