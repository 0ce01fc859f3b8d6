//! Acceptance suite: one test per criterion, each printing a pass line with
//! its budget. Every tolerance here is exact rational equality or a pinned
//! integer count; there are no floating-point comparisons anywhere.

use cansub::bk;
use cansub::continuation;
use cansub::dieudonne::{self, GroupType, ModelKind};
use cansub::field::Field;
use cansub::hecke::{self, Locus, PrimeData, ValPoint};
use cansub::newton::newton_slopes;
use cansub::rat::{rat, rat_int, Rat};
use cansub::series::Series;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn budget(name: &str, start: Instant, secs: u64) {
    let elapsed = start.elapsed();
    println!("{name}: PASS ({elapsed:.2?}, budget {secs}s)");
    assert!(
        elapsed.as_secs() < secs,
        "{name} exceeded its {secs}s budget: {elapsed:?}"
    );
}

/// AC1: canonical-subgroup suite on generated instances.
#[test]
fn ac1_canonical_subgroup_suite() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC01);
    let mut done = 0usize;
    for p in [2u64, 3, 5] {
        let mut done_p = 0usize;
        'prime: for g in 1..=4usize {
            let field = Field::new(p, g).unwrap();
            for e in 1..=6usize {
                for _ in 0..3 {
                    // e*w_i integral with w_i + p*w_{i-1} < p
                    let w: Vec<Rat> = (0..g)
                        .map(|_| rat(rng.gen_range(0..e as i64), e as i64))
                        .collect();
                    let admissible = (0..g).all(|i| {
                        w[i].clone() + rat_int(p as i64) * w[(i + g - 1) % g].clone()
                            < rat_int(p as i64)
                    });
                    if !admissible {
                        continue;
                    }
                    let prec = e * (p as usize + 2) + 4;
                    let m = bk::sample_adapted_module(&field, g, e, prec, &w, &mut rng).unwrap();
                    let (line, cdeg) = bk::canonical_subgroup(&m).unwrap();
                    // deg_i(C) = 1 - w_i as exact rationals
                    for i in 0..g {
                        assert_eq!(cdeg.0[i], Rat::one() - w[i].clone());
                        let s =
                            cdeg.0[i].clone() + rat_int(p as i64) * cdeg.0[(i + g - 1) % g].clone();
                        assert!(s > Rat::one(), "characterizing inequality failed");
                    }
                    // re-substitution residual vanishes mod u^prec
                    bk::verify_phi_stable(&m, &line).unwrap();
                    done += 1;
                    done_p += 1;
                    if done_p >= 40 {
                        break 'prime;
                    }
                }
            }
        }
        assert!(done_p >= 34, "only {done_p} instances for p = {p}");
    }
    assert!(done >= 100, "only {done} instances generated");
    budget("AC1 canonical-subgroup suite", start, 60);
}

/// AC2: fiber-count oracle over F_9.
#[test]
fn ac2_fiber_count_oracle() {
    let start = Instant::now();
    let f = Field::new(3, 2).unwrap();

    let d = dieudonne::dmod_model(ModelKind::SupersingularA1, &f, 2, Some(&f.gen())).unwrap();
    let ws = dieudonne::enumerate_cyclic_subgroups(&d).unwrap();
    assert_eq!(ws.len(), 10);
    let count = |ws: &[dieudonne::CyclicSubgroupWitness], t: GroupType| {
        ws.iter().filter(|w| w.group_type == Some(t)).count()
    };
    assert_eq!(count(&ws, GroupType::AlphaP2Dual), 1);
    assert_eq!(count(&ws, GroupType::AlphaP2), 1);
    assert_eq!(count(&ws, GroupType::Alpha), 8);
    assert!(
        ws.iter().all(|w| w.omega_dims[1] == 1),
        "omega_2 must be one-dimensional"
    );
    // the dual-side tags match the typing
    for w in &ws {
        match w.group_type.unwrap() {
            GroupType::AlphaP2Dual => assert_eq!(w.omega_dims, vec![1, 1]),
            GroupType::AlphaP2 | GroupType::Alpha => assert_eq!(w.omega_dims, vec![0, 1]),
            GroupType::AlphaPxAlphaP => panic!("no crossing point on this fiber"),
        }
    }

    let d = dieudonne::dmod_model(ModelKind::Superspecial, &f, 2, None).unwrap();
    let ws = dieudonne::enumerate_cyclic_subgroups(&d).unwrap();
    assert_eq!(ws.len(), 19);
    assert_eq!(count(&ws, GroupType::AlphaPxAlphaP), 1);
    assert_eq!(count(&ws, GroupType::Alpha), 18);
    let branch1 = ws.iter().filter(|w| w.omega_dims == vec![1, 0]).count();
    let branch2 = ws.iter().filter(|w| w.omega_dims == vec![0, 1]).count();
    assert_eq!((branch1, branch2), (9, 9));
    // the crossing point is the doubly-distinguished one
    let crossing = ws
        .iter()
        .find(|w| w.group_type == Some(GroupType::AlphaPxAlphaP))
        .unwrap();
    assert_eq!(crossing.stratum.as_deref(), Some("W(B,B)"));
    assert_eq!(crossing.omega_dims, vec![1, 1]);

    budget("AC2 fiber-count oracle", start, 5);
}

/// AC3: degree-spectrum equivalence against the Newton-polygon route.
#[test]
fn ac3_degree_spectrum_equivalence() {
    let start = Instant::now();
    let p = 3u64;
    let e = 30usize; // p | e, enough resolution for a 10-point grid
    let f = Field::new(p, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC03);
    let grid: Vec<Option<Rat>> = vec![
        Some(rat(0, 1)),
        Some(rat(2, 30)),
        Some(rat(5, 30)),
        Some(rat(9, 30)),
        Some(rat(12, 30)),
        Some(rat(15, 30)),
        Some(rat(17, 30)),
        Some(rat(18, 30)), // exactly p(p-1)/(p^2+1)
        Some(rat(20, 30)),
        None, // identically vanishing combination
    ];
    assert_eq!(grid.len(), 10);
    let threshold = rat(6, 10);
    for alpha in &grid {
        let prec = e * 5 + 6;
        let m = bk::sample_spectrum_module(&f, e, prec, 0, alpha.as_ref(), &mut rng).unwrap();
        let classes = bk::subgroup_degree_spectrum_g2(&m, 0).unwrap();
        // route 2: expand the one-variable equation and read the polygon
        let data = bk::spectrum_data(&m, 0).unwrap();
        let slopes = newton_slopes(&data.newton_points).unwrap();
        let mut derived: Vec<(Rat, u64)> = slopes
            .iter()
            .map(|s| {
                // a root of u-valuation v cuts out a subgroup of second
                // degree min(1, 1/p + v/e)
                let d = rat(1, p as i64) + s.val.clone() / rat_int(e as i64);
                (if d > Rat::one() { Rat::one() } else { d }, s.mult)
            })
            .collect();
        derived.sort_by(|a, b| b.0.cmp(&a.0));
        let mut got: Vec<(Rat, u64)> = classes
            .iter()
            .map(|c| (c.degrees.0[1].clone(), c.mult))
            .collect();
        got.sort_by(|a, b| b.0.cmp(&a.0));
        assert_eq!(derived, got, "alpha = {alpha:?}");
        // total count p^2 + 1
        let total: u64 = classes.iter().map(|c| c.mult).sum();
        assert_eq!(total, p * p + 1);
        // the displayed pairing between the distinguished member and the
        // rest: p^2 d' + d = p + 1, uniformly in both polygon cases
        let (d_dist, d_gen) = if classes.len() == 2 {
            (
                classes[0].degrees.0[1].clone(),
                classes[1].degrees.0[1].clone(),
            )
        } else {
            (
                classes[0].degrees.0[1].clone(),
                classes[0].degrees.0[1].clone(),
            )
        };
        assert_eq!(
            rat_int((p * p) as i64) * d_gen.clone() + d_dist.clone(),
            rat_int((p + 1) as i64)
        );
        // on the genuinely supergeneral fiber (alpha = 0) the non-marked
        // members satisfy the weighted degree identity exactly
        if alpha.as_ref().is_some_and(|a| a.is_zero()) {
            assert_eq!(
                classes[1].degrees.0[0].clone()
                    + rat_int(p as i64) * classes[1].degrees.0[1].clone(),
                Rat::one()
            );
        }
        // case split sanity at the boundary
        if let Some(a) = alpha {
            if *a >= threshold {
                assert_eq!(classes.len(), 1);
            }
        }
    }
    budget("AC3 degree-spectrum equivalence", start, 30);
}

fn rand_rat<R: Rng>(rng: &mut R) -> Rat {
    let den = rng.gen_range(1..=20i64);
    rat(rng.gen_range(0..=den), den)
}

/// AC4: dynamics invariants on sampled points.
#[test]
fn ac4_dynamics_invariants() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC04);
    let one = Rat::one();

    for p in [2u64, 3, 5] {
        let pr = rat_int(p as i64);
        let mut canonical = 0usize;
        let mut anti = 0usize;
        let mut edge = 0usize;
        let mut deg1 = 0usize;
        let target = 10_000usize / 3 + 1;
        // degree-2 sampling across regions
        while canonical < target || anti < target {
            let q = ValPoint::deg2(rand_rat(&mut rng), rand_rat(&mut rng));
            let cls = hecke::region_classify(&q, p, 0).unwrap();
            match cls.region {
                hecke::Region::Canonical if canonical < target => {
                    canonical += 1;
                    let ms = hecke::up_image(&q, p, 0).unwrap();
                    assert_eq!(ms.total(), p * p);
                    for entry in &ms.entries {
                        let c = hecke::region_classify(&entry.point, p, 0).unwrap();
                        assert_eq!(c.region, hecke::Region::Canonical, "forward invariance");
                    }
                }
                hecke::Region::AntiCanonical if anti < target => {
                    anti += 1;
                    let ms = hecke::up_image(&q, p, 0).unwrap();
                    assert_eq!(ms.total(), p * p);
                }
                _ => {}
            }
        }
        // determined boundary strata: the vertex loci with flags and the edges
        while edge < target {
            let t = rand_rat(&mut rng);
            if t < rat(1, p as i64) || t == one {
                continue;
            }
            let q = ValPoint::deg2(Rat::zero(), t);
            let ms = hecke::up_image(&q, p, 0).unwrap();
            assert_eq!(ms.total(), p * p);
            edge += 1;
        }
        // degree-1 points across all regions
        while deg1 < target {
            let q = ValPoint::deg1(rand_rat(&mut rng));
            let ms = hecke::up_image(&q, p, 0).unwrap();
            assert_eq!(ms.total(), p);
            deg1 += 1;
        }

        // V_can(r) contraction: sums >= p + 1 - r force image sums >= p + 1 - r/p
        for _ in 0..2000 {
            let r = {
                let den = rng.gen_range(1..=12i64);
                rat(rng.gen_range(1..=(p as i64) * den - 1), den)
            };
            let q = ValPoint::deg2(rand_rat(&mut rng), rand_rat(&mut rng));
            let sums = hecke::weighted_sums(&q, p, 0).unwrap();
            let bound = pr.clone() + one.clone() - r.clone();
            if sums.iter().any(|s| *s < bound) {
                continue;
            }
            if hecke::region_classify(&q, p, 0).unwrap().region != hecke::Region::Canonical {
                continue;
            }
            let ms = hecke::up_image(&q, p, 0).unwrap();
            let tighter = pr.clone() + one.clone() - r.clone() / pr.clone();
            for entry in &ms.entries {
                let s2 = hecke::weighted_sums(&entry.point, p, 0).unwrap();
                assert!(s2.iter().all(|s| *s >= tighter), "contraction failed");
            }
        }
    }

    // monotone weighted sums along every path of random depth-6 orbits
    let p = 3u64;
    let mut paths = 0usize;
    let mut starts = 0usize;
    while paths < 1000 {
        starts += 1;
        let q = match starts % 4 {
            0 => ValPoint::deg2(rand_rat(&mut rng), rand_rat(&mut rng)),
            1 => ValPoint::deg2_flagged(Rat::zero(), Rat::one(), Locus::Supergeneral, None),
            2 => {
                let den = rng.gen_range(1..=8i64);
                let w = rat(rng.gen_range(1..=den), den);
                ValPoint::deg2_flagged(Rat::zero(), Rat::one(), Locus::Superspecial, Some(w))
            }
            _ => ValPoint::deg1(rand_rat(&mut rng)),
        };
        let tree = match hecke::orbit(&q, p, 0, 6) {
            Ok(t) => t,
            Err(_) => continue,
        };
        assert!(
            hecke::orbit_monotone(&tree),
            "weighted sums decreased along a path"
        );
        fn count_paths(n: &hecke::OrbitNode) -> usize {
            if n.children.is_empty() {
                1
            } else {
                n.children.iter().map(count_paths).sum()
            }
        }
        paths += count_paths(&tree);
    }

    // the supersingular vertex law: images satisfy nu_i + p nu_{i+1} = p
    for _ in 0..500 {
        let den = rng.gen_range(1..=10i64);
        let w = rat(rng.gen_range(1..=den), den);
        let q = ValPoint::deg2_flagged(Rat::zero(), Rat::one(), Locus::Superspecial, Some(w));
        let ms = hecke::up_image(&q, 3, 0).unwrap();
        for entry in &ms.entries {
            if let PrimeData::Two { nu, .. } = &entry.point.primes[0] {
                assert_eq!(nu[0].clone() + rat_int(3) * nu[1].clone(), rat_int(3));
            }
        }
    }

    budget("AC4 dynamics invariants", start, 60);
}

/// AC5: superspecial tower shifts and membership.
#[test]
fn ac5_superspecial_tower() {
    let start = Instant::now();
    // integer coordinates: membership in the n-th tower level is n-hat >= n
    let q = ValPoint::deg2(Rat::zero(), Rat::one()).with_coords(0, rat_int(1), rat_int(10));
    let tree = hecke::orbit(&q, 3, 0, 10).unwrap();
    let mut node = &tree;
    for k in 0..10u32 {
        // tower level reported at this node: floor(n-hat) = 10 - k
        let expect_level = 10 - k;
        assert_eq!(
            node.tower_level.as_deref(),
            Some(format!("{expect_level}").as_str())
        );
        // the point is in V_{i,n} exactly for n <= expect_level
        if let PrimeData::Two {
            coords: Some(c), ..
        } = &node.point.primes[0]
        {
            assert_eq!(c.m, rat_int(1 + k as i64));
            assert_eq!(c.n, rat_int(10 - k as i64));
            for n in 1..=10i64 {
                let member = c.n >= rat_int(n);
                assert_eq!(member, n <= expect_level as i64);
            }
        } else {
            panic!("tower node lost its coordinates");
        }
        if k < 9 {
            node = node
                .children
                .iter()
                .find(|c| c.branch == Some(hecke::Branch::SBranch))
                .expect("s-branch continues while n-hat >= 1");
        }
    }
    // fractional tail: (1, 23/8) stays twice, exits at step 3 with
    // (p(1-w), w), w = 7/8
    let q = ValPoint::deg2(Rat::zero(), Rat::one()).with_coords(0, rat_int(1), rat(23, 8));
    let tree = hecke::orbit(&q, 3, 0, 3).unwrap();
    let s1 = tree
        .children
        .iter()
        .find(|c| c.branch == Some(hecke::Branch::SBranch))
        .unwrap();
    let s2 = s1
        .children
        .iter()
        .find(|c| c.branch == Some(hecke::Branch::SBranch))
        .unwrap();
    let s3 = s2
        .children
        .iter()
        .find(|c| c.branch == Some(hecke::Branch::SBranch))
        .unwrap();
    for (node, expect) in [
        (s1, (rat_int(0), rat_int(1))),
        (s2, (rat_int(0), rat_int(1))),
    ] {
        if let PrimeData::Two { nu, .. } = &node.point.primes[0] {
            assert_eq!((nu[0].clone(), nu[1].clone()), expect);
        }
    }
    if let PrimeData::Two { nu, .. } = &s3.point.primes[0] {
        assert_eq!((nu[0].clone(), nu[1].clone()), (rat(3, 8), rat(7, 8)));
    }
    budget("AC5 superspecial tower", start, 10);
}

/// AC6: continuation ledger across the full grid.
#[test]
fn ac6_continuation_ledger() {
    let start = Instant::now();
    for p in [2u64, 3, 5] {
        for k2 in 3..=12i64 {
            let eps = rat(2 * p as i64 + 1, 2 * p as i64 + 2); // inside (p/(p+1), 1)
            for v in 0..=(k2 - 3) {
                for k1 in [k2, k2 + 2] {
                    let s = continuation::SlopeData {
                        p,
                        primes: vec![continuation::PrimeSlope::Two {
                            k: vec![k1, k2],
                            v: rat_int(v),
                            eps: Some(eps.clone()),
                        }],
                    };
                    let ledger = continuation::bound_ledger(&s, 64).unwrap();
                    assert!(
                        ledger.all_required_pass(),
                        "p={p} k2={k2} v={v}: {:?}",
                        ledger.first_failure().map(|e| e.name.clone())
                    );
                    assert!(continuation::classicality_check(&s).unwrap().classical);
                }
            }
            // boundary v = k2 - 2: at least one entry fails and is named
            let s = continuation::SlopeData {
                p,
                primes: vec![continuation::PrimeSlope::Two {
                    k: vec![k2, k2],
                    v: rat_int(k2 - 2),
                    eps: Some(eps.clone()),
                }],
            };
            let ledger = continuation::bound_ledger(&s, 64).unwrap();
            assert!(!ledger.all_required_pass());
            assert_eq!(
                ledger.first_failure().unwrap().name,
                "tower-decay-coefficient"
            );
            assert!(!continuation::classicality_check(&s).unwrap().classical);
        }
        // degree-1 ledger passes exactly when v < k - 1
        for k in 2..=12i64 {
            for num in 0..=(4 * k) {
                let v = rat(num, 4);
                let s = continuation::SlopeData {
                    p,
                    primes: vec![continuation::PrimeSlope::One { k, v: v.clone() }],
                };
                let ledger = continuation::bound_ledger(&s, 64).unwrap();
                assert_eq!(
                    ledger.all_required_pass(),
                    v < rat_int(k - 1),
                    "p={p} k={k} v={v}"
                );
            }
        }
    }
    budget("AC6 continuation ledger", start, 10);
}

/// AC7: windows verification grid.
#[test]
fn ac7_windows_verification() {
    let start = Instant::now();
    use cansub::windows::{self, Sign};
    for p in [2u64, 3] {
        for g in [2usize, 4] {
            let w = windows::universal_window(p, g, 3, 27).unwrap();
            windows::verify_window(&w).unwrap();
            for m in 1..=2u32 {
                for n in 1..=2u32 {
                    let s = windows::specialize(&w, m, n).unwrap();
                    windows::verify_window(&s).unwrap();
                    for sign in [Sign::Plus, Sign::Minus] {
                        // stability and bit-exact display equality
                        let l = windows::build_sublattice(&s, sign).unwrap();
                        // psi exists and the composite of 2g twisted steps is
                        // divisible by p
                        let psi = windows::sublattice_psi(&s.ring, &l).unwrap();
                        let rep = windows::nilpotence_check(&s.ring, &psi, 2 * g);
                        assert!(rep.in_p, "p={p} g={g} ({m},{n}) {sign:?}");
                        // omega cokernels follow the parity pattern
                        let divisors = windows::omega_cokernel(&s, &l).unwrap();
                        let expected: Vec<u32> = (0..g)
                            .map(|i| match (sign, i % 2 == 0) {
                                (Sign::Plus, true) => 0,
                                (Sign::Plus, false) => m,
                                (Sign::Minus, true) => n,
                                (Sign::Minus, false) => 0,
                            })
                            .collect();
                        assert_eq!(divisors, expected);
                    }
                    // per index pair, the divisor exponents of both signs sum
                    // to m + n
                    let a = windows::omega_cokernel(
                        &s,
                        &windows::build_sublattice(&s, Sign::Plus).unwrap(),
                    )
                    .unwrap();
                    let b = windows::omega_cokernel(
                        &s,
                        &windows::build_sublattice(&s, Sign::Minus).unwrap(),
                    )
                    .unwrap();
                    for pair in 0..g / 2 {
                        let total = a[2 * pair] + a[2 * pair + 1] + b[2 * pair] + b[2 * pair + 1];
                        assert_eq!(total, m + n);
                    }
                }
            }
            // the control window never becomes small
            let mut ctl = windows::multiplicative_control_window(p, g, 3, 27).unwrap();
            windows::psi_compute(&mut ctl).unwrap();
            for steps in 1..=2 * g {
                let rep =
                    windows::nilpotence_check(&ctl.ring, ctl.psi_mats.as_ref().unwrap(), steps);
                assert!(!rep.in_p && !rep.in_p_vars);
            }
        }
    }
    budget("AC7 windows verification", start, 30);
}

/// AC8: randomized algebra properties, ten thousand cases each.
#[test]
fn ac8_algebra_property_suite() {
    let start = Instant::now();
    let f = Field::new(3, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC08);

    // valuation additivity on products
    for _ in 0..10_000 {
        let a = Series::rand(&f, 10, &mut rng);
        let b = Series::rand(&f, 10, &mut rng);
        let prod = a.mul(&f, &b);
        if let (Some(va), Some(vb)) = (a.val(&f).finite(), b.val(&f).finite()) {
            if va + vb < prod.prec {
                assert_eq!(prod.val(&f).finite(), Some(va + vb));
            }
        }
    }

    // the semilinear endomorphism is a ring homomorphism
    for _ in 0..10_000 {
        let a = Series::rand(&f, 6, &mut rng);
        let b = Series::rand(&f, 6, &mut rng);
        let lhs = a.mul(&f, &b).phi(&f);
        let rhs = a.phi(&f).mul(&f, &b.phi(&f));
        let bound = lhs.prec.min(rhs.prec);
        assert!(lhs.eq_mod(&f, &rhs, bound));
        let lhs = a.add(&f, &b).phi(&f);
        let rhs = a.phi(&f).add(&f, &b.phi(&f));
        assert!(lhs.eq_mod(&f, &rhs, lhs.prec.min(rhs.prec)));
    }

    // unit inversion
    for _ in 0..10_000 {
        let s = Series::rand_unit(&f, 8, &mut rng);
        let inv = s.inv_unit(&f).unwrap();
        assert!(s.mul(&f, &inv).eq_mod(&f, &Series::one(&f, 8), 8));
    }

    // Smith-form degree additivity along line/quotient exact sequences
    let field2 = Field::new(2, 2).unwrap();
    let mut additivity_cases = 0usize;
    for case in 0..10_000 {
        let (fld, p, e) = if case % 2 == 0 {
            (&field2, 2u64, 2usize)
        } else {
            (&f, 3, 2)
        };
        let g = 2;
        let prec = e * (p as usize + 2);
        let w: Vec<Rat> = (0..g)
            .map(|_| rat(rng.gen_range(0..e as i64), e as i64))
            .collect();
        let ok = (0..g).all(|i| {
            w[i].clone() + rat_int(p as i64) * w[(i + g - 1) % g].clone() < rat_int(p as i64)
        });
        if !ok {
            continue;
        }
        let m = bk::sample_adapted_module(fld, g, e, prec, &w, &mut rng).unwrap();
        let total = bk::bk_degrees(&m).unwrap();
        let (line, cdeg) = bk::canonical_subgroup(&m).unwrap();
        let ldeg = line.deg_line(fld).unwrap();
        for i in 0..g {
            assert_eq!(ldeg.0[i].clone() + cdeg.0[i].clone(), total.0[i]);
        }
        additivity_cases += 1;
    }
    assert_eq!(additivity_cases, 10_000, "every sampled case must complete");

    budget("AC8 algebra property suite", start, 60);
}
