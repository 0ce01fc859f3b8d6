//! The p-Hecke correspondence as an exact-rational dynamical system on
//! valuation data: region and stratum classification, the per-stratum image
//! multisets, derived partial Hodge heights, orbit trees with monotonicity
//! reports, and the deformation-coordinate tower at superspecial points.

use crate::error::{Error, Result};
use crate::rat::{rat, rat_int, Rat};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Locus {
    Supergeneral,
    Superspecial,
}

/// Valuations of the superspecial deformation parameters (t_i, t_{i+1}) at
/// the vertex stratum carrying the point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefCoords {
    #[serde(with = "crate::rat::rat_string")]
    pub m: Rat,
    #[serde(with = "crate::rat::rat_string")]
    pub n: Rat,
}

/// Valuation data at one prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "f")]
pub enum PrimeData {
    #[serde(rename = "1")]
    One {
        #[serde(with = "crate::rat::rat_string")]
        nu: Rat,
    },
    #[serde(rename = "2")]
    Two {
        #[serde(with = "crate::rat::rat_vec_string")]
        nu: Vec<Rat>,
        #[serde(
            default,
            with = "crate::rat::rat_opt_vec_string",
            skip_serializing_if = "Option::is_none"
        )]
        w: Option<Vec<Rat>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        flag: Option<Locus>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        coords: Option<DefCoords>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValPoint {
    pub primes: Vec<PrimeData>,
}

impl ValPoint {
    pub fn deg1(nu: Rat) -> Self {
        ValPoint {
            primes: vec![PrimeData::One { nu }],
        }
    }

    pub fn deg2(nu1: Rat, nu2: Rat) -> Self {
        ValPoint {
            primes: vec![PrimeData::Two {
                nu: vec![nu1, nu2],
                w: None,
                flag: None,
                coords: None,
            }],
        }
    }

    /// Vertex point with a locus flag; `w_next` is the height at the moving
    /// index (the one where nu vanishes is pinned at height 1).
    pub fn deg2_flagged(nu1: Rat, nu2: Rat, flag: Locus, w_next: Option<Rat>) -> Self {
        let vertex = if nu1.is_zero() { 0 } else { 1 };
        let w = w_next.map(|x| {
            let mut v = vec![Rat::one(); 2];
            v[(vertex + 1) % 2] = x;
            v
        });
        ValPoint {
            primes: vec![PrimeData::Two {
                nu: vec![nu1, nu2],
                w,
                flag: Some(flag),
                coords: None,
            }],
        }
    }

    pub fn with_coords(mut self, prime: usize, m: Rat, n: Rat) -> Self {
        if let PrimeData::Two { coords, flag, .. } = &mut self.primes[prime] {
            if flag.is_none() {
                *flag = Some(if n.is_positive() {
                    Locus::Superspecial
                } else {
                    Locus::Supergeneral
                });
            }
            *coords = Some(DefCoords { m, n });
        }
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    Canonical,
    AntiCanonical,
    TooSingular,
}

/// The half-open interval checks gate the case split exactly; every label is
/// printed with 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub region: Region,
    pub stratum: String,
}

fn validate_unit_interval(nu: &Rat) -> Result<()> {
    if nu.is_negative() || nu > &Rat::one() {
        return Err(Error::BadInput(format!("valuation {nu} outside [0, 1]")));
    }
    Ok(())
}

/// Region and stratum of one prime's data.
pub fn region_classify(q: &ValPoint, p: u64, prime: usize) -> Result<Classification> {
    let pd = q
        .primes
        .get(prime)
        .ok_or_else(|| Error::MissingData("no such prime".into()))?;
    let pr = rat_int(p as i64);
    match pd {
        PrimeData::One { nu } => {
            validate_unit_interval(nu)?;
            let one = Rat::one();
            let sum = nu.clone() + pr * nu.clone();
            let region = if sum > one {
                Region::Canonical
            } else if sum < one {
                Region::AntiCanonical
            } else {
                Region::TooSingular
            };
            let stratum = if *nu == Rat::one() {
                "W(B,∅)".to_string()
            } else if nu.is_zero() {
                "W(∅,B)".to_string()
            } else {
                "W(B,B)".to_string()
            };
            Ok(Classification { region, stratum })
        }
        PrimeData::Two { nu, .. } => {
            if nu.len() != 2 {
                return Err(Error::MissingData(
                    "degree-2 prime needs two valuations".into(),
                ));
            }
            validate_unit_interval(&nu[0])?;
            validate_unit_interval(&nu[1])?;
            let one = Rat::one();
            let s0 = nu[0].clone() + pr.clone() * nu[1].clone();
            let s1 = nu[1].clone() + pr * nu[0].clone();
            let region = if s0 > one && s1 > one {
                Region::Canonical
            } else if s0 < one && s1 < one {
                Region::AntiCanonical
            } else {
                Region::TooSingular
            };
            let z0 = nu[0].is_zero();
            let z1 = nu[1].is_zero();
            let o0 = nu[0] == one;
            let o1 = nu[1] == one;
            let stratum = match (z0, o0, z1, o1) {
                (_, true, _, true) => "W(B,∅)".to_string(),
                (true, _, true, _) => "W(∅,B)".to_string(),
                (true, _, _, true) => "W(1,1)".to_string(),
                (_, true, true, _) => "W(2,2)".to_string(),
                (false, false, _, true) => "W(B,1)".to_string(),
                (_, true, false, false) => "W(B,2)".to_string(),
                (true, _, false, false) => "W(1,B)".to_string(),
                (false, false, true, _) => "W(2,B)".to_string(),
                _ => "W(B,B)".to_string(),
            };
            Ok(Classification { region, stratum })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    CanonicalBranch,
    AntiBranch,
    SBranch,
    CircBranch,
    Generic,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ImageEntry {
    pub point: ValPoint,
    pub mult: u64,
    pub branch: Branch,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ImageMultiset {
    pub entries: Vec<ImageEntry>,
}

impl ImageMultiset {
    pub fn total(&self) -> u64 {
        self.entries.iter().map(|e| e.mult).sum()
    }
}

fn set_prime(q: &ValPoint, prime: usize, pd: PrimeData) -> ValPoint {
    let mut out = q.clone();
    out.primes[prime] = pd;
    out
}

fn plain_two(nu1: Rat, nu2: Rat) -> PrimeData {
    PrimeData::Two {
        nu: vec![nu1, nu2],
        w: None,
        flag: None,
        coords: None,
    }
}

/// Extract (w_{i+1}, coords) at a vertex stratum with ss data, from either
/// explicit heights or deformation coordinates.
fn ss_height(pd: &PrimeData, vertex: usize) -> Result<(Rat, Option<DefCoords>)> {
    if let PrimeData::Two { w, coords, .. } = pd {
        if let Some(c) = coords {
            if c.m < Rat::one() || c.n.is_negative() {
                return Err(Error::BadInput(
                    "deformation coordinates need m >= 1, n >= 0".into(),
                ));
            }
            let w_next = if c.n > Rat::one() {
                Rat::one()
            } else {
                c.n.clone()
            };
            return Ok((w_next, Some(c.clone())));
        }
        if let Some(ws) = w {
            let idx = (vertex + 1) % 2;
            let wn = ws
                .get(idx)
                .ok_or_else(|| Error::MissingData("two heights required".into()))?
                .clone();
            if wn.is_negative() || wn > Rat::one() {
                return Err(Error::BadInput("height outside [0, 1]".into()));
            }
            return Ok((wn, None));
        }
    }
    Err(Error::MissingData(
        "superspecial vertex needs the next partial Hodge height or deformation coordinates".into(),
    ))
}

/// The image multiset of the correspondence at one prime.
pub fn up_image(q: &ValPoint, p: u64, prime: usize) -> Result<ImageMultiset> {
    let cls = region_classify(q, p, prime)?;
    let pd = &q.primes[prime];
    let pr = rat_int(p as i64);
    let one = Rat::one();
    match pd {
        PrimeData::One { nu } => {
            let total = p;
            match cls.region {
                Region::Canonical => {
                    let img = rat(p as i64 - 1, p as i64) + nu.clone() / pr;
                    Ok(ImageMultiset {
                        entries: vec![ImageEntry {
                            point: set_prime(q, prime, PrimeData::One { nu: img }),
                            mult: total,
                            branch: Branch::CanonicalBranch,
                        }],
                    })
                }
                Region::TooSingular => {
                    // nu = 1/(p+1) exactly
                    let img = rat(p as i64, p as i64 + 1);
                    Ok(ImageMultiset {
                        entries: vec![ImageEntry {
                            point: set_prime(q, prime, PrimeData::One { nu: img }),
                            mult: total,
                            branch: Branch::Generic,
                        }],
                    })
                }
                Region::AntiCanonical => Ok(ImageMultiset {
                    entries: vec![
                        ImageEntry {
                            point: set_prime(
                                q,
                                prime,
                                PrimeData::One {
                                    nu: pr * nu.clone(),
                                },
                            ),
                            mult: 1,
                            branch: Branch::AntiBranch,
                        },
                        ImageEntry {
                            point: set_prime(
                                q,
                                prime,
                                PrimeData::One {
                                    nu: one - nu.clone(),
                                },
                            ),
                            mult: p - 1,
                            branch: Branch::CanonicalBranch,
                        },
                    ],
                }),
            }
        }
        PrimeData::Two { nu, flag, .. } => {
            let p2 = p * p;
            let (n0, n1) = (nu[0].clone(), nu[1].clone());
            match cls.region {
                Region::Canonical => {
                    // nu'_beta = (p-1)/p + nu_{sigma beta}/p ; sigma swaps the two indices
                    let shift = rat(p as i64 - 1, p as i64);
                    let img0 = shift.clone() + n1.clone() / pr.clone();
                    let img1 = shift + n0.clone() / pr.clone();
                    Ok(ImageMultiset {
                        entries: vec![ImageEntry {
                            point: set_prime(q, prime, plain_two(img0, img1)),
                            mult: p2,
                            branch: Branch::CanonicalBranch,
                        }],
                    })
                }
                Region::AntiCanonical => {
                    // distinguished: nu'_beta = p * nu_{sigma^{-1} beta}
                    let a0 = pr.clone() * n1.clone();
                    let a1 = pr.clone() * n0.clone();
                    let c0 = one.clone() - n0.clone();
                    let c1 = one.clone() - n1.clone();
                    Ok(ImageMultiset {
                        entries: vec![
                            ImageEntry {
                                point: set_prime(q, prime, plain_two(a0, a1)),
                                mult: 1,
                                branch: Branch::AntiBranch,
                            },
                            ImageEntry {
                                point: set_prime(q, prime, plain_two(c0, c1)),
                                mult: p2 - 1,
                                branch: Branch::CanonicalBranch,
                            },
                        ],
                    })
                }
                Region::TooSingular => {
                    match cls.stratum.as_str() {
                        "W(1,1)" | "W(2,2)" => {
                            // vertex: nu_i = 0, nu_{i+1} = 1
                            let i = if cls.stratum == "W(1,1)" { 0usize } else { 1 };
                            match flag {
                                Some(Locus::Supergeneral) => {
                                    let mut img = vec![Rat::zero(); 2];
                                    img[i] = one.clone();
                                    img[(i + 1) % 2] = one.clone() - rat(1, p as i64);
                                    Ok(ImageMultiset {
                                        entries: vec![ImageEntry {
                                            point: set_prime(
                                                q,
                                                prime,
                                                plain_two(img[0].clone(), img[1].clone()),
                                            ),
                                            mult: p2,
                                            branch: Branch::Generic,
                                        }],
                                    })
                                }
                                Some(Locus::Superspecial) => {
                                    let (wn, coords) = ss_height(pd, i)?;
                                    if wn.is_zero() || wn > one {
                                        return Err(Error::BadInput(
                                            "superspecial vertex needs 0 < w <= 1".into(),
                                        ));
                                    }
                                    ss_images(q, p, prime, i, &wn, coords.as_ref())
                                }
                                None => Err(Error::UndeterminedDynamics(
                                    "vertex stratum without a supergeneral/superspecial flag"
                                        .into(),
                                )),
                            }
                        }
                        "W(1,B)" | "W(2,B)" => {
                            let i = if cls.stratum == "W(1,B)" { 0usize } else { 1 };
                            let t = nu[(i + 1) % 2].clone();
                            let hi = rat(p as i64 + 1, (p2 + 1) as i64);
                            if t >= hi {
                                // p^2 copies of (1, 1 - 1/p - (1 - t)/p^2)
                                let img_next = one.clone()
                                    - rat(1, p as i64)
                                    - (one.clone() - t.clone()) / rat_int(p2 as i64);
                                let mut img = vec![Rat::zero(); 2];
                                img[i] = one.clone();
                                img[(i + 1) % 2] = img_next;
                                Ok(ImageMultiset {
                                    entries: vec![ImageEntry {
                                        point: set_prime(
                                            q,
                                            prime,
                                            plain_two(img[0].clone(), img[1].clone()),
                                        ),
                                        mult: p2,
                                        branch: Branch::Generic,
                                    }],
                                })
                            } else {
                                // t in [1/p, (p+1)/(p^2+1)): one distinguished image
                                let mut dist = vec![Rat::zero(); 2];
                                dist[i] = one.clone();
                                dist[(i + 1) % 2] =
                                    rat_int(p2 as i64) * (t.clone() - rat(1, p as i64));
                                let mut gen = vec![Rat::zero(); 2];
                                gen[i] = one.clone();
                                gen[(i + 1) % 2] = one.clone() - t.clone();
                                Ok(ImageMultiset {
                                    entries: vec![
                                        ImageEntry {
                                            point: set_prime(
                                                q,
                                                prime,
                                                plain_two(dist[0].clone(), dist[1].clone()),
                                            ),
                                            mult: 1,
                                            branch: Branch::SBranch,
                                        },
                                        ImageEntry {
                                            point: set_prime(
                                                q,
                                                prime,
                                                plain_two(gen[0].clone(), gen[1].clone()),
                                            ),
                                            mult: p2 - 1,
                                            branch: Branch::Generic,
                                        },
                                    ],
                                })
                            }
                        }
                        _ => Err(Error::UndeterminedDynamics(format!(
                            "no pointwise image law on the interior stratum {} ",
                            cls.stratum
                        ))),
                    }
                }
            }
        }
    }
}

/// Images from a superspecial vertex with height w at the moving index.
fn ss_images(
    q: &ValPoint,
    p: u64,
    prime: usize,
    i: usize,
    w: &Rat,
    coords: Option<&DefCoords>,
) -> Result<ImageMultiset> {
    let one = Rat::one();
    let pr = rat_int(p as i64);
    let p2 = p * p;
    let cut = rat(p as i64, p as i64 + 1);
    if *w <= cut {
        // p^2 copies of (1 - w/p, 1 - 1/p + w/p^2)
        let mut img = vec![Rat::zero(); 2];
        img[i] = one.clone() - w.clone() / pr.clone();
        img[(i + 1) % 2] = one.clone() - rat(1, p as i64) + w.clone() / rat_int(p2 as i64);
        Ok(ImageMultiset {
            entries: vec![ImageEntry {
                point: set_prime(q, prime, plain_two(img[0].clone(), img[1].clone())),
                mult: p2,
                branch: Branch::CircBranch,
            }],
        })
    } else {
        // distinguished s-image (p(1-w), w); the rest sit at (p/(p+1), p/(p+1))
        let mut dist = vec![Rat::zero(); 2];
        dist[i] = pr.clone() * (one.clone() - w.clone());
        dist[(i + 1) % 2] = w.clone();
        let mut dist_pd = plain_two(dist[0].clone(), dist[1].clone());
        if *w == one {
            // the s-image stays at the vertex; propagate tower data
            if let Some(c) = coords {
                let nm = c.m.clone() + Rat::one();
                let nn = c.n.clone() - Rat::one();
                let flag = if nn.is_positive() {
                    Locus::Superspecial
                } else {
                    Locus::Supergeneral
                };
                let w_next = if nn > Rat::one() {
                    Rat::one()
                } else {
                    nn.clone().max(Rat::zero())
                };
                let mut wv = vec![Rat::one(); 2];
                wv[(i + 1) % 2] = w_next;
                dist_pd = PrimeData::Two {
                    nu: dist.clone(),
                    w: Some(wv),
                    flag: Some(flag),
                    coords: Some(DefCoords { m: nm, n: nn }),
                };
            }
            // without coordinates the vertex image keeps no flag: its own
            // dynamics stay undetermined
        }
        let circ = rat(p as i64, p as i64 + 1);
        Ok(ImageMultiset {
            entries: vec![
                ImageEntry {
                    point: set_prime(q, prime, dist_pd),
                    mult: 1,
                    branch: Branch::SBranch,
                },
                ImageEntry {
                    point: set_prime(q, prime, plain_two(circ.clone(), circ)),
                    mult: p2 - 1,
                    branch: Branch::CircBranch,
                },
            ],
        })
    }
}

/// Partial Hodge heights where the valuations determine them.
pub fn derived_hodge(q: &ValPoint, p: u64, prime: usize) -> Result<Vec<Rat>> {
    let cls = region_classify(q, p, prime)?;
    let pd = &q.primes[prime];
    let one = Rat::one();
    let cap = |x: Rat| if x > one { Rat::one() } else { x };
    match (cls.region, pd) {
        (Region::Canonical, PrimeData::One { nu }) => Ok(vec![cap(one.clone() - nu.clone())]),
        (Region::AntiCanonical, PrimeData::One { nu }) => {
            Ok(vec![cap(rat_int(p as i64) * nu.clone())])
        }
        (Region::Canonical, PrimeData::Two { nu, .. }) => Ok(vec![
            cap(one.clone() - nu[0].clone()),
            cap(one.clone() - nu[1].clone()),
        ]),
        (Region::AntiCanonical, PrimeData::Two { nu, .. }) => Ok(vec![
            cap(rat_int(p as i64) * nu[1].clone()),
            cap(rat_int(p as i64) * nu[0].clone()),
        ]),
        _ => Err(Error::TooSingular),
    }
}

/// Weighted sums sum_j p^j nu_{sigma^{-j} beta} at one prime, in index order.
pub fn weighted_sums(q: &ValPoint, p: u64, prime: usize) -> Result<Vec<Rat>> {
    match &q.primes[prime] {
        PrimeData::One { nu } => Ok(vec![nu.clone() + rat_int(p as i64) * nu.clone()]),
        PrimeData::Two { nu, .. } => Ok(vec![
            nu[0].clone() + rat_int(p as i64) * nu[1].clone(),
            nu[1].clone() + rat_int(p as i64) * nu[0].clone(),
        ]),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrbitNode {
    pub point: ValPoint,
    pub mult: u64,
    pub branch: Option<Branch>,
    /// Weighted valuation sums at the tracked prime.
    pub sums: Vec<String>,
    /// Sums are entrywise >= the parent's.
    pub monotone: bool,
    /// Tower membership bound: the largest n with the point in V_{i,n}
    /// (None when the point carries no deformation coordinates).
    pub tower_level: Option<String>,
    pub status: NodeStatus,
    pub children: Vec<OrbitNode>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeStatus {
    Expanded,
    Leaf,
    Undetermined,
}

/// Largest integer n >= 1 with n-hat >= n, reported as the tower level.
fn tower_level(pd: &PrimeData) -> Option<Rat> {
    if let PrimeData::Two {
        coords: Some(c), ..
    } = pd
    {
        if c.n >= Rat::one() {
            return Some(crate::rat::floor(&c.n).into());
        }
    }
    None
}

/// Breadth-limited orbit tree at one prime with per-node monotonicity flags.
pub fn orbit(q: &ValPoint, p: u64, prime: usize, depth: usize) -> Result<OrbitNode> {
    fn expand(
        q: &ValPoint,
        p: u64,
        prime: usize,
        depth: usize,
        mult: u64,
        branch: Option<Branch>,
        parent_sums: Option<&Vec<Rat>>,
    ) -> Result<OrbitNode> {
        let sums = weighted_sums(q, p, prime)?;
        let monotone = parent_sums.is_none_or(|ps| ps.iter().zip(&sums).all(|(a, b)| b >= a));
        let tl = tower_level(&q.primes[prime]).map(|r| crate::rat::format_rat(&r));
        let mut node = OrbitNode {
            point: q.clone(),
            mult,
            branch,
            sums: sums.iter().map(crate::rat::format_rat).collect(),
            monotone,
            tower_level: tl,
            status: NodeStatus::Leaf,
            children: Vec::new(),
        };
        if depth == 0 {
            return Ok(node);
        }
        match up_image(q, p, prime) {
            Ok(images) => {
                node.status = NodeStatus::Expanded;
                let mut entries = images.entries;
                entries.sort_by(|a, b| {
                    a.branch.cmp(&b.branch).then_with(|| {
                        format!("{:?}", a.point.primes[prime])
                            .cmp(&format!("{:?}", b.point.primes[prime]))
                    })
                });
                for entry in entries {
                    node.children.push(expand(
                        &entry.point,
                        p,
                        prime,
                        depth - 1,
                        entry.mult,
                        Some(entry.branch),
                        Some(&sums),
                    )?);
                }
            }
            Err(Error::UndeterminedDynamics(_)) | Err(Error::MissingData(_)) => {
                node.status = NodeStatus::Undetermined;
            }
            Err(e) => return Err(e),
        }
        Ok(node)
    }
    expand(q, p, prime, depth, 1, None, None)
}

/// Every path in the tree has entrywise nondecreasing weighted sums.
pub fn orbit_monotone(node: &OrbitNode) -> bool {
    node.monotone && node.children.iter().all(orbit_monotone)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_images(ms: &ImageMultiset, expected: &[((i64, i64), (i64, i64), u64)]) {
        assert_eq!(ms.entries.len(), expected.len());
        for (entry, exp) in ms.entries.iter().zip(expected) {
            if let PrimeData::Two { nu, .. } = &entry.point.primes[0] {
                assert_eq!(nu[0], rat(exp.0 .0, exp.0 .1));
                assert_eq!(nu[1], rat(exp.1 .0, exp.1 .1));
                assert_eq!(entry.mult, exp.2);
            } else {
                panic!("wrong arity");
            }
        }
    }

    #[test]
    fn classify_examples() {
        let c = region_classify(&ValPoint::deg2(rat_int(1), rat_int(1)), 3, 0).unwrap();
        assert_eq!(c.region, Region::Canonical);
        assert_eq!(c.stratum, "W(B,∅)");
        let c = region_classify(&ValPoint::deg2(rat(1, 2), rat(1, 2)), 3, 0).unwrap();
        assert_eq!(c.region, Region::Canonical);
        assert_eq!(c.stratum, "W(B,B)");
        let c = region_classify(&ValPoint::deg2(rat_int(0), rat_int(1)), 3, 0).unwrap();
        assert_eq!(c.region, Region::TooSingular);
        assert_eq!(c.stratum, "W(1,1)");
        let c = region_classify(&ValPoint::deg2(rat_int(0), rat(1, 2)), 3, 0).unwrap();
        assert_eq!(c.stratum, "W(1,B)");
        let c = region_classify(&ValPoint::deg2(rat(1, 10), rat(1, 10)), 3, 0).unwrap();
        assert_eq!(c.region, Region::AntiCanonical);
    }

    #[test]
    fn canonical_step() {
        // p = 3, (1/2, 3/4): nine copies of (11/12, 5/6)
        let ms = up_image(&ValPoint::deg2(rat(1, 2), rat(3, 4)), 3, 0).unwrap();
        assert_images(&ms, &[((11, 12), (5, 6), 9)]);
        assert_eq!(ms.total(), 9);
    }

    #[test]
    fn supergeneral_step() {
        let q = ValPoint::deg2_flagged(rat_int(0), rat_int(1), Locus::Supergeneral, None);
        let ms = up_image(&q, 3, 0).unwrap();
        assert_images(&ms, &[((1, 1), (2, 3), 9)]);
    }

    #[test]
    fn superspecial_step_w1() {
        let q = ValPoint::deg2_flagged(
            rat_int(0),
            rat_int(1),
            Locus::Superspecial,
            Some(rat_int(1)),
        );
        let ms = up_image(&q, 3, 0).unwrap();
        // s-branch stays at the vertex; eight circle images at (3/4, 3/4)
        assert_eq!(ms.entries.len(), 2);
        assert_images(&ms, &[((0, 1), (1, 1), 1), ((3, 4), (3, 4), 8)]);
        assert_eq!(ms.entries[0].branch, Branch::SBranch);
        assert_eq!(ms.entries[1].branch, Branch::CircBranch);
    }

    #[test]
    fn degree_one_steps() {
        // ordinary fixed point
        let ms = up_image(&ValPoint::deg1(rat_int(1)), 3, 0).unwrap();
        assert_eq!(ms.total(), 3);
        if let PrimeData::One { nu } = &ms.entries[0].point.primes[0] {
            assert_eq!(*nu, rat_int(1));
        }
        // too-singular pivot
        let ms = up_image(&ValPoint::deg1(rat(1, 4)), 3, 0).unwrap();
        if let PrimeData::One { nu } = &ms.entries[0].point.primes[0] {
            assert_eq!(*nu, rat(3, 4));
        }
        // anti-canonical split: 1 x p*nu + (p-1) x (1-nu)
        let ms = up_image(&ValPoint::deg1(rat(1, 10)), 3, 0).unwrap();
        assert_eq!(ms.entries.len(), 2);
        assert_eq!(ms.total(), 3);
    }

    #[test]
    fn edge_cases_dispatch() {
        // W(1,B) upper range, p = 3, nu2 = 3/4 >= 4/10:
        // nu2' = 1 - 1/3 - (1/4)/9 = 23/36
        let ms = up_image(&ValPoint::deg2(rat_int(0), rat(3, 4)), 3, 0).unwrap();
        assert_images(&ms, &[((1, 1), (23, 36), 9)]);
        // W(1,B) lower range, nu2 = 2/5 in [1/3, 2/5): no -- 2/5 is the cutoff
        let ms = up_image(&ValPoint::deg2(rat_int(0), rat(3, 8)), 3, 0).unwrap();
        assert_eq!(ms.entries.len(), 2);
        assert_eq!(ms.entries[0].branch, Branch::SBranch);
        // distinguished: nu2' = 9*(3/8 - 1/3) = 3/8
        assert_images(&ms, &[((1, 1), (3, 8), 1), ((1, 1), (5, 8), 8)]);
        // too-singular interior point (one weighted sum on each side of 1)
        assert!(matches!(
            up_image(&ValPoint::deg2(rat(1, 2), rat(1, 8)), 3, 0),
            Err(Error::UndeterminedDynamics(_))
        ));
        // vertex without flag: undetermined
        assert!(matches!(
            up_image(&ValPoint::deg2(rat_int(0), rat_int(1)), 3, 0),
            Err(Error::UndeterminedDynamics(_))
        ));
    }

    #[test]
    fn derived_hodge_examples() {
        let w = derived_hodge(&ValPoint::deg2(rat(3, 4), rat(3, 4)), 3, 0).unwrap();
        assert_eq!(w, vec![rat(1, 4), rat(1, 4)]);
        let w = derived_hodge(&ValPoint::deg2(rat(1, 10), rat(1, 10)), 3, 0).unwrap();
        assert_eq!(w, vec![rat(3, 10), rat(3, 10)]);
        let w = derived_hodge(&ValPoint::deg2(rat_int(1), rat_int(1)), 3, 0).unwrap();
        assert_eq!(w, vec![rat_int(0), rat_int(0)]);
        assert!(matches!(
            derived_hodge(&ValPoint::deg2(rat_int(0), rat(1, 2)), 3, 0),
            Err(Error::TooSingular)
        ));
    }

    #[test]
    fn orbit_constant_at_top_vertex() {
        let tree = orbit(&ValPoint::deg2(rat_int(1), rat_int(1)), 3, 0, 4).unwrap();
        fn all_ones(n: &OrbitNode) -> bool {
            let here = match &n.point.primes[0] {
                PrimeData::Two { nu, .. } => nu.iter().all(|x| *x == Rat::one()),
                _ => false,
            };
            here && n.children.iter().all(all_ones)
        }
        assert!(all_ones(&tree));
        assert!(orbit_monotone(&tree));
    }

    #[test]
    fn orbit_tower_shift() {
        // coordinates (1, 23/8): two s-steps staying at the vertex, exit at
        // the third with (p(1-w), w), w = 7/8
        let q = ValPoint::deg2(rat_int(0), rat_int(1)).with_coords(0, rat_int(1), rat(23, 8));
        let tree = orbit(&q, 3, 0, 3).unwrap();
        assert!(orbit_monotone(&tree));
        // walk the s-branch
        let s1 = tree
            .children
            .iter()
            .find(|c| c.branch == Some(Branch::SBranch))
            .expect("first s-image");
        if let PrimeData::Two { nu, coords, .. } = &s1.point.primes[0] {
            assert_eq!(nu, &vec![rat_int(0), rat_int(1)]);
            let c = coords.as_ref().unwrap();
            assert_eq!((c.m.clone(), c.n.clone()), (rat_int(2), rat(15, 8)));
        } else {
            panic!();
        }
        let s2 = s1
            .children
            .iter()
            .find(|c| c.branch == Some(Branch::SBranch))
            .unwrap();
        if let PrimeData::Two { coords, .. } = &s2.point.primes[0] {
            let c = coords.as_ref().unwrap();
            assert_eq!((c.m.clone(), c.n.clone()), (rat_int(3), rat(7, 8)));
        } else {
            panic!();
        }
        // third step exits with the (p(1-w), w) law
        let s3 = s2
            .children
            .iter()
            .find(|c| c.branch == Some(Branch::SBranch))
            .unwrap();
        if let PrimeData::Two { nu, .. } = &s3.point.primes[0] {
            assert_eq!(nu, &vec![rat(3, 8), rat(7, 8)]);
        } else {
            panic!();
        }
    }
}
