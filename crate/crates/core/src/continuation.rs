//! Mechanical verification of the exponent inequalities behind the
//! analytic-continuation argument and the slope criterion for classicality.
//! Norms are tracked as base-p exponents relative to the reference norm on
//! the canonical locus, which sits at exponent 0.

use crate::error::{Error, Result};
use crate::rat::{pow_rat, rat, rat_int, AffineExp, Rat};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "f")]
pub enum PrimeSlope {
    #[serde(rename = "1")]
    One {
        k: i64,
        #[serde(with = "crate::rat::rat_string")]
        v: Rat,
    },
    #[serde(rename = "2")]
    Two {
        k: Vec<i64>,
        #[serde(with = "crate::rat::rat_string")]
        v: Rat,
        #[serde(
            default,
            with = "crate::rat::rat_opt_string",
            skip_serializing_if = "Option::is_none"
        )]
        eps: Option<Rat>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SlopeData {
    pub p: u64,
    pub primes: Vec<PrimeSlope>,
}

impl SlopeData {
    pub fn validate(&self) -> Result<()> {
        if self.p < 2 {
            return Err(Error::BadInput("p must be a prime >= 2".into()));
        }
        for (idx, pr) in self.primes.iter().enumerate() {
            if let PrimeSlope::Two { k, eps, .. } = pr {
                if k.len() != 2 {
                    return Err(Error::BadInput(format!(
                        "degree-2 prime {idx} needs two weight components"
                    )));
                }
                if let Some(e) = eps {
                    let lo = rat(self.p as i64, self.p as i64 + 1);
                    if !(e > &lo && e < &Rat::one()) {
                        return Err(Error::BadInput(format!(
                            "eps = {e} outside (p/(p+1), 1) at prime {idx}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SlopeFailure {
    pub prime: usize,
    pub beta: usize,
    pub weight: i64,
    #[serde(with = "crate::rat::rat_string")]
    pub slope: Rat,
    #[serde(with = "crate::rat::rat_string")]
    pub bound: Rat,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassicalityVerdict {
    pub classical: bool,
    pub first_failure: Option<SlopeFailure>,
}

/// Strict slope test: at every prime, v < k_beta - f for every weight
/// component. Reports the first violated pair.
pub fn classicality_check(s: &SlopeData) -> Result<ClassicalityVerdict> {
    s.validate()?;
    for (idx, pr) in s.primes.iter().enumerate() {
        let (f, ks, v) = match pr {
            PrimeSlope::One { k, v } => (1i64, vec![*k], v.clone()),
            PrimeSlope::Two { k, v, .. } => (2, k.clone(), v.clone()),
        };
        for (b, kb) in ks.iter().enumerate() {
            let bound = rat_int(kb - f);
            if v >= bound {
                return Ok(ClassicalityVerdict {
                    classical: false,
                    first_failure: Some(SlopeFailure {
                        prime: idx,
                        beta: b,
                        weight: *kb,
                        slope: v,
                        bound,
                    }),
                });
            }
        }
    }
    Ok(ClassicalityVerdict {
        classical: true,
        first_failure: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Requirement {
    /// Strictly negative (decay toward zero).
    NegativeStrict,
    /// Bounded contribution: nonpositive.
    NonPositive,
    /// Recorded value with no sign constraint.
    None,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub name: String,
    pub prime: usize,
    #[serde(with = "crate::rat::rat_string")]
    pub value: Rat,
    pub requirement: Requirement,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundLedger {
    pub entries: Vec<LedgerEntry>,
}

impl BoundLedger {
    pub fn all_required_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn first_failure(&self) -> Option<&LedgerEntry> {
        self.entries.iter().find(|e| !e.pass)
    }
}

fn push(entries: &mut Vec<LedgerEntry>, prime: usize, name: String, value: Rat, req: Requirement) {
    let pass = match req {
        Requirement::NegativeStrict => value.is_negative(),
        Requirement::NonPositive => !value.is_positive(),
        Requirement::None => true,
    };
    entries.push(LedgerEntry {
        name,
        prime,
        value,
        requirement: req,
        pass,
    });
}

/// eps_1 for the degree-2 edge estimate: (p+1)/(p(p^2+1)).
fn eps1_deg2(p: i64) -> Rat {
    rat(p + 1, p * (p * p + 1))
}

/// The step sequence for the degree-2 edge walk: eps_n = (p+1)/(p^n(p^2+1)).
pub fn epsilon_deg2(p: u64, n: u64) -> Rat {
    rat(p as i64 + 1, 1) / (pow_rat(p, n as i64) * rat(p as i64 * p as i64 + 1, 1))
}

/// The step sequence for degree-1 primes: eps_n = 1/(p^{n-1}(p+1)).
pub fn epsilon_deg1(p: u64, n: u64) -> Rat {
    Rat::one() / (pow_rat(p, n as i64 - 1) * rat(p as i64 + 1, 1))
}

/// Closed-form partial sum sum_{r=1}^{n} eps_r for either sequence.
pub fn epsilon_partial_sum_deg2(p: u64, n: u64) -> Rat {
    // (p+1)/(p^2+1) * (1 - p^{-n}) / (p - 1)
    let p_ = p as i64;
    rat(p_ + 1, p_ * p_ + 1) * (Rat::one() - pow_rat(p, -(n as i64))) / rat(p_ - 1, 1)
}

pub fn epsilon_partial_sum_deg1(p: u64, n: u64) -> Rat {
    // p(1 - p^{-n}) / (p^2 - 1)
    let p_ = p as i64;
    rat(p_, p_ * p_ - 1) * (Rat::one() - pow_rat(p, -(n as i64)))
}

/// Default depth of the per-n sweep; the symbolic coefficient entries make
/// the sweep a redundancy, both are kept.
pub const N_MAX_DEFAULT: u64 = 64;

/// Evaluate every exponent family in the continuation argument for the given
/// slope data, as exact rationals, for symbolic n (coefficient entries) and
/// for n = 1..=n_max.
pub fn bound_ledger(s: &SlopeData, n_max: u64) -> Result<BoundLedger> {
    s.validate()?;
    let p = s.p as i64;
    let mut entries = Vec::new();
    for (idx, pr) in s.primes.iter().enumerate() {
        match pr {
            PrimeSlope::One { k, v } => {
                ledger_deg1(&mut entries, idx, p, *k, v, n_max);
            }
            PrimeSlope::Two { k, v, eps } => {
                let (k1, k2) = (k[0], k[1]);
                if k1 < k2 {
                    return Err(Error::NormalizationViolated(format!(
                        "prime {idx}: weights must satisfy k1 >= k2"
                    )));
                }
                let eps = eps.clone().ok_or_else(|| {
                    Error::MissingData(format!("prime {idx}: eps required for a degree-2 prime"))
                })?;
                ledger_deg2(&mut entries, idx, p, k2, v, &eps, n_max);
            }
        }
    }
    Ok(BoundLedger { entries })
}

fn ledger_deg2(
    entries: &mut Vec<LedgerEntry>,
    prime: usize,
    p: i64,
    k2: i64,
    v: &Rat,
    eps: &Rat,
    n_max: u64,
) {
    let k2r = rat_int(k2);
    // shared decay coefficient of the tower iterates: -(k2 - v - 2)
    let decay = -(k2r.clone() - v.clone() - rat_int(2));
    push(
        entries,
        prime,
        "tower-decay-coefficient".into(),
        decay.clone(),
        Requirement::NegativeStrict,
    );

    // g_n: -n(k2 - v - 2) + (1 - eps)(p - 1) k2   [difference family: must
    // tend to -infinity; the coefficient entry above carries the requirement]
    let g_const = (Rat::one() - eps.clone()) * rat_int(p - 1) * k2r.clone();
    let g_aff = AffineExp::new(decay.clone(), g_const);
    for n in 1..=n_max {
        push(
            entries,
            prime,
            format!("g[{n}]-exponent"),
            g_aff.eval(n as i64),
            Requirement::None,
        );
    }

    // h_n: -n(k2 - v - 2) + (p - 1) k2 / (p + 1)  [uniformly bounded family]
    let h_const = rat(p - 1, p + 1) * k2r.clone();
    let h_aff = AffineExp::new(decay.clone(), h_const);
    push(
        entries,
        prime,
        "h-boundedness-coefficient".into(),
        h_aff.n_coeff.clone(),
        Requirement::NonPositive,
    );
    for n in 1..=n_max {
        push(
            entries,
            prime,
            format!("h[{n}]-exponent"),
            h_aff.eval(n as i64),
            Requirement::None,
        );
    }

    // step 1: 2 + v - k2/p feeding max{1, p^(step1)}
    let step1 = rat_int(2) + v.clone() - k2r.clone() / rat_int(p);
    push(
        entries,
        prime,
        "step1-exponent".into(),
        step1.clone(),
        Requirement::None,
    );
    let step1_max = if step1.is_positive() {
        step1.clone()
    } else {
        Rat::zero()
    };
    push(
        entries,
        prime,
        "step1-bound-exponent".into(),
        step1_max.clone(),
        Requirement::None,
    );

    // step 2: 2 + v - eps_1 k2, and its composition with the step-1 bound
    let e1 = eps1_deg2(p);
    let step2 = rat_int(2) + v.clone() - e1 * k2r.clone();
    push(
        entries,
        prime,
        "step2-eps1-exponent".into(),
        step2.clone(),
        Requirement::None,
    );
    push(
        entries,
        prime,
        "step2-composed-exponent".into(),
        step2.clone() + step1_max,
        Requirement::None,
    );
    push(
        entries,
        prime,
        "step2-composed-alt-exponent".into(),
        step2 + step1,
        Requirement::None,
    );

    // final uniform bound: 2 + v
    push(
        entries,
        prime,
        "final-bound-exponent".into(),
        rat_int(2) + v.clone(),
        Requirement::None,
    );

    // step 3 decay: n(2 + v) - k2 (2n - p * sum_{r=1}^n eps_r), negative for
    // every n and with negative n-coefficient 2 + v - 2 k2
    push(
        entries,
        prime,
        "step3-decay-coefficient".into(),
        rat_int(2) + v.clone() - rat_int(2) * k2r.clone(),
        Requirement::NegativeStrict,
    );
    for n in 1..=n_max {
        let psum = rat_int(p) * epsilon_partial_sum_deg2(p as u64, n);
        let val = rat_int(n as i64) * (rat_int(2) + v.clone())
            - k2r.clone() * (rat_int(2 * n as i64) - psum);
        push(
            entries,
            prime,
            format!("step3[{n}]-exponent"),
            val,
            Requirement::NegativeStrict,
        );
    }
}

fn ledger_deg1(entries: &mut Vec<LedgerEntry>, prime: usize, p: i64, k: i64, v: &Rat, n_max: u64) {
    let kr = rat_int(k);
    // decay coefficient 1 + v - k: strictly negative exactly when v < k - 1
    let decay = rat_int(1) + v.clone() - kr.clone();
    push(
        entries,
        prime,
        "decay-coefficient".into(),
        decay.clone(),
        Requirement::NegativeStrict,
    );
    for n in 1..=n_max {
        let val =
            rat_int(n as i64) * decay.clone() + kr.clone() * epsilon_partial_sum_deg1(p as u64, n);
        push(
            entries,
            prime,
            format!("decay[{n}]-exponent"),
            val,
            Requirement::None,
        );
    }
    // uniform bound on the tail family: m(1+v-k) + k(1 + 1/(p^2-1)), recorded
    // at its m = 1 extreme, plus the final bound 1 + v
    let tail = decay + kr * (Rat::one() + rat(1, p * p - 1));
    push(
        entries,
        prime,
        "tail-bound-exponent".into(),
        tail,
        Requirement::None,
    );
    push(
        entries,
        prime,
        "final-bound-exponent".into(),
        rat_int(1) + v.clone(),
        Requirement::None,
    );
}

/// Gluing preconditions: the difference family must tend to zero (negative
/// n-coefficient) and both bound families must stay bounded above.
pub fn glue_precondition_check(
    diff: &AffineExp,
    f_bound: &AffineExp,
    fprime_bound: &AffineExp,
) -> bool {
    diff.tends_to_neg_infinity() && f_bound.bounded_above() && fprime_bound.bounded_above()
}
