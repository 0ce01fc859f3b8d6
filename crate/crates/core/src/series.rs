//! Truncated power series over a finite field: elements of k[[u]] known
//! modulo u^prec. Valuations of the zero truncation are reported as a
//! symbolic `AtLeast(prec)`, never as a sentinel integer.

use crate::error::{Error, Result};
use crate::field::{Field, Fq};
use rand::Rng;

/// Hard cap on precision growth under the semilinear endomorphism.
pub const MAX_PREC: usize = 1 << 14;

/// u-adic valuation of a truncated series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UVal {
    Finite(usize),
    /// The truncation is zero; the true valuation is >= prec.
    AtLeast(usize),
}

impl UVal {
    pub fn finite(self) -> Option<usize> {
        match self {
            UVal::Finite(v) => Some(v),
            UVal::AtLeast(_) => None,
        }
    }

    pub fn require_finite(self, what: &str) -> Result<usize> {
        self.finite()
            .ok_or_else(|| Error::PrecisionExhausted(format!("{what}: valuation >= precision")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    pub prec: usize,
    /// Coefficient of u^i at index i; length == prec.
    pub coeffs: Vec<Fq>,
}

impl Series {
    pub fn zero(f: &Field, prec: usize) -> Self {
        Series {
            prec,
            coeffs: vec![f.zero(); prec],
        }
    }

    pub fn one(f: &Field, prec: usize) -> Self {
        Self::monomial(f, &f.one(), 0, prec)
    }

    /// c * u^k.
    pub fn monomial(f: &Field, c: &Fq, k: usize, prec: usize) -> Self {
        let mut s = Self::zero(f, prec);
        if k < prec {
            s.coeffs[k] = c.clone();
        }
        s
    }

    pub fn from_coeffs(f: &Field, coeffs: Vec<Fq>, prec: usize) -> Self {
        let mut c = coeffs;
        c.resize(prec, f.zero());
        Series { prec, coeffs: c }
    }

    pub fn is_zero(&self, f: &Field) -> bool {
        self.coeffs.iter().all(|c| f.is_zero(c))
    }

    /// Index of the first nonzero coefficient, or AtLeast(prec).
    pub fn val(&self, f: &Field) -> UVal {
        match self.coeffs.iter().position(|c| !f.is_zero(c)) {
            Some(i) => UVal::Finite(i),
            None => UVal::AtLeast(self.prec),
        }
    }

    pub fn truncate(&self, f: &Field, prec: usize) -> Series {
        let mut c = self.coeffs.clone();
        c.truncate(prec);
        c.resize(prec, f.zero());
        Series { prec, coeffs: c }
    }

    pub fn add(&self, f: &Field, other: &Series) -> Series {
        let prec = self.prec.min(other.prec);
        let coeffs = (0..prec)
            .map(|i| f.add(&self.coeffs[i], &other.coeffs[i]))
            .collect();
        Series { prec, coeffs }
    }

    pub fn sub(&self, f: &Field, other: &Series) -> Series {
        let prec = self.prec.min(other.prec);
        let coeffs = (0..prec)
            .map(|i| f.sub(&self.coeffs[i], &other.coeffs[i]))
            .collect();
        Series { prec, coeffs }
    }

    pub fn neg(&self, f: &Field) -> Series {
        Series {
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect(),
        }
    }

    /// Product. Output precision is min(val(a)+prec(b), val(b)+prec(a)),
    /// capped at MAX_PREC: the unknown tails enter multiplied by the known
    /// leading parts.
    pub fn mul(&self, f: &Field, other: &Series) -> Series {
        let va = match self.val(f) {
            UVal::Finite(v) => v,
            UVal::AtLeast(n) => n,
        };
        let vb = match other.val(f) {
            UVal::Finite(v) => v,
            UVal::AtLeast(n) => n,
        };
        let prec = (va + other.prec).min(vb + self.prec).min(MAX_PREC);
        let mut coeffs = vec![f.zero(); prec];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= prec {
                    break;
                }
                if !f.is_zero(b) {
                    coeffs[i + j] = f.add(&coeffs[i + j], &f.mul(a, b));
                }
            }
        }
        Series { prec, coeffs }
    }

    pub fn scalar_mul(&self, f: &Field, c: &Fq) -> Series {
        Series {
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|a| f.mul(a, c)).collect(),
        }
    }

    /// Multiply by u^k. Knowledge mod u^prec shifts to mod u^(prec+k).
    pub fn mul_upow(&self, f: &Field, k: usize) -> Series {
        let prec = (self.prec + k).min(MAX_PREC);
        let mut coeffs = vec![f.zero(); prec];
        for (i, c) in self.coeffs.iter().enumerate() {
            if i + k < prec {
                coeffs[i + k] = c.clone();
            }
        }
        Series { prec, coeffs }
    }

    /// The semilinear endomorphism: coefficients to the p-th power, u -> u^p.
    /// A series known mod u^N determines its image mod u^(pN) (capped).
    pub fn phi(&self, f: &Field) -> Series {
        let prec = (self.prec * f.p as usize).min(MAX_PREC);
        let mut coeffs = vec![f.zero(); prec];
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = i * f.p as usize;
            if k < prec {
                coeffs[k] = f.frob(c);
            }
        }
        Series { prec, coeffs }
    }

    /// Inverse of a unit (valuation 0), to the same precision.
    pub fn inv_unit(&self, f: &Field) -> Result<Series> {
        match self.val(f) {
            UVal::Finite(0) => {}
            _ => return Err(Error::NotAUnit),
        }
        let a0inv = f.inv(&self.coeffs[0])?;
        let mut out = vec![f.zero(); self.prec];
        out[0] = a0inv.clone();
        for n in 1..self.prec {
            // c_n = -a0^{-1} * sum_{k=1}^{n} a_k c_{n-k}
            let mut acc = f.zero();
            for k in 1..=n {
                if !f.is_zero(&self.coeffs[k]) {
                    acc = f.add(&acc, &f.mul(&self.coeffs[k], &out[n - k]));
                }
            }
            out[n] = f.neg(&f.mul(&a0inv, &acc));
        }
        Ok(Series {
            prec: self.prec,
            coeffs: out,
        })
    }

    /// Write a = u^m * w with w a unit and return (m, w^{-1}).
    pub fn val_unit_inv(&self, f: &Field) -> Result<(usize, Series)> {
        let m = self.val(f).require_finite("unit-part extraction")?;
        let mut shifted = self.coeffs[m..].to_vec();
        shifted.resize(self.prec - m, f.zero());
        let w = Series {
            prec: self.prec - m,
            coeffs: shifted,
        };
        Ok((m, w.inv_unit(f)?))
    }

    /// Equality of the parts both sides determine, up to u^bound.
    pub fn eq_mod(&self, _f: &Field, other: &Series, bound: usize) -> bool {
        let b = bound.min(self.prec).min(other.prec);
        (0..b).all(|i| self.coeffs[i] == other.coeffs[i]) && b == bound
    }

    pub fn rand<R: Rng>(f: &Field, prec: usize, rng: &mut R) -> Series {
        Series {
            prec,
            coeffs: (0..prec).map(|_| f.rand(rng)).collect(),
        }
    }

    pub fn rand_unit<R: Rng>(f: &Field, prec: usize, rng: &mut R) -> Series {
        let mut s = Self::rand(f, prec, rng);
        s.coeffs[0] = f.rand_nonzero(rng);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f9() -> Field {
        Field::new(3, 2).unwrap()
    }

    /// Oracle: plain coefficientwise convolution at fixed precision.
    fn naive_mul(f: &Field, a: &Series, b: &Series, prec: usize) -> Series {
        let mut coeffs = vec![f.zero(); prec];
        for i in 0..a.coeffs.len().min(prec) {
            for j in 0..b.coeffs.len() {
                if i + j >= prec {
                    break;
                }
                coeffs[i + j] = f.add(&coeffs[i + j], &f.mul(&a.coeffs[i], &b.coeffs[j]));
            }
        }
        Series { prec, coeffs }
    }

    #[test]
    fn val_examples() {
        let f = f9();
        // u^3 + u^5 at precision 10
        let mut s = Series::zero(&f, 10);
        s.coeffs[3] = f.one();
        s.coeffs[5] = f.one();
        assert_eq!(s.val(&f), UVal::Finite(3));
        assert_eq!(Series::zero(&f, 10).val(&f), UVal::AtLeast(10));
    }

    #[test]
    fn val_additive_on_products() {
        let f = f9();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..300 {
            let a = Series::rand(&f, 12, &mut rng);
            let b = Series::rand(&f, 12, &mut rng);
            let prod = a.mul(&f, &b);
            let oracle = naive_mul(&f, &a, &b, prod.prec);
            assert!(prod.eq_mod(&f, &oracle, prod.prec));
            if let (UVal::Finite(va), UVal::Finite(vb)) = (a.val(&f), b.val(&f)) {
                if va + vb < prod.prec {
                    assert_eq!(prod.val(&f), UVal::Finite(va + vb));
                }
            }
        }
    }

    #[test]
    fn phi_monomial_and_hom() {
        let f = f9();
        // a*u with a = the generator of F_9: phi gives a^3 * u^3
        let a = f.gen();
        let s = Series::monomial(&f, &a, 1, 10);
        let t = s.phi(&f);
        assert_eq!(t.prec, 30);
        assert_eq!(t.val(&f), UVal::Finite(3));
        assert_eq!(t.coeffs[3], f.frob(&a));
        // phi(u^e) = u^{ep}
        let e = 4;
        let ue = Series::monomial(&f, &f.one(), e, 20);
        assert_eq!(ue.phi(&f).val(&f), UVal::Finite(e * 3));
        // ring homomorphism on random pairs
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let a = Series::rand(&f, 8, &mut rng);
            let b = Series::rand(&f, 8, &mut rng);
            let lhs = a.mul(&f, &b).phi(&f);
            let rhs = a.phi(&f).mul(&f, &b.phi(&f));
            let bound = lhs.prec.min(rhs.prec);
            assert!(lhs.eq_mod(&f, &rhs, bound));
            let lhs2 = a.add(&f, &b).phi(&f);
            let rhs2 = a.phi(&f).add(&f, &b.phi(&f));
            assert!(lhs2.eq_mod(&f, &rhs2, lhs2.prec.min(rhs2.prec)));
        }
    }

    #[test]
    fn phi_scales_valuation_by_p() {
        let f = f9();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let s = Series::rand(&f, 9, &mut rng);
            if let UVal::Finite(v) = s.val(&f) {
                assert_eq!(s.phi(&f).val(&f), UVal::Finite(3 * v));
            }
        }
    }

    #[test]
    fn inv_unit_geometric() {
        let f = f9();
        // 1 + u: inverse 1 - u + u^2 - ...
        let mut s = Series::one(&f, 8);
        s.coeffs[1] = f.one();
        let inv = s.inv_unit(&f).unwrap();
        for i in 0..8 {
            let expect = if i % 2 == 0 { f.one() } else { f.neg(&f.one()) };
            assert_eq!(inv.coeffs[i], expect);
        }
        assert!(s.mul(&f, &inv).eq_mod(&f, &Series::one(&f, 8), 8));
    }

    #[test]
    fn inv_unit_random_and_errors() {
        let f = f9();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let s = Series::rand_unit(&f, 10, &mut rng);
            let inv = s.inv_unit(&f).unwrap();
            assert!(s.mul(&f, &inv).eq_mod(&f, &Series::one(&f, 10), 10));
        }
        let u = Series::monomial(&f, &f.one(), 1, 10);
        assert!(matches!(u.inv_unit(&f), Err(Error::NotAUnit)));
    }

    #[test]
    fn unit_part_extraction() {
        let f = f9();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let w = Series::rand_unit(&f, 10, &mut rng);
        let a = w.mul_upow(&f, 4);
        let (m, winv) = a.val_unit_inv(&f).unwrap();
        assert_eq!(m, 4);
        assert!(w.mul(&f, &winv).eq_mod(&f, &Series::one(&f, 10), 10));
    }
}
