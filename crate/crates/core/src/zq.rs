//! The unramified coefficient ring W(F_{p^g}) / p^M, presented as
//! Z[x]/(p^M, f(x)) for a monic lift f of the residue-field modulus, with the
//! unique Frobenius lift computed by Hensel refinement of x -> x^p.

use crate::error::{Error, Result};
use crate::field::Field;

/// An element is its coefficient vector of length `deg`, entries in [0, p^M).
pub type ZqEl = Vec<u64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Zq {
    pub p: u64,
    pub m: u32,
    pub deg: usize,
    /// p^M.
    pub q: u64,
    /// Monic modulus lift, length deg + 1, small nonnegative coefficients.
    pub modulus: Vec<u64>,
    /// Image of x under the Frobenius lift.
    frob_x: ZqEl,
    residue: Field,
}

impl Zq {
    pub fn new(p: u64, g: usize, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::BadInput("p-adic precision must be >= 1".into()));
        }
        let residue = Field::new(p, g)?;
        let q = p
            .checked_pow(m)
            .ok_or_else(|| Error::BadInput("p^M overflows".into()))?;
        let modulus = residue.modulus.clone();
        let mut zq = Zq {
            p,
            m,
            deg: g,
            q,
            modulus,
            frob_x: vec![0; g],
            residue,
        };
        zq.frob_x = zq.hensel_frob_generator()?;
        Ok(zq)
    }

    pub fn zero(&self) -> ZqEl {
        vec![0; self.deg]
    }

    pub fn one(&self) -> ZqEl {
        let mut e = self.zero();
        e[0] = 1 % self.q;
        e
    }

    pub fn from_int(&self, n: i64) -> ZqEl {
        let mut e = self.zero();
        e[0] = n.rem_euclid(self.q as i64) as u64;
        e
    }

    pub fn is_zero(&self, a: &ZqEl) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &ZqEl, b: &ZqEl) -> ZqEl {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % self.q).collect()
    }

    pub fn sub(&self, a: &ZqEl, b: &ZqEl) -> ZqEl {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| (x + self.q - y) % self.q)
            .collect()
    }

    pub fn neg(&self, a: &ZqEl) -> ZqEl {
        a.iter().map(|&x| (self.q - x) % self.q).collect()
    }

    pub fn mul(&self, a: &ZqEl, b: &ZqEl) -> ZqEl {
        let d = self.deg;
        let mut prod = vec![0u128; 2 * d];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    prod[i + j] = (prod[i + j] + x as u128 * y as u128) % self.q as u128;
                }
            }
        }
        for i in (d..2 * d).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..d {
                let mcoef = self.modulus[j] as u128;
                if mcoef != 0 {
                    let idx = i - d + j;
                    let sub = c * mcoef % self.q as u128;
                    prod[idx] = (prod[idx] + self.q as u128 - sub) % self.q as u128;
                }
            }
        }
        prod.truncate(d);
        prod.iter().map(|&c| c as u64).collect()
    }

    pub fn scalar_mul(&self, c: u64, a: &ZqEl) -> ZqEl {
        a.iter()
            .map(|&x| (x as u128 * c as u128 % self.q as u128) as u64)
            .collect()
    }

    /// p-adic valuation of the content, capped at M.
    pub fn val_p(&self, a: &ZqEl) -> u32 {
        if self.is_zero(a) {
            return self.m;
        }
        let mut v = self.m;
        for &c in a {
            if c != 0 {
                let mut k = 0;
                let mut x = c;
                while x % self.p == 0 {
                    x /= self.p;
                    k += 1;
                }
                v = v.min(k);
            }
        }
        v
    }

    /// Exact division by p^k on balanced representatives (the lift in
    /// (-p^M/2, p^M/2]); requires divisibility. The result is the canonical
    /// small representative of a class determined mod p^{M-k}.
    pub fn div_pow_p(&self, a: &ZqEl, k: u32) -> Result<ZqEl> {
        let pk = self.p.pow(k) as i128;
        let q = self.q as i128;
        let mut out = self.zero();
        for (i, &c) in a.iter().enumerate() {
            let signed = if (c as i128) * 2 > q {
                c as i128 - q
            } else {
                c as i128
            };
            if signed % pk != 0 {
                return Err(Error::NotSolvable(format!(
                    "coefficient {c} not divisible by p^{k}"
                )));
            }
            out[i] = (signed / pk).rem_euclid(q) as u64;
        }
        Ok(out)
    }

    pub fn is_unit(&self, a: &ZqEl) -> bool {
        !self.residue.is_zero(&self.to_residue(a))
    }

    pub fn to_residue(&self, a: &ZqEl) -> Vec<u64> {
        a.iter().map(|&c| c % self.p).collect()
    }

    pub fn from_residue(&self, a: &[u64]) -> ZqEl {
        a.iter().map(|&c| c % self.q).collect()
    }

    /// Inverse of a unit by Newton lifting from the residue field.
    pub fn inv(&self, a: &ZqEl) -> Result<ZqEl> {
        if !self.is_unit(a) {
            return Err(Error::NotAUnit);
        }
        let r = self.residue.inv(&self.to_residue(a))?;
        let mut x = self.from_residue(&r);
        // each step doubles the p-adic accuracy
        let steps = 32 - self.m.leading_zeros() + 1;
        for _ in 0..steps {
            let two = self.from_int(2);
            let ax = self.mul(a, &x);
            x = self.mul(&x, &self.sub(&two, &ax));
        }
        debug_assert_eq!(self.mul(a, &x), self.one());
        Ok(x)
    }

    fn eval_modulus(&self, y: &ZqEl) -> ZqEl {
        // Horner on the monic modulus
        let mut acc = self.from_int(self.modulus[self.deg] as i64);
        for i in (0..self.deg).rev() {
            acc = self.add(&self.mul(&acc, y), &self.from_int(self.modulus[i] as i64));
        }
        acc
    }

    fn eval_modulus_derivative(&self, y: &ZqEl) -> ZqEl {
        let mut acc = self.zero();
        for i in (1..=self.deg).rev() {
            let c = self.scalar_mul(i as u64, &self.from_int(self.modulus[i] as i64));
            acc = self.add(&self.mul(&acc, y), &c);
        }
        acc
    }

    /// The root of the modulus congruent to x^p mod p: Newton iteration.
    fn hensel_frob_generator(&self) -> Result<ZqEl> {
        let mut xq = self.zero();
        if self.deg > 1 {
            xq[1] = 1;
        } else {
            xq[0] = 1;
        }
        // y0 = x^p
        let mut y = self.one();
        for _ in 0..self.p {
            y = self.mul(&y, &xq);
        }
        let steps = 32 - self.m.leading_zeros() + 1;
        for _ in 0..steps {
            let fy = self.eval_modulus(&y);
            let dfy = self.eval_modulus_derivative(&y);
            let corr = self.mul(&fy, &self.inv(&dfy)?);
            y = self.sub(&y, &corr);
        }
        let check = self.eval_modulus(&y);
        if !self.is_zero(&check) {
            return Err(Error::NotSolvable("Frobenius lift did not converge".into()));
        }
        Ok(y)
    }

    /// The Frobenius lift (fixes p, maps the generator to its Hensel twin).
    pub fn frob(&self, a: &ZqEl) -> ZqEl {
        // evaluate the coefficient polynomial at frob_x
        let mut acc = self.zero();
        for i in (0..self.deg).rev() {
            let mut c = self.zero();
            c[0] = a[i];
            acc = self.add(&self.mul(&acc, &self.frob_x), &c);
        }
        acc
    }
}
