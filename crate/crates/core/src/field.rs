//! Finite fields F_{p^m} presented as F_p[x]/(modulus), with the arithmetic
//! Frobenius x -> x^p as the distinguished semilinear twist.

use crate::error::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// An element is its coefficient vector of length `deg`, entries in [0, p).
pub type Fq = Vec<u64>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Field {
    pub p: u64,
    pub deg: usize,
    /// Monic modulus, length deg + 1, leading coefficient 1.
    pub modulus: Vec<u64>,
}

impl Field {
    /// Field with the lexicographically least monic irreducible modulus of
    /// degree `deg` (coefficient tuples ordered by their base-p integer value).
    pub fn new(p: u64, deg: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::BadInput(format!("{p} is not prime")));
        }
        if deg == 0 {
            return Err(Error::BadInput("extension degree must be >= 1".into()));
        }
        let modulus = least_irreducible(p, deg);
        Ok(Field { p, deg, modulus })
    }

    /// Field with a caller-supplied monic modulus (checked irreducible).
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::BadInput(format!("{p} is not prime")));
        }
        let deg = modulus.len().saturating_sub(1);
        if deg == 0 || modulus[deg] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::BadInput(
                "modulus must be monic with coefficients in [0,p)".into(),
            ));
        }
        if !is_irreducible(p, &modulus) {
            return Err(Error::BadInput("modulus is reducible".into()));
        }
        Ok(Field { p, deg, modulus })
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.deg as u32)
    }

    pub fn zero(&self) -> Fq {
        vec![0; self.deg]
    }

    pub fn one(&self) -> Fq {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Fq {
        let mut e = self.zero();
        e[0] = n.rem_euclid(self.p as i64) as u64;
        e
    }

    /// The class of x (a generator of the field over F_p as an algebra).
    pub fn gen(&self) -> Fq {
        let mut e = self.zero();
        if self.deg > 1 {
            e[1] = 1;
        } else {
            // prime field: fall back to the least generator-ish nonzero element
            e[0] = 1;
        }
        e
    }

    pub fn is_zero(&self, a: &Fq) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &Fq, b: &Fq) -> Fq {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % self.p).collect()
    }

    pub fn sub(&self, a: &Fq, b: &Fq) -> Fq {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| (x + self.p - y) % self.p)
            .collect()
    }

    pub fn neg(&self, a: &Fq) -> Fq {
        a.iter().map(|&x| (self.p - x) % self.p).collect()
    }

    pub fn mul(&self, a: &Fq, b: &Fq) -> Fq {
        let d = self.deg;
        let mut prod = vec![0u64; 2 * d];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    prod[i + j] = (prod[i + j] + x * y) % self.p;
                }
            }
        }
        // reduce by the monic modulus
        for i in (d..2 * d).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..d {
                let m = self.modulus[j];
                if m != 0 {
                    let idx = i - d + j;
                    prod[idx] = (prod[idx] + self.p * self.p - c * m % (self.p * self.p)) % self.p;
                }
            }
        }
        prod.truncate(d);
        prod
    }

    pub fn scalar_mul(&self, c: u64, a: &Fq) -> Fq {
        a.iter().map(|&x| x * (c % self.p) % self.p).collect()
    }

    pub fn pow(&self, a: &Fq, mut n: u64) -> Fq {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &Fq) -> Result<Fq> {
        if self.is_zero(a) {
            return Err(Error::NotAUnit);
        }
        // a^(q-2) = a^{-1} in F_q
        Ok(self.pow(a, self.order() - 2))
    }

    /// Arithmetic Frobenius a -> a^p.
    pub fn frob(&self, a: &Fq) -> Fq {
        self.pow(a, self.p)
    }

    /// Inverse Frobenius (the (deg-1)-th Frobenius iterate).
    pub fn frob_inv(&self, a: &Fq) -> Fq {
        let mut r = a.clone();
        for _ in 0..self.deg.saturating_sub(1) {
            r = self.frob(&r);
        }
        r
    }

    /// Frobenius iterated k times (k may exceed deg; it is cyclic).
    pub fn frob_iter(&self, a: &Fq, k: usize) -> Fq {
        let mut r = a.clone();
        for _ in 0..(k % self.deg.max(1)) {
            r = self.frob(&r);
        }
        r
    }

    pub fn rand<R: Rng>(&self, rng: &mut R) -> Fq {
        (0..self.deg).map(|_| rng.gen_range(0..self.p)).collect()
    }

    pub fn rand_nonzero<R: Rng>(&self, rng: &mut R) -> Fq {
        loop {
            let a = self.rand(rng);
            if !self.is_zero(&a) {
                return a;
            }
        }
    }

    /// All field elements in lexicographic coefficient order.
    pub fn elements(&self) -> Vec<Fq> {
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut cur = self.zero();
        loop {
            out.push(cur.clone());
            let mut i = 0;
            loop {
                if i == self.deg {
                    return out;
                }
                cur[i] += 1;
                if cur[i] < self.p {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Plain F_p[x] division helpers used only for irreducibility testing.
fn poly_mod(p: u64, a: &[u64], m: &[u64]) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let k = r.len() - 1 - dm;
        if lead != 0 {
            // m is monic
            for j in 0..=dm {
                let idx = k + j;
                r[idx] = (r[idx] + p * p - lead * m[j] % (p * p)) % p;
            }
        }
        r.pop();
    }
    while r.len() > 1 && *r.last().unwrap() == 0 {
        r.pop();
    }
    r
}

fn is_irreducible(p: u64, m: &[u64]) -> bool {
    let d = m.len() - 1;
    if d == 1 {
        return true;
    }
    // trial division by every monic polynomial of degree 1..=d/2
    for fd in 1..=d / 2 {
        let mut coeffs = vec![0u64; fd + 1];
        coeffs[fd] = 1;
        loop {
            let r = poly_mod(p, m, &coeffs);
            if r.len() == 1 && r[0] == 0 {
                return false;
            }
            let mut i = 0;
            loop {
                if i == fd {
                    break;
                }
                coeffs[i] += 1;
                if coeffs[i] < p {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
            if i == fd {
                break;
            }
        }
    }
    true
}

fn least_irreducible(p: u64, deg: usize) -> Vec<u64> {
    let mut coeffs = vec![0u64; deg + 1];
    coeffs[deg] = 1;
    loop {
        if is_irreducible(p, &coeffs) {
            return coeffs;
        }
        let mut i = 0;
        loop {
            assert!(i < deg, "no irreducible found (impossible)");
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
    }
}
