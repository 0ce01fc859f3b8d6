//! Rank-2-per-index semilinear modules over k[[u]] killed by p, in adapted
//! basis form, and the subgroup solvers that run on them: partial degrees,
//! partial Hodge heights, the distinguished cyclic-subgroup line, special
//! lines of a given type, the g = 2 companion line and the g = 2 degree
//! spectrum of all cyclic subgroups.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::rat::{rat, rat_int, Rat};
use crate::series::{Series, UVal};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Per-index exact rational degrees.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegVector(#[serde(with = "crate::rat::rat_vec_string")] pub Vec<Rat>);

impl DegVector {
    pub fn in_range(&self, max: &Rat) -> bool {
        self.0.iter().all(|d| !d.is_negative() && d <= max)
    }
}

/// The adapted-basis block for one index: the semilinear map out of index
/// i-1 is represented by the matrix [[a, b], [u^e c, u^e d]] in the bases
/// (delta, epsilon) of the two indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BKMat {
    pub a: Series,
    pub b: Series,
    pub c: Series,
    pub d: Series,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BKModule {
    pub field: Field,
    pub g: usize,
    pub e: usize,
    pub prec: usize,
    /// mats[i] maps basis index i-1 (mod g) to basis index i.
    pub mats: Vec<BKMat>,
}

/// A rank-1 semilinear-stable direct summand, one generator per index, given
/// in coordinates over the parent's adapted basis, with the transition series
/// T_i defined by phi(gen_{i-1}) = T_i * gen_i.
#[derive(Debug, Clone)]
pub struct BKLine {
    pub e: usize,
    pub gens: Vec<(Series, Series)>,
    pub transitions: Vec<Series>,
}

impl BKLine {
    /// deg_i of the line itself: v_u(T_i) / e.
    pub fn deg_line(&self, f: &Field) -> Result<DegVector> {
        let mut out = Vec::with_capacity(self.transitions.len());
        for t in &self.transitions {
            let v = t.val(f).require_finite("line transition")?;
            out.push(rat(v as i64, self.e as i64));
        }
        Ok(DegVector(out))
    }

    /// deg_i of the corresponding quotient (the cyclic subgroup): 1 - deg_i(line).
    pub fn deg_quotient(&self, f: &Field) -> Result<DegVector> {
        let l = self.deg_line(f)?;
        Ok(DegVector(l.0.into_iter().map(|d| Rat::one() - d).collect()))
    }
}

impl BKModule {
    pub fn new(field: Field, g: usize, e: usize, prec: usize, mats: Vec<BKMat>) -> Result<Self> {
        if g == 0 || e == 0 {
            return Err(Error::BadInput("need g >= 1 and e >= 1".into()));
        }
        if mats.len() != g {
            return Err(Error::BadInput(format!(
                "expected {g} blocks, got {}",
                mats.len()
            )));
        }
        let p = field.p as usize;
        if prec < e * (p + 2) {
            return Err(Error::BadInput(format!(
                "precision {prec} below the required e*(p+2) = {}",
                e * (p + 2)
            )));
        }
        if !field.deg.is_multiple_of(g) {
            return Err(Error::BadInput(format!(
                "coefficient field of degree {} does not contain the degree-{g} subfield",
                field.deg
            )));
        }
        let m = BKModule {
            field,
            g,
            e,
            prec,
            mats,
        };
        for i in 0..g {
            let det = m.stripped_det(i);
            if det.val(&m.field) != UVal::Finite(0) {
                return Err(Error::BadInput(format!(
                    "block {i} is not invertible over k[[u]] after stripping u^e"
                )));
            }
        }
        Ok(m)
    }

    /// ad - bc of block i with the u^e factors stripped.
    fn stripped_det(&self, i: usize) -> Series {
        let f = &self.field;
        let m = &self.mats[i];
        m.a.mul(f, &m.d).sub(f, &m.b.mul(f, &m.c))
    }

    /// The full matrix of block i, entries padded to the given precision.
    pub fn mat_full(&self, i: usize, prec: usize) -> [Series; 4] {
        let f = &self.field;
        let m = &self.mats[i];
        let lift = |s: &Series| Series::from_coeffs(f, s.coeffs.clone(), prec);
        [
            lift(&m.a),
            lift(&m.b),
            lift(&m.c).mul_upow(f, self.e).truncate(f, prec),
            lift(&m.d).mul_upow(f, self.e).truncate(f, prec),
        ]
    }

    fn lift(&self, s: &Series, prec: usize) -> Series {
        Series::from_coeffs(&self.field, s.coeffs.clone(), prec)
    }

    /// Internal padded working precision for the fixed-point solvers.
    fn solver_prec(&self) -> usize {
        self.prec + 2 * self.e + 8
    }
}

/// Valuations of the two elementary divisors of a 2x2 matrix over k[[u]],
/// read off the minimal entry valuation and the determinant.
pub fn elementary_divisor_valuations(f: &Field, m: &[Series; 4]) -> (UVal, UVal) {
    let vals: Vec<UVal> = m.iter().map(|s| s.val(f)).collect();
    let v1 = vals
        .iter()
        .filter_map(|v| v.finite())
        .min()
        .map(UVal::Finite)
        .unwrap_or_else(|| {
            let n = m.iter().map(|s| s.prec).min().unwrap();
            UVal::AtLeast(n)
        });
    let det = m[0].mul(f, &m[3]).sub(f, &m[1].mul(f, &m[2]));
    let v2 = match (v1, det.val(f)) {
        (UVal::Finite(a), UVal::Finite(d)) => UVal::Finite(d - a),
        (UVal::Finite(a), UVal::AtLeast(n)) => UVal::AtLeast(n.saturating_sub(a)),
        (UVal::AtLeast(n), _) => UVal::AtLeast(n),
    };
    (v1, v2)
}

/// deg_i = (sum of elementary divisor valuations of block i) / e.
pub fn bk_degrees(m: &BKModule) -> Result<DegVector> {
    let f = &m.field;
    let mut out = Vec::with_capacity(m.g);
    for i in 0..m.g {
        let full = m.mat_full(i, m.prec);
        let (v1, v2) = elementary_divisor_valuations(f, &full);
        let v1 = v1.require_finite(&format!("block {i} first divisor"))?;
        let v2 = v2.require_finite(&format!("block {i} second divisor"))?;
        out.push(rat((v1 + v2) as i64, m.e as i64));
    }
    Ok(DegVector(out))
}

/// w_i = min(e, v_u(a_i)) / e.
pub fn bk_hodge_heights(m: &BKModule) -> Result<DegVector> {
    let f = &m.field;
    let mut out = Vec::with_capacity(m.g);
    for (i, blk) in m.mats.iter().enumerate() {
        let w = match blk.a.val(f) {
            UVal::Finite(v) => v.min(m.e),
            UVal::AtLeast(n) if n >= m.e => m.e,
            UVal::AtLeast(_) => {
                return Err(Error::PrecisionExhausted(format!(
                    "a-entry of block {i} indeterminate below u^e"
                )))
            }
        };
        out.push(rat(w as i64, m.e as i64));
    }
    Ok(DegVector(out))
}

/// Check that a line is stable under the module's semilinear map: substitute
/// the generators and compare with the stored transitions to precision `prec`.
pub fn verify_phi_stable(m: &BKModule, line: &BKLine) -> Result<()> {
    let f = &m.field;
    let pint = m.solver_prec() * f.p as usize;
    for i in 0..m.g {
        let prev = (i + m.g - 1) % m.g;
        let (x, y) = &line.gens[prev];
        let full = m.mat_full(i, pint);
        let (px, py) = (x.phi(f), y.phi(f));
        let lhs0 = full[0].mul(f, &px).add(f, &full[1].mul(f, &py));
        let lhs1 = full[2].mul(f, &px).add(f, &full[3].mul(f, &py));
        let t = &line.transitions[i];
        let rhs0 = t.mul(f, &line.gens[i].0);
        let rhs1 = t.mul(f, &line.gens[i].1);
        if !lhs0.eq_mod(f, &rhs0, m.prec) || !lhs1.eq_mod(f, &rhs1, m.prec) {
            return Err(Error::StabilityFailure(format!(
                "substitution residual at index {i}"
            )));
        }
    }
    Ok(())
}

fn usize_of(r: &Rat, what: &str) -> Result<usize> {
    if !crate::rat::is_integer(r) || r.is_negative() {
        return Err(Error::NonIntegralExponent(format!(
            "{what} = {r} is not a nonnegative integer"
        )));
    }
    r.to_integer()
        .try_into()
        .map_err(|_| Error::BadInput(format!("{what} too large")))
}

/// The distinguished cyclic-subgroup line: generators
/// delta_i + u^{e(1-w_i)} z_i epsilon_i with z the unique fixed point of the
/// contracting substitution system; returns the line and the quotient degrees
/// (1 - w_i, ...).
pub fn canonical_subgroup(m: &BKModule) -> Result<(BKLine, DegVector)> {
    let f = &m.field;
    let p = f.p as i64;
    let w = bk_hodge_heights(m)?;
    for i in 0..m.g {
        let prev = (i + m.g - 1) % m.g;
        if w.0[i].clone() + rat_int(p) * w.0[prev].clone() >= rat_int(p) {
            return Err(Error::HypothesisViolated(format!(
                "w_{i} + p*w_{prev} >= p (heights {} and {})",
                w.0[i], w.0[prev]
            )));
        }
    }
    // all heights are < 1 here, so v_u(a_i) = e*w_i exactly
    let ew: Vec<usize> =
        w.0.iter()
            .enumerate()
            .map(|(i, wi)| usize_of(&(wi.clone() * rat_int(m.e as i64)), &format!("e*w_{i}")))
            .collect::<Result<_>>()?;

    let pint = m.solver_prec();
    let pu = f.p as usize;

    // per-index data: numerator c_i + u^{ep(1-w_{i-1})} d_i z^p and
    // denominator alpha_i + u^{e(p - p w_{i-1} - w_i)} b_i z^p
    struct Step {
        c: Series,
        d: Series,
        b: Series,
        alpha: Series,
        x_exp: usize, // e*p*(1 - w_{i-1})
        g_exp: usize, // e*(p - p*w_{i-1} - w_i)
    }
    let mut steps = Vec::with_capacity(m.g);
    for i in 0..m.g {
        let prev = (i + m.g - 1) % m.g;
        let blk = &m.mats[i];
        let a = m.lift(&blk.a, pint + ew[i]);
        let mut alpha_coeffs = a.coeffs[ew[i]..].to_vec();
        alpha_coeffs.resize(pint, f.zero());
        let alpha = Series {
            prec: pint,
            coeffs: alpha_coeffs,
        };
        debug_assert_eq!(alpha.val(f), UVal::Finite(0));
        let x_exp = m.e * pu - pu * ew[prev];
        let g_exp = m.e * pu - pu * ew[prev] - ew[i];
        steps.push(Step {
            c: m.lift(&blk.c, pint),
            d: m.lift(&blk.d, pint),
            b: m.lift(&blk.b, pint),
            alpha,
            x_exp,
            g_exp,
        });
    }

    let mut z: Vec<Series> = (0..m.g).map(|_| Series::zero(f, pint)).collect();
    let mut converged = false;
    for _ in 0..pint + 2 {
        let mut stable = true;
        for i in 0..m.g {
            let prev = (i + m.g - 1) % m.g;
            let st = &steps[i];
            let zp = z[prev].phi(f).truncate(f, pint);
            let num =
                st.c.add(f, &st.d.mul(f, &zp).mul_upow(f, st.x_exp).truncate(f, pint));
            let den = st
                .alpha
                .add(f, &st.b.mul(f, &zp).mul_upow(f, st.g_exp).truncate(f, pint));
            let next = num.mul(f, &den.inv_unit(f)?).truncate(f, pint);
            if !next.eq_mod(f, &z[i], pint) {
                stable = false;
            }
            z[i] = next;
        }
        if stable {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::IterationCap);
    }

    let mut gens = Vec::with_capacity(m.g);
    let mut transitions = Vec::with_capacity(m.g);
    for i in 0..m.g {
        let prev = (i + m.g - 1) % m.g;
        let coord = z[i].mul_upow(f, m.e - ew[i]).truncate(f, pint);
        gens.push((Series::one(f, pint), coord));
        let blk = &m.mats[i];
        let zp = z[prev].phi(f).truncate(f, pint);
        let t = m.lift(&blk.a, pint).add(
            f,
            &m.lift(&blk.b, pint)
                .mul(f, &zp)
                .mul_upow(f, steps[i].x_exp)
                .truncate(f, pint),
        );
        if t.val(f) != UVal::Finite(ew[i]) {
            return Err(Error::PrecisionExhausted(format!(
                "transition valuation at index {i} differs from e*w_{i}"
            )));
        }
        transitions.push(t);
    }
    let line = BKLine {
        e: m.e,
        gens,
        transitions,
    };
    let cdeg = DegVector(w.0.iter().map(|wi| Rat::one() - wi.clone()).collect());
    Ok((line, cdeg))
}

/// Index classes for a type-I line: sigma(I) is I shifted by one.
fn classes(g: usize, in_i: &[bool]) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let mut sig_i_and_i = Vec::new();
    let mut sig_i_and_ic = Vec::new();
    let mut sig_ic = Vec::new();
    for i in 0..g {
        let prev = (i + g - 1) % g;
        if in_i[prev] {
            if in_i[i] {
                sig_i_and_i.push(i);
            } else {
                sig_i_and_ic.push(i);
            }
        } else {
            sig_ic.push(i);
        }
    }
    (sig_i_and_i, sig_i_and_ic, sig_ic)
}

/// Line of a special subgroup of type I: degrees 0 on I and 1 off I, so the
/// quotient subgroup has degree 1 on I and 0 off I. The module must be given
/// in the simplified shapes (identity-normalized columns) for each index class.
pub fn special_subgroup(m: &BKModule, type_i: &[bool]) -> Result<BKLine> {
    let f = &m.field;
    if type_i.len() != m.g {
        return Err(Error::BadInput("type indicator length must equal g".into()));
    }
    let (cls_ii, cls_iic, cls_ic) = classes(m.g, type_i);
    // sigma(I^c) subset I
    for &i in &cls_ic {
        if !type_i[i] {
            return Err(Error::HypothesisViolated(format!(
                "sigma(I^c) must be contained in I (fails at index {i})"
            )));
        }
    }
    let w = bk_hodge_heights(m)?;
    for &i in &cls_ii {
        if !w.0[i].is_zero() {
            return Err(Error::HypothesisViolated(format!(
                "w_{i} must vanish on sigma(I) /\\ I"
            )));
        }
    }
    for &i in &cls_iic {
        if w.0[i] != Rat::one() {
            return Err(Error::HypothesisViolated(format!(
                "w_{i} must equal 1 on sigma(I) /\\ I^c"
            )));
        }
    }
    for &i in &cls_ic {
        if w.0[i].is_zero() {
            return Err(Error::HypothesisViolated(format!(
                "w_{i} must be positive on sigma(I^c)"
            )));
        }
    }
    // normalized shapes
    let pint = m.solver_prec();
    let one = Series::one(f, m.prec);
    for &i in &cls_ii {
        let blk = &m.mats[i];
        if !m.lift(&blk.a, m.prec).eq_mod(f, &one, m.prec) || !blk.c.is_zero(f) {
            return Err(Error::NormalizationViolated(format!(
                "block {i} must have the shape (1, b; 0, u^e d)"
            )));
        }
    }
    for &i in cls_iic.iter().chain(&cls_ic) {
        let blk = &m.mats[i];
        if !m.lift(&blk.b, m.prec).eq_mod(f, &one, m.prec) || !blk.d.is_zero(f) {
            return Err(Error::NormalizationViolated(format!(
                "block {i} must have the shape (a, 1; u^e c, 0)"
            )));
        }
    }
    for &i in cls_iic.iter().chain(&cls_ic) {
        let blk = &m.mats[i];
        let cv = m.lift(&blk.c, m.prec).val(f);
        if cv != UVal::Finite(0) {
            return Err(Error::NormalizationViolated(format!(
                "c-entry of block {i} must be a unit"
            )));
        }
    }

    let pu = f.p as usize;
    let e = m.e;
    let mut x: Vec<Series> = (0..m.g).map(|_| Series::zero(f, pint)).collect();
    let mut converged = false;
    for _ in 0..pint + 2 {
        let mut stable = true;
        for i in 0..m.g {
            let prev = (i + m.g - 1) % m.g;
            let blk = &m.mats[i];
            let xp = x[prev].phi(f).truncate(f, pint);
            let next = if cls_ii.contains(&i) {
                // x_i = u^{ep} x^p d / (1 + u^{ep} x^p b)
                let num = m
                    .lift(&blk.d, pint)
                    .mul(f, &xp)
                    .mul_upow(f, e * pu)
                    .truncate(f, pint);
                let den = Series::one(f, pint).add(
                    f,
                    &m.lift(&blk.b, pint)
                        .mul(f, &xp)
                        .mul_upow(f, e * pu)
                        .truncate(f, pint),
                );
                num.mul(f, &den.inv_unit(f)?).truncate(f, pint)
            } else if cls_iic.contains(&i) {
                // x_i = (a' + u^{e(p-1)} x^p) / c, where a = u^e a'
                let a = m.lift(&blk.a, pint + e);
                let mut ap = a.coeffs[e..].to_vec();
                ap.resize(pint, f.zero());
                let aprime = Series {
                    prec: pint,
                    coeffs: ap,
                };
                let num = aprime.add(f, &xp.mul_upow(f, e * (pu - 1)).truncate(f, pint));
                num.mul(f, &m.lift(&blk.c, pint).inv_unit(f)?)
                    .truncate(f, pint)
            } else {
                // sigma(I^c): x_i = c x^p / (1 + a x^p)
                let num = m.lift(&blk.c, pint).mul(f, &xp).truncate(f, pint);
                let den = Series::one(f, pint)
                    .add(f, &m.lift(&blk.a, pint).mul(f, &xp).truncate(f, pint));
                num.mul(f, &den.inv_unit(f)?).truncate(f, pint)
            };
            if !next.eq_mod(f, &x[i], pint) {
                stable = false;
            }
            x[i] = next;
        }
        if stable {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::IterationCap);
    }

    let mut gens = Vec::with_capacity(m.g);
    for i in 0..m.g {
        if type_i[i] {
            gens.push((Series::one(f, pint), x[i].mul_upow(f, e).truncate(f, pint)));
        } else {
            gens.push((x[i].clone(), Series::one(f, pint)));
        }
    }
    let mut transitions = Vec::with_capacity(m.g);
    for i in 0..m.g {
        let prev = (i + m.g - 1) % m.g;
        let blk = &m.mats[i];
        let xp = x[prev].phi(f).truncate(f, pint);
        let t = if cls_ii.contains(&i) {
            Series::one(f, pint).add(
                f,
                &m.lift(&blk.b, pint)
                    .mul(f, &xp)
                    .mul_upow(f, e * pu)
                    .truncate(f, pint),
            )
        } else if cls_iic.contains(&i) {
            m.lift(&blk.c, pint).mul_upow(f, e).truncate(f, pint)
        } else {
            Series::one(f, pint).add(f, &m.lift(&blk.a, pint).mul(f, &xp).truncate(f, pint))
        };
        transitions.push(t);
    }
    Ok(BKLine {
        e,
        gens,
        transitions,
    })
}

/// The second distinguished line when g = 2, w_i = 1 and
/// p/(p+1) < w_{i+1} <= 1: returns the line and the quotient degrees
/// (1 - p(1 - w_{i+1}), 1 - w_{i+1}) at positions (i, i+1).
pub fn companion_subgroup_g2(m: &BKModule, i: usize) -> Result<(BKLine, DegVector)> {
    let f = &m.field;
    if m.g != 2 {
        return Err(Error::BadInput("companion line requires g = 2".into()));
    }
    let i = i % 2;
    let j = (i + 1) % 2;
    let w = bk_hodge_heights(m)?;
    let p = f.p as i64;
    if w.0[i] != Rat::one() {
        return Err(Error::HypothesisViolated(format!("w_{i} must equal 1")));
    }
    let wj = w.0[j].clone();
    if wj <= rat(p, p + 1) || wj > Rat::one() {
        return Err(Error::HypothesisViolated(format!(
            "w_{j} = {wj} outside (p/(p+1), 1]"
        )));
    }
    // required shapes: block j = (a, 1; u^e c, 0) with v(a) = e*w_j,
    // block i = (0, 1; u^e c, 0); both c units
    let one = Series::one(f, m.prec);
    for k in [i, j] {
        let blk = &m.mats[k];
        if !m.lift(&blk.b, m.prec).eq_mod(f, &one, m.prec) || !blk.d.is_zero(f) {
            return Err(Error::NormalizationViolated(format!(
                "block {k} must have the shape (a, 1; u^e c, 0)"
            )));
        }
        if m.lift(&blk.c, m.prec).val(f) != UVal::Finite(0) {
            return Err(Error::NormalizationViolated(format!(
                "c-entry of block {k} must be a unit"
            )));
        }
    }
    if !m.mats[i].a.is_zero(f) {
        return Err(Error::NormalizationViolated(format!(
            "a-entry of block {i} must vanish"
        )));
    }

    if wj == Rat::one() {
        // the fixed-point form degenerates; this is the special line of type {i}
        let mut ty = vec![false; 2];
        ty[i] = true;
        let line = special_subgroup(m, &ty)?;
        let mut hdeg = vec![Rat::zero(); 2];
        hdeg[i] = Rat::one();
        hdeg[j] = Rat::zero();
        return Ok((line, DegVector(hdeg)));
    }

    let e = m.e;
    let pu = f.p as usize;
    let ewj = usize_of(&(wj.clone() * rat_int(e as i64)), "e*w")?;
    // kappa = e(1 - p(1 - w_j)) > 0; theta = e(p^2-1)(w_j - p/(p+1)) > 0
    let kappa_r = rat_int(e as i64) * (Rat::one() - rat_int(p) * (Rat::one() - wj.clone()));
    let theta_r = rat_int(e as i64) * rat_int(p * p - 1) * (wj.clone() - rat(p, p + 1));
    let kappa = usize_of(&kappa_r, "e(1 - p(1 - w))")?;
    let theta = usize_of(&theta_r, "e(p^2-1)(w - p/(p+1))")?;

    let pint = m.solver_prec();
    let a_j = m.lift(&m.mats[j].a, pint + ewj);
    let mut alpha_coeffs = a_j.coeffs[ewj..].to_vec();
    alpha_coeffs.resize(pint, f.zero());
    let alpha = Series {
        prec: pint,
        coeffs: alpha_coeffs,
    };
    let c_i = m.lift(&m.mats[i].c, pint);
    let c_j = m.lift(&m.mats[j].c, pint);

    // y1 = (c_i / c_j^p) (alpha^p + u^{p*theta} y1^{p^2})
    let cj_p = {
        let mut r = Series::one(f, pint);
        for _ in 0..pu {
            r = r.mul(f, &c_j).truncate(f, pint);
        }
        r
    };
    let scale = c_i.mul(f, &cj_p.inv_unit(f)?).truncate(f, pint);
    let alpha_p = {
        let mut r = Series::one(f, pint);
        for _ in 0..pu {
            r = r.mul(f, &alpha).truncate(f, pint);
        }
        r
    };
    let mut y1 = Series::zero(f, pint);
    let mut converged = false;
    for _ in 0..pint + 2 {
        let y1p2 = y1.phi(f).truncate(f, pint).phi(f).truncate(f, pint);
        let next = scale
            .mul(
                f,
                &alpha_p.add(f, &y1p2.mul_upow(f, pu * theta).truncate(f, pint)),
            )
            .truncate(f, pint);
        if next.eq_mod(f, &y1, pint) {
            converged = true;
            y1 = next;
            break;
        }
        y1 = next;
    }
    if !converged {
        return Err(Error::IterationCap);
    }
    // y2 = c_j / (alpha + u^theta y1^p)
    let y1p = y1.phi(f).truncate(f, pint);
    let den = alpha.add(f, &y1p.mul_upow(f, theta).truncate(f, pint));
    let y2 = c_j.mul(f, &den.inv_unit(f)?).truncate(f, pint);

    // gens: xi_i = delta_i + u^kappa y1 eps_i ; xi_j = delta_j + u^{e(1-w_j)} y2 eps_j
    let mut gens = vec![(Series::one(f, pint), Series::zero(f, pint)); 2];
    gens[i] = (
        Series::one(f, pint),
        y1.mul_upow(f, kappa).truncate(f, pint),
    );
    gens[j] = (
        Series::one(f, pint),
        y2.mul_upow(f, e - ewj).truncate(f, pint),
    );

    // transitions: into j: a_j + u^{p*kappa} y1^p ; into i: u^{e p (1 - w_j)} y2^p
    let mut transitions = vec![Series::zero(f, pint); 2];
    transitions[j] = m
        .lift(&m.mats[j].a, pint)
        .add(f, &y1p.mul_upow(f, pu * kappa).truncate(f, pint));
    let y2p = y2.phi(f).truncate(f, pint);
    transitions[i] = y2p.mul_upow(f, pu * (e - ewj)).truncate(f, pint);

    let line = BKLine {
        e,
        gens,
        transitions,
    };
    let mut hdeg = vec![Rat::zero(); 2];
    hdeg[i] = Rat::one() - rat_int(p) * (Rat::one() - wj.clone());
    hdeg[j] = Rat::one() - wj;
    Ok((line, DegVector(hdeg)))
}

/// One class of the g = 2 cyclic-subgroup spectrum: a degree pair with a
/// multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumClass {
    pub degrees: DegVector,
    pub mult: u64,
}

/// The valuation alpha = v_u(b_{i+1} c_i^p + a_i'^p) / e controlling the
/// g = 2 subgroup spectrum when w_i = 1 and w_{i+1} = 0, together with the
/// Newton data of the underlying one-variable equation.
pub struct SpectrumData {
    pub alpha: Option<Rat>,
    /// (exponent, u-valuation) points of z^{p^2+1} + B z - C:
    /// finite-valuation entries only.
    pub newton_points: Vec<(u64, Rat)>,
}

fn spectrum_preconditions(m: &BKModule, i: usize) -> Result<(usize, usize)> {
    let f = &m.field;
    if m.g != 2 {
        return Err(Error::BadInput("spectrum requires g = 2".into()));
    }
    let i = i % 2;
    let j = (i + 1) % 2;
    let w = bk_hodge_heights(m)?;
    if w.0[i] != Rat::one() {
        return Err(Error::HypothesisViolated(format!("w_{i} must equal 1")));
    }
    if !w.0[j].is_zero() {
        return Err(Error::HypothesisViolated(format!("w_{j} must vanish")));
    }
    if !m.e.is_multiple_of(f.p as usize) {
        return Err(Error::HypothesisViolated("p must divide e".into()));
    }
    // shapes: block j = (1, b; 0, u^e d) with d a unit; block i = (a, 1; u^e c, 0)
    // with c a unit
    let one = Series::one(f, m.prec);
    let bj = &m.mats[j];
    if !m.lift(&bj.a, m.prec).eq_mod(f, &one, m.prec)
        || !bj.c.is_zero(f)
        || m.lift(&bj.d, m.prec).val(f) != UVal::Finite(0)
    {
        return Err(Error::NormalizationViolated(format!(
            "block {j} must have the shape (1, b; 0, u^e d) with d a unit"
        )));
    }
    let bi = &m.mats[i];
    if !m.lift(&bi.b, m.prec).eq_mod(f, &one, m.prec)
        || !bi.d.is_zero(f)
        || m.lift(&bi.c, m.prec).val(f) != UVal::Finite(0)
    {
        return Err(Error::NormalizationViolated(format!(
            "block {i} must have the shape (a, 1; u^e c, 0) with c a unit"
        )));
    }
    Ok((i, j))
}

/// The controlling data for the g = 2 spectrum.
pub fn spectrum_data(m: &BKModule, i: usize) -> Result<SpectrumData> {
    let f = &m.field;
    let (i, j) = spectrum_preconditions(m, i)?;
    let p = f.p as usize;
    let e = m.e;
    let pint = m.prec;
    // a_i = u^e a'
    let a = m.lift(&m.mats[i].a, pint + e);
    let mut apc = a.coeffs[e..].to_vec();
    apc.resize(pint, f.zero());
    let aprime = Series {
        prec: pint,
        coeffs: apc,
    };
    let c = m.lift(&m.mats[i].c, pint);
    let b = m.lift(&m.mats[j].b, pint);
    let d = m.lift(&m.mats[j].d, pint);
    let cp = {
        let mut r = Series::one(f, pint);
        for _ in 0..p {
            r = r.mul(f, &c).truncate(f, pint);
        }
        r
    };
    let apow = aprime.phi(f).truncate(f, pint); // a'^p
    let lin = b.mul(f, &cp).add(f, &apow).truncate(f, pint);
    let alpha = lin.val(f).finite().map(|v| rat(v as i64, e as i64));
    // constant term c^p u^{e(1-1/p)} d: a unit times the shift
    let cu = cp
        .mul(f, &d)
        .val(f)
        .require_finite("constant coefficient")?;
    let const_val = rat((cu + e - e / p) as i64, 1);
    let mut pts = vec![(0u64, const_val), ((p * p + 1) as u64, Rat::zero())];
    if let Some(av) = &alpha {
        pts.push((1, av.clone() * rat_int(e as i64)));
    }
    pts.sort_by_key(|x| x.0);
    Ok(SpectrumData {
        alpha,
        newton_points: pts,
    })
}

/// Degree pairs (with multiplicity) of all p^2 + 1 cyclic subgroups when
/// w_i = 1 and w_{i+1} = 0, from the alpha case split. Positions (i, i+1).
pub fn subgroup_degree_spectrum_g2(m: &BKModule, i: usize) -> Result<Vec<SpectrumClass>> {
    let f = &m.field;
    let (i, j) = spectrum_preconditions(m, i)?;
    let p = f.p as i64;
    let data = spectrum_data(m, i)?;
    // an indeterminate alpha is at least prec/e > 1, far beyond the threshold
    let alpha = data.alpha.unwrap_or_else(|| rat(m.prec as i64, m.e as i64));
    let threshold = rat(p * (p - 1), p * p + 1);
    let pair = |d2: Rat| {
        let mut v = vec![Rat::zero(); 2];
        v[i] = Rat::zero();
        v[j] = d2;
        DegVector(v)
    };
    let classes = if alpha < threshold {
        let dist = {
            let x = Rat::one() - alpha.clone();
            if x > Rat::one() {
                Rat::one()
            } else {
                x
            }
        };
        vec![
            SpectrumClass {
                degrees: pair(dist),
                mult: 1,
            },
            SpectrumClass {
                degrees: pair(rat(1, p) + alpha / rat_int(p * p)),
                mult: (p * p) as u64,
            },
        ]
    } else {
        vec![SpectrumClass {
            degrees: pair(rat(p + 1, p * p + 1)),
            mult: (p * p + 1) as u64,
        }]
    };
    Ok(classes)
}

/// Raynaud-style weighted degree comparison: at every index i,
/// sum_j p^j deg_{i-j}(G) >= sum_j p^j deg_{i-j}(H). All equalities force an
/// isomorphism.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RaynaudVerdict {
    pub per_index: Vec<bool>,
    pub hom_possible: bool,
    pub iso_forced: bool,
}

pub fn raynaud_degree_check(
    p: u64,
    deg_g: &DegVector,
    deg_h: &DegVector,
) -> Result<RaynaudVerdict> {
    let g = deg_g.0.len();
    if g == 0 || deg_h.0.len() != g {
        return Err(Error::BadInput(
            "degree vectors must have equal positive length".into(),
        ));
    }
    if !deg_g.in_range(&Rat::one()) || !deg_h.in_range(&Rat::one()) {
        return Err(Error::BadInput("degree entries must lie in [0, 1]".into()));
    }
    let weighted = |v: &DegVector, i: usize| {
        let mut acc = Rat::zero();
        let mut pw = Rat::one();
        for jj in 0..g {
            let idx = (i + g - jj % g) % g;
            acc += pw.clone() * v.0[(idx) % g].clone();
            pw *= rat_int(p as i64);
        }
        acc
    };
    let mut per_index = Vec::with_capacity(g);
    let mut all_eq = true;
    for i in 0..g {
        let lhs = weighted(deg_g, i);
        let rhs = weighted(deg_h, i);
        per_index.push(lhs >= rhs);
        if lhs != rhs {
            all_eq = false;
        }
    }
    let hom_possible = per_index.iter().all(|&b| b);
    Ok(RaynaudVerdict {
        per_index,
        hom_possible,
        iso_forced: hom_possible && all_eq,
    })
}

// ---------------------------------------------------------------------------
// deterministic samplers for test and CLI use
// ---------------------------------------------------------------------------

/// Random adapted-basis module with prescribed partial Hodge heights.
/// Requires every e*w_i to be an integer.
pub fn sample_adapted_module<R: Rng>(
    field: &Field,
    g: usize,
    e: usize,
    prec: usize,
    w: &[Rat],
    rng: &mut R,
) -> Result<BKModule> {
    if w.len() != g {
        return Err(Error::BadInput("height vector length must equal g".into()));
    }
    let f = field;
    let mut mats = Vec::with_capacity(g);
    for (idx, wi) in w.iter().enumerate() {
        if wi.is_negative() || wi > &Rat::one() {
            return Err(Error::BadInput("heights must lie in [0, 1]".into()));
        }
        let ew = usize_of(&(wi.clone() * rat_int(e as i64)), "e*w")?;
        for _attempt in 0..64 {
            let a = if ew >= e {
                // height 1: any a with valuation >= e
                Series::rand(f, prec, rng).mul_upow(f, e).truncate(f, prec)
            } else {
                Series::rand_unit(f, prec, rng)
                    .mul_upow(f, ew)
                    .truncate(f, prec)
            };
            let (b, c) = if ew > 0 {
                (
                    Series::rand_unit(f, prec, rng),
                    Series::rand_unit(f, prec, rng),
                )
            } else {
                (Series::rand(f, prec, rng), Series::rand(f, prec, rng))
            };
            let d = Series::rand(f, prec, rng);
            let det = a.mul(f, &d).sub(f, &b.mul(f, &c));
            if det.val(f) == UVal::Finite(0) {
                mats.push(BKMat { a, b, c, d });
                break;
            }
        }
        if mats.len() != idx + 1 {
            return Err(Error::BadInput(
                "failed to sample an invertible block".into(),
            ));
        }
    }
    BKModule::new(f.clone(), g, e, prec, mats)
}

/// Random module in the normalized shape required by [`special_subgroup`],
/// with heights: 0 on sigma(I) /\ I, 1 on sigma(I) /\ I^c, and the supplied
/// positive heights on sigma(I^c).
pub fn sample_special_module<R: Rng>(
    field: &Field,
    g: usize,
    e: usize,
    prec: usize,
    type_i: &[bool],
    w_on_sig_ic: &[Rat],
    rng: &mut R,
) -> Result<BKModule> {
    let f = field;
    let (cls_ii, cls_iic, cls_ic) = classes(g, type_i);
    if w_on_sig_ic.len() != cls_ic.len() {
        return Err(Error::BadInput(
            "one height per sigma(I^c) index required".into(),
        ));
    }
    for &i in &cls_ic {
        if !type_i[i] {
            return Err(Error::HypothesisViolated(
                "sigma(I^c) must be contained in I".into(),
            ));
        }
    }
    let mut mats = vec![
        BKMat {
            a: Series::zero(f, prec),
            b: Series::zero(f, prec),
            c: Series::zero(f, prec),
            d: Series::zero(f, prec),
        };
        g
    ];
    for &i in &cls_ii {
        mats[i] = BKMat {
            a: Series::one(f, prec),
            b: Series::rand(f, prec, rng),
            c: Series::zero(f, prec),
            d: Series::rand_unit(f, prec, rng),
        };
    }
    for &i in &cls_iic {
        mats[i] = BKMat {
            a: Series::rand(f, prec, rng).mul_upow(f, e).truncate(f, prec),
            b: Series::one(f, prec),
            c: Series::rand_unit(f, prec, rng),
            d: Series::zero(f, prec),
        };
    }
    for (pos, &i) in cls_ic.iter().enumerate() {
        let ew = usize_of(&(w_on_sig_ic[pos].clone() * rat_int(e as i64)), "e*w")?;
        if ew == 0 {
            return Err(Error::HypothesisViolated(
                "heights on sigma(I^c) must be positive".into(),
            ));
        }
        let a = if ew >= e {
            Series::rand(f, prec, rng).mul_upow(f, e).truncate(f, prec)
        } else {
            Series::rand_unit(f, prec, rng)
                .mul_upow(f, ew)
                .truncate(f, prec)
        };
        mats[i] = BKMat {
            a,
            b: Series::one(f, prec),
            c: Series::rand_unit(f, prec, rng),
            d: Series::zero(f, prec),
        };
    }
    BKModule::new(f.clone(), g, e, prec, mats)
}

/// Random g = 2 module in the shape required by [`companion_subgroup_g2`]:
/// w_i = 1 and w_{i+1} the supplied height.
pub fn sample_companion_module<R: Rng>(
    field: &Field,
    e: usize,
    prec: usize,
    i: usize,
    w_next: &Rat,
    rng: &mut R,
) -> Result<BKModule> {
    let f = field;
    let i = i % 2;
    let j = (i + 1) % 2;
    let ew = usize_of(&(w_next.clone() * rat_int(e as i64)), "e*w")?;
    let mut mats = vec![
        BKMat {
            a: Series::zero(f, prec),
            b: Series::zero(f, prec),
            c: Series::zero(f, prec),
            d: Series::zero(f, prec),
        };
        2
    ];
    mats[i] = BKMat {
        a: Series::zero(f, prec),
        b: Series::one(f, prec),
        c: Series::rand_unit(f, prec, rng),
        d: Series::zero(f, prec),
    };
    let a_j = if ew >= e {
        Series::rand(f, prec, rng).mul_upow(f, e).truncate(f, prec)
    } else {
        Series::rand_unit(f, prec, rng)
            .mul_upow(f, ew)
            .truncate(f, prec)
    };
    mats[j] = BKMat {
        a: a_j,
        b: Series::one(f, prec),
        c: Series::rand_unit(f, prec, rng),
        d: Series::zero(f, prec),
    };
    BKModule::new(f.clone(), 2, e, prec, mats)
}

/// Random g = 2 module in the shape required by the spectrum, with the
/// controlling valuation alpha realized through the b-entry (e*alpha must be
/// an integer, or None for an identically vanishing combination).
pub fn sample_spectrum_module<R: Rng>(
    field: &Field,
    e: usize,
    prec: usize,
    i: usize,
    alpha: Option<&Rat>,
    rng: &mut R,
) -> Result<BKModule> {
    let f = field;
    let i = i % 2;
    let j = (i + 1) % 2;
    let b = match alpha {
        None => Series::zero(f, prec),
        Some(a) => {
            let ea = usize_of(&(a.clone() * rat_int(e as i64)), "e*alpha")?;
            if ea >= prec {
                return Err(Error::BadInput("alpha beyond working precision".into()));
            }
            Series::rand_unit(f, prec, rng)
                .mul_upow(f, ea)
                .truncate(f, prec)
        }
    };
    let mut mats = vec![
        BKMat {
            a: Series::zero(f, prec),
            b: Series::zero(f, prec),
            c: Series::zero(f, prec),
            d: Series::zero(f, prec),
        };
        2
    ];
    // a_i = 0 keeps alpha governed by the b-entry alone
    mats[i] = BKMat {
        a: Series::zero(f, prec),
        b: Series::one(f, prec),
        c: Series::rand_unit(f, prec, rng),
        d: Series::zero(f, prec),
    };
    mats[j] = BKMat {
        a: Series::one(f, prec),
        b,
        c: Series::zero(f, prec),
        d: Series::rand_unit(f, prec, rng),
    };
    BKModule::new(f.clone(), 2, e, prec, mats)
}
