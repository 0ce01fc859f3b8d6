//! Classical semilinear F/V-modules of p-torsion over a small finite field,
//! with exhaustive enumeration of the cyclic-subgroup witnesses on a fiber.
//! This is the brute-force oracle the valuation dynamics are checked against.

use crate::error::{Error, Result};
use crate::field::{Field, Fq};
use serde::{Deserialize, Serialize};

/// 2x2 matrix over k in row-major order.
pub type Mat2 = [Fq; 4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Superspecial,
    SupersingularA1,
    Ordinary,
}

/// Graded rank-2 module with a sigma-linear F and a sigma^{-1}-linear V.
/// `fmat[i]` is the matrix of F: D_{i-1} -> D_i on coordinates (F applies
/// sigma to coordinates first); `vmat[i]` is the matrix of V: D_{i+1} -> D_i
/// (V applies sigma^{-1} first).
#[derive(Debug, Clone)]
pub struct DieudonneModule {
    pub field: Field,
    pub g: usize,
    pub fmat: Vec<Mat2>,
    pub vmat: Vec<Mat2>,
}

fn mat_mul(f: &Field, a: &Mat2, b: &Mat2) -> Mat2 {
    [
        f.add(&f.mul(&a[0], &b[0]), &f.mul(&a[1], &b[2])),
        f.add(&f.mul(&a[0], &b[1]), &f.mul(&a[1], &b[3])),
        f.add(&f.mul(&a[2], &b[0]), &f.mul(&a[3], &b[2])),
        f.add(&f.mul(&a[2], &b[1]), &f.mul(&a[3], &b[3])),
    ]
}

fn mat_frob(f: &Field, a: &Mat2) -> Mat2 {
    [f.frob(&a[0]), f.frob(&a[1]), f.frob(&a[2]), f.frob(&a[3])]
}

fn mat_is_zero(f: &Field, a: &Mat2) -> bool {
    a.iter().all(|c| f.is_zero(c))
}

impl DieudonneModule {
    pub fn new(field: Field, g: usize, fmat: Vec<Mat2>, vmat: Vec<Mat2>) -> Result<Self> {
        if g == 0 || fmat.len() != g || vmat.len() != g {
            return Err(Error::BadInput(
                "need one F and one V matrix per index".into(),
            ));
        }
        if !field.deg.is_multiple_of(g) {
            return Err(Error::BadInput(format!(
                "coefficient field of degree {} does not contain the degree-{g} subfield",
                field.deg
            )));
        }
        let m = DieudonneModule {
            field,
            g,
            fmat,
            vmat,
        };
        let f = &m.field;
        for i in 0..g {
            // F o V = 0 on D_i -> D_{i-1} -> D_i ... composition on coordinates:
            // F(V(x)) = fmat[i] . sigma( vmat[i-1] . sigma^{-1}(x) )
            let prev = (i + g - 1) % g;
            let fv = mat_mul(f, &m.fmat[i], &mat_frob(f, &m.vmat[prev]));
            if !mat_is_zero(f, &fv) {
                return Err(Error::BadInput(format!("F o V nonzero into index {i}")));
            }
            // V o F = 0 on D_{i-1} -> D_i -> D_{i-1}: sigma(V o F on coords)
            // = sigma(vmat[prev]) hmm: V(F(x)) = vmat[prev] . sigma^{-1}(fmat[i] . sigma(x))
            // vanishes iff sigma(that) = mat_frob(vmat[prev]) ... easier: check
            // sigma-applied form: frob(vmat[prev]) * fmat[i] = 0
            let vf = mat_mul(f, &mat_frob(f, &m.vmat[prev]), &m.fmat[i]);
            if !mat_is_zero(f, &vf) {
                return Err(Error::BadInput(format!(
                    "V o F nonzero out of index {prev}"
                )));
            }
        }
        Ok(m)
    }

    /// Apply F to a coordinate vector sitting at index i-1, landing at index i.
    fn apply_f(&self, i: usize, v: &[Fq; 2]) -> [Fq; 2] {
        let f = &self.field;
        let s = [f.frob(&v[0]), f.frob(&v[1])];
        let m = &self.fmat[i];
        [
            f.add(&f.mul(&m[0], &s[0]), &f.mul(&m[1], &s[1])),
            f.add(&f.mul(&m[2], &s[0]), &f.mul(&m[3], &s[1])),
        ]
    }

    /// Apply V to a coordinate vector sitting at index i+1, landing at index i.
    fn apply_v(&self, i: usize, v: &[Fq; 2]) -> [Fq; 2] {
        let f = &self.field;
        let s = [f.frob_inv(&v[0]), f.frob_inv(&v[1])];
        let m = &self.vmat[i];
        [
            f.add(&f.mul(&m[0], &s[0]), &f.mul(&m[1], &s[1])),
            f.add(&f.mul(&m[2], &s[0]), &f.mul(&m[3], &s[1])),
        ]
    }
}

/// Explicit models over a field containing F_{p^2} (the first two kinds need
/// g = 2; the ordinary split model works for any g).
pub fn dmod_model(
    kind: ModelKind,
    field: &Field,
    g: usize,
    t2: Option<&Fq>,
) -> Result<DieudonneModule> {
    let f = field;
    let z = f.zero();
    let o = f.one();
    match kind {
        ModelKind::Superspecial => {
            // F(e,d) = (0, e_next); V(e,d) = (0, e_prev) per index
            let fm = vec![[z.clone(), o.clone(), z.clone(), z.clone()]; g];
            let vm = vec![[z.clone(), o.clone(), z.clone(), z.clone()]; g];
            DieudonneModule::new(f.clone(), g, fm, vm)
        }
        ModelKind::Ordinary => {
            // split multiplicative + etale: F kills e, fixes d; V fixes e, kills d
            let fm = vec![[z.clone(), z.clone(), z.clone(), o.clone()]; g];
            let vm = vec![[o.clone(), z.clone(), z.clone(), z.clone()]; g];
            DieudonneModule::new(f.clone(), g, fm, vm)
        }
        ModelKind::SupersingularA1 => {
            if g != 2 {
                return Err(Error::UnsupportedKind(
                    "a-number-one model needs g = 2".into(),
                ));
            }
            let t = t2
                .ok_or_else(|| Error::MissingData("unit parameter t2 required".into()))?
                .clone();
            if f.is_zero(&t) {
                return Err(Error::BadInput("t2 must be a unit".into()));
            }
            // index 1 (0-based) receives F from index 0 with matrix [0 1; 0 t2];
            // index 0 receives F from index 1 with matrix [0 1; 0 0].
            // V into index 1 (from index 0): [0 1; 0 0];
            // V into index 0 (from index 1): [-t2^{1/p} 1; 0 0].
            let tinv_frob = f.neg(&f.frob_inv(&t));
            let fm = vec![
                [z.clone(), o.clone(), z.clone(), z.clone()],
                [z.clone(), o.clone(), z.clone(), t.clone()],
            ];
            let vm = vec![
                [tinv_frob, o.clone(), z.clone(), z.clone()],
                [z.clone(), o.clone(), z.clone(), z.clone()],
            ];
            DieudonneModule::new(f.clone(), g, fm, vm)
        }
    }
}

/// A projective line in k^2, normalized so the first nonzero coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Line(pub [Fq; 2]);

impl Line {
    fn normalize(f: &Field, v: &[Fq; 2]) -> Option<Line> {
        if !f.is_zero(&v[0]) {
            let inv = f.inv(&v[0]).ok()?;
            Some(Line([f.one(), f.mul(&v[1], &inv)]))
        } else if !f.is_zero(&v[1]) {
            let inv = f.inv(&v[1]).ok()?;
            Some(Line([f.mul(&v[0], &inv), f.one()]))
        } else {
            None
        }
    }

    fn contains(&self, f: &Field, v: &[Fq; 2]) -> bool {
        // v proportional to self.0
        let det = f.sub(&f.mul(&self.0[0], &v[1]), &f.mul(&self.0[1], &v[0]));
        f.is_zero(&det)
    }
}

fn all_lines(f: &Field) -> Vec<Line> {
    let mut out = Vec::new();
    for x in f.elements() {
        out.push(Line([f.one(), x]));
    }
    out.push(Line([f.zero(), f.one()]));
    out.sort();
    out
}

/// Immersed-line tuple for one cyclic subgroup, with its classification tags.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CyclicSubgroupWitness {
    /// Normalized coordinates of the line at each index.
    pub lines: Vec<[Vec<u64>; 2]>,
    /// Indices where the line is ker V = im F.
    pub phi_set: Vec<usize>,
    /// Indices where the line is ker F = im V.
    pub eta_set: Vec<usize>,
    /// eta /\ sigma^{-1}(phi): the critical indices.
    pub i_set: Vec<usize>,
    /// dim omega at each index of the subgroup cut out by the lines.
    pub omega_dims: Vec<u8>,
    /// dim omega at each index of its Cartier dual.
    pub omega_dual_dims: Vec<u8>,
    /// Order-p^2 group type when g = 2.
    pub group_type: Option<GroupType>,
    /// Stratum label when g = 2.
    pub stratum: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupType {
    AlphaPxAlphaP,
    AlphaP2,
    AlphaP2Dual,
    Alpha,
}

/// ker of the semilinear map out of index i (as a line), or None if the map
/// out of index i is zero (kernel is everything).
fn kernel_line_f(d: &DieudonneModule, i: usize) -> Option<Line> {
    // F out of D_i lands at i+1 with matrix fmat[i+1]; solve M sigma(v) = 0
    let f = &d.field;
    let next = (i + 1) % d.g;
    let m = &d.fmat[next];
    kernel_of(f, m)
        .map(|l| Line([f.frob_inv(&l.0[0]), f.frob_inv(&l.0[1])]))
        .and_then(|v| Line::normalize(f, &v.0))
}

fn kernel_line_v(d: &DieudonneModule, i: usize) -> Option<Line> {
    // V out of D_i lands at i-1 with matrix vmat[i-1]; solve M sigma^{-1}(v) = 0
    let f = &d.field;
    let prev = (i + d.g - 1) % d.g;
    let m = &d.vmat[prev];
    kernel_of(f, m)
        .map(|l| Line([f.frob(&l.0[0]), f.frob(&l.0[1])]))
        .and_then(|v| Line::normalize(f, &v.0))
}

/// One-dimensional kernel of a rank-1 2x2 matrix over k (None if invertible
/// or zero).
fn kernel_of(f: &Field, m: &Mat2) -> Option<Line> {
    let det = f.sub(&f.mul(&m[0], &m[3]), &f.mul(&m[1], &m[2]));
    if !f.is_zero(&det) {
        return None;
    }
    if mat_is_zero(f, m) {
        return None;
    }
    // a nonzero row (r0, r1) gives the kernel (r1, -r0)
    let (r0, r1) = if !f.is_zero(&m[0]) || !f.is_zero(&m[1]) {
        (m[0].clone(), m[1].clone())
    } else {
        (m[2].clone(), m[3].clone())
    };
    Line::normalize(f, &[r1, f.neg(&r0)])
}

/// All tuples of lines stable under F and V, with classification tags.
/// Deterministic output: lexicographic in the normalized coordinates.
pub fn enumerate_cyclic_subgroups(d: &DieudonneModule) -> Result<Vec<CyclicSubgroupWitness>> {
    let f = &d.field;
    if f.order() > 10_000 {
        return Err(Error::TooLarge(format!(
            "field of order {} too big to sweep",
            f.order()
        )));
    }
    let lines = all_lines(f);
    let total = (lines.len() as u64).checked_pow(d.g as u32);
    if total.is_none() || total.unwrap() > 2_000_000 {
        return Err(Error::TooLarge("too many candidate tuples".into()));
    }

    let mut found = Vec::new();
    let mut idx = vec![0usize; d.g];
    'outer: loop {
        let tuple: Vec<&Line> = idx.iter().map(|&k| &lines[k]).collect();
        let mut ok = true;
        for i in 0..d.g {
            let prev = (i + d.g - 1) % d.g;
            // F(L_{i-1}) into index i
            let img = d.apply_f(i, &tuple[prev].0);
            if !(f.is_zero(&img[0]) && f.is_zero(&img[1])) && !tuple[i].contains(f, &img) {
                ok = false;
                break;
            }
            // V(L_{i+1})... check V(L_i) lands in L_{i-1}: V out of index i
            let vimg = d.apply_v(prev, &tuple[i].0);
            if !(f.is_zero(&vimg[0]) && f.is_zero(&vimg[1])) && !tuple[prev].contains(f, &vimg) {
                ok = false;
                break;
            }
        }
        if ok {
            found.push(idx.clone());
        }
        // odometer
        let mut k = d.g;
        loop {
            if k == 0 {
                break 'outer;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < lines.len() {
                break;
            }
            idx[k] = 0;
        }
    }

    let mut out = Vec::with_capacity(found.len());
    for idxs in found {
        let tuple: Vec<Line> = idxs.iter().map(|&k| lines[k].clone()).collect();
        out.push(classify_tuple(d, &tuple));
    }
    Ok(out)
}

fn classify_tuple(d: &DieudonneModule, tuple: &[Line]) -> CyclicSubgroupWitness {
    let f = &d.field;
    let g = d.g;
    let mut phi_set = Vec::new();
    let mut eta_set = Vec::new();
    for i in 0..g {
        if let Some(kv) = kernel_line_v(d, i) {
            if kv == tuple[i] {
                phi_set.push(i);
            }
        }
        if let Some(kf) = kernel_line_f(d, i) {
            if kf == tuple[i] {
                eta_set.push(i);
            }
        }
    }
    let i_set: Vec<usize> = eta_set
        .iter()
        .copied()
        .filter(|&i| phi_set.contains(&((i + 1) % g)))
        .collect();

    // omega dims of the subgroup: 1 - dim V(L_{i+1}) at index i;
    // dual omega dims: 1 - dim F(L_{i-1}) at index i.
    let mut omega_dims = Vec::with_capacity(g);
    let mut omega_dual_dims = Vec::with_capacity(g);
    for i in 0..g {
        let next = (i + 1) % g;
        let prev = (i + g - 1) % g;
        let vimg = d.apply_v(i, &tuple[next].0);
        omega_dims.push(if f.is_zero(&vimg[0]) && f.is_zero(&vimg[1]) {
            1
        } else {
            0
        });
        let fimg = d.apply_f(i, &tuple[prev].0);
        omega_dual_dims.push(if f.is_zero(&fimg[0]) && f.is_zero(&fimg[1]) {
            1
        } else {
            0
        });
    }

    let group_type = if g == 2 {
        let s: u8 = omega_dims.iter().sum();
        let sd: u8 = omega_dual_dims.iter().sum();
        // local-local types only; multiplicative or etale witnesses fall outside
        match (s, sd) {
            (2, 2) => Some(GroupType::AlphaPxAlphaP),
            (1, 2) => Some(GroupType::AlphaP2),
            (2, 1) => Some(GroupType::AlphaP2Dual),
            (1, 1) => Some(GroupType::Alpha),
            _ => None,
        }
    } else {
        None
    };

    let stratum = if g == 2 {
        Some(stratum_label_g2(&phi_set, &eta_set))
    } else {
        None
    };

    CyclicSubgroupWitness {
        lines: tuple
            .iter()
            .map(|l| [l.0[0].clone(), l.0[1].clone()])
            .collect(),
        phi_set,
        eta_set,
        i_set,
        omega_dims,
        omega_dual_dims,
        group_type,
        stratum,
    }
}

/// The nine stratum names for g = 2, printed with 1-based indices.
pub fn stratum_label_g2(phi: &[usize], eta: &[usize]) -> String {
    let name = |s: &[usize]| match s {
        [] => "∅".to_string(),
        [a] => format!("{}", a + 1),
        _ => "B".to_string(),
    };
    format!("W({},{})", name(phi), name(eta))
}

/// Recompute the classification tags of a witness against a module.
pub fn classify_pair(
    d: &DieudonneModule,
    w: &CyclicSubgroupWitness,
) -> Result<CyclicSubgroupWitness> {
    let f = &d.field;
    if w.lines.len() != d.g {
        return Err(Error::BadInput(
            "witness and module have different gradings".into(),
        ));
    }
    let tuple: Vec<Line> = w
        .lines
        .iter()
        .map(|l| {
            Line::normalize(f, &[l[0].clone(), l[1].clone()])
                .ok_or_else(|| Error::BadInput("zero vector is not a line".into()))
        })
        .collect::<Result<_>>()?;
    Ok(classify_tuple(d, &tuple))
}

/// Admissibility of a (phi, eta) pair: eta contains sigma^{-1}(phi^c).
pub fn is_admissible(g: usize, phi: &[usize], eta: &[usize]) -> bool {
    (0..g).all(|b| phi.contains(&b) || eta.contains(&((b + g - 1) % g)))
}
