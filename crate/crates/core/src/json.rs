//! Wire formats: field elements as coefficient arrays, series as
//! {prec, coeffs}, rationals as "num/den" strings, and the composite module
//! and fixture schemas built from them.

use crate::bk::{BKMat, BKModule};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::series::Series;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesJson {
    pub prec: usize,
    pub coeffs: Vec<Vec<u64>>,
}

impl SeriesJson {
    pub fn from_series(s: &Series) -> Self {
        SeriesJson {
            prec: s.prec,
            coeffs: s.coeffs.clone(),
        }
    }

    pub fn into_series(self, f: &Field) -> Result<Series> {
        for c in &self.coeffs {
            if c.len() != f.deg || c.iter().any(|&x| x >= f.p) {
                return Err(Error::BadInput(
                    "series coefficient with wrong width or out-of-range entry".into(),
                ));
            }
        }
        Ok(Series::from_coeffs(f, self.coeffs, self.prec))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BKModuleJson {
    pub p: u64,
    pub g: usize,
    pub e: usize,
    pub prec: usize,
    /// Monic modulus of the coefficient field over F_p.
    pub field_modulus: Vec<u64>,
    /// One [a, b, c, d] block per index (the u^e factors are implicit).
    pub mats: Vec<[SeriesJson; 4]>,
}

impl BKModuleJson {
    pub fn from_module(m: &BKModule) -> Self {
        BKModuleJson {
            p: m.field.p,
            g: m.g,
            e: m.e,
            prec: m.prec,
            field_modulus: m.field.modulus.clone(),
            mats: m
                .mats
                .iter()
                .map(|blk| {
                    [
                        SeriesJson::from_series(&blk.a),
                        SeriesJson::from_series(&blk.b),
                        SeriesJson::from_series(&blk.c),
                        SeriesJson::from_series(&blk.d),
                    ]
                })
                .collect(),
        }
    }

    pub fn into_module(self) -> Result<BKModule> {
        let field = Field::with_modulus(self.p, self.field_modulus)?;
        let mats = self
            .mats
            .into_iter()
            .map(|[a, b, c, d]| {
                Ok(BKMat {
                    a: a.into_series(&field)?,
                    b: b.into_series(&field)?,
                    c: c.into_series(&field)?,
                    d: d.into_series(&field)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        BKModule::new(field, self.g, self.e, self.prec, mats)
    }
}

/// A truncated Witt polynomial on the wire: sorted (monomial, coefficient)
/// pairs, zero terms absent.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WittPolyJson {
    pub terms: Vec<(Vec<u16>, Vec<u64>)>,
}

impl WittPolyJson {
    pub fn from_poly(p: &crate::windows::WittPoly) -> Self {
        WittPolyJson {
            terms: p
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WindowJson {
    pub p: u64,
    pub g: usize,
    pub cap_m: u32,
    pub cap_d: usize,
    pub kind: crate::windows::WindowKind,
    pub phi_mats: Vec<[WittPolyJson; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi_mats: Option<Vec<[WittPolyJson; 4]>>,
}

impl WindowJson {
    pub fn from_window(w: &crate::windows::Window) -> Self {
        let conv = |m: &crate::windows::WMat| {
            [
                WittPolyJson::from_poly(&m[0]),
                WittPolyJson::from_poly(&m[1]),
                WittPolyJson::from_poly(&m[2]),
                WittPolyJson::from_poly(&m[3]),
            ]
        };
        WindowJson {
            p: w.ring.zq.p,
            g: w.g,
            cap_m: w.ring.zq.m,
            cap_d: w.ring.max_deg,
            kind: w.kind,
            phi_mats: w.phi_mats.iter().map(conv).collect(),
            psi_mats: w.psi_mats.as_ref().map(|ms| ms.iter().map(conv).collect()),
        }
    }
}

/// Versioned fixture with a payload dispatched on `kind` and an optional
/// expected-output block for regression runs. Unknown fields are rejected.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureFile {
    pub version: u32,
    pub kind: String,
    pub cmd: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<serde_json::Value>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn module_round_trip() {
        let f = Field::new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = crate::bk::sample_adapted_module(&f, 2, 4, 24, &[rat(1, 4), rat(1, 2)], &mut rng)
            .unwrap();
        let j = BKModuleJson::from_module(&m);
        let text = serde_json::to_string(&j).unwrap();
        let back: BKModuleJson = serde_json::from_str(&text).unwrap();
        let m2 = back.into_module().unwrap();
        assert_eq!(m, m2);
    }

    #[test]
    fn fixture_rejects_unknown_fields() {
        let bad = r#"{"version":1,"kind":"bk","cmd":["bk"],"surprise":true}"#;
        assert!(serde_json::from_str::<FixtureFile>(bad).is_err());
    }

    #[test]
    fn valpoint_round_trip() {
        let q = crate::hecke::ValPoint::deg2(rat(1, 2), rat(3, 4));
        let text = serde_json::to_string(&q).unwrap();
        let back: crate::hecke::ValPoint = serde_json::from_str(&text).unwrap();
        assert_eq!(q, back);
        let q = crate::hecke::ValPoint::deg2(rat(0, 1), rat(1, 1)).with_coords(
            0,
            rat(1, 1),
            rat(23, 8),
        );
        let text = serde_json::to_string(&q).unwrap();
        let back: crate::hecke::ValPoint = serde_json::from_str(&text).unwrap();
        assert_eq!(q, back);
    }
}
