//! Python bindings: thin JSON-string bridges over the kernel crate, plus a
//! few natively typed conveniences. Rationals cross the boundary as
//! "num/den" strings so exactness survives the trip.

// the pyfunction macro expansion trips this lint on every wrapper
#![allow(clippy::useless_conversion)]

use cansub::bk;
use cansub::continuation;
use cansub::dieudonne;
use cansub::field::Field;
use cansub::hecke;
use cansub::json::{BKModuleJson, WindowJson};
use cansub::newton;
use cansub::rat::{format_rat, parse_rat};
use cansub::windows;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn module_from_json(text: &str) -> PyResult<bk::BKModule> {
    let j: BKModuleJson = serde_json::from_str(text).map_err(err)?;
    j.into_module().map_err(err)
}

fn to_json<T: serde::Serialize>(value: &T) -> PyResult<String> {
    serde_json::to_string(value).map_err(err)
}

/// Partial degrees of a module given as JSON; returns "num/den" strings.
#[pyfunction]
fn bk_degrees(module_json: &str) -> PyResult<Vec<String>> {
    let m = module_from_json(module_json)?;
    let d = bk::bk_degrees(&m).map_err(err)?;
    Ok(d.0.iter().map(format_rat).collect())
}

/// Partial Hodge heights of a module given as JSON.
#[pyfunction]
fn bk_hodge_heights(module_json: &str) -> PyResult<Vec<String>> {
    let m = module_from_json(module_json)?;
    let d = bk::bk_hodge_heights(&m).map_err(err)?;
    Ok(d.0.iter().map(format_rat).collect())
}

/// The distinguished cyclic-subgroup line: (line degrees, subgroup degrees).
#[pyfunction]
fn canonical_subgroup(module_json: &str) -> PyResult<(Vec<String>, Vec<String>)> {
    let m = module_from_json(module_json)?;
    let (line, cdeg) = bk::canonical_subgroup(&m).map_err(err)?;
    bk::verify_phi_stable(&m, &line).map_err(err)?;
    let ldeg = line.deg_line(&m.field).map_err(err)?;
    Ok((
        ldeg.0.iter().map(format_rat).collect(),
        cdeg.0.iter().map(format_rat).collect(),
    ))
}

/// Special line of the given 1-based type indices.
#[pyfunction]
fn special_subgroup(
    module_json: &str,
    type_indices: Vec<usize>,
) -> PyResult<(Vec<String>, Vec<String>)> {
    let m = module_from_json(module_json)?;
    let mut ty = vec![false; m.g];
    for i in type_indices {
        if i == 0 || i > m.g {
            return Err(PyValueError::new_err(format!(
                "index {i} outside 1..={}",
                m.g
            )));
        }
        ty[i - 1] = true;
    }
    let line = bk::special_subgroup(&m, &ty).map_err(err)?;
    bk::verify_phi_stable(&m, &line).map_err(err)?;
    let ldeg = line.deg_line(&m.field).map_err(err)?;
    let sdeg = line.deg_quotient(&m.field).map_err(err)?;
    Ok((
        ldeg.0.iter().map(format_rat).collect(),
        sdeg.0.iter().map(format_rat).collect(),
    ))
}

/// Companion line at the 1-based index i (g = 2 modules).
#[pyfunction]
fn companion_subgroup(module_json: &str, i: usize) -> PyResult<(Vec<String>, Vec<String>)> {
    let m = module_from_json(module_json)?;
    if i == 0 {
        return Err(PyValueError::new_err("i is 1-based"));
    }
    let (line, hdeg) = bk::companion_subgroup_g2(&m, i - 1).map_err(err)?;
    bk::verify_phi_stable(&m, &line).map_err(err)?;
    let ldeg = line.deg_line(&m.field).map_err(err)?;
    Ok((
        ldeg.0.iter().map(format_rat).collect(),
        hdeg.0.iter().map(format_rat).collect(),
    ))
}

/// Cyclic-subgroup degree spectrum at the 1-based index i (g = 2 modules):
/// list of (degree pair, multiplicity).
#[pyfunction]
fn degree_spectrum(module_json: &str, i: usize) -> PyResult<Vec<(Vec<String>, u64)>> {
    let m = module_from_json(module_json)?;
    if i == 0 {
        return Err(PyValueError::new_err("i is 1-based"));
    }
    let classes = bk::subgroup_degree_spectrum_g2(&m, i - 1).map_err(err)?;
    Ok(classes
        .iter()
        .map(|c| (c.degrees.0.iter().map(format_rat).collect(), c.mult))
        .collect())
}

/// Newton-polygon root valuations with multiplicities.
#[pyfunction]
fn newton_slopes(points: Vec<(u64, String)>) -> PyResult<Vec<(String, u64)>> {
    let pts = points
        .iter()
        .map(|(e, v)| parse_rat(v).map(|r| (*e, r)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    let slopes = newton::newton_slopes(&pts).map_err(err)?;
    Ok(slopes
        .iter()
        .map(|s| (format_rat(&s.val), s.mult))
        .collect())
}

/// Weighted degree comparison; returns (per-index flags, hom-possible, iso-forced).
#[pyfunction]
fn raynaud_check(
    p: u64,
    deg_g: Vec<String>,
    deg_h: Vec<String>,
) -> PyResult<(Vec<bool>, bool, bool)> {
    let parse = |v: &[String]| -> PyResult<bk::DegVector> {
        Ok(bk::DegVector(
            v.iter()
                .map(|s| parse_rat(s))
                .collect::<Result<_, _>>()
                .map_err(err)?,
        ))
    };
    let v = bk::raynaud_degree_check(p, &parse(&deg_g)?, &parse(&deg_h)?).map_err(err)?;
    Ok((v.per_index, v.hom_possible, v.iso_forced))
}

/// Deterministically sample an adapted module with prescribed heights.
#[pyfunction]
#[pyo3(signature = (p, g, e, w, seed = 0, prec = None))]
fn sample_module(
    p: u64,
    g: usize,
    e: usize,
    w: Vec<String>,
    seed: u64,
    prec: Option<usize>,
) -> PyResult<String> {
    let field = Field::new(p, g).map_err(err)?;
    let prec = prec.unwrap_or(e * (p as usize + 2) + 4);
    let heights = w
        .iter()
        .map(|s| parse_rat(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = bk::sample_adapted_module(&field, g, e, prec, &heights, &mut rng).map_err(err)?;
    to_json(&BKModuleJson::from_module(&m))
}

/// Enumerate fiber witnesses; returns the full witness list as JSON.
#[pyfunction]
#[pyo3(signature = (kind, p, field_deg = 2, t2 = None))]
fn dieudonne_enumerate(
    kind: &str,
    p: u64,
    field_deg: usize,
    t2: Option<Vec<u64>>,
) -> PyResult<String> {
    let field = Field::new(p, field_deg).map_err(err)?;
    let kind = match kind {
        "superspecial" => dieudonne::ModelKind::Superspecial,
        "supersingular-a1" => dieudonne::ModelKind::SupersingularA1,
        "ordinary" => dieudonne::ModelKind::Ordinary,
        other => return Err(PyValueError::new_err(format!("unknown kind `{other}`"))),
    };
    let t2 = match (&kind, t2) {
        (dieudonne::ModelKind::SupersingularA1, None) => Some(field.gen()),
        (_, t) => t,
    };
    let d = dieudonne::dmod_model(kind, &field, 2, t2.as_ref()).map_err(err)?;
    let ws = dieudonne::enumerate_cyclic_subgroups(&d).map_err(err)?;
    to_json(&ws)
}

/// Region and stratum of a point.
#[pyfunction]
#[pyo3(signature = (point_json, p, prime = 0))]
fn hecke_region(point_json: &str, p: u64, prime: usize) -> PyResult<(String, String)> {
    let q: hecke::ValPoint = serde_json::from_str(point_json).map_err(err)?;
    let c = hecke::region_classify(&q, p, prime).map_err(err)?;
    Ok((format!("{:?}", c.region), c.stratum))
}

/// One application of the correspondence; returns the image multiset as JSON.
#[pyfunction]
#[pyo3(signature = (point_json, p, prime = 0))]
fn hecke_step(point_json: &str, p: u64, prime: usize) -> PyResult<String> {
    let q: hecke::ValPoint = serde_json::from_str(point_json).map_err(err)?;
    let ms = hecke::up_image(&q, p, prime).map_err(err)?;
    to_json(&ms)
}

/// Orbit tree as JSON together with the global monotonicity flag.
#[pyfunction]
#[pyo3(signature = (point_json, p, depth, prime = 0))]
fn hecke_orbit(point_json: &str, p: u64, depth: usize, prime: usize) -> PyResult<(String, bool)> {
    let q: hecke::ValPoint = serde_json::from_str(point_json).map_err(err)?;
    let tree = hecke::orbit(&q, p, prime, depth).map_err(err)?;
    let monotone = hecke::orbit_monotone(&tree);
    Ok((to_json(&tree)?, monotone))
}

/// Partial Hodge heights derived from valuations (canonical or anti locus).
#[pyfunction]
#[pyo3(signature = (point_json, p, prime = 0))]
fn derived_hodge(point_json: &str, p: u64, prime: usize) -> PyResult<Vec<String>> {
    let q: hecke::ValPoint = serde_json::from_str(point_json).map_err(err)?;
    let w = hecke::derived_hodge(&q, p, prime).map_err(err)?;
    Ok(w.iter().map(format_rat).collect())
}

/// Strict slope criterion; returns (classical, first-failure JSON or None).
#[pyfunction]
fn classicality_check(config_json: &str) -> PyResult<(bool, Option<String>)> {
    let s: continuation::SlopeData = serde_json::from_str(config_json).map_err(err)?;
    let v = continuation::classicality_check(&s).map_err(err)?;
    let failure = v.first_failure.as_ref().map(to_json).transpose()?;
    Ok((v.classical, failure))
}

/// Full exponent ledger as JSON; the flag is true when every sign-required
/// entry passes.
#[pyfunction]
#[pyo3(signature = (config_json, n_max = 64))]
fn bound_ledger(config_json: &str, n_max: u64) -> PyResult<(String, bool)> {
    let s: continuation::SlopeData = serde_json::from_str(config_json).map_err(err)?;
    let ledger = continuation::bound_ledger(&s, n_max).map_err(err)?;
    let pass = ledger.all_required_pass();
    Ok((to_json(&ledger)?, pass))
}

/// The step sequences of the edge walks.
#[pyfunction]
fn epsilon_sequence(kind: &str, p: u64, n: u64) -> PyResult<String> {
    let v = match kind {
        "deg2-step2" => continuation::epsilon_deg2(p, n),
        "deg1" => continuation::epsilon_deg1(p, n),
        other => return Err(PyValueError::new_err(format!("unknown kind `{other}`"))),
    };
    Ok(format_rat(&v))
}

/// The universal window with its V-side matrices, as JSON.
#[pyfunction]
#[pyo3(signature = (p, g, cap_m = 3, cap_d = 27))]
fn universal_window(p: u64, g: usize, cap_m: u32, cap_d: usize) -> PyResult<String> {
    let mut w = windows::universal_window(p, g, cap_m, cap_d).map_err(err)?;
    windows::verify_window(&w).map_err(err)?;
    windows::psi_compute(&mut w).map_err(err)?;
    to_json(&WindowJson::from_window(&w))
}

/// Run the sublattice verification grid (m, n in {1,2}^2, both signs);
/// returns true when every case passes.
#[pyfunction]
#[pyo3(signature = (p, g, cap_m = 3, cap_d = 27))]
fn windows_verify(p: u64, g: usize, cap_m: u32, cap_d: usize) -> PyResult<bool> {
    let w = windows::universal_window(p, g, cap_m, cap_d).map_err(err)?;
    windows::verify_window(&w).map_err(err)?;
    for m in 1..=2u32 {
        for n in 1..=2u32 {
            let s = windows::specialize(&w, m, n).map_err(err)?;
            for sign in [windows::Sign::Plus, windows::Sign::Minus] {
                let l = windows::build_sublattice(&s, sign).map_err(err)?;
                let psi = windows::sublattice_psi(&s.ring, &l).map_err(err)?;
                let rep = windows::nilpotence_check(&s.ring, &psi, 2 * g);
                if !rep.in_p {
                    return Ok(false);
                }
            }
        }
    }
    let mut ctl = windows::multiplicative_control_window(p, g, cap_m, cap_d).map_err(err)?;
    windows::psi_compute(&mut ctl).map_err(err)?;
    let rep = windows::nilpotence_check(&ctl.ring, ctl.psi_mats.as_ref().unwrap(), 2 * g);
    Ok(!rep.in_p && !rep.in_p_vars)
}

#[pymodule]
fn cansub_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(bk_degrees, m)?)?;
    m.add_function(wrap_pyfunction!(bk_hodge_heights, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_subgroup, m)?)?;
    m.add_function(wrap_pyfunction!(special_subgroup, m)?)?;
    m.add_function(wrap_pyfunction!(companion_subgroup, m)?)?;
    m.add_function(wrap_pyfunction!(degree_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(newton_slopes, m)?)?;
    m.add_function(wrap_pyfunction!(raynaud_check, m)?)?;
    m.add_function(wrap_pyfunction!(sample_module, m)?)?;
    m.add_function(wrap_pyfunction!(dieudonne_enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(hecke_region, m)?)?;
    m.add_function(wrap_pyfunction!(hecke_step, m)?)?;
    m.add_function(wrap_pyfunction!(hecke_orbit, m)?)?;
    m.add_function(wrap_pyfunction!(derived_hodge, m)?)?;
    m.add_function(wrap_pyfunction!(classicality_check, m)?)?;
    m.add_function(wrap_pyfunction!(bound_ledger, m)?)?;
    m.add_function(wrap_pyfunction!(epsilon_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(universal_window, m)?)?;
    m.add_function(wrap_pyfunction!(windows_verify, m)?)?;
    Ok(())
}
