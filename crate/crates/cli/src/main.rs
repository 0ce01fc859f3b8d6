//! One binary, one subcommand per kernel family. Exit codes: 0 on success or
//! a passing check, 1 on a failing check, 2 on input errors.

mod svg;

use cansub::bk;
use cansub::continuation;
use cansub::dieudonne;
use cansub::field::Field;
use cansub::hecke;
use cansub::json::{BKModuleJson, WindowJson};
use cansub::newton;
use cansub::rat::{format_rat, parse_rat, Rat};
use cansub::windows;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "cansub",
    about = "Exact-arithmetic kernels for canonical subgroups, Hecke valuation dynamics and deformation windows",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Adapted-basis module solvers
    Bk {
        #[command(subcommand)]
        cmd: BkCmd,
    },
    /// Brute-force fiber enumeration
    Dieudonne {
        #[command(subcommand)]
        cmd: DieudonneCmd,
    },
    /// Valuation dynamics of the Hecke correspondence
    Hecke {
        #[command(subcommand)]
        cmd: HeckeCmd,
    },
    /// Slope ledgers for the classicality criterion
    Continuation {
        #[command(subcommand)]
        cmd: ContinuationCmd,
    },
    /// Deformation windows over truncated Witt-polynomial rings
    Windows {
        #[command(subcommand)]
        cmd: WindowsCmd,
    },
}

#[derive(Args)]
struct JsonFlag {
    /// Emit machine-readable JSON instead of the table
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum BkCmd {
    /// Partial degrees of a module
    Degrees {
        file: PathBuf,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Partial Hodge heights
    Hodge {
        file: PathBuf,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// The distinguished cyclic-subgroup line and its quotient degrees
    Canonical {
        file: PathBuf,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Special line of the given type (comma-separated 1-based indices)
    Special {
        file: PathBuf,
        #[arg(long = "type", value_name = "I")]
        type_i: String,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// The g = 2 companion line at index --i (1-based)
    Companion {
        file: PathBuf,
        #[arg(long)]
        i: usize,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// The g = 2 cyclic-subgroup degree spectrum at index --i (1-based)
    Spectrum {
        file: PathBuf,
        #[arg(long)]
        i: usize,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Newton-polygon root valuations of (exponent, valuation) points
    Newton {
        file: PathBuf,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Weighted degree comparison of two subgroup degree vectors
    Raynaud {
        file: PathBuf,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Sample a module with prescribed heights (deterministic under --seed)
    Sample {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        g: usize,
        #[arg(long)]
        e: usize,
        #[arg(long)]
        prec: Option<usize>,
        /// Comma-separated heights, e.g. 1/4,1/2
        #[arg(long)]
        w: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = SampleShape::Adapted)]
        shape: SampleShape,
        /// Type indices for --shape special (1-based, comma-separated)
        #[arg(long = "type")]
        type_i: Option<String>,
        /// Index for --shape companion / spectrum (1-based)
        #[arg(long)]
        i: Option<usize>,
        /// Controlling valuation for --shape spectrum ("none" for vanishing)
        #[arg(long)]
        alpha: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleShape {
    Adapted,
    Special,
    Companion,
    Spectrum,
}

#[derive(Subcommand)]
enum DieudonneCmd {
    /// Enumerate all cyclic-subgroup witnesses of a model
    Enumerate {
        #[arg(long, value_enum)]
        kind: ModelArg,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        g: usize,
        /// Extension degree of the coefficient field (defaults to 2)
        #[arg(long, default_value_t = 2)]
        field_deg: usize,
        /// Unit parameter for the a-number-one model, as coefficients "c0,c1"
        #[arg(long)]
        t2: Option<String>,
        #[command(flatten)]
        json: JsonFlag,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Superspecial,
    SupersingularA1,
    Ordinary,
}

#[derive(Subcommand)]
enum HeckeCmd {
    /// Region and stratum of a point
    Region {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        prime: usize,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// One application of the correspondence
    Step {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        prime: usize,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Orbit tree to the given depth with monotonicity flags
    Orbit {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        prime: usize,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Partial Hodge heights derived from the valuations
    Hodge {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        prime: usize,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Render the valuation square (optionally with a point or orbit overlay)
    Square {
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 0)]
        prime: usize,
        /// Overlay the orbit to this depth instead of a single marker
        #[arg(long)]
        orbit_depth: Option<usize>,
        /// Output path; stdout when omitted
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ContinuationCmd {
    /// Evaluate the slope criterion and the full exponent ledger
    Check {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = continuation::N_MAX_DEFAULT)]
        n_max: u64,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// The step sequences of the edge walks, with partial sums
    Epsilon {
        #[arg(long, value_enum)]
        kind: EpsKind,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        json: JsonFlag,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EpsKind {
    Deg2Step2,
    Deg1,
}

#[derive(Subcommand)]
enum WindowsCmd {
    /// The universal display
    Universal {
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Base change to the (m, n) coordinate subring
    Specialize {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// The sign-distinguished sublattice of a specialization
    Sublattice {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum)]
        sign: SignArg,
        #[command(flatten)]
        json: JsonFlag,
    },
    /// Run the full assertion suite over (m, n) in {1, 2}^2 and both signs
    Verify {
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        json: JsonFlag,
    },
}

#[derive(Args)]
struct RingArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    g: usize,
    /// p-adic precision
    #[arg(long, default_value_t = 3)]
    cap_m: u32,
    /// total-degree truncation
    #[arg(long, default_value_t = 27)]
    cap_d: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

/// Point file: the prime and the valuation data.
#[derive(Debug, Serialize, Deserialize)]
struct HeckeInput {
    p: u64,
    point: hecke::ValPoint,
}

#[derive(Debug, Deserialize)]
struct NewtonInput {
    points: Vec<(u64, String)>,
}

#[derive(Debug, Deserialize)]
struct RaynaudInput {
    p: u64,
    deg_g: Vec<String>,
    deg_h: Vec<String>,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit<T: Serialize>(json: bool, value: &T, table: impl FnOnce(&T)) {
    if json {
        println!("{}", serde_json::to_string_pretty(value).unwrap());
    } else {
        table(value);
    }
}

fn parse_rat_list(s: &str) -> Result<Vec<Rat>, String> {
    s.split(',').map(parse_rat).collect()
}

fn parse_type_set(s: &str, g: usize) -> Result<Vec<bool>, String> {
    let mut ty = vec![false; g];
    for part in s.split(',') {
        let idx: usize = part
            .trim()
            .parse()
            .map_err(|e| format!("bad index `{part}`: {e}"))?;
        if idx == 0 || idx > g {
            return Err(format!("index {idx} outside 1..={g}"));
        }
        ty[idx - 1] = true;
    }
    Ok(ty)
}

fn run() -> Result<bool, String> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Bk { cmd } => run_bk(cmd),
        Cmd::Dieudonne { cmd } => run_dieudonne(cmd),
        Cmd::Hecke { cmd } => run_hecke(cmd),
        Cmd::Continuation { cmd } => run_continuation(cmd),
        Cmd::Windows { cmd } => run_windows(cmd),
    }
}

fn load_module(path: &PathBuf) -> Result<bk::BKModule, String> {
    let j: BKModuleJson = read_json(path)?;
    j.into_module().map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct DegOut {
    degrees: Vec<String>,
}

#[derive(Serialize)]
struct LineOut {
    line_degrees: Vec<String>,
    subgroup_degrees: Vec<String>,
}

fn line_out(m: &bk::BKModule, line: &bk::BKLine, sub: &bk::DegVector) -> Result<LineOut, String> {
    Ok(LineOut {
        line_degrees: line
            .deg_line(&m.field)
            .map_err(|e| e.to_string())?
            .0
            .iter()
            .map(format_rat)
            .collect(),
        subgroup_degrees: sub.0.iter().map(format_rat).collect(),
    })
}

fn print_line_out(o: &LineOut) {
    println!("line degrees      {}", o.line_degrees.join(", "));
    println!("subgroup degrees  {}", o.subgroup_degrees.join(", "));
}

fn run_bk(cmd: BkCmd) -> Result<bool, String> {
    match cmd {
        BkCmd::Degrees { file, json } => {
            let m = load_module(&file)?;
            let d = bk::bk_degrees(&m).map_err(|e| e.to_string())?;
            let out = DegOut {
                degrees: d.0.iter().map(format_rat).collect(),
            };
            emit(json.json, &out, |o| {
                for (i, v) in o.degrees.iter().enumerate() {
                    println!("deg_{}  {v}", i + 1);
                }
            });
            Ok(true)
        }
        BkCmd::Hodge { file, json } => {
            let m = load_module(&file)?;
            let d = bk::bk_hodge_heights(&m).map_err(|e| e.to_string())?;
            let out = DegOut {
                degrees: d.0.iter().map(format_rat).collect(),
            };
            emit(json.json, &out, |o| {
                for (i, v) in o.degrees.iter().enumerate() {
                    println!("w_{}  {v}", i + 1);
                }
            });
            Ok(true)
        }
        BkCmd::Canonical { file, json } => {
            let m = load_module(&file)?;
            let (line, cdeg) = bk::canonical_subgroup(&m).map_err(|e| e.to_string())?;
            bk::verify_phi_stable(&m, &line).map_err(|e| e.to_string())?;
            let out = line_out(&m, &line, &cdeg)?;
            emit(json.json, &out, print_line_out);
            Ok(true)
        }
        BkCmd::Special { file, type_i, json } => {
            let m = load_module(&file)?;
            let ty = parse_type_set(&type_i, m.g)?;
            let line = bk::special_subgroup(&m, &ty).map_err(|e| e.to_string())?;
            bk::verify_phi_stable(&m, &line).map_err(|e| e.to_string())?;
            let sub = line.deg_quotient(&m.field).map_err(|e| e.to_string())?;
            let out = line_out(&m, &line, &sub)?;
            emit(json.json, &out, print_line_out);
            Ok(true)
        }
        BkCmd::Companion { file, i, json } => {
            let m = load_module(&file)?;
            if i == 0 {
                return Err("--i is 1-based".into());
            }
            let (line, hdeg) = bk::companion_subgroup_g2(&m, i - 1).map_err(|e| e.to_string())?;
            bk::verify_phi_stable(&m, &line).map_err(|e| e.to_string())?;
            let out = line_out(&m, &line, &hdeg)?;
            emit(json.json, &out, print_line_out);
            Ok(true)
        }
        BkCmd::Spectrum { file, i, json } => {
            let m = load_module(&file)?;
            if i == 0 {
                return Err("--i is 1-based".into());
            }
            let classes = bk::subgroup_degree_spectrum_g2(&m, i - 1).map_err(|e| e.to_string())?;
            #[derive(Serialize)]
            struct SpecOut {
                classes: Vec<(Vec<String>, u64)>,
            }
            let out = SpecOut {
                classes: classes
                    .iter()
                    .map(|c| (c.degrees.0.iter().map(format_rat).collect(), c.mult))
                    .collect(),
            };
            emit(json.json, &out, |o| {
                for (degs, mult) in &o.classes {
                    println!("x{mult}  ({})", degs.join(", "));
                }
            });
            Ok(true)
        }
        BkCmd::Newton { file, json } => {
            let input: NewtonInput = read_json(&file)?;
            let pts: Vec<(u64, Rat)> = input
                .points
                .iter()
                .map(|(e, v)| parse_rat(v).map(|r| (*e, r)))
                .collect::<Result<_, _>>()?;
            let slopes = newton::newton_slopes(&pts).map_err(|e| e.to_string())?;
            #[derive(Serialize)]
            struct NewtonOut {
                slopes: Vec<(String, u64)>,
            }
            let out = NewtonOut {
                slopes: slopes
                    .iter()
                    .map(|s| (format_rat(&s.val), s.mult))
                    .collect(),
            };
            emit(json.json, &out, |o| {
                for (v, m) in &o.slopes {
                    println!("valuation {v}  multiplicity {m}");
                }
            });
            Ok(true)
        }
        BkCmd::Raynaud { file, json } => {
            let input: RaynaudInput = read_json(&file)?;
            let dg = bk::DegVector(
                input
                    .deg_g
                    .iter()
                    .map(|s| parse_rat(s))
                    .collect::<Result<_, _>>()?,
            );
            let dh = bk::DegVector(
                input
                    .deg_h
                    .iter()
                    .map(|s| parse_rat(s))
                    .collect::<Result<_, _>>()?,
            );
            let v = bk::raynaud_degree_check(input.p, &dg, &dh).map_err(|e| e.to_string())?;
            emit(json.json, &v, |v| {
                for (i, ok) in v.per_index.iter().enumerate() {
                    println!("index {}  {}", i + 1, if *ok { "holds" } else { "fails" });
                }
                println!("hom-possible  {}", v.hom_possible);
                println!("iso-forced    {}", v.iso_forced);
            });
            Ok(v.hom_possible)
        }
        BkCmd::Sample {
            p,
            g,
            e,
            prec,
            w,
            seed,
            shape,
            type_i,
            i,
            alpha,
        } => {
            let field = Field::new(p, g).map_err(|e| e.to_string())?;
            let prec = prec.unwrap_or(e * (p as usize + 2) + 4);
            let heights = parse_rat_list(&w)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = match shape {
                SampleShape::Adapted => {
                    bk::sample_adapted_module(&field, g, e, prec, &heights, &mut rng)
                }
                SampleShape::Special => {
                    let ty = parse_type_set(
                        type_i
                            .as_deref()
                            .ok_or("--type required for the special shape")?,
                        g,
                    )?;
                    bk::sample_special_module(&field, g, e, prec, &ty, &heights, &mut rng)
                }
                SampleShape::Companion => bk::sample_companion_module(
                    &field,
                    e,
                    prec,
                    i.ok_or("--i required")?.saturating_sub(1),
                    heights.first().ok_or("--w must carry the next height")?,
                    &mut rng,
                ),
                SampleShape::Spectrum => {
                    let a = match alpha.as_deref() {
                        None | Some("none") => None,
                        Some(s) => Some(parse_rat(s)?),
                    };
                    bk::sample_spectrum_module(
                        &field,
                        e,
                        prec,
                        i.ok_or("--i required")?.saturating_sub(1),
                        a.as_ref(),
                        &mut rng,
                    )
                }
            }
            .map_err(|e| e.to_string())?;
            println!(
                "{}",
                serde_json::to_string_pretty(&BKModuleJson::from_module(&m)).unwrap()
            );
            Ok(true)
        }
    }
}

fn run_dieudonne(cmd: DieudonneCmd) -> Result<bool, String> {
    match cmd {
        DieudonneCmd::Enumerate {
            kind,
            p,
            g,
            field_deg,
            t2,
            json,
        } => {
            let field = Field::new(p, field_deg).map_err(|e| e.to_string())?;
            let kind = match kind {
                ModelArg::Superspecial => dieudonne::ModelKind::Superspecial,
                ModelArg::SupersingularA1 => dieudonne::ModelKind::SupersingularA1,
                ModelArg::Ordinary => dieudonne::ModelKind::Ordinary,
            };
            let t2_el = match t2 {
                Some(s) => Some(
                    s.split(',')
                        .map(|x| x.trim().parse::<u64>().map_err(|e| e.to_string()))
                        .collect::<Result<Vec<_>, _>>()?,
                ),
                None => match kind {
                    dieudonne::ModelKind::SupersingularA1 => Some(field.gen()),
                    _ => None,
                },
            };
            let d = dieudonne::dmod_model(kind, &field, g, t2_el.as_ref())
                .map_err(|e| e.to_string())?;
            let ws = dieudonne::enumerate_cyclic_subgroups(&d).map_err(|e| e.to_string())?;
            #[derive(Serialize)]
            struct EnumOut {
                count: usize,
                witnesses: Vec<dieudonne::CyclicSubgroupWitness>,
            }
            let out = EnumOut {
                count: ws.len(),
                witnesses: ws,
            };
            emit(json.json, &out, |o| {
                println!("witnesses  {}", o.count);
                for w in &o.witnesses {
                    println!(
                        "{}  type {:?}  omega {:?}  phi {:?}  eta {:?}",
                        w.stratum.as_deref().unwrap_or("-"),
                        w.group_type,
                        w.omega_dims,
                        w.phi_set.iter().map(|i| i + 1).collect::<Vec<_>>(),
                        w.eta_set.iter().map(|i| i + 1).collect::<Vec<_>>(),
                    );
                }
            });
            Ok(true)
        }
    }
}

fn run_hecke(cmd: HeckeCmd) -> Result<bool, String> {
    match cmd {
        HeckeCmd::Region { file, prime, json } => {
            let input: HeckeInput = read_json(&file)?;
            let c =
                hecke::region_classify(&input.point, input.p, prime).map_err(|e| e.to_string())?;
            emit(json.json, &c, |c| {
                println!("region   {:?}", c.region);
                println!("stratum  {}", c.stratum);
            });
            Ok(true)
        }
        HeckeCmd::Step { file, prime, json } => {
            let input: HeckeInput = read_json(&file)?;
            let ms = hecke::up_image(&input.point, input.p, prime).map_err(|e| e.to_string())?;
            emit(json.json, &ms, |ms| {
                for e in &ms.entries {
                    let nu = match &e.point.primes[prime] {
                        hecke::PrimeData::One { nu } => format_rat(nu),
                        hecke::PrimeData::Two { nu, .. } => {
                            format!("({}, {})", format_rat(&nu[0]), format_rat(&nu[1]))
                        }
                    };
                    println!("x{}  {nu}  [{:?}]", e.mult, e.branch);
                }
            });
            Ok(true)
        }
        HeckeCmd::Orbit {
            file,
            prime,
            depth,
            json,
        } => {
            let input: HeckeInput = read_json(&file)?;
            let tree =
                hecke::orbit(&input.point, input.p, prime, depth).map_err(|e| e.to_string())?;
            let monotone = hecke::orbit_monotone(&tree);
            #[derive(Serialize)]
            struct OrbitOut {
                monotone: bool,
                tree: hecke::OrbitNode,
            }
            let out = OrbitOut { monotone, tree };
            let prime_copy = prime;
            emit(json.json, &out, |o| {
                fn walk(n: &hecke::OrbitNode, depth: usize, prime: usize) {
                    let nu = match &n.point.primes[prime] {
                        hecke::PrimeData::One { nu } => format_rat(nu),
                        hecke::PrimeData::Two { nu, .. } => {
                            format!("({}, {})", format_rat(&nu[0]), format_rat(&nu[1]))
                        }
                    };
                    println!(
                        "{}x{} {} [{:?}] sums [{}]{}",
                        "  ".repeat(depth),
                        n.mult,
                        nu,
                        n.status,
                        n.sums.join(", "),
                        n.tower_level
                            .as_deref()
                            .map(|t| format!(" tower<= {t}"))
                            .unwrap_or_default()
                    );
                    for c in &n.children {
                        walk(c, depth + 1, prime);
                    }
                }
                println!("monotone  {}", o.monotone);
                walk(&o.tree, 0, prime_copy);
            });
            Ok(monotone)
        }
        HeckeCmd::Hodge { file, prime, json } => {
            let input: HeckeInput = read_json(&file)?;
            let w =
                hecke::derived_hodge(&input.point, input.p, prime).map_err(|e| e.to_string())?;
            let out = DegOut {
                degrees: w.iter().map(format_rat).collect(),
            };
            emit(json.json, &out, |o| {
                for (i, v) in o.degrees.iter().enumerate() {
                    println!("w_{}  {v}", i + 1);
                }
            });
            Ok(true)
        }
        HeckeCmd::Square {
            file,
            p,
            prime,
            orbit_depth,
            svg: out,
        } => {
            let (p, point) = match &file {
                Some(f) => {
                    let input: HeckeInput = read_json(f)?;
                    (input.p, Some(input.point))
                }
                None => (p, None),
            };
            let style = svg::SquareStyle { p };
            let orbit_tree = match (&point, orbit_depth) {
                (Some(q), Some(d)) => {
                    Some(hecke::orbit(q, p, prime, d).map_err(|e| e.to_string())?)
                }
                _ => None,
            };
            let text = svg::svg_defs_patch(svg::render_square(
                &style,
                point.as_ref().filter(|_| orbit_tree.is_none()),
                orbit_tree.as_ref(),
                prime,
            ));
            match out {
                Some(path) => std::fs::write(&path, text).map_err(|e| e.to_string())?,
                None => print!("{text}"),
            }
            Ok(true)
        }
    }
}

fn run_continuation(cmd: ContinuationCmd) -> Result<bool, String> {
    match cmd {
        ContinuationCmd::Epsilon { kind, p, n, json } => {
            let (value, partial) = match kind {
                EpsKind::Deg2Step2 => (
                    continuation::epsilon_deg2(p, n),
                    continuation::epsilon_partial_sum_deg2(p, n),
                ),
                EpsKind::Deg1 => (
                    continuation::epsilon_deg1(p, n),
                    continuation::epsilon_partial_sum_deg1(p, n),
                ),
            };
            #[derive(Serialize)]
            struct EpsOut {
                value: String,
                partial_sum: String,
            }
            let out = EpsOut {
                value: format_rat(&value),
                partial_sum: format_rat(&partial),
            };
            emit(json.json, &out, |o| {
                println!("epsilon_n     {}", o.value);
                println!("partial sum   {}", o.partial_sum);
            });
            Ok(true)
        }
        ContinuationCmd::Check {
            config,
            n_max,
            json,
        } => {
            let s: continuation::SlopeData = read_json(&config)?;
            let verdict = continuation::classicality_check(&s).map_err(|e| e.to_string())?;
            let ledger = continuation::bound_ledger(&s, n_max).map_err(|e| e.to_string())?;
            #[derive(Serialize)]
            struct CheckOut {
                classical: bool,
                first_failure: Option<continuation::SlopeFailure>,
                ledger_pass: bool,
                first_ledger_failure: Option<String>,
                ledger: continuation::BoundLedger,
            }
            let out = CheckOut {
                classical: verdict.classical,
                first_failure: verdict.first_failure,
                ledger_pass: ledger.all_required_pass(),
                first_ledger_failure: ledger.first_failure().map(|e| e.name.clone()),
                ledger,
            };
            let ok = out.classical && out.ledger_pass;
            emit(json.json, &out, |o| {
                println!(
                    "slope criterion  {}",
                    if o.classical { "pass" } else { "fail" }
                );
                if let Some(f) = &o.first_failure {
                    println!(
                        "  first failure: prime {} beta {} needs v < {}, got {}",
                        f.prime + 1,
                        f.beta + 1,
                        format_rat(&f.bound),
                        format_rat(&f.slope)
                    );
                }
                println!(
                    "ledger           {}",
                    if o.ledger_pass { "pass" } else { "fail" }
                );
                if let Some(name) = &o.first_ledger_failure {
                    println!("  first failing entry: {name}");
                }
                for e in &o.ledger.entries {
                    println!(
                        "  [{}] prime {} {:<28} {:>14}  {:?}",
                        if e.pass { "ok" } else { "XX" },
                        e.prime + 1,
                        e.name,
                        format_rat(&e.value),
                        e.requirement
                    );
                }
            });
            Ok(ok)
        }
    }
}

#[derive(Serialize)]
struct WindowsVerifyOut {
    cases: Vec<WindowsCase>,
    pass: bool,
}

#[derive(Serialize)]
struct WindowsCase {
    m: u32,
    n: u32,
    sign: String,
    stable: bool,
    display_exact: bool,
    psi_identity: bool,
    nilpotent_after_2g: bool,
    control_fails: bool,
    omega_divisors: Vec<u32>,
    omega_expected: Vec<u32>,
    pass: bool,
}

fn run_windows(cmd: WindowsCmd) -> Result<bool, String> {
    match cmd {
        WindowsCmd::Universal { ring, json } => {
            let mut w = windows::universal_window(ring.p, ring.g, ring.cap_m, ring.cap_d)
                .map_err(|e| e.to_string())?;
            windows::verify_window(&w).map_err(|e| e.to_string())?;
            windows::psi_compute(&mut w).map_err(|e| e.to_string())?;
            let out = WindowJson::from_window(&w);
            emit(json.json, &out, |o| {
                println!("universal window: p = {}, g = {}", o.p, o.g);
                println!("structure matrix into each index: (0, 1; p, T_i)");
                println!("V-side matrix at each index:      (-T_i, 1; p, 0)");
            });
            Ok(true)
        }
        WindowsCmd::Specialize { ring, m, n, json } => {
            let w = windows::universal_window(ring.p, ring.g, ring.cap_m, ring.cap_d)
                .map_err(|e| e.to_string())?;
            let mut s = windows::specialize(&w, m, n).map_err(|e| e.to_string())?;
            windows::verify_window(&s).map_err(|e| e.to_string())?;
            windows::psi_compute(&mut s).map_err(|e| e.to_string())?;
            let out = WindowJson::from_window(&s);
            emit(json.json, &out, |o| {
                println!(
                    "specialized window: p = {}, g = {}, (m, n) = ({m}, {n})",
                    o.p, o.g
                );
            });
            Ok(true)
        }
        WindowsCmd::Sublattice {
            ring,
            m,
            n,
            sign,
            json,
        } => {
            let w = windows::universal_window(ring.p, ring.g, ring.cap_m, ring.cap_d)
                .map_err(|e| e.to_string())?;
            let s = windows::specialize(&w, m, n).map_err(|e| e.to_string())?;
            let sgn = match sign {
                SignArg::Plus => windows::Sign::Plus,
                SignArg::Minus => windows::Sign::Minus,
            };
            let l = windows::build_sublattice(&s, sgn).map_err(|e| e.to_string())?;
            #[derive(Serialize)]
            struct SubOut {
                scales: Vec<(u32, u32)>,
                induced: Vec<[cansub::json::WittPolyJson; 4]>,
                omega_divisor_exponents: Vec<u32>,
            }
            let out = SubOut {
                scales: l.scales.clone(),
                induced: l
                    .induced_mats
                    .iter()
                    .map(|mt| {
                        [
                            cansub::json::WittPolyJson::from_poly(&mt[0]),
                            cansub::json::WittPolyJson::from_poly(&mt[1]),
                            cansub::json::WittPolyJson::from_poly(&mt[2]),
                            cansub::json::WittPolyJson::from_poly(&mt[3]),
                        ]
                    })
                    .collect(),
                omega_divisor_exponents: windows::omega_cokernel(&s, &l)
                    .map_err(|e| e.to_string())?,
            };
            emit(json.json, &out, |o| {
                println!("scales: {:?}", o.scales);
                println!("omega divisor exponents: {:?}", o.omega_divisor_exponents);
            });
            Ok(true)
        }
        WindowsCmd::Verify { ring, json } => {
            let mut cases = Vec::new();
            let mut all = true;
            for m in 1..=2u32 {
                for n in 1..=2u32 {
                    for sign in [windows::Sign::Plus, windows::Sign::Minus] {
                        let case = windows_case(&ring, m, n, sign).map_err(|e| e.to_string())?;
                        all &= case.pass;
                        cases.push(case);
                    }
                }
            }
            let out = WindowsVerifyOut { cases, pass: all };
            emit(json.json, &out, |o| {
                for c in &o.cases {
                    println!(
                        "[{}] (m, n) = ({}, {}) sign {}  stable {}  display {}  psi {}  nilpotent {}  control-fails {}  omega {:?} (expected {:?})",
                        if c.pass { "ok" } else { "XX" },
                        c.m,
                        c.n,
                        c.sign,
                        c.stable,
                        c.display_exact,
                        c.psi_identity,
                        c.nilpotent_after_2g,
                        c.control_fails,
                        c.omega_divisors,
                        c.omega_expected
                    );
                }
                println!("overall  {}", if o.pass { "pass" } else { "fail" });
            });
            Ok(all)
        }
    }
}

fn windows_case(
    ring: &RingArgs,
    m: u32,
    n: u32,
    sign: windows::Sign,
) -> cansub::Result<WindowsCase> {
    let w = windows::universal_window(ring.p, ring.g, ring.cap_m, ring.cap_d)?;
    let s = windows::specialize(&w, m, n)?;
    windows::verify_window(&s)?;
    // building the sublattice proves stability and checks the closed-form display
    let (stable, display_exact, l) = match windows::build_sublattice(&s, sign) {
        Ok(l) => (true, true, Some(l)),
        Err(_) => (false, false, None),
    };
    let mut psi_identity = false;
    let mut nilpotent = false;
    let mut omega = Vec::new();
    let mut omega_expected = Vec::new();
    if let Some(l) = &l {
        if let Ok(psi) = windows::sublattice_psi(&s.ring, l) {
            psi_identity = true;
            let rep = windows::nilpotence_check(&s.ring, &psi, 2 * ring.g);
            nilpotent = rep.in_p;
        }
        omega = windows::omega_cokernel(&s, l)?;
        omega_expected = (0..ring.g)
            .map(|i| match (sign, i % 2 == 0) {
                (windows::Sign::Plus, true) => 0,
                (windows::Sign::Plus, false) => m,
                (windows::Sign::Minus, true) => n,
                (windows::Sign::Minus, false) => 0,
            })
            .collect();
    }
    let mut ctl = windows::multiplicative_control_window(ring.p, ring.g, ring.cap_m, ring.cap_d)?;
    windows::psi_compute(&mut ctl)?;
    let ctl_rep = windows::nilpotence_check(&ctl.ring, ctl.psi_mats.as_ref().unwrap(), 2 * ring.g);
    let control_fails = !ctl_rep.in_p && !ctl_rep.in_p_vars;
    let pass = stable
        && display_exact
        && psi_identity
        && nilpotent
        && control_fails
        && omega == omega_expected;
    Ok(WindowsCase {
        m,
        n,
        sign: format!("{sign:?}"),
        stable,
        display_exact,
        psi_identity,
        nilpotent_after_2g: nilpotent,
        control_fails,
        omega_divisors: omega,
        omega_expected,
        pass,
    })
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
