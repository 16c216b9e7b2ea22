//! `qteich` — checks and reports for the finite-dimensional quantum
//! Teichmüller representation at an odd root of unity.
//!
//! Exit codes: 0 when every requested check passes, 1 when a numeric
//! check fails its tolerance, 2 on unusable input (even order, unknown
//! surface or mapping class, malformed files or flags).

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use qteich::cfalg::{central_element, compatibility_check, quantum_mutation_image, CentralClass};
use qteich::coeff::{
    builtin_coefficient_chain, classical_shadow, mutate_classical, mutate_coefficients,
    shape_assignment_check, transport_along_sequence, CoefficientTuple,
};
use qteich::dilog::{psi_operator, psi_values, random_fermat_point, solve_pentagon_params};
use qteich::homology::{
    homology_monomial, homology_operator, polarized_subspace, reduced_intertwiner,
    reduced_quantum_trace, torus_a_basis, transvection, uqsl2_module, PolarizationSpec,
};
use qteich::linop::{
    permutation_operator, site_operator, weyl_monomial, CyclicOperator, GeneratorKind, StateSpace,
};
use qteich::rep::{intertwiner, move_operator, op_a, op_t, quantum_trace, Realization};
use qteich::root::{i_pow, RootData};
use qteich::surface::{
    apply_move, builtin_mapping_class, builtin_surface, boundary_cycles, exchange_matrix,
    puncture_cycles, DottedTriangulation, MappingClassSpec, MoveKind,
};
use qteich::Error;

#[derive(Parser)]
#[command(name = "qteich", version, about = "cyclic quantum Teichmüller toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Odd order of the root of unity.
    #[arg(long = "N", default_value_t = 5)]
    n: i64,
    /// Numerical tolerance for checks.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Seed for the deterministic sampler.
    #[arg(long, default_value_t = 11)]
    seed: u64,
    /// Surface name (built-in).
    #[arg(long, default_value = "torus1")]
    surface: String,
    /// Mapping class name (built-in or word:...).
    #[arg(long, default_value = "Ta")]
    mapclass: String,
    /// Coefficient source: `auto` for the built-in chain, else a JSON file.
    #[arg(long, default_value = "auto")]
    coeffs: String,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<String>,
    /// Number of random samples per randomized check.
    #[arg(long, default_value_t = 20)]
    samples: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named verification suite.
    Verify {
        #[command(flatten)]
        common: Common,
        /// One of dilog, groupoid, cfalg, homology, all.
        #[arg(long)]
        suite: String,
    },
    /// Quantum trace of a mapping class intertwiner.
    Trace {
        #[command(flatten)]
        common: Common,
    },
    /// Trace of the intertwiner reduced to a polarized block.
    ReducedTrace {
        #[command(flatten)]
        common: Common,
        /// Name of the Lagrangian cycle spanning the block (only `a`).
        #[arg(long)]
        lagrangian: String,
        /// Character of the cycle on the block.
        #[arg(long)]
        lambda: i64,
    },
    /// Dimensions of polarized blocks of a surface representation.
    Decompose {
        #[command(flatten)]
        common: Common,
        /// Optional polarization file (paths and characters as JSON).
        #[arg(long)]
        polarization: Option<String>,
    },
    /// Check the pentagon identity of the cyclic dilogarithm.
    Pentagon {
        #[command(flatten)]
        common: Common,
    },
    /// Build the cyclic quantum group module and check its relations.
    Uqsl2 {
        #[command(flatten)]
        common: Common,
        /// Spectral parameter r as `re,im`.
        #[arg(long)]
        r: String,
        /// Spectral parameter s as `re,im`.
        #[arg(long)]
        s: String,
        /// Central parameter as `re,im`.
        #[arg(long)]
        lambda: String,
        /// Integer weight of the module.
        #[arg(long, default_value_t = 0)]
        weight: i64,
    },
    /// Check the shape products of the mapping torus of a word.
    ShapeCheck {
        #[command(flatten)]
        common: Common,
    },
    /// CSV table of twist traces and their reduced block traces.
    TraceTable {
        #[command(flatten)]
        common: Common,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::EvenN { .. }
        | Error::UnknownSite { .. }
        | Error::UnknownSurface { .. }
        | Error::UnknownMapClass { .. }
        | Error::SelfFolded { .. }
        | Error::DotPositionMismatch { .. }
        | Error::NotAdjacent { .. }
        | Error::BoundaryFlip { .. }
        | Error::FrozenFlip { .. }
        | Error::InvalidPath { .. }
        | Error::EmptyCharacter => 2,
        _ => 1,
    }
}

fn parse_complex(text: &str) -> Result<Complex64, Error> {
    let mut parts = text.split(',');
    let re = parts
        .next()
        .and_then(|p| p.trim().parse::<f64>().ok())
        .ok_or_else(|| Error::InvalidPath {
            reason: format!("cannot parse complex number from `{text}`"),
        })?;
    let im = match parts.next() {
        Some(p) => p.trim().parse::<f64>().map_err(|_| Error::InvalidPath {
            reason: format!("cannot parse complex number from `{text}`"),
        })?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(Error::InvalidPath {
            reason: format!("cannot parse complex number from `{text}`"),
        });
    }
    Ok(Complex64::new(re, im))
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn load_chain(
    rd: &RootData,
    mapclass: &str,
    coeffs: &str,
) -> Result<Vec<CoefficientTuple>, Error> {
    if coeffs == "auto" {
        builtin_coefficient_chain(rd, mapclass)
    } else {
        let text = std::fs::read_to_string(coeffs).map_err(|e| Error::InvalidPath {
            reason: format!("cannot read coefficient file {coeffs}: {e}"),
        })?;
        let value: Value = serde_json::from_str(&text).map_err(|e| Error::InvalidPath {
            reason: format!("coefficient file {coeffs} is not JSON: {e}"),
        })?;
        Ok(vec![CoefficientTuple::from_json(&value)?])
    }
}

fn emit(out: &Option<String>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::InvalidPath {
            reason: format!("cannot write {path}: {e}"),
        }),
        None => {
            println!("{}", text.trim_end());
            Ok(())
        }
    }
}

fn emit_json(out: &Option<String>, value: &Value) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    emit(out, &text)
}

struct Check {
    name: String,
    worst: f64,
    tol: f64,
}

impl Check {
    fn pass(&self) -> bool {
        self.worst <= self.tol
    }
}

fn random_tuple<R: Rng>(
    rd: &RootData,
    state: &DottedTriangulation,
    rng: &mut R,
) -> CoefficientTuple {
    let mut tuple = CoefficientTuple::new();
    for e in state.edge_ids() {
        tuple.insert(e, random_fermat_point(rd, rng));
    }
    tuple
}

fn pentagon_worst(rd: &RootData, samples: usize, rng: &mut ChaCha8Rng) -> Result<f64, Error> {
    let space = StateSpace::new(rd, &[0]);
    let u = site_operator(rd, &space, 0, GeneratorKind::U, 1)?;
    let p_op = site_operator(rd, &space, 0, GeneratorKind::P, 1)?;
    let up = weyl_monomial(
        rd,
        &space,
        &[(0, GeneratorKind::U, 1), (0, GeneratorKind::P, 1)],
    )?;
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let params = loop {
            let p = random_fermat_point(rd, rng);
            let r = random_fermat_point(rd, rng);
            if let Ok(params) = solve_pentagon_params(rd, &p, &r) {
                break params;
            }
        };
        let lhs = psi_operator(rd, &u, &params.p)?.mul(&psi_operator(rd, &p_op, &params.r_out)?);
        let rhs = psi_operator(rd, &p_op, &params.r)?
            .mul(&psi_operator(rd, &up, &params.p_mid)?)
            .mul(&psi_operator(rd, &u, &params.p_out)?);
        worst = worst.max(lhs.distance(&rhs) / lhs.frobenius());
    }
    Ok(worst)
}

fn suite_dilog(rd: &RootData, common: &Common, checks: &mut Vec<Check>) -> Result<(), Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    checks.push(Check {
        name: "pentagon identity".into(),
        worst: pentagon_worst(rd, common.samples, &mut rng)?,
        tol: common.tol,
    });
    let n = rd.n();
    let mut worst: f64 = 0.0;
    for _ in 0..common.samples {
        let p = random_fermat_point(rd, &mut rng);
        let psi = psi_values(rd, &p)?;
        let psi_swap = psi_values(rd, &p.swap())?;
        for k in 0..n {
            let got = psi[k as usize] * psi_swap[(-k).rem_euclid(n) as usize];
            let expect = rd.gamma(k) * rd.zeta_inv();
            worst = worst.max((got - expect).norm() / expect.norm());
        }
    }
    checks.push(Check {
        name: "inversion identity".into(),
        worst,
        tol: common.tol,
    });
    let nf = n as f64;
    let mut worst: f64 = 0.0;
    let plus = nf.sqrt() * i_pow(-(nf - 1.0) / 2.0);
    worst = worst.max((rd.gauss_sum(true, 1) - plus).norm() / nf.sqrt());
    let prod: Complex64 = (0..n).map(|k| rd.gamma_inv(k)).product();
    worst = worst.max((prod - rd.zeta_inv().powi(n as i32)).norm());
    checks.push(Check {
        name: "Gauss sums".into(),
        worst,
        tol: common.tol,
    });
    Ok(())
}

fn suite_groupoid(rd: &RootData, common: &Common, checks: &mut Vec<Check>) -> Result<(), Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let space = StateSpace::new(rd, &[0, 1]);
    let id = CyclicOperator::identity(&space);
    let a0 = op_a(rd, &space, 0, false)?;
    let a1 = op_a(rd, &space, 1, false)?;
    checks.push(Check {
        name: "rotation has order three".into(),
        worst: a0.pow(3).distance(&id),
        tol: common.tol,
    });
    let mut worst_atat: f64 = 0.0;
    let mut worst_tat: f64 = 0.0;
    let mut worst_det: f64 = (a0.determinant().norm() - 1.0).abs();
    for _ in 0..common.samples.max(1) {
        let p = random_fermat_point(rd, &mut rng);
        let t01 = op_t(rd, &space, 0, 1, &p)?;
        let t10 = op_t(rd, &space, 1, 0, &p)?;
        let lhs = a0.mul(&t01).mul(&a1);
        let rhs = a1.mul(&t10).mul(&a0);
        worst_atat = worst_atat.max(lhs.distance(&rhs) / lhs.frobenius());
        let t10_swap = op_t(rd, &space, 1, 0, &p.swap())?;
        let lhs = t01.mul(&a0).mul(&t10_swap);
        let perm = permutation_operator(rd, &space, &BTreeMap::from([(0, 1), (1, 0)]))?;
        let rhs = a0.mul(&a1).mul(&perm).scale(rd.zeta_phase());
        worst_tat = worst_tat.max(lhs.distance(&rhs) / lhs.frobenius());
        worst_det = worst_det.max((t01.determinant() - Complex64::new(1.0, 0.0)).norm());
    }
    checks.push(Check {
        name: "rotation-flip-rotation relation".into(),
        worst: worst_atat,
        tol: common.tol,
    });
    checks.push(Check {
        name: "degenerate flip relation".into(),
        worst: worst_tat,
        tol: common.tol,
    });
    checks.push(Check {
        name: "unit determinants".into(),
        worst: worst_det,
        tol: common.tol,
    });

    let start = builtin_surface("pentagon_disk")?;
    let pentagon_space = StateSpace::new(rd, &[0, 1, 2]);
    let word_op = |word: &[(usize, usize, usize)], tuple0: &CoefficientTuple| {
        let mut state = start.clone();
        let mut tuple = tuple0.clone();
        let mut v = CyclicOperator::identity(&pentagon_space);
        for &(a, b, edge) in word {
            let kind = MoveKind::Flip { v: a, w: b, edge };
            let p = tuple.get(edge)?;
            let op = move_operator(rd, &pentagon_space, kind, Some(&p), Realization::Standard)?;
            v = v.mul(&op);
            tuple = mutate_coefficients(rd, &exchange_matrix(&state), &tuple, edge)?;
            state = apply_move(&state, kind)?.after;
        }
        Ok::<CyclicOperator, Error>(v)
    };
    let mut pentagon_defect = f64::INFINITY;
    for _ in 0..30 {
        let tuple = random_tuple(rd, &start, &mut rng);
        let long = word_op(&[(0, 1, 6), (0, 2, 7), (1, 2, 6)], &tuple);
        let short = word_op(&[(1, 2, 7), (0, 1, 6)], &tuple);
        if let (Ok(long), Ok(short)) = (long, short) {
            pentagon_defect = long.distance(&short) / long.frobenius();
            if pentagon_defect <= common.tol {
                break;
            }
        }
    }
    checks.push(Check {
        name: "pentagon of flips".into(),
        worst: pentagon_defect,
        tol: common.tol,
    });
    Ok(())
}

fn suite_cfalg(rd: &RootData, common: &Common, checks: &mut Vec<Check>) -> Result<(), Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let torus = builtin_surface("torus1")?;
    let mut worst: f64 = 0.0;
    for kind in [
        MoveKind::Flip {
            v: 0,
            w: 1,
            edge: 1,
        },
        MoveKind::DotRotation { v: 0 },
    ] {
        let mv = apply_move(&torus, kind)?;
        for realization in [Realization::Standard, Realization::Primed] {
            for _ in 0..common.samples.min(5).max(1) {
                let tuple = random_tuple(rd, &torus, &mut rng);
                worst = worst.max(compatibility_check(rd, &mv, &tuple, realization)?);
            }
        }
    }
    checks.push(Check {
        name: "embedding carried by moves".into(),
        worst,
        tol: common.tol,
    });

    let space = StateSpace::new(rd, &[0, 1]);
    let eps = exchange_matrix(&torus);
    let mut worst: f64 = 0.0;
    for _ in 0..common.samples.min(10).max(1) {
        let tuple = random_tuple(rd, &torus, &mut rng);
        for kappa in [1usize, 2, 3] {
            let mutated = mutate_coefficients(rd, &eps, &tuple, kappa)?;
            let classical = mutate_classical(&eps, &classical_shadow(rd, &tuple), kappa)?;
            for alpha in torus.edge_ids() {
                let bare = quantum_mutation_image(
                    rd,
                    &space,
                    &torus,
                    &tuple,
                    kappa,
                    alpha,
                    Realization::Standard,
                )?;
                let scaled = bare.scale(mutated.get(alpha)?.ratio());
                let target = CyclicOperator::identity(&space).scale(classical[&alpha]);
                worst = worst
                    .max(scaled.pow(rd.n() as usize).distance(&target) / target.frobenius());
            }
        }
    }
    checks.push(Check {
        name: "Frobenius square".into(),
        worst,
        tol: common.tol,
    });
    Ok(())
}

fn suite_homology(rd: &RootData, common: &Common, checks: &mut Vec<Check>) -> Result<(), Error> {
    let space = StateSpace::new(rd, &[0, 1]);
    let torus = builtin_surface("torus1")?;
    let a_path = [(2usize, 0usize), (1, 1)];
    let b_path = [(3usize, 0usize), (1, 1)];
    let ha_m = homology_monomial(&torus, &a_path, Realization::Standard)?;
    let hb_m = homology_monomial(&torus, &b_path, Realization::Standard)?;
    let mut worst: f64 = if ha_m.commutation_exponent(&hb_m) == 2 {
        0.0
    } else {
        1.0
    };
    let h_a = ha_m.materialize(rd, &space)?;
    let h_b = hb_m.materialize(rd, &space)?;
    let lhs = h_a.mul(&h_b);
    let rhs = h_b.mul(&h_a).scale(rd.q_pow(4));
    worst = worst.max(lhs.distance(&rhs) / lhs.frobenius());
    checks.push(Check {
        name: "intersection commutation".into(),
        worst,
        tol: common.tol,
    });

    let filler = builtin_coefficient_chain(rd, "Ta")?[0].get(1)?;
    let mut mismatches = 0.0_f64;
    for name in [
        "torus1",
        "sphere3",
        "disk1_2",
        "annulus_1_1",
        "pentagon_disk",
    ] {
        let state = builtin_surface(name)?;
        let mut tuple = CoefficientTuple::new();
        for e in state.edge_ids() {
            tuple.insert(e, filler);
        }
        for realization in [Realization::Standard, Realization::Primed] {
            for (i, cycle) in puncture_cycles(&state).iter().enumerate() {
                let h = homology_monomial(&state, cycle, realization)?;
                let (theta, _) =
                    central_element(&state, &tuple, CentralClass::Puncture(i), realization)?;
                if h != theta {
                    mismatches += 1.0;
                }
            }
            for (i, cycle) in boundary_cycles(&state).iter().enumerate() {
                let h = homology_monomial(&state, cycle, realization)?;
                let (theta, _) =
                    central_element(&state, &tuple, CentralClass::Boundary(i), realization)?;
                if h != theta {
                    mismatches += 1.0;
                }
            }
        }
    }
    checks.push(Check {
        name: "loops equal central elements".into(),
        worst: mismatches,
        tol: 0.0,
    });

    let spec = builtin_mapping_class("Ta")?;
    let states = spec.states()?;
    let chain = builtin_coefficient_chain(rd, "Ta")?;
    let chain = if chain.len() == 1 {
        transport_along_sequence(rd, &spec, &chain[0])?
    } else {
        chain
    };
    let mut worst: f64 = 0.0;
    for paths in spec.homology_tracks.values() {
        for (j, &kind) in spec.moves.iter().enumerate() {
            let coeff = match kind {
                MoveKind::Flip { edge, .. } => Some(chain[j].get(edge)?),
                _ => None,
            };
            let v = move_operator(rd, &space, kind, coeff.as_ref(), Realization::Standard)?;
            let before =
                homology_operator(rd, &space, &states[j], &paths[j], Realization::Standard)?;
            let after = homology_operator(
                rd,
                &space,
                &states[j + 1],
                &paths[j + 1],
                Realization::Standard,
            )?;
            let inv = v.inverse().ok_or(Error::DegenerateParameter {
                reason: "singular move operator".into(),
            })?;
            let carried = v.mul(&after).mul(&inv);
            worst = worst.max(carried.distance(&before) / before.frobenius());
        }
    }
    checks.push(Check {
        name: "naturality along the twist word".into(),
        worst,
        tol: common.tol,
    });
    Ok(())
}

fn run_verify(common: &Common, suite: &str) -> Result<(Value, bool), Error> {
    let rd = RootData::new(common.n, common.tol)?;
    let mut checks = Vec::new();
    match suite {
        "dilog" => suite_dilog(&rd, common, &mut checks)?,
        "groupoid" => suite_groupoid(&rd, common, &mut checks)?,
        "cfalg" => suite_cfalg(&rd, common, &mut checks)?,
        "homology" => suite_homology(&rd, common, &mut checks)?,
        "all" => {
            suite_dilog(&rd, common, &mut checks)?;
            suite_groupoid(&rd, common, &mut checks)?;
            suite_cfalg(&rd, common, &mut checks)?;
            suite_homology(&rd, common, &mut checks)?;
        }
        other => {
            return Err(Error::InvalidPath {
                reason: format!("unknown suite `{other}` (use dilog, groupoid, cfalg, homology, all)"),
            })
        }
    }
    let pass = checks.iter().all(Check::pass);
    let report = json!({
        "schema": 1,
        "command": "verify",
        "suite": suite,
        "n": common.n,
        "tol": common.tol,
        "seed": common.seed,
        "samples": common.samples,
        "checks": checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "worst": c.worst,
                    "tol": c.tol,
                    "pass": c.pass(),
                })
            })
            .collect::<Vec<_>>(),
        "pass": pass,
    });
    Ok((report, pass))
}

fn intertwiner_of(
    rd: &RootData,
    common: &Common,
) -> Result<(MappingClassSpec, Vec<CoefficientTuple>, CyclicOperator), Error> {
    let spec = builtin_mapping_class(&common.mapclass)?;
    if spec.surface != common.surface {
        return Err(Error::UnknownMapClass {
            name: format!("{} on surface {}", common.mapclass, common.surface),
        });
    }
    let chain = load_chain(rd, &common.mapclass, &common.coeffs)?;
    let v = intertwiner(rd, &spec, &chain, Realization::Standard)?;
    Ok((spec, chain, v))
}

fn framing_of(
    rd: &RootData,
    space: &StateSpace,
    surface: &DottedTriangulation,
    spec: &MappingClassSpec,
) -> Result<Option<CyclicOperator>, Error> {
    if spec.transvections.is_empty() {
        return Ok(None);
    }
    let mut f = CyclicOperator::identity(space);
    for (track, sign) in &spec.transvections {
        let path = spec
            .homology_tracks
            .get(track)
            .and_then(|paths| paths.first())
            .ok_or_else(|| Error::InvalidPath {
                reason: format!("mapping class has no homology track `{track}`"),
            })?;
        f = f.mul(&transvection(
            rd,
            space,
            surface,
            path,
            *sign,
            Realization::Standard,
        )?);
    }
    Ok(Some(f))
}

fn run_trace(common: &Common) -> Result<Value, Error> {
    let rd = RootData::new(common.n, common.tol)?;
    let (_, chain, v) = intertwiner_of(&rd, common)?;
    let z = quantum_trace(&v);
    Ok(json!({
        "schema": 1,
        "command": "trace",
        "n": common.n,
        "surface": common.surface,
        "mapclass": common.mapclass,
        "chain_length": chain.len(),
        "z_n": z,
        "det_mod": v.determinant().norm(),
    }))
}

fn reduced_block(
    rd: &RootData,
    common: &Common,
    lambda: i64,
) -> Result<nalgebra::DMatrix<Complex64>, Error> {
    let surface = builtin_surface(&common.surface)?;
    let space = StateSpace::new(rd, &[0, 1]);
    let (spec, _, v) = intertwiner_of(rd, common)?;
    let framing = framing_of(rd, &space, &surface, &spec)?;
    let basis = torus_a_basis(rd, lambda)?;
    reduced_intertwiner(rd, &v, &basis, framing.as_ref())
}

fn run_reduced_trace(common: &Common, lagrangian: &str, lambda: i64) -> Result<Value, Error> {
    if lagrangian != "a" {
        return Err(Error::InvalidPath {
            reason: format!("unsupported Lagrangian cycle `{lagrangian}` (only `a`)"),
        });
    }
    let rd = RootData::new(common.n, common.tol)?;
    let r = reduced_block(&rd, common, lambda)?;
    Ok(json!({
        "schema": 1,
        "command": "reduced-trace",
        "n": common.n,
        "mapclass": common.mapclass,
        "lagrangian": lagrangian,
        "lambda": lambda,
        "zbar_n": reduced_quantum_trace(&r),
        "det_mod": r.determinant().norm(),
    }))
}

fn run_decompose(common: &Common, polarization: &Option<String>) -> Result<Value, Error> {
    let rd = RootData::new(common.n, common.tol)?;
    let surface = builtin_surface(&common.surface)?;
    if let Some(path) = polarization {
        let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidPath {
            reason: format!("cannot read polarization file {path}: {e}"),
        })?;
        let value: Value = serde_json::from_str(&text).map_err(|e| Error::InvalidPath {
            reason: format!("polarization file {path} is not JSON: {e}"),
        })?;
        let spec = PolarizationSpec::from_json(&value)?;
        let basis = polarized_subspace(&rd, &surface, &spec, Realization::Standard)?;
        return Ok(json!({
            "schema": 1,
            "command": "decompose",
            "n": common.n,
            "surface": common.surface,
            "lambda": spec.lambda,
            "dim": basis.len(),
        }));
    }
    let punctures = puncture_cycles(&surface);
    let boundaries = boundary_cycles(&surface);
    let (kind, cycle) = if let Some(c) = punctures.first() {
        ("puncture", Some(c.clone()))
    } else if let Some(c) = boundaries.first() {
        ("boundary", Some(c.clone()))
    } else {
        ("none", None)
    };
    let mut blocks = Vec::new();
    for lambda in 0..rd.n() {
        let spec = match &cycle {
            Some(c) => PolarizationSpec {
                paths: BTreeMap::from([("c".to_string(), c.clone())]),
                lambda: BTreeMap::from([("c".to_string(), lambda)]),
            },
            None => PolarizationSpec {
                paths: BTreeMap::new(),
                lambda: BTreeMap::new(),
            },
        };
        let basis = polarized_subspace(&rd, &surface, &spec, Realization::Standard)?;
        blocks.push(json!({"lambda": lambda, "dim": basis.len()}));
        if cycle.is_none() {
            break;
        }
    }
    Ok(json!({
        "schema": 1,
        "command": "decompose",
        "n": common.n,
        "surface": common.surface,
        "cycle": kind,
        "blocks": blocks,
    }))
}

fn run_pentagon(common: &Common) -> Result<(Value, bool), Error> {
    let rd = RootData::new(common.n, common.tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let worst = pentagon_worst(&rd, common.samples, &mut rng)?;
    let pass = worst <= common.tol;
    Ok((
        json!({
            "schema": 1,
            "command": "pentagon",
            "n": common.n,
            "samples": common.samples,
            "seed": common.seed,
            "worst": worst,
            "tol": common.tol,
            "pass": pass,
        }),
        pass,
    ))
}

fn run_uqsl2(
    common: &Common,
    r: &str,
    s: &str,
    lambda: &str,
    weight: i64,
) -> Result<(Value, bool), Error> {
    let rd = RootData::new(common.n, common.tol)?;
    let r = parse_complex(r)?;
    let s = parse_complex(s)?;
    let lam = parse_complex(lambda)?;
    let module = uqsl2_module(&rd, weight, r, s, lam)?;
    let q2 = rd.q_pow(2);
    let denom = rd.q_pow(1) - rd.q_pow(-1);
    let rel = |lhs: &CyclicOperator, rhs: &CyclicOperator| {
        lhs.distance(rhs) / lhs.frobenius().max(1.0)
    };
    let mut worst: f64 = 0.0;
    worst = worst.max(rel(
        &module.k.mul(&module.e),
        &module.e.mul(&module.k).scale(q2),
    ));
    worst = worst.max(rel(
        &module.k.mul(&module.f),
        &module.f.mul(&module.k).scale(rd.q_pow(-2)),
    ));
    worst = worst.max(rel(
        &module.k_prime.mul(&module.e),
        &module.e.mul(&module.k_prime).scale(rd.q_pow(-2)),
    ));
    worst = worst.max(rel(
        &module.k_prime.mul(&module.f),
        &module.f.mul(&module.k_prime).scale(q2),
    ));
    let bracket = module
        .e_tilde
        .mul(&module.f_tilde)
        .sub(&module.f_tilde.mul(&module.e_tilde));
    let target = module.k.sub(&module.k_prime).scale(1.0 / denom);
    worst = worst.max(rel(&bracket, &target));
    let mut spectrum = Vec::new();
    for (l, phi) in module.basis.iter().enumerate() {
        let l = l as i64;
        let e_coeff = lam * (r * rd.q_pow(l + 1) - rd.q_pow(-l - 1) / r) / denom;
        let f_coeff = (s * rd.q_pow(-l + 1) - rd.q_pow(l - 1) / s) / (lam * denom);
        let k_coeff = (r / s) * rd.q_pow(2 * l);
        let up = &module.basis[((l + 1).rem_euclid(rd.n())) as usize];
        let down = &module.basis[((l - 1).rem_euclid(rd.n())) as usize];
        let scale = phi.norm();
        worst = worst.max(
            module.e_tilde.apply(phi).add(&up.scale(-e_coeff)).norm()
                / (e_coeff.norm() * scale).max(1.0),
        );
        worst = worst.max(
            module.f_tilde.apply(phi).add(&down.scale(-f_coeff)).norm()
                / (f_coeff.norm() * scale).max(1.0),
        );
        worst = worst.max(
            module.k.apply(phi).add(&phi.scale(-k_coeff)).norm()
                / (k_coeff.norm() * scale).max(1.0),
        );
        spectrum.push(json!({
            "level": l,
            "raising": complex_json(e_coeff),
            "lowering": complex_json(f_coeff),
            "grading": complex_json(k_coeff),
        }));
    }
    let pass = worst <= common.tol;
    Ok((
        json!({
            "schema": 1,
            "command": "uqsl2",
            "n": common.n,
            "weight": weight,
            "r": complex_json(r),
            "s": complex_json(s),
            "lambda": complex_json(lam),
            "worst": worst,
            "tol": common.tol,
            "spectrum": spectrum,
            "pass": pass,
        }),
        pass,
    ))
}

fn run_shape_check(common: &Common) -> Result<(Value, bool), Error> {
    let rd = RootData::new(common.n, common.tol)?;
    let spec = builtin_mapping_class(&common.mapclass)?;
    let chain = load_chain(&rd, &common.mapclass, &common.coeffs)?;
    let report = shape_assignment_check(&rd, &spec, &chain)?;
    let pass = report.max_tetrahedron_residual <= common.tol
        && report.max_edge_residual <= common.tol
        && report.lifetimes.iter().all(|l| l.complete);
    Ok((
        json!({
            "schema": 1,
            "command": "shape-check",
            "n": common.n,
            "mapclass": common.mapclass,
            "tetrahedra": report
                .tetrahedra
                .iter()
                .map(|t| json!({"flip": t.flip_index, "product": complex_json(t.product)}))
                .collect::<Vec<_>>(),
            "lifetimes": report
                .lifetimes
                .iter()
                .map(|l| {
                    json!({
                        "born_at_flip": l.born_at_flip,
                        "complete": l.complete,
                        "product": complex_json(l.product),
                    })
                })
                .collect::<Vec<_>>(),
            "max_tetrahedron_residual": report.max_tetrahedron_residual,
            "max_edge_residual": report.max_edge_residual,
            "tol": common.tol,
            "pass": pass,
        }),
        pass,
    ))
}

fn run_trace_table(common: &Common) -> Result<String, Error> {
    let rd = RootData::new(common.n, common.tol)?;
    let mut rows = String::from("N,mapclass,Z_N,lambda,Zbar_N\n");
    for name in ["Ta", "Tb_inv"] {
        let inner = Common {
            mapclass: name.to_string(),
            coeffs: "auto".to_string(),
            ..common.clone()
        };
        let (_, _, v) = intertwiner_of(&rd, &inner)?;
        let z = quantum_trace(&v);
        for lambda in 0..rd.n() {
            let r = reduced_block(&rd, &inner, lambda)?;
            let zbar = reduced_quantum_trace(&r);
            rows.push_str(&format!(
                "{},{},{:.12e},{},{:.12e}\n",
                common.n, name, z, lambda, zbar
            ));
        }
    }
    Ok(rows)
}

fn dispatch(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Verify { common, suite } => {
            let (report, pass) = run_verify(&common, &suite)?;
            emit_json(&common.out, &report)?;
            Ok(pass)
        }
        Command::Trace { common } => {
            let report = run_trace(&common)?;
            emit_json(&common.out, &report)?;
            Ok(true)
        }
        Command::ReducedTrace {
            common,
            lagrangian,
            lambda,
        } => {
            let report = run_reduced_trace(&common, &lagrangian, lambda)?;
            emit_json(&common.out, &report)?;
            Ok(true)
        }
        Command::Decompose {
            common,
            polarization,
        } => {
            let report = run_decompose(&common, &polarization)?;
            emit_json(&common.out, &report)?;
            Ok(true)
        }
        Command::Pentagon { common } => {
            let (report, pass) = run_pentagon(&common)?;
            emit_json(&common.out, &report)?;
            Ok(pass)
        }
        Command::Uqsl2 {
            common,
            r,
            s,
            lambda,
            weight,
        } => {
            let (report, pass) = run_uqsl2(&common, &r, &s, &lambda, weight)?;
            emit_json(&common.out, &report)?;
            Ok(pass)
        }
        Command::ShapeCheck { common } => {
            let (report, pass) = run_shape_check(&common)?;
            emit_json(&common.out, &report)?;
            Ok(pass)
        }
        Command::TraceTable { common } => {
            let table = run_trace_table(&common)?;
            emit(&common.out, &table)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
