//! Acceptance gate: one test per headline guarantee, each printing a
//! single verdict line.  Tolerances are pinned per criterion; random data
//! is drawn from fixed seeds so every run checks the same instances.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

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
    basis_vector, permutation_operator, site_operator, weyl_monomial, CyclicOperator,
    GeneratorKind, SiteBasis, StateSpace,
};
use qteich::rep::{intertwiner, move_operator, op_a, op_t, quantum_trace, Realization};
use qteich::root::{i_pow, RootData};
use qteich::surface::{
    apply_move, builtin_mapping_class, builtin_surface, exchange_matrix, puncture_cycles,
    DottedTriangulation, MoveKind,
};

fn verdict(index: usize, label: &str, worst: f64, tol: f64) {
    let ok = worst <= tol;
    println!(
        "[acceptance {index:02}] {label}: {} (worst {worst:.3e}, tol {tol:.1e})",
        if ok { "pass" } else { "FAIL" }
    );
    assert!(ok, "[acceptance {index:02}] {label}: {worst:.3e} > {tol:.1e}");
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

#[test]
fn acceptance_01_pentagon_identity() {
    let tol = 1e-9;
    let mut worst: f64 = 0.0;
    for n in [3, 5, 7] {
        let rd = RootData::new(n, 1e-9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        let space = StateSpace::new(&rd, &[0]);
        let u = site_operator(&rd, &space, 0, GeneratorKind::U, 1).unwrap();
        let p_op = site_operator(&rd, &space, 0, GeneratorKind::P, 1).unwrap();
        let up = weyl_monomial(
            &rd,
            &space,
            &[(0, GeneratorKind::U, 1), (0, GeneratorKind::P, 1)],
        )
        .unwrap();
        for _ in 0..20 {
            let params = loop {
                let p = random_fermat_point(&rd, &mut rng);
                let r = random_fermat_point(&rd, &mut rng);
                if let Ok(params) = solve_pentagon_params(&rd, &p, &r) {
                    break params;
                }
            };
            let lhs = psi_operator(&rd, &u, &params.p)
                .unwrap()
                .mul(&psi_operator(&rd, &p_op, &params.r_out).unwrap());
            let rhs = psi_operator(&rd, &p_op, &params.r)
                .unwrap()
                .mul(&psi_operator(&rd, &up, &params.p_mid).unwrap())
                .mul(&psi_operator(&rd, &u, &params.p_out).unwrap());
            worst = worst.max(lhs.distance(&rhs) / lhs.frobenius());
        }
    }
    verdict(1, "cyclic dilogarithm pentagon identity", worst, tol);
}

#[test]
fn acceptance_02_inversion_identity() {
    let tol = 1e-10;
    let mut worst: f64 = 0.0;
    for n in [3, 5, 7] {
        let rd = RootData::new(n, 1e-9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(102);
        for _ in 0..20 {
            let p = random_fermat_point(&rd, &mut rng);
            let psi = psi_values(&rd, &p).unwrap();
            let psi_swap = psi_values(&rd, &p.swap()).unwrap();
            for k in 0..n {
                let got = psi[k as usize] * psi_swap[(-k).rem_euclid(n) as usize];
                let expect = rd.gamma(k) * rd.zeta_inv();
                worst = worst.max((got - expect).norm() / expect.norm());
            }
        }
    }
    verdict(2, "dilogarithm inversion identity", worst, tol);
}

#[test]
fn acceptance_03_gauss_sums() {
    let tol = 1e-10;
    let mut worst: f64 = 0.0;
    for n in [3, 5, 7, 9] {
        let rd = RootData::new(n, 1e-9).unwrap();
        let nf = n as f64;
        let plus = nf.sqrt() * i_pow(-(nf - 1.0) / 2.0);
        let minus = nf.sqrt() * i_pow((nf - 1.0) / 2.0);
        worst = worst.max((rd.gauss_sum(true, 1) - plus).norm() / nf.sqrt());
        worst = worst.max((rd.gauss_sum(false, 1) - minus).norm() / nf.sqrt());
        let sq = if (n + 1) / 2 % 2 == 0 {
            Complex64::new(0.0, nf.sqrt())
        } else {
            Complex64::new(nf.sqrt(), 0.0)
        };
        worst = worst.max((rd.gauss_sum(true, 2) - sq).norm() / nf.sqrt());
        worst = worst.max((rd.gauss_sum(false, 2) - sq.conj()).norm() / nf.sqrt());
        let prod: Complex64 = (0..n).map(|k| rd.gamma_inv(k)).product();
        worst = worst.max((prod - rd.zeta_inv().powi(n as i32)).norm());
    }
    verdict(3, "Gauss sum closed forms and Gaussian product", worst, tol);
}

#[test]
fn acceptance_04_groupoid_relations() {
    let tol = 1e-9;
    let mut worst: f64 = 0.0;
    let rd = RootData::new(5, 1e-9).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let space = StateSpace::new(&rd, &[0, 1]);
    let id = CyclicOperator::identity(&space);
    let a0 = op_a(&rd, &space, 0, false).unwrap();
    let a1 = op_a(&rd, &space, 1, false).unwrap();
    worst = worst.max(a0.pow(3).distance(&id));
    for _ in 0..5 {
        let p = random_fermat_point(&rd, &mut rng);
        let t01 = op_t(&rd, &space, 0, 1, &p).unwrap();
        let t10 = op_t(&rd, &space, 1, 0, &p).unwrap();
        let lhs = a0.mul(&t01).mul(&a1);
        let rhs = a1.mul(&t10).mul(&a0);
        worst = worst.max(lhs.distance(&rhs) / lhs.frobenius());
        let t10_swap = op_t(&rd, &space, 1, 0, &p.swap()).unwrap();
        let lhs = t01.mul(&a0).mul(&t10_swap);
        let perm = permutation_operator(&rd, &space, &BTreeMap::from([(0, 1), (1, 0)])).unwrap();
        let rhs = a0.mul(&a1).mul(&perm).scale(rd.zeta_phase());
        worst = worst.max(lhs.distance(&rhs) / lhs.frobenius());
    }

    // Two flip words across the pentagon: the three-step and two-step
    // paths between the same triangulations, with principally transported
    // coefficients.  Tuples whose transported sections land on different
    // fiber branches are resampled.
    let start = builtin_surface("pentagon_disk").unwrap();
    let pentagon_space = StateSpace::new(&rd, &[0, 1, 2]);
    let word_op = |word: &[(usize, usize, usize)], tuple0: &CoefficientTuple| {
        let mut state = start.clone();
        let mut tuple = tuple0.clone();
        let mut v = CyclicOperator::identity(&pentagon_space);
        for &(a, b, edge) in word {
            let kind = MoveKind::Flip { v: a, w: b, edge };
            let p = tuple.get(edge)?;
            let op = move_operator(&rd, &pentagon_space, kind, Some(&p), Realization::Standard)?;
            v = v.mul(&op);
            tuple = mutate_coefficients(&rd, &exchange_matrix(&state), &tuple, edge)?;
            state = apply_move(&state, kind)?.after;
        }
        Ok::<CyclicOperator, qteich::Error>(v)
    };
    let mut pentagon_defect = f64::INFINITY;
    for _ in 0..30 {
        let tuple = random_tuple(&rd, &start, &mut rng);
        let long = word_op(&[(0, 1, 6), (0, 2, 7), (1, 2, 6)], &tuple);
        let short = word_op(&[(1, 2, 7), (0, 1, 6)], &tuple);
        if let (Ok(long), Ok(short)) = (long, short) {
            pentagon_defect = long.distance(&short) / long.frobenius();
            if pentagon_defect <= tol {
                break;
            }
        }
    }
    worst = worst.max(pentagon_defect);
    verdict(4, "Ptolemy groupoid relations", worst, tol);
}

#[test]
fn acceptance_05_unit_determinants() {
    let tol = 1e-9;
    let mut worst: f64 = 0.0;
    let rd = RootData::new(5, 1e-9).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let space = StateSpace::new(&rd, &[0, 1]);
    let p = random_fermat_point(&rd, &mut rng);
    let t = op_t(&rd, &space, 0, 1, &p).unwrap();
    worst = worst.max((t.determinant() - Complex64::new(1.0, 0.0)).norm());
    let a = op_a(&rd, &space, 0, false).unwrap();
    worst = worst.max((a.determinant().norm() - 1.0).abs());
    for name in ["Ta", "Tb_inv"] {
        let spec = builtin_mapping_class(name).unwrap();
        let chain = builtin_coefficient_chain(&rd, name).unwrap();
        let v = intertwiner(&rd, &spec, &chain, Realization::Standard).unwrap();
        worst = worst.max((v.determinant().norm() - 1.0).abs());
    }
    verdict(5, "flip/rotation/intertwiner determinants", worst, tol);
}

#[test]
fn acceptance_06_dehn_twist_traces() {
    let tol = 1e-8;
    let mut worst: f64 = 0.0;
    let rd = RootData::new(5, 1e-9).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let n = rd.n();
    let space = StateSpace::new(&rd, &[0, 1]);
    for name in ["Ta", "Tb_inv"] {
        let spec = builtin_mapping_class(name).unwrap();
        let chain = builtin_coefficient_chain(&rd, name).unwrap();
        let v = intertwiner(&rd, &spec, &chain, Realization::Standard).unwrap();
        let psi = psi_values(&rd, &chain[0].get(1).unwrap()).unwrap();
        let closed: Complex64 = if name == "Ta" {
            (0..n).map(|u| psi[u as usize] * rd.gamma_inv(u)).sum()
        } else {
            psi.iter().sum()
        };
        worst = worst.max((quantum_trace(&v) - closed.norm()).abs() / closed.norm().max(1.0));
        for _ in 0..10 {
            let (m, nn, k, l) = (
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
            );
            let bra = basis_vector(&rd, &space, &[SiteBasis::Slant(m), SiteBasis::Momentum(nn)])
                .unwrap();
            let ket = basis_vector(&rd, &space, &[SiteBasis::Slant(k), SiteBasis::Momentum(l)])
                .unwrap();
            let got = bra.inner(&v.apply(&ket));
            let expect = if name == "Ta" {
                i_pow((1.0 - n as f64) / 3.0)
                    * Complex64::new(n as f64, 0.0)
                    * psi[(nn - m).rem_euclid(n) as usize]
                    * rd.gamma_inv(m - l)
                    * rd.q2_pow((nn - l) * k)
            } else {
                Complex64::new(n as f64, 0.0)
                    * psi[(nn - m).rem_euclid(n) as usize]
                    * rd.gamma_inv(k - m)
                    * rd.q2_pow((k - m) * (k + l - nn))
            };
            worst = worst.max((got - expect).norm() / expect.norm().max(1.0));
        }
    }
    verdict(6, "Dehn twist traces and matrix coefficients", worst, tol);
}

#[test]
fn acceptance_07_cluster_compatibility() {
    let tol = 1e-9;
    let mut worst: f64 = 0.0;
    let rd = RootData::new(5, 1e-9).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let torus = builtin_surface("torus1").unwrap();
    for kind in [
        MoveKind::Flip {
            v: 0,
            w: 1,
            edge: 1,
        },
        MoveKind::DotRotation { v: 0 },
    ] {
        let mv = apply_move(&torus, kind).unwrap();
        for realization in [Realization::Standard, Realization::Primed] {
            for _ in 0..5 {
                let tuple = random_tuple(&rd, &torus, &mut rng);
                worst = worst.max(compatibility_check(&rd, &mv, &tuple, realization).unwrap());
            }
        }
    }
    verdict(7, "cluster embedding carried by groupoid moves", worst, tol);
}

#[test]
fn acceptance_08_frobenius_square() {
    let tol = 1e-10;
    let mut worst: f64 = 0.0;
    let rd = RootData::new(5, 1e-9).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let torus = builtin_surface("torus1").unwrap();
    let space = StateSpace::new(&rd, &[0, 1]);
    let eps = exchange_matrix(&torus);
    for kappa in [1usize, 2, 3] {
        for _ in 0..20 {
            let tuple = random_tuple(&rd, &torus, &mut rng);
            let mutated = mutate_coefficients(&rd, &eps, &tuple, kappa).unwrap();
            let classical = mutate_classical(&eps, &classical_shadow(&rd, &tuple), kappa).unwrap();
            for alpha in torus.edge_ids() {
                let bare = quantum_mutation_image(
                    &rd,
                    &space,
                    &torus,
                    &tuple,
                    kappa,
                    alpha,
                    Realization::Standard,
                )
                .unwrap();
                let scaled = bare.scale(mutated.get(alpha).unwrap().ratio());
                let id = CyclicOperator::identity(&space).scale(classical[&alpha]);
                let frob = scaled.pow(rd.n() as usize);
                worst = worst.max(frob.distance(&id) / id.frobenius());
            }
        }
    }
    verdict(8, "Frobenius square of quantum mutation", worst, tol);
}

#[test]
fn acceptance_09_polarized_dimensions() {
    let rd = RootData::new(5, 1e-9).unwrap();
    let n = rd.n();
    let mut failures = 0usize;

    let torus = builtin_surface("torus1").unwrap();
    for lambda in 0..n {
        let spec = PolarizationSpec {
            paths: BTreeMap::from([("a".into(), vec![(2, 0), (1, 1)])]),
            lambda: BTreeMap::from([("a".into(), lambda)]),
        };
        let basis = polarized_subspace(&rd, &torus, &spec, Realization::Standard).unwrap();
        if basis.len() != n as usize {
            failures += 1;
        }
    }

    let sphere = builtin_surface("sphere3").unwrap();
    let cycles = puncture_cycles(&sphere);
    for (a, b, c) in [(0i64, 0, 0), (1, 1, 3), (2, 4, 4), (1, 0, 0), (3, 3, 3)] {
        let spec = PolarizationSpec {
            paths: BTreeMap::from([
                ("l0".into(), cycles[0].clone()),
                ("l1".into(), cycles[1].clone()),
                ("l2".into(), cycles[2].clone()),
            ]),
            lambda: BTreeMap::from([("l0".into(), a), ("l1".into(), b), ("l2".into(), c)]),
        };
        let basis = polarized_subspace(&rd, &sphere, &spec, Realization::Standard).unwrap();
        let expect = if (a + b + c) % n == 0 { 1 } else { 0 };
        if basis.len() != expect {
            failures += 1;
        }
    }

    let disk = builtin_surface("disk1_2").unwrap();
    let boundary = qteich::surface::boundary_cycles(&disk);
    for weight in 0..n {
        let spec = PolarizationSpec {
            paths: BTreeMap::from([("b".into(), boundary[0].clone())]),
            lambda: BTreeMap::from([("b".into(), (-weight).rem_euclid(n))]),
        };
        let basis = polarized_subspace(&rd, &disk, &spec, Realization::Standard).unwrap();
        if basis.len() != n as usize {
            failures += 1;
        }
        // The weight-p module basis lies in that block.
        let module = uqsl2_module(
            &rd,
            weight,
            Complex64::new(1.3, 0.4),
            Complex64::new(0.7, -0.2),
            Complex64::new(1.1, 0.8),
        )
        .unwrap();
        let b_loop = homology_operator(
            &rd,
            &module.space,
            &disk,
            &boundary[0],
            Realization::Standard,
        )
        .unwrap();
        let phi = &module.basis[1];
        let image = b_loop.apply(phi);
        if !image.approx_eq(&phi.scale(rd.q2_pow(-weight)), 1e-9) {
            failures += 1;
        }
    }
    verdict(9, "polarized block dimensions", failures as f64, 0.0);
}

#[test]
fn acceptance_10_reduced_twist_traces() {
    let tol = 1e-8;
    let mut worst: f64 = 0.0;
    for n in [3, 5, 7] {
        let rd = RootData::new(n, 1e-9).unwrap();
        let torus = builtin_surface("torus1").unwrap();
        let space = StateSpace::new(&rd, &[0, 1]);
        let inv_n = Complex64::new(1.0 / n as f64, 0.0);
        for name in ["Ta", "Tb_inv"] {
            let spec = builtin_mapping_class(name).unwrap();
            let chain = builtin_coefficient_chain(&rd, name).unwrap();
            let psi = psi_values(&rd, &chain[0].get(1).unwrap()).unwrap();
            let v = intertwiner(&rd, &spec, &chain, Realization::Standard).unwrap();
            let framing = if spec.transvections.is_empty() {
                None
            } else {
                let mut f = CyclicOperator::identity(&space);
                for (track, sign) in &spec.transvections {
                    let path = &spec.homology_tracks[track][0];
                    f = f.mul(
                        &transvection(&rd, &space, &torus, path, *sign, Realization::Standard)
                            .unwrap(),
                    );
                }
                Some(f)
            };
            for lambda in 0..n {
                let basis = torus_a_basis(&rd, lambda).unwrap();
                let r = reduced_intertwiner(&rd, &v, &basis, framing.as_ref()).unwrap();
                worst = worst.max((r.determinant().norm() - 1.0).abs());
                let scale = r.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
                let mut closed_trace = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    for l in 0..n {
                        let entry = if name == "Ta" {
                            let mut s = Complex64::new(0.0, 0.0);
                            for u in 0..n {
                                s += psi[u as usize] * rd.gamma_inv(u) * rd.q_pow(2 * u * (k - l));
                            }
                            i_pow((1.0 - n as f64) / 3.0)
                                * rd.gamma(l)
                                * rd.gamma_inv(k)
                                * rd.gamma(l - lambda)
                                * rd.gamma_inv(k - lambda)
                                * rd.q_pow(2 * l * (lambda - l))
                                * s
                                * inv_n
                        } else {
                            rd.gauss_sum(true, 2)
                                * psi[((2 * l - lambda).rem_euclid(n)) as usize]
                                * rd.gamma_inv(l - k)
                                * rd.gamma_inv(l - k)
                                * inv_n
                        };
                        worst = worst.max(
                            (r[(k as usize, l as usize)] - entry).norm() / scale.max(1.0),
                        );
                    }
                    closed_trace += if name == "Ta" {
                        psi[k as usize] * rd.gamma_inv(k)
                    } else {
                        psi[((2 * k - lambda).rem_euclid(n)) as usize]
                    };
                }
                let zbar = reduced_quantum_trace(&r);
                let expect = closed_trace.norm() / (n as f64).sqrt();
                worst = worst.max((zbar - expect).abs() / expect.max(1.0));
            }
        }
    }
    verdict(10, "reduced twist blocks and traces", worst, tol);
}

#[test]
fn acceptance_11_quantum_group_module() {
    let tol = 1e-9;
    let mut worst: f64 = 0.0;
    let rd = RootData::new(5, 1e-9).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(111);
    let q = rd.q_pow(1);
    let denom = q - rd.q_pow(-1);
    for trial in 0..10i64 {
        let draw = |rng: &mut ChaCha8Rng| {
            let mag = f64::exp(rng.gen_range(-0.7..0.7));
            let arg = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            Complex64::from_polar(mag, arg)
        };
        let (r, s, lam) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
        let weight = trial % 5;
        let module = uqsl2_module(&rd, weight, r, s, lam).unwrap();
        let rel = |lhs: &CyclicOperator, rhs: &CyclicOperator| {
            lhs.distance(rhs) / lhs.frobenius().max(1.0)
        };
        worst = worst.max(rel(
            &module.k.mul(&module.e),
            &module.e.mul(&module.k).scale(rd.q_pow(2)),
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
            &module.f.mul(&module.k_prime).scale(rd.q_pow(2)),
        ));
        let bracket = module
            .e_tilde
            .mul(&module.f_tilde)
            .sub(&module.f_tilde.mul(&module.e_tilde));
        let target = module.k.sub(&module.k_prime).scale(1.0 / denom);
        worst = worst.max(rel(&bracket, &target));
        for (l, phi) in module.basis.iter().enumerate() {
            let l = l as i64;
            let scale = phi.norm();
            let up = &module.basis[((l + 1).rem_euclid(rd.n())) as usize];
            let down = &module.basis[((l - 1).rem_euclid(rd.n())) as usize];
            let e_coeff = lam * (r * rd.q_pow(l + 1) - rd.q_pow(-l - 1) / r) / denom;
            worst = worst.max(
                module
                    .e_tilde
                    .apply(phi)
                    .add(&up.scale(-e_coeff))
                    .norm()
                    / (e_coeff.norm() * scale).max(1.0),
            );
            let f_coeff = (s * rd.q_pow(-l + 1) - rd.q_pow(l - 1) / s) / (lam * denom);
            worst = worst.max(
                module
                    .f_tilde
                    .apply(phi)
                    .add(&down.scale(-f_coeff))
                    .norm()
                    / (f_coeff.norm() * scale).max(1.0),
            );
            let k_coeff = (r / s) * rd.q_pow(2 * l);
            worst = worst.max(
                module.k.apply(phi).add(&phi.scale(-k_coeff)).norm()
                    / (k_coeff.norm() * scale).max(1.0),
            );
        }
    }
    verdict(11, "cyclic quantum group relations and actions", worst, tol);
}

#[test]
fn acceptance_12_shape_parameters() {
    let tol = 1e-9;
    let mut worst: f64 = 0.0;
    let rd = RootData::new(7, 1e-9).unwrap();
    for name in ["Ta", "word:Ta,Tb_inv"] {
        let spec = builtin_mapping_class(name).unwrap();
        let chain = builtin_coefficient_chain(&rd, name).unwrap();
        let report = shape_assignment_check(&rd, &spec, &chain).unwrap();
        assert!(!report.tetrahedra.is_empty(), "{name}: no tetrahedra");
        assert!(
            report.lifetimes.iter().all(|l| l.complete),
            "{name}: incomplete edge lifetime"
        );
        worst = worst.max(report.max_tetrahedron_residual);
        worst = worst.max(report.max_edge_residual);
    }
    verdict(12, "mapping torus shape products", worst, tol);
}

#[test]
fn acceptance_13_homology_operators() {
    let tol = 1e-9;
    let mut worst: f64 = 0.0;
    let rd = RootData::new(5, 1e-9).unwrap();
    let space = StateSpace::new(&rd, &[0, 1]);
    let torus = builtin_surface("torus1").unwrap();

    let a_path = [(2usize, 0usize), (1, 1)];
    let b_path = [(3usize, 0usize), (1, 1)];
    let ha_m = homology_monomial(&torus, &a_path, Realization::Standard).unwrap();
    let hb_m = homology_monomial(&torus, &b_path, Realization::Standard).unwrap();
    assert_eq!(ha_m.commutation_exponent(&hb_m), 2);
    let h_a = ha_m.materialize(&rd, &space).unwrap();
    let h_b = hb_m.materialize(&rd, &space).unwrap();
    let lhs = h_a.mul(&h_b);
    let rhs = h_b.mul(&h_a).scale(rd.q_pow(4));
    worst = worst.max(lhs.distance(&rhs) / lhs.frobenius());

    let filler = builtin_coefficient_chain(&rd, "Ta").unwrap()[0].get(1).unwrap();
    for name in [
        "torus1",
        "sphere3",
        "disk1_2",
        "annulus_1_1",
        "pentagon_disk",
    ] {
        let state = builtin_surface(name).unwrap();
        let mut tuple = CoefficientTuple::new();
        for e in state.edge_ids() {
            tuple.insert(e, filler);
        }
        for realization in [Realization::Standard, Realization::Primed] {
            for (i, cycle) in puncture_cycles(&state).iter().enumerate() {
                let h = homology_monomial(&state, cycle, realization).unwrap();
                let (theta, _) =
                    central_element(&state, &tuple, CentralClass::Puncture(i), realization)
                        .unwrap();
                assert_eq!(h, theta, "{name} puncture {i}");
            }
            for (i, cycle) in qteich::surface::boundary_cycles(&state).iter().enumerate() {
                let h = homology_monomial(&state, cycle, realization).unwrap();
                let (theta, _) =
                    central_element(&state, &tuple, CentralClass::Boundary(i), realization)
                        .unwrap();
                assert_eq!(h, theta, "{name} boundary {i}");
            }
        }
    }

    let spec = builtin_mapping_class("Ta").unwrap();
    let states = spec.states().unwrap();
    let chain = builtin_coefficient_chain(&rd, "Ta").unwrap();
    let chain = if chain.len() == 1 {
        transport_along_sequence(&rd, &spec, &chain[0]).unwrap()
    } else {
        chain
    };
    for (_, paths) in &spec.homology_tracks {
        for (j, &kind) in spec.moves.iter().enumerate() {
            let coeff = match kind {
                MoveKind::Flip { edge, .. } => Some(chain[j].get(edge).unwrap()),
                _ => None,
            };
            let v = move_operator(&rd, &space, kind, coeff.as_ref(), Realization::Standard)
                .unwrap();
            let before =
                homology_operator(&rd, &space, &states[j], &paths[j], Realization::Standard)
                    .unwrap();
            let after = homology_operator(
                &rd,
                &space,
                &states[j + 1],
                &paths[j + 1],
                Realization::Standard,
            )
            .unwrap();
            let carried = v.mul(&after).mul(&v.inverse().unwrap());
            worst = worst.max(carried.distance(&before) / before.frobenius());
        }
    }

    verdict(13, "homology loops, centrality, and naturality", worst, tol);
}
