//! First-homology operators attached to edge paths on a dotted
//! triangulation, polarized subspaces cut out by commuting path operators,
//! transvection (half-Gaussian) operators, intertwiners reduced to a
//! polarized block, and the cyclic quantum-group module carried by the
//! once-punctured disk.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cfalg::{edge_monomial, side_weight};
use crate::error::{Error, Result};
use crate::linop::{
    basis_vector, gamma_operator, spectral_projector, CyclicOperator, SiteBasis, StateSpace,
    StateVector, WeylMonomial,
};
use crate::rep::Realization;
use crate::root::RootData;
use crate::surface::{builtin_surface, DottedTriangulation};

/// The exact Weyl monomial of a homology path: a cyclic list of
/// `(edge, triangle)` entries, each meaning the path enters the triangle
/// through the edge and leaves through the next entry's edge.  A
/// counter-clockwise turn (the exit side directly precedes the entry
/// side) contributes the two side weights in path order; a clockwise turn
/// contributes the two inverted weights in the opposite order.  All
/// contributions are collected in one symmetric product.
pub fn homology_monomial(
    state: &DottedTriangulation,
    path: &[(usize, usize)],
    realization: Realization,
) -> Result<WeylMonomial> {
    if path.is_empty() {
        return Err(Error::InvalidPath {
            reason: "empty homology path".into(),
        });
    }
    let mut factors = Vec::new();
    for (i, &(edge_in, label)) in path.iter().enumerate() {
        let (edge_out, _) = path[(i + 1) % path.len()];
        let tri = state.triangle(label)?;
        let position = |edge: usize| {
            tri.sides
                .iter()
                .position(|&s| s == edge)
                .ok_or_else(|| Error::InvalidPath {
                    reason: format!("edge {edge} is not a side of triangle {label}"),
                })
        };
        let pos_in = position(edge_in)?;
        let pos_out = position(edge_out)?;
        if pos_out == (pos_in + 2) % 3 {
            factors.push(side_weight(label, pos_in, realization));
            factors.push(side_weight(label, pos_out, realization));
        } else if pos_out == (pos_in + 1) % 3 {
            factors.push(side_weight(label, pos_out, realization).inverse());
            factors.push(side_weight(label, pos_in, realization).inverse());
        } else {
            return Err(Error::InvalidPath {
                reason: format!("path enters and leaves triangle {label} through edge {edge_in}"),
            });
        }
    }
    Ok(WeylMonomial::weyl_product(&factors))
}

/// Dense operator of a homology path.
pub fn homology_operator(
    rd: &RootData,
    space: &StateSpace,
    state: &DottedTriangulation,
    path: &[(usize, usize)],
    realization: Realization,
) -> Result<CyclicOperator> {
    homology_monomial(state, path, realization)?.materialize(rd, space)
}

/// The transvection along a homology path: the preferred half-Gaussian
/// `γ(h)^{±M}` of the path operator, a unit-modulus-spectrum operator
/// whose conjugation action shears the other homology operators by the
/// path's class.
pub fn transvection(
    rd: &RootData,
    space: &StateSpace,
    state: &DottedTriangulation,
    path: &[(usize, usize)],
    sign: i64,
    realization: Realization,
) -> Result<CyclicOperator> {
    let h = homology_operator(rd, space, state, path, realization)?;
    gamma_operator(rd, &h, sign >= 0, true)
}

/// A polarization: named homology paths with an integer character, each
/// path operator required to act as `q^{2λ}` on the cut-out subspace.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolarizationSpec {
    pub paths: BTreeMap<String, Vec<(usize, usize)>>,
    pub lambda: BTreeMap<String, i64>,
}

impl PolarizationSpec {
    pub fn from_json(value: &serde_json::Value) -> Result<PolarizationSpec> {
        serde_json::from_value(value.clone()).map_err(|e| Error::InvalidPath {
            reason: format!("polarization: {e}"),
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("polarization serializes")
    }
}

/// Orthonormal basis of the joint `q^{2λ_i}` eigenspace of the (pairwise
/// commuting) path operators of a polarization.  An empty polarization
/// yields the full standard basis.
pub fn polarized_subspace(
    rd: &RootData,
    state: &DottedTriangulation,
    spec: &PolarizationSpec,
    realization: Realization,
) -> Result<Vec<StateVector>> {
    let mut sites = state.labels();
    sites.sort_unstable();
    let space = StateSpace::new(rd, &sites);
    let dim = space.dim();
    let mut generators = Vec::new();
    let mut characters = Vec::new();
    for (name, path) in &spec.paths {
        let lambda = *spec.lambda.get(name).ok_or(Error::EmptyCharacter)?;
        generators.push(homology_operator(rd, &space, state, path, realization)?);
        characters.push(lambda);
    }
    let allowance = 1e-8 * dim as f64;
    for i in 0..generators.len() {
        for j in (i + 1)..generators.len() {
            let defect = generators[i].commutator_norm(&generators[j]);
            if defect > allowance {
                return Err(Error::NonCommutingGenerators { i, j, defect });
            }
        }
    }
    let mut projector = CyclicOperator::identity(&space);
    for (h, &lambda) in generators.iter().zip(&characters) {
        projector = projector.mul(&spectral_projector(rd, h, lambda)?);
    }
    // Orthonormal image basis by column-pivoted Gram-Schmidt: the columns
    // of an orthogonal projector span its image with unit singular values,
    // so greedy orthogonalization recovers the rank exactly.
    let threshold = 1e-8 * rd.n() as f64;
    let mut columns: Vec<DVector<Complex64>> = (0..dim)
        .map(|j| DVector::from_iterator(dim, projector.mat.column(j).iter().copied()))
        .collect();
    let mut basis = Vec::new();
    loop {
        let (pivot, best) = columns
            .iter()
            .map(|c| c.norm())
            .enumerate()
            .fold((0, 0.0_f64), |acc, (i, n)| if n > acc.1 { (i, n) } else { acc });
        if best <= threshold {
            break;
        }
        let b = columns[pivot].map(|z| z / Complex64::new(best, 0.0));
        for c in columns.iter_mut() {
            let overlap = b.dotc(c);
            *c -= b.map(|z| z * overlap);
        }
        basis.push(StateVector {
            space: space.clone(),
            vec: b,
        });
    }
    let mut worst: f64 = 0.0;
    for b in &basis {
        for (h, &lambda) in generators.iter().zip(&characters) {
            let image = h.apply(b);
            let residual = image.add(&b.scale(-rd.q2_pow(lambda))).norm();
            worst = worst.max(residual);
        }
    }
    if worst > allowance {
        return Err(Error::SubspaceMismatch { residual: worst });
    }
    Ok(basis)
}

/// The distinguished basis of the `q^{2λ}` eigenspace of the a-cycle
/// operator on the once-punctured torus: `|a_{λ,m}⟩`, a position vector at
/// the first site paired with the slant vector at index `m - λ` at the
/// second.  The vectors are orthogonal with squared norm `N`.
pub fn torus_a_basis(rd: &RootData, lambda: i64) -> Result<Vec<StateVector>> {
    let space = StateSpace::new(rd, &[0, 1]);
    (0..rd.n())
        .map(|m| {
            basis_vector(
                rd,
                &space,
                &[SiteBasis::Position(m), SiteBasis::Slant(m - lambda)],
            )
        })
        .collect()
}

/// The matrix of `F·V` restricted to the span of an orthogonal basis:
/// `R[k][ℓ] = ⟨b_k|F·V|b_ℓ⟩ / ⟨b_k|b_k⟩`.  Errors with a residual if the
/// operator does not preserve the span.
pub fn reduced_intertwiner(
    rd: &RootData,
    intertwiner: &CyclicOperator,
    basis: &[StateVector],
    framing: Option<&CyclicOperator>,
) -> Result<DMatrix<Complex64>> {
    let _ = rd;
    let dim = basis.len();
    let mut r = DMatrix::<Complex64>::zeros(dim, dim);
    let mut worst: f64 = 0.0;
    for l in 0..dim {
        let mut image = intertwiner.apply(&basis[l]);
        if let Some(f) = framing {
            image = f.apply(&image);
        }
        let mut remainder = image.clone();
        for k in 0..dim {
            let coeff = basis[k].inner(&image) / basis[k].inner(&basis[k]);
            r[(k, l)] = coeff;
            remainder = remainder.add(&basis[k].scale(-coeff));
        }
        let residual = remainder.norm() / image.norm().max(1.0);
        worst = worst.max(residual);
    }
    if worst > 1e-8 {
        return Err(Error::SubspaceMismatch { residual: worst });
    }
    Ok(r)
}

/// `|Tr R|` of a reduced block.
pub fn reduced_quantum_trace(r: &DMatrix<Complex64>) -> f64 {
    r.trace().norm()
}

/// The cyclic quantum-group module of the once-punctured disk: the raising
/// and lowering operators, both group-likes, their balanced rescalings,
/// and the weight basis they act on by closed-form coefficients.
pub struct UqModule {
    pub space: StateSpace,
    pub e: CyclicOperator,
    pub f: CyclicOperator,
    pub k: CyclicOperator,
    pub k_prime: CyclicOperator,
    pub e_tilde: CyclicOperator,
    pub f_tilde: CyclicOperator,
    pub basis: Vec<StateVector>,
}

/// Build the weight-`p` module with spectral parameters `r`, `s` and
/// central parameter `λ` on the once-punctured disk with two marked
/// boundary points.
pub fn uqsl2_module(
    rd: &RootData,
    weight: i64,
    r: Complex64,
    s: Complex64,
    lambda: Complex64,
) -> Result<UqModule> {
    for (name, value) in [("r", r), ("s", s), ("lambda", lambda)] {
        if value.norm() < 1e-12 {
            return Err(Error::DegenerateParameter {
                reason: format!("module parameter {name} must be invertible"),
            });
        }
    }
    let state = builtin_surface("disk1_2")?;
    let mut sites = state.labels();
    sites.sort_unstable();
    let space = StateSpace::new(rd, &sites);
    let y1 = -lambda / (r * rd.q_pow(1));
    let y2 = -rd.q_pow(1) * r * r;
    let y3 = rd.q_pow(2 * weight) / (s * lambda);
    let y4 = -s * s * rd.q_pow(1 - 2 * weight);
    let x = |edge: usize| edge_monomial(&state, edge, Realization::Standard);
    let (x1, x2, x3, x4) = (x(1)?, x(2)?, x(3)?, x(4)?);
    let mat = |m: &WeylMonomial| m.materialize(rd, &space);
    let e = mat(&x1)?.scale(y1).add(
        &mat(&WeylMonomial::weyl_product(&[x1.clone(), x2.clone()]))?.scale(y1 * y2),
    );
    let f = mat(&x3)?.scale(y3).add(
        &mat(&WeylMonomial::weyl_product(&[x3.clone(), x4.clone()]))?.scale(y3 * y4),
    );
    let k = mat(&WeylMonomial::weyl_product(&[
        x1.clone(),
        x2.clone(),
        x3.clone(),
    ]))?
    .scale(y1 * y2 * y3);
    let k_prime = mat(&WeylMonomial::weyl_product(&[
        x1.clone(),
        x4.clone(),
        x3.clone(),
    ]))?
    .scale(y1 * y4 * y3);
    let denom = rd.q_pow(1) - rd.q_pow(-1);
    let e_tilde = e.scale(rd.q_pow(rd.half()) / denom);
    let f_tilde = f.scale(-rd.q_pow(-rd.half()) / denom);
    let n = rd.n();
    let mut basis = Vec::new();
    for l in 0..n {
        let mut vec = DVector::<Complex64>::zeros(space.dim());
        let head = rd.q_pow(rd.half() * l * l);
        for m in 0..n {
            for nn in 0..n {
                let idx = space.index_of(&[m, nn]);
                vec[idx] += head * rd.q_pow(-2 * l * m) * rd.q_pow(2 * (weight - m) * nn);
            }
        }
        basis.push(StateVector {
            space: space.clone(),
            vec,
        });
    }
    Ok(UqModule {
        space,
        e,
        f,
        k,
        k_prime,
        e_tilde,
        f_tilde,
        basis,
    })
}
