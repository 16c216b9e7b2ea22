//! Operators realizing the dotted Ptolemy groupoid on cyclic state spaces:
//! the dot-rotation operator `A`, the gluing exchange `S`, the dilogarithm
//! flip `T`, their primed (Gaussian-conjugated) variants, mapping-class
//! intertwiners assembled from move words, and quantum traces.

use crate::coeff::{check_phi_invariance, transport_along_sequence, CoefficientTuple};
use crate::dilog::{psi_operator, FermatPoint};
use crate::error::{Error, Result};
use crate::linop::{
    permutation_operator, weyl_monomial, CyclicOperator, GeneratorKind, StateSpace,
};
use crate::root::RootData;
use crate::surface::{MappingClassSpec, MoveKind};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Which realization of the triangle weights the operators use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Realization {
    Standard,
    Primed,
}

/// Embed a one-site `N×N` matrix at `site`, identity elsewhere.
fn embed_site(
    rd: &RootData,
    space: &StateSpace,
    site: usize,
    small: &DMatrix<Complex64>,
) -> Result<CyclicOperator> {
    let slot = space.site_position(site)?;
    let n = rd.n();
    let dim = space.dim();
    let mut mat = DMatrix::<Complex64>::zeros(dim, dim);
    for col in 0..dim {
        let tuple = space.tuple_of(col);
        let k = tuple[slot];
        for m in 0..n {
            let entry = small[(m as usize, k as usize)];
            if entry.norm_sqr() == 0.0 {
                continue;
            }
            let mut image = tuple.clone();
            image[slot] = m;
            mat[(space.index_of(&image), col)] += entry;
        }
    }
    Ok(CyclicOperator::from_matrix(space, mat))
}

/// The dot-rotation operator at one site: `A|k⟩` is `ζ_A` times the slant
/// vector `Σ_m γ(m)^{-1} q^{-2km} |m⟩`.  It is unitary of order three, so
/// the inverse is the adjoint.
pub fn op_a(rd: &RootData, space: &StateSpace, v: usize, inverse: bool) -> Result<CyclicOperator> {
    let n = rd.n() as usize;
    let za = rd.zeta_a();
    let mut small = DMatrix::<Complex64>::zeros(n, n);
    for k in 0..n {
        for m in 0..n {
            small[(m, k)] = za * rd.gamma_inv(m as i64) * rd.q2_pow(-(k as i64) * m as i64);
        }
    }
    let a = embed_site(rd, space, v, &small)?;
    Ok(if inverse { a.adjoint() } else { a })
}

/// The gluing exchange `S_vw = (1/N) Σ_{i,j} q^{2ij} U_w^i P_v^j`, acting
/// as `|k_v, k_w⟩ ↦ |k_v − k_w, k_w⟩`.
pub fn op_s(rd: &RootData, space: &StateSpace, v: usize, w: usize) -> Result<CyclicOperator> {
    if v == w {
        return Err(Error::DegenerateParameter {
            reason: "the gluing exchange needs two distinct sites".into(),
        });
    }
    let (sv, sw) = (space.site_position(v)?, space.site_position(w)?);
    let n = rd.n();
    let dim = space.dim();
    let mut mat = DMatrix::<Complex64>::zeros(dim, dim);
    for col in 0..dim {
        let mut tuple = space.tuple_of(col);
        tuple[sv] = (tuple[sv] - tuple[sw]).rem_euclid(n);
        mat[(space.index_of(&tuple), col)] = Complex64::new(1.0, 0.0);
    }
    Ok(CyclicOperator::from_matrix(space, mat))
}

/// The flip monomial `⟦P_v^{-1} U_v P_w⟧` whose dilogarithm dresses the
/// gluing exchange.
pub fn flip_monomial(
    rd: &RootData,
    space: &StateSpace,
    v: usize,
    w: usize,
) -> Result<CyclicOperator> {
    weyl_monomial(
        rd,
        space,
        &[
            (v, GeneratorKind::P, -1),
            (v, GeneratorKind::U, 1),
            (w, GeneratorKind::P, 1),
        ],
    )
}

/// The flip operator `T_vw(p) = Ψ_p(⟦P_v^{-1} U_v P_w⟧) · S_vw`.
pub fn op_t(
    rd: &RootData,
    space: &StateSpace,
    v: usize,
    w: usize,
    p: &FermatPoint,
) -> Result<CyclicOperator> {
    let dressed = psi_operator(rd, &flip_monomial(rd, space, v, w)?, p)?;
    Ok(dressed.mul(&op_s(rd, space, v, w)?))
}

/// The diagonal Gaussian `G|k⟩ = Π_v γ(k_v) |k⟩` conjugating the standard
/// realization into the primed one.
pub fn conjugator_g(rd: &RootData, space: &StateSpace) -> CyclicOperator {
    let dim = space.dim();
    let mut mat = DMatrix::<Complex64>::zeros(dim, dim);
    for i in 0..dim {
        let mut phase = Complex64::new(1.0, 0.0);
        for &k in &space.tuple_of(i) {
            phase *= rd.gamma(k);
        }
        mat[(i, i)] = phase;
    }
    CyclicOperator::from_matrix(space, mat)
}

fn prime(rd: &RootData, space: &StateSpace, x: CyclicOperator) -> CyclicOperator {
    conjugator_g(rd, space).conjugate(&x)
}

pub fn op_a_primed(
    rd: &RootData,
    space: &StateSpace,
    v: usize,
    inverse: bool,
) -> Result<CyclicOperator> {
    Ok(prime(rd, space, op_a(rd, space, v, inverse)?))
}

pub fn op_s_primed(rd: &RootData, space: &StateSpace, v: usize, w: usize) -> Result<CyclicOperator> {
    Ok(prime(rd, space, op_s(rd, space, v, w)?))
}

pub fn op_t_primed(
    rd: &RootData,
    space: &StateSpace,
    v: usize,
    w: usize,
    p: &FermatPoint,
) -> Result<CyclicOperator> {
    Ok(prime(rd, space, op_t(rd, space, v, w, p)?))
}

/// The operator of a single elementary move: `A_v` for a dot rotation,
/// `T_vw(p)` for a flip (`p` is the coefficient at the flipped edge), and
/// the tensor-factor swap for a label permutation.
pub fn move_operator(
    rd: &RootData,
    space: &StateSpace,
    kind: MoveKind,
    coefficient: Option<&FermatPoint>,
    realization: Realization,
) -> Result<CyclicOperator> {
    match kind {
        MoveKind::DotRotation { v } => match realization {
            Realization::Standard => op_a(rd, space, v, false),
            Realization::Primed => op_a_primed(rd, space, v, false),
        },
        MoveKind::Flip { v, w, .. } => {
            let p = coefficient.ok_or(Error::DegenerateParameter {
                reason: "a flip needs the coefficient at its edge".into(),
            })?;
            match realization {
                Realization::Standard => op_t(rd, space, v, w, p),
                Realization::Primed => op_t_primed(rd, space, v, w, p),
            }
        }
        MoveKind::Permute { a, b } => {
            permutation_operator(rd, space, &BTreeMap::from([(a, b), (b, a)]))
        }
    }
}

/// The intertwiner of a mapping class: the move operators composed with
/// the first move leftmost, followed (rightmost) by the basis permutation
/// of the triangle identification.  The coefficient chain must be
/// φ-invariant; a singleton chain is expanded by principal transport.
pub fn intertwiner(
    rd: &RootData,
    spec: &MappingClassSpec,
    chain: &[CoefficientTuple],
    realization: Realization,
) -> Result<CyclicOperator> {
    spec.validate()?;
    let report = check_phi_invariance(rd, spec, chain)?;
    if !report.invariant {
        return Err(Error::NotInvariant {
            reason: format!(
                "coefficients are not preserved by {} (residual {:.3e})",
                spec.name, report.max_residual
            ),
        });
    }
    let chain: Vec<CoefficientTuple> = if chain.len() == 1 {
        transport_along_sequence(rd, spec, &chain[0])?
    } else {
        chain.to_vec()
    };
    let mut sites = spec.initial.labels();
    sites.sort_unstable();
    let space = StateSpace::new(rd, &sites);
    let mut product = CyclicOperator::identity(&space);
    for (j, &kind) in spec.moves.iter().enumerate() {
        let coefficient = match kind {
            MoveKind::Flip { edge, .. } => Some(chain[j].get(edge)?),
            _ => None,
        };
        let op = move_operator(rd, &space, kind, coefficient.as_ref(), realization)?;
        product = product.mul(&op);
    }
    let ident: BTreeMap<usize, usize> = spec
        .triangle_identification
        .iter()
        .map(|(&f, &i)| (f, i))
        .collect();
    Ok(product.mul(&permutation_operator(rd, &space, &ident)?))
}

/// `|Tr V|`, the quantum invariant attached to an intertwiner.
pub fn quantum_trace(v: &CyclicOperator) -> f64 {
    v.mat.trace().norm()
}
