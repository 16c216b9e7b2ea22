//! Cyclic cluster generators attached to triangulation edges: their
//! operator embeddings through the triangle side weights, coefficient-
//! dressed mutation under flips, naturality of the embeddings under
//! elementary moves, and the central elements carried by punctures and
//! boundary components.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::coeff::{mutate_coefficients, CoefficientTuple};
use crate::error::{Error, Result};
use crate::linop::{CyclicOperator, GeneratorKind, StateSpace, WeylMonomial};
use crate::rep::{move_operator, Realization};
use crate::root::RootData;
use crate::surface::{
    corner_classes, edge_incidence, exchange_matrix, DottedTriangulation, ElementaryMove,
    MoveKind,
};

/// The Weyl-monomial weight a triangle contributes at each of its sides,
/// counted counter-clockwise from the dotted corner.
pub(crate) fn side_weight(site: usize, side: usize, realization: Realization) -> WeylMonomial {
    use GeneratorKind::{P, U};
    match (realization, side) {
        (_, 0) => WeylMonomial::generator(site, U, -1),
        (Realization::Standard, 1) => WeylMonomial::weyl_product(&[
            WeylMonomial::generator(site, U, 1),
            WeylMonomial::generator(site, P, -1),
        ]),
        (Realization::Primed, 1) => WeylMonomial::generator(site, P, -1),
        (Realization::Standard, _) => WeylMonomial::generator(site, P, 1),
        (Realization::Primed, _) => WeylMonomial::weyl_product(&[
            WeylMonomial::generator(site, U, 1),
            WeylMonomial::generator(site, P, 1),
        ]),
    }
}

/// The bare generator `X̄_α`: the symmetric product of the side weights at
/// the one or two triangle corners the edge touches.
pub fn edge_monomial(
    state: &DottedTriangulation,
    alpha: usize,
    realization: Realization,
) -> Result<WeylMonomial> {
    let occ = state.occurrences(alpha);
    if occ.is_empty() {
        return Err(Error::UnknownSite { site: alpha });
    }
    let weights: Vec<WeylMonomial> = occ
        .iter()
        .map(|&(t, s)| side_weight(t, s, realization))
        .collect();
    Ok(WeylMonomial::weyl_product(&weights))
}

/// A cluster generator in operator form: the exact Weyl monomial of the
/// bare generator `X̄_α` together with the coefficient ratio `y_α` scaling
/// it to `X_α = y_α X̄_α`.
#[derive(Debug, Clone)]
pub struct ClusterGenerator {
    pub edge: usize,
    pub monomial: WeylMonomial,
    pub coefficient: Complex64,
}

impl ClusterGenerator {
    /// Dense operator of the bare generator `X̄_α`.
    pub fn bare(&self, rd: &RootData, space: &StateSpace) -> Result<CyclicOperator> {
        self.monomial.materialize(rd, space)
    }

    /// Dense operator of the scaled generator `X_α = y_α X̄_α`.
    pub fn scaled(&self, rd: &RootData, space: &StateSpace) -> Result<CyclicOperator> {
        Ok(self.bare(rd, space)?.scale(self.coefficient))
    }
}

/// Embed the cluster variable at `alpha` through the side weights of the
/// given dotted triangulation.
pub fn embed_cluster_variable(
    state: &DottedTriangulation,
    tuple: &CoefficientTuple,
    alpha: usize,
    realization: Realization,
) -> Result<ClusterGenerator> {
    Ok(ClusterGenerator {
        edge: alpha,
        monomial: edge_monomial(state, alpha, realization)?,
        coefficient: tuple.get(alpha)?.ratio(),
    })
}

/// The image `μ*_κ(X̄'_α)` of a post-flip generator under the mutation at
/// `κ`, materialized through the embedding of the state *before* the flip:
/// `X̄_κ^{-1}` at the flipped edge itself, and otherwise `X̄_α` dressed by
/// `|ε_{ακ}|` linear factors in `X̄_κ^{±1}` weighted by the coefficient
/// coordinates at `κ`.
pub fn quantum_mutation_image(
    rd: &RootData,
    space: &StateSpace,
    state: &DottedTriangulation,
    tuple: &CoefficientTuple,
    kappa: usize,
    alpha: usize,
    realization: Realization,
) -> Result<CyclicOperator> {
    let eps = exchange_matrix(state);
    if eps.is_frozen(kappa) {
        return Err(Error::FrozenFlip { edge: kappa });
    }
    let xk = edge_monomial(state, kappa, realization)?;
    if alpha == kappa {
        return xk.inverse().materialize(rd, space);
    }
    let e = eps.entry(alpha, kappa);
    let mut acc = edge_monomial(state, alpha, realization)?.materialize(rd, space)?;
    if e == 0 {
        return Ok(acc);
    }
    let p = tuple.get(kappa)?;
    let id = CyclicOperator::identity(space);
    if e < 0 {
        let xk_op = xk.materialize(rd, space)?;
        for j in 1..=(-e) {
            let factor = id
                .scale(p.minus)
                .add(&xk_op.scale(p.plus * rd.q_pow(2 * j - 1)));
            acc = acc.mul(&factor);
        }
    } else {
        let xk_inv = xk.inverse().materialize(rd, space)?;
        for j in 1..=e {
            let factor = id
                .scale(p.plus)
                .add(&xk_inv.scale(p.minus * rd.q_pow(2 * j - 1)));
            let inverse = factor.inverse().ok_or_else(|| Error::DegenerateParameter {
                reason: "singular mutation factor".into(),
            })?;
            acc = acc.mul(&inverse);
        }
    }
    Ok(acc)
}

/// The monomial part of the mutation at `κ` on the `branch = ±1` side:
/// `X̄_κ^{-1}` at the flipped edge and `⟦X̄_α X̄_κ^{[branch·ε_{ακ}]_+}⟧`
/// elsewhere.  Composing with the dilogarithm conjugation
/// `Ad_{Ψ_p(X̄_κ)}` (branch `+1`) or `Ad^{-1}_{Ψ_{p*}(X̄_κ^{-1})}` with the
/// swapped coefficient (branch `-1`) recovers the full mutation.
pub fn monomial_mutation_image(
    state: &DottedTriangulation,
    kappa: usize,
    alpha: usize,
    branch: i64,
    realization: Realization,
) -> Result<WeylMonomial> {
    let xk = edge_monomial(state, kappa, realization)?;
    if alpha == kappa {
        return Ok(xk.inverse());
    }
    let eps = exchange_matrix(state);
    let m = (branch.signum() * eps.entry(alpha, kappa)).max(0);
    let xa = edge_monomial(state, alpha, realization)?;
    Ok(WeylMonomial::weyl_product(&[xa, xk.pow(m)]))
}

/// Largest residual, over all edges, of the naturality of one elementary
/// move: the move operator conjugates the embedding of the new state into
/// the embedding of the old one, composed with the coefficient mutation
/// when the move is a flip.
pub fn compatibility_check(
    rd: &RootData,
    mv: &ElementaryMove,
    tuple: &CoefficientTuple,
    realization: Realization,
) -> Result<f64> {
    let space = StateSpace::new(rd, &mv.before.labels());
    let (v_op, tuple_after) = match mv.kind {
        MoveKind::Flip { edge, .. } => {
            let eps = exchange_matrix(&mv.before);
            let p = tuple.get(edge)?;
            (
                move_operator(rd, &space, mv.kind, Some(&p), realization)?,
                mutate_coefficients(rd, &eps, tuple, edge)?,
            )
        }
        _ => (
            move_operator(rd, &space, mv.kind, None, realization)?,
            tuple.clone(),
        ),
    };
    let v_inv = v_op.inverse().ok_or_else(|| Error::DegenerateParameter {
        reason: "move operator is singular".into(),
    })?;
    let mut worst: f64 = 0.0;
    for alpha in mv.after.edge_ids() {
        let image = embed_cluster_variable(&mv.after, &tuple_after, alpha, realization)?
            .bare(rd, &space)?;
        let lhs = v_op.mul(&image).mul(&v_inv);
        let rhs = match mv.kind {
            MoveKind::Flip { edge, .. } => {
                quantum_mutation_image(rd, &space, &mv.before, tuple, edge, alpha, realization)?
            }
            _ => embed_cluster_variable(&mv.before, tuple, alpha, realization)?
                .bare(rd, &space)?,
        };
        worst = worst.max(lhs.distance(&rhs));
    }
    Ok(worst)
}

/// Which central element of the embedded algebra to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CentralClass {
    /// The loop element of the i-th puncture, in corner-class order.
    Puncture(usize),
    /// The element of the i-th boundary component, in smallest-edge order.
    Boundary(usize),
    /// The symmetric product of all bare generators, one factor per edge.
    HBar,
    /// The coefficient-scaled variant of `HBar`, one `X_α` per edge.
    H,
}

/// A central element as exact operator data: the Weyl monomial together
/// with the scalar coefficient load multiplying it.
pub fn central_element(
    state: &DottedTriangulation,
    tuple: &CoefficientTuple,
    which: CentralClass,
    realization: Realization,
) -> Result<(WeylMonomial, Complex64)> {
    let edges = state.edge_ids();
    let mut mult: BTreeMap<usize, i64> = BTreeMap::new();
    match which {
        CentralClass::Puncture(i) => {
            let classes = corner_classes(state);
            let class = classes
                .punctures
                .get(i)
                .ok_or(Error::UnknownSite { site: i })?;
            for &e in &edges {
                mult.insert(e, edge_incidence(state, class, e) as i64);
            }
        }
        CentralClass::Boundary(i) => {
            let classes = corner_classes(state);
            let (_, marked_ids) = classes
                .components
                .get(i)
                .ok_or(Error::UnknownSite { site: i })?;
            for &e in &edges {
                let ends: usize = marked_ids
                    .iter()
                    .map(|&c| edge_incidence(state, &classes.marked[c], e))
                    .sum();
                mult.insert(e, ends as i64);
            }
        }
        CentralClass::HBar | CentralClass::H => {
            for &e in &edges {
                mult.insert(e, 1);
            }
        }
    }
    let factors: Vec<WeylMonomial> = edges
        .iter()
        .map(|&e| Ok(edge_monomial(state, e, realization)?.pow(mult[&e])))
        .collect::<Result<_>>()?;
    let monomial = WeylMonomial::weyl_product(&factors);
    let coefficient = match which {
        CentralClass::H => {
            let mut load = Complex64::new(1.0, 0.0);
            for &e in &edges {
                load *= tuple.get(e)?.ratio();
            }
            load
        }
        _ => Complex64::new(1.0, 0.0),
    };
    Ok((monomial, coefficient))
}
