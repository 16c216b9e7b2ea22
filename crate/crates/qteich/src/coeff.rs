//! Fermat-curve coefficients on triangulation edges: mutation under flips,
//! transport along mapping-class move words, invariance certificates,
//! classical shadows, and the shape-parameter bookkeeping for the mapping
//! torus of a move word.

use crate::dilog::{fermat_from_ratio, FermatPoint};
use crate::error::{Error, Result};
use crate::root::RootData;
use crate::surface::{
    builtin_mapping_class, exchange_matrix, ExchangeMatrix, MappingClassSpec, MoveKind,
};
use num_complex::Complex64;
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// One Fermat-curve point per edge of a triangulation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoefficientTuple {
    points: BTreeMap<usize, FermatPoint>,
}

impl CoefficientTuple {
    pub fn new() -> CoefficientTuple {
        CoefficientTuple::default()
    }

    pub fn insert(&mut self, edge: usize, point: FermatPoint) {
        self.points.insert(edge, point);
    }

    pub fn get(&self, edge: usize) -> Result<FermatPoint> {
        self.points
            .get(&edge)
            .copied()
            .ok_or(Error::UnknownSite { site: edge })
    }

    pub fn edges(&self) -> Vec<usize> {
        self.points.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, FermatPoint)> + '_ {
        self.points.iter().map(|(&e, &p)| (e, p))
    }

    pub fn approx_eq(&self, other: &CoefficientTuple, tol: f64) -> bool {
        self.edges() == other.edges()
            && self
                .iter()
                .all(|(e, p)| p.approx_eq(&other.points[&e], tol))
    }

    /// Encode as a JSON object mapping edge ids to
    /// `[re p⁺, im p⁺, re p⁻, im p⁻]`.
    pub fn to_json(&self) -> Value {
        let mut map = serde_json::Map::new();
        for (e, p) in self.iter() {
            map.insert(
                e.to_string(),
                json!([p.plus.re, p.plus.im, p.minus.re, p.minus.im]),
            );
        }
        Value::Object(map)
    }

    pub fn from_json(value: &Value) -> Result<CoefficientTuple> {
        let bad = |what: &str| Error::InvalidPath {
            reason: format!("coefficient data: {what}"),
        };
        let map = value.as_object().ok_or_else(|| bad("expected an object"))?;
        let mut tuple = CoefficientTuple::new();
        for (key, entry) in map {
            let edge: usize = key
                .parse()
                .map_err(|_| bad(&format!("edge key {key:?} is not an integer")))?;
            let parts = entry
                .as_array()
                .filter(|a| a.len() == 4)
                .ok_or_else(|| bad("each entry must be [re+, im+, re-, im-]"))?;
            let nums: Vec<f64> = parts
                .iter()
                .map(|v| v.as_f64().ok_or_else(|| bad("expected a number")))
                .collect::<Result<_>>()?;
            tuple.insert(
                edge,
                FermatPoint::new(
                    Complex64::new(nums[0], nums[1]),
                    Complex64::new(nums[2], nums[3]),
                ),
            );
        }
        Ok(tuple)
    }
}

/// Mutate a coefficient tuple at edge `κ`: the coefficient at `κ` swaps its
/// coordinates, and every other ratio picks up `(p_κ^{sgn ε})^{ε_{ακ}}`
/// before being re-sectioned onto the curve.
pub fn mutate_coefficients(
    rd: &RootData,
    eps: &ExchangeMatrix,
    tuple: &CoefficientTuple,
    kappa: usize,
) -> Result<CoefficientTuple> {
    if eps.is_frozen(kappa) {
        return Err(Error::FrozenFlip { edge: kappa });
    }
    let pk = tuple.get(kappa)?;
    let mut out = CoefficientTuple::new();
    for (alpha, p) in tuple.iter() {
        if alpha == kappa {
            out.insert(alpha, pk.swap());
            continue;
        }
        let e = eps.entry(alpha, kappa);
        if e == 0 {
            out.insert(alpha, p);
            continue;
        }
        let base = if e > 0 { pk.plus } else { pk.minus };
        out.insert(
            alpha,
            fermat_from_ratio(rd, p.ratio() * base.powi(e as i32))?,
        );
    }
    Ok(out)
}

/// Transport a tuple along a move word by principal mutation: one tuple per
/// state of the word (flips mutate, dot rotations and label swaps do not
/// touch edge data).
pub fn transport_along_sequence(
    rd: &RootData,
    spec: &MappingClassSpec,
    start: &CoefficientTuple,
) -> Result<Vec<CoefficientTuple>> {
    let states = spec.states()?;
    let mut tuples = vec![start.clone()];
    for (j, &kind) in spec.moves.iter().enumerate() {
        let prev = tuples.last().expect("nonempty");
        let next = match kind {
            MoveKind::Flip { edge, .. } => {
                mutate_coefficients(rd, &exchange_matrix(&states[j]), prev, edge)?
            }
            _ => prev.clone(),
        };
        tuples.push(next);
    }
    Ok(tuples)
}

/// Outcome of an invariance check: per-edge endpoint residuals after
/// pulling the final tuple back through the identification, plus the worst
/// residual seen anywhere (endpoint, mutation steps, curve membership).
#[derive(Debug, Clone)]
pub struct InvarianceReport {
    pub invariant: bool,
    pub max_residual: f64,
    pub residuals: BTreeMap<usize, f64>,
}

fn point_distance(a: &FermatPoint, b: &FermatPoint) -> f64 {
    (a.plus - b.plus).norm().max((a.minus - b.minus).norm())
}

/// Verify that a coefficient chain realizes an invariant tuple for the
/// mapping class: each consecutive pair must be related by the flip
/// mutation (exact swap at the flipped edge, mutated ratios elsewhere, all
/// points on the curve), and the final tuple pulled back through the edge
/// identification must reproduce the initial one.  A singleton chain is
/// expanded by principal transport first.
pub fn check_phi_invariance(
    rd: &RootData,
    spec: &MappingClassSpec,
    chain: &[CoefficientTuple],
) -> Result<InvarianceReport> {
    let chain: Vec<CoefficientTuple> = if chain.len() == 1 {
        transport_along_sequence(rd, spec, &chain[0])?
    } else {
        chain.to_vec()
    };
    if chain.len() != spec.moves.len() + 1 {
        return Err(Error::InvalidPath {
            reason: format!(
                "coefficient chain has {} states, move word needs {}",
                chain.len(),
                spec.moves.len() + 1
            ),
        });
    }
    let states = spec.states()?;
    let mut max_residual: f64 = 0.0;
    for tuple in &chain {
        for (_, p) in tuple.iter() {
            max_residual = max_residual.max(p.curve_defect(rd));
        }
    }
    for (j, &kind) in spec.moves.iter().enumerate() {
        let (prev, next) = (&chain[j], &chain[j + 1]);
        match kind {
            MoveKind::Flip { edge: kappa, .. } => {
                let eps = exchange_matrix(&states[j]);
                let pk = prev.get(kappa)?;
                max_residual =
                    max_residual.max(point_distance(&next.get(kappa)?, &pk.swap()));
                for (alpha, p) in prev.iter() {
                    if alpha == kappa {
                        continue;
                    }
                    let e = eps.entry(alpha, kappa);
                    let base = if e > 0 { pk.plus } else { pk.minus };
                    let expected = p.ratio() * base.powi(e as i32);
                    let got = next.get(alpha)?.ratio();
                    let scale = expected.norm().max(1.0);
                    max_residual = max_residual.max((got - expected).norm() / scale);
                }
            }
            _ => {
                for (alpha, p) in prev.iter() {
                    max_residual =
                        max_residual.max(point_distance(&next.get(alpha)?, &p));
                }
            }
        }
    }
    let last = chain.last().expect("nonempty");
    let mut residuals = BTreeMap::new();
    for (&f, &initial_edge) in &spec.edge_identification {
        let residual = point_distance(&last.get(f)?, &chain[0].get(initial_edge)?);
        residuals.insert(f, residual);
        max_residual = max_residual.max(residual);
    }
    Ok(InvarianceReport {
        invariant: max_residual <= rd.tol(),
        max_residual,
        residuals,
    })
}

/// Built-in invariant coefficient chains (used by `--coeffs auto`):
///
/// * `Ta` — principal transport of `p₁ = (−1, 2^{1/N})`,
///   `p₂ = (2^{1/N}, −1)`, `p₃ = (0, 1)`, which closes exactly.
/// * `Tb_inv` — the analogous tuple with an explicit final state.
/// * `word:Ta,Tb_inv` — a tuple of golden-ratio moduli with an explicit
///   chain of fiber representatives.
/// * `identity` — the `Ta` tuple with the empty word.
pub fn builtin_coefficient_chain(rd: &RootData, name: &str) -> Result<Vec<CoefficientTuple>> {
    let n = rd.n() as f64;
    let c = |x: f64| Complex64::new(x, 0.0);
    let root = |x: f64| c(x.powf(1.0 / n));
    let tuple = |entries: [(usize, FermatPoint); 3]| {
        let mut t = CoefficientTuple::new();
        for (e, p) in entries {
            t.insert(e, p);
        }
        t
    };
    match name {
        "Ta" => {
            let start = tuple([
                (1, FermatPoint::new(c(-1.0), root(2.0))),
                (2, FermatPoint::new(root(2.0), c(-1.0))),
                (3, FermatPoint::new(c(0.0), c(1.0))),
            ]);
            transport_along_sequence(rd, &builtin_mapping_class("Ta")?, &start)
        }
        "Tb_inv" => Ok(vec![
            tuple([
                (1, FermatPoint::new(root(2.0), c(-1.0))),
                (2, FermatPoint::new(c(0.0), c(1.0))),
                (3, FermatPoint::new(c(-1.0), root(2.0))),
            ]),
            tuple([
                (1, FermatPoint::new(c(-1.0), root(2.0))),
                (2, FermatPoint::new(c(0.0), c(1.0))),
                (3, FermatPoint::new(root(2.0), c(-1.0))),
            ]),
        ]),
        "word:Ta,Tb_inv" => {
            let z = (1.0 + 5.0_f64.sqrt()) / 2.0;
            let t = z.powf(1.0 / n);
            let a1 = FermatPoint::new(c(t), c(-1.0 / t));
            let s = (1.0 - z.powi(-4)).powf(-1.0 / n);
            let a2 = FermatPoint::new(c(-t.powi(-4) * s), c(s));
            let d = (z.powi(4) - 1.0).powf(-1.0 / n);
            let mid = tuple([
                (1, FermatPoint::new(c(-1.0 / t), c(t))),
                (2, FermatPoint::new(c(-1.0 / t), c(t))),
                (3, FermatPoint::new(c(t.powi(4) * d), c(-d))),
            ]);
            Ok(vec![
                tuple([(1, a1), (2, a2), (3, a1)]),
                mid.clone(),
                mid.clone(),
                mid.clone(),
                mid,
                tuple([(1, a2), (2, a1), (3, a1)]),
            ])
        }
        "identity" => Ok(vec![tuple([
            (1, FermatPoint::new(c(-1.0), root(2.0))),
            (2, FermatPoint::new(root(2.0), c(-1.0))),
            (3, FermatPoint::new(c(0.0), c(1.0))),
        ])]),
        _ => Err(Error::UnknownMapClass { name: name.into() }),
    }
}

/// The classical shadow `Y_α = y_α^N` of a coefficient tuple.
pub fn classical_shadow(
    rd: &RootData,
    tuple: &CoefficientTuple,
) -> BTreeMap<usize, Complex64> {
    tuple
        .iter()
        .map(|(e, p)| (e, p.ratio().powi(rd.n() as i32)))
        .collect()
}

/// Classical cluster mutation of the shadow:
/// `Y'_κ = Y_κ^{-1}` and `Y'_α = Y_α (1 + Y_κ^{-sgn ε_{ακ}})^{-ε_{ακ}}`.
pub fn mutate_classical(
    eps: &ExchangeMatrix,
    shadow: &BTreeMap<usize, Complex64>,
    kappa: usize,
) -> Result<BTreeMap<usize, Complex64>> {
    if eps.is_frozen(kappa) {
        return Err(Error::FrozenFlip { edge: kappa });
    }
    let yk = *shadow
        .get(&kappa)
        .ok_or(Error::UnknownSite { site: kappa })?;
    let mut out = BTreeMap::new();
    for (&alpha, &y) in shadow {
        if alpha == kappa {
            out.insert(alpha, yk.inv());
            continue;
        }
        let e = eps.entry(alpha, kappa);
        if e == 0 {
            out.insert(alpha, y);
            continue;
        }
        let base = Complex64::new(1.0, 0.0) + yk.powi(-e.signum() as i32);
        out.insert(alpha, y * base.powi(-e as i32));
    }
    Ok(out)
}

/// Shape data of one flip: the product of the three dihedral weights
/// `p⁻ · (p⁺)^{-1} · (−q y)` of its tetrahedron, which must equal `−q`.
#[derive(Debug, Clone)]
pub struct ShapeTetrahedron {
    pub flip_index: usize,
    pub product: Complex64,
}

/// The accumulated weight along the life of one edge of the mapping torus,
/// from its creation as a flip diagonal to its destruction by a later flip
/// (following the word cyclically through the identification).  Complete
/// lifetimes must multiply to `q²`.
#[derive(Debug, Clone)]
pub struct EdgeLifetime {
    pub born_at_flip: usize,
    pub complete: bool,
    pub product: Complex64,
}

#[derive(Debug, Clone)]
pub struct ShapeReport {
    pub tetrahedra: Vec<ShapeTetrahedron>,
    pub lifetimes: Vec<EdgeLifetime>,
    pub max_tetrahedron_residual: f64,
    pub max_edge_residual: f64,
}

/// Check the shape assignment of the mapping torus of a move word with an
/// invariant coefficient chain: every flip tetrahedron multiplies to `−q`,
/// and every complete edge lifetime multiplies to `q²`.  Lifetimes that do
/// not close within the iteration cap are reported as incomplete and not
/// judged.
pub fn shape_assignment_check(
    rd: &RootData,
    spec: &MappingClassSpec,
    chain: &[CoefficientTuple],
) -> Result<ShapeReport> {
    let chain: Vec<CoefficientTuple> = if chain.len() == 1 {
        transport_along_sequence(rd, spec, &chain[0])?
    } else {
        chain.to_vec()
    };
    if chain.len() != spec.moves.len() + 1 {
        return Err(Error::InvalidPath {
            reason: format!(
                "coefficient chain has {} states, move word needs {}",
                chain.len(),
                spec.moves.len() + 1
            ),
        });
    }
    let states = spec.states()?;
    let matrices: Vec<ExchangeMatrix> = states.iter().map(exchange_matrix).collect();
    let q = rd.q_pow(1);
    let q2 = rd.q_pow(2);
    let flips: Vec<(usize, usize)> = spec
        .moves
        .iter()
        .enumerate()
        .filter_map(|(j, &kind)| match kind {
            MoveKind::Flip { edge, .. } => Some((j, edge)),
            _ => None,
        })
        .collect();

    let mut tetrahedra = Vec::new();
    let mut max_tetrahedron_residual: f64 = 0.0;
    for &(j, kappa) in &flips {
        let p = chain[j].get(kappa)?;
        let product = p.minus * p.plus.inv() * (-q * p.ratio());
        max_tetrahedron_residual = max_tetrahedron_residual.max((product + q).norm());
        tetrahedra.push(ShapeTetrahedron {
            flip_index: j,
            product,
        });
    }

    let translate = |edge: usize| -> Result<usize> {
        spec.edge_identification
            .get(&edge)
            .copied()
            .ok_or(Error::NotInvariant {
                reason: format!("edge {edge} missing from the identification"),
            })
    };
    let cycle_cap = 4 * spec.initial.edge_ids().len() + 4;
    let mut lifetimes = Vec::new();
    let mut max_edge_residual: f64 = 0.0;
    for &(birth_j, birth_kappa) in &flips {
        let mut id = birth_kappa;
        let mut product = -q * chain[birth_j].get(birth_kappa)?.ratio();
        let mut complete = false;
        'cycles: for cycle in 0..cycle_cap {
            for (j, &kind) in spec.moves.iter().enumerate() {
                if cycle == 0 && j <= birth_j {
                    continue;
                }
                let MoveKind::Flip { edge: kappa, .. } = kind else {
                    continue;
                };
                if kappa == id {
                    product *= -q * chain[j].get(kappa)?.ratio();
                    complete = true;
                    break 'cycles;
                }
                let e = matrices[j].entry(id, kappa);
                if e != 0 {
                    let p = chain[j].get(kappa)?;
                    let base = if e > 0 { p.plus } else { p.minus };
                    product *= base.powi(-e as i32);
                }
            }
            id = translate(id)?;
        }
        if complete {
            max_edge_residual = max_edge_residual.max((product - q2).norm());
        }
        lifetimes.push(EdgeLifetime {
            born_at_flip: birth_j,
            complete,
            product,
        });
    }
    Ok(ShapeReport {
        tetrahedra,
        lifetimes,
        max_tetrahedron_residual,
        max_edge_residual,
    })
}
