use crate::error::{Error, Result};
use crate::linop::{site_operator, weyl_monomial, CyclicOperator, GeneratorKind, StateSpace};
use crate::root::RootData;
use num_complex::Complex64;
use rand::Rng;

const DEGENERACY_FLOOR: f64 = 1e-12;

/// A point `(p⁺, p⁻)` of the Fermat curve `(p⁺)^N + (p⁻)^N = 1`, the
/// parameter space of the cyclic quantum dilogarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FermatPoint {
    pub plus: Complex64,
    pub minus: Complex64,
}

impl FermatPoint {
    pub fn new(plus: Complex64, minus: Complex64) -> FermatPoint {
        FermatPoint { plus, minus }
    }

    /// The distinguished point `(0, 1)`, where the dilogarithm is constant 1.
    pub fn unit() -> FermatPoint {
        FermatPoint {
            plus: Complex64::new(0.0, 0.0),
            minus: Complex64::new(1.0, 0.0),
        }
    }

    /// Coordinate ratio `y = p⁺ / p⁻`.
    pub fn ratio(&self) -> Complex64 {
        self.plus / self.minus
    }

    /// The involution swapping the two coordinates.
    pub fn swap(&self) -> FermatPoint {
        FermatPoint {
            plus: self.minus,
            minus: self.plus,
        }
    }

    /// Defect `|(p⁺)^N + (p⁻)^N - 1|` of the curve equation.
    pub fn curve_defect(&self, rd: &RootData) -> f64 {
        let n = rd.n() as i32;
        (self.plus.powi(n) + self.minus.powi(n) - Complex64::new(1.0, 0.0)).norm()
    }

    /// Fiber translation `(p⁺, p⁻) ↦ (q^{2k} p⁺, q^{2k} p⁻)` over a fixed ratio.
    pub fn fiber_shift(&self, rd: &RootData, k: i64) -> FermatPoint {
        let z = rd.q_pow(2 * k);
        FermatPoint {
            plus: self.plus * z,
            minus: self.minus * z,
        }
    }

    pub fn approx_eq(&self, other: &FermatPoint, tol: f64) -> bool {
        crate::root::scalar_eq(self.plus, other.plus, tol)
            && crate::root::scalar_eq(self.minus, other.minus, tol)
    }
}

/// Principal section of the Fermat curve over the ratio line: from
/// `y = p⁺/p⁻` produce the point with `p⁻ = (1 + y^N)^{-1/N}` on the
/// principal branch.  `y = 0` maps to the exact unit point.
pub fn fermat_from_ratio(rd: &RootData, y: Complex64) -> Result<FermatPoint> {
    if y.norm() == 0.0 {
        return Ok(FermatPoint::unit());
    }
    let n = rd.n();
    let base = Complex64::new(1.0, 0.0) + y.powi(n as i32);
    if base.norm() < DEGENERACY_FLOOR {
        return Err(Error::SectionPole {
            magnitude: base.norm(),
        });
    }
    let minus = base.powf(-1.0 / n as f64);
    Ok(FermatPoint {
        plus: y * minus,
        minus,
    })
}

/// The involution `(p⁺, p⁻) ↦ (p⁻, p⁺)` of the Fermat curve; the ratio
/// inverts.  The closure point `(0, 1)` maps to the formal point `(1, 0)`.
/// Inverse coefficients produced here pair with the original through the
/// inversion identity `Ψ_p(q^{2k}) Ψ_{p⁻¹}(q^{-2k}) = γ(k) ζ_inv`, which
/// `psi_values` realizes exactly.
pub fn fermat_inverse(p: &FermatPoint) -> FermatPoint {
    p.swap()
}

/// Cocycle weight `w(p | k) = Π_{j=1}^{k} (p⁻ + q^{2j-1} p⁺)`, extended
/// N-periodically in `k`.
pub fn w_function(rd: &RootData, p: &FermatPoint, k: i64) -> Result<Complex64> {
    let k = k.rem_euclid(rd.n());
    let mut acc = Complex64::new(1.0, 0.0);
    for j in 1..=k {
        let factor = p.minus + rd.q_pow(2 * j - 1) * p.plus;
        if factor.norm() < DEGENERACY_FLOOR {
            return Err(Error::DegenerateParameter {
                reason: format!("cocycle weight factor {j} vanishes"),
            });
        }
        acc *= factor;
    }
    Ok(acc)
}

/// Normalization `Ψ_p(1)` for a point with `|p⁺| ≤ |p⁻|`:
/// `(p⁻)^{(N-1)/2} Π_{j=1}^{N-1} (1 + q^{2j+1} y)^{j/N}` with `y = p⁺/p⁻`.
/// The prefactor is an integer power (N odd), and each remaining factor
/// takes its principal branch; since `|y| ≤ 1` keeps every `1 + u` in the
/// closed right half-disk around 1, the product is single-valued and
/// continuous on this half of the curve, vanishing only where `y^N = -1`.
fn psi_unit_value(rd: &RootData, p: &FermatPoint) -> Result<Complex64> {
    let n = rd.n();
    if p.minus.norm() < DEGENERACY_FLOOR {
        return Err(Error::DegenerateParameter {
            reason: "dilogarithm coefficient with both coordinates vanishing".into(),
        });
    }
    let y = p.plus / p.minus;
    let mut acc = p.minus.powi(((n - 1) / 2) as i32);
    for j in 1..n {
        let factor = Complex64::new(1.0, 0.0) + rd.q_pow(2 * j + 1) * y;
        if factor.norm() < DEGENERACY_FLOOR {
            return Err(Error::DegenerateParameter {
                reason: format!("dilogarithm normalization factor {j} vanishes"),
            });
        }
        acc *= factor.powf(j as f64 / n as f64);
    }
    Ok(acc)
}

/// The N values `Ψ_p(q^{2k})`, k = 0..N-1, of the cyclic quantum
/// dilogarithm at `p`.
///
/// The values are generated from the normalization `Ψ_p(1)` by the
/// difference recursion `Ψ_p(q^{2(k+1)}) = (p⁻ + q^{2k+1}p⁺) Ψ_p(q^{2k})`,
/// so the q-difference relations hold exactly, and on the curve the
/// recursion closes up cyclically.  The normalization itself is the
/// principal-branch product when `|p⁺| ≤ |p⁻|` (where that product is
/// single-valued), and is reflected through the coordinate swap as
/// `ζ_inv / Ψ_{p⁻¹}(1)` when `|p⁺| > |p⁻|`; the two halves are thereby
/// paired so that `Ψ_p(q^{2k}) Ψ_{p⁻¹}(q^{-2k}) = γ(k) ζ_inv` holds
/// exactly for every point, and `Π_k Ψ_p(q^{2k}) = 1` stays exact on
/// both halves.  Points with `y^N ≈ -1`, where a linear factor vanishes,
/// are rejected as degenerate.
pub fn psi_values(rd: &RootData, p: &FermatPoint) -> Result<Vec<Complex64>> {
    let n = rd.n();
    let anchor = if p.plus.norm() > p.minus.norm() {
        rd.zeta_inv() / psi_unit_value(rd, &p.swap())?
    } else {
        psi_unit_value(rd, p)?
    };
    let mut values = Vec::with_capacity(n as usize);
    let mut acc = anchor;
    values.push(acc);
    for k in 1..n {
        let factor = p.minus + rd.q_pow(2 * k - 1) * p.plus;
        if factor.norm() < DEGENERACY_FLOOR {
            return Err(Error::DegenerateParameter {
                reason: format!("dilogarithm difference factor {k} vanishes"),
            });
        }
        acc *= factor;
        values.push(acc);
    }
    Ok(values)
}

/// Functional calculus `Ψ_p(X)` for a cyclic operator `X`.
pub fn psi_operator(rd: &RootData, x: &CyclicOperator, p: &FermatPoint) -> Result<CyclicOperator> {
    let values = psi_values(rd, p)?;
    crate::linop::apply_cyclic_function(rd, x, |k| values[k.rem_euclid(rd.n()) as usize])
}

/// The five Fermat points entering the pentagon identity
/// `Ψ_p(U) Ψ_{r'}(P) = Ψ_r(P) Ψ_{p'}(q^{-1}UP) Ψ_{p''}(U)`.
#[derive(Debug, Clone, Copy)]
pub struct PentagonParams {
    pub p: FermatPoint,
    pub r: FermatPoint,
    pub p_mid: FermatPoint,
    pub p_out: FermatPoint,
    pub r_out: FermatPoint,
}

impl PentagonParams {
    /// The N-element solution family over a fixed `(p, r)`: translating
    /// the intermediate point along its fiber by `q^{2s}` carries `r'`
    /// along the same fiber and rescales `p''⁻` by `q^{-2s}`, preserving
    /// all six coordinate relations and all three curve identities.
    fn fiber_branch(&self, rd: &RootData, s: i64) -> PentagonParams {
        PentagonParams {
            p: self.p,
            r: self.r,
            p_mid: self.p_mid.fiber_shift(rd, s),
            p_out: FermatPoint {
                plus: self.p_out.plus,
                minus: self.p_out.minus * rd.q_pow(-2 * s),
            },
            r_out: self.r_out.fiber_shift(rd, s),
        }
    }
}

/// Solve the pentagon coefficient constraints for `(p', p'', r')` given
/// `(p, r)`: the six coordinate relations
///
/// ```text
/// p⁻ = p'⁻ p''⁻      p⁺ r'⁻ = p'⁻ p''⁺     p⁺ r'⁺ = p'⁺
/// r'⁻ = r⁻ p'⁻       r'⁺ p''⁻ = r⁺         r'⁺ p''⁺ = r⁻ p'⁺
/// ```
///
/// The relations pin the ratio of `p'` (to `(p⁺/p⁻)·r⁺`) and then fix
/// `p''` and `r'` exactly, leaving exactly N solutions: the fiber
/// translates of the principal one.  The returned branch is the first
/// (lowest fiber offset from the principal section) for which the
/// dilogarithm pentagon identity
/// `Ψ_p(U) Ψ_{r'}(P) = Ψ_r(P) Ψ_{p'}(q^{-1}UP) Ψ_{p''}(U)` closes on the
/// one-site standard representation; for a sector of inputs no branch
/// closes it (the single-valued dilogarithm normalization jumps between
/// the five points) and the input pair is rejected as degenerate.
pub fn solve_pentagon_params(
    rd: &RootData,
    p: &FermatPoint,
    r: &FermatPoint,
) -> Result<PentagonParams> {
    if p.minus.norm() < DEGENERACY_FLOOR || r.minus.norm() < DEGENERACY_FLOOR {
        return Err(Error::DegenerateParameter {
            reason: "pentagon input with vanishing minus coordinate".into(),
        });
    }
    let y_mid = p.ratio() * r.plus;
    let p_mid = fermat_from_ratio(rd, y_mid)?;
    if p_mid.minus.norm() < DEGENERACY_FLOOR {
        return Err(Error::DegenerateParameter {
            reason: "pentagon intermediate point degenerates".into(),
        });
    }
    let r_out_minus = r.minus * p_mid.minus;
    let y_r_out = r.ratio() / p.minus;
    let r_out = FermatPoint {
        plus: y_r_out * r_out_minus,
        minus: r_out_minus,
    };
    let p_out = FermatPoint {
        plus: p.plus * r.minus,
        minus: p.minus / p_mid.minus,
    };
    let principal = PentagonParams {
        p: *p,
        r: *r,
        p_mid,
        p_out,
        r_out,
    };

    let sp = StateSpace::new(rd, &[0]);
    let u = site_operator(rd, &sp, 0, GeneratorKind::U, 1)?;
    let pop = site_operator(rd, &sp, 0, GeneratorKind::P, 1)?;
    let up = weyl_monomial(
        rd,
        &sp,
        &[(0, GeneratorKind::U, 1), (0, GeneratorKind::P, 1)],
    )?;
    let lhs_head = psi_operator(rd, &u, p)?;
    let rhs_head = psi_operator(rd, &pop, r)?;
    for s in 0..rd.n() {
        let branch = principal.fiber_branch(rd, s);
        let lhs = lhs_head.mul(&psi_operator(rd, &pop, &branch.r_out)?);
        let rhs = rhs_head
            .mul(&psi_operator(rd, &up, &branch.p_mid)?)
            .mul(&psi_operator(rd, &u, &branch.p_out)?);
        if lhs.approx_eq(&rhs, rd.tol()) {
            return Ok(branch);
        }
    }
    Err(Error::DegenerateParameter {
        reason: "no fiber branch of the intermediate coefficient closes the pentagon identity".into(),
    })
}

/// Draw a Fermat point with log-uniform ratio modulus and uniform phase,
/// resampling past section poles and dilogarithm degeneracies.
pub fn random_fermat_point<R: Rng>(rd: &RootData, rng: &mut R) -> FermatPoint {
    loop {
        let mag = f64::exp(rng.gen_range(-1.0..1.0));
        let arg = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        let y = Complex64::from_polar(mag, arg);
        if let Ok(p) = fermat_from_ratio(rd, y) {
            if psi_values(rd, &p).is_ok() {
                return p;
            }
        }
    }
}
