use crate::error::{Error, Result};
use crate::root::RootData;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::collections::BTreeMap;

/// A tensor power of the N-dimensional cyclic module, one factor per site.
///
/// Sites are identified by arbitrary (unique) labels; basis vectors are
/// indexed lexicographically with the first site most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpace {
    n: usize,
    sites: Vec<usize>,
}

impl StateSpace {
    pub fn new(rd: &RootData, sites: &[usize]) -> StateSpace {
        let mut sites = sites.to_vec();
        sites.sort_unstable();
        sites.dedup();
        StateSpace {
            n: rd.n() as usize,
            sites,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn dim(&self) -> usize {
        self.n.pow(self.sites.len() as u32)
    }

    pub fn site_position(&self, site: usize) -> Result<usize> {
        self.sites
            .iter()
            .position(|&s| s == site)
            .ok_or(Error::UnknownSite { site })
    }

    /// Flat index of a tuple of per-site positions (each reduced mod N).
    pub fn index_of(&self, tuple: &[i64]) -> usize {
        debug_assert_eq!(tuple.len(), self.sites.len());
        let n = self.n as i64;
        tuple
            .iter()
            .fold(0usize, |acc, &k| acc * self.n + k.rem_euclid(n) as usize)
    }

    pub fn tuple_of(&self, mut index: usize) -> Vec<i64> {
        let mut out = vec![0i64; self.sites.len()];
        for slot in (0..self.sites.len()).rev() {
            out[slot] = (index % self.n) as i64;
            index /= self.n;
        }
        out
    }
}

/// Dense operator on a [`StateSpace`].
#[derive(Debug, Clone)]
pub struct CyclicOperator {
    pub space: StateSpace,
    pub mat: DMatrix<Complex64>,
}

/// Vector in a [`StateSpace`].
#[derive(Debug, Clone)]
pub struct StateVector {
    pub space: StateSpace,
    pub vec: DVector<Complex64>,
}

impl StateVector {
    /// Hermitian pairing, conjugate-linear in `self` (the bra).
    pub fn inner(&self, ket: &StateVector) -> Complex64 {
        assert_eq!(self.space, ket.space, "state spaces must match");
        self.vec.dotc(&ket.vec)
    }

    pub fn norm(&self) -> f64 {
        self.vec.norm()
    }

    pub fn scale(&self, c: Complex64) -> StateVector {
        StateVector {
            space: self.space.clone(),
            vec: &self.vec * c,
        }
    }

    pub fn add(&self, other: &StateVector) -> StateVector {
        assert_eq!(self.space, other.space, "state spaces must match");
        StateVector {
            space: self.space.clone(),
            vec: &self.vec + &other.vec,
        }
    }

    pub fn approx_eq(&self, other: &StateVector, tol: f64) -> bool {
        self.space == other.space
            && (&self.vec - &other.vec).norm()
                <= tol * 1.0_f64.max(self.vec.norm()).max(other.vec.norm())
    }
}

impl CyclicOperator {
    pub fn identity(space: &StateSpace) -> CyclicOperator {
        CyclicOperator {
            space: space.clone(),
            mat: DMatrix::identity(space.dim(), space.dim()),
        }
    }

    pub fn zero(space: &StateSpace) -> CyclicOperator {
        CyclicOperator {
            space: space.clone(),
            mat: DMatrix::zeros(space.dim(), space.dim()),
        }
    }

    pub fn from_matrix(space: &StateSpace, mat: DMatrix<Complex64>) -> CyclicOperator {
        assert_eq!(mat.nrows(), space.dim());
        assert_eq!(mat.ncols(), space.dim());
        CyclicOperator {
            space: space.clone(),
            mat,
        }
    }

    pub fn mul(&self, rhs: &CyclicOperator) -> CyclicOperator {
        assert_eq!(self.space, rhs.space, "state spaces must match");
        CyclicOperator {
            space: self.space.clone(),
            mat: &self.mat * &rhs.mat,
        }
    }

    pub fn add(&self, rhs: &CyclicOperator) -> CyclicOperator {
        assert_eq!(self.space, rhs.space, "state spaces must match");
        CyclicOperator {
            space: self.space.clone(),
            mat: &self.mat + &rhs.mat,
        }
    }

    pub fn sub(&self, rhs: &CyclicOperator) -> CyclicOperator {
        assert_eq!(self.space, rhs.space, "state spaces must match");
        CyclicOperator {
            space: self.space.clone(),
            mat: &self.mat - &rhs.mat,
        }
    }

    pub fn scale(&self, c: Complex64) -> CyclicOperator {
        CyclicOperator {
            space: self.space.clone(),
            mat: &self.mat * c,
        }
    }

    pub fn adjoint(&self) -> CyclicOperator {
        CyclicOperator {
            space: self.space.clone(),
            mat: self.mat.adjoint(),
        }
    }

    pub fn inverse(&self) -> Option<CyclicOperator> {
        self.mat.clone().try_inverse().map(|m| CyclicOperator {
            space: self.space.clone(),
            mat: m,
        })
    }

    pub fn apply(&self, v: &StateVector) -> StateVector {
        assert_eq!(self.space, v.space, "state spaces must match");
        StateVector {
            space: self.space.clone(),
            vec: &self.mat * &v.vec,
        }
    }

    /// Non-negative integer matrix power.
    pub fn pow(&self, k: usize) -> CyclicOperator {
        let mut acc = CyclicOperator::identity(&self.space);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn determinant(&self) -> Complex64 {
        self.mat.clone().determinant()
    }

    pub fn frobenius(&self) -> f64 {
        self.mat.norm()
    }

    /// Relative Frobenius distance, guarded at 1 for near-zero operators.
    pub fn distance(&self, other: &CyclicOperator) -> f64 {
        assert_eq!(self.space, other.space, "state spaces must match");
        (&self.mat - &other.mat).norm()
            / 1.0_f64.max(self.mat.norm()).max(other.mat.norm())
    }

    pub fn approx_eq(&self, other: &CyclicOperator, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    pub fn commutator_norm(&self, other: &CyclicOperator) -> f64 {
        (&self.mat * &other.mat - &other.mat * &self.mat).norm()
    }

    /// Conjugation `self · x · self⁻¹`.
    pub fn conjugate(&self, x: &CyclicOperator) -> CyclicOperator {
        let inv = self
            .inverse()
            .expect("conjugating operator must be invertible");
        self.mul(x).mul(&inv)
    }

    /// The first N powers `Id, X, …, X^{N-1}` plus a cyclicity check
    /// `X^N = Id` within `tol · dim`.
    fn cyclic_powers(&self, rd: &RootData) -> Result<Vec<CyclicOperator>> {
        let n = rd.n() as usize;
        let mut powers = Vec::with_capacity(n);
        powers.push(CyclicOperator::identity(&self.space));
        for j in 1..n {
            let next = powers[j - 1].mul(self);
            powers.push(next);
        }
        let wrap = powers[n - 1].mul(self);
        let defect = (&wrap.mat - &powers[0].mat).norm();
        let allowance = rd.tol() * self.space.dim() as f64;
        if defect > allowance {
            return Err(Error::NotCyclic { defect, allowance });
        }
        Ok(powers)
    }
}

/// Which of the two standard generators a site operator uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Diagonal generator: `U|k⟩ = q^{2k}|k⟩`.
    U,
    /// Cyclic shift: `P|k⟩ = |k+1⟩`.
    P,
}

/// Per-site basis choices for tensor-product basis vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiteBasis {
    /// Standard basis vector `|k⟩`.
    Position(i64),
    /// `Σ_k q^{-2kℓ} |k⟩`, a P-eigenvector (squared norm N).
    Momentum(i64),
    /// `Σ_m γ(m)^{-1} q^{-2km} |m⟩`, an eigenvector of the normalized
    /// shift-and-phase generator (squared norm N).
    Slant(i64),
}

/// An integer-exponent monomial `q^e · Π_v U_v^{a_v} P_v^{b_v}` in the
/// Weyl normal form (all U's left of all P's, per site).
///
/// The arithmetic here is exact: products, inverses, powers and the
/// symmetric (Weyl) ordering of factor lists are all integer phase
/// bookkeeping on `(e, {a_v, b_v})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylMonomial {
    q_exp: i64,
    degrees: BTreeMap<usize, (i64, i64)>,
}

impl WeylMonomial {
    pub fn one() -> WeylMonomial {
        WeylMonomial {
            q_exp: 0,
            degrees: BTreeMap::new(),
        }
    }

    pub fn generator(site: usize, kind: GeneratorKind, exp: i64) -> WeylMonomial {
        let mut degrees = BTreeMap::new();
        let (a, b) = match kind {
            GeneratorKind::U => (exp, 0),
            GeneratorKind::P => (0, exp),
        };
        degrees.insert(site, (a, b));
        let mut m = WeylMonomial { q_exp: 0, degrees };
        m.prune();
        m
    }

    pub fn phase_exponent(&self) -> i64 {
        self.q_exp
    }

    pub fn with_phase(mut self, delta: i64) -> WeylMonomial {
        self.q_exp += delta;
        self
    }

    pub fn degrees(&self) -> &BTreeMap<usize, (i64, i64)> {
        &self.degrees
    }

    fn prune(&mut self) {
        self.degrees.retain(|_, &mut (a, b)| a != 0 || b != 0);
    }

    pub fn is_scalar(&self) -> bool {
        self.degrees.is_empty()
    }

    /// Canonical-form product: later U's move left through earlier P's.
    pub fn mul(&self, rhs: &WeylMonomial) -> WeylMonomial {
        let mut cross = 0i64;
        let mut degrees = self.degrees.clone();
        for (&site, &(a2, b2)) in &rhs.degrees {
            let entry = degrees.entry(site).or_insert((0, 0));
            let (_, b1) = (entry.0, entry.1);
            cross += a2 * b1;
            entry.0 += a2;
            entry.1 += b2;
        }
        let mut m = WeylMonomial {
            q_exp: self.q_exp + rhs.q_exp - 2 * cross,
            degrees,
        };
        m.prune();
        m
    }

    pub fn inverse(&self) -> WeylMonomial {
        let cross: i64 = self.degrees.values().map(|&(a, b)| a * b).sum();
        let degrees = self
            .degrees
            .iter()
            .map(|(&s, &(a, b))| (s, (-a, -b)))
            .collect();
        WeylMonomial {
            q_exp: -self.q_exp - 2 * cross,
            degrees,
        }
    }

    /// Integer power (any sign).
    pub fn pow(&self, k: i64) -> WeylMonomial {
        let cross: i64 = self.degrees.values().map(|&(a, b)| a * b).sum();
        let degrees = self
            .degrees
            .iter()
            .map(|(&s, &(a, b))| (s, (k * a, k * b)))
            .collect();
        let mut m = WeylMonomial {
            q_exp: k * self.q_exp - k * (k - 1) * cross,
            degrees,
        };
        m.prune();
        m
    }

    /// `X Y = q^{2c} Y X` with `c` returned.
    pub fn commutation_exponent(&self, other: &WeylMonomial) -> i64 {
        let mut c = 0i64;
        for (&site, &(a1, b1)) in &self.degrees {
            if let Some(&(a2, b2)) = other.degrees.get(&site) {
                c += a1 * b2 - a2 * b1;
            }
        }
        c
    }

    /// Symmetric (Weyl) ordering of an arbitrary factor list:
    /// `q^{-Σ_{i<j} ε(X_i, X_j)} X_1 ⋯ X_n` in canonical form.  The result
    /// is invariant under permutations of the list.
    pub fn weyl_product(factors: &[WeylMonomial]) -> WeylMonomial {
        let mut q_exp: i64 = factors.iter().map(|f| f.q_exp).sum();
        let mut degrees: BTreeMap<usize, (i64, i64)> = BTreeMap::new();
        let mut self_cross: BTreeMap<usize, i64> = BTreeMap::new();
        for f in factors {
            for (&site, &(a, b)) in &f.degrees {
                let entry = degrees.entry(site).or_insert((0, 0));
                entry.0 += a;
                entry.1 += b;
                *self_cross.entry(site).or_insert(0) += a * b;
            }
        }
        for (&site, &(a, b)) in &degrees {
            q_exp += self_cross.get(&site).copied().unwrap_or(0) - a * b;
        }
        let mut m = WeylMonomial { q_exp, degrees };
        m.prune();
        m
    }

    /// Conjugation by the per-site Gaussian diagonal `|k⟩ ↦ γ(k)|k⟩`
    /// applied at every site: `(a, b) ↦ (a + b, b)` with phase `-Σ_v b_v²`.
    pub fn conjugate_by_gaussian(&self) -> WeylMonomial {
        let mut q_exp = self.q_exp;
        let degrees = self
            .degrees
            .iter()
            .map(|(&s, &(a, b))| {
                q_exp -= b * b;
                (s, (a + b, b))
            })
            .collect();
        let mut m = WeylMonomial { q_exp, degrees };
        m.prune();
        m
    }

    /// Dense matrix of the monomial on the given space.
    pub fn materialize(&self, rd: &RootData, space: &StateSpace) -> Result<CyclicOperator> {
        for &site in self.degrees.keys() {
            space.site_position(site)?;
        }
        let dim = space.dim();
        let mut mat = DMatrix::<Complex64>::zeros(dim, dim);
        let slots: Vec<(usize, i64, i64)> = self
            .degrees
            .iter()
            .map(|(&s, &(a, b))| (space.site_position(s).unwrap(), a, b))
            .collect();
        for col in 0..dim {
            let mut tuple = space.tuple_of(col);
            let mut phase = self.q_exp;
            for &(slot, a, b) in &slots {
                phase += 2 * a * (tuple[slot] + b);
                tuple[slot] += b;
            }
            let row = space.index_of(&tuple);
            mat[(row, col)] += rd.q_pow(phase);
        }
        Ok(CyclicOperator {
            space: space.clone(),
            mat,
        })
    }
}

/// `U_site^±` or `P_site^±` as a dense operator.
pub fn site_operator(
    rd: &RootData,
    space: &StateSpace,
    site: usize,
    kind: GeneratorKind,
    exp: i64,
) -> Result<CyclicOperator> {
    WeylMonomial::generator(site, kind, exp).materialize(rd, space)
}

/// Symmetric ordering of a list of site generators, materialized.
pub fn weyl_monomial(
    rd: &RootData,
    space: &StateSpace,
    factors: &[(usize, GeneratorKind, i64)],
) -> Result<CyclicOperator> {
    let monos: Vec<WeylMonomial> = factors
        .iter()
        .map(|&(s, k, e)| WeylMonomial::generator(s, k, e))
        .collect();
    WeylMonomial::weyl_product(&monos).materialize(rd, space)
}

/// Tensor-product basis vector with a per-site basis choice.
pub fn basis_vector(rd: &RootData, space: &StateSpace, parts: &[SiteBasis]) -> Result<StateVector> {
    if parts.len() != space.sites().len() {
        return Err(Error::UnknownSite {
            site: parts.len().max(space.sites().len()),
        });
    }
    let dim = space.dim();
    let mut vec = DVector::<Complex64>::zeros(dim);
    let n = rd.n();
    for idx in 0..dim {
        let tuple = space.tuple_of(idx);
        let mut amp = Complex64::new(1.0, 0.0);
        for (slot, part) in parts.iter().enumerate() {
            let k = tuple[slot];
            let factor = match *part {
                SiteBasis::Position(k0) => {
                    if k == k0.rem_euclid(n) {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                }
                SiteBasis::Momentum(l) => rd.q_pow(-2 * k * l),
                SiteBasis::Slant(s) => rd.gamma_inv(k) * rd.q_pow(-2 * k * s),
            };
            amp *= factor;
        }
        vec[idx] = amp;
    }
    Ok(StateVector {
        space: space.clone(),
        vec,
    })
}

/// Projector onto the `q^{2k}` eigenspace of a cyclic operator.
pub fn spectral_projector(rd: &RootData, x: &CyclicOperator, k: i64) -> Result<CyclicOperator> {
    let powers = x.cyclic_powers(rd)?;
    let mut acc = CyclicOperator::zero(&x.space);
    for (j, p) in powers.iter().enumerate() {
        acc = acc.add(&p.scale(rd.q_pow(-2 * k * (j as i64))));
    }
    Ok(acc.scale(Complex64::new(1.0 / rd.n() as f64, 0.0)))
}

/// Functional calculus `f(X) = Σ_k f(k) Π_k` for cyclic `X`, evaluated
/// through the coefficient transform `Σ_j c_j X^j`.
pub fn apply_cyclic_function<F: Fn(i64) -> Complex64>(
    rd: &RootData,
    x: &CyclicOperator,
    f: F,
) -> Result<CyclicOperator> {
    let n = rd.n();
    let powers = x.cyclic_powers(rd)?;
    let values: Vec<Complex64> = (0..n).map(&f).collect();
    let mut acc = CyclicOperator::zero(&x.space);
    let scale = Complex64::new(1.0 / n as f64, 0.0);
    for (j, p) in powers.iter().enumerate() {
        let mut c = Complex64::new(0.0, 0.0);
        for (k, v) in values.iter().enumerate() {
            c += v * rd.q_pow(-2 * (k as i64) * (j as i64));
        }
        acc = acc.add(&p.scale(c * scale));
    }
    Ok(acc)
}

/// Preferred square root `X^{(N+1)/2}` of a cyclic operator; on a
/// `q^{2k}` eigenvector it takes the value `q^k`.
pub fn sqrt_operator(rd: &RootData, x: &CyclicOperator) -> Result<CyclicOperator> {
    x.cyclic_powers(rd)?;
    Ok(x.pow(rd.half() as usize))
}

/// Gaussian of a cyclic operator.
///
/// With `half = false` this is `(1/N) Σ_{i,j} q^{∓ij} X^{m(i+j)}`, acting
/// as `γ(k)^{±1}` on a `q^{2k}` eigenvector.  With `half = true` the
/// kernel is `q^{∓2ij}` and the eigenvalue is `γ(k)^{±m}`, the preferred
/// square root of the Gaussian.
pub fn gamma_operator(
    rd: &RootData,
    x: &CyclicOperator,
    positive: bool,
    half: bool,
) -> Result<CyclicOperator> {
    let n = rd.n();
    let m = rd.half();
    let powers = x.cyclic_powers(rd)?;
    let sgn: i64 = if positive { -1 } else { 1 };
    let kernel_scale: i64 = if half { 2 } else { 1 };
    let mut acc = CyclicOperator::zero(&x.space);
    for i in 0..n {
        for j in 0..n {
            let idx = (m * (i + j)).rem_euclid(n) as usize;
            let coeff = rd.q_pow(sgn * kernel_scale * i * j);
            acc = acc.add(&powers[idx].scale(coeff));
        }
    }
    Ok(acc.scale(Complex64::new(1.0 / n as f64, 0.0)))
}

/// Operator permuting tensor factors: site `v`'s index is sent to site
/// `σ(v)`.  Sites omitted from the map are fixed.
pub fn permutation_operator(
    rd: &RootData,
    space: &StateSpace,
    perm: &BTreeMap<usize, usize>,
) -> Result<CyclicOperator> {
    let _ = rd;
    let mut full: BTreeMap<usize, usize> = space.sites().iter().map(|&s| (s, s)).collect();
    for (&from, &to) in perm {
        space.site_position(from)?;
        space.site_position(to)?;
        full.insert(from, to);
    }
    {
        let mut targets: Vec<usize> = full.values().copied().collect();
        targets.sort_unstable();
        targets.dedup();
        assert_eq!(
            targets.len(),
            space.sites().len(),
            "permutation must be a bijection on the sites"
        );
    }
    let dim = space.dim();
    let mut mat = DMatrix::<Complex64>::zeros(dim, dim);
    for col in 0..dim {
        let tuple = space.tuple_of(col);
        let mut image = vec![0i64; tuple.len()];
        for (slot, &site) in space.sites().iter().enumerate() {
            let target_slot = space.site_position(full[&site]).unwrap();
            image[target_slot] = tuple[slot];
        }
        mat[(space.index_of(&image), col)] = Complex64::new(1.0, 0.0);
    }
    Ok(CyclicOperator {
        space: space.clone(),
        mat,
    })
}
