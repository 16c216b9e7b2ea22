use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Numerical data attached to a primitive odd root of unity.
///
/// The square `q²` is the primitive root `exp(2πi·r/N)`; the preferred
/// square root is `q = (q²)^((N+1)/2)`, which for `r = 1` equals
/// `-exp(iπ/N)`.  All integer powers of `q` are read off a single
/// unit-circle table so that `q^N = 1` holds to machine precision.
#[derive(Debug, Clone)]
pub struct RootData {
    n: i64,
    m: i64,
    root_exp: i64,
    tol: f64,
    pow2: Vec<Complex64>,
}

/// Modulus-based complex comparison: absolute for small values, relative
/// for large ones.
pub fn scalar_eq(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * 1.0_f64.max(a.norm()).max(b.norm())
}

impl RootData {
    /// Root data for `q² = exp(2πi/N)`; `N` must be odd.
    pub fn new(n: i64, tol: f64) -> Result<Self> {
        Self::with_root(n, 1, tol)
    }

    /// Root data for the alternate primitive root `q² = exp(2πi·r/N)`.
    pub fn with_root(n: i64, root_exp: i64, tol: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::DegenerateParameter {
                reason: format!("order must be positive, got {n}"),
            });
        }
        if n % 2 == 0 {
            return Err(Error::EvenN { n });
        }
        let r = root_exp.rem_euclid(n);
        if gcd(r.max(1), n) != 1 {
            return Err(Error::DegenerateParameter {
                reason: format!("exponent {root_exp} does not give a primitive root of order {n}"),
            });
        }
        let phi = 2.0 * PI * (r as f64) / (n as f64);
        let pow2 = (0..n)
            .map(|j| Complex64::from_polar(1.0, phi * (j as f64)))
            .collect();
        Ok(RootData {
            n,
            m: (n + 1) / 2,
            root_exp: r,
            tol,
            pow2,
        })
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    /// Inverse of 2 modulo N, i.e. the exponent with `(q²)^m = q`.
    pub fn half(&self) -> i64 {
        self.m
    }

    pub fn root_exp(&self) -> i64 {
        self.root_exp
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// `q²` raised to an arbitrary integer power.
    pub fn q2_pow(&self, e: i64) -> Complex64 {
        self.pow2[e.rem_euclid(self.n) as usize]
    }

    /// `q` raised to an arbitrary integer power (via `q = (q²)^m`).
    pub fn q_pow(&self, e: i64) -> Complex64 {
        let e = e.rem_euclid(self.n);
        self.pow2[(e * self.m).rem_euclid(self.n) as usize]
    }

    pub fn q(&self) -> Complex64 {
        self.q_pow(1)
    }

    pub fn q2(&self) -> Complex64 {
        self.q2_pow(1)
    }

    /// Gaussian exponential `γ(k) = q^{k²}`, reduced mod N before squaring.
    pub fn gamma(&self, k: i64) -> Complex64 {
        let k = k.rem_euclid(self.n);
        self.q_pow(k * k)
    }

    pub fn gamma_inv(&self, k: i64) -> Complex64 {
        let k = k.rem_euclid(self.n);
        self.q_pow(-k * k)
    }

    /// `Σ_k γ(k)^{±power}` for `power ∈ {1, 2}`, by direct summation.
    pub fn gauss_sum(&self, positive: bool, power: u8) -> Complex64 {
        assert!(power == 1 || power == 2, "only first and second powers are tabulated");
        let sgn: i64 = if positive { 1 } else { -1 };
        let p = power as i64;
        (0..self.n)
            .map(|k| self.q_pow(sgn * p * k * k))
            .sum()
    }

    /// The phase `exp((iπ/6)(N - 1/N))` appearing in the inversion
    /// identity of the cyclic quantum dilogarithm.
    pub fn zeta_inv(&self) -> Complex64 {
        let nf = self.n as f64;
        Complex64::from_polar(1.0, PI / 6.0 * (nf - 1.0 / nf))
    }

    /// Normalization `(N ζ₋)^{-1/3} = N^{-1/2} exp(iπ(1-N)/12)` of the
    /// order-three vertex operator.
    pub fn zeta_a(&self) -> Complex64 {
        let nf = self.n as f64;
        Complex64::from_polar(nf.powf(-0.5), PI * (1.0 - nf) / 12.0)
    }

    /// The phase `exp((iπ/6)(1 - 1/N))` measuring the twist in the
    /// degenerate groupoid relation.
    pub fn zeta_phase(&self) -> Complex64 {
        let nf = self.n as f64;
        Complex64::from_polar(1.0, PI / 6.0 * (1.0 - 1.0 / nf))
    }

    pub fn scalar_eq(&self, a: Complex64, b: Complex64) -> bool {
        scalar_eq(a, b, self.tol)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// `exp(iπx/2)`, the convention used for half-integer powers of i in the
/// closed forms of the Gauss sums.
pub fn i_pow(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, PI * x / 2.0)
}
