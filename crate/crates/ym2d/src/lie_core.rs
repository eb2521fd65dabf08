//! su(2) Lie-algebra kernel.
//!
//! Fixes the basis `t_a = -(i/2) sigma_a`, so that `[t_a, t_b] = eps_{abc} t_c`
//! and the class angle of `exp(x)` equals the norm `|x|`. Group elements are
//! stored as unit quaternions; the 2x2 unitary matrix is derived on demand.
//! The Bernoulli generating functions `F±`, `G±` are evaluated spectrally on
//! `ad_x` (exact for su(2)), with truncated power series kept alongside for
//! cross-checks.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::sync::OnceLock;
use thiserror::Error;

/// Log branch cut guard: `log_map` refuses class angles above `2π - BRANCH_TOL`.
pub const BRANCH_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LieError {
    /// Group element at (or too close to) the cut locus of `log`.
    #[error("group element at the log branch point (class angle {angle})")]
    BranchPoint { angle: f64 },
    /// Scalar or operator argument outside the convergence domain.
    #[error("argument outside domain: |x| = {norm} >= 2*pi")]
    Domain { norm: f64 },
    /// 2x2 matrix is not unitary with unit determinant to 1e-12.
    #[error("matrix is not in SU(2): residual {residual}")]
    NotUnitary { residual: f64 },
}

/// Structure constants eps_{abc} of the basis `[t_a, t_b] = eps_{abc} t_c`.
pub fn epsilon(a: usize, b: usize, c: usize) -> f64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Element of su(2) in the fixed basis {t_1, t_2, t_3}.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LieVector {
    pub coeffs: [f64; 3],
}

impl LieVector {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Self {
        Self { coeffs: [c1, c2, c3] }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// Basis vector t_a, a in 0..3.
    pub fn basis(a: usize) -> Self {
        let mut c = [0.0; 3];
        c[a] = 1.0;
        Self { coeffs: c }
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Invariant pairing normalized so that the basis is orthonormal.
    pub fn dot(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut c = [0.0; 3];
        for i in 0..3 {
            c[i] = self.coeffs[i] + other.coeffs[i];
        }
        Self { coeffs: c }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut c = [0.0; 3];
        for i in 0..3 {
            c[i] = self.coeffs[i] - other.coeffs[i];
        }
        Self { coeffs: c }
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut c = self.coeffs;
        for v in &mut c {
            *v *= s;
        }
        Self { coeffs: c }
    }

    /// The adjoint action as a real 3x3 matrix, `ad(x) y = [x, y]`.
    pub fn ad_matrix(&self) -> [[f64; 3]; 3] {
        let [x1, x2, x3] = self.coeffs;
        [[0.0, -x3, x2], [x3, 0.0, -x1], [-x2, x1, 0.0]]
    }
}

/// `[x, y]` in the fixed basis; the cross product for our conventions.
pub fn bracket(x: &LieVector, y: &LieVector) -> LieVector {
    let [x1, x2, x3] = x.coeffs;
    let [y1, y2, y3] = y.coeffs;
    LieVector::new(x2 * y3 - x3 * y2, x3 * y1 - x1 * y3, x1 * y2 - x2 * y1)
}

/// Element of the dual su(2)*, paired componentwise with [`LieVector`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DualVector {
    pub coeffs: [f64; 3],
}

impl DualVector {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Self {
        Self { coeffs: [c1, c2, c3] }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn pair(&self, v: &LieVector) -> f64 {
        self.coeffs
            .iter()
            .zip(&v.coeffs)
            .map(|(a, b)| a * b)
            .sum()
    }
}

/// SU(2) element, stored as a unit quaternion `w + x i + y j + z k` with
/// `i = -i sigma_1`, `j = -i sigma_2`, `k = -i sigma_3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    quat: [f64; 4],
}

impl GroupElement {
    pub fn identity() -> Self {
        Self { quat: [1.0, 0.0, 0.0, 0.0] }
    }

    /// Builds from a raw quaternion, renormalizing to unit length.
    pub fn from_quaternion(q: [f64; 4]) -> Self {
        let n = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
        assert!(n > 0.0, "zero quaternion");
        Self { quat: [q[0] / n, q[1] / n, q[2] / n, q[3] / n] }
    }

    pub fn quaternion(&self) -> [f64; 4] {
        self.quat
    }

    /// Builds from a 2x2 complex matrix, checking SU(2) membership to 1e-12.
    pub fn from_matrix(m: &[[Complex64; 2]; 2]) -> Result<Self, LieError> {
        let w = (m[0][0].re + m[1][1].re) / 2.0;
        let z = (m[1][1].im - m[0][0].im) / 2.0;
        let x = -(m[0][1].im + m[1][0].im) / 2.0;
        let y = (m[1][0].re - m[0][1].re) / 2.0;
        let g = Self { quat: [w, x, y, z] };
        let back = g.matrix();
        let mut residual: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                residual = residual.max((back[r][c] - m[r][c]).norm());
            }
        }
        let unit = (w * w + x * x + y * y + z * z - 1.0).abs();
        residual = residual.max(unit);
        if residual > 1e-12 {
            return Err(LieError::NotUnitary { residual });
        }
        Ok(g)
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        let [w, x, y, z] = self.quat;
        [
            [Complex64::new(w, -z), Complex64::new(-y, -x)],
            [Complex64::new(y, -x), Complex64::new(w, z)],
        ]
    }

    /// Group multiplication (Hamilton product).
    pub fn mul(&self, other: &Self) -> Self {
        let [a0, a1, a2, a3] = self.quat;
        let [b0, b1, b2, b3] = other.quat;
        Self {
            quat: [
                a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
                a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
                a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
                a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
            ],
        }
    }

    /// Inverse = conjugate transpose.
    pub fn dagger(&self) -> Self {
        let [w, x, y, z] = self.quat;
        Self { quat: [w, -x, -y, -z] }
    }

    /// Conjugacy invariant: the angle `theta` in `[0, 2π)` with matrix
    /// eigenvalues `e^{±i theta/2}`.
    pub fn class_angle(&self) -> f64 {
        let [w, x, y, z] = self.quat;
        let s = (x * x + y * y + z * z).sqrt();
        2.0 * s.atan2(w)
    }

    pub fn trace(&self) -> f64 {
        2.0 * self.quat[0]
    }
}

/// Exponential map `g -> G` in the fixed basis; `exp(x)` has class angle `|x|`
/// for `|x| < 2π`.
pub fn exp_map(x: &LieVector) -> GroupElement {
    let theta = x.norm();
    let half = theta / 2.0;
    // sin(θ/2)/θ with the θ→0 limit 1/2
    let s = if theta < 1e-12 { 0.5 - theta * theta / 48.0 } else { half.sin() / theta };
    GroupElement {
        quat: [
            half.cos(),
            s * x.coeffs[0],
            s * x.coeffs[1],
            s * x.coeffs[2],
        ],
    }
}

/// Principal logarithm; errors at the cut locus (class angle near 2π).
pub fn log_map(g: &GroupElement) -> Result<LieVector, LieError> {
    let theta = g.class_angle();
    if theta > 2.0 * std::f64::consts::PI - BRANCH_TOL {
        return Err(LieError::BranchPoint { angle: theta });
    }
    let [_, x, y, z] = g.quat;
    let s = (x * x + y * y + z * z).sqrt();
    if s < 1e-300 {
        return Ok(LieVector::zero());
    }
    Ok(LieVector::new(theta * x / s, theta * y / s, theta * z / s))
}

/// Baker-Campbell-Hausdorff: `log(exp(x) exp(y))`, exact at matrix level.
pub fn bch(x: &LieVector, y: &LieVector) -> Result<LieVector, LieError> {
    log_map(&exp_map(x).mul(&exp_map(y)))
}

fn bernoulli_table(bound: usize) -> Vec<BigRational> {
    let mut values = Vec::with_capacity(bound + 1);
    values.push(BigRational::one());
    for n in 1..=bound {
        // B_n = -1/(n+1) * sum_{k<n} C(n+1, k) B_k
        let mut sum = BigRational::zero();
        let mut binom = BigInt::one(); // C(n+1, 0)
        for (k, bk) in values.iter().enumerate() {
            sum += BigRational::from_integer(binom.clone()) * bk;
            binom = binom * BigInt::from(n + 1 - k) / BigInt::from(k + 1);
        }
        values.push(-sum / BigRational::from_integer(BigInt::from(n + 1)));
    }
    values
}

/// Exact Bernoulli numbers B_0..B_bound.
#[derive(Debug, Clone)]
pub struct BernoulliCache {
    values: Vec<BigRational>,
}

impl BernoulliCache {
    pub fn new(bound: usize) -> Self {
        Self { values: bernoulli_table(bound) }
    }

    pub fn bound(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> &BigRational {
        &self.values[n]
    }

    pub fn get_f64(&self, n: usize) -> f64 {
        self.values[n].to_f64().expect("Bernoulli number in f64 range")
    }
}

const SHARED_BERNOULLI_BOUND: usize = 64;

fn shared_bernoulli() -> &'static BernoulliCache {
    static CACHE: OnceLock<BernoulliCache> = OnceLock::new();
    CACHE.get_or_init(|| BernoulliCache::new(SHARED_BERNOULLI_BOUND))
}

/// Exact Bernoulli number B_n for n <= 64; panics beyond the shared bound
/// (build a [`BernoulliCache`] for larger n).
pub fn bernoulli(n: usize) -> BigRational {
    shared_bernoulli().get(n).clone()
}

/// Coefficients of the Bernoulli polynomial B_n(t), constant term first:
/// `B_n(t) = sum_k C(n,k) B_k t^{n-k}`.
pub fn bernoulli_polynomial(n: usize) -> Vec<BigRational> {
    let cache = shared_bernoulli();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    let mut binom = BigInt::one();
    for k in 0..=n {
        // coefficient of t^{n-k} is C(n,k) B_k
        coeffs[n - k] = BigRational::from_integer(binom.clone()) * cache.get(k);
        binom = binom * BigInt::from(n - k) / BigInt::from(k + 1);
    }
    coeffs
}

fn expm1_c(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        // z + z²/2 + z³/6 + z⁴/24 + z⁵/120, error ~ |z|^6
        z * (1.0 + z / 2.0 * (1.0 + z / 3.0 * (1.0 + z / 4.0 * (1.0 + z / 5.0))))
    } else {
        z.exp() - 1.0
    }
}

/// `F_+` on complex arguments; used by the spectral operator evaluation.
pub fn f_plus_c(z: Complex64) -> Complex64 {
    if z.norm() < 1e-7 {
        1.0 + z / 2.0 + z * z / 12.0
    } else {
        z / (-expm1_c(-z))
    }
}

/// `F_-` on complex arguments.
pub fn f_minus_c(z: Complex64) -> Complex64 {
    if z.norm() < 1e-7 {
        -1.0 + z / 2.0 - z * z / 12.0
    } else {
        z / (-expm1_c(z))
    }
}

/// `G_+(t, z) = (1 - e^{-tz}) / (1 - e^{-z})`.
pub fn g_plus_c(t: f64, z: Complex64) -> Complex64 {
    if z.norm() < 1e-7 {
        // t + t(t-1)/2 z + O(z²)
        Complex64::new(t, 0.0) + z * (t * (t - 1.0) / 2.0)
    } else {
        expm1_c(-t * z) / expm1_c(-z)
    }
}

/// `G_-(t, z) = (1 - e^{(1-t)z}) / (1 - e^{z})`.
pub fn g_minus_c(t: f64, z: Complex64) -> Complex64 {
    g_plus_c(1.0 - t, -z)
}

fn check_scalar_domain(x: f64) -> Result<(), LieError> {
    if x.abs() >= 2.0 * std::f64::consts::PI {
        Err(LieError::Domain { norm: x.abs() })
    } else {
        Ok(())
    }
}

/// `F_+(x) = x / (1 - e^{-x})`, the Bernoulli-number generating function.
pub fn f_plus(x: f64) -> Result<f64, LieError> {
    check_scalar_domain(x)?;
    Ok(f_plus_c(Complex64::new(x, 0.0)).re)
}

/// `F_-(x) = x / (1 - e^{x}) = -F_+(-x)`.
pub fn f_minus(x: f64) -> Result<f64, LieError> {
    check_scalar_domain(x)?;
    Ok(f_minus_c(Complex64::new(x, 0.0)).re)
}

/// `G_+(t, x) = (1 - e^{-tx}) / (1 - e^{-x})`.
pub fn g_plus(t: f64, x: f64) -> Result<f64, LieError> {
    check_scalar_domain(x)?;
    Ok(g_plus_c(t, Complex64::new(x, 0.0)).re)
}

/// `G_-(t, x) = (1 - e^{(1-t)x}) / (1 - e^{x})`.
pub fn g_minus(t: f64, x: f64) -> Result<f64, LieError> {
    check_scalar_domain(x)?;
    Ok(g_minus_c(t, Complex64::new(x, 0.0)).re)
}

/// Applies `f(ad_x)` to `y` by the spectral decomposition of `ad_x`
/// (eigenvalues 0, ±i|x|): exact, no series truncation.
///
/// For `f` with real Taylor coefficients and `f(i theta) = u + iv`:
/// `f(ad_x) y = f(0) y_par + u y_perp + (v/theta) [x, y]`.
fn spectral_apply(
    f: impl Fn(Complex64) -> Complex64,
    x: &LieVector,
    y: &LieVector,
) -> LieVector {
    let theta = x.norm();
    if theta < 1e-14 {
        let f0 = f(Complex64::new(0.0, 0.0)).re;
        return y.scale(f0);
    }
    let f0 = f(Complex64::new(0.0, 0.0)).re;
    let fi = f(Complex64::new(0.0, theta));
    let (u, v) = (fi.re, fi.im);
    let xhat = x.scale(1.0 / theta);
    let par = xhat.scale(xhat.dot(y));
    let perp = y.sub(&par);
    par.scale(f0).add(&perp.scale(u)).add(&bracket(x, y).scale(v / theta))
}

fn check_gribov(x: &LieVector) -> Result<(), LieError> {
    let n = x.norm();
    if n >= 2.0 * std::f64::consts::PI {
        Err(LieError::Domain { norm: n })
    } else {
        Ok(())
    }
}

/// `F_+(ad_x) y`, spectrally.
pub fn f_plus_ad(x: &LieVector, y: &LieVector) -> Result<LieVector, LieError> {
    check_gribov(x)?;
    Ok(spectral_apply(f_plus_c, x, y))
}

/// `F_-(ad_x) y`, spectrally.
pub fn f_minus_ad(x: &LieVector, y: &LieVector) -> Result<LieVector, LieError> {
    check_gribov(x)?;
    Ok(spectral_apply(f_minus_c, x, y))
}

/// `G_+(t, ad_x) y`, spectrally.
pub fn g_plus_ad(t: f64, x: &LieVector, y: &LieVector) -> Result<LieVector, LieError> {
    check_gribov(x)?;
    Ok(spectral_apply(|z| g_plus_c(t, z), x, y))
}

/// `G_-(t, ad_x) y`, spectrally.
pub fn g_minus_ad(t: f64, x: &LieVector, y: &LieVector) -> Result<LieVector, LieError> {
    check_gribov(x)?;
    Ok(spectral_apply(|z| g_minus_c(t, z), x, y))
}

/// Jacobian factor of the exponential map,
/// `det(sinh(ad_x/2) / (ad_x/2))' = (sin(|x|/2) / (|x|/2))^2`
/// (the ad-eigenvalues are ±i|x|, so the sinh evaluates to a sine).
pub fn det_sinh_factor(x: &LieVector) -> f64 {
    let u = x.norm() / 2.0;
    let s = if u < 1e-8 { 1.0 - u * u / 6.0 } else { u.sin() / u };
    s * s
}

/// Truncated power series in a scalar or in `ad_x`.
#[derive(Debug, Clone)]
pub struct TruncatedSeries {
    /// Coefficient of x^n at index n.
    pub coeffs: Vec<f64>,
}

impl TruncatedSeries {
    /// Series of `F_+` through order `n`: coefficients `(-1)^j B_j / j!`.
    pub fn f_plus(n: usize) -> Self {
        let cache = shared_bernoulli();
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut fact = 1.0;
        for j in 0..=n {
            if j > 0 {
                fact *= j as f64;
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            coeffs.push(sign * cache.get_f64(j) / fact);
        }
        Self { coeffs }
    }

    /// Series of `F_-` through order `n`: coefficients `-B_j / j!`.
    pub fn f_minus(n: usize) -> Self {
        let cache = shared_bernoulli();
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut fact = 1.0;
        for j in 0..=n {
            if j > 0 {
                fact *= j as f64;
            }
            coeffs.push(-cache.get_f64(j) / fact);
        }
        Self { coeffs }
    }

    /// Series of `G_+(t, ·)` through order `n`:
    /// coefficient of x^j is `(-1)^j (B_{j+1}(t) - B_{j+1}) / (j+1)!`.
    pub fn g_plus(t: f64, n: usize) -> Self {
        let cache = shared_bernoulli();
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut fact = 1.0; // (j+1)!
        for j in 0..=n {
            fact *= (j + 1) as f64;
            let poly = bernoulli_polynomial(j + 1);
            let mut bt = 0.0;
            for (k, c) in poly.iter().enumerate() {
                bt += c.to_f64().unwrap() * t.powi(k as i32);
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            coeffs.push(sign * (bt - cache.get_f64(j + 1)) / fact);
        }
        Self { coeffs }
    }

    /// Series of `G_-(t, ·)` through order `n`, via `G_-(t,x) = G_+(1-t,-x)`.
    pub fn g_minus(t: f64, n: usize) -> Self {
        let mut s = Self::g_plus(1.0 - t, n);
        for (j, c) in s.coeffs.iter_mut().enumerate() {
            if j % 2 == 1 {
                *c = -*c;
            }
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval_scalar(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Applies the truncated series in `ad_x` to `y`.
    pub fn apply_ad(&self, x: &LieVector, y: &LieVector) -> LieVector {
        let mut acc = LieVector::zero();
        let mut power = *y;
        for (j, &c) in self.coeffs.iter().enumerate() {
            if j > 0 {
                power = bracket(x, &power);
            }
            acc = acc.add(&power.scale(c));
        }
        acc
    }
}
