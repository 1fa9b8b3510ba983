//! Quaternion arithmetic and the left/right triples of complex structures.
//!
//! R^4 is identified with the quaternions via the basis (1, i, j, k), and
//! R^{4m} with m quaternionic coordinates stacked in order. Left
//! multiplication by the imaginary units gives one triple of complex
//! structures, negated right multiplication gives a second triple, and the
//! two triples commute. All matrices produced here have entries in
//! {-1, 0, 1}, so the algebraic identities between them hold exactly in
//! floating point.

use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// A quaternion w + x i + y j + z k over f64.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Quaternion::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sq(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_zero(self) -> bool {
        self.norm_sq() == 0.0
    }

    /// Multiplicative inverse, q-bar / |q|^2. Undefined for zero; callers
    /// guard with `is_zero`.
    pub fn inverse(self) -> Self {
        let n = self.norm_sq();
        let c = self.conj();
        Quaternion::new(c.w / n, c.x / n, c.y / n, c.z / n)
    }

    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(s * self.w, s * self.x, s * self.y, s * self.z)
    }

    pub fn normalized(self) -> Self {
        self.scale(1.0 / self.norm())
    }

    /// Real part of the product self * other-bar, i.e. the Euclidean inner
    /// product of the two coefficient vectors.
    pub fn dot(self, other: Quaternion) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }
}

/// Hamilton product with the convention i j = k.
pub fn mul(a: Quaternion, b: Quaternion) -> Quaternion {
    Quaternion::new(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    )
}

impl std::ops::Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: Quaternion) -> Quaternion {
        mul(self, rhs)
    }
}

impl std::ops::Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.w + rhs.w, self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl std::ops::Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.w - rhs.w, self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl std::ops::Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// 4x4 matrix of left multiplication v -> q v in the basis (1, i, j, k).
pub fn left_mul_matrix(q: Quaternion) -> DMatrix<f64> {
    // Column b holds the coefficients of q * e_b.
    DMatrix::from_column_slice(
        4,
        4,
        &[
            q.w, q.x, q.y, q.z, // q * 1
            -q.x, q.w, q.z, -q.y, // q * i
            -q.y, -q.z, q.w, q.x, // q * j
            -q.z, q.y, -q.x, q.w, // q * k
        ],
    )
}

/// 4x4 matrix of right multiplication v -> v q in the basis (1, i, j, k).
pub fn right_mul_matrix(q: Quaternion) -> DMatrix<f64> {
    DMatrix::from_column_slice(
        4,
        4,
        &[
            q.w, q.x, q.y, q.z, // 1 * q
            -q.x, q.w, -q.z, q.y, // i * q
            -q.y, q.z, q.w, -q.x, // j * q
            -q.z, -q.y, q.x, q.w, // k * q
        ],
    )
}

fn block_diag(block: &DMatrix<f64>, copies: usize) -> DMatrix<f64> {
    let b = block.nrows();
    let n = b * copies;
    let mut m = DMatrix::zeros(n, n);
    for c in 0..copies {
        m.view_mut((c * b, c * b), (b, b)).copy_from(block);
    }
    m
}

/// Three anticommuting complex structures on R^n satisfying the quaternion
/// relations J1 J2 = J3 and Jr^2 = -Id, each orthogonal for the Euclidean
/// metric.
#[derive(Debug, Clone)]
pub struct HypercomplexTriple {
    dim: usize,
    mats: [DMatrix<f64>; 3],
}

impl HypercomplexTriple {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrices(&self) -> &[DMatrix<f64>; 3] {
        &self.mats
    }

    pub fn matrix(&self, r: usize) -> &DMatrix<f64> {
        &self.mats[r]
    }
}

/// The triple acting by left multiplication with i, j, k on each quaternionic
/// coordinate of R^n.
pub fn left_triple(n: usize) -> Result<HypercomplexTriple> {
    if n == 0 || n % 4 != 0 {
        return Err(Error::NotQuaternionic(n));
    }
    let copies = n / 4;
    let mats = [
        block_diag(&left_mul_matrix(Quaternion::I), copies),
        block_diag(&left_mul_matrix(Quaternion::J), copies),
        block_diag(&left_mul_matrix(Quaternion::K), copies),
    ];
    Ok(HypercomplexTriple { dim: n, mats })
}

/// The triple acting by negated right multiplication with i, j, k on each
/// quaternionic coordinate. The sign makes J1 J2 = J3 hold with the same
/// ordering convention as the left triple.
pub fn right_triple(n: usize) -> Result<HypercomplexTriple> {
    if n == 0 || n % 4 != 0 {
        return Err(Error::NotQuaternionic(n));
    }
    let copies = n / 4;
    let mats = [
        block_diag(&(-right_mul_matrix(Quaternion::I)), copies),
        block_diag(&(-right_mul_matrix(Quaternion::J)), copies),
        block_diag(&(-right_mul_matrix(Quaternion::K)), copies),
    ];
    Ok(HypercomplexTriple { dim: n, mats })
}

/// Subalgebras of the quaternions used to classify the product
/// conj(p1) * p2 of a map's coefficients. `Complex` means the span of 1 and
/// i; other embeddings of the complex line are not distinguished.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParameterClass {
    Real,
    Complex,
    Imaginary,
    Generic,
}

impl std::fmt::Display for ParameterClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ParameterClass::Real => "R",
            ParameterClass::Complex => "C",
            ParameterClass::Imaginary => "Im(Q)",
            ParameterClass::Generic => "Q",
        };
        f.write_str(s)
    }
}

impl ParameterClass {
    /// Smallest class containing both arguments.
    pub fn join(self, other: ParameterClass) -> ParameterClass {
        use ParameterClass::*;
        match (self, other) {
            (Real, c) | (c, Real) => c,
            (a, b) if a == b => a,
            _ => Generic,
        }
    }
}

/// Classifies conj(p1) * p2 into the smallest of R, span{1, i}, Im(Q), Q,
/// with absolute tolerance `tol` on the components that must vanish. The
/// degenerate pair (0, 0) lands in R.
pub fn classify_product(p1: Quaternion, p2: Quaternion, tol: f64) -> ParameterClass {
    let c = p1.conj() * p2;
    if c.x.abs() <= tol && c.y.abs() <= tol && c.z.abs() <= tol {
        ParameterClass::Real
    } else if c.y.abs() <= tol && c.z.abs() <= tol {
        ParameterClass::Complex
    } else if c.w.abs() <= tol {
        ParameterClass::Imaginary
    } else {
        ParameterClass::Generic
    }
}
