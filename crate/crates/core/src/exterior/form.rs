//! Alternating k-forms with constant real coefficients.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num = 1usize;
    for i in 0..k {
        num = num * (n - i) / (i + 1);
    }
    num
}

/// All strictly increasing k-tuples from {0, .., n-1} in lexicographic order.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n, k));
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let remaining = k - cur.len();
        for i in start..=(n - remaining) {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    if k == 0 {
        out.push(Vec::new());
    } else if k <= n {
        rec(0, n, k, &mut cur, &mut out);
    }
    out
}

/// Lexicographic position of an increasing tuple among all increasing
/// k-tuples from {0, .., n-1}.
pub(crate) fn rank(n: usize, tuple: &[usize]) -> usize {
    let k = tuple.len();
    let mut r = 0usize;
    let mut prev: isize = -1;
    for (p, &i) in tuple.iter().enumerate() {
        for j in (prev + 1) as usize..i {
            r += binomial(n - 1 - j, k - 1 - p);
        }
        prev = i as isize;
    }
    r
}

/// Sorts indices in place, returning the permutation sign, or `None` when an
/// index repeats.
pub(crate) fn sort_with_sign(idx: &mut [usize]) -> Option<f64> {
    let mut sign = 1.0;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    for w in idx.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some(sign)
}

/// Merges two disjoint increasing tuples into one, with the sign of the
/// interleaving permutation. `None` when they share an index.
pub(crate) fn merge_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, f64)> {
    let mut merged = Vec::with_capacity(a.len() + b.len());
    merged.extend_from_slice(a);
    merged.extend_from_slice(b);
    let sign = sort_with_sign(&mut merged)?;
    Some((merged, sign))
}

/// An alternating k-form on R^n with constant coefficients, stored over
/// strictly increasing index tuples in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct AltForm {
    dim: usize,
    degree: usize,
    coeffs: Vec<f64>,
}

impl AltForm {
    pub fn zero(dim: usize, degree: usize) -> Result<Self> {
        if degree > dim {
            return Err(Error::DegreeOutOfRange { degree, dim });
        }
        Ok(AltForm {
            dim,
            degree,
            coeffs: vec![0.0; binomial(dim, degree)],
        })
    }

    /// The scalar c as a degree-0 form.
    pub fn scalar(dim: usize, c: f64) -> Self {
        AltForm {
            dim,
            degree: 0,
            coeffs: vec![c],
        }
    }

    /// The coordinate form dx^{i1} ^ .. ^ dx^{ik} for the given indices,
    /// which need not be sorted; the sign of the sorting permutation is
    /// absorbed into the coefficient.
    pub fn coordinate(dim: usize, indices: &[usize]) -> Result<Self> {
        let mut f = AltForm::zero(dim, indices.len())?;
        f.add_term(indices, 1.0)?;
        Ok(f)
    }

    pub fn from_fn(dim: usize, degree: usize, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let mut out = AltForm::zero(dim, degree)?;
        for (pos, tuple) in subsets(dim, degree).iter().enumerate() {
            out.coeffs[pos] = f(tuple);
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficients over increasing tuples, lexicographic.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    /// Coefficient on an arbitrary index tuple, with the antisymmetry sign;
    /// zero when an index repeats.
    pub fn coeff(&self, indices: &[usize]) -> f64 {
        assert_eq!(indices.len(), self.degree, "coefficient arity mismatch");
        let mut idx = indices.to_vec();
        match sort_with_sign(&mut idx) {
            None => 0.0,
            Some(s) => s * self.coeffs[rank(self.dim, &idx)],
        }
    }

    /// Adds c to the coefficient of the (possibly unsorted) index tuple.
    pub fn add_term(&mut self, indices: &[usize], c: f64) -> Result<()> {
        if indices.len() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: indices.len(),
            });
        }
        for &i in indices {
            if i >= self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    got: i + 1,
                });
            }
        }
        let mut idx = indices.to_vec();
        if let Some(s) = sort_with_sign(&mut idx) {
            let pos = rank(self.dim, &idx);
            self.coeffs[pos] += s * c;
        }
        Ok(())
    }

    /// Evaluates on k vectors: sum of coefficients times the corresponding
    /// k x k minors of the column matrix of arguments.
    pub fn evaluate(&self, vectors: &[DVector<f64>]) -> Result<f64> {
        if vectors.len() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: vectors.len(),
            });
        }
        for v in vectors {
            if v.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    got: v.len(),
                });
            }
        }
        if self.degree == 0 {
            return Ok(self.coeffs[0]);
        }
        let k = self.degree;
        let mut total = 0.0;
        let mut minor = DMatrix::zeros(k, k);
        for (pos, tuple) in subsets(self.dim, k).iter().enumerate() {
            let c = self.coeffs[pos];
            if c == 0.0 {
                continue;
            }
            for (row, &i) in tuple.iter().enumerate() {
                for (col, v) in vectors.iter().enumerate() {
                    minor[(row, col)] = v[i];
                }
            }
            total += c * minor.determinant();
        }
        Ok(total)
    }

    /// Graded-commutative wedge product.
    pub fn wedge(&self, other: &AltForm) -> Result<AltForm> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut out = AltForm::zero(self.dim, self.degree + other.degree)?;
        let left = subsets(self.dim, self.degree);
        let right = subsets(self.dim, other.degree);
        for (pa, ta) in left.iter().enumerate() {
            let ca = self.coeffs[pa];
            if ca == 0.0 {
                continue;
            }
            for (pb, tb) in right.iter().enumerate() {
                let cb = other.coeffs[pb];
                if cb == 0.0 {
                    continue;
                }
                if let Some((merged, sign)) = merge_sign(ta, tb) {
                    out.coeffs[rank(self.dim, &merged)] += sign * ca * cb;
                }
            }
        }
        Ok(out)
    }

    /// Interior product i_v: contraction of the first slot with the vector.
    pub fn interior(&self, v: &DVector<f64>) -> Result<AltForm> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        if self.degree == 0 {
            return Err(Error::InteriorOfScalar);
        }
        let mut out = AltForm::zero(self.dim, self.degree - 1)?;
        for (pos, tuple) in subsets(self.dim, self.degree).iter().enumerate() {
            let c = self.coeffs[pos];
            if c == 0.0 {
                continue;
            }
            let mut sign = 1.0;
            for p in 0..tuple.len() {
                let vi = v[tuple[p]];
                if vi != 0.0 {
                    let mut rest: Vec<usize> = tuple.clone();
                    rest.remove(p);
                    out.coeffs[rank(self.dim, &rest)] += sign * vi * c;
                }
                sign = -sign;
            }
        }
        Ok(out)
    }

    /// Extension of a linear map M to a degree-preserving derivation:
    /// (i_M a)(X1, .., Xk) = sum_m a(X1, .., M Xm, .., Xk).
    pub fn map_derivation(&self, m: &DMatrix<f64>) -> Result<AltForm> {
        if m.nrows() != self.dim || m.ncols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: m.nrows(),
            });
        }
        let mut out = AltForm::zero(self.dim, self.degree)?;
        if self.degree == 0 {
            return Ok(out);
        }
        for (pos, tuple) in subsets(self.dim, self.degree).iter().enumerate() {
            let mut acc = 0.0;
            let mut replaced = tuple.clone();
            for p in 0..tuple.len() {
                for b in 0..self.dim {
                    let w = m[(b, tuple[p])];
                    if w == 0.0 {
                        continue;
                    }
                    replaced[p] = b;
                    acc += w * self.coeff(&replaced);
                }
                replaced[p] = tuple[p];
            }
            out.coeffs[pos] = acc;
        }
        Ok(out)
    }

    /// Raised coefficients a^I = det(g_inv[I, J]) a_J summed over increasing J.
    fn raise(&self, g_inv: &DMatrix<f64>) -> Vec<f64> {
        let k = self.degree;
        let tuples = subsets(self.dim, k);
        if k == 0 {
            return self.coeffs.clone();
        }
        let mut up = vec![0.0; self.coeffs.len()];
        let mut minor = DMatrix::zeros(k, k);
        for (pi, ti) in tuples.iter().enumerate() {
            let mut acc = 0.0;
            for (pj, tj) in tuples.iter().enumerate() {
                let c = self.coeffs[pj];
                if c == 0.0 {
                    continue;
                }
                for (r, &a) in ti.iter().enumerate() {
                    for (s, &b) in tj.iter().enumerate() {
                        minor[(r, s)] = g_inv[(a, b)];
                    }
                }
                acc += minor.determinant() * c;
            }
            up[pi] = acc;
        }
        up
    }

    /// Hodge star for a positive-definite metric; `orientation` is +1 or -1
    /// and flips the coordinate volume form.
    pub fn hodge_star(&self, g: &DMatrix<f64>, orientation: f64) -> Result<AltForm> {
        if g.nrows() != self.dim || g.ncols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: g.nrows(),
            });
        }
        let chol = g.clone().cholesky().ok_or(Error::NotPositiveDefinite)?;
        let sqrt_det: f64 = (0..self.dim).map(|i| chol.l_dirty()[(i, i)]).product();
        let g_inv = chol.inverse();
        let up = self.raise(&g_inv);
        let n = self.dim;
        let k = self.degree;
        let mut out = AltForm::zero(n, n - k)?;
        for (pi, ti) in subsets(n, k).iter().enumerate() {
            if up[pi] == 0.0 {
                continue;
            }
            let mut complement: Vec<usize> = (0..n).filter(|i| !ti.contains(i)).collect();
            let (_, sign) = merge_sign(ti, &complement).expect("disjoint by construction");
            let pos = rank(n, &{
                complement.sort_unstable();
                complement.clone()
            });
            out.coeffs[pos] += orientation * sqrt_det * sign * up[pi];
        }
        Ok(out)
    }

    /// Pullback along a linear map with the given target-by-source Jacobian:
    /// self lives on the target (dimension = rows), the result on the source.
    pub fn pullback(&self, jacobian: &DMatrix<f64>) -> Result<AltForm> {
        if jacobian.nrows() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: jacobian.nrows(),
            });
        }
        let n_src = jacobian.ncols();
        let k = self.degree;
        if k > n_src {
            return Err(Error::DegreeOutOfRange { degree: k, dim: n_src });
        }
        let mut out = AltForm::zero(n_src, k)?;
        if k == 0 {
            out.coeffs[0] = self.coeffs[0];
            return Ok(out);
        }
        let src_tuples = subsets(n_src, k);
        let tgt_tuples = subsets(self.dim, k);
        let mut minor = DMatrix::zeros(k, k);
        for (pi, ti) in src_tuples.iter().enumerate() {
            let mut acc = 0.0;
            for (pj, tj) in tgt_tuples.iter().enumerate() {
                let c = self.coeffs[pj];
                if c == 0.0 {
                    continue;
                }
                for (r, &row) in tj.iter().enumerate() {
                    for (s, &col) in ti.iter().enumerate() {
                        minor[(r, s)] = jacobian[(row, col)];
                    }
                }
                acc += c * minor.determinant();
            }
            out.coeffs[pi] = acc;
        }
        Ok(out)
    }

    /// Squared norm with |w|^2 = sum over increasing tuples of w_I w^I,
    /// matching (1/k!) w_{a..} w^{a..} in component conventions.
    pub fn norm_sq_with_metric(&self, g: &DMatrix<f64>) -> Result<f64> {
        let chol = g.clone().cholesky().ok_or(Error::NotPositiveDefinite)?;
        let g_inv = chol.inverse();
        let up = self.raise(&g_inv);
        Ok(self
            .coeffs
            .iter()
            .zip(up.iter())
            .map(|(a, b)| a * b)
            .sum())
    }

    /// Euclidean coefficient norm.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn scale(&self, s: f64) -> AltForm {
        AltForm {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| s * c).collect(),
        }
    }

    /// Restriction to coefficients whose indices all lie in `range`; other
    /// coefficients are dropped. Used to split forms along a product
    /// decomposition of the chart.
    pub fn restrict_to_block(&self, range: std::ops::Range<usize>) -> AltForm {
        let mut out = self.clone();
        for (pos, tuple) in subsets(self.dim, self.degree).iter().enumerate() {
            if !tuple.iter().all(|i| range.contains(i)) {
                out.coeffs[pos] = 0.0;
            }
        }
        out
    }
}

impl std::ops::Add for &AltForm {
    type Output = AltForm;
    fn add(self, rhs: &AltForm) -> AltForm {
        assert_eq!(self.dim, rhs.dim, "form dimension mismatch");
        assert_eq!(self.degree, rhs.degree, "form degree mismatch");
        AltForm {
            dim: self.dim,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(rhs.coeffs.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::ops::Sub for &AltForm {
    type Output = AltForm;
    fn sub(self, rhs: &AltForm) -> AltForm {
        assert_eq!(self.dim, rhs.dim, "form dimension mismatch");
        assert_eq!(self.degree, rhs.degree, "form degree mismatch");
        AltForm {
            dim: self.dim,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(rhs.coeffs.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl std::ops::Neg for &AltForm {
    type Output = AltForm;
    fn neg(self) -> AltForm {
        self.scale(-1.0)
    }
}

/// The fundamental two-form of a metric and a complex structure,
/// w(X, Y) = g(J X, Y). The antisymmetric part is taken, which is the
/// identity whenever g is hermitian with respect to J.
pub fn kaehler_form(g: &DMatrix<f64>, j: &DMatrix<f64>) -> AltForm {
    let n = g.nrows();
    let m = j.transpose() * g;
    AltForm::from_fn(n, 2, |t| 0.5 * (m[(t[0], t[1])] - m[(t[1], t[0])]))
        .expect("degree 2 valid for n >= 2")
}
