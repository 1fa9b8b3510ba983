//! Degree-four calibration forms on R^8 and their contact sets.
//!
//! Four constant-coefficient four-forms of comass one are built from the
//! commuting hypercomplex triples: the averaged quaternionic forms phi of
//! each triple, the square of a single fundamental two-form, and the
//! self-dual four-form whose stabilizer is the 21-dimensional exceptional
//! subalgebra of so(8). Their maximizers over oriented four-planes are found
//! by projected gradient ascent on the orthonormal-frame manifold, and the
//! dimension of the maximizer set is estimated by local principal-component
//! analysis.
//!
//! Normalization: the quaternionic form of a triple is scaled so that the
//! first coordinate four-plane, oriented by (1, i, j, k), evaluates to +1.
//! With the triples of [`crate::quat`] this gives phi = +(1/6) sum w_r ^ w_r
//! for the left triple and -(1/6) of it for the right triple, and every
//! four-plane closed under the right quaternionic scalar action calibrates
//! the right-triple form in its induced orientation.

mod optimize;

pub use optimize::{maximize, contact_dimension, ContactDiagnostics, ContactReport, OptimizerParams};

use crate::error::{Error, Result};
use crate::exterior::{kaehler_form, subsets, AltForm, Plane};
use crate::quat::{left_triple, right_triple, HypercomplexTriple};
use nalgebra::{DMatrix, DVector};

/// The four calibration forms, in the order of increasing contact-set
/// dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalibrationKind {
    /// (phi_I + phi_J) / 2; contact set: the circle of four-planes invariant
    /// under both quaternionic scalar actions.
    MixedIj,
    /// (1/5) w_{I1} ^ w_{I1} + (3/5) phi_J; contact set: a two-sphere.
    KaehlerPlusPhi,
    /// (1/4) Omega + (3/4) phi_J with Omega the self-dual invariant
    /// four-form of the left triple; contact set: a three-sphere.
    CayleyPlusPhi,
    /// phi_J alone; contact set: the four-sphere of right quaternionic
    /// lines.
    PhiJ,
}

impl CalibrationKind {
    pub const ALL: [CalibrationKind; 4] = [
        CalibrationKind::MixedIj,
        CalibrationKind::KaehlerPlusPhi,
        CalibrationKind::CayleyPlusPhi,
        CalibrationKind::PhiJ,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CalibrationKind::MixedIj => "mixed_ij",
            CalibrationKind::KaehlerPlusPhi => "kahler2_phi",
            CalibrationKind::CayleyPlusPhi => "cayley_phi",
            CalibrationKind::PhiJ => "phi_j",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        CalibrationKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown calibration form `{s}`")))
    }

    /// Expected contact-set dimension.
    pub fn contact_set_dimension(self) -> usize {
        match self {
            CalibrationKind::MixedIj => 1,
            CalibrationKind::KaehlerPlusPhi => 2,
            CalibrationKind::CayleyPlusPhi => 3,
            CalibrationKind::PhiJ => 4,
        }
    }
}

impl std::fmt::Display for CalibrationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A calibration form together with the triples it is built from.
#[derive(Debug, Clone)]
pub struct CalibrationSpec {
    kind: CalibrationKind,
    triple_i: HypercomplexTriple,
    triple_j: HypercomplexTriple,
}

impl CalibrationSpec {
    pub fn new(kind: CalibrationKind) -> Self {
        CalibrationSpec {
            kind,
            triple_i: left_triple(8).expect("8 is quaternionic"),
            triple_j: right_triple(8).expect("8 is quaternionic"),
        }
    }

    pub fn kind(&self) -> CalibrationKind {
        self.kind
    }

    /// Realizes the form as a constant degree-4 form on R^8.
    pub fn form(&self) -> Result<AltForm> {
        build_calibration_from(self.kind, &self.triple_i, &self.triple_j)
    }
}

fn first_block_frame() -> Vec<DVector<f64>> {
    (0..4)
        .map(|i| DVector::from_fn(8, |r, _| if r == i { 1.0 } else { 0.0 }))
        .collect()
}

/// The averaged quaternionic four-form of a triple on R^8, normalized so
/// that the first coordinate four-plane with its standard orientation
/// evaluates to +1.
pub fn build_phi(triple: &HypercomplexTriple) -> Result<AltForm> {
    if triple.dim() != 8 {
        return Err(Error::DimensionMismatch {
            expected: 8,
            got: triple.dim(),
        });
    }
    let g = DMatrix::identity(8, 8);
    let mut sum = AltForm::zero(8, 4)?;
    for r in 0..3 {
        let w = kaehler_form(&g, triple.matrix(r));
        sum = &sum + &w.wedge(&w)?;
    }
    let anchor = sum.evaluate(&first_block_frame())?;
    if anchor.abs() < 1e-9 {
        return Err(Error::Config(
            "triple does not calibrate the first coordinate plane".into(),
        ));
    }
    Ok(sum.scale(1.0 / anchor))
}

/// The self-dual four-form stabilized by the 21-dimensional exceptional
/// subalgebra of so(8), built from the left triple as
/// vol_1 + vol_2 - sum_r w_r|_1 ^ w_r|_2, where w_r|_b is the block
/// restriction of the r-th fundamental form. Coordinate quaternionic planes
/// evaluate to +1 and the form equals its own Euclidean star.
pub fn build_cayley(triple_i: &HypercomplexTriple) -> Result<AltForm> {
    if triple_i.dim() != 8 {
        return Err(Error::DimensionMismatch {
            expected: 8,
            got: triple_i.dim(),
        });
    }
    let g = DMatrix::identity(8, 8);
    let vol1 = AltForm::coordinate(8, &[0, 1, 2, 3])?;
    let vol2 = AltForm::coordinate(8, &[4, 5, 6, 7])?;
    let mut omega = &vol1 + &vol2;
    for r in 0..3 {
        let w = kaehler_form(&g, triple_i.matrix(r));
        let w1 = w.restrict_to_block(0..4);
        let w2 = w.restrict_to_block(4..8);
        omega = &omega - &w1.wedge(&w2)?;
    }
    Ok(omega)
}

/// Builds one of the four calibration forms with the standard triples.
pub fn build_calibration(kind: CalibrationKind) -> Result<AltForm> {
    CalibrationSpec::new(kind).form()
}

fn build_calibration_from(
    kind: CalibrationKind,
    triple_i: &HypercomplexTriple,
    triple_j: &HypercomplexTriple,
) -> Result<AltForm> {
    let phi_j = build_phi(triple_j)?;
    match kind {
        CalibrationKind::PhiJ => Ok(phi_j),
        CalibrationKind::MixedIj => {
            let phi_i = build_phi(triple_i)?;
            Ok(&phi_i.scale(0.5) + &phi_j.scale(0.5))
        }
        CalibrationKind::KaehlerPlusPhi => {
            let g = DMatrix::identity(8, 8);
            let w1 = kaehler_form(&g, triple_i.matrix(0));
            let sq = w1.wedge(&w1)?;
            Ok(&sq.scale(1.0 / 5.0) + &phi_j.scale(3.0 / 5.0))
        }
        CalibrationKind::CayleyPlusPhi => {
            let omega = build_cayley(triple_i)?;
            Ok(&omega.scale(0.25) + &phi_j.scale(0.75))
        }
    }
}

/// Evaluates a k-form on the oriented k-plane spanned by the orthonormal
/// frame columns. Swapping two frame columns flips the sign.
pub fn evaluate_on_plane(w: &AltForm, plane: &Plane) -> Result<f64> {
    if w.degree() != plane.degree() {
        return Err(Error::DegreeMismatch {
            expected: w.degree(),
            got: plane.degree(),
        });
    }
    if w.dim() != plane.dim() {
        return Err(Error::DimensionMismatch {
            expected: w.dim(),
            got: plane.dim(),
        });
    }
    w.evaluate(&plane.columns())
}

/// The symmetric operator b -> star(omega ^ b) on two-forms, as a matrix in
/// the basis of increasing coordinate pairs. For the four-form of
/// [`build_cayley`] the spectrum is -1 with multiplicity 21 (the stabilizer
/// subalgebra) and +3 with multiplicity 7.
pub fn wedge_star_operator(omega: &AltForm) -> Result<DMatrix<f64>> {
    if omega.dim() != 8 || omega.degree() != 4 {
        return Err(Error::DegreeMismatch {
            expected: 4,
            got: omega.degree(),
        });
    }
    let g = DMatrix::identity(8, 8);
    let pairs = subsets(8, 2);
    let m = pairs.len();
    let mut k = DMatrix::zeros(m, m);
    for (col, pair) in pairs.iter().enumerate() {
        let beta = AltForm::coordinate(8, pair)?;
        let image = omega.wedge(&beta)?.hodge_star(&g, 1.0)?;
        for (row, c) in image.coeffs().iter().enumerate() {
            k[(row, col)] = *c;
        }
    }
    // Symmetric up to roundoff by construction.
    Ok((&k + &k.transpose()) * 0.5)
}

/// Orthogonal projector onto the 7-dimensional eigenspace (eigenvalue +3) of
/// the wedge-star operator. A two-form lies in the stabilizer subalgebra
/// exactly when this projector annihilates it.
pub fn complement_projector(omega: &AltForm) -> Result<DMatrix<f64>> {
    let k = wedge_star_operator(omega)?;
    let m = k.nrows();
    let eig = nalgebra::SymmetricEigen::new(k);
    let mut p = DMatrix::zeros(m, m);
    let mut count = 0;
    for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda > 1.0 {
            let v = eig.eigenvectors.column(i);
            p += v * v.transpose();
            count += 1;
        }
    }
    if count != 7 {
        return Err(Error::Config(format!(
            "wedge-star operator has {count} eigenvalues above 1, expected 7"
        )));
    }
    Ok(p)
}

/// Converts a skew matrix to the corresponding two-form (b_{ab} = A_{ab} for
/// a < b).
pub fn skew_to_form(a: &DMatrix<f64>) -> Result<AltForm> {
    let n = a.nrows();
    AltForm::from_fn(n, 2, |t| 0.5 * (a[(t[0], t[1])] - a[(t[1], t[0])]))
}

/// Frame of the right quaternionic line through the unit vector v, namely
/// (v, v i, v j, v k) with the right scalar action applied blockwise. The
/// resulting orientation is the one in which the right-triple form phi_J
/// evaluates to +1.
pub fn right_line_frame(alpha: crate::quat::Quaternion, beta: crate::quat::Quaternion) -> Result<Plane> {
    let norm = (alpha.norm_sq() + beta.norm_sq()).sqrt();
    if norm == 0.0 {
        return Err(Error::DegenerateTau);
    }
    let units = [
        crate::quat::Quaternion::ONE,
        crate::quat::Quaternion::I,
        crate::quat::Quaternion::J,
        crate::quat::Quaternion::K,
    ];
    let mut frame = DMatrix::zeros(8, 4);
    for (c, &q) in units.iter().enumerate() {
        let top = (alpha * q).scale(1.0 / norm).to_array();
        let bot = (beta * q).scale(1.0 / norm).to_array();
        for r in 0..4 {
            frame[(r, c)] = top[r];
            frame[(r + 4, c)] = bot[r];
        }
    }
    Plane::new(frame)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::Quaternion;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_plane(rng: &mut impl Rng, n: usize, k: usize) -> Plane {
        let m = DMatrix::from_fn(n, k, |_, _| {
            let u: f64 = rng.gen_range(-1.0..1.0);
            u
        });
        Plane::from_spanning(&m).unwrap()
    }

    fn block_plane() -> Plane {
        let mut frame = DMatrix::zeros(8, 4);
        for i in 0..4 {
            frame[(i, i)] = 1.0;
        }
        Plane::new(frame).unwrap()
    }

    #[test]
    fn phi_forms_evaluate_to_one_on_first_block() {
        let phi_i = build_phi(&left_triple(8).unwrap()).unwrap();
        let phi_j = build_phi(&right_triple(8).unwrap()).unwrap();
        let p = block_plane();
        assert!((evaluate_on_plane(&phi_i, &p).unwrap() - 1.0).abs() < 1e-14);
        assert!((evaluate_on_plane(&phi_j, &p).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn phi_j_calibrates_every_right_line() {
        let phi_j = build_phi(&right_triple(8).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for _ in 0..50 {
            let a = Quaternion::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let b = Quaternion::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            if (a.norm_sq() + b.norm_sq()) < 1e-2 {
                continue;
            }
            let line = right_line_frame(a, b).unwrap();
            let v = evaluate_on_plane(&phi_j, &line).unwrap();
            assert!((v - 1.0).abs() < 1e-12, "right line not calibrated: {v}");
        }
    }

    #[test]
    fn phi_i_on_right_lines_matches_closed_form() {
        // On the right line of slope c the left-triple form evaluates to
        // (3 + 8 Re(c)^2 - 2|c|^2 + 3|c|^4) / (3 (1 + |c|^2)^2), derived by
        // expanding the fundamental forms in the canonical frame. Both forms
        // agree (and equal 1) exactly when the slope is real, i.e. on lines
        // invariant under both scalar actions.
        let phi_i = build_phi(&left_triple(8).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..50 {
            let c = Quaternion::new(
                rng.gen_range(-1.5..1.5),
                rng.gen_range(-1.5..1.5),
                rng.gen_range(-1.5..1.5),
                rng.gen_range(-1.5..1.5),
            );
            let line = right_line_frame(Quaternion::ONE, c).unwrap();
            let v = evaluate_on_plane(&phi_i, &line).unwrap();
            let u = c.norm_sq();
            let expected = (3.0 + 8.0 * c.w * c.w - 2.0 * u + 3.0 * u * u)
                / (3.0 * (1.0 + u) * (1.0 + u));
            assert!((v - expected).abs() < 1e-12);
        }
        // Real slope: both calibrate.
        let line = right_line_frame(Quaternion::ONE, Quaternion::new(0.7, 0.0, 0.0, 0.0)).unwrap();
        assert!((evaluate_on_plane(&phi_i, &line).unwrap() - 1.0).abs() < 1e-13);
        // Slope i: the left form drops to 1/3.
        let line = right_line_frame(Quaternion::ONE, Quaternion::I).unwrap();
        assert!((evaluate_on_plane(&phi_i, &line).unwrap() - 1.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn phi_values_stay_inside_unit_interval_on_random_planes() {
        let phi_j = build_phi(&right_triple(8).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut saw_interior = false;
        for _ in 0..2000 {
            let p = random_plane(&mut rng, 8, 4);
            let v = evaluate_on_plane(&phi_j, &p).unwrap();
            assert!(v.abs() <= 1.0 + 1e-9, "comass bound violated: {v}");
            if v.abs() < 0.99 {
                saw_interior = true;
            }
        }
        assert!(saw_interior);
    }

    #[test]
    fn phi_j_invariant_under_own_triple() {
        let triple = right_triple(8).unwrap();
        let phi_j = build_phi(&triple).unwrap();
        for r in 0..3 {
            let d = phi_j.map_derivation(triple.matrix(r)).unwrap();
            assert!(d.max_abs() < 1e-13);
        }
    }

    #[test]
    fn cayley_is_self_dual_with_unit_blocks() {
        let omega = build_cayley(&left_triple(8).unwrap()).unwrap();
        let g = DMatrix::identity(8, 8);
        let star = omega.hodge_star(&g, 1.0).unwrap();
        assert!((&star - &omega).max_abs() < 1e-13);
        assert!((evaluate_on_plane(&omega, &block_plane()).unwrap() - 1.0).abs() < 1e-14);
        let mut frame = DMatrix::zeros(8, 4);
        for i in 0..4 {
            frame[(i + 4, i)] = 1.0;
        }
        let second = Plane::new(frame).unwrap();
        assert!((evaluate_on_plane(&omega, &second).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cayley_selects_imaginary_slopes_among_right_lines() {
        let omega = build_cayley(&left_triple(8).unwrap()).unwrap();
        // Imaginary slopes calibrate.
        for c in [Quaternion::I, Quaternion::J, Quaternion::K] {
            let line = right_line_frame(Quaternion::ONE, c).unwrap();
            assert!((evaluate_on_plane(&omega, &line).unwrap() - 1.0).abs() < 1e-13);
        }
        let mixed = Quaternion::new(0.0, 0.3, -1.1, 0.4);
        let line = right_line_frame(Quaternion::ONE, mixed).unwrap();
        assert!((evaluate_on_plane(&omega, &line).unwrap() - 1.0).abs() < 1e-13);
        // Real slope 1 reverses orientation; slope 1 + j sits strictly
        // inside. Values follow 1 - 8 Re(c)^2 / (1 + |c|^2)^2.
        let line = right_line_frame(Quaternion::ONE, Quaternion::ONE).unwrap();
        assert!((evaluate_on_plane(&omega, &line).unwrap() + 1.0).abs() < 1e-13);
        let line = right_line_frame(Quaternion::ONE, Quaternion::ONE + Quaternion::J).unwrap();
        assert!((evaluate_on_plane(&omega, &line).unwrap() - 1.0 / 9.0).abs() < 1e-13);
    }

    #[test]
    fn wedge_star_spectrum_is_minus_one_21_plus_three_7() {
        let omega = build_cayley(&left_triple(8).unwrap()).unwrap();
        let k = wedge_star_operator(&omega).unwrap();
        let eig = nalgebra::SymmetricEigen::new(k);
        let mut low = 0;
        let mut high = 0;
        for &l in eig.eigenvalues.iter() {
            if (l + 1.0).abs() < 1e-10 {
                low += 1;
            } else if (l - 3.0).abs() < 1e-10 {
                high += 1;
            } else {
                panic!("unexpected eigenvalue {l}");
            }
        }
        assert_eq!((low, high), (21, 7));
    }

    #[test]
    fn right_line_rotation_triples_stabilize_cayley_exactly_for_imaginary_slopes() {
        // For a right line L of slope c, the three skew matrices J_r P_L
        // (right-triple action restricted to the line) annihilate the
        // self-dual four-form under the derivation action exactly when the
        // slope has no real part; real and generic slopes move it by O(1).
        // These triples are what curvature samples of the superposed
        // geometries span, so this pins the stabilizer test used by the
        // holonomy classification.
        let it = left_triple(8).unwrap();
        let jt = right_triple(8).unwrap();
        let omega = build_cayley(&it).unwrap();
        let line_projector = |c: Quaternion| right_line_frame(Quaternion::ONE, c).unwrap().projector();
        let zero_block = {
            let mut frame = DMatrix::zeros(8, 4);
            for i in 0..4 {
                frame[(i, i)] = 1.0;
            }
            Plane::new(frame).unwrap().projector()
        };
        let imaginary = [
            zero_block,
            line_projector(Quaternion::I),
            line_projector(Quaternion::J),
            line_projector(Quaternion::new(0.0, 0.3, -1.1, 0.4)),
        ];
        for p in &imaginary {
            for r in 0..3 {
                let a = jt.matrix(r) * p;
                assert!((&a + &a.transpose()).abs().max() < 1e-13, "not skew");
                assert!(omega.map_derivation(&a).unwrap().max_abs() < 1e-12);
            }
        }
        for c in [Quaternion::ONE, Quaternion::ONE + Quaternion::J] {
            let p = line_projector(c);
            let moved = omega.map_derivation(&(jt.matrix(0) * &p)).unwrap().max_abs();
            assert!(moved > 0.5, "non-imaginary slope should move the form, got {moved}");
        }
        // The same triples always have vanishing complex trace, and commute
        // with I1 exactly for slopes in the span of 1 and i.
        let a_i = jt.matrix(0) * line_projector(Quaternion::I);
        assert!((it.matrix(0) * &a_i).trace().abs() < 1e-13);
        assert!((it.matrix(0) * &a_i - &a_i * it.matrix(0)).abs().max() < 1e-13);
        let a_j = jt.matrix(0) * line_projector(Quaternion::J);
        assert!((it.matrix(0) * &a_j - &a_j * it.matrix(0)).abs().max() > 0.5);
    }

    #[test]
    fn calibration_rows_evaluate_to_one_on_first_block() {
        let p = block_plane();
        for kind in CalibrationKind::ALL {
            let w = build_calibration(kind).unwrap();
            let v = evaluate_on_plane(&w, &p).unwrap();
            assert!((v - 1.0).abs() < 1e-13, "{kind}: {v}");
        }
    }

    #[test]
    fn evaluation_is_orientation_odd() {
        let w = build_calibration(CalibrationKind::PhiJ).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let p = random_plane(&mut rng, 8, 4);
        let mut swapped = p.frame().clone();
        swapped.swap_columns(0, 1);
        let q = Plane::new(swapped).unwrap();
        let v1 = evaluate_on_plane(&w, &p).unwrap();
        let v2 = evaluate_on_plane(&w, &q).unwrap();
        assert!((v1 + v2).abs() < 1e-13);
    }

    #[test]
    fn degree_mismatch_is_rejected() {
        let w = build_calibration(CalibrationKind::PhiJ).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        let p = random_plane(&mut rng, 8, 3);
        assert!(evaluate_on_plane(&w, &p).is_err());
    }
}
