//! Explicit `SL(2,C)` representations of free groups.
//!
//! This is the ground truth the polynomial layers are checked against:
//! word evaluation, lifts of trace coordinates to matrices, pushforward by
//! free-group automorphisms, and first-order deformation theory
//! (cocycles, coboundaries, and the dimensions of `Z¹`, `B¹`, `H¹`).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{re, BoundaryData, Scalar, SurfaceModel, TracePoint};
use crate::moves::FreeAutomorphism;

/// Tolerance on `|det − 1|` for group elements.
pub const DET_TOL: f64 = 1e-9;
/// Tolerance on `|tr|` for Lie algebra elements, relative to `1 + |v|`.
pub const TRACE_TOL: f64 = 1e-12;
/// Singular values below this fraction of the largest count as zero.
pub const RANK_TOL: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2(pub [[Scalar; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);
    pub const ZERO: Mat2 = Mat2([[ZERO, ZERO], [ZERO, ZERO]]);

    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2::new(re(a), re(b), re(c), re(d))
    }

    pub fn trace(&self) -> Scalar {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> Scalar {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// Inverse of a unimodular matrix (the adjugate).
    pub fn inv_unimodular(&self) -> Mat2 {
        let [[a, b], [c, d]] = self.0;
        Mat2::new(d, -b, -c, a)
    }

    pub fn inverse(&self) -> Mat2 {
        let det = self.det();
        let [[a, b], [c, d]] = self.0;
        Mat2::new(d / det, -b / det, -c / det, a / det)
    }

    pub fn scale(&self, s: Scalar) -> Mat2 {
        let [[a, b], [c, d]] = self.0;
        Mat2::new(a * s, b * s, c * s, d * s)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_unimodular(&self) -> bool {
        (self.det() - ONE).norm() <= DET_TOL
    }

    /// `g v g⁻¹` for unimodular `g`.
    pub fn conjugate(&self, v: &Mat2) -> Mat2 {
        *self * *v * self.inv_unimodular()
    }

    /// Exponential of a traceless matrix via `v² = −det(v)·I`.
    pub fn exp_traceless(&self) -> Mat2 {
        let lambda_sq = -self.det();
        let (c, s) = if lambda_sq.norm() < 1e-8 {
            let l2 = lambda_sq;
            let l4 = l2 * l2;
            (ONE + l2 / 2.0 + l4 / 24.0, ONE + l2 / 6.0 + l4 / 120.0)
        } else {
            let l = lambda_sq.sqrt();
            (l.cosh(), l.sinh() / l)
        };
        Mat2::IDENTITY.scale(c) + self.scale(s)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let [[a, b], [c, d]] = self.0;
        let [[e, f], [g, h]] = o.0;
        Mat2::new(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        let [[a, b], [c, d]] = self.0;
        let [[e, f], [g, h]] = o.0;
        Mat2::new(a + e, b + f, c + g, d + h)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        self + (-o)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(-ONE)
    }
}

/// A letter of a free-group word: generator index and exponent `±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn inverted(self) -> Letter {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupWord {
    pub letters: Vec<Letter>,
}

impl GroupWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn generator(index: usize) -> Self {
        Self {
            letters: vec![Letter {
                generator: index,
                inverse: false,
            }],
        }
    }

    /// Parses lowercase letters as generators and uppercase letters as their
    /// inverses, with generator `i` named by the `i`-th character of `alphabet`.
    pub fn parse_with(alphabet: &str, s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|ch| {
                let lower = ch.to_ascii_lowercase();
                alphabet
                    .chars()
                    .position(|a| a == lower)
                    .map(|generator| Letter {
                        generator,
                        inverse: ch.is_ascii_uppercase(),
                    })
                    .ok_or(Error::GeneratorOutOfRange {
                        index: usize::MAX,
                        rank: alphabet.len(),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { letters })
    }

    /// [`GroupWord::parse_with`] over the alphabet `abcd…`.
    pub fn parse(s: &str) -> Result<Self> {
        Self::parse_with("abcdefghijklmnopqrstuvw", s)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().map(|l| l.inverted()).collect(),
        }
    }

    pub fn concat(&self, other: &GroupWord) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Self { letters }
    }

    /// Freely reduced form.
    pub fn reduced(&self) -> Self {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inverted()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self { letters: out }
    }

    pub fn is_reduced(&self) -> bool {
        self.letters
            .windows(2)
            .all(|w| w[0].inverted() != w[1])
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.generator).max()
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for l in &self.letters {
            let c = (b'a' + l.generator as u8) as char;
            let c = if l.inverse { c.to_ascii_uppercase() } else { c };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A homomorphism from a free group to `SL(2,C)`, given on generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Representation {
    pub generator_images: Vec<Mat2>,
}

impl Representation {
    pub fn new(generator_images: Vec<Mat2>) -> Result<Self> {
        for m in &generator_images {
            if !m.is_unimodular() {
                let d = m.det();
                return Err(Error::NotUnimodular {
                    det_re: d.re,
                    det_im: d.im,
                });
            }
        }
        Ok(Self { generator_images })
    }

    pub fn rank(&self) -> usize {
        self.generator_images.len()
    }

    pub fn eval(&self, w: &GroupWord) -> Result<Mat2> {
        word_eval(self, w)
    }

    /// Largest entrywise difference against another representation.
    pub fn distance(&self, other: &Representation) -> f64 {
        self.generator_images
            .iter()
            .zip(&other.generator_images)
            .map(|(a, b)| (*a - *b).norm())
            .fold(0.0, f64::max)
    }
}

/// Product of generator images (and inverses) in word order.
pub fn word_eval(rep: &Representation, w: &GroupWord) -> Result<Mat2> {
    let mut acc = Mat2::IDENTITY;
    for l in &w.letters {
        let g = rep
            .generator_images
            .get(l.generator)
            .ok_or(Error::GeneratorOutOfRange {
                index: l.generator,
                rank: rep.rank(),
            })?;
        acc = acc * if l.inverse { g.inv_unimodular() } else { *g };
    }
    Ok(acc)
}

/// Root `ζ` of `ζ + ζ⁻¹ = z` used by [`lift_oneholed`].
pub fn lift_root(z: Scalar) -> Scalar {
    if z == re(2.0) {
        re(1.0)
    } else if z == re(-2.0) {
        re(-1.0)
    } else {
        (z + (z * z - 4.0).sqrt()) / 2.0
    }
}

/// A representation of `⟨X, Y⟩` with `tr X = x`, `tr Y = y`, `tr XY = z`.
pub fn lift_oneholed(x: Scalar, y: Scalar, z: Scalar) -> Representation {
    let zeta = lift_root(z);
    Representation {
        generator_images: vec![
            Mat2::new(x, re(-1.0), re(1.0), re(0.0)),
            Mat2::new(re(0.0), zeta, -zeta.inv(), y),
        ],
    }
}

/// The quaternion representation: the global fixed point `(0, 0, 0)`.
pub fn quaternion_representation() -> Representation {
    let i = Complex64::i();
    Representation {
        generator_images: vec![
            Mat2::new(i, re(0.0), re(0.0), -i),
            Mat2::real(0.0, -1.0, 1.0, 0.0),
        ],
    }
}

/// Trace coordinates `(tr X, tr Y, tr XY)` of a rank-2 representation.
pub fn oneholed_traces(rep: &Representation) -> Result<[Scalar; 3]> {
    if rep.rank() != 2 {
        return Err(Error::RankMismatch(2, rep.rank()));
    }
    let x = rep.generator_images[0];
    let y = rep.generator_images[1];
    Ok([x.trace(), y.trace(), (x * y).trace()])
}

/// Pushforward `ρ ↦ ρ∘φ`: generator `i` goes to `ρ(φ(gᵢ))`.
pub fn apply_automorphism(rep: &Representation, phi: &FreeAutomorphism) -> Result<Representation> {
    let generator_images = phi
        .images
        .iter()
        .map(|w| word_eval(rep, w))
        .collect::<Result<Vec<_>>>()?;
    Ok(Representation { generator_images })
}

/// A traceless 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LieElement(Mat2);

impl LieElement {
    pub const ZERO: LieElement = LieElement(Mat2::ZERO);

    pub fn new(m: Mat2) -> Result<Self> {
        let t = m.trace().norm();
        if t > TRACE_TOL * (1.0 + m.norm()) {
            return Err(Error::NotTraceless(t));
        }
        Ok(LieElement(m))
    }

    /// `a·H + b·E + c·F` in the standard basis of `sl(2,C)`.
    pub fn from_coords([a, b, c]: [Scalar; 3]) -> Self {
        LieElement(Mat2::new(a, b, c, -a))
    }

    pub fn coords(&self) -> [Scalar; 3] {
        let [[a, b], [c, _]] = self.0 .0;
        [a, b, c]
    }

    pub fn matrix(&self) -> Mat2 {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// `Ad(g)·v`.
    pub fn ad(&self, g: &Mat2) -> LieElement {
        LieElement(g.conjugate(&self.0))
    }

    pub fn scale(&self, s: Scalar) -> LieElement {
        LieElement(self.0.scale(s))
    }
}

impl Add for LieElement {
    type Output = LieElement;
    fn add(self, o: LieElement) -> LieElement {
        LieElement(self.0 + o.0)
    }
}

impl Sub for LieElement {
    type Output = LieElement;
    fn sub(self, o: LieElement) -> LieElement {
        LieElement(self.0 - o.0)
    }
}

impl Neg for LieElement {
    type Output = LieElement;
    fn neg(self) -> LieElement {
        LieElement(-self.0)
    }
}

/// A 1-cocycle on a free group, determined by its values on generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cocycle {
    pub generator_values: Vec<LieElement>,
}

/// Value of a cocycle on a word, by `u(ab) = u(a) + Ad ρ(a)·u(b)` and
/// `u(a⁻¹) = −Ad ρ(a⁻¹)·u(a)`.
pub fn extend_cocycle(rep: &Representation, u: &Cocycle, w: &GroupWord) -> Result<LieElement> {
    if u.generator_values.len() != rep.rank() {
        return Err(Error::RankMismatch(rep.rank(), u.generator_values.len()));
    }
    let mut prefix = Mat2::IDENTITY;
    let mut value = LieElement::ZERO;
    for l in &w.letters {
        let g = rep
            .generator_images
            .get(l.generator)
            .ok_or(Error::GeneratorOutOfRange {
                index: l.generator,
                rank: rep.rank(),
            })?;
        let ug = u.generator_values[l.generator];
        let (step, letter_value) = if l.inverse {
            let gi = g.inv_unimodular();
            (gi, -ug.ad(&gi))
        } else {
            (*g, ug)
        };
        value = value + letter_value.ad(&prefix);
        prefix = prefix * step;
    }
    Ok(value)
}

/// The coboundary `g ↦ v − Ad ρ(g)·v`.
pub fn coboundary(rep: &Representation, v: &LieElement) -> Cocycle {
    Cocycle {
        generator_values: rep
            .generator_images
            .iter()
            .map(|g| *v - v.ad(g))
            .collect(),
    }
}

/// `g ↦ exp(t·u(g))·ρ(g)` on generators.
pub fn deform(rep: &Representation, u: &Cocycle, t: Scalar) -> Result<Representation> {
    if u.generator_values.len() != rep.rank() {
        return Err(Error::RankMismatch(rep.rank(), u.generator_values.len()));
    }
    Ok(Representation {
        generator_images: rep
            .generator_images
            .iter()
            .zip(&u.generator_values)
            .map(|(g, ug)| ug.matrix().scale(t).exp_traceless() * *g)
            .collect(),
    })
}

/// Largest change of `tr ρ(w)` over `words` after deforming by `u` at `t`.
pub fn trace_deviation(rep: &Representation, u: &Cocycle, t: f64, words: &[GroupWord]) -> Result<f64> {
    let moved = deform(rep, u, re(t))?;
    let mut worst: f64 = 0.0;
    for w in words {
        let d = moved.eval(w)?.trace() - rep.eval(w)?.trace();
        worst = worst.max(d.norm());
    }
    Ok(worst)
}

/// Least-squares slope of `ln dev` against `ln t`.
pub fn loglog_slope(ts: &[f64], devs: &[f64]) -> f64 {
    let n = ts.len().min(devs.len()) as f64;
    let xs: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = devs.iter().map(|d| d.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyDims {
    pub z1: usize,
    pub b1: usize,
    pub h1: usize,
}

/// Complex dimensions of `Z¹`, `B¹` and `H¹` with coefficients in `sl(2,C)`.
pub fn cohomology_dimensions(rep: &Representation) -> CohomologyDims {
    let r = rep.rank();
    let z1 = 3 * r;
    // Stack the maps v ↦ v − Ad ρ(g)·v; B¹ is their common image.
    let mut m = DMatrix::<Complex64>::zeros(3 * r, 3);
    for (gi, g) in rep.generator_images.iter().enumerate() {
        for col in 0..3 {
            let mut e = [ZERO; 3];
            e[col] = ONE;
            let v = LieElement::from_coords(e);
            let image = (v - v.ad(g)).coords();
            for row in 0..3 {
                m[(3 * gi + row, col)] = image[row];
            }
        }
    }
    let b1 = numerical_rank(m);
    CohomologyDims { z1, b1, h1: z1 - b1 }
}

fn numerical_rank(m: DMatrix<Complex64>) -> usize {
    let sv = m.singular_values();
    let largest = sv.iter().copied().fold(0.0, f64::max);
    if largest == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_TOL * largest).count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatrixFamily {
    SL2C,
    SU2,
    SL2R,
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Gaussian entries rescaled to unit determinant.
pub fn random_sl2c<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    loop {
        let mut e = || Complex64::new(normal(rng), normal(rng));
        let m = Mat2::new(e(), e(), e(), e());
        let d = m.det();
        if d.norm() > 1e-3 {
            return m.scale(d.sqrt().inv());
        }
    }
}

/// Haar-distributed element of `SU(2)` from a uniform unit quaternion.
pub fn random_su2<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    let q: [f64; 4] = std::array::from_fn(|_| normal(rng));
    let n = q.iter().map(|v| v * v).sum::<f64>().sqrt();
    let [a, b, c, d] = q.map(|v| v / n);
    Mat2::new(
        Complex64::new(a, b),
        Complex64::new(c, d),
        Complex64::new(-c, d),
        Complex64::new(a, -b),
    )
}

fn rotation(theta: f64) -> Mat2 {
    let (s, c) = theta.sin_cos();
    Mat2::real(c, -s, s, c)
}

/// `R(θ₁)·diag(eˢ, e⁻ˢ)·R(θ₂)` with uniform angles and `s ∈ [0, 2)`.
pub fn random_sl2r<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    let tau = std::f64::consts::TAU;
    let t1 = rng.gen::<f64>() * tau;
    let t2 = rng.gen::<f64>() * tau;
    let s = rng.gen::<f64>() * 2.0;
    rotation(t1) * Mat2::real(s.exp(), 0.0, 0.0, (-s).exp()) * rotation(t2)
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, family: MatrixFamily) -> Mat2 {
    match family {
        MatrixFamily::SL2C => random_sl2c(rng),
        MatrixFamily::SU2 => random_su2(rng),
        MatrixFamily::SL2R => random_sl2r(rng),
    }
}

pub fn random_representation<R: Rng + ?Sized>(
    rng: &mut R,
    rank: usize,
    family: MatrixFamily,
) -> Representation {
    Representation {
        generator_images: (0..rank).map(|_| random_matrix(rng, family)).collect(),
    }
}

pub fn random_lie_element<R: Rng + ?Sized>(rng: &mut R) -> LieElement {
    LieElement::from_coords(std::array::from_fn(|_| {
        Complex64::new(normal(rng), normal(rng))
    }))
}

/// Four-holed sphere traces of a rank-3 representation `(A, B, C)` with
/// `D = (ABC)⁻¹`: the point `(tr AB, tr BC, tr CA)` and `(a, b, c, d)`.
pub fn fourholed_traces(rep: &Representation) -> Result<(TracePoint, BoundaryData)> {
    if rep.rank() != 3 {
        return Err(Error::RankMismatch(3, rep.rank()));
    }
    let g = &rep.generator_images;
    let (a, b, c) = (g[0], g[1], g[2]);
    let d = (a * b * c).inv_unimodular();
    let p = TracePoint::fourholed((a * b).trace(), (b * c).trace(), (c * a).trace());
    let bd = BoundaryData::fourholed(a.trace(), b.trace(), c.trace(), d.trace());
    Ok((p, bd))
}

/// Two-holed torus traces of a rank-3 representation `(A, X, Y)`, with the
/// second boundary `B = AXYX⁻¹Y⁻¹` so that `AXY = BYX`.
///
/// Returns `(x, y, z, u, v, w)` for `X, Y, Z = Y⁻¹X⁻¹, U = AXY, V = BY,
/// W = AX`, and the boundary traces `(a, b)`.
pub fn twoholed_traces(rep: &Representation) -> Result<(TracePoint, BoundaryData)> {
    if rep.rank() != 3 {
        return Err(Error::RankMismatch(3, rep.rank()));
    }
    let g = &rep.generator_images;
    let (a, x, y) = (g[0], g[1], g[2]);
    let (xi, yi) = (x.inv_unimodular(), y.inv_unimodular());
    let b = a * x * y * xi * yi;
    let values = vec![
        x.trace(),
        y.trace(),
        (yi * xi).trace(),
        (a * x * y).trace(),
        (b * y).trace(),
        (a * x).trace(),
    ];
    let p = TracePoint::new(SurfaceModel::TwoHoledTorus, values)?;
    let bd = BoundaryData::new(SurfaceModel::TwoHoledTorus, vec![a.trace(), b.trace()])?;
    Ok((p, bd))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::kappa_poly;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: Scalar, b: Scalar, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn commutator() -> GroupWord {
        GroupWord::parse_with("xy", "xyXY").unwrap()
    }

    #[test]
    fn empty_word_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rep = random_representation(&mut rng, 2, MatrixFamily::SL2C);
        assert_eq!(word_eval(&rep, &GroupWord::identity()).unwrap(), Mat2::IDENTITY);
        let xx = GroupWord::parse("aA").unwrap();
        assert!((word_eval(&rep, &xx).unwrap() - Mat2::IDENTITY).norm() < 1e-12);
    }

    #[test]
    fn out_of_range_generator() {
        let rep = lift_oneholed(re(1.0), re(1.0), re(1.0));
        let w = GroupWord::parse("c").unwrap();
        assert_eq!(
            word_eval(&rep, &w).unwrap_err(),
            Error::GeneratorOutOfRange { index: 2, rank: 2 }
        );
    }

    #[test]
    fn reduction() {
        let w = GroupWord::parse("abBAc").unwrap();
        assert_eq!(w.reduced(), GroupWord::parse("c").unwrap());
        assert!(w.reduced().is_reduced());
        assert!(!w.is_reduced());
        assert_eq!(w.to_string(), "abBAc");
        assert!(w.concat(&w.inverse()).reduced().is_empty());
    }

    #[test]
    fn lift_examples() {
        let rep = lift_oneholed(re(2.0), re(2.0), re(2.0));
        let k = word_eval(&rep, &commutator()).unwrap().trace();
        assert!(close(k, re(2.0), 1e-12));

        let rep = lift_oneholed(re(0.0), re(0.0), re(0.0));
        let k = word_eval(&rep, &commutator()).unwrap();
        assert!((k + Mat2::IDENTITY).norm() < 1e-12, "commutator should be -I");
    }

    #[test]
    fn lift_round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10_000 {
            let p: [Scalar; 3] =
                std::array::from_fn(|_| Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)));
            let rep = lift_oneholed(p[0], p[1], p[2]);
            assert!(rep.generator_images.iter().all(Mat2::is_unimodular));
            let t = oneholed_traces(&rep).unwrap();
            for i in 0..3 {
                assert!(close(t[i], p[i], 1e-10), "{p:?} -> {t:?}");
            }
        }
    }

    #[test]
    fn quaternion_representation_is_the_origin() {
        let q = quaternion_representation();
        let t = oneholed_traces(&q).unwrap();
        assert!(t.iter().all(|v| v.norm() < 1e-15));
        let k = word_eval(&q, &commutator()).unwrap();
        assert!((k + Mat2::IDENTITY).norm() < 1e-15);
        assert!(close(kappa_poly(&t[0], &t[1], &t[2]), re(-2.0), 1e-15));
    }

    #[test]
    fn exp_matches_series() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for scale in [1e-9, 1e-3, 0.5, 2.0] {
            let v = random_lie_element(&mut rng).matrix().scale(re(scale));
            let mut series = Mat2::IDENTITY;
            let mut term = Mat2::IDENTITY;
            for k in 1..60 {
                term = (term * v).scale(re(1.0 / k as f64));
                series = series + term;
            }
            let e = v.exp_traceless();
            assert!((e - series).norm() < 1e-12 * (1.0 + series.norm()), "scale {scale}");
            assert!(e.is_unimodular());
        }
    }

    #[test]
    fn samplers_are_unimodular() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for fam in [MatrixFamily::SL2C, MatrixFamily::SU2, MatrixFamily::SL2R] {
            for _ in 0..100 {
                let m = random_matrix(&mut rng, fam);
                assert!(m.is_unimodular(), "{fam:?}");
                if fam != MatrixFamily::SL2C {
                    assert!(m.trace().im.abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn representation_rejects_non_unimodular() {
        assert!(Representation::new(vec![Mat2::real(2.0, 0.0, 0.0, 1.0)]).is_err());
    }

    #[test]
    fn lie_element_rejects_trace() {
        assert!(LieElement::new(Mat2::IDENTITY).is_err());
        assert!(LieElement::new(Mat2::real(1.0, 2.0, 3.0, -1.0)).is_ok());
    }

    #[test]
    fn cocycle_rule_on_two_letters() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rep = random_representation(&mut rng, 2, MatrixFamily::SL2C);
        let u = Cocycle {
            generator_values: vec![random_lie_element(&mut rng), random_lie_element(&mut rng)],
        };
        let xy = extend_cocycle(&rep, &u, &GroupWord::parse("ab").unwrap()).unwrap();
        let expected = u.generator_values[0] + u.generator_values[1].ad(&rep.generator_images[0]);
        assert!((xy - expected).norm() < 1e-12);
        let e = extend_cocycle(&rep, &u, &GroupWord::identity()).unwrap();
        assert_eq!(e, LieElement::ZERO);
        // u(a a⁻¹) = 0
        let aa = extend_cocycle(&rep, &u, &GroupWord::parse("aA").unwrap()).unwrap();
        assert!(aa.norm() < 1e-12);
    }

    #[test]
    fn coboundary_trivial_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let rep = random_representation(&mut rng, 2, MatrixFamily::SL2C);
        let zero = coboundary(&rep, &LieElement::ZERO);
        assert!(zero.generator_values.iter().all(|v| v.norm() == 0.0));
        let central = Representation::new(vec![-Mat2::IDENTITY, Mat2::IDENTITY]).unwrap();
        let v = random_lie_element(&mut rng);
        let u = coboundary(&central, &v);
        assert!(u.generator_values.iter().all(|x| x.norm() < 1e-14));
    }

    #[test]
    fn deform_at_zero_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rep = random_representation(&mut rng, 2, MatrixFamily::SL2C);
        let u = Cocycle {
            generator_values: vec![random_lie_element(&mut rng), random_lie_element(&mut rng)],
        };
        let d = deform(&rep, &u, re(0.0)).unwrap();
        assert!(d.distance(&rep) < 1e-15);
    }

    #[test]
    fn cohomology_examples() {
        let triv = Representation::new(vec![Mat2::IDENTITY; 2]).unwrap();
        assert_eq!(cohomology_dimensions(&triv), CohomologyDims { z1: 6, b1: 0, h1: 6 });
        let central = Representation::new(vec![-Mat2::IDENTITY; 2]).unwrap();
        assert_eq!(cohomology_dimensions(&central), CohomologyDims { z1: 6, b1: 0, h1: 6 });
        let irr = lift_oneholed(re(0.3), re(-1.1), re(0.7));
        assert_eq!(cohomology_dimensions(&irr), CohomologyDims { z1: 6, b1: 3, h1: 3 });
        // diagonal (abelian, reducible) representation has a 1-dimensional centraliser
        let d = Mat2::real(2.0, 0.0, 0.0, 0.5);
        let diag = Representation::new(vec![d, d * d]).unwrap();
        assert_eq!(cohomology_dimensions(&diag), CohomologyDims { z1: 6, b1: 2, h1: 4 });
    }

    #[test]
    fn relative_variety_residuals() {
        use crate::algebra::{fourholed_residual, fourholed_term_scale, twoholed_residuals, twoholed_term_scales};
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..500 {
            let rep = random_representation(&mut rng, 3, MatrixFamily::SL2C);
            let (p, bd) = fourholed_traces(&rep).unwrap();
            let r = fourholed_residual(&p, &bd).unwrap().norm() / fourholed_term_scale(&p, &bd);
            assert!(r < 1e-9, "{r}");
            let (p, bd) = twoholed_traces(&rep).unwrap();
            let (e1, e2) = twoholed_residuals(&p, &bd).unwrap();
            let (s1, s2) = twoholed_term_scales(&p, &bd);
            assert!(e1.norm() / s1 < 1e-9 && e2.norm() / s2 < 1e-9);
        }
    }

    /// With the second boundary taken as `X⁻¹Y⁻¹AXY` the first relation fails.
    #[test]
    fn conjugated_boundary_does_not_satisfy_relations() {
        use crate::algebra::twoholed_residuals;
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        let rep = random_representation(&mut rng, 3, MatrixFamily::SL2C);
        let g = &rep.generator_images;
        let (a, x, y) = (g[0], g[1], g[2]);
        let (xi, yi) = (x.inv_unimodular(), y.inv_unimodular());
        let b = xi * yi * a * x * y;
        let values = vec![x.trace(), y.trace(), (yi * xi).trace(), (a * x * y).trace(), (b * y).trace(), (a * x).trace()];
        let p = TracePoint::new(SurfaceModel::TwoHoledTorus, values).unwrap();
        let bd = BoundaryData::new(SurfaceModel::TwoHoledTorus, vec![a.trace(), b.trace()]).unwrap();
        let (e1, _) = twoholed_residuals(&p, &bd).unwrap();
        assert!(e1.norm() > 1e-3);
    }

    #[test]
    fn coboundary_deformations_are_second_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let words: Vec<GroupWord> = ["x", "y", "xy", "xY", "xyXY", "xxy"]
            .iter()
            .map(|w| GroupWord::parse_with("xy", w).unwrap())
            .collect();
        let ts = [1e-2, 1e-3, 1e-4];
        for _ in 0..20 {
            let rep = random_representation(&mut rng, 2, MatrixFamily::SL2C);
            let v = random_lie_element(&mut rng);
            let u = coboundary(&rep, &v);
            let devs: Vec<f64> = ts.iter().map(|&t| trace_deviation(&rep, &u, t, &words).unwrap()).collect();
            assert!((loglog_slope(&ts, &devs) - 2.0).abs() < 0.1);
            let generic = Cocycle {
                generator_values: vec![random_lie_element(&mut rng), random_lie_element(&mut rng)],
            };
            let devs: Vec<f64> = ts.iter().map(|&t| trace_deviation(&rep, &generic, t, &words).unwrap()).collect();
            assert!((loglog_slope(&ts, &devs) - 1.0).abs() < 0.1);
        }
    }
}
