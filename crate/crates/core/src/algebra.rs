//! Trace-coordinate polynomials, level-set invariants and point classification.

use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Num;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    first_sector_violation, BoundaryData, CharacterClass, Scalar, SectorTag, SurfaceModel,
    TracePoint, REAL_TOL,
};
use crate::oracle::{GroupWord, Representation};

#[inline]
fn two<T: Num>() -> T {
    T::one() + T::one()
}

/// `x² + y² + z² − xyz − 2` over any commutative ring.
pub fn kappa_poly<T: Num + Clone>(x: &T, y: &T, z: &T) -> T {
    x.clone() * x.clone() + y.clone() * y.clone() + z.clone() * z.clone()
        - x.clone() * y.clone() * z.clone()
        - two::<T>()
}

/// Boundary trace of the one-holed torus character with coordinates `p`.
pub fn kappa(p: &TracePoint) -> Result<Scalar> {
    SurfaceModel::OneHoledTorus.expect(p.model)?;
    let [x, y, z] = p.triple();
    Ok(kappa_poly(&x, &y, &z))
}

/// Exact boundary trace for integer triples.
pub fn kappa_exact(p: &[BigInt; 3]) -> BigInt {
    kappa_poly(&p[0], &p[1], &p[2])
}

/// Sum of the moduli of the monomials of κ at `p`; the scale against which
/// floating-point drift in κ is meaningful.
pub fn kappa_term_scale(x: Scalar, y: Scalar, z: Scalar) -> f64 {
    x.norm_sqr() + y.norm_sqr() + z.norm_sqr() + (x * y * z).norm() + 2.0
}

/// `LHS − RHS` of the four-holed sphere relation.
pub fn fourholed_residual(p: &TracePoint, bd: &BoundaryData) -> Result<Scalar> {
    SurfaceModel::FourHoledSphere.expect(p.model)?;
    SurfaceModel::FourHoledSphere.expect(bd.model)?;
    let [x, y, z] = p.triple();
    let [a, b, c, d] = bd.quad();
    Ok(fourholed_residual_raw(x, y, z, a, b, c, d))
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn fourholed_residual_raw(
    x: Scalar,
    y: Scalar,
    z: Scalar,
    a: Scalar,
    b: Scalar,
    c: Scalar,
    d: Scalar,
) -> Scalar {
    let lhs = x * x + y * y + z * z + x * y * z;
    let rhs = (a * b + c * d) * x
        + (b * c + a * d) * y
        + (a * c + b * d) * z
        + (4.0 - a * a - b * b - c * c - d * d - a * b * c * d);
    lhs - rhs
}

/// Scale of the monomials in the four-holed relation, for relative residuals.
pub fn fourholed_term_scale(p: &TracePoint, bd: &BoundaryData) -> f64 {
    let [x, y, z] = p.triple();
    let [a, b, c, d] = bd.quad();
    let n = |v: Scalar| v.norm();
    n(x * x)
        + n(y * y)
        + n(z * z)
        + n(x * y * z)
        + (n(a * b) + n(c * d)) * n(x)
        + (n(b * c) + n(a * d)) * n(y)
        + (n(a * c) + n(b * d)) * n(z)
        + 4.0
        + n(a * a)
        + n(b * b)
        + n(c * c)
        + n(d * d)
        + n(a * b * c * d)
}

/// The two defining relations of the two-holed torus, as `(eq1, eq2)`.
pub fn twoholed_residuals(p: &TracePoint, bd: &BoundaryData) -> Result<(Scalar, Scalar)> {
    SurfaceModel::TwoHoledTorus.expect(p.model)?;
    SurfaceModel::TwoHoledTorus.expect(bd.model)?;
    let v = &p.values;
    let (x, y, z, u, vv, w) = (v[0], v[1], v[2], v[3], v[4], v[5]);
    let (a, b) = (bd.traces[0], bd.traces[1]);
    let eq1 = (a + b) - (x * w + y * vv + u * z - x * y * u);
    let eq2 = a * b
        - (x * x + y * y + z * z + u * u + vv * vv + w * w + vv * w * z
            - x * y * z
            - x * u * vv
            - y * u * w
            - 4.0);
    Ok((eq1, eq2))
}

/// Monomial scales of the two two-holed relations.
pub fn twoholed_term_scales(p: &TracePoint, bd: &BoundaryData) -> (f64, f64) {
    let n: Vec<f64> = p.values.iter().map(|v| v.norm()).collect();
    let (x, y, z, u, v, w) = (n[0], n[1], n[2], n[3], n[4], n[5]);
    let (a, b) = (bd.traces[0].norm(), bd.traces[1].norm());
    let s1 = a + b + x * w + y * v + u * z + x * y * u;
    let s2 = a * b
        + x * x
        + y * y
        + z * z
        + u * u
        + v * v
        + w * w
        + v * w * z
        + x * y * z
        + x * u * v
        + y * u * w
        + 4.0;
    (s1, s2)
}

/// `(tr A, tr B, tr C)` for `C = (AB)⁻¹`.
pub fn threeholed_traces(rep: &Representation) -> Result<TracePoint> {
    if rep.rank() != 2 {
        return Err(Error::RankMismatch(2, rep.rank()));
    }
    let a = rep.eval(&GroupWord::generator(0))?;
    let b = rep.eval(&GroupWord::generator(1))?;
    let c = rep.eval(&GroupWord::parse("ab").map(|w| w.inverse())?)?;
    Ok(TracePoint {
        model: SurfaceModel::ThreeHoledSphere,
        values: vec![a.trace(), b.trace(), c.trace()],
        sector: None,
    })
}

fn in_closed_interval(v: f64) -> bool {
    v.abs() <= 2.0 + REAL_TOL
}

/// Real-character type of a one-holed torus point.
pub fn classify_real_point(p: &TracePoint) -> Result<CharacterClass> {
    let k = kappa(p)?;
    if !p.is_real() {
        return Ok(CharacterClass::ComplexOnly);
    }
    let t = k.re;
    let boxed = p.values.iter().all(|v| in_closed_interval(v.re));
    Ok(if !boxed {
        CharacterClass::SL2R
    } else if (t - 2.0).abs() <= REAL_TOL {
        CharacterClass::SO2Locus
    } else if t < 2.0 {
        CharacterClass::SU2
    } else {
        CharacterClass::SL2R
    })
}

/// The four components of `G±`-characters of the one-holed torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sector {
    /// `R × R × R`
    RRR,
    /// `R × iR × iR`
    RIrIr,
    /// `iR × R × iR`
    IrRIr,
    /// `iR × iR × R`
    IrIrR,
    Invalid,
}

impl Sector {
    pub const MIXED: [Sector; 3] = [Sector::RIrIr, Sector::IrRIr, Sector::IrIrR];

    pub fn tags(self) -> Option<[SectorTag; 3]> {
        use SectorTag::{Imaginary as I, Real as R};
        match self {
            Sector::RRR => Some([R, R, R]),
            Sector::RIrIr => Some([R, I, I]),
            Sector::IrRIr => Some([I, R, I]),
            Sector::IrIrR => Some([I, I, R]),
            Sector::Invalid => None,
        }
    }

    pub fn from_tags(tags: &[SectorTag]) -> Sector {
        [Sector::RRR, Sector::RIrIr, Sector::IrRIr, Sector::IrIrR]
            .into_iter()
            .find(|s| s.tags().is_some_and(|t| t[..] == *tags))
            .unwrap_or(Sector::Invalid)
    }

    pub fn label(self) -> &'static str {
        match self {
            Sector::RRR => "RRR",
            Sector::RIrIr => "R_iR_iR",
            Sector::IrRIr => "iR_R_iR",
            Sector::IrIrR => "iR_iR_R",
            Sector::Invalid => "Invalid",
        }
    }

    pub fn from_label(s: &str) -> Option<Sector> {
        [
            Sector::RRR,
            Sector::RIrIr,
            Sector::IrRIr,
            Sector::IrIrR,
            Sector::Invalid,
        ]
        .into_iter()
        .find(|x| x.label() == s)
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorReading {
    pub sector: Sector,
    pub kappa: Scalar,
}

/// Identifies the `G±` sector of a tagged point and evaluates κ there.
///
/// A point whose values break their tags, whose tag pattern is not one of
/// the four components, or whose κ fails to be real is `Invalid`.
pub fn classify_gpm_sector(p: &TracePoint) -> Result<SectorReading> {
    let k = kappa(p)?;
    let tags = p.sector.as_deref().ok_or(Error::InvalidConfig(
        "sector tags are required".into(),
    ))?;
    let mut sector = Sector::from_tags(tags);
    if first_sector_violation(&p.values, tags).is_some()
        || k.im.abs() > REAL_TOL * (1.0 + k.norm())
    {
        sector = Sector::Invalid;
    }
    Ok(SectorReading { sector, kappa: k })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerRange {
    pub lo: i64,
    pub hi: i64,
}

impl EulerRange {
    pub fn components(&self) -> i64 {
        self.hi - self.lo + 1
    }

    pub fn contains(&self, e: i64) -> bool {
        (self.lo..=self.hi).contains(&e)
    }
}

/// Range of the Euler class on `PSL(2,R)`-characters of a genus-`g`
/// surface with `b` boundary components.
pub fn euler_class_range(g: i64, b: i64) -> Result<EulerRange> {
    let chi = 2 - 2 * g - b;
    if g < 0 || b < 0 || chi >= 0 {
        return Err(Error::NonNegativeEuler { chi });
    }
    Ok(EulerRange { lo: chi, hi: -chi })
}

/// Euler class of a singular hyperbolic structure with the given cone angles.
pub fn euler_class_cone(chi: i64, cone_angles: &[f64]) -> Result<f64> {
    if let Some(&bad) = cone_angles.iter().find(|&&t| !(t > 0.0)) {
        return Err(Error::NonPositiveConeAngle(bad));
    }
    let excess: f64 = cone_angles.iter().map(|t| t - 2.0 * PI).sum();
    Ok(chi as f64 + excess / (2.0 * PI))
}

/// Whether a cone-hyperbolic structure with these angles exists in every
/// conformal class (the cone Euler class must be negative).
pub fn cone_structure_admissible(chi: i64, cone_angles: &[f64]) -> Result<bool> {
    Ok(euler_class_cone(chi, cone_angles)? < 0.0)
}

/// Boundary trace `t = −2 cos(θ/2)` of a one-holed torus with a cone point of angle θ.
pub fn cone_angle_boundary_trace(theta: f64) -> f64 {
    -2.0 * (theta / 2.0).cos()
}

/// Inverse of [`cone_angle_boundary_trace`] on `θ ∈ [0, 2π]`.
pub fn boundary_trace_cone_angle(t: f64) -> Option<f64> {
    (-2.0..=2.0)
        .contains(&t)
        .then(|| 2.0 * (-t / 2.0).acos())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    fn of(v: f64) -> Sign {
        if v > 0.0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Sign triple distinguishing the four components of the Fricke region `κ ≤ −2`.
pub fn fricke_component_label(p: &TracePoint) -> Result<[Sign; 3]> {
    let k = kappa(p)?;
    if !p.is_real() {
        return Err(Error::NotReal);
    }
    if k.re > -2.0 + REAL_TOL {
        return Err(Error::OutsideFricke("kappa > -2"));
    }
    let r = p.real_parts();
    if r.contains(&0.0) {
        return Err(Error::OutsideFricke("zero coordinate"));
    }
    Ok([Sign::of(r[0]), Sign::of(r[1]), Sign::of(r[2])])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::re;
    use num_complex::Complex64;

    fn oht(x: f64, y: f64, z: f64) -> TracePoint {
        TracePoint::oneholed_real(x, y, z)
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa(&oht(0.0, 0.0, 0.0)).unwrap(), re(-2.0));
        assert_eq!(kappa(&oht(2.0, 2.0, 2.0)).unwrap(), re(2.0));
        assert_eq!(kappa(&oht(3.0, 3.0, 3.0)).unwrap(), re(-2.0));
        assert_eq!(kappa(&oht(-2.0, -2.0, -2.0)).unwrap(), re(18.0));
    }

    #[test]
    fn kappa_rejects_other_models() {
        let p = TracePoint::fourholed(re(0.0), re(0.0), re(0.0));
        assert!(matches!(kappa(&p), Err(Error::ModelMismatch { .. })));
    }

    #[test]
    fn kappa_exact_matches_float() {
        let p = [BigInt::from(3), BigInt::from(6), BigInt::from(15)];
        assert_eq!(kappa_exact(&p), BigInt::from(-2));
    }

    #[test]
    fn fourholed_examples() {
        let bd2 = BoundaryData::real(SurfaceModel::FourHoledSphere, &[2.0; 4]).unwrap();
        let p2 = TracePoint::real(SurfaceModel::FourHoledSphere, &[2.0; 3]).unwrap();
        assert_eq!(fourholed_residual(&p2, &bd2).unwrap(), re(0.0));
        let bd0 = BoundaryData::real(SurfaceModel::FourHoledSphere, &[0.0; 4]).unwrap();
        let p0 = TracePoint::real(SurfaceModel::FourHoledSphere, &[0.0; 3]).unwrap();
        assert_eq!(fourholed_residual(&p0, &bd0).unwrap(), re(-4.0));
        assert!(fourholed_residual(&oht(0.0, 0.0, 0.0), &bd0).is_err());
    }

    #[test]
    fn twoholed_examples() {
        let bd = BoundaryData::real(SurfaceModel::TwoHoledTorus, &[2.0, 2.0]).unwrap();
        let p = TracePoint::real(SurfaceModel::TwoHoledTorus, &[2.0; 6]).unwrap();
        assert_eq!(twoholed_residuals(&p, &bd).unwrap(), (re(0.0), re(0.0)));
        let bd0 = BoundaryData::real(SurfaceModel::TwoHoledTorus, &[0.0, 0.0]).unwrap();
        let p0 = TracePoint::real(SurfaceModel::TwoHoledTorus, &[0.0; 6]).unwrap();
        assert_eq!(twoholed_residuals(&p0, &bd0).unwrap(), (re(0.0), re(4.0)));
    }

    #[test]
    fn classification_examples() {
        use CharacterClass::*;
        assert_eq!(classify_real_point(&oht(0.0, 0.0, 0.0)).unwrap(), SU2);
        assert_eq!(classify_real_point(&oht(3.0, 0.0, 0.0)).unwrap(), SL2R);
        assert_eq!(classify_real_point(&oht(2.0, 2.0, 2.0)).unwrap(), SO2Locus);
        assert_eq!(classify_real_point(&oht(1.0, 1.0, 1.0)).unwrap(), SU2);
        assert_eq!(classify_real_point(&oht(1.9, 1.9, -1.9)).unwrap(), SL2R);
        let c = TracePoint::oneholed(Complex64::new(0.0, 1.0), re(0.0), re(0.0));
        assert_eq!(classify_real_point(&c).unwrap(), ComplexOnly);
    }

    #[test]
    fn boundary_ambiguity_resolves_to_compact_side() {
        // 2 + 1e-12 still counts as inside [-2, 2], and kappa sits on 2
        let p = oht(2.0 + 1e-12, 0.0, 0.0);
        assert_eq!(classify_real_point(&p).unwrap(), CharacterClass::SO2Locus);
        let p = oht(2.0 + 1e-6, 0.0, 0.0);
        assert_eq!(classify_real_point(&p).unwrap(), CharacterClass::SL2R);
    }

    #[test]
    fn gpm_examples() {
        use SectorTag::{Imaginary as I, Real as R};
        let p = TracePoint::oneholed(Complex64::new(0.0, 2.0), re(1.0), Complex64::new(0.0, 3.0))
            .with_sector_unchecked(vec![I, R, I]);
        let r = classify_gpm_sector(&p).unwrap();
        assert_eq!(r.sector, Sector::IrRIr);
        assert!((r.kappa - re(-8.0)).norm() < 1e-12);

        let p = oht(0.5, 1.0, -3.0).with_sector_unchecked(vec![R, R, R]);
        assert_eq!(classify_gpm_sector(&p).unwrap().sector, Sector::RRR);

        let p = TracePoint::oneholed(
            Complex64::new(0.0, 2.0),
            Complex64::new(1.0, 1.0),
            Complex64::new(0.0, 3.0),
        )
        .with_sector_unchecked(vec![I, R, I]);
        assert_eq!(classify_gpm_sector(&p).unwrap().sector, Sector::Invalid);

        let p = TracePoint::oneholed(Complex64::new(0.0, 1.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, 1.0))
            .with_sector_unchecked(vec![I, I, I]);
        assert_eq!(classify_gpm_sector(&p).unwrap().sector, Sector::Invalid);
    }

    #[test]
    fn sector_labels_round_trip() {
        for s in [Sector::RRR, Sector::RIrIr, Sector::IrRIr, Sector::IrIrR, Sector::Invalid] {
            assert_eq!(Sector::from_label(s.label()), Some(s));
        }
    }

    #[test]
    fn euler_ranges() {
        let r = euler_class_range(2, 0).unwrap();
        assert_eq!((r.lo, r.hi, r.components()), (-2, 2, 5));
        let r = euler_class_range(1, 1).unwrap();
        assert_eq!((r.lo, r.hi, r.components()), (-1, 1, 3));
        let r = euler_class_range(0, 3).unwrap();
        assert_eq!((r.lo, r.hi, r.components()), (-1, 1, 3));
        assert!(euler_class_range(1, 0).is_err());
        assert!(euler_class_range(0, 2).is_err());
        assert!(euler_class_range(0, 0).is_err());
    }

    #[test]
    fn euler_cone_examples() {
        assert_eq!(euler_class_cone(-2, &[]).unwrap(), -2.0);
        assert!((euler_class_cone(-2, &[4.0 * PI]).unwrap() + 1.0).abs() < 1e-15);
        assert!((euler_class_cone(-1, &[2.0 * PI]).unwrap() + 1.0).abs() < 1e-15);
        assert!(euler_class_cone(-1, &[0.0]).is_err());
        assert!(cone_structure_admissible(-2, &[4.0 * PI]).unwrap());
        assert!(!cone_structure_admissible(-2, &[4.0 * PI, 4.0 * PI]).unwrap());
    }

    #[test]
    fn cone_angle_relation() {
        assert!((cone_angle_boundary_trace(2.0 * PI) - 2.0).abs() < 1e-15);
        assert!((cone_angle_boundary_trace(0.0) + 2.0).abs() < 1e-15);
        let theta = 1.234;
        let t = cone_angle_boundary_trace(theta);
        assert!((boundary_trace_cone_angle(t).unwrap() - theta).abs() < 1e-12);
        assert!(boundary_trace_cone_angle(3.0).is_none());
    }

    #[test]
    fn fricke_labels() {
        use Sign::*;
        assert_eq!(fricke_component_label(&oht(3.0, 3.0, 3.0)).unwrap(), [Plus, Plus, Plus]);
        assert_eq!(
            fricke_component_label(&oht(3.0, -3.0, -3.0)).unwrap(),
            [Plus, Minus, Minus]
        );
        assert!((kappa(&oht(3.0, 3.0, -3.0)).unwrap() - re(52.0)).norm() == 0.0);
        assert!(fricke_component_label(&oht(3.0, 3.0, -3.0)).is_err());
        assert!(fricke_component_label(&oht(0.0, 0.0, 0.0)).is_err());
    }
}
