//! Surface models and the values that live on their character varieties.
//!
//! Every model is described by a fixed, ordered list of trace coordinates
//! and a number of boundary components. Points carry complex values; real
//! points are complex points whose imaginary parts vanish within
//! [`REAL_TOL`].

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for "this scalar is real" / "this scalar is imaginary".
pub const REAL_TOL: f64 = 1e-9;

pub type Scalar = Complex64;

#[inline]
pub fn re(v: f64) -> Scalar {
    Complex64::new(v, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SurfaceModel {
    ThreeHoledSphere,
    OneHoledTorus,
    FourHoledSphere,
    TwoHoledTorus,
}

impl SurfaceModel {
    pub const ALL: [SurfaceModel; 4] = [
        SurfaceModel::ThreeHoledSphere,
        SurfaceModel::OneHoledTorus,
        SurfaceModel::FourHoledSphere,
        SurfaceModel::TwoHoledTorus,
    ];

    pub fn coordinate_names(self) -> &'static [&'static str] {
        match self {
            SurfaceModel::ThreeHoledSphere => &["a", "b", "c"],
            SurfaceModel::OneHoledTorus | SurfaceModel::FourHoledSphere => &["x", "y", "z"],
            SurfaceModel::TwoHoledTorus => &["x", "y", "z", "u", "v", "w"],
        }
    }

    pub fn coordinate_count(self) -> usize {
        self.coordinate_names().len()
    }

    pub fn boundary_count(self) -> usize {
        match self {
            SurfaceModel::ThreeHoledSphere => 3,
            SurfaceModel::OneHoledTorus => 1,
            SurfaceModel::FourHoledSphere => 4,
            SurfaceModel::TwoHoledTorus => 2,
        }
    }

    pub fn slug(self) -> &'static str {
        match self {
            SurfaceModel::ThreeHoledSphere => "three-holed-sphere",
            SurfaceModel::OneHoledTorus => "one-holed-torus",
            SurfaceModel::FourHoledSphere => "four-holed-sphere",
            SurfaceModel::TwoHoledTorus => "two-holed-torus",
        }
    }

    pub fn from_slug(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.slug() == s)
    }

    pub(crate) fn expect(self, found: SurfaceModel) -> Result<()> {
        if self == found {
            Ok(())
        } else {
            Err(Error::ModelMismatch {
                expected: self,
                found,
            })
        }
    }
}

impl fmt::Display for SurfaceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

/// Which line a coordinate of a `G±` character is confined to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SectorTag {
    Real,
    Imaginary,
}

impl SectorTag {
    /// Tag of a product of two tagged scalars.
    pub fn product(self, other: SectorTag) -> SectorTag {
        if self == other {
            SectorTag::Real
        } else {
            SectorTag::Imaginary
        }
    }

    pub fn admits(self, v: Scalar) -> bool {
        match self {
            SectorTag::Real => v.im.abs() <= REAL_TOL,
            SectorTag::Imaginary => v.re.abs() <= REAL_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub model: SurfaceModel,
    pub values: Vec<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sector: Option<Vec<SectorTag>>,
}

impl TracePoint {
    pub fn new(model: SurfaceModel, values: Vec<Scalar>) -> Result<Self> {
        if values.len() != model.coordinate_count() {
            return Err(Error::Arity {
                model,
                what: "coordinates",
                expected: model.coordinate_count(),
                found: values.len(),
            });
        }
        Ok(Self {
            model,
            values,
            sector: None,
        })
    }

    pub fn real(model: SurfaceModel, values: &[f64]) -> Result<Self> {
        Self::new(model, values.iter().copied().map(re).collect())
    }

    /// A one-holed torus point `(x, y, z)`.
    pub fn oneholed(x: Scalar, y: Scalar, z: Scalar) -> Self {
        Self {
            model: SurfaceModel::OneHoledTorus,
            values: vec![x, y, z],
            sector: None,
        }
    }

    pub fn oneholed_real(x: f64, y: f64, z: f64) -> Self {
        Self::oneholed(re(x), re(y), re(z))
    }

    pub fn fourholed(x: Scalar, y: Scalar, z: Scalar) -> Self {
        Self {
            model: SurfaceModel::FourHoledSphere,
            values: vec![x, y, z],
            sector: None,
        }
    }

    /// Attaches sector tags, checking each value against its tag.
    pub fn with_sector(mut self, tags: Vec<SectorTag>) -> Result<Self> {
        if tags.len() != self.values.len() {
            return Err(Error::Arity {
                model: self.model,
                what: "sector tags",
                expected: self.values.len(),
                found: tags.len(),
            });
        }
        if let Some(index) = first_sector_violation(&self.values, &tags) {
            return Err(Error::SectorViolation { index });
        }
        self.sector = Some(tags);
        Ok(self)
    }

    /// Attaches tags without validating them.
    pub fn with_sector_unchecked(mut self, tags: Vec<SectorTag>) -> Self {
        self.sector = Some(tags);
        self
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im.abs() <= REAL_TOL)
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    pub(crate) fn triple(&self) -> [Scalar; 3] {
        [self.values[0], self.values[1], self.values[2]]
    }

    /// Sup-norm distance between two points of the same model.
    pub fn sup_distance(&self, other: &TracePoint) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

pub(crate) fn first_sector_violation(values: &[Scalar], tags: &[SectorTag]) -> Option<usize> {
    values
        .iter()
        .zip(tags)
        .position(|(v, tag)| !tag.admits(*v))
}

/// Fixed boundary traces; one scalar per boundary component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryData {
    pub model: SurfaceModel,
    pub traces: Vec<Scalar>,
}

impl BoundaryData {
    pub fn new(model: SurfaceModel, traces: Vec<Scalar>) -> Result<Self> {
        if traces.len() != model.boundary_count() {
            return Err(Error::Arity {
                model,
                what: "boundary traces",
                expected: model.boundary_count(),
                found: traces.len(),
            });
        }
        Ok(Self { model, traces })
    }

    pub fn real(model: SurfaceModel, traces: &[f64]) -> Result<Self> {
        Self::new(model, traces.iter().copied().map(re).collect())
    }

    pub fn fourholed(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Self {
        Self {
            model: SurfaceModel::FourHoledSphere,
            traces: vec![a, b, c, d],
        }
    }

    pub(crate) fn quad(&self) -> [Scalar; 4] {
        [self.traces[0], self.traces[1], self.traces[2], self.traces[3]]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CharacterClass {
    SU2,
    SL2R,
    SO2Locus,
    ComplexOnly,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_and_boundary_counts() {
        let counts: Vec<_> = SurfaceModel::ALL
            .iter()
            .map(|m| (m.coordinate_count(), m.boundary_count()))
            .collect();
        assert_eq!(counts, vec![(3, 3), (3, 1), (3, 4), (6, 2)]);
    }

    #[test]
    fn slugs_round_trip() {
        for m in SurfaceModel::ALL {
            assert_eq!(SurfaceModel::from_slug(m.slug()), Some(m));
        }
        assert_eq!(SurfaceModel::from_slug("klein-bottle"), None);
    }

    #[test]
    fn arity_is_checked() {
        assert!(TracePoint::real(SurfaceModel::TwoHoledTorus, &[1.0; 3]).is_err());
        assert!(BoundaryData::real(SurfaceModel::FourHoledSphere, &[0.0; 3]).is_err());
        assert!(BoundaryData::real(SurfaceModel::OneHoledTorus, &[0.0]).is_ok());
    }

    #[test]
    fn sector_tags_are_validated() {
        let p = TracePoint::oneholed(Complex64::new(0.0, 2.0), re(1.0), Complex64::new(0.0, 3.0));
        let tags = vec![SectorTag::Imaginary, SectorTag::Real, SectorTag::Imaginary];
        assert!(p.clone().with_sector(tags.clone()).is_ok());
        let bad = TracePoint::oneholed(Complex64::new(0.0, 2.0), Complex64::new(1.0, 1.0), Complex64::new(0.0, 3.0));
        assert_eq!(
            bad.with_sector(tags).unwrap_err(),
            Error::SectorViolation { index: 1 }
        );
    }

    #[test]
    fn sector_product_table() {
        use SectorTag::*;
        assert_eq!(Real.product(Real), Real);
        assert_eq!(Imaginary.product(Imaginary), Real);
        assert_eq!(Real.product(Imaginary), Imaginary);
    }
}
