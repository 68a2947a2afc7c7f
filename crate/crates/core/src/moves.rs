//! The mapping class group action on trace coordinates.
//!
//! Conventions: `z = tr(XY)`, and the twist about `X` sends `Y ↦ YX`.
//! Every one-holed torus move is a polynomial map with integer
//! coefficients, so the same kernel runs over complex floats and over
//! arbitrary-precision integers.

use num_bigint::BigInt;
use num_traits::Num;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BoundaryData, Scalar, SectorTag, SurfaceModel, TracePoint};
use crate::oracle::{GroupWord, Letter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MoveKind {
    TwistX,
    TwistXInv,
    TwistY,
    TwistYInv,
    VietaX,
    VietaY,
    VietaZ,
    SignFlipYZ,
    SignFlipXZ,
    SignFlipXY,
}

impl MoveKind {
    pub const ALL: [MoveKind; 10] = [
        MoveKind::TwistX,
        MoveKind::TwistXInv,
        MoveKind::TwistY,
        MoveKind::TwistYInv,
        MoveKind::VietaX,
        MoveKind::VietaY,
        MoveKind::VietaZ,
        MoveKind::SignFlipYZ,
        MoveKind::SignFlipXZ,
        MoveKind::SignFlipXY,
    ];

    pub const TWISTS: [MoveKind; 4] = [
        MoveKind::TwistX,
        MoveKind::TwistXInv,
        MoveKind::TwistY,
        MoveKind::TwistYInv,
    ];

    pub const VIETAS: [MoveKind; 3] = [MoveKind::VietaX, MoveKind::VietaY, MoveKind::VietaZ];

    pub fn inverse(self) -> MoveKind {
        match self {
            MoveKind::TwistX => MoveKind::TwistXInv,
            MoveKind::TwistXInv => MoveKind::TwistX,
            MoveKind::TwistY => MoveKind::TwistYInv,
            MoveKind::TwistYInv => MoveKind::TwistY,
            other => other,
        }
    }

    pub fn is_sign_flip(self) -> bool {
        matches!(
            self,
            MoveKind::SignFlipYZ | MoveKind::SignFlipXZ | MoveKind::SignFlipXY
        )
    }

    /// Whether the move comes from an orientation-preserving mapping class.
    /// Vieta involutions are induced by orientation-reversing automorphisms;
    /// sign flips only permute `SL(2,C)`-lifts of a `PSL(2,C)`-character.
    pub fn in_mapping_class_group(self) -> bool {
        matches!(
            self,
            MoveKind::TwistX | MoveKind::TwistXInv | MoveKind::TwistY | MoveKind::TwistYInv
        )
    }

    pub fn supported_on(self, model: SurfaceModel) -> bool {
        match model {
            SurfaceModel::OneHoledTorus => true,
            SurfaceModel::FourHoledSphere => !self.is_sign_flip(),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Move {
    pub kind: MoveKind,
    pub model: SurfaceModel,
}

impl Move {
    pub fn new(kind: MoveKind, model: SurfaceModel) -> Result<Self> {
        if !kind.supported_on(model) {
            return Err(Error::UnsupportedMove { kind, model });
        }
        Ok(Self { kind, model })
    }

    pub fn oneholed(kind: MoveKind) -> Self {
        Self {
            kind,
            model: SurfaceModel::OneHoledTorus,
        }
    }

    pub fn fourholed(kind: MoveKind) -> Result<Self> {
        Self::new(kind, SurfaceModel::FourHoledSphere)
    }

    pub fn inverse(self) -> Self {
        Self {
            kind: self.kind.inverse(),
            model: self.model,
        }
    }
}

/// A word in the moves, applied left to right.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct McgWord {
    pub moves: Vec<Move>,
}

impl McgWord {
    pub fn new(moves: Vec<Move>) -> Self {
        Self { moves }
    }

    pub fn oneholed(kinds: &[MoveKind]) -> Self {
        Self::new(kinds.iter().map(|&k| Move::oneholed(k)).collect())
    }

    pub fn concat(&self, other: &McgWord) -> Self {
        let mut moves = self.moves.clone();
        moves.extend_from_slice(&other.moves);
        Self { moves }
    }

    /// The word undoing this one.
    pub fn inverse(&self) -> Self {
        Self {
            moves: self.moves.iter().rev().map(|m| m.inverse()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }
}

/// One-holed torus move kernel over any commutative ring.
pub fn oneholed_kernel<T: Num + Clone + std::ops::Neg<Output = T>>(
    kind: MoveKind,
    [x, y, z]: [T; 3],
) -> [T; 3] {
    match kind {
        MoveKind::TwistX => {
            let nz = x.clone() * z.clone() - y;
            [x, z, nz]
        }
        MoveKind::TwistXInv => {
            let ny = x.clone() * y.clone() - z;
            [x, ny, y]
        }
        MoveKind::TwistY => {
            let nz = y.clone() * z.clone() - x;
            [z, y, nz]
        }
        MoveKind::TwistYInv => {
            let nx = x.clone() * y.clone() - z;
            [nx, y, x]
        }
        MoveKind::VietaX => {
            let nx = y.clone() * z.clone() - x;
            [nx, y, z]
        }
        MoveKind::VietaY => {
            let ny = x.clone() * z.clone() - y;
            [x, ny, z]
        }
        MoveKind::VietaZ => {
            let nz = x.clone() * y.clone() - z;
            [x, y, nz]
        }
        MoveKind::SignFlipYZ => [x, -y, -z],
        MoveKind::SignFlipXZ => [-x, y, -z],
        MoveKind::SignFlipXY => [-x, -y, z],
    }
}

/// Four-holed sphere Vieta involutions; each replaces one coordinate by the
/// other root of the relation, viewed as a quadratic in that coordinate.
pub fn fourholed_kernel<T: Num + Clone>(
    kind: MoveKind,
    [x, y, z]: [T; 3],
    [a, b, c, d]: &[T; 4],
) -> Result<[T; 3]> {
    let vx = |[x, y, z]: [T; 3]| {
        let s = a.clone() * b.clone() + c.clone() * d.clone();
        [s - y.clone() * z.clone() - x, y, z]
    };
    let vy = |[x, y, z]: [T; 3]| {
        let s = b.clone() * c.clone() + a.clone() * d.clone();
        let ny = s - z.clone() * x.clone() - y;
        [x, ny, z]
    };
    let vz = |[x, y, z]: [T; 3]| {
        let s = a.clone() * c.clone() + b.clone() * d.clone();
        let nz = s - x.clone() * y.clone() - z;
        [x, y, nz]
    };
    let p = [x, y, z];
    Ok(match kind {
        MoveKind::VietaX => vx(p),
        MoveKind::VietaY => vy(p),
        MoveKind::VietaZ => vz(p),
        // Dehn twists as products of two involutions fixing the twisted curve.
        MoveKind::TwistX => vz(vy(p)),
        MoveKind::TwistXInv => vy(vz(p)),
        MoveKind::TwistY => vx(vz(p)),
        MoveKind::TwistYInv => vz(vx(p)),
        kind => {
            return Err(Error::UnsupportedMove {
                kind,
                model: SurfaceModel::FourHoledSphere,
            })
        }
    })
}

/// How a move permutes the `G±` sector tags of a one-holed torus point.
pub fn sector_permutation(kind: MoveKind, [tx, ty, tz]: [SectorTag; 3]) -> [SectorTag; 3] {
    match kind {
        MoveKind::TwistX | MoveKind::TwistXInv => [tx, tz, ty],
        MoveKind::TwistY | MoveKind::TwistYInv => [tz, ty, tx],
        _ => [tx, ty, tz],
    }
}

pub fn apply_move_oneholed(m: Move, p: &TracePoint) -> Result<TracePoint> {
    SurfaceModel::OneHoledTorus.expect(m.model)?;
    SurfaceModel::OneHoledTorus.expect(p.model)?;
    let values = oneholed_kernel(m.kind, p.triple()).to_vec();
    let sector = p.sector.as_ref().map(|t| {
        sector_permutation(m.kind, [t[0], t[1], t[2]]).to_vec()
    });
    Ok(TracePoint {
        model: p.model,
        values,
        sector,
    })
}

pub fn apply_move_fourholed(m: Move, p: &TracePoint, bd: &BoundaryData) -> Result<TracePoint> {
    SurfaceModel::FourHoledSphere.expect(m.model)?;
    SurfaceModel::FourHoledSphere.expect(p.model)?;
    SurfaceModel::FourHoledSphere.expect(bd.model)?;
    let values = fourholed_kernel(m.kind, p.triple(), &bd.quad())?.to_vec();
    Ok(TracePoint {
        model: p.model,
        values,
        sector: None,
    })
}

/// Applies a single move to a point of either supported model.
pub fn apply_move(m: Move, p: &TracePoint, bd: Option<&BoundaryData>) -> Result<TracePoint> {
    match p.model {
        SurfaceModel::OneHoledTorus => apply_move_oneholed(m, p),
        SurfaceModel::FourHoledSphere => {
            let bd = bd.ok_or_else(|| {
                Error::InvalidConfig("four-holed sphere moves need boundary traces".into())
            })?;
            apply_move_fourholed(m, p, bd)
        }
        model => Err(Error::UnsupportedMove {
            kind: m.kind,
            model,
        }),
    }
}

pub fn apply_word(w: &McgWord, p: &TracePoint, bd: Option<&BoundaryData>) -> Result<TracePoint> {
    w.moves
        .iter()
        .try_fold(p.clone(), |acc, &m| apply_move(m, &acc, bd))
}

/// Exact one-holed torus move on an integer triple.
pub fn apply_move_exact(kind: MoveKind, p: &[BigInt; 3]) -> [BigInt; 3] {
    oneholed_kernel(kind, p.clone())
}

/// Fast path used by orbit walkers.
#[inline]
pub(crate) fn apply_kind_scalar(
    model: SurfaceModel,
    kind: MoveKind,
    p: [Scalar; 3],
    bd: Option<&[Scalar; 4]>,
) -> Result<[Scalar; 3]> {
    match (model, bd) {
        (SurfaceModel::OneHoledTorus, _) => Ok(oneholed_kernel(kind, p)),
        (SurfaceModel::FourHoledSphere, Some(bd)) => fourholed_kernel(kind, p, bd),
        _ => Err(Error::UnsupportedMove { kind, model }),
    }
}

/// An automorphism of a free group, stored with its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeAutomorphism {
    pub images: Vec<GroupWord>,
    pub inverse_images: Vec<GroupWord>,
}

impl FreeAutomorphism {
    pub fn identity(rank: usize) -> Self {
        let images: Vec<_> = (0..rank).map(GroupWord::generator).collect();
        Self {
            inverse_images: images.clone(),
            images,
        }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    fn substitute(images: &[GroupWord], w: &GroupWord) -> GroupWord {
        let letters = w
            .letters
            .iter()
            .flat_map(|l: &Letter| {
                let img = &images[l.generator];
                if l.inverse {
                    img.inverse().letters
                } else {
                    img.letters.clone()
                }
            })
            .collect();
        GroupWord { letters }.reduced()
    }

    /// `φ(w)`, freely reduced.
    pub fn apply_to_word(&self, w: &GroupWord) -> GroupWord {
        Self::substitute(&self.images, w)
    }

    pub fn inverse(&self) -> Self {
        Self {
            images: self.inverse_images.clone(),
            inverse_images: self.images.clone(),
        }
    }

    /// The automorphism whose pushforward equals pushing forward by `self`
    /// and then by `next`: `g ↦ self(next(g))`.
    pub fn then(&self, next: &FreeAutomorphism) -> Self {
        Self {
            images: next
                .images
                .iter()
                .map(|w| Self::substitute(&self.images, w))
                .collect(),
            inverse_images: self
                .inverse_images
                .iter()
                .map(|w| Self::substitute(&next.inverse_images, w))
                .collect(),
        }
    }

    /// Checks that the stored inverse really inverts the images.
    pub fn is_invertible(&self) -> bool {
        let n = self.rank();
        self.inverse_images.len() == n
            && (0..n).all(|g| {
                let id = GroupWord::generator(g);
                Self::substitute(&self.images, &self.inverse_images[g]) == id
                    && Self::substitute(&self.inverse_images, &self.images[g]) == id
            })
    }
}

fn words(spec: &[&str]) -> Vec<GroupWord> {
    spec.iter()
        .map(|s| GroupWord::parse_with("xy", s).expect("static word"))
        .collect()
}

/// The free-group automorphism of `⟨X, Y⟩` inducing a one-holed torus move.
///
/// Twists are orientation preserving; Vieta involutions are induced by
/// orientation-reversing automorphisms. Sign flips have no such automorphism.
pub fn automorphism_of(m: Move) -> Result<FreeAutomorphism> {
    if m.model != SurfaceModel::OneHoledTorus {
        return Err(Error::UnsupportedMove {
            kind: m.kind,
            model: m.model,
        });
    }
    let (images, inverse) = match m.kind {
        MoveKind::TwistX => (["x", "yx"], ["x", "yX"]),
        MoveKind::TwistXInv => (["x", "yX"], ["x", "yx"]),
        MoveKind::TwistY => (["xy", "y"], ["xY", "y"]),
        MoveKind::TwistYInv => (["xY", "y"], ["xy", "y"]),
        MoveKind::VietaX => (["yxy", "Y"], ["yxy", "Y"]),
        MoveKind::VietaY => (["X", "xyx"], ["X", "xyx"]),
        MoveKind::VietaZ => (["x", "Y"], ["x", "Y"]),
        kind => return Err(Error::NoSingleAutomorphism(kind)),
    };
    Ok(FreeAutomorphism {
        images: words(&images),
        inverse_images: words(&inverse),
    })
}
