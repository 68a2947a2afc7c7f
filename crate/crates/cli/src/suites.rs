//! Randomized invariant suites behind `poisson-check` and `oracle-check`.

use charvar::algebra::{
    fourholed_residual, fourholed_term_scale, kappa, kappa_term_scale, threeholed_traces, twoholed_residuals,
    twoholed_term_scales,
};
use charvar::moves::{apply_move_oneholed, apply_word, automorphism_of, McgWord, Move, MoveKind};
use charvar::oracle::{
    apply_automorphism, coboundary, cohomology_dimensions, extend_cocycle, fourholed_traces, lift_oneholed,
    loglog_slope, oneholed_traces, random_lie_element, random_representation, trace_deviation, twoholed_traces,
    word_eval, Cocycle, CohomologyDims, GroupWord, Letter, MatrixFamily,
};
use charvar::poisson::{bivector, casimir_residual, jacobi_residual, poisson_bracket, SmoothFunction};
use charvar::{BoundaryData, Result, Scalar, SurfaceModel, TracePoint};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const CASIMIR_TOL: f64 = 1e-8;
pub const JACOBI_TOL: f64 = 1e-6;
pub const KAPPA_TOL: f64 = 1e-9;
pub const PUSHFORWARD_TOL: f64 = 1e-8;
pub const COMMUTATOR_TOL: f64 = 1e-9;
pub const RELATION_TOL: f64 = 1e-9;
pub const SLOPE_TOL: f64 = 0.1;
pub const DEFORMATION_STEPS: [f64; 3] = [1e-2, 1e-3, 1e-4];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub suite: &'static str,
    pub points: usize,
    pub failures: usize,
    pub max_residual: f64,
    pub tolerance: f64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Residuals above `tolerance`, non-finite residuals and errors all count as
/// failures.
fn tally(suite: &'static str, tolerance: f64, residuals: impl Iterator<Item = Result<f64>>) -> SuiteResult {
    let (mut points, mut failures, mut worst, mut nan) = (0, 0, 0.0f64, false);
    for r in residuals {
        points += 1;
        match r {
            Ok(v) if v <= tolerance => worst = worst.max(v),
            Ok(v) => {
                failures += 1;
                nan |= v.is_nan();
                worst = worst.max(v);
            }
            Err(_) => failures += 1,
        }
    }
    let max_residual = if nan { f64::NAN } else { worst };
    SuiteResult { suite, points, failures, max_residual, tolerance }
}

pub type Suite = fn(u64, usize) -> SuiteResult;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn complex(rng: &mut impl Rng, r: f64) -> Scalar {
    Complex64::new(rng.gen_range(-r..r), rng.gen_range(-r..r))
}

fn random_case(model: SurfaceModel, rng: &mut impl Rng) -> (TracePoint, Option<BoundaryData>) {
    let values = (0..model.coordinate_count()).map(|_| complex(rng, 2.0)).collect();
    let p = TracePoint::new(model, values).expect("arity matches the model");
    let bd = (model.boundary_count() > 0 && model != SurfaceModel::OneHoledTorus).then(|| {
        BoundaryData::new(model, (0..model.boundary_count()).map(|_| complex(rng, 2.0)).collect())
            .expect("arity matches the model")
    });
    (p, bd)
}

const BRACKETED: [SurfaceModel; 3] =
    [SurfaceModel::OneHoledTorus, SurfaceModel::FourHoledSphere, SurfaceModel::TwoHoledTorus];

fn casimir(model: SurfaceModel, name: &'static str, seed: u64, n: usize) -> SuiteResult {
    let mut rng = rng(seed);
    tally(
        name,
        CASIMIR_TOL,
        (0..n).map(|_| {
            let (p, bd) = random_case(model, &mut rng);
            casimir_residual(&p, bd.as_ref())
        }),
    )
}

fn jacobi(model: SurfaceModel, name: &'static str, seed: u64, n: usize) -> SuiteResult {
    let mut rng = rng(seed);
    tally(
        name,
        JACOBI_TOL,
        (0..n).map(|_| {
            let (p, bd) = random_case(model, &mut rng);
            jacobi_residual(&p, bd.as_ref())
        }),
    )
}

pub fn casimir_oneholed(seed: u64, n: usize) -> SuiteResult {
    casimir(BRACKETED[0], "casimir/one-holed-torus", seed, n)
}

pub fn casimir_fourholed(seed: u64, n: usize) -> SuiteResult {
    casimir(BRACKETED[1], "casimir/four-holed-sphere", seed, n)
}

pub fn casimir_twoholed(seed: u64, n: usize) -> SuiteResult {
    casimir(BRACKETED[2], "casimir/two-holed-torus", seed, n)
}

pub fn jacobi_oneholed(seed: u64, n: usize) -> SuiteResult {
    jacobi(BRACKETED[0], "jacobi/one-holed-torus", seed, n)
}

pub fn jacobi_fourholed(seed: u64, n: usize) -> SuiteResult {
    jacobi(BRACKETED[1], "jacobi/four-holed-sphere", seed, n)
}

pub fn jacobi_twoholed(seed: u64, n: usize) -> SuiteResult {
    jacobi(BRACKETED[2], "jacobi/two-holed-torus", seed, n)
}

/// Every coordinate bracket on the three-holed sphere is exactly zero.
pub fn threeholed_zero(seed: u64, n: usize) -> SuiteResult {
    let mut rng = rng(seed);
    tally(
        "zero/three-holed-sphere",
        0.0,
        (0..n).map(|_| {
            let (p, _) = random_case(SurfaceModel::ThreeHoledSphere, &mut rng);
            let mut worst = bivector(&p, None)?.max_modulus();
            for i in 0..3 {
                for j in 0..3 {
                    let b = poisson_bracket(&SmoothFunction::coordinate(i), &SmoothFunction::coordinate(j), &p, None)?;
                    worst = worst.max(b.norm());
                }
            }
            Ok(worst)
        }),
    )
}

/// Largest `|ξ_ij + ξ_ji|` over all four models.
pub fn antisymmetry(seed: u64, n: usize) -> SuiteResult {
    let mut rng = rng(seed);
    tally(
        "antisymmetry",
        0.0,
        (0..n).map(|_| {
            let mut worst: f64 = 0.0;
            for model in SurfaceModel::ALL {
                let (p, bd) = random_case(model, &mut rng);
                let xi = bivector(&p, bd.as_ref())?;
                for i in 0..xi.dim() {
                    for j in 0..xi.dim() {
                        worst = worst.max((xi.get(i, j) + xi.get(j, i)).norm());
                    }
                }
            }
            Ok(worst)
        }),
    )
}

/// `{f, gh} = g{f, h} + h{f, g}` for random quadratic polynomials.
pub fn leibniz(seed: u64, n: usize) -> SuiteResult {
    let mut rng = rng(seed);
    tally(
        "leibniz",
        1e-8,
        (0..n).map(|_| {
            let (p, _) = random_case(SurfaceModel::OneHoledTorus, &mut rng);
            let co: Vec<f64> = (0..9).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let poly = |k: usize| {
                let a = co[3 * k..3 * k + 3].to_vec();
                SmoothFunction::new(move |v| a[0] * v[0] * v[1] + a[1] * v[2] * v[2] + a[2] * v[0])
            };
            let (f, g, h) = (poly(0), poly(1), poly(2));
            let lhs = poisson_bracket(&f, &g.product(&h), &p, None)?;
            let v = &p.values;
            let rhs = g.eval(v) * poisson_bracket(&f, &h, &p, None)? + h.eval(v) * poisson_bracket(&f, &g, &p, None)?;
            Ok((lhs - rhs).norm() / (1.0 + lhs.norm()))
        }),
    )
}

pub const POISSON_SUITES: [Suite; 9] = [
    casimir_oneholed,
    casimir_fourholed,
    casimir_twoholed,
    jacobi_oneholed,
    jacobi_fourholed,
    jacobi_twoholed,
    threeholed_zero,
    antisymmetry,
    leibniz,
];

const WORD_MOVES: [MoveKind; 7] = [
    MoveKind::TwistX,
    MoveKind::TwistXInv,
    MoveKind::TwistY,
    MoveKind::TwistYInv,
    MoveKind::VietaX,
    MoveKind::VietaY,
    MoveKind::VietaZ,
];

/// Complex sampling radius for long words; larger starts overflow within
/// twenty moves.
pub const KAPPA_SAMPLE_RADIUS: f64 = 0.25;
pub const MAX_WORD_LENGTH: usize = 20;

/// `|κ(w·p) − κ(p)| / (1 + |κ(p)|)` after random twist and Vieta words of
/// length at most 20.
pub fn kappa_invariance(seed: u64, n: usize) -> SuiteResult {
    kappa_invariance_within(seed, n, KAPPA_SAMPLE_RADIUS)
}

/// [`kappa_invariance`] with real and imaginary parts drawn from `[−radius, radius]`.
pub fn kappa_invariance_within(seed: u64, n: usize, radius: f64) -> SuiteResult {
    let mut rng = rng(seed);
    tally(
        "kappa-invariance",
        KAPPA_TOL,
        (0..n).map(|_| {
            let p = TracePoint::oneholed(
                complex(&mut rng, radius),
                complex(&mut rng, radius),
                complex(&mut rng, radius),
            );
            let len = rng.gen_range(1..=MAX_WORD_LENGTH);
            let kinds: Vec<MoveKind> = (0..len).map(|_| WORD_MOVES[rng.gen_range(0..WORD_MOVES.len())]).collect();
            let q = apply_word(&McgWord::oneholed(&kinds), &p, None)?;
            let (k0, k1) = (kappa(&p)?, kappa(&q)?);
            Ok((k1 - k0).norm() / (1.0 + k0.norm()))
        }),
    )
}

fn lift(rng: &mut impl Rng) -> (TracePoint, charvar::oracle::Representation) {
    let v: [Scalar; 3] = std::array::from_fn(|_| complex(rng, 2.0));
    (TracePoint::oneholed(v[0], v[1], v[2]), lift_oneholed(v[0], v[1], v[2]))
}

/// Polynomial moves against traces of the pushed-forward lifted representation.
pub fn twist_pushforward(seed: u64, n: usize) -> SuiteResult {
    let mut rng = rng(seed);
    tally(
        "twist-pushforward",
        PUSHFORWARD_TOL,
        (0..n).map(|_| {
            let (p, rep) = lift(&mut rng);
            let mut worst: f64 = 0.0;
            for kind in WORD_MOVES {
                let m = Move::oneholed(kind);
                let poly = apply_move_oneholed(m, &p)?;
                let pushed = oneholed_traces(&apply_automorphism(&rep, &automorphism_of(m)?)?)?;
                for (a, b) in poly.values.iter().zip(pushed) {
                    worst = worst.max((a - b).norm() / a.norm().max(1.0));
                }
            }
            Ok(worst)
        }),
    )
}

/// `tr[X, Y] = κ(x, y, z)` on lifted points.
pub fn commutator_trace(seed: u64, n: usize) -> SuiteResult {
    let commutator = GroupWord::parse_with("xy", "xyXY").expect("valid word");
    let mut rng = rng(seed);
    tally(
        "commutator-trace",
        COMMUTATOR_TOL,
        (0..n).map(|_| {
            let (p, rep) = lift(&mut rng);
            let k = kappa(&p)?;
            let t = word_eval(&rep, &commutator)?.trace();
            let v = &p.values;
            Ok((t - k).norm() / kappa_term_scale(v[0], v[1], v[2]).max(1.0))
        }),
    )
}

pub fn fourholed_relation(seed: u64, n: usize) -> SuiteResult {
    let mut rng = rng(seed);
    tally(
        "relation/four-holed-sphere",
        RELATION_TOL,
        (0..n).map(|_| {
            let rep = random_representation(&mut rng, 3, MatrixFamily::SL2C);
            let (p, bd) = fourholed_traces(&rep)?;
            Ok(fourholed_residual(&p, &bd)?.norm() / fourholed_term_scale(&p, &bd).max(1.0))
        }),
    )
}

pub fn twoholed_relations(seed: u64, n: usize) -> SuiteResult {
    let mut rng = rng(seed);
    tally(
        "relation/two-holed-torus",
        RELATION_TOL,
        (0..n).map(|_| {
            let rep = random_representation(&mut rng, 3, MatrixFamily::SL2C);
            let (p, bd) = twoholed_traces(&rep)?;
            let (e1, e2) = twoholed_residuals(&p, &bd)?;
            let (s1, s2) = twoholed_term_scales(&p, &bd);
            Ok((e1.norm() / s1.max(1.0)).max(e2.norm() / s2.max(1.0)))
        }),
    )
}

/// `(tr A, tr B, tr (AB)⁻¹)` against a general matrix inverse.
pub fn threeholed_coordinates(seed: u64, n: usize) -> SuiteResult {
    let mut rng = rng(seed);
    tally(
        "coordinates/three-holed-sphere",
        1e-12,
        (0..n).map(|_| {
            let rep = random_representation(&mut rng, 2, MatrixFamily::SL2C);
            let p = threeholed_traces(&rep)?;
            let (a, b) = (rep.generator_images[0], rep.generator_images[1]);
            let want = [a.trace(), b.trace(), (a * b).inverse().trace()];
            Ok(p.values.iter().zip(want).map(|(u, v)| (u - v).norm() / v.norm().max(1.0)).fold(0.0, f64::max))
        }),
    )
}

/// Pushing forward by an automorphism and then by its inverse returns the
/// original representation.
pub fn automorphism_roundtrip(seed: u64, n: usize) -> SuiteResult {
    let mut rng = rng(seed);
    tally(
        "automorphism-roundtrip",
        1e-9,
        (0..n).map(|_| {
            let rep = random_representation(&mut rng, 2, MatrixFamily::SL2C);
            let mut worst: f64 = 0.0;
            for kind in WORD_MOVES {
                let phi = automorphism_of(Move::oneholed(kind))?;
                let back = apply_automorphism(&apply_automorphism(&rep, &phi)?, &phi.inverse())?;
                worst = worst.max(back.distance(&rep));
            }
            Ok(worst)
        }),
    )
}

fn random_word(rng: &mut impl Rng, max_len: usize) -> GroupWord {
    let len = rng.gen_range(0..=max_len);
    GroupWord {
        letters: (0..len)
            .map(|_| Letter { generator: rng.gen_range(0..2), inverse: rng.gen_bool(0.5) })
            .collect(),
    }
}

/// `u(vw) = u(v) + Ad ρ(v)·u(w)` on random words.
pub fn cocycle_rule(seed: u64, n: usize) -> SuiteResult {
    let mut rng = rng(seed);
    tally(
        "cocycle-rule",
        1e-9,
        (0..n).map(|_| {
            let rep = random_representation(&mut rng, 2, MatrixFamily::SL2C);
            let u = Cocycle { generator_values: vec![random_lie_element(&mut rng), random_lie_element(&mut rng)] };
            let (v, w) = (random_word(&mut rng, 6), random_word(&mut rng, 6));
            let lhs = extend_cocycle(&rep, &u, &v.concat(&w))?;
            let rhs = extend_cocycle(&rep, &u, &v)? + extend_cocycle(&rep, &u, &w)?.ad(&rep.eval(&v)?);
            Ok((lhs - rhs).norm() / lhs.norm().max(1.0))
        }),
    )
}

pub fn deformation_words() -> Vec<GroupWord> {
    ["x", "y", "xy", "xY", "xyXY", "xxy"]
        .iter()
        .map(|w| GroupWord::parse_with("xy", w).expect("valid word"))
        .collect()
}

/// `|slope − 2|` of the log-log trace deviation along coboundary directions.
pub fn coboundary_slope(seed: u64, n: usize) -> SuiteResult {
    let words = deformation_words();
    let mut rng = rng(seed);
    tally(
        "coboundary-slope",
        SLOPE_TOL,
        (0..n).map(|_| {
            let rep = random_representation(&mut rng, 2, MatrixFamily::SL2C);
            let u = coboundary(&rep, &random_lie_element(&mut rng));
            let devs = DEFORMATION_STEPS
                .iter()
                .map(|&t| trace_deviation(&rep, &u, t, &words))
                .collect::<Result<Vec<_>>>()?;
            Ok((loglog_slope(&DEFORMATION_STEPS, &devs) - 2.0).abs())
        }),
    )
}

/// `(dim Z¹, dim B¹, dim H¹) = (6, 3, 3)` on lifts of random points, which
/// are irreducible off `κ = 2`. The residual counts mismatched entries.
pub fn cohomology(seed: u64, n: usize) -> SuiteResult {
    let want = CohomologyDims { z1: 6, b1: 3, h1: 3 };
    let mut rng = rng(seed);
    tally(
        "cohomology-dimensions",
        0.0,
        (0..n).map(|_| {
            let (_, rep) = lift(&mut rng);
            let d = cohomology_dimensions(&rep);
            Ok([d.z1 != want.z1, d.b1 != want.b1, d.h1 != want.h1].iter().filter(|&&b| b).count() as f64)
        }),
    )
}

pub const ORACLE_SUITES: [Suite; 10] = [
    kappa_invariance,
    twist_pushforward,
    commutator_trace,
    fourholed_relation,
    twoholed_relations,
    threeholed_coordinates,
    automorphism_roundtrip,
    cocycle_rule,
    coboundary_slope,
    cohomology,
];
