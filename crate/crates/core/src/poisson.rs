//! Poisson bivector fields on the ambient trace coordinates.
//!
//! Brackets follow the double-sum convention
//! `{f, g} = Σ_{i,j} ξ_ij (∂_i f ∂_j g − ∂_j f ∂_i g)` over all ordered
//! pairs, so coordinate brackets come out as `{x_i, x_j} = 2 ξ_ij`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{BoundaryData, Scalar, SurfaceModel, TracePoint};

/// Relative finite-difference step.
pub const FD_STEP: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bivector {
    pub model: SurfaceModel,
    pub components: Vec<Vec<Scalar>>,
}

impl Bivector {
    pub fn zero(model: SurfaceModel) -> Self {
        let n = model.coordinate_count();
        Self {
            model,
            components: vec![vec![Scalar::new(0.0, 0.0); n]; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.components[i][j]
    }

    /// Sets `ξ_ij` and its antisymmetric partner.
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.components[i][j] = v;
        self.components[j][i] = -v;
    }

    /// Looks a component up by coordinate names, e.g. `("x", "y")`.
    pub fn named(&self, a: &str, b: &str) -> Option<Scalar> {
        let names = self.model.coordinate_names();
        let i = names.iter().position(|n| *n == a)?;
        let j = names.iter().position(|n| *n == b)?;
        Some(self.get(i, j))
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.components[i][j] == -self.components[j][i]))
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().flatten().all(|v| *v == Scalar::new(0.0, 0.0))
    }

    pub fn max_modulus(&self) -> f64 {
        self.components.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Leaves of the three-holed sphere are points, so its bivector is zero.
pub fn bivector_threeholed(p: &TracePoint) -> Result<Bivector> {
    SurfaceModel::ThreeHoledSphere.expect(p.model)?;
    Ok(Bivector::zero(p.model))
}

pub fn bivector_oneholed(p: &TracePoint) -> Result<Bivector> {
    SurfaceModel::OneHoledTorus.expect(p.model)?;
    let [x, y, z] = p.triple();
    let mut xi = Bivector::zero(p.model);
    xi.set(1, 2, 2.0 * x - y * z);
    xi.set(2, 0, 2.0 * y - z * x);
    xi.set(0, 1, 2.0 * z - x * y);
    Ok(xi)
}

pub fn bivector_fourholed(p: &TracePoint, bd: &BoundaryData) -> Result<Bivector> {
    SurfaceModel::FourHoledSphere.expect(p.model)?;
    SurfaceModel::FourHoledSphere.expect(bd.model)?;
    let [x, y, z] = p.triple();
    let [a, b, c, d] = bd.quad();
    let mut xi = Bivector::zero(p.model);
    xi.set(1, 2, a * b + c * d - 2.0 * x - y * z);
    xi.set(2, 0, b * c + d * a - 2.0 * y - z * x);
    xi.set(0, 1, c * a + b * d - 2.0 * z - x * y);
    Ok(xi)
}

/// Two-holed torus bivector in coordinates `(x, y, z, u, v, w)`.
///
/// Pairs not listed below have coefficient zero. Both defining relations
/// are Casimirs and the Jacobi identity holds exactly; the sign of the
/// `(v,x), (x,u), (u,v)` block and the `z∧x` coefficient `2y − zx` are
/// the choices that make this true.
pub fn bivector_twoholed(p: &TracePoint, bd: &BoundaryData) -> Result<Bivector> {
    SurfaceModel::TwoHoledTorus.expect(p.model)?;
    SurfaceModel::TwoHoledTorus.expect(bd.model)?;
    let v = &p.values;
    let (x, y, z, u, vv, w) = (v[0], v[1], v[2], v[3], v[4], v[5]);
    const X: usize = 0;
    const Y: usize = 1;
    const Z: usize = 2;
    const U: usize = 3;
    const V: usize = 4;
    const W: usize = 5;
    let mut xi = Bivector::zero(p.model);
    xi.set(X, Y, 2.0 * z - x * y);
    xi.set(Y, Z, 2.0 * x - y * z);
    xi.set(Z, X, 2.0 * y - z * x);
    xi.set(V, X, -(2.0 * u - vv * x));
    xi.set(X, U, -(2.0 * vv - x * u));
    xi.set(U, V, -(2.0 * x - u * vv));
    xi.set(W, Y, 2.0 * u - w * y);
    xi.set(Y, U, 2.0 * w - y * u);
    xi.set(U, W, 2.0 * y - u * w);
    xi.set(V, W, 2.0 * (x * y - z) - vv * w);
    xi.set(W, Z, 2.0 * (x * u - vv) - w * z);
    xi.set(Z, V, 2.0 * (y * u - w) - z * vv);
    Ok(xi)
}

fn require_boundary(model: SurfaceModel, bd: Option<&BoundaryData>) -> Result<&BoundaryData> {
    bd.ok_or_else(|| Error::InvalidConfig(format!("{model} bivector needs boundary traces")))
}

/// The bivector of whichever model `p` belongs to.
pub fn bivector(p: &TracePoint, bd: Option<&BoundaryData>) -> Result<Bivector> {
    match p.model {
        SurfaceModel::ThreeHoledSphere => bivector_threeholed(p),
        SurfaceModel::OneHoledTorus => bivector_oneholed(p),
        SurfaceModel::FourHoledSphere => bivector_fourholed(p, require_boundary(p.model, bd)?),
        SurfaceModel::TwoHoledTorus => bivector_twoholed(p, require_boundary(p.model, bd)?),
    }
}

type Evaluator = dyn Fn(&[Scalar]) -> Scalar + Send + Sync;
type GradientFn = dyn Fn(&[Scalar]) -> Vec<Scalar> + Send + Sync;

/// A holomorphic function of the trace coordinates.
#[derive(Clone)]
pub struct SmoothFunction {
    evaluator: Arc<Evaluator>,
    gradient: Option<Arc<GradientFn>>,
}

impl fmt::Debug for SmoothFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothFunction")
            .field("analytic_gradient", &self.gradient.is_some())
            .finish()
    }
}

impl SmoothFunction {
    pub fn new(f: impl Fn(&[Scalar]) -> Scalar + Send + Sync + 'static) -> Self {
        Self {
            evaluator: Arc::new(f),
            gradient: None,
        }
    }

    pub fn with_gradient(
        mut self,
        g: impl Fn(&[Scalar]) -> Vec<Scalar> + Send + Sync + 'static,
    ) -> Self {
        self.gradient = Some(Arc::new(g));
        self
    }

    /// The `i`-th coordinate function, with its exact gradient.
    pub fn coordinate(i: usize) -> Self {
        Self::new(move |v| v[i]).with_gradient(move |v| {
            let mut g = vec![Scalar::new(0.0, 0.0); v.len()];
            g[i] = Scalar::new(1.0, 0.0);
            g
        })
    }

    pub fn has_analytic_gradient(&self) -> bool {
        self.gradient.is_some()
    }

    pub fn eval(&self, v: &[Scalar]) -> Scalar {
        (self.evaluator)(v)
    }

    /// Analytic gradient when available, central differences otherwise.
    pub fn gradient(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        let g = match &self.gradient {
            Some(g) => g(v),
            None => (0..v.len()).map(|i| central_difference(&*self.evaluator, v, i)).collect(),
        };
        if g.len() != v.len() {
            return Err(Error::Gradient(format!(
                "gradient has {} entries for {} coordinates",
                g.len(),
                v.len()
            )));
        }
        if let Some(i) = g.iter().position(|d| !(d.re.is_finite() && d.im.is_finite())) {
            return Err(Error::Gradient(format!("non-finite derivative in coordinate {i}")));
        }
        Ok(g)
    }

    pub fn product(&self, other: &SmoothFunction) -> SmoothFunction {
        let (f, g) = (self.evaluator.clone(), other.evaluator.clone());
        SmoothFunction::new(move |v| f(v) * g(v))
    }
}

fn fd_step(v: Scalar) -> f64 {
    FD_STEP * (1.0 + v.norm())
}

fn shifted(v: &[Scalar], i: usize, h: f64) -> Vec<Scalar> {
    let mut w = v.to_vec();
    w[i] += h;
    w
}

fn central_difference_with(f: &(impl Fn(&[Scalar]) -> Scalar + ?Sized), v: &[Scalar], i: usize, h: f64) -> Scalar {
    (f(&shifted(v, i, h)) - f(&shifted(v, i, -h))) / (2.0 * h)
}

fn central_difference(f: &(impl Fn(&[Scalar]) -> Scalar + ?Sized), v: &[Scalar], i: usize) -> Scalar {
    central_difference_with(f, v, i, fd_step(v[i]))
}

/// Central difference refined by one Richardson step.
fn richardson_difference(f: &(impl Fn(&[Scalar]) -> Scalar + ?Sized), v: &[Scalar], i: usize) -> Scalar {
    let h = fd_step(v[i]);
    let coarse = central_difference_with(f, v, i, h);
    let fine = central_difference_with(f, v, i, h / 2.0);
    (4.0 * fine - coarse) / 3.0
}

fn contract(xi: &Bivector, df: &[Scalar], dg: &[Scalar]) -> Scalar {
    let n = xi.dim();
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let c = xi.components[i][j];
            if c != Complex64::new(0.0, 0.0) {
                s += c * (df[i] * dg[j] - df[j] * dg[i]);
            }
        }
    }
    s
}

pub fn poisson_bracket(
    f: &SmoothFunction,
    g: &SmoothFunction,
    p: &TracePoint,
    bd: Option<&BoundaryData>,
) -> Result<Scalar> {
    let xi = bivector(p, bd)?;
    Ok(contract(&xi, &f.gradient(&p.values)?, &g.gradient(&p.values)?))
}

/// `{x_i, x_j}` at raw coordinate values.
fn coordinate_bracket(
    model: SurfaceModel,
    values: &[Scalar],
    bd: Option<&BoundaryData>,
    i: usize,
    j: usize,
) -> Result<Scalar> {
    let p = TracePoint {
        model,
        values: values.to_vec(),
        sector: None,
    };
    Ok(2.0 * bivector(&p, bd)?.get(i, j))
}

/// Largest Jacobiator `|{f,{g,h}} + {g,{h,f}} + {h,{f,g}}|` over triples of
/// coordinate functions. Inner brackets are differentiated numerically.
pub fn jacobi_residual(p: &TracePoint, bd: Option<&BoundaryData>) -> Result<f64> {
    let xi = bivector(p, bd)?;
    if xi.is_zero() && p.model == SurfaceModel::ThreeHoledSphere {
        return Ok(0.0);
    }
    let n = xi.dim();
    let model = p.model;
    // {x_a, F} = 2 Σ_b ξ_ab ∂_b F
    let outer = |a: usize, j: usize, k: usize| -> Result<Scalar> {
        let inner = move |v: &[Scalar]| coordinate_bracket(model, v, bd, j, k).unwrap_or(Scalar::new(f64::NAN, 0.0));
        let mut s = Complex64::new(0.0, 0.0);
        for b in 0..n {
            let c = xi.get(a, b);
            if c != Complex64::new(0.0, 0.0) {
                let d = richardson_difference(&inner, &p.values, b);
                if !(d.re.is_finite() && d.im.is_finite()) {
                    return Err(Error::Gradient(format!("inner bracket {{{j},{k}}} not differentiable")));
                }
                s += c * d;
            }
        }
        Ok(2.0 * s)
    };
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let r = outer(i, j, k)? + outer(j, k, i)? + outer(k, i, j)?;
                worst = worst.max(r.norm());
            }
        }
    }
    Ok(worst)
}

/// Density of the leafwise symplectic measure on a level set of the
/// one-holed torus, in the chart given by the coordinate pair `(i, j)`.
pub fn leaf_measure_density(p: &TracePoint, chart: (usize, usize)) -> Result<f64> {
    let xi = bivector_oneholed(p)?;
    let (i, j) = chart;
    if i >= 3 || j >= 3 || i == j {
        return Err(Error::InvalidConfig(format!("invalid chart ({i}, {j})")));
    }
    let c = xi.get(i, j).norm();
    if c == 0.0 {
        return Err(Error::DegenerateChart(i, j));
    }
    Ok(1.0 / c)
}

/// The defining functions whose level sets are the relative character
/// varieties, each with an exact gradient.
pub fn defining_invariants(model: SurfaceModel, bd: Option<&BoundaryData>) -> Result<Vec<SmoothFunction>> {
    Ok(match model {
        SurfaceModel::ThreeHoledSphere => vec![],
        SurfaceModel::OneHoledTorus => vec![SmoothFunction::new(|v| {
            let (x, y, z) = (v[0], v[1], v[2]);
            x * x + y * y + z * z - x * y * z - 2.0
        })
        .with_gradient(|v| {
            let (x, y, z) = (v[0], v[1], v[2]);
            vec![2.0 * x - y * z, 2.0 * y - x * z, 2.0 * z - x * y]
        })],
        SurfaceModel::FourHoledSphere => {
            let [a, b, c, d] = require_boundary(model, bd)?.quad();
            let (sx, sy, sz) = (a * b + c * d, b * c + a * d, a * c + b * d);
            vec![SmoothFunction::new(move |v| {
                let (x, y, z) = (v[0], v[1], v[2]);
                x * x + y * y + z * z + x * y * z - sx * x - sy * y - sz * z
            })
            .with_gradient(move |v| {
                let (x, y, z) = (v[0], v[1], v[2]);
                vec![2.0 * x + y * z - sx, 2.0 * y + x * z - sy, 2.0 * z + x * y - sz]
            })]
        }
        SurfaceModel::TwoHoledTorus => {
            require_boundary(model, bd)?;
            let f1 = SmoothFunction::new(|v| {
                let (x, y, z, u, vv, w) = (v[0], v[1], v[2], v[3], v[4], v[5]);
                x * w + y * vv + u * z - x * y * u
            })
            .with_gradient(|v| {
                let (x, y, z, u, vv, w) = (v[0], v[1], v[2], v[3], v[4], v[5]);
                vec![w - y * u, vv - x * u, u, z - x * y, y, x]
            });
            let f2 = SmoothFunction::new(|v| {
                let (x, y, z, u, vv, w) = (v[0], v[1], v[2], v[3], v[4], v[5]);
                x * x + y * y + z * z + u * u + vv * vv + w * w + vv * w * z
                    - x * y * z
                    - x * u * vv
                    - y * u * w
            })
            .with_gradient(|v| {
                let (x, y, z, u, vv, w) = (v[0], v[1], v[2], v[3], v[4], v[5]);
                vec![
                    2.0 * x - y * z - u * vv,
                    2.0 * y - x * z - u * w,
                    2.0 * z + vv * w - x * y,
                    2.0 * u - x * vv - y * w,
                    2.0 * vv + w * z - x * u,
                    2.0 * w + vv * z - y * u,
                ]
            });
            vec![f1, f2]
        }
    })
}

/// Largest `|{I, x_i}|` over defining invariants `I` and coordinates `x_i`.
pub fn casimir_residual(p: &TracePoint, bd: Option<&BoundaryData>) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for inv in defining_invariants(p.model, bd)? {
        for i in 0..p.model.coordinate_count() {
            let b = poisson_bracket(&inv, &SmoothFunction::coordinate(i), p, bd)?;
            worst = worst.max(b.norm());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::re;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(rng: &mut impl Rng) -> Scalar {
        Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
    }

    fn random_case(model: SurfaceModel, rng: &mut impl Rng) -> (TracePoint, Option<BoundaryData>) {
        let values = (0..model.coordinate_count()).map(|_| c(rng)).collect();
        let p = TracePoint::new(model, values).unwrap();
        let bd = match model {
            SurfaceModel::FourHoledSphere | SurfaceModel::TwoHoledTorus => {
                Some(BoundaryData::new(model, (0..model.boundary_count()).map(|_| c(rng)).collect()).unwrap())
            }
            _ => None,
        };
        (p, bd)
    }

    #[test]
    fn oneholed_examples() {
        assert!(bivector_oneholed(&TracePoint::oneholed_real(0.0, 0.0, 0.0)).unwrap().is_zero());
        assert!(bivector_oneholed(&TracePoint::oneholed_real(2.0, 2.0, 2.0)).unwrap().is_zero());
        let xi = bivector_oneholed(&TracePoint::oneholed_real(1.0, 0.0, 0.0)).unwrap();
        assert_eq!(xi.named("y", "z"), Some(re(2.0)));
        assert_eq!(xi.named("z", "x"), Some(re(0.0)));
        assert_eq!(xi.named("x", "y"), Some(re(0.0)));
        assert_eq!(xi.named("z", "y"), Some(re(-2.0)));
        assert!(bivector_oneholed(&TracePoint::fourholed(re(0.0), re(0.0), re(0.0))).is_err());
    }

    #[test]
    fn fourholed_examples() {
        let bd = BoundaryData::fourholed(re(0.0), re(0.0), re(0.0), re(0.0));
        let p = TracePoint::fourholed(re(0.0), re(0.0), re(0.0));
        assert!(bivector_fourholed(&p, &bd).unwrap().is_zero());
        let bd = BoundaryData::fourholed(re(2.0), re(2.0), re(2.0), re(2.0));
        let p = TracePoint::fourholed(re(2.0), re(2.0), re(2.0));
        assert!(bivector_fourholed(&p, &bd).unwrap().is_zero());
    }

    #[test]
    fn twoholed_examples() {
        let bd = BoundaryData::real(SurfaceModel::TwoHoledTorus, &[2.0, 2.0]).unwrap();
        let p = TracePoint::real(SurfaceModel::TwoHoledTorus, &[2.0; 6]).unwrap();
        assert!(bivector_twoholed(&p, &bd).unwrap().is_zero());
        let p = TracePoint::real(SurfaceModel::TwoHoledTorus, &[0.0; 6]).unwrap();
        assert!(bivector_twoholed(&p, &bd).unwrap().is_zero());
    }

    #[test]
    fn antisymmetry_and_zero_fill() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let printed = [(0, 1), (1, 2), (2, 0), (4, 0), (0, 3), (3, 4), (5, 1), (1, 3), (3, 5), (4, 5), (5, 2), (2, 4)];
        for _ in 0..100 {
            for model in SurfaceModel::ALL {
                let (p, bd) = random_case(model, &mut rng);
                let xi = bivector(&p, bd.as_ref()).unwrap();
                assert!(xi.is_antisymmetric());
                assert!((0..xi.dim()).all(|i| xi.get(i, i) == re(0.0)));
            }
            let (p, bd) = random_case(SurfaceModel::TwoHoledTorus, &mut rng);
            let xi = bivector(&p, bd.as_ref()).unwrap();
            for i in 0..6 {
                for j in 0..6 {
                    let listed = printed.iter().any(|&(a, b)| (a, b) == (i, j) || (b, a) == (i, j));
                    if !listed {
                        assert_eq!(xi.get(i, j), re(0.0), "({i},{j})");
                    }
                }
            }
        }
    }

    #[test]
    fn coordinate_bracket_is_twice_component() {
        let p = TracePoint::oneholed(re(0.3), Complex64::new(-1.0, 0.5), re(1.7));
        let b = poisson_bracket(&SmoothFunction::coordinate(0), &SmoothFunction::coordinate(1), &p, None).unwrap();
        let [x, y, z] = p.triple();
        assert!((b - 2.0 * (2.0 * z - x * y)).norm() < 1e-15);
    }

    #[test]
    fn casimirs() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for model in [SurfaceModel::OneHoledTorus, SurfaceModel::FourHoledSphere, SurfaceModel::TwoHoledTorus] {
            for _ in 0..1000 {
                let (p, bd) = random_case(model, &mut rng);
                let r = casimir_residual(&p, bd.as_ref()).unwrap();
                assert!(r <= 1e-8, "{model}: {r}");
            }
        }
    }

    #[test]
    fn kappa_bracket_by_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let k = SmoothFunction::new(|v| v[0] * v[0] + v[1] * v[1] + v[2] * v[2] - v[0] * v[1] * v[2] - 2.0);
        for _ in 0..1000 {
            let (p, _) = random_case(SurfaceModel::OneHoledTorus, &mut rng);
            for i in 0..3 {
                // roundoff of a 1e-6 central difference on values of size ~10
                let b = poisson_bracket(&k, &SmoothFunction::coordinate(i), &p, None).unwrap();
                assert!(b.norm() <= 1e-7, "{}", b.norm());
            }
        }
    }

    #[test]
    fn jacobi() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for model in [SurfaceModel::OneHoledTorus, SurfaceModel::FourHoledSphere, SurfaceModel::TwoHoledTorus] {
            for _ in 0..100 {
                let (p, bd) = random_case(model, &mut rng);
                let r = jacobi_residual(&p, bd.as_ref()).unwrap();
                assert!(r <= 1e-6, "{model}: {r}");
            }
        }
        let p = TracePoint::real(SurfaceModel::ThreeHoledSphere, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(jacobi_residual(&p, None).unwrap(), 0.0);
    }

    #[test]
    fn threeholed_brackets_vanish() {
        let p = TracePoint::real(SurfaceModel::ThreeHoledSphere, &[0.5, -1.0, 3.0]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let b = poisson_bracket(&SmoothFunction::coordinate(i), &SmoothFunction::coordinate(j), &p, None).unwrap();
                assert_eq!(b, re(0.0));
            }
        }
    }

    /// The two-holed coefficients transcribed without the sign and index
    /// corrections do not define a Poisson structure with the defining
    /// relations as Casimirs.
    #[test]
    fn uncorrected_twoholed_coefficients_fail() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let (p, bd) = random_case(SurfaceModel::TwoHoledTorus, &mut rng);
        let good = bivector_twoholed(&p, bd.as_ref().unwrap()).unwrap();
        let v = &p.values;
        let (x, y, z, u, vv) = (v[0], v[1], v[2], v[3], v[4]);
        let mut bad = good.clone();
        bad.set(2, 0, 2.0 * y - y * x);
        bad.set(4, 0, 2.0 * u - vv * x);
        bad.set(0, 3, 2.0 * vv - x * u);
        bad.set(3, 4, 2.0 * x - u * vv);
        let invs = defining_invariants(SurfaceModel::TwoHoledTorus, bd.as_ref()).unwrap();
        let worst = invs
            .iter()
            .flat_map(|inv| {
                let df = inv.gradient(v).unwrap();
                (0..6)
                    .map(|i| {
                        let mut e = vec![re(0.0); 6];
                        e[i] = re(1.0);
                        contract(&bad, &df, &e).norm()
                    })
                    .collect::<Vec<_>>()
            })
            .fold(0.0, f64::max);
        assert!(worst > 1e-3, "{worst} {z}");
    }

    #[test]
    fn antisymmetry_and_leibniz() {
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        for _ in 0..100 {
            let (p, _) = random_case(SurfaceModel::OneHoledTorus, &mut rng);
            let co: Vec<f64> = (0..9).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let poly = |k: usize| {
                let a = co[3 * k..3 * k + 3].to_vec();
                SmoothFunction::new(move |v| a[0] * v[0] * v[1] + a[1] * v[2] * v[2] + a[2] * v[0])
            };
            let (f, g, h) = (poly(0), poly(1), poly(2));
            let fg = poisson_bracket(&f, &g, &p, None).unwrap();
            let gf = poisson_bracket(&g, &f, &p, None).unwrap();
            assert!((fg + gf).norm() <= 1e-8);
            assert!(poisson_bracket(&f, &f, &p, None).unwrap().norm() <= 1e-8);
            let lhs = poisson_bracket(&f, &g.product(&h), &p, None).unwrap();
            let v = &p.values;
            let rhs = g.eval(v) * poisson_bracket(&f, &h, &p, None).unwrap()
                + h.eval(v) * poisson_bracket(&f, &g, &p, None).unwrap();
            assert!((lhs - rhs).norm() <= 1e-8 * (1.0 + lhs.norm()), "{}", (lhs - rhs).norm());
        }
    }

    #[test]
    fn leaf_density() {
        let p = TracePoint::oneholed_real(0.0, 0.0, 1.0);
        assert_eq!(leaf_measure_density(&p, (0, 1)).unwrap(), 0.5);
        let q = TracePoint::oneholed_real(2.0, 2.0, 2.0);
        assert_eq!(leaf_measure_density(&q, (0, 1)), Err(Error::DegenerateChart(0, 1)));
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        for _ in 0..100 {
            let (p, _) = random_case(SurfaceModel::OneHoledTorus, &mut rng);
            assert!(leaf_measure_density(&p, (1, 2)).unwrap() > 0.0);
        }
    }

    #[test]
    fn missing_gradient_is_reported() {
        let f = SmoothFunction::new(|v| v[0].ln());
        let p = TracePoint::oneholed_real(0.0, 1.0, 1.0);
        assert!(matches!(
            poisson_bracket(&f, &SmoothFunction::coordinate(1), &p, None),
            Err(Error::Gradient(_))
        ));
    }
}
