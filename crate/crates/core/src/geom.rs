//! Shared geometric primitives: simplex volumes, 2-vector algebra, oriented
//! planes, Gauss–Legendre rules and deterministic sampling helpers.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type Point = DVector<f64>;

/// Euclidean length of the segment `[a, b]`.
pub fn seg_length(a: &Point, b: &Point) -> f64 {
    (b - a).norm()
}

/// Area of the triangle `[a, b, c]` in any ambient dimension (Gram determinant).
pub fn tri_area(a: &Point, b: &Point, c: &Point) -> f64 {
    let u = b - a;
    let v = c - a;
    let uu = u.dot(&u);
    let vv = v.dot(&v);
    let uv = u.dot(&v);
    (uu * vv - uv * uv).max(0.0).sqrt() * 0.5
}

/// Coordinates of `u ∧ v` in the lexicographic basis `e_i ∧ e_j`, `i < j`.
pub fn wedge2(u: &Point, v: &Point) -> DVector<f64> {
    let n = u.len();
    let mut w = DVector::zeros(n * (n - 1) / 2);
    let mut idx = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            w[idx] = u[i] * v[j] - u[j] * v[i];
            idx += 1;
        }
    }
    w
}

/// Unit simple 2-vector of the oriented triangle `[a, b, c]`; `None` when degenerate.
pub fn unit_tangent2(a: &Point, b: &Point, c: &Point) -> Option<DVector<f64>> {
    let w = wedge2(&(b - a), &(c - a));
    let n = w.norm();
    if n <= 0.0 {
        return None;
    }
    Some(w / n)
}

/// An oriented 2-plane through the origin, stored as an orthonormal basis and
/// an orientation sign.
#[derive(Debug, Clone)]
pub struct Plane2 {
    basis: [Point; 2],
    sign: f64,
}

impl Plane2 {
    pub const ORTHONORMAL_TOL: f64 = 1e-12;

    pub fn new(b1: Point, b2: Point, positive: bool) -> Result<Self> {
        if b1.len() != b2.len() {
            return Err(Error::DimensionMismatch("plane basis lengths differ".into()));
        }
        let t = Self::ORTHONORMAL_TOL;
        if (b1.norm() - 1.0).abs() > t || (b2.norm() - 1.0).abs() > t || b1.dot(&b2).abs() > t {
            return Err(Error::Precondition("plane basis not orthonormal to 1e-12".into()));
        }
        Ok(Plane2 {
            basis: [b1, b2],
            sign: if positive { 1.0 } else { -1.0 },
        })
    }

    /// Build from a (not necessarily orthonormal) spanning pair.
    pub fn from_span(u: &Point, v: &Point, positive: bool) -> Result<Self> {
        let nu = u.norm();
        if nu == 0.0 {
            return Err(Error::Precondition("zero spanning vector".into()));
        }
        let b1 = u / nu;
        let w = v - &b1 * b1.dot(v);
        let nw = w.norm();
        if nw < 1e-14 {
            return Err(Error::Precondition("spanning vectors collinear".into()));
        }
        Plane2::new(b1, w / nw, positive)
    }

    /// Canonical `e1 ∧ e2` plane.
    pub fn e12(ambient: usize) -> Self {
        let mut b1 = DVector::zeros(ambient);
        b1[0] = 1.0;
        let mut b2 = DVector::zeros(ambient);
        b2[1] = 1.0;
        Plane2 { basis: [b1, b2], sign: 1.0 }
    }

    pub fn ambient(&self) -> usize {
        self.basis[0].len()
    }

    pub fn basis(&self) -> (&Point, &Point) {
        (&self.basis[0], &self.basis[1])
    }

    pub fn sign(&self) -> f64 {
        self.sign
    }

    /// Unit 2-vector (orientation included).
    pub fn unit_bivector(&self) -> DVector<f64> {
        wedge2(&self.basis[0], &self.basis[1]) * self.sign
    }

    /// In-plane coordinates of the orthogonal projection of `p`.
    pub fn project_coords(&self, p: &Point) -> (f64, f64) {
        (self.basis[0].dot(p), self.basis[1].dot(p))
    }

    pub fn embed(&self, a: f64, b: f64) -> Point {
        &self.basis[0] * a + &self.basis[1] * b
    }

    /// Orthogonal projection of `p` onto the plane.
    pub fn project_point(&self, p: &Point) -> Point {
        let (a, b) = self.project_coords(p);
        self.embed(a, b)
    }

    /// Distance from `p` to the plane.
    pub fn distance(&self, p: &Point) -> f64 {
        (p - self.project_point(p)).norm()
    }

    /// Norm of the in-plane projection of `p` (cylindrical radius).
    pub fn cylinder_radius(&self, p: &Point) -> f64 {
        let (a, b) = self.project_coords(p);
        (a * a + b * b).sqrt()
    }

    /// `⟨τ⃗_self, τ⃗_other⟩` for the unit bivectors.
    pub fn bivector_inner(&self, other: &Plane2) -> f64 {
        self.unit_bivector().dot(&other.unit_bivector())
    }
}

/// Orthogonal matrix whose action maps `plane.basis` to `(e1, e2)`.
///
/// Rows are a deterministic orthonormal completion of the plane basis.
pub fn rotation_to_e12(plane: &Plane2) -> DMatrix<f64> {
    let n = plane.ambient();
    let mut rows: Vec<Point> = vec![plane.basis[0].clone(), plane.basis[1].clone()];
    for i in 0..n {
        if rows.len() == n {
            break;
        }
        let mut cand = DVector::zeros(n);
        cand[i] = 1.0;
        for r in &rows {
            let d = r.dot(&cand);
            cand -= r * d;
        }
        let nc = cand.norm();
        if nc > 1e-8 {
            rows.push(cand / nc);
        }
    }
    assert_eq!(rows.len(), n, "basis completion failed");
    DMatrix::from_fn(n, n, |i, j| rows[i][j])
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let (p, dp) = legendre_and_derivative(n, x);
            pp = dp;
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        xs.iter().map(|x| mid + half * x).collect(),
        ws.iter().map(|w| w * half).collect(),
    )
}

/// Deterministic RNG for all randomized sampling in the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform random unit vector in `R^n`.
pub fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Point {
    loop {
        let v = DVector::from_fn(n, |_, _| {
            // Box-Muller from two uniforms.
            let u1: f64 = rng.gen_range(1e-12..1.0);
            let u2: f64 = rng.gen_range(0.0..1.0);
            (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
        });
        let nv = v.norm();
        if nv > 1e-6 {
            return v / nv;
        }
    }
}

/// Least-squares fit of `log v = log c + alpha * log r`; returns
/// `(c, alpha, rms residual)`.
pub fn loglog_fit(radii: &[f64], values: &[f64]) -> Result<(f64, f64, f64)> {
    if radii.len() != values.len() || radii.len() < 2 {
        return Err(Error::Precondition("need at least two points for a log-log fit".into()));
    }
    let xs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
    let det = n * sxx - sx * sx;
    if det.abs() < 1e-12 * n * sxx.max(1.0) {
        return Err(Error::Precondition("log-log samples are collinear in abscissa".into()));
    }
    let alpha = (n * sxy - sx * sy) / det;
    let logc = (sy - alpha * sx) / n;
    let mut res = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        let d = y - (logc + alpha * x);
        res += d * d;
    }
    Ok((logc.exp(), alpha, (res / n).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn triangle_area_matches_2d_shoelace() {
        let a = DVector::from_vec(vec![0.0, 0.0, 0.0]);
        let b = DVector::from_vec(vec![2.0, 0.0, 0.0]);
        let c = DVector::from_vec(vec![0.0, 3.0, 0.0]);
        assert_relative_eq!(tri_area(&a, &b, &c), 3.0, epsilon = 1e-14);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (xs, ws) = gauss_legendre_on(8, 0.0, 1.0);
        // degree 15 is exact for an 8-point rule
        let val: f64 = xs.iter().zip(&ws).map(|(x, w)| w * x.powi(15)).sum();
        assert_relative_eq!(val, 1.0 / 16.0, epsilon = 1e-14);
    }

    #[test]
    fn plane_bivector_inner_is_cosine_of_tilt() {
        let p = Plane2::e12(4);
        let s: f64 = 0.3;
        let v = DVector::from_vec(vec![0.0, 1.0, s, 0.0]);
        let e1 = DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0]);
        let q = Plane2::from_span(&e1, &v, true).unwrap();
        assert_relative_eq!(p.bivector_inner(&q), 1.0 / (1.0 + s * s).sqrt(), epsilon = 1e-13);
    }

    #[test]
    fn loglog_fit_recovers_planted_exponent() {
        let radii: Vec<f64> = (1..=10).map(|i| 0.1 * i as f64).collect();
        let values: Vec<f64> = radii.iter().map(|r| 3.0 * r.powf(0.7)).collect();
        let (c, a, res) = loglog_fit(&radii, &values).unwrap();
        assert_relative_eq!(a, 0.7, epsilon = 1e-9);
        assert_relative_eq!(c, 3.0, epsilon = 1e-9);
        assert!(res < 1e-12);
    }
}
