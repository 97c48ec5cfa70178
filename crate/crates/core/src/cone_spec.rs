//! The normal form of a two-dimensional area-minimizing boundary cone: one
//! oriented half-plane plus weighted planes meeting only at the origin.

use nalgebra::{DMatrix, DVector};

use crate::current::SimplicialCurrent;
use crate::error::{Error, Result};
use crate::geom::{Plane2, Point};
use crate::mesh;

/// Maximum number of oblique planes supported by the toolkit.
pub const MAX_PLANES: usize = 8;

/// `S = Q⟦π⟧ + ⟦π⁺⟧ + Σ θ_i ⟦π_i⟧`, with `π` the plane containing the
/// half-plane `π⁺` and the `π_i` pairwise meeting only at the origin.
#[derive(Debug, Clone)]
pub struct ConeSpec {
    ambient: usize,
    /// unit direction of the boundary line Γ₀
    line_dir: Point,
    /// unit inward direction of the half-plane, orthogonal to `line_dir`
    inward: Point,
    /// multiplicity on the plane containing the half-plane (0 if none)
    q: u32,
    planes: Vec<(Plane2, u32)>,
}

impl ConeSpec {
    pub fn new(line_dir: Point, inward: Point, q: u32, planes: Vec<(Plane2, u32)>) -> Result<Self> {
        let ambient = line_dir.len();
        if inward.len() != ambient {
            return Err(Error::DimensionMismatch("half-plane directions".into()));
        }
        if (line_dir.norm() - 1.0).abs() > 1e-12
            || (inward.norm() - 1.0).abs() > 1e-12
            || line_dir.dot(&inward).abs() > 1e-12
        {
            return Err(Error::Precondition("half-plane directions must be orthonormal".into()));
        }
        if planes.len() > MAX_PLANES {
            return Err(Error::Precondition(format!("more than {MAX_PLANES} planes")));
        }
        let spec = ConeSpec { ambient, line_dir, inward, q, planes };
        let hp = spec.halfplane_plane();
        for (i, (p, th)) in spec.planes.iter().enumerate() {
            if *th == 0 {
                return Err(Error::Precondition(format!("plane {i} has zero multiplicity")));
            }
            if !planes_meet_only_at_origin(&hp, p) {
                return Err(Error::Precondition(format!(
                    "plane {i} meets the half-plane's plane away from the origin; fold it into Q"
                )));
            }
            for (j, (pj, _)) in spec.planes.iter().enumerate().skip(i + 1) {
                if !planes_meet_only_at_origin(p, pj) {
                    return Err(Error::Precondition(format!("planes {i} and {j} intersect off origin")));
                }
            }
        }
        Ok(spec)
    }

    /// Canonical `Q⟦π⟧ + ⟦π⁺⟧` at the `e1 ∧ e2` plane.
    pub fn canonical(ambient: usize, q: u32) -> Self {
        let mut l = DVector::zeros(ambient);
        l[0] = 1.0;
        let mut i = DVector::zeros(ambient);
        i[1] = 1.0;
        ConeSpec::new(l, i, q, Vec::new()).unwrap()
    }

    /// Add an oblique plane (must meet the others only at the origin).
    pub fn with_plane(mut self, plane: Plane2, theta: u32) -> Result<Self> {
        self.planes.push((plane, theta));
        ConeSpec::new(self.line_dir.clone(), self.inward.clone(), self.q, self.planes)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn planes(&self) -> &[(Plane2, u32)] {
        &self.planes
    }

    pub fn line_dir(&self) -> &Point {
        &self.line_dir
    }

    pub fn inward(&self) -> &Point {
        &self.inward
    }

    /// Oriented plane carrying the half-plane (and the `Q` sheet). The basis
    /// is `[-line_dir, inward]` so that the unit cross-section runs from
    /// `-e1` to `e1` and `∂⟨S, d, 1⟩ = δ_{e1} - δ_{-e1}`.
    pub fn halfplane_plane(&self) -> Plane2 {
        Plane2::new(-&self.line_dir, self.inward.clone(), true).unwrap()
    }

    /// Density at the apex, in units of `ω₂`.
    pub fn density(&self) -> f64 {
        self.q as f64 + 0.5 + self.planes.iter().map(|(_, t)| *t as f64).sum::<f64>()
    }

    /// Distance from `p` to the support of the cone.
    pub fn support_distance(&self, p: &Point) -> f64 {
        let s = self.line_dir.dot(p);
        let t = self.inward.dot(p);
        let in_plane = &self.line_dir * s + &self.inward * t;
        let resid2 = (p - &in_plane).norm_squared();
        let mut best = if self.q > 0 {
            resid2.sqrt()
        } else if t >= 0.0 {
            resid2.sqrt()
        } else {
            (resid2 + t * t).sqrt()
        };
        for (plane, _) in &self.planes {
            best = best.min(plane.distance(p));
        }
        best
    }

    /// The unit cross-section `R = ⟨S, d, 1⟩`: a half circle through `inward`
    /// plus `Q` and `θ_i` full circles, sampled with `n` segments per half
    /// turn.
    pub fn cross_section(&self, n: usize) -> SimplicialCurrent {
        let hp = self.halfplane_plane();
        let zero = DVector::zeros(self.ambient);
        let offset = |_: f64| zero.clone();
        let mut out = mesh::arc_curve(&hp, 1.0, 0.0, std::f64::consts::PI, n, 1, &offset).unwrap();
        if self.q > 0 {
            out = out.concat(&mesh::circle_curve(&hp, 1.0, 2 * n, self.q as i64, &offset).unwrap());
        }
        for (plane, theta) in &self.planes {
            out = out.concat(&mesh::circle_curve(plane, 1.0, 2 * n, *theta as i64, &offset).unwrap());
        }
        out
    }

    /// Triangulated cone mesh within radius `r`.
    pub fn sample_mesh(&self, radius: f64, nr: usize, nt: usize) -> SimplicialCurrent {
        let hp = self.halfplane_plane();
        let mut out = mesh::half_disk_mesh(&hp, radius, nr, nt, 1).unwrap();
        if self.q > 0 {
            out = out.concat(&mesh::disk_mesh(&hp, radius, nr, 2 * nt, self.q as i64).unwrap());
        }
        for (plane, theta) in &self.planes {
            out = out.concat(&mesh::disk_mesh(plane, radius, nr, 2 * nt, *theta as i64).unwrap());
        }
        out
    }

    /// Deterministic sample points on the support within `B_radius`, for
    /// symmetric Hausdorff estimates.
    pub fn sample_support_points(&self, radius: f64, n_radial: usize, n_angular: usize) -> Vec<Point> {
        let mut pts = Vec::new();
        let hp = self.halfplane_plane();
        for i in 1..=n_radial {
            let r = radius * i as f64 / n_radial as f64;
            for j in 0..n_angular {
                let t = std::f64::consts::PI * j as f64 / n_angular as f64;
                pts.push(hp.embed(r * t.cos(), r * t.sin()));
                if self.q > 0 {
                    pts.push(hp.embed(-r * t.cos(), -r * t.sin()));
                }
                for (plane, _) in &self.planes {
                    let tt = 2.0 * t;
                    pts.push(plane.embed(r * tt.cos(), r * tt.sin()));
                }
            }
        }
        pts
    }
}

/// Two 2-planes through the origin intersect only at the origin iff the
/// stacked 4×n basis matrix has full rank 4.
pub fn planes_meet_only_at_origin(a: &Plane2, b: &Plane2) -> bool {
    let n = a.ambient();
    if n < 4 {
        return false;
    }
    let (a1, a2) = a.basis();
    let (b1, b2) = b.basis();
    let rows = [a1, a2, b1, b2];
    let m = DMatrix::from_fn(4, n, |i, j| rows[i][j]);
    let svd = m.svd(false, false);
    svd.singular_values.iter().all(|&s| s > 1e-9)
}
