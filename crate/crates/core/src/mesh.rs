//! Structured mesh builders: polar graphs over a plane (sectors and full
//! disks), used by the scenario catalog, the epiperimetric competitor and the
//! test fixtures.

use nalgebra::DVector;

use crate::current::SimplicialCurrent;
use crate::error::{Error, Result};
use crate::geom::{Plane2, Point};

/// Options for [`polar_graph_mesh`].
pub struct PolarMesh<'a> {
    pub plane: &'a Plane2,
    /// radial range; `r0 = 0` produces a fan around a single apex vertex
    pub r0: f64,
    pub r1: f64,
    /// angular range; ignored endpoint identification unless `periodic`
    pub t0: f64,
    pub t1: f64,
    pub nr: usize,
    pub nt: usize,
    pub periodic: bool,
    pub mult: i64,
}

/// Triangulated graph `(r, t) ↦ plane(r cos t, r sin t) + offset(r, t)` with
/// quad cells split into two triangles; orientation follows increasing `(r, t)`.
///
/// The offset must be constant in `t` at `r = r0` when `r0 = 0` (the apex).
pub fn polar_graph_mesh(
    opts: &PolarMesh,
    offset: &dyn Fn(f64, f64) -> Point,
) -> Result<SimplicialCurrent> {
    let ambient = opts.plane.ambient();
    let (nr, nt) = (opts.nr, opts.nt);
    if nr == 0 || nt == 0 {
        return Err(Error::Precondition("polar mesh needs nr, nt >= 1".into()));
    }
    let apex_fan = opts.r0 == 0.0;
    let ncols = if opts.periodic { nt } else { nt + 1 };
    let mut vertices: Vec<Point> = Vec::new();
    let index = |i: usize, j: usize| -> usize {
        let jj = if opts.periodic { j % nt } else { j };
        if apex_fan {
            if i == 0 {
                0
            } else {
                1 + (i - 1) * ncols + jj
            }
        } else {
            i * ncols + jj
        }
    };

    let pos = |r: f64, t: f64| -> Point {
        let mut p = opts.plane.embed(r * t.cos(), r * t.sin());
        p += offset(r, t);
        p
    };

    if apex_fan {
        vertices.push(pos(0.0, opts.t0));
    }
    let i_start = if apex_fan { 1 } else { 0 };
    for i in i_start..=nr {
        let r = opts.r0 + (opts.r1 - opts.r0) * i as f64 / nr as f64;
        for j in 0..ncols {
            let t = opts.t0 + (opts.t1 - opts.t0) * j as f64 / nt as f64;
            vertices.push(pos(r, t));
        }
    }

    let mut simplices = Vec::new();
    for i in 0..nr {
        for j in 0..nt {
            let a = index(i, j);
            let b = index(i + 1, j);
            let c = index(i + 1, j + 1);
            let d = index(i, j + 1);
            if i == 0 && apex_fan {
                simplices.push(vec![a, b, c]);
            } else {
                simplices.push(vec![a, b, c]);
                simplices.push(vec![a, c, d]);
            }
        }
    }
    let mults = vec![opts.mult; simplices.len()];
    SimplicialCurrent::with_tolerance(2, ambient, vertices, simplices, mults, 0.0)
}

/// Flat disk of the given plane with integer multiplicity.
pub fn disk_mesh(plane: &Plane2, radius: f64, nr: usize, nt: usize, mult: i64) -> Result<SimplicialCurrent> {
    let zero = DVector::zeros(plane.ambient());
    polar_graph_mesh(
        &PolarMesh {
            plane,
            r0: 0.0,
            r1: radius,
            t0: 0.0,
            t1: 2.0 * std::f64::consts::PI,
            nr,
            nt,
            periodic: true,
            mult,
        },
        &move |_, _| zero.clone(),
    )
}

/// Flat half-disk over the sector `t ∈ [0, π]` of the plane.
pub fn half_disk_mesh(plane: &Plane2, radius: f64, nr: usize, nt: usize, mult: i64) -> Result<SimplicialCurrent> {
    let zero = DVector::zeros(plane.ambient());
    polar_graph_mesh(
        &PolarMesh {
            plane,
            r0: 0.0,
            r1: radius,
            t0: 0.0,
            t1: std::f64::consts::PI,
            nr,
            nt,
            periodic: false,
            mult,
        },
        &move |_, _| zero.clone(),
    )
}

/// Closed polygonal curve `t_j ↦ plane(cos t, sin t)·radius + offset(t_j)`
/// sampled on `n` segments, as a 1-current.
pub fn circle_curve(
    plane: &Plane2,
    radius: f64,
    n: usize,
    mult: i64,
    offset: &dyn Fn(f64) -> Point,
) -> Result<SimplicialCurrent> {
    let mut vertices = Vec::with_capacity(n);
    for j in 0..n {
        let t = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
        let mut p = plane.embed(radius * t.cos(), radius * t.sin());
        p += offset(t);
        vertices.push(p);
    }
    let simplices: Vec<Vec<usize>> = (0..n).map(|j| vec![j, (j + 1) % n]).collect();
    SimplicialCurrent::with_tolerance(1, plane.ambient(), vertices, simplices, vec![mult; n], 0.0)
}

/// Open arc `t ∈ [t0, t1]` of the plane circle with a transverse offset.
pub fn arc_curve(
    plane: &Plane2,
    radius: f64,
    t0: f64,
    t1: f64,
    n: usize,
    mult: i64,
    offset: &dyn Fn(f64) -> Point,
) -> Result<SimplicialCurrent> {
    let mut vertices = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let t = t0 + (t1 - t0) * j as f64 / n as f64;
        let mut p = plane.embed(radius * t.cos(), radius * t.sin());
        p += offset(t);
        vertices.push(p);
    }
    let simplices: Vec<Vec<usize>> = (0..n).map(|j| vec![j, j + 1]).collect();
    SimplicialCurrent::with_tolerance(1, plane.ambient(), vertices, simplices, vec![mult; n], 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::current::Region;
    use approx::assert_relative_eq;

    #[test]
    fn disk_mesh_mass_approaches_pi_r2() {
        let plane = Plane2::e12(4);
        let disk = disk_mesh(&plane, 1.0, 32, 64, 1).unwrap();
        let m = disk.mass(&Region::All);
        assert_relative_eq!(m, std::f64::consts::PI, epsilon = 6e-3);
        // boundary is the rim circle only
        let b = disk.boundary();
        assert_eq!(b.simplices().len(), 64);
    }

    #[test]
    fn half_disk_boundary_contains_diameter() {
        let plane = Plane2::e12(4);
        let hd = half_disk_mesh(&plane, 1.0, 8, 16, 1).unwrap();
        let b = hd.boundary();
        // 16 arc segments + 2*8 diameter segments
        assert_eq!(b.simplices().len(), 16 + 16);
    }
}
