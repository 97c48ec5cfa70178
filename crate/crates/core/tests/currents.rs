//! Operation-level tests for the discrete current calculus, with independent
//! oracles for every derived expectation.

use std::f64::consts::PI;

use epicone_core::current::{boundary_of_boundary_is_zero, chains_equal, Region, SimplicialCurrent};
use epicone_core::excess::{boundary_excess, cylindrical_excess};
use epicone_core::geom::{gauss_legendre_on, Plane2, Point};
use epicone_core::mesh::{arc_curve, circle_curve, disk_mesh, half_disk_mesh, polar_graph_mesh, PolarMesh};
use epicone_core::ConeSpec;
use nalgebra::DVector;

fn pt(coords: &[f64]) -> Point {
    DVector::from_column_slice(coords)
}

fn zero_offset(ambient: usize) -> impl Fn(f64) -> Point {
    move |_| DVector::zeros(ambient)
}

#[test]
fn mass_of_unit_square_is_one() {
    let v = vec![
        pt(&[0.0, 0.0, 0.0, 0.0]),
        pt(&[1.0, 0.0, 0.0, 0.0]),
        pt(&[1.0, 1.0, 0.0, 0.0]),
        pt(&[0.0, 1.0, 0.0, 0.0]),
    ];
    let t = SimplicialCurrent::new(2, 4, v, vec![vec![0, 1, 2], vec![0, 2, 3]], vec![1, 1]).unwrap();
    assert!((t.mass(&Region::All) - 1.0).abs() < 1e-15);
}

#[test]
fn mass_scales_with_multiplicity_half_disk() {
    // half disk { x1 >= 0 } of the e1e2 plane: sector from e2 through e1
    let plane = Plane2::new(pt(&[0.0, 1.0, 0.0, 0.0]), pt(&[1.0, 0.0, 0.0, 0.0]), true).unwrap();
    let hd = half_disk_mesh(&plane, 1.0, 24, 48, 3).unwrap();
    let m = hd.mass(&Region::ball(DVector::zeros(4), 1.0));
    assert!((m - 3.0 * PI / 2.0).abs() < 0.01, "m = {m}");
    // interior ball: clipping is exact up to the facet approximation
    let m_half = hd.mass(&Region::ball(DVector::zeros(4), 0.5));
    assert!((m_half - 3.0 * PI / 8.0).abs() < 0.003, "m_half = {m_half}");
}

/// Quadrature oracle for the area of the graph of the linear map
/// `l(x1, x2) = (s x2, 0)` over the unit disk: integrates the area factor
/// `sqrt(det(I + A^T A))` in polar coordinates, independently of the mesh.
fn linear_graph_area_oracle(s: f64) -> f64 {
    let factor = (1.0 + s * s).sqrt();
    let (rs, rw) = gauss_legendre_on(32, 0.0, 1.0);
    let (ts, tw) = gauss_legendre_on(32, 0.0, 2.0 * PI);
    let mut total = 0.0;
    for (r, wr) in rs.iter().zip(&rw) {
        for (_t, wt) in ts.iter().zip(&tw) {
            total += wr * wt * r * factor;
        }
    }
    total
}

fn linear_graph_mesh(s: f64, nr: usize, nt: usize) -> SimplicialCurrent {
    let plane = Plane2::e12(4);
    let offset = move |r: f64, t: f64| {
        let x2 = r * t.sin();
        DVector::from_column_slice(&[0.0, 0.0, s * x2, 0.0])
    };
    polar_graph_mesh(
        &PolarMesh {
            plane: &plane,
            r0: 0.0,
            r1: 1.0,
            t0: 0.0,
            t1: 2.0 * PI,
            nr,
            nt,
            periodic: true,
            mult: 1,
        },
        &offset,
    )
    .unwrap()
}

#[test]
fn mass_of_linear_graph_matches_area_factor_oracle() {
    let s = 0.3;
    let oracle = linear_graph_area_oracle(s);
    assert!((oracle - PI * (1.0 + s * s).sqrt()).abs() < 1e-10);
    let t = linear_graph_mesh(s, 48, 96);
    let m = t.mass(&Region::All);
    assert!((m - oracle).abs() / oracle < 2e-3, "m = {m}, oracle = {oracle}");
}

#[test]
fn boundary_of_single_triangle() {
    let v = vec![pt(&[0.0, 0.0, 0.0, 0.0]), pt(&[1.0, 0.0, 0.0, 0.0]), pt(&[0.0, 1.0, 0.0, 0.0])];
    let t = SimplicialCurrent::new(2, 4, v, vec![vec![0, 1, 2]], vec![1]).unwrap();
    let b = t.boundary();
    assert_eq!(b.dim(), 1);
    assert_eq!(b.simplices().len(), 3);
    assert!(b.multiplicities().iter().all(|&m| m.abs() == 1));
    // oriented consistently: the boundary of the boundary cancels
    let bb = b.boundary();
    assert!(bb.is_empty());
}

#[test]
fn boundary_of_closed_disk_is_rim_only() {
    let plane = Plane2::e12(4);
    let disk = disk_mesh(&plane, 1.0, 12, 40, 1).unwrap();
    let b = disk.boundary();
    assert_eq!(b.simplices().len(), 40);
    for s in b.simplices() {
        for &vi in s {
            assert!((b.vertices()[vi].norm() - 1.0).abs() < 1e-12);
        }
    }
}

/// Brute-force face-cancellation oracle: recompute the boundary chain with a
/// plain hash map, bypassing the library's chain type.
fn brute_force_boundary(t: &SimplicialCurrent) -> std::collections::HashMap<(usize, usize), i64> {
    let mut acc: std::collections::HashMap<(usize, usize), i64> = std::collections::HashMap::new();
    for (s, &m) in t.simplices().iter().zip(t.multiplicities()) {
        let faces = [([s[1], s[2]], 1i64), ([s[0], s[2]], -1), ([s[0], s[1]], 1)];
        for (f, sgn) in faces {
            let (key, flip) = if f[0] <= f[1] { ((f[0], f[1]), 1) } else { ((f[1], f[0]), -1) };
            *acc.entry(key).or_insert(0) += sgn * flip * m;
        }
    }
    acc.retain(|_, v| *v != 0);
    acc
}

#[test]
fn cone_over_cross_section_boundary_against_brute_force() {
    let spec = ConeSpec::canonical(4, 1);
    let r = spec.cross_section(32);
    let cone = SimplicialCurrent::cone_over(&r, &DVector::zeros(4));
    assert_eq!(cone.dropped, 0);
    let b = cone.current.boundary();
    let oracle = brute_force_boundary(&cone.current);
    assert_eq!(b.simplices().len(), oracle.len());
    for (s, &m) in b.simplices().iter().zip(b.multiplicities()) {
        let key = (s[0].min(s[1]), s[0].max(s[1]));
        let sign = if s[0] <= s[1] { 1 } else { -1 };
        assert_eq!(oracle.get(&key).copied(), Some(sign * m));
    }
    // the boundary consists of the cross-section plus axis segments through 0
    let mut c = b.as_chain();
    c.sub(&r.as_chain());
    // remaining entries must touch the apex vertex (last index)
    let apex = cone.current.vertices().len() - 1;
    let diff_is_axis = c.iter().all(|(k, _)| k.contains(&apex));
    assert!(diff_is_axis);
}

#[test]
fn push_forward_blowup_rescales_mass_exactly() {
    let t = linear_graph_mesh(0.2, 16, 32);
    let r = 0.37;
    let ball_r = Region::ball(DVector::zeros(4), r);
    let m_small = t.mass(&ball_r);
    let zoomed = t.push_forward(SimplicialCurrent::iota(DVector::zeros(4), r));
    assert_eq!(zoomed.dropped, 0);
    let m_unit = zoomed.current.mass(&Region::ball(DVector::zeros(4), 1.0));
    assert!((m_unit * r * r - m_small).abs() < 1e-12 * m_small.max(1.0));
}

#[test]
fn push_forward_identity_and_rotation_preserve_mass() {
    let t = linear_graph_mesh(0.15, 12, 24);
    let id = t.push_forward(|p: &Point| p.clone());
    assert!((id.current.mass(&Region::All) - t.mass(&Region::All)).abs() < 1e-14);

    let c = (PI / 4.0).cos();
    let s = (PI / 4.0).sin();
    let rot = t.push_forward(move |p: &Point| {
        pt(&[c * p[0] - s * p[1], s * p[0] + c * p[1], p[2], p[3]])
    });
    assert!((rot.current.mass(&Region::All) - t.mass(&Region::All)).abs() < 1e-12);
}

#[test]
fn cone_over_polygon_matches_exact_polygon_area() {
    let plane = Plane2::e12(4);
    let q = 3;
    for k in [24usize, 96, 384] {
        let z = circle_curve(&plane, 1.0, k, q, &zero_offset(4)).unwrap();
        let cone = SimplicialCurrent::cone_over(&z, &DVector::zeros(4));
        assert_eq!(cone.dropped, 0);
        let m = cone.current.mass(&Region::All);
        let exact = q as f64 * (k as f64 / 2.0) * (2.0 * PI / k as f64).sin();
        assert!((m - exact).abs() < 1e-12, "k = {k}");
    }
    // and the k-gon areas approach q*pi
    let z = circle_curve(&plane, 1.0, 4096, q, &zero_offset(4)).unwrap();
    let m = SimplicialCurrent::cone_over(&z, &DVector::zeros(4)).current.mass(&Region::All);
    assert!((m - q as f64 * PI).abs() < 1e-5);
}

#[test]
fn cone_over_half_circle_tends_to_half_disk() {
    let plane = Plane2::e12(4);
    let n = 512;
    let z = arc_curve(&plane, 1.0, 0.0, PI, n, 1, &zero_offset(4)).unwrap();
    let m = SimplicialCurrent::cone_over(&z, &DVector::zeros(4)).current.mass(&Region::All);
    let exact = (n as f64 / 2.0) * (PI / n as f64).sin();
    assert!((m - exact).abs() < 1e-12);
    assert!((m - PI / 2.0).abs() < 1e-4);
}

#[test]
fn cone_over_drops_collinear_segment_with_warning() {
    let v = vec![
        pt(&[1.0, 0.0, 0.0, 0.0]),
        pt(&[3.0, 0.0, 0.0, 0.0]),
        pt(&[3.0, 1.0, 0.0, 0.0]),
        pt(&[1.0, 1.0, 0.0, 0.0]),
    ];
    let z = SimplicialCurrent::new(1, 4, v, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]], vec![1; 4]).unwrap();
    let apex = pt(&[2.0, 0.0, 0.0, 0.0]); // on the support line of the first segment
    let cone = SimplicialCurrent::cone_over(&z, &apex);
    assert_eq!(cone.dropped, 1);
    assert_eq!(cone.current.simplices().len(), 3);
}

#[test]
fn slice_of_flat_disk_is_scaled_circle() {
    let plane = Plane2::e12(4);
    let disk = disk_mesh(&plane, 1.0, 64, 128, 1).unwrap();
    let split = disk.split_by_ball(&DVector::zeros(4), 0.5);
    let slice = &split.slice;
    assert_eq!(slice.dim(), 1);
    let m = slice.mass(&Region::All);
    assert!((m - PI).abs() < 2e-3, "slice mass {m}");
    for s in slice.simplices() {
        for &vi in s {
            assert!((slice.vertices()[vi].norm() - 0.5).abs() < 2e-4);
        }
    }
}

#[test]
fn cone_slice_mass_is_homogeneous_in_radius() {
    let plane = Plane2::e12(4);
    let z = circle_curve(&plane, 1.0, 64, 2, &zero_offset(4)).unwrap();
    let cone = SimplicialCurrent::cone_over(&z, &DVector::zeros(4)).current;
    let m1 = cone.split_by_ball(&DVector::zeros(4), 0.9).slice.mass(&Region::All);
    let m2 = cone.split_by_ball(&DVector::zeros(4), 0.45).slice.mass(&Region::All);
    assert!((m2 - 0.5 * m1).abs() < 1e-12 * m1);
}

#[test]
fn slice_bookkeeping_chain_identity_for_half_plane() {
    let spec = ConeSpec::canonical(4, 0);
    let t = spec.sample_mesh(2.0, 20, 40);
    let gamma = t.boundary();
    let split = t.split_by_ball(&DVector::zeros(4), 1.0);
    // slice + (∂T ⌐ B1) = ∂(T ⌐ B1) with all integer multiplicities matching
    let lhs = split.slice.concat(&gamma.split_by_ball(&DVector::zeros(4), split.used_level).inside);
    let rhs = split.inside.boundary();
    assert!(chains_equal(&lhs, &rhs, 1e-9));
    // and the slice itself is close to the expected half circle
    let m = split.slice.mass(&Region::All);
    assert!((m - PI).abs() < 0.01, "slice mass {m}");
}

#[test]
fn boundary_of_boundary_vanishes_for_meshes() {
    let spec = ConeSpec::canonical(4, 2);
    let t = spec.sample_mesh(1.0, 8, 16);
    assert!(boundary_of_boundary_is_zero(&t));
    assert!(t.boundary().boundary().is_empty());
}

#[test]
fn cylindrical_excess_examples() {
    let plane = Plane2::e12(4);
    // parallel graph: zero excess
    let flat = linear_graph_mesh(0.0, 16, 32);
    assert_eq!(cylindrical_excess(&flat, &plane), 0.0);

    // rank-one linear graph of slope s: E = pi (sqrt(1+s^2) - 1)
    let s = 0.1;
    let t = linear_graph_mesh(s, 64, 128);
    let e = cylindrical_excess(&t, &plane);
    let closed_form = PI * ((1.0 + s * s).sqrt() - 1.0);
    // independent identity: E = mass - mass of the plane projection
    let proj = t.push_forward(|p: &Point| pt(&[p[0], p[1], 0.0, 0.0]));
    let identity = t.mass(&Region::All) - proj.current.mass(&Region::All);
    assert!((e - closed_form).abs() < 2e-4, "e = {e} vs {closed_form}");
    assert!((e - identity).abs() < 1e-10, "graph excess must match the projection identity");

    // reversed orientation: excess = 2 * mass
    let rev = flat.negated();
    let e_rev = cylindrical_excess(&rev, &plane);
    assert!((e_rev - 2.0 * rev.mass(&Region::All)).abs() < 1e-12);
}

#[test]
fn boundary_excess_of_flat_half_circle_is_zero_at_e12() {
    let spec = ConeSpec::canonical(4, 0);
    let z = spec.cross_section(64);
    let be = boundary_excess(&z).unwrap();
    assert!(be.value.abs() < 1e-10, "value {}", be.value);
    assert!(be.angle_from_canonical < 1e-4, "angle {}", be.angle_from_canonical);
}

#[test]
fn boundary_excess_recovers_tilted_plane() {
    let beta: f64 = 0.3;
    // half circle in the plane spanned by e1 and w = cos(b) e2 + sin(b) e3
    let w = pt(&[0.0, beta.cos(), beta.sin(), 0.0]);
    let hp = Plane2::new(pt(&[-1.0, 0.0, 0.0, 0.0]), w.clone(), true).unwrap();
    let z = arc_curve(&hp, 1.0, 0.0, PI, 96, 1, &zero_offset(4)).unwrap();
    let be = boundary_excess(&z).unwrap();
    assert!(be.value.abs() < 1e-9, "planar cone must have zero boundary excess");
    let (_, b2) = be.plane.basis();
    assert!((b2.dot(&w).abs() - 1.0).abs() < 1e-5, "minimizing plane contains the curve");
}

#[test]
fn boundary_excess_of_wiggled_half_circle_matches_dirichlet_oracle() {
    let eps = 0.05;
    // sphere curve: normalize the cylinder graph (e^{it}, eps sin 2t)
    let n = 256;
    let mut vertices = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let t = PI * j as f64 / n as f64;
        let y = if j == 0 || j == n { 0.0 } else { eps * (2.0 * t).sin() };
        let p = pt(&[-t.cos(), t.sin(), y, 0.0]);
        vertices.push(&p / p.norm());
    }
    let simplices: Vec<Vec<usize>> = (0..n).map(|j| vec![j, j + 1]).collect();
    let z = SimplicialCurrent::new(1, 4, vertices, simplices, vec![1; n]).unwrap();
    let be = boundary_excess(&z).unwrap();
    // oracle: (1/2) * int |Df|^2 r dr dt for the single mode k=2 over the
    // half-circle sector, i.e. (1/2) * eps^2 * pi * (1 + 4)/4
    let oracle = 0.5 * eps * eps * PI * 5.0 / 4.0;
    assert!(
        (be.value - oracle).abs() / oracle < 0.05,
        "E = {}, oracle = {}",
        be.value,
        oracle
    );
}

#[test]
fn boundary_excess_rejects_wrong_boundary() {
    let plane = Plane2::e12(4);
    let z = circle_curve(&plane, 1.0, 32, 1, &zero_offset(4)).unwrap();
    assert!(boundary_excess(&z).is_err());
}
