//! Discretized integral currents: oriented weighted simplices of dimension
//! 0, 1 and 2 in `R^ambient`, with the calculus used throughout the crate:
//! mass with exact region clipping, boundary with integer cancellation,
//! push-forward, cones, and radial splitting/slicing.

use std::collections::BTreeMap;

use crate::chain::{canonical, ChainMap, VertexPool};
use crate::error::{Error, Result};
use crate::geom::{seg_length, tri_area, unit_tangent2, Plane2, Point};

/// Default facet count for the polygonal sphere approximation used by ball
/// clipping in [`SimplicialCurrent::mass`].
pub const DEFAULT_BALL_FACETS: usize = 512;

/// Default lower bound on simplex k-volume at construction.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-14;

/// Region argument for mass computations.
#[derive(Debug, Clone)]
pub enum Region {
    All,
    Ball { center: Point, radius: f64 },
}

impl Region {
    pub fn ball(center: Point, radius: f64) -> Self {
        Region::Ball { center, radius }
    }
}

/// An integer-multiplicity simplicial current.
#[derive(Debug, Clone)]
pub struct SimplicialCurrent {
    dim: usize,
    ambient: usize,
    vertices: Vec<Point>,
    simplices: Vec<Vec<usize>>,
    multiplicities: Vec<i64>,
}

/// Result of a push-forward; degenerate images are dropped and counted.
#[derive(Debug, Clone)]
pub struct MappedCurrent {
    pub current: SimplicialCurrent,
    pub dropped: usize,
}

/// Result of splitting a current at a radial (or cylindrical) level.
#[derive(Debug, Clone)]
pub struct LevelSplit {
    pub inside: SimplicialCurrent,
    pub outside: SimplicialCurrent,
    /// Oriented cut chain: for a 2-current the dim-1 slice, for a 1-current
    /// the dim-0 slice. Satisfies `∂(T ⌐ inside) = slice + (∂T) ⌐ inside`.
    pub slice: SimplicialCurrent,
    pub used_level: f64,
    pub perturbed: bool,
}

impl SimplicialCurrent {
    pub fn new(
        dim: usize,
        ambient: usize,
        vertices: Vec<Point>,
        simplices: Vec<Vec<usize>>,
        multiplicities: Vec<i64>,
    ) -> Result<Self> {
        Self::with_tolerance(dim, ambient, vertices, simplices, multiplicities, DEFAULT_DEGENERACY_TOL)
    }

    pub fn with_tolerance(
        dim: usize,
        ambient: usize,
        vertices: Vec<Point>,
        simplices: Vec<Vec<usize>>,
        multiplicities: Vec<i64>,
        degeneracy_tol: f64,
    ) -> Result<Self> {
        if dim > 2 {
            return Err(Error::InvalidCurrent(format!("dim {dim} not in 0..=2")));
        }
        if ambient < 3 {
            return Err(Error::InvalidCurrent(format!("ambient {ambient} < 3")));
        }
        if simplices.len() != multiplicities.len() {
            return Err(Error::InvalidCurrent("simplex/multiplicity count mismatch".into()));
        }
        for v in &vertices {
            if v.len() != ambient {
                return Err(Error::InvalidCurrent("vertex dimension mismatch".into()));
            }
        }
        let t = SimplicialCurrent { dim, ambient, vertices, simplices, multiplicities };
        for (i, s) in t.simplices.iter().enumerate() {
            if s.len() != dim + 1 {
                return Err(Error::InvalidCurrent(format!("simplex {i} has arity {}", s.len())));
            }
            for &v in s {
                if v >= t.vertices.len() {
                    return Err(Error::InvalidCurrent(format!("simplex {i} references vertex {v}")));
                }
            }
            if t.multiplicities[i] == 0 {
                return Err(Error::InvalidCurrent(format!("simplex {i} has zero multiplicity")));
            }
            let vol = t.volume(i);
            if vol <= degeneracy_tol {
                return Err(Error::DegenerateSimplex {
                    index: i,
                    kind: dim,
                    volume: vol,
                    tolerance: degeneracy_tol,
                });
            }
        }
        Ok(t)
    }

    /// Empty current of the given dimension.
    pub fn empty(dim: usize, ambient: usize) -> Self {
        SimplicialCurrent { dim, ambient, vertices: Vec::new(), simplices: Vec::new(), multiplicities: Vec::new() }
    }

    /// Assemble from an integer chain over an existing vertex list. Simplices
    /// that cancelled to zero multiplicity are already absent from the chain.
    pub fn from_chain(dim: usize, ambient: usize, vertices: Vec<Point>, chain: ChainMap) -> Self {
        let mut simplices = Vec::new();
        let mut multiplicities = Vec::new();
        for (key, mult) in chain.into_entries() {
            simplices.push(key);
            multiplicities.push(mult);
        }
        SimplicialCurrent { dim, ambient, vertices, simplices, multiplicities }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn multiplicities(&self) -> &[i64] {
        &self.multiplicities
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplex_points(&self, i: usize) -> Vec<&Point> {
        self.simplices[i].iter().map(|&v| &self.vertices[v]).collect()
    }

    /// k-volume of simplex `i` (1 for points, length for segments, area for triangles).
    pub fn volume(&self, i: usize) -> f64 {
        let p = self.simplex_points(i);
        match self.dim {
            0 => 1.0,
            1 => seg_length(p[0], p[1]),
            _ => tri_area(p[0], p[1], p[2]),
        }
    }

    /// Oriented unit tangent 2-vector of triangle `i`, including the sign of
    /// its multiplicity. `None` if numerically degenerate.
    pub fn oriented_tangent2(&self, i: usize) -> Option<nalgebra::DVector<f64>> {
        let p = self.simplex_points(i);
        let t = unit_tangent2(p[0], p[1], p[2])?;
        Some(t * self.multiplicities[i].signum() as f64)
    }

    pub fn centroid_of(&self, i: usize) -> Point {
        let p = self.simplex_points(i);
        let mut c = p[0].clone();
        for q in &p[1..] {
            c += *q;
        }
        c / p.len() as f64
    }

    /// Mass over a region. `Region::All` sums `|mult| * volume`. Ball regions
    /// use exact clipping: quadratic segment clipping in dimension 1 and
    /// Sutherland–Hodgman clipping against an inscribed `facets`-gon of the
    /// cross-section disk in dimension 2 (see [`ball_clip_relative_error`]).
    pub fn mass(&self, region: &Region) -> f64 {
        self.mass_with_facets(region, DEFAULT_BALL_FACETS)
    }

    pub fn mass_with_facets(&self, region: &Region, facets: usize) -> f64 {
        match region {
            Region::All => (0..self.simplices.len())
                .map(|i| self.multiplicities[i].unsigned_abs() as f64 * self.volume(i))
                .sum(),
            Region::Ball { center, radius } => match self.dim {
                0 => self
                    .simplices
                    .iter()
                    .zip(&self.multiplicities)
                    .filter(|(s, _)| (&self.vertices[s[0]] - center).norm() <= *radius)
                    .map(|(_, m)| m.unsigned_abs() as f64)
                    .sum(),
                1 => (0..self.simplices.len())
                    .map(|i| {
                        let p = self.simplex_points(i);
                        self.multiplicities[i].unsigned_abs() as f64
                            * segment_ball_length(p[0], p[1], center, *radius)
                    })
                    .sum(),
                _ => (0..self.simplices.len())
                    .map(|i| {
                        let p = self.simplex_points(i);
                        self.multiplicities[i].unsigned_abs() as f64
                            * triangle_ball_area(p[0], p[1], p[2], center, *radius, facets)
                    })
                    .sum(),
            },
        }
    }

    /// Signed face sum with integer cancellation. Requires `dim >= 1`.
    pub fn boundary(&self) -> SimplicialCurrent {
        assert!(self.dim >= 1, "boundary of a 0-current");
        let mut chain = ChainMap::new();
        for (s, &m) in self.simplices.iter().zip(&self.multiplicities) {
            chain.add_boundary_of(s, m);
        }
        SimplicialCurrent::from_chain(self.dim - 1, self.ambient, self.vertices.clone(), chain)
    }

    /// Integer chain of this current over its own vertex list.
    pub fn as_chain(&self) -> ChainMap {
        let mut chain = ChainMap::new();
        for (s, &m) in self.simplices.iter().zip(&self.multiplicities) {
            chain.add(s, m);
        }
        chain
    }

    /// Vertex-wise push-forward. Simplices whose image is degenerate are
    /// dropped and counted. For affine maps mass transforms by the exact
    /// Jacobian factor since simplices stay flat.
    pub fn push_forward<F: Fn(&Point) -> Point>(&self, map: F) -> MappedCurrent {
        let vertices: Vec<Point> = self.vertices.iter().map(|v| map(v)).collect();
        let mut simplices = Vec::new();
        let mut multiplicities = Vec::new();
        let mut dropped = 0;
        for (s, &m) in self.simplices.iter().zip(&self.multiplicities) {
            let vol = match self.dim {
                0 => 1.0,
                1 => seg_length(&vertices[s[0]], &vertices[s[1]]),
                _ => tri_area(&vertices[s[0]], &vertices[s[1]], &vertices[s[2]]),
            };
            if vol <= DEFAULT_DEGENERACY_TOL {
                dropped += 1;
                continue;
            }
            simplices.push(s.clone());
            multiplicities.push(m);
        }
        MappedCurrent {
            current: SimplicialCurrent {
                dim: self.dim,
                ambient: vertices.first().map_or(self.ambient, |v| v.len()),
                vertices,
                simplices,
                multiplicities,
            },
            dropped,
        }
    }

    /// The blow-up map `z ↦ (z - x)/r` as a closure for [`Self::push_forward`].
    pub fn iota(x: Point, r: f64) -> impl Fn(&Point) -> Point {
        move |z: &Point| (z - &x) / r
    }

    /// Cone with the given apex over a 1-current: each segment `[a, b]` with
    /// multiplicity m becomes the triangle `[apex, a, b]` with multiplicity m.
    /// Segments collinear with the apex are dropped and counted.
    pub fn cone_over(z: &SimplicialCurrent, apex: &Point) -> MappedCurrent {
        assert_eq!(z.dim, 1, "cone_over expects a 1-current");
        let mut vertices = z.vertices.clone();
        let apex_idx = vertices.len();
        vertices.push(apex.clone());
        let mut simplices = Vec::new();
        let mut multiplicities = Vec::new();
        let mut dropped = 0;
        for (s, &m) in z.simplices.iter().zip(&z.multiplicities) {
            let area = tri_area(apex, &vertices[s[0]], &vertices[s[1]]);
            if area <= DEFAULT_DEGENERACY_TOL {
                dropped += 1;
                continue;
            }
            simplices.push(vec![apex_idx, s[0], s[1]]);
            multiplicities.push(m);
        }
        MappedCurrent {
            current: SimplicialCurrent { dim: 2, ambient: z.ambient, vertices, simplices, multiplicities },
            dropped,
        }
    }

    /// Split at the sphere `|z - center| = radius` using linear interpolation
    /// of vertex distances on each simplex (the marching rule). The cut is
    /// chain-exact: `∂ inside = slice + (∂T) ⌐ inside` with integer
    /// cancellation. The level is perturbed deterministically away from vertex
    /// distances (`r ← r(1 + 1e-9)`) and the perturbation is reported.
    pub fn split_by_ball(&self, center: &Point, radius: f64) -> LevelSplit {
        let values: Vec<f64> = self.vertices.iter().map(|v| (v - center).norm()).collect();
        self.split_by_level(&values, radius)
    }

    /// Split at the cylinder `|p_plane(z)| = radius` (axis through the origin).
    pub fn split_by_cylinder(&self, plane: &Plane2, radius: f64) -> LevelSplit {
        let values: Vec<f64> = self.vertices.iter().map(|v| plane.cylinder_radius(v)).collect();
        self.split_by_level(&values, radius)
    }

    /// Marching split at `value = level` for a scalar sampled on vertices.
    pub fn split_by_level(&self, values: &[f64], level: f64) -> LevelSplit {
        assert!(self.dim >= 1, "split of a 0-current");
        assert_eq!(values.len(), self.vertices.len());
        let scale = level.abs().max(1.0);
        let window = 1e-10 * scale;
        let mut used = level;
        let mut perturbed = false;
        for _ in 0..12 {
            if values.iter().any(|&d| (d - used).abs() < window) {
                used *= 1.0 + 1e-9;
                perturbed = true;
            } else {
                break;
            }
        }

        let mut vertices = self.vertices.clone();
        let mut cut_cache: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut cut = |i: usize, j: usize, vertices: &mut Vec<Point>| -> usize {
            let (lo, hi) = if i < j { (i, j) } else { (j, i) };
            if let Some(&idx) = cut_cache.get(&(lo, hi)) {
                return idx;
            }
            let t = (used - values[lo]) / (values[hi] - values[lo]);
            let p = &self.vertices[lo] + (&self.vertices[hi] - &self.vertices[lo]) * t;
            let idx = vertices.len();
            vertices.push(p);
            cut_cache.insert((lo, hi), idx);
            idx
        };

        let mut inside: Vec<(Vec<usize>, i64)> = Vec::new();
        let mut outside: Vec<(Vec<usize>, i64)> = Vec::new();
        let mut slice = ChainMap::new();

        for (s, &m) in self.simplices.iter().zip(&self.multiplicities) {
            let is_in: Vec<bool> = s.iter().map(|&v| values[v] < used).collect();
            let n_in = is_in.iter().filter(|&&b| b).count();
            if self.dim == 1 {
                match (is_in[0], is_in[1]) {
                    (true, true) => inside.push((s.clone(), m)),
                    (false, false) => outside.push((s.clone(), m)),
                    (true, false) => {
                        let p = cut(s[0], s[1], &mut vertices);
                        inside.push((vec![s[0], p], m));
                        outside.push((vec![p, s[1]], m));
                        slice.add(&[p], m);
                    }
                    (false, true) => {
                        let p = cut(s[0], s[1], &mut vertices);
                        outside.push((vec![s[0], p], m));
                        inside.push((vec![p, s[1]], m));
                        slice.add(&[p], -m);
                    }
                }
                continue;
            }
            match n_in {
                3 => inside.push((s.clone(), m)),
                0 => outside.push((s.clone(), m)),
                1 => {
                    // rotate so the lone inside vertex is first
                    let p = is_in.iter().position(|&b| b).unwrap();
                    let (a, b, c) = (s[p], s[(p + 1) % 3], s[(p + 2) % 3]);
                    let pab = cut(a, b, &mut vertices);
                    let pac = cut(a, c, &mut vertices);
                    inside.push((vec![a, pab, pac], m));
                    outside.push((vec![pab, b, c], m));
                    outside.push((vec![pab, c, pac], m));
                    slice.add(&[pab, pac], m);
                }
                _ => {
                    // rotate so the lone outside vertex is last
                    let p = is_in.iter().position(|&b| !b).unwrap();
                    let (a, b, c) = (s[(p + 1) % 3], s[(p + 2) % 3], s[p]);
                    let pbc = cut(b, c, &mut vertices);
                    let pac = cut(a, c, &mut vertices);
                    inside.push((vec![a, b, pbc], m));
                    inside.push((vec![a, pbc, pac], m));
                    outside.push((vec![pac, pbc, c], m));
                    slice.add(&[pbc, pac], m);
                }
            }
        }

        let build = |items: Vec<(Vec<usize>, i64)>, vertices: &Vec<Point>| {
            let (simplices, multiplicities): (Vec<_>, Vec<_>) = items.into_iter().unzip();
            SimplicialCurrent {
                dim: self.dim,
                ambient: self.ambient,
                vertices: vertices.clone(),
                simplices,
                multiplicities,
            }
        };
        let inside = build(inside, &vertices);
        let outside = build(outside, &vertices);
        let slice = SimplicialCurrent::from_chain(self.dim - 1, self.ambient, vertices, slice);
        LevelSplit { inside, outside, slice, used_level: used, perturbed }
    }

    /// `T ⌐ B_r(x)` via the marching split.
    pub fn restrict_to_ball(&self, center: &Point, radius: f64) -> SimplicialCurrent {
        self.split_by_ball(center, radius).inside
    }

    /// `T ⌐ (B_b(x) \ B_a(x))` with the half-open convention `a < |z - x| <= b`.
    pub fn restrict_to_annulus(&self, center: &Point, a: f64, b: f64) -> SimplicialCurrent {
        self.split_by_ball(center, b).inside.split_by_ball(center, a).outside
    }

    /// Concatenate two currents of equal dimension into one (no cancellation).
    pub fn concat(&self, other: &SimplicialCurrent) -> SimplicialCurrent {
        assert_eq!(self.dim, other.dim);
        assert_eq!(self.ambient, other.ambient);
        let offset = self.vertices.len();
        let mut vertices = self.vertices.clone();
        vertices.extend(other.vertices.iter().cloned());
        let mut simplices = self.simplices.clone();
        simplices.extend(other.simplices.iter().map(|s| s.iter().map(|&v| v + offset).collect::<Vec<_>>()));
        let mut multiplicities = self.multiplicities.clone();
        multiplicities.extend(other.multiplicities.iter().copied());
        SimplicialCurrent { dim: self.dim, ambient: self.ambient, vertices, simplices, multiplicities }
    }

    /// Negate all multiplicities.
    pub fn negated(&self) -> SimplicialCurrent {
        let mut out = self.clone();
        for m in &mut out.multiplicities {
            *m = -*m;
        }
        out
    }

    /// Scale all multiplicities by a nonzero integer.
    pub fn scaled(&self, k: i64) -> SimplicialCurrent {
        assert!(k != 0);
        let mut out = self.clone();
        for m in &mut out.multiplicities {
            *m *= k;
        }
        out
    }

    /// Weld coincident vertices (within `tol`), merge duplicate simplices and
    /// drop those that collapse. Intended for file input and complex building.
    pub fn weld(&self, tol: f64) -> SimplicialCurrent {
        let mut pool = VertexPool::new(tol);
        let remap: Vec<usize> = self.vertices.iter().map(|v| pool.insert(v)).collect();
        let mut chain = ChainMap::new();
        for (s, &m) in self.simplices.iter().zip(&self.multiplicities) {
            let mapped: Vec<usize> = s.iter().map(|&v| remap[v]).collect();
            chain.add(&mapped, m);
        }
        SimplicialCurrent::from_chain(self.dim, self.ambient, pool.into_points(), chain)
    }

    /// Connected components by shared vertex indices.
    pub fn components(&self) -> Vec<SimplicialCurrent> {
        let n = self.vertices.len();
        let mut dsu: Vec<usize> = (0..n).collect();
        fn find(dsu: &mut Vec<usize>, i: usize) -> usize {
            let mut i = i;
            while dsu[i] != i {
                dsu[i] = dsu[dsu[i]];
                i = dsu[i];
            }
            i
        }
        for s in &self.simplices {
            let r = find(&mut dsu, s[0]);
            for &v in &s[1..] {
                let rv = find(&mut dsu, v);
                dsu[rv] = r;
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, _) in self.simplices.iter().enumerate() {
            let r = find(&mut dsu, self.simplices[i][0]);
            groups.entry(r).or_default().push(i);
        }
        groups
            .into_values()
            .map(|idxs| {
                let simplices: Vec<Vec<usize>> = idxs.iter().map(|&i| self.simplices[i].clone()).collect();
                let multiplicities: Vec<i64> = idxs.iter().map(|&i| self.multiplicities[i]).collect();
                SimplicialCurrent {
                    dim: self.dim,
                    ambient: self.ambient,
                    vertices: self.vertices.clone(),
                    simplices,
                    multiplicities,
                }
            })
            .collect()
    }

    /// Walk a connected 1-current into an ordered polyline. Requires every
    /// interior vertex to have degree 2 and a uniform multiplicity magnitude.
    /// Returns the ordered points (following orientation), whether the line is
    /// closed, and the common signed multiplicity.
    pub fn as_polyline(&self) -> Result<(Vec<Point>, bool, i64)> {
        assert_eq!(self.dim, 1);
        if self.is_empty() {
            return Err(Error::Empty("polyline of empty current".into()));
        }
        let mult = self.multiplicities[0];
        if self.multiplicities.iter().any(|&m| m != mult) {
            return Err(Error::Precondition("polyline requires uniform multiplicity".into()));
        }
        // outgoing map v -> (segment, head)
        let mut out_edge: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        let mut in_deg: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, s) in self.simplices.iter().enumerate() {
            let (tail, head) = if mult > 0 { (s[0], s[1]) } else { (s[1], s[0]) };
            out_edge.entry(tail).or_default().push((i, head));
            *in_deg.entry(head).or_insert(0) += 1;
        }
        for (v, es) in &out_edge {
            if es.len() > 1 {
                return Err(Error::Precondition(format!("vertex {v} has out-degree {}", es.len())));
            }
        }
        // start at a vertex with no incoming edge if open, else anywhere
        let start = out_edge
            .keys()
            .find(|v| in_deg.get(v).copied().unwrap_or(0) == 0)
            .copied()
            .unwrap_or_else(|| *out_edge.keys().next().unwrap());
        let mut order = vec![start];
        let mut cur = start;
        let mut used = 0;
        while let Some(&(_, head)) = out_edge.get(&cur).and_then(|es| es.first()) {
            used += 1;
            order.push(head);
            cur = head;
            if cur == start || used == self.simplices.len() {
                break;
            }
        }
        if used != self.simplices.len() {
            return Err(Error::Precondition("1-current is not a single walkable polyline".into()));
        }
        let closed = cur == start;
        if closed {
            order.pop();
        }
        let pts = order.iter().map(|&v| self.vertices[v].clone()).collect();
        Ok((pts, closed, mult))
    }
}

/// Relative area error bound of the inscribed `facets`-gon disk approximation
/// used by ball clipping.
pub fn ball_clip_relative_error(facets: usize) -> f64 {
    let k = facets as f64;
    let th = 2.0 * std::f64::consts::PI / k;
    1.0 - (k / (2.0 * std::f64::consts::PI)) * th.sin() / 1.0
}

/// Exact length of `[a, b] ∩ B_r(c)`.
fn segment_ball_length(a: &Point, b: &Point, c: &Point, r: f64) -> f64 {
    let u = b - a;
    let w = a - c;
    let aa = u.dot(&u);
    if aa == 0.0 {
        return 0.0;
    }
    let bb = 2.0 * u.dot(&w);
    let cc = w.dot(&w) - r * r;
    let disc = bb * bb - 4.0 * aa * cc;
    if disc <= 0.0 {
        return 0.0;
    }
    let sq = disc.sqrt();
    let t0 = ((-bb - sq) / (2.0 * aa)).max(0.0);
    let t1 = ((-bb + sq) / (2.0 * aa)).min(1.0);
    if t1 <= t0 {
        return 0.0;
    }
    (t1 - t0) * aa.sqrt()
}

/// Area of triangle ∩ ball via Sutherland–Hodgman clipping of the triangle
/// against the inscribed `facets`-gon of the cross-section disk.
fn triangle_ball_area(a: &Point, b: &Point, c: &Point, center: &Point, r: f64, facets: usize) -> f64 {
    let u = b - a;
    let nu = u.norm();
    if nu == 0.0 {
        return 0.0;
    }
    let e = &u / nu;
    let v = c - a;
    let vf = &v - &e * e.dot(&v);
    let nvf = vf.norm();
    if nvf == 0.0 {
        return 0.0;
    }
    let f = &vf / nvf;

    // in-plane coordinates relative to a
    let pa = [0.0, 0.0];
    let pb = [nu, 0.0];
    let pc = [e.dot(&v), nvf];
    let w = center - a;
    let ox = e.dot(&w);
    let oy = f.dot(&w);
    let h2 = (w.dot(&w) - ox * ox - oy * oy).max(0.0);
    let rr = r * r - h2;
    if rr <= 0.0 {
        return 0.0;
    }
    let rho = rr.sqrt();

    // quick accept: all triangle vertices inside the inscribed circle of the polygon
    let incircle = rho * (std::f64::consts::PI / facets as f64).cos();
    let inside2 = |p: &[f64; 2]| (p[0] - ox).powi(2) + (p[1] - oy).powi(2);
    if inside2(&pa) <= incircle * incircle && inside2(&pb) <= incircle * incircle && inside2(&pc) <= incircle * incircle
    {
        return tri_area(a, b, c);
    }
    // quick reject: disk does not reach the triangle
    if point_triangle_distance2(&[ox, oy], &pa, &pb, &pc) >= rr {
        return 0.0;
    }

    // triangle as CCW polygon
    let cross = (pb[0] - pa[0]) * (pc[1] - pa[1]) - (pb[1] - pa[1]) * (pc[0] - pa[0]);
    let mut subject: Vec<[f64; 2]> = if cross >= 0.0 {
        vec![pa, pb, pc]
    } else {
        vec![pa, pc, pb]
    };

    // clip against each polygon edge half-plane
    let k = facets;
    let mut prev = [ox + rho, oy];
    for j in 1..=k {
        let phi = 2.0 * std::f64::consts::PI * j as f64 / k as f64;
        let next = [ox + rho * phi.cos(), oy + rho * phi.sin()];
        subject = clip_halfplane(&subject, &prev, &next);
        if subject.is_empty() {
            return 0.0;
        }
        prev = next;
    }
    shoelace(&subject).abs()
}

/// 2d squared distance from a point to a (filled) triangle.
fn point_triangle_distance2(p: &[f64; 2], a: &[f64; 2], b: &[f64; 2], c: &[f64; 2]) -> f64 {
    let sign = |p1: &[f64; 2], p2: &[f64; 2], p3: &[f64; 2]| {
        (p1[0] - p3[0]) * (p2[1] - p3[1]) - (p2[0] - p3[0]) * (p1[1] - p3[1])
    };
    let d1 = sign(p, a, b);
    let d2 = sign(p, b, c);
    let d3 = sign(p, c, a);
    let has_neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
    let has_pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
    if !(has_neg && has_pos) {
        return 0.0;
    }
    let seg = |a: &[f64; 2], b: &[f64; 2]| {
        let ux = b[0] - a[0];
        let uy = b[1] - a[1];
        let t = (((p[0] - a[0]) * ux + (p[1] - a[1]) * uy) / (ux * ux + uy * uy)).clamp(0.0, 1.0);
        (p[0] - a[0] - t * ux).powi(2) + (p[1] - a[1] - t * uy).powi(2)
    };
    seg(a, b).min(seg(b, c)).min(seg(c, a))
}

/// Keep the part of `poly` on the left of the directed line `p1 -> p2`.
fn clip_halfplane(poly: &[[f64; 2]], p1: &[f64; 2], p2: &[f64; 2]) -> Vec<[f64; 2]> {
    let inside = |q: &[f64; 2]| (p2[0] - p1[0]) * (q[1] - p1[1]) - (p2[1] - p1[1]) * (q[0] - p1[0]) >= 0.0;
    let mut out = Vec::with_capacity(poly.len() + 2);
    for i in 0..poly.len() {
        let cur = poly[i];
        let nxt = poly[(i + 1) % poly.len()];
        let ci = inside(&cur);
        let ni = inside(&nxt);
        if ci {
            out.push(cur);
        }
        if ci != ni {
            // intersection of segment cur->nxt with the line
            let dx = p2[0] - p1[0];
            let dy = p2[1] - p1[1];
            let denom = dy * (nxt[0] - cur[0]) - dx * (nxt[1] - cur[1]);
            if denom.abs() > 0.0 {
                let t = (dy * (p1[0] - cur[0]) - dx * (p1[1] - cur[1])) / -denom;
                let t = t.clamp(0.0, 1.0);
                out.push([cur[0] + t * (nxt[0] - cur[0]), cur[1] + t * (nxt[1] - cur[1])]);
            }
        }
    }
    out
}

fn shoelace(poly: &[[f64; 2]]) -> f64 {
    let mut s = 0.0;
    for i in 0..poly.len() {
        let p = poly[i];
        let q = poly[(i + 1) % poly.len()];
        s += p[0] * q[1] - p[1] * q[0];
    }
    0.5 * s
}

/// Verify the chain identity `∂∂T = 0` (always true in integer arithmetic;
/// exposed for tests and file input validation).
pub fn boundary_of_boundary_is_zero(t: &SimplicialCurrent) -> bool {
    if t.dim() < 2 {
        return true;
    }
    let mut chain = ChainMap::new();
    for (s, &m) in t.simplices.iter().zip(&t.multiplicities) {
        let mut faces = ChainMap::new();
        faces.add_boundary_of(s, m);
        for (k, mm) in faces.iter() {
            chain.add_boundary_of(k, *mm);
        }
    }
    chain.is_zero()
}

/// Chain equality of two currents over welded vertices: `a - b = 0` exactly.
pub fn chains_equal(a: &SimplicialCurrent, b: &SimplicialCurrent, weld_tol: f64) -> bool {
    if a.dim() != b.dim() || a.ambient() != b.ambient() {
        return false;
    }
    let mut pool = VertexPool::new(weld_tol);
    let mut chain = ChainMap::new();
    for (s, &m) in a.simplices.iter().zip(&a.multiplicities) {
        let mapped: Vec<usize> = s.iter().map(|&v| pool.insert(&a.vertices[v])).collect();
        chain.add(&mapped, m);
    }
    for (s, &m) in b.simplices.iter().zip(&b.multiplicities) {
        let mapped: Vec<usize> = s.iter().map(|&v| pool.insert(&b.vertices[v])).collect();
        chain.add(&mapped, -m);
    }
    chain.is_zero()
}

/// Canonical simplex-set view used by tests: sorted (key, mult) pairs.
pub fn canonical_entries(t: &SimplicialCurrent) -> Vec<(Vec<usize>, i64)> {
    let mut chain = ChainMap::new();
    for (s, &m) in t.simplices.iter().zip(&t.multiplicities) {
        chain.add(s, m);
    }
    chain.into_entries()
}

#[allow(unused)]
fn canonical_key(s: &[usize]) -> Vec<usize> {
    canonical(s).map(|(k, _)| k).unwrap_or_default()
}
