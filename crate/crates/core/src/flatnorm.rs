//! Flat distance as a linear program over a shared simplicial complex.
//!
//! `d(T, S) = min { M(R) + M(Q) : T - S = R + ∂Q }` with integer chains `R`
//! (dimension k) and `Q` (dimension k+1) on the complex. The LP relaxation is
//! solved first and integrality of the optimum is verified a posteriori; a
//! non-integral relaxation falls back to the integer program.

use std::collections::BTreeMap;

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use nalgebra::DVector;

use crate::chain::{canonical, VertexPool};
use crate::current::SimplicialCurrent;
use crate::error::{Error, Result};
use crate::geom::{seg_length, tri_area, Plane2, Point};

/// Default vertex welding tolerance when merging currents onto one complex.
pub const WELD_TOL: f64 = 1e-9;

/// A two-layer chain complex: k-cells (the compared dimension) and
/// (k+1)-cells providing fillings.
#[derive(Debug)]
pub struct ChainComplex {
    dim: usize,
    ambient: usize,
    pool: VertexPool,
    k_cells: Vec<Vec<usize>>,
    k_masses: Vec<f64>,
    k1_cells: Vec<Vec<usize>>,
    k1_masses: Vec<f64>,
    /// per (k+1)-cell: signed incidence on k-cells
    boundary_rows: Vec<Vec<(usize, i64)>>,
    k_index: BTreeMap<Vec<usize>, usize>,
}

impl ChainComplex {
    /// Merge the given currents (dimension `dim`) and filler currents
    /// (dimension `dim + 1`) onto one complex, welding vertices within
    /// `weld_tol`. Faces of filler cells are added as k-cells automatically.
    pub fn build(
        dim: usize,
        chains: &[&SimplicialCurrent],
        fillers: &[&SimplicialCurrent],
        weld_tol: f64,
    ) -> Result<Self> {
        let ambient = chains
            .first()
            .map(|c| c.ambient())
            .or_else(|| fillers.first().map(|c| c.ambient()))
            .ok_or_else(|| Error::Empty("complex with no cells".into()))?;
        let mut pool = VertexPool::new(weld_tol);
        let mut k_index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut k_cells: Vec<Vec<usize>> = Vec::new();
        let mut k1_index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut k1_cells: Vec<Vec<usize>> = Vec::new();

        let mut add_k_cell = |key: Vec<usize>, k_cells: &mut Vec<Vec<usize>>| -> usize {
            if let Some(&i) = k_index.get(&key) {
                return i;
            }
            let i = k_cells.len();
            k_cells.push(key.clone());
            k_index.insert(key, i);
            i
        };

        for c in chains {
            if c.dim() != dim {
                return Err(Error::DimensionMismatch("chain current of wrong dimension".into()));
            }
            for s in c.simplices() {
                let mapped: Vec<usize> = s.iter().map(|&v| pool.insert(&c.vertices()[v])).collect();
                if let Some((key, _)) = canonical(&mapped) {
                    add_k_cell(key, &mut k_cells);
                }
            }
        }
        for f in fillers {
            if f.dim() != dim + 1 {
                return Err(Error::DimensionMismatch("filler current of wrong dimension".into()));
            }
            for s in f.simplices() {
                let mapped: Vec<usize> = s.iter().map(|&v| pool.insert(&f.vertices()[v])).collect();
                if let Some((key, _)) = canonical(&mapped) {
                    if !k1_index.contains_key(&key) {
                        let i = k1_cells.len();
                        k1_cells.push(key.clone());
                        k1_index.insert(key, i);
                    }
                }
            }
        }
        // faces of filler cells become k-cells
        for cell in k1_cells.clone() {
            for drop in 0..cell.len() {
                let face: Vec<usize> = cell
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != drop)
                    .map(|(_, v)| *v)
                    .collect();
                add_k_cell(face, &mut k_cells);
            }
        }

        let cell_mass = |cell: &[usize], pool: &VertexPool| -> f64 {
            let pts: Vec<&Point> = cell.iter().map(|&v| &pool.points()[v]).collect();
            match cell.len() {
                2 => seg_length(pts[0], pts[1]),
                3 => tri_area(pts[0], pts[1], pts[2]),
                _ => 1.0,
            }
        };
        let k_masses: Vec<f64> = k_cells.iter().map(|c| cell_mass(c, &pool)).collect();
        let k1_masses: Vec<f64> = k1_cells.iter().map(|c| cell_mass(c, &pool)).collect();

        let mut boundary_rows = Vec::with_capacity(k1_cells.len());
        for cell in &k1_cells {
            let mut row = Vec::with_capacity(cell.len());
            for drop in 0..cell.len() {
                let face: Vec<usize> = cell
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != drop)
                    .map(|(_, v)| *v)
                    .collect();
                let sign = if drop % 2 == 0 { 1i64 } else { -1 };
                // cells are stored canonically, so faces are already sorted
                let idx = *k_index.get(&face).expect("face registered above");
                row.push((idx, sign));
            }
            boundary_rows.push(row);
        }

        Ok(ChainComplex {
            dim,
            ambient,
            pool,
            k_cells,
            k_masses,
            k1_cells,
            k1_masses,
            boundary_rows,
            k_index,
        })
    }

    pub fn num_k_cells(&self) -> usize {
        self.k_cells.len()
    }

    pub fn num_k1_cells(&self) -> usize {
        self.k1_cells.len()
    }

    /// Dense integer chain of a current over the k-cells of this complex.
    /// Fails if a simplex of the current is not a cell of the complex.
    pub fn chain_of(&self, c: &SimplicialCurrent) -> Result<Vec<i64>> {
        if c.dim() != self.dim {
            return Err(Error::DimensionMismatch("chain of wrong dimension".into()));
        }
        let mut out = vec![0i64; self.k_cells.len()];
        for (s, &m) in c.simplices().iter().zip(c.multiplicities()) {
            let mut mapped = Vec::with_capacity(s.len());
            for &v in s {
                let p = &c.vertices()[v];
                let idx = self
                    .lookup_vertex(p)
                    .ok_or_else(|| Error::ComplexMismatch(format!("vertex {:?} not on complex", p.as_slice())))?;
                mapped.push(idx);
            }
            if let Some((key, sign)) = canonical(&mapped) {
                let idx = self
                    .k_index
                    .get(&key)
                    .ok_or_else(|| Error::ComplexMismatch(format!("simplex {key:?} not a cell of the complex")))?;
                out[*idx] += sign * m;
            }
        }
        Ok(out)
    }

    fn lookup_vertex(&self, p: &Point) -> Option<usize> {
        // the pool inserts; emulate a lookup by probing the quantized key
        self.pool.lookup(p)
    }

    /// Assemble a current from a dense k-chain.
    pub fn current_of_k_chain(&self, chain: &[i64]) -> SimplicialCurrent {
        self.current_of(chain, &self.k_cells, self.dim)
    }

    /// Assemble a current from a dense (k+1)-chain.
    pub fn current_of_k1_chain(&self, chain: &[i64]) -> SimplicialCurrent {
        self.current_of(chain, &self.k1_cells, self.dim + 1)
    }

    fn current_of(&self, chain: &[i64], cells: &[Vec<usize>], dim: usize) -> SimplicialCurrent {
        let mut simplices = Vec::new();
        let mut mults = Vec::new();
        for (i, &m) in chain.iter().enumerate() {
            if m != 0 {
                simplices.push(cells[i].clone());
                mults.push(m);
            }
        }
        SimplicialCurrent::with_tolerance(dim, self.ambient, self.pool.points().to_vec(), simplices, mults, 0.0)
            .expect("cells of a complex are nondegenerate")
    }
}

/// Result of a flat-norm computation.
#[derive(Debug)]
pub struct FlatNorm {
    pub value: f64,
    pub r_witness: SimplicialCurrent,
    pub q_witness: SimplicialCurrent,
    pub lp_status: String,
    pub integral: bool,
}

/// Flat norm of an integer k-chain on the complex.
pub fn flat_norm_of_chain(complex: &ChainComplex, chain: &[i64]) -> Result<FlatNorm> {
    // canonical sign so that d is exactly symmetric in its arguments
    let flip = chain.iter().find(|&&c| c != 0).map_or(false, |&c| c < 0);
    let c: Vec<i64> = if flip { chain.iter().map(|&x| -x).collect() } else { chain.to_vec() };

    if c.iter().all(|&x| x == 0) {
        return Ok(FlatNorm {
            value: 0.0,
            r_witness: complex.current_of_k_chain(&vec![0; complex.num_k_cells()]),
            q_witness: complex.current_of_k1_chain(&vec![0; complex.num_k1_cells()]),
            lp_status: "trivial".into(),
            integral: true,
        });
    }

    let (solution, status) = solve_lp(complex, &c, false)?;
    let nk = complex.num_k_cells();
    let nq = complex.num_k1_cells();
    let integral = solution.iter().all(|x| (x - x.round()).abs() <= 1e-7);
    let (solution, status, integral) = if integral {
        (solution, status, true)
    } else {
        let (s2, st2) = solve_lp(complex, &c, true)?;
        (s2, st2, true)
    };

    let mut r = vec![0i64; nk];
    let mut q = vec![0i64; nq];
    let mut value = 0.0;
    for i in 0..nk {
        r[i] = (solution[2 * i] - solution[2 * i + 1]).round() as i64;
        value += complex.k_masses[i] * (solution[2 * i] + solution[2 * i + 1]);
    }
    for j in 0..nq {
        q[j] = (solution[2 * nk + 2 * j] - solution[2 * nk + 2 * j + 1]).round() as i64;
        value += complex.k1_masses[j] * (solution[2 * nk + 2 * j] + solution[2 * nk + 2 * j + 1]);
    }
    if flip {
        for x in &mut r {
            *x = -*x;
        }
        for x in &mut q {
            *x = -*x;
        }
    }
    Ok(FlatNorm {
        value,
        r_witness: complex.current_of_k_chain(&r),
        q_witness: complex.current_of_k1_chain(&q),
        lp_status: status,
        integral,
    })
}

fn solve_lp(complex: &ChainComplex, c: &[i64], integer: bool) -> Result<(Vec<f64>, String)> {
    let nk = complex.num_k_cells();
    let nq = complex.num_k1_cells();
    let bound: i32 = c
        .iter()
        .map(|&x| x.unsigned_abs() as i64)
        .sum::<i64>()
        .max(4)
        .try_into()
        .map_err(|_| Error::LinearProgram("chain too large for the integer fallback".into()))?;

    let mut p = Problem::new(OptimizationDirection::Minimize);
    let mut vars = Vec::with_capacity(2 * (nk + nq));
    for i in 0..nk {
        for _ in 0..2 {
            let v = if integer {
                p.add_integer_var(complex.k_masses[i], (0, bound))
            } else {
                p.add_var(complex.k_masses[i], (0.0, f64::INFINITY))
            };
            vars.push(v);
        }
    }
    for j in 0..nq {
        for _ in 0..2 {
            let v = if integer {
                p.add_integer_var(complex.k1_masses[j], (0, bound))
            } else {
                p.add_var(complex.k1_masses[j], (0.0, f64::INFINITY))
            };
            vars.push(v);
        }
    }
    // r+ - r- + Σ ∂coeff (q+ - q-) = c
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nk];
    for i in 0..nk {
        rows[i].push((2 * i, 1.0));
        rows[i].push((2 * i + 1, -1.0));
    }
    for (j, row) in complex.boundary_rows.iter().enumerate() {
        for &(i, coeff) in row {
            rows[i].push((2 * nk + 2 * j, coeff as f64));
            rows[i].push((2 * nk + 2 * j + 1, -coeff as f64));
        }
    }
    for (i, row) in rows.into_iter().enumerate() {
        let mut expr = microlp::LinearExpr::empty();
        for (vi, coeff) in row {
            expr.add(vars[vi], coeff);
        }
        p.add_constraint(expr, ComparisonOp::Eq, c[i] as f64);
    }
    let sol = p
        .solve()
        .map_err(|e| Error::LinearProgram(format!("{e:?} (boundary mismatch makes the LP infeasible)")))?;
    let values: Vec<f64> = vars.iter().map(|v| *sol.var_value(*v)).collect();
    Ok((values, if integer { "optimal-ip".into() } else { "optimal-lp".into() }))
}

/// Filling strategy for [`flat_distance`].
pub enum FillStrategy {
    /// cone every 1-cell of the merged curves over a fixed apex
    ConeOver(Point),
    /// use the triangles of the given meshes as fillers
    Meshes(Vec<SimplicialCurrent>),
    /// no fillings: `d = min mass of R with R = T - S`
    None,
}

/// Flat distance of two currents of equal dimension, refined onto a common
/// complex. An optional ball restricts both inputs first (marching split).
pub fn flat_distance(
    t: &SimplicialCurrent,
    s: &SimplicialCurrent,
    region: Option<(&Point, f64)>,
    strategy: &FillStrategy,
) -> Result<FlatNorm> {
    if t.dim() != s.dim() {
        return Err(Error::DimensionMismatch("flat distance of unequal dimensions".into()));
    }
    let (tc, sc);
    let (t, s) = match region {
        Some((x, r)) => {
            tc = t.restrict_to_ball(x, r);
            sc = s.restrict_to_ball(x, r);
            (&tc, &sc)
        }
        None => (t, s),
    };
    let fillers: Vec<SimplicialCurrent> = match strategy {
        FillStrategy::ConeOver(apex) => {
            let merged = t.weld(WELD_TOL).concat(&s.weld(WELD_TOL)).weld(WELD_TOL);
            vec![SimplicialCurrent::cone_over(&merged, apex).current]
        }
        FillStrategy::Meshes(ms) => ms.clone(),
        FillStrategy::None => Vec::new(),
    };
    let filler_refs: Vec<&SimplicialCurrent> = fillers.iter().collect();
    let complex = ChainComplex::build(t.dim(), &[t, s], &filler_refs, WELD_TOL)?;
    let ct = complex.chain_of(t)?;
    let cs = complex.chain_of(s)?;
    let c: Vec<i64> = ct.iter().zip(&cs).map(|(a, b)| a - b).collect();
    flat_norm_of_chain(&complex, &c)
}

/// Triangulated rectangle `origin + [0, nx·hx] × [0, ny·hy]` in a plane,
/// for grid-complex fixtures.
pub fn grid_mesh(plane: &Plane2, origin: &Point, nx: usize, ny: usize, hx: f64, hy: f64) -> SimplicialCurrent {
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            let p = origin + plane.embed(i as f64 * hx, j as f64 * hy);
            vertices.push(p);
        }
    }
    let idx = |i: usize, j: usize| j * (nx + 1) + i;
    let mut simplices = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            simplices.push(vec![idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            simplices.push(vec![idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    let n = simplices.len();
    SimplicialCurrent::with_tolerance(2, plane.ambient(), vertices, simplices, vec![1; n], 0.0).unwrap()
}

/// Segment chain along a straight line of a grid, for fixtures.
pub fn segment_chain(points: &[Point], mult: i64) -> SimplicialCurrent {
    let n = points.len();
    assert!(n >= 2);
    let ambient = points[0].len();
    let simplices: Vec<Vec<usize>> = (0..n - 1).map(|i| vec![i, i + 1]).collect();
    SimplicialCurrent::with_tolerance(1, ambient, points.to_vec(), simplices, vec![mult; n - 1], 0.0).unwrap()
}

// a DVector helper used by CLI fixtures
pub fn point(coords: &[f64]) -> Point {
    DVector::from_column_slice(coords)
}
