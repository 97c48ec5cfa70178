//! Integer chains over canonically oriented simplices.
//!
//! All boundary/cancellation bookkeeping happens here so that identities like
//! `∂∘∂ = 0` hold exactly in integer arithmetic.

use std::collections::BTreeMap;

/// Canonical form of an oriented simplex: sorted vertex indices plus the sign
/// of the sorting permutation. Simplices with a repeated vertex are zero.
pub fn canonical(indices: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut v = indices.to_vec();
    let mut sign = 1i64;
    // insertion sort, tracking parity
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((v, sign))
}

/// Multiplicity accumulator keyed by canonical simplices.
#[derive(Debug, Default, Clone)]
pub struct ChainMap {
    entries: BTreeMap<Vec<usize>, i64>,
}

impl ChainMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, indices: &[usize], mult: i64) {
        if mult == 0 {
            return;
        }
        if let Some((key, sign)) = canonical(indices) {
            let e = self.entries.entry(key).or_insert(0);
            *e += sign * mult;
            if *e == 0 {
                self.entries.remove(&canonical(indices).unwrap().0);
            }
        }
    }

    /// Add the signed faces of an oriented simplex.
    pub fn add_boundary_of(&mut self, indices: &[usize], mult: i64) {
        let k = indices.len();
        let mut face = Vec::with_capacity(k - 1);
        for drop in 0..k {
            face.clear();
            face.extend(indices.iter().enumerate().filter(|(i, _)| *i != drop).map(|(_, v)| *v));
            let sign = if drop % 2 == 0 { 1 } else { -1 };
            self.add(&face, sign * mult);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &i64)> {
        self.entries.iter()
    }

    pub fn into_entries(self) -> Vec<(Vec<usize>, i64)> {
        self.entries.into_iter().collect()
    }

    pub fn sub(&mut self, other: &ChainMap) {
        for (k, m) in other.iter() {
            self.add(k, -m);
        }
    }
}

/// Deduplicating vertex pool with coordinate quantization.
///
/// Coordinates are snapped to a `1/scale` grid for identity purposes only; the
/// stored vertex keeps the first-seen exact coordinates.
#[derive(Debug)]
pub struct VertexPool {
    scale: f64,
    map: BTreeMap<Vec<i64>, usize>,
    points: Vec<crate::geom::Point>,
}

impl VertexPool {
    pub fn new(weld_tol: f64) -> Self {
        VertexPool {
            scale: 1.0 / weld_tol,
            map: BTreeMap::new(),
            points: Vec::new(),
        }
    }

    pub fn insert(&mut self, p: &crate::geom::Point) -> usize {
        let key: Vec<i64> = p.iter().map(|x| (x * self.scale).round() as i64).collect();
        if let Some(&i) = self.map.get(&key) {
            return i;
        }
        let i = self.points.len();
        self.points.push(p.clone());
        self.map.insert(key, i);
        i
    }

    /// Find an existing vertex id for `p` without inserting.
    pub fn lookup(&self, p: &crate::geom::Point) -> Option<usize> {
        let key: Vec<i64> = p.iter().map(|x| (x * self.scale).round() as i64).collect();
        self.map.get(&key).copied()
    }

    pub fn points(&self) -> &[crate::geom::Point] {
        &self.points
    }

    pub fn into_points(self) -> Vec<crate::geom::Point> {
        self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_tracks_permutation_sign() {
        assert_eq!(canonical(&[2, 1]), Some((vec![1, 2], -1)));
        assert_eq!(canonical(&[0, 1, 2]), Some((vec![0, 1, 2], 1)));
        assert_eq!(canonical(&[1, 0, 2]), Some((vec![0, 1, 2], -1)));
        assert_eq!(canonical(&[2, 0, 1]), Some((vec![0, 1, 2], 1)));
        assert_eq!(canonical(&[1, 1, 2]), None);
    }

    #[test]
    fn boundary_of_boundary_cancels() {
        let mut faces = ChainMap::new();
        faces.add_boundary_of(&[0, 1, 2], 3);
        let mut edges = ChainMap::new();
        for (k, m) in faces.iter() {
            edges.add_boundary_of(k, *m);
        }
        assert!(edges.is_zero());
    }
}
