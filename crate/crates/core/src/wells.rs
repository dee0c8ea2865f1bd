//! Potential wells by 0-dimensional sublevel-set persistence of sampled `b`.
//!
//! Nodes are swept in increasing `b`. Each local minimum starts a component;
//! when two components meet, the one with the higher minimum dies (elder
//! rule) and its depth is `level - min`. All Dirichlet boundary nodes belong
//! to a single component that is older than every interior one, so a basin
//! whose lowest exit is the domain boundary is still reported.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Lattice;
use crate::potential::{Field2D, Potential1D};

/// One detected well.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Well {
    /// Interior node index of the minimum.
    pub min_location: usize,
    pub min_value: f64,
    pub barrier_value: f64,
    pub depth: f64,
    /// Interior nodes of the sublevel component `{b < barrier}` holding the minimum.
    #[serde(skip)]
    pub region_mask: Vec<bool>,
}

impl Well {
    pub fn region_size(&self) -> usize {
        self.region_mask.iter().filter(|&&m| m).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WellReport {
    /// Wells sorted by decreasing depth.
    pub wells: Vec<Well>,
    /// Index of the deepest well (0 when any well exists).
    pub deepest: Option<usize>,
    pub tol: f64,
}

impl WellReport {
    /// Depth of the deepest well, `b0`.
    pub fn b0(&self) -> Option<f64> {
        self.deepest.map(|i| self.wells[i].depth)
    }
}

/// Sampled potential on a lattice, as seen by the well machinery.
pub trait WellSource {
    fn lattice(&self) -> Lattice;
    fn b_full(&self) -> Result<&[f64]>;
    fn default_tol(&self) -> f64;
    /// `b` seen by the edge weight between adjacent full nodes `u` and `v`.
    fn edge_b(&self, u: usize, v: usize) -> f64 {
        let b = self.b_full().expect("sampled b");
        0.5 * (b[u] + b[v])
    }
}

impl WellSource for Potential1D {
    fn lattice(&self) -> Lattice {
        self.grid.lattice()
    }
    fn b_full(&self) -> Result<&[f64]> {
        Ok(&self.b)
    }
    fn default_tol(&self) -> f64 {
        Potential1D::default_tol(self)
    }
    fn edge_b(&self, u: usize, v: usize) -> f64 {
        self.b_edge(u.min(v))
    }
}

impl WellSource for Field2D {
    fn lattice(&self) -> Lattice {
        self.grid.lattice()
    }
    fn b_full(&self) -> Result<&[f64]> {
        self.b.as_deref().ok_or(Error::MissingPotential)
    }
    fn default_tol(&self) -> f64 {
        Field2D::default_tol(self)
    }
}

struct Components {
    parent: Vec<usize>,
    rank: Vec<u8>,
    /// Full index of the component minimum (valid at roots).
    min_node: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl Components {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
            min_node: (0..n).collect(),
            members: vec![Vec::new(); n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Link two roots; `elder` keeps its minimum.
    fn link(&mut self, elder: usize, younger: usize) -> usize {
        let (root, child) = if self.rank[elder] >= self.rank[younger] {
            (elder, younger)
        } else {
            (younger, elder)
        };
        if self.rank[root] == self.rank[child] {
            self.rank[root] += 1;
        }
        self.parent[child] = root;
        self.min_node[root] = self.min_node[elder];
        let mut moved = std::mem::take(&mut self.members[child]);
        if self.members[root].len() < moved.len() {
            std::mem::swap(&mut self.members[root], &mut moved);
        }
        self.members[root].extend(moved);
        root
    }
}

/// Sublevel persistence on a lattice; returns all wells with depth `> tol`.
pub fn detect_wells(source: &impl WellSource, tol: Option<f64>) -> Result<WellReport> {
    let lat = source.lattice();
    let b = source.b_full()?;
    if lat.interior_len() == 0 || b.len() != lat.full_len() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    let tol = tol.unwrap_or_else(|| source.default_tol());
    if !(tol >= 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be nonnegative, got {tol}")));
    }

    let n = lat.full_len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| b[x].total_cmp(&b[y]).then(x.cmp(&y)));

    let mut uf = Components::new(n);
    let mut active = vec![false; n];
    let mut boundary_root: Option<usize> = None;
    let mut wells = Vec::new();
    let mut nb = Vec::with_capacity(4);

    // elder: boundary first, then lower minimum, then lower index
    let elder_of = |uf: &Components, broot: Option<usize>, r1: usize, r2: usize| -> (usize, usize) {
        if Some(r1) == broot {
            return (r1, r2);
        }
        if Some(r2) == broot {
            return (r2, r1);
        }
        let (m1, m2) = (uf.min_node[r1], uf.min_node[r2]);
        if b[m1] < b[m2] || (b[m1] == b[m2] && m1 < m2) {
            (r1, r2)
        } else {
            (r2, r1)
        }
    };

    for &v in &order {
        let level = b[v];
        active[v] = true;
        uf.members[v].push(v);
        if lat.is_boundary(v) {
            match boundary_root {
                None => boundary_root = Some(v),
                Some(r) => {
                    let r = uf.find(r);
                    boundary_root = Some(uf.link(r, v));
                }
            }
        }
        lat.neighbors(v, &mut nb);
        for &(w, _) in &nb {
            if !active[w] {
                continue;
            }
            let rv = uf.find(v);
            let rw = uf.find(w);
            if rv == rw {
                continue;
            }
            let broot = boundary_root.map(|r| uf.find(r));
            let (elder, younger) = elder_of(&uf, broot, rv, rw);
            let young_min = uf.min_node[younger];
            let depth = level - b[young_min];
            // the freshly activated node v is at the barrier level; it is only
            // part of the younger region if v started the younger component
            if depth > tol {
                let mut mask = vec![false; lat.interior_len()];
                for &m in &uf.members[younger] {
                    if b[m] < level {
                        if let Some(i) = lat.interior_index(m) {
                            mask[i] = true;
                        }
                    }
                }
                wells.push(Well {
                    min_location: lat.interior_index(young_min).expect("interior minimum"),
                    min_value: b[young_min],
                    barrier_value: level,
                    depth,
                    region_mask: mask,
                });
            }
            let root = uf.link(elder, younger);
            if broot == Some(elder) {
                boundary_root = Some(root);
            }
        }
    }

    wells.sort_by(|x, y| y.depth.total_cmp(&x.depth).then(x.min_location.cmp(&y.min_location)));
    let deepest = (!wells.is_empty()).then_some(0);
    Ok(WellReport { wells, deepest, tol })
}

/// Interior mask of the component of `{b < level}` that contains `seed` (interior index).
pub fn basin_at_level(source: &impl WellSource, seed: usize, level: f64) -> Result<Vec<bool>> {
    let lat = source.lattice();
    let b = source.b_full()?;
    let start = lat.full_index(seed);
    let mut mask = vec![false; lat.interior_len()];
    if !(b[start] < level) {
        return Ok(mask);
    }
    let mut seen = vec![false; lat.full_len()];
    let mut stack = vec![start];
    seen[start] = true;
    let mut nb = Vec::with_capacity(4);
    while let Some(v) = stack.pop() {
        let Some(i) = lat.interior_index(v) else { continue };
        mask[i] = true;
        lat.neighbors(v, &mut nb);
        for &(w, _) in &nb {
            if !seen[w] && b[w] < level {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    Ok(mask)
}
