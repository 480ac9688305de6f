//! Min-max spectrum estimates from sublevel sweeps.
//!
//! Three independent mechanisms, cross-checked against each other:
//! extremes from the vertex values, the second value from an odd-holonomy
//! cycle sweep, and the full sweep from the cohomological index (one plus
//! the largest nonvanishing cup power of the covering class). The index is
//! a lower bound for the genus, so the swept values are upper bounds for
//! the true min-max values; on the bundled spaces they are exact.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::homology::cup_power_nonzero;
use crate::symcx::{CochainClass, SimplexId, Subcomplex, SymmetricComplex};
use crate::value::Value;

/// A cycle in the 1-skeleton with total cocycle holonomy 1, listed as edge
/// simplex ids. Such a cycle lifts to a path between antipodal points of
/// the double cover, so the sublevel containing it cannot be split into
/// two symmetric halves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddCycleWitness {
    pub edges: Vec<SimplexId>,
}

impl OddCycleWitness {
    /// Total holonomy of the witness; 1 for a genuine witness.
    pub fn holonomy(&self, c: &SymmetricComplex) -> bool {
        self.edges.iter().fold(false, |p, &e| p ^ c.cocycle(e))
    }
}

/// The cover is trivial: no cycle of odd holonomy exists anywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverTrivial;

impl fmt::Display for CoverTrivial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "no cycle of odd holonomy: the double cover is trivial")
    }
}

#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub kr_min: Value,
    pub kr_max: Value,
    /// Least level with an odd-holonomy cycle, with the witness; `None`
    /// when the cover is trivial.
    pub kr2: Option<(Value, OddCycleWitness)>,
    /// Swept values for k = 1..=k_max; `None` records that the index never
    /// reaches k (reported as `inf`).
    pub index_values: Vec<Option<Value>>,
    /// Always true: swept values are upper bounds for the min-max values
    /// (index ≤ genus), exact on the bundled spaces. Kept as an explicit
    /// field so reports must surface it.
    pub upper_bound_caveat: bool,
}

/// Smallest and largest vertex values: the first and last min-max values.
pub fn kr_extremes(c: &SymmetricComplex) -> (Value, Value) {
    let levels = c.levels();
    (
        levels.first().expect("complex has vertices").clone(),
        levels.last().expect("complex has vertices").clone(),
    )
}

struct ParityDsu {
    parent: Vec<u32>,
    rank: Vec<u8>,
    /// GF(2) offset to the parent.
    offset: Vec<bool>,
}

impl ParityDsu {
    fn new(n: usize) -> Self {
        ParityDsu {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
            offset: vec![false; n],
        }
    }

    /// Root of `x` and the accumulated offset to it, with path compression.
    fn find(&mut self, x: u32) -> (u32, bool) {
        let p = self.parent[x as usize];
        if p == x {
            return (x, false);
        }
        let (root, above) = self.find(p);
        let total = self.offset[x as usize] ^ above;
        self.parent[x as usize] = root;
        self.offset[x as usize] = total;
        (root, total)
    }

    /// Joins the classes of `x` and `y` with relative parity `w`.
    fn union(&mut self, x: u32, y: u32, w: bool) {
        let (rx, px) = self.find(x);
        let (ry, py) = self.find(y);
        debug_assert_ne!(rx, ry);
        let (child, parent, rel) = if self.rank[rx as usize] < self.rank[ry as usize] {
            (rx, ry, px ^ py ^ w)
        } else {
            if self.rank[rx as usize] == self.rank[ry as usize] {
                self.rank[rx as usize] += 1;
            }
            (ry, rx, px ^ py ^ w)
        };
        self.parent[child as usize] = parent;
        self.offset[child as usize] = rel;
    }
}

/// Tree path between two vertices in the spanning forest, as edge ids.
fn forest_path(forest: &[Vec<(u32, SimplexId)>], from: u32, to: u32) -> Vec<SimplexId> {
    let mut prev: Vec<Option<(u32, SimplexId)>> = vec![None; forest.len()];
    let mut queue: Vec<u32> = vec![from];
    let mut seen = vec![false; forest.len()];
    seen[from as usize] = true;
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        if v == to {
            break;
        }
        for &(u, e) in &forest[v as usize] {
            if !seen[u as usize] {
                seen[u as usize] = true;
                prev[u as usize] = Some((v, e));
                queue.push(u);
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = to;
    while cur != from {
        let (p, e) = prev[cur as usize].expect("vertices share a forest component");
        path.push(e);
        cur = p;
    }
    path.reverse();
    path
}

/// Least entry level whose sublevel 1-skeleton carries an odd-holonomy
/// cycle, found by an ascending edge sweep over a parity-augmented
/// disjoint-set forest. Returns one witness cycle.
pub fn kr2_sweep(c: &SymmetricComplex) -> Result<(Value, OddCycleWitness), CoverTrivial> {
    let mut edges = c.simplices_of_dim(1);
    // simplex ids of one dimension are already lexicographic, so sorting by
    // level alone keeps the deterministic tie-break
    edges.sort_by_key(|&e| c.entry_level(e));
    let n = c.vertex_count();
    let mut dsu = ParityDsu::new(n);
    let mut forest: Vec<Vec<(u32, SimplexId)>> = vec![Vec::new(); n];
    for e in edges {
        let verts = &c.simplex(e).verts;
        let (u, v) = (verts[0], verts[1]);
        let w = c.cocycle(e);
        let (ru, pu) = dsu.find(u);
        let (rv, pv) = dsu.find(v);
        if ru != rv {
            dsu.union(u, v, w);
            forest[u as usize].push((v, e));
            forest[v as usize].push((u, e));
        } else if pu ^ pv ^ w {
            let mut cycle = forest_path(&forest, u, v);
            cycle.push(e);
            let witness = OddCycleWitness { edges: cycle };
            debug_assert!(witness.holonomy(c));
            return Ok((c.entry_value(e).clone(), witness));
        }
    }
    Err(CoverTrivial)
}

/// Cohomological index of a face-closed subcomplex: 0 when empty,
/// otherwise 1 + the largest p with [w]^p ≠ 0 in H^p(sub; GF(2)). A lower
/// bound for the genus of the covering set; exact on the bundled spaces.
pub fn index_of(c: &SymmetricComplex, sub: &Subcomplex, w: &CochainClass) -> usize {
    if sub.is_empty() {
        return 0;
    }
    // nonvanishing powers are downward closed, so scan up to first failure
    let mut p = 1;
    while p <= c.dimension() && cup_power_nonzero(c, sub, w, p) {
        p += 1;
    }
    p
}

/// Full sweep: for each k = 1..=k_max, the least distinct filtration level
/// whose sublevel has index at least k. Cross-checked internally against
/// the extremes and the odd-cycle sweep.
pub fn index_spectrum(c: &SymmetricComplex, k_max: usize) -> SpectrumReport {
    assert!(
        k_max <= c.dimension() + 1,
        "index of a {}-complex quotient cannot exceed {}",
        c.dimension(),
        c.dimension() + 1
    );
    let (kr_min, kr_max) = kr_extremes(c);
    let w = CochainClass::covering_class(c);
    let levels = c.levels();

    // index_of(sublevel) >= k iff [w]^(k-1) does not vanish there, and the
    // index is nondecreasing in the level, so each k is a binary search
    let mut index_values: Vec<Option<Value>> = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let test = |cutoff: usize| -> bool {
            let sub = c.sublevel_below(cutoff);
            if k == 1 {
                return !sub.is_empty();
            }
            cup_power_nonzero(c, &sub, &w, k - 1)
        };
        if !test(levels.len()) {
            index_values.push(None);
            continue;
        }
        let (mut lo, mut hi) = (1usize, levels.len());
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if test(mid) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        index_values.push(Some(levels[lo - 1].clone()));
    }

    let kr2 = kr2_sweep(c).ok();
    if k_max >= 1 {
        debug_assert_eq!(index_values[0].as_ref(), Some(&kr_min));
    }
    if k_max >= 2 {
        debug_assert_eq!(
            index_values[1].as_ref(),
            kr2.as_ref().map(|(v, _)| v),
            "odd-cycle sweep and cup-power sweep disagree"
        );
    }

    SpectrumReport {
        kr_min,
        kr_max,
        kr2,
        index_values,
        upper_bound_caveat: true,
    }
}
