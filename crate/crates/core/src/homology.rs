//! GF(2) simplicial homology: Betti numbers by rank-nullity, cup powers of
//! the covering class, and persistent homology of the lower-star filtration.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::symcx::{CochainClass, SimplexId, Subcomplex, SymmetricComplex};
use crate::value::Value;
use crate::z2::{xor_support, BitMatrix};

/// Positions of the `p`-simplices of a subcomplex, in simplex-id order.
fn dim_positions(c: &SymmetricComplex, sub: &Subcomplex, p: usize) -> Vec<SimplexId> {
    sub.members
        .iter()
        .copied()
        .filter(|&s| c.simplex(s).dim() == p)
        .collect()
}

/// Boundary matrix of a subcomplex: columns are the `p`-simplices, rows the
/// (p-1)-simplices. Returns the matrix plus the column simplex ids.
fn boundary_matrix(
    c: &SymmetricComplex,
    sub: &Subcomplex,
    p: usize,
) -> (BitMatrix, Vec<SimplexId>) {
    let rows = dim_positions(c, sub, p.wrapping_sub(1));
    let cols = dim_positions(c, sub, p);
    let row_index: BTreeMap<SimplexId, u32> = rows
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, i as u32))
        .collect();
    let mut m = BitMatrix::new(rows.len());
    for &s in &cols {
        let mut support: Vec<u32> = c
            .simplex(s)
            .facets
            .iter()
            .map(|f| row_index[&f.expect("valid complex")])
            .collect();
        support.sort_unstable();
        m.push_col(support);
    }
    (m, cols)
}

/// Betti number of a face-closed subcomplex over GF(2), by rank-nullity of
/// the boundary matrices. Serves as the independent oracle for the
/// persistence pipeline.
pub fn betti(c: &SymmetricComplex, sub: &Subcomplex, p: usize) -> usize {
    let n_p = dim_positions(c, sub, p).len();
    if n_p == 0 {
        return 0;
    }
    let rank_p = if p == 0 {
        0
    } else {
        boundary_matrix(c, sub, p).0.rank()
    };
    let rank_up = boundary_matrix(c, sub, p + 1).0.rank();
    n_p - rank_p - rank_up
}

/// The `p`-fold cup power of a 1-cochain evaluated on a `p`-simplex with the
/// ordered-simplex (front/back face) rule: the product of the cochain over
/// consecutive vertex pairs in the global vertex order.
fn cup_power_value(c: &SymmetricComplex, w: &CochainClass, simplex: SimplexId) -> bool {
    let verts = &c.simplex(simplex).verts;
    for pair in verts.windows(2) {
        let edge = c
            .find_by_internal(&[pair[0], pair[1]])
            .expect("edges of a simplex exist");
        if !w.value_on(edge) {
            return false;
        }
    }
    true
}

/// Whether the `p`-fold cup power of the class of `w` is nonzero in
/// H^p(sub; GF(2)). Decided by a coboundary solvability test: the cochain
/// w^p is a coboundary iff dx = w^p has a solution on the (p-1)-cochains.
pub fn cup_power_nonzero(
    c: &SymmetricComplex,
    sub: &Subcomplex,
    w: &CochainClass,
    p: usize,
) -> bool {
    assert_eq!(w.dim, 1, "cup powers are taken of 1-cochains");
    if p == 0 {
        return !sub.is_empty();
    }
    let p_simplices = dim_positions(c, sub, p);
    let mut z: Vec<u32> = Vec::new();
    for (i, &s) in p_simplices.iter().enumerate() {
        if cup_power_value(c, w, s) {
            z.push(i as u32);
        }
    }
    if z.is_empty() {
        return false;
    }
    // coboundary matrix: columns indexed by (p-1)-simplices, rows by
    // p-simplices; column = cofacets within the subcomplex
    let lower = dim_positions(c, sub, p - 1);
    let lower_index: BTreeMap<SimplexId, usize> = lower
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, i))
        .collect();
    let mut cols: Vec<Vec<u32>> = vec![Vec::new(); lower.len()];
    for (i, &s) in p_simplices.iter().enumerate() {
        for f in c.simplex(s).facets.iter().flatten() {
            if let Some(&j) = lower_index.get(f) {
                cols[j].push(i as u32);
            }
        }
    }
    let mut m = BitMatrix::new(p_simplices.len());
    for col in cols {
        m.push_col(col);
    }
    !m.echelonize().solvable(&z)
}

/// One persistence bar; `death` is `None` for essential (infinite) bars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bar {
    pub dim: usize,
    pub birth: Value,
    pub death: Option<Value>,
}

/// Persistence diagram of the lower-star filtration over GF(2).
/// Zero-length bars are dropped: they carry no homology change.
#[derive(Clone, Debug)]
pub struct PersistenceDiagram {
    pub bars: Vec<Bar>,
    /// Betti numbers of the full complex (equal to essential bar counts).
    pub betti_total: Vec<usize>,
}

impl PersistenceDiagram {
    pub fn bars_of_dim(&self, p: usize) -> impl Iterator<Item = &Bar> {
        self.bars.iter().filter(move |b| b.dim == p)
    }

    /// Bars alive at `t` in dimension `p` (born at or before `t`, dying
    /// strictly after).
    pub fn alive_at(&self, p: usize, t: &Value) -> usize {
        self.bars_of_dim(p)
            .filter(|b| &b.birth <= t && b.death.as_ref().map_or(true, |d| d > t))
            .count()
    }
}

/// Standard left-to-right boundary-matrix reduction over the deterministic
/// filtration order.
pub fn persistence(c: &SymmetricComplex) -> PersistenceDiagram {
    let order = c.filtration_order();
    let mut pos = vec![0u32; c.simplex_count()];
    for (i, &s) in order.iter().enumerate() {
        pos[s] = i as u32;
    }
    let mut pivot_owner: Vec<Option<usize>> = vec![None; order.len()];
    let mut reduced: Vec<Vec<u32>> = Vec::with_capacity(order.len());
    let mut killer_of: Vec<Option<usize>> = vec![None; order.len()];

    for (j, &s) in order.iter().enumerate() {
        let mut col: Vec<u32> = c
            .simplex(s)
            .facets
            .iter()
            .map(|f| pos[f.expect("valid complex")])
            .collect();
        col.sort_unstable();
        while let Some(&low) = col.last() {
            match pivot_owner[low as usize] {
                Some(owner) => col = xor_support(&col, &reduced[owner]),
                None => break,
            }
        }
        if let Some(&low) = col.last() {
            pivot_owner[low as usize] = Some(j);
            killer_of[low as usize] = Some(j);
        }
        reduced.push(col);
    }

    let mut bars: Vec<Bar> = Vec::new();
    let mut betti_total = vec![0usize; c.dimension() + 1];
    for (i, &s) in order.iter().enumerate() {
        if !reduced[i].is_empty() {
            continue; // killer column, not a creator
        }
        let dim = c.simplex(s).dim();
        let birth = c.entry_value(s).clone();
        match killer_of[i] {
            Some(j) => {
                let death = c.entry_value(order[j]).clone();
                if death != birth {
                    bars.push(Bar {
                        dim,
                        birth,
                        death: Some(death),
                    });
                }
            }
            None => {
                betti_total[dim] += 1;
                bars.push(Bar {
                    dim,
                    birth,
                    death: None,
                });
            }
        }
    }
    bars.sort_by(|a, b| {
        a.dim
            .cmp(&b.dim)
            .then_with(|| a.birth.cmp(&b.birth))
            .then_with(|| match (&a.death, &b.death) {
                (None, None) => core::cmp::Ordering::Equal,
                (None, Some(_)) => core::cmp::Ordering::Greater,
                (Some(_), None) => core::cmp::Ordering::Less,
                (Some(x), Some(y)) => x.cmp(y),
            })
    });
    PersistenceDiagram { bars, betti_total }
}

/// Number of essential bars of dimension `p` born at or before `t`: the
/// rank of the inclusion-induced map H_p(sublevel(t)) -> H_p(full).
pub fn essential_rank_at(d: &PersistenceDiagram, p: usize, t: &Value) -> usize {
    d.bars_of_dim(p)
        .filter(|b| b.death.is_none() && &b.birth <= t)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcx::CochainClass;
    use alloc::vec;

    fn circle(n: u32, odd_closing: bool) -> SymmetricComplex {
        let vertices: Vec<(u32, Value)> =
            (0..n).map(|i| (i, Value::from_int(i as i64))).collect();
        let edges: Vec<Vec<u32>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        let odd: Vec<(u32, u32)> = if odd_closing { vec![(0, n - 1)] } else { vec![] };
        SymmetricComplex::from_maximal(vertices, &edges, &odd).unwrap()
    }

    #[test]
    fn betti_of_circle_and_disk() {
        let c = circle(4, false);
        let full = c.full_subcomplex();
        assert_eq!(betti(&c, &full, 0), 1);
        assert_eq!(betti(&c, &full, 1), 1);
        assert_eq!(betti(&c, &full, 2), 0);

        let vertices = vec![
            (0, Value::zero()),
            (1, Value::zero()),
            (2, Value::zero()),
        ];
        let disk = SymmetricComplex::from_maximal(vertices, &[vec![0, 1, 2]], &[]).unwrap();
        let full = disk.full_subcomplex();
        assert_eq!(betti(&disk, &full, 0), 1);
        assert_eq!(betti(&disk, &full, 1), 0);
    }

    #[test]
    fn covering_class_detected_by_cup_power() {
        // odd holonomy around the circle: the class is not a coboundary
        let c = circle(5, true);
        let full = c.full_subcomplex();
        let w = CochainClass::covering_class(&c);
        assert!(cup_power_nonzero(&c, &full, &w, 0));
        assert!(cup_power_nonzero(&c, &full, &w, 1));
        // even holonomy: w = delta(indicator) is a coboundary
        let vertices: Vec<(u32, Value)> = (0..4).map(|i| (i, Value::zero())).collect();
        let edges = vec![vec![0u32, 1], vec![1, 2], vec![2, 3], vec![0, 3]];
        let even =
            SymmetricComplex::from_maximal(vertices, &edges, &[(0, 1), (1, 2)]).unwrap();
        let w = CochainClass::covering_class(&even);
        assert!(!cup_power_nonzero(&even, &even.full_subcomplex(), &w, 1));
    }

    #[test]
    fn persistence_of_two_arcs_closing() {
        // path 0-1-2 at low values plus a late closing edge: one component
        // bar dies when the arcs merge, the loop is born at the closing edge
        let vertices = vec![
            (0, Value::zero()),
            (1, Value::from_int(1)),
            (2, Value::from_int(2)),
            (3, Value::from_int(3)),
        ];
        let edges = vec![vec![0u32, 1], vec![1, 2], vec![2, 3], vec![0, 3]];
        let c = SymmetricComplex::from_maximal(vertices, &edges, &[]).unwrap();
        let d = persistence(&c);
        assert_eq!(d.betti_total, vec![1, 1]);
        let b0: Vec<&Bar> = d.bars_of_dim(0).collect();
        // vertices 1, 2, 3 each merge into the component of 0 immediately
        // (zero-length bars dropped), leaving the single essential bar
        assert_eq!(b0.len(), 1);
        assert_eq!(b0[0].birth, Value::zero());
        assert_eq!(b0[0].death, None);
        let b1: Vec<&Bar> = d.bars_of_dim(1).collect();
        assert_eq!(b1.len(), 1);
        assert_eq!(b1[0].birth, Value::from_int(3));
        assert_eq!(b1[0].death, None);
    }

    #[test]
    fn persistence_alive_matches_betti_on_sublevels() {
        let c = circle(6, false);
        let d = persistence(&c);
        for t in 0..6 {
            let t = Value::from_int(t);
            let sub = c.sublevel(&t);
            for p in 0..=1 {
                assert_eq!(d.alive_at(p, &t), betti(&c, &sub, p), "p={} t={:?}", p, t);
            }
        }
    }

    #[test]
    fn essential_rank_counts_births() {
        let c = circle(6, false);
        let d = persistence(&c);
        // the loop closes only at the top vertex value
        assert_eq!(essential_rank_at(&d, 1, &Value::from_int(4)), 0);
        assert_eq!(essential_rank_at(&d, 1, &Value::from_int(5)), 1);
        assert_eq!(essential_rank_at(&d, 0, &Value::zero()), 1);
    }
}
