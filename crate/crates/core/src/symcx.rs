//! Quotient simplicial complexes with a GF(2) covering cocycle and a
//! vertex filtration.
//!
//! A free Z2-space is presented downstairs: the quotient complex plus an
//! edge labeling `w` with values in GF(2). The double cover is never
//! materialized; a cycle with odd total label lifts to a path between
//! antipodes. The vertex function induces the lower-star filtration: a
//! simplex enters at the maximum value over its vertices.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::value::Value;

/// External vertex identifier, as written in input files.
pub type VertexId = u32;
/// Index of a simplex inside its complex.
pub type SimplexId = usize;
/// Index into the sorted list of distinct filtration levels.
pub type LevelId = usize;

pub const MAX_DIMENSION: usize = 3;

#[derive(Clone, Debug)]
pub struct Simplex {
    /// Internal vertex indices, strictly ascending. Internal order follows
    /// ascending external ids, which is the global vertex order used for
    /// cup products.
    pub verts: Vec<u32>,
    /// Facets (codimension-1 faces); `None` marks a missing face in a
    /// non-face-closed complex built via [`SymmetricComplex::from_parts`].
    pub facets: Vec<Option<SimplexId>>,
    /// Lower-star entry level.
    pub level: LevelId,
}

impl Simplex {
    pub fn dim(&self) -> usize {
        self.verts.len() - 1
    }
}

#[derive(Clone, Debug)]
pub struct SymmetricComplex {
    vertex_ids: Vec<VertexId>,
    vertex_values: Vec<Value>,
    simplices: Vec<Simplex>,
    lookup: BTreeMap<Vec<u32>, SimplexId>,
    /// Edges with covering cocycle value 1, by simplex id.
    odd_edges: BTreeSet<SimplexId>,
    /// Sorted distinct filtration values.
    levels: Vec<Value>,
    dimension: usize,
}

/// A face-closed (unless under validation) subset of the simplices of a
/// parent complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subcomplex {
    /// Sorted member simplex ids.
    pub members: Vec<SimplexId>,
}

impl Subcomplex {
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn mask(&self, c: &SymmetricComplex) -> Vec<bool> {
        let mut m = vec![false; c.simplex_count()];
        for &s in &self.members {
            m[s] = true;
        }
        m
    }

    pub fn contains(&self, s: SimplexId) -> bool {
        self.members.binary_search(&s).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subcomplex) -> bool {
        self.members.iter().all(|s| other.contains(*s))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuildError {
    NoVertices,
    DuplicateVertex(VertexId),
    UnknownVertex(VertexId),
    RepeatedVertexInSimplex(Vec<VertexId>),
    DimensionTooLarge(usize),
    CocycleOnNonEdge(VertexId, VertexId),
    EmptySimplex,
}

impl fmt::Display for BuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildError::NoVertices => write!(f, "no vertices"),
            BuildError::DuplicateVertex(v) => write!(f, "duplicate vertex {}", v),
            BuildError::UnknownVertex(v) => write!(f, "unknown vertex {}", v),
            BuildError::RepeatedVertexInSimplex(s) => {
                write!(f, "repeated vertex in simplex {:?}", s)
            }
            BuildError::DimensionTooLarge(d) => {
                write!(f, "dimension {} exceeds supported maximum {}", d, MAX_DIMENSION)
            }
            BuildError::CocycleOnNonEdge(a, b) => {
                write!(f, "cocycle value on non-edge ({}, {})", a, b)
            }
            BuildError::EmptySimplex => write!(f, "empty simplex"),
        }
    }
}

/// One invariant violation found by [`SymmetricComplex::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A simplex whose face is not part of the complex.
    FaceMissing {
        simplex: Vec<VertexId>,
        face: Vec<VertexId>,
    },
    /// A 2-simplex whose three edges do not sum to 0 under `w`.
    CocycleCondition { triangle: Vec<VertexId> },
    /// The same simplex listed twice.
    DuplicateSimplex { simplex: Vec<VertexId> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::FaceMissing { simplex, face } => {
                write!(f, "face {:?} of simplex {:?} is missing", face, simplex)
            }
            Violation::CocycleCondition { triangle } => {
                write!(f, "cocycle condition fails on triangle {:?}", triangle)
            }
            Violation::DuplicateSimplex { simplex } => {
                write!(f, "duplicate simplex {:?}", simplex)
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn sorted_internal(
    ids: &[VertexId],
    pos: &BTreeMap<VertexId, u32>,
) -> Result<Vec<u32>, BuildError> {
    let mut v = Vec::with_capacity(ids.len());
    for id in ids {
        v.push(*pos.get(id).ok_or(BuildError::UnknownVertex(*id))?);
    }
    v.sort_unstable();
    if v.windows(2).any(|w| w[0] == w[1]) {
        return Err(BuildError::RepeatedVertexInSimplex(ids.to_vec()));
    }
    Ok(v)
}

impl SymmetricComplex {
    /// Builds a complex from maximal simplices, closing under faces.
    pub fn from_maximal(
        vertices: Vec<(VertexId, Value)>,
        maximal: &[Vec<VertexId>],
        odd_edges: &[(VertexId, VertexId)],
    ) -> Result<Self, BuildError> {
        let mut closed: BTreeSet<Vec<VertexId>> = BTreeSet::new();
        for m in maximal {
            if m.is_empty() {
                return Err(BuildError::EmptySimplex);
            }
            if m.len() > MAX_DIMENSION + 1 {
                return Err(BuildError::DimensionTooLarge(m.len() - 1));
            }
            let n = m.len();
            for mask in 1u32..(1 << n) {
                let face: Vec<VertexId> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| m[i]).collect();
                closed.insert(face);
            }
        }
        // every vertex is a simplex even if it is in no maximal simplex
        for (id, _) in &vertices {
            closed.insert(vec![*id]);
        }
        let list: Vec<Vec<VertexId>> = closed.into_iter().collect();
        Self::from_parts(vertices, &list, odd_edges)
    }

    /// Builds a complex from an explicit simplex list without closing under
    /// faces. Invariants are checked by [`validate`](Self::validate), not
    /// here, so defective complexes can be constructed and reported on.
    pub fn from_parts(
        vertices: Vec<(VertexId, Value)>,
        simplices: &[Vec<VertexId>],
        odd_edges: &[(VertexId, VertexId)],
    ) -> Result<Self, BuildError> {
        if vertices.is_empty() {
            return Err(BuildError::NoVertices);
        }
        let mut vs = vertices;
        vs.sort_by(|a, b| a.0.cmp(&b.0));
        if vs.windows(2).any(|w| w[0].0 == w[1].0) {
            let dup = vs
                .windows(2)
                .find(|w| w[0].0 == w[1].0)
                .map(|w| w[0].0)
                .unwrap();
            return Err(BuildError::DuplicateVertex(dup));
        }
        let vertex_ids: Vec<VertexId> = vs.iter().map(|(id, _)| *id).collect();
        let vertex_values: Vec<Value> = vs.into_iter().map(|(_, v)| v).collect();
        let pos: BTreeMap<VertexId, u32> = vertex_ids
            .iter()
            .enumerate()
            .map(|(i, id)| (*id, i as u32))
            .collect();

        let mut levels: Vec<Value> = vertex_values.clone();
        levels.sort();
        levels.dedup();
        let vertex_level: Vec<LevelId> = vertex_values
            .iter()
            .map(|v| levels.binary_search(v).unwrap())
            .collect();

        // canonical simplex order: (dimension, lexicographic vertex list)
        let mut keys: Vec<Vec<u32>> = Vec::with_capacity(simplices.len() + vertex_ids.len());
        for s in simplices {
            if s.is_empty() {
                return Err(BuildError::EmptySimplex);
            }
            if s.len() > MAX_DIMENSION + 1 {
                return Err(BuildError::DimensionTooLarge(s.len() - 1));
            }
            keys.push(sorted_internal(s, &pos)?);
        }
        for i in 0..vertex_ids.len() {
            keys.push(vec![i as u32]);
        }
        keys.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        keys.dedup();

        let lookup: BTreeMap<Vec<u32>, SimplexId> = keys
            .iter()
            .enumerate()
            .map(|(i, k)| (k.clone(), i))
            .collect();

        let mut dimension = 0;
        let mut built: Vec<Simplex> = Vec::with_capacity(keys.len());
        for k in &keys {
            let dim = k.len() - 1;
            dimension = dimension.max(dim);
            let mut facets = Vec::with_capacity(if dim == 0 { 0 } else { dim + 1 });
            if dim > 0 {
                for drop in 0..k.len() {
                    let face: Vec<u32> = k
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != drop)
                        .map(|(_, v)| *v)
                        .collect();
                    facets.push(lookup.get(&face).copied());
                }
            }
            let level = k.iter().map(|&v| vertex_level[v as usize]).max().unwrap();
            built.push(Simplex {
                verts: k.clone(),
                facets,
                level,
            });
        }

        let mut odd = BTreeSet::new();
        for (a, b) in odd_edges {
            let key = sorted_internal(&[*a, *b], &pos)?;
            match lookup.get(&key) {
                Some(&id) => {
                    odd.insert(id);
                }
                None => return Err(BuildError::CocycleOnNonEdge(*a, *b)),
            }
        }

        Ok(SymmetricComplex {
            vertex_ids,
            vertex_values,
            simplices: built,
            lookup,
            odd_edges: odd,
            levels,
            dimension,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn simplex_count(&self) -> usize {
        self.simplices.len()
    }

    pub fn simplex(&self, id: SimplexId) -> &Simplex {
        &self.simplices[id]
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn vertex_ids(&self) -> &[VertexId] {
        &self.vertex_ids
    }

    pub fn vertex_values(&self) -> &[Value] {
        &self.vertex_values
    }

    pub fn vertex_value(&self, internal: u32) -> &Value {
        &self.vertex_values[internal as usize]
    }

    /// External ids of a simplex, ascending in internal order.
    pub fn external_verts(&self, id: SimplexId) -> Vec<VertexId> {
        self.simplices[id]
            .verts
            .iter()
            .map(|&v| self.vertex_ids[v as usize])
            .collect()
    }

    pub fn find_simplex(&self, external: &[VertexId]) -> Option<SimplexId> {
        let pos: BTreeMap<VertexId, u32> = self
            .vertex_ids
            .iter()
            .enumerate()
            .map(|(i, id)| (*id, i as u32))
            .collect();
        let key = sorted_internal(external, &pos).ok()?;
        self.lookup.get(&key).copied()
    }

    pub fn find_by_internal(&self, verts: &[u32]) -> Option<SimplexId> {
        self.lookup.get(verts).copied()
    }

    /// Sorted distinct filtration values.
    pub fn levels(&self) -> &[Value] {
        &self.levels
    }

    pub fn level_value(&self, level: LevelId) -> &Value {
        &self.levels[level]
    }

    pub fn entry_level(&self, id: SimplexId) -> LevelId {
        self.simplices[id].level
    }

    pub fn entry_value(&self, id: SimplexId) -> &Value {
        &self.levels[self.simplices[id].level]
    }

    /// Covering cocycle value of an edge simplex.
    pub fn cocycle(&self, edge: SimplexId) -> bool {
        self.odd_edges.contains(&edge)
    }

    /// Cocycle value between two internal vertices joined by an edge;
    /// 0 when both coincide.
    pub fn cocycle_between(&self, a: u32, b: u32) -> Option<bool> {
        if a == b {
            return Some(false);
        }
        let key = if a < b { vec![a, b] } else { vec![b, a] };
        self.lookup.get(&key).map(|id| self.odd_edges.contains(id))
    }

    pub fn odd_edges(&self) -> impl Iterator<Item = SimplexId> + '_ {
        self.odd_edges.iter().copied()
    }

    pub fn simplices_of_dim(&self, d: usize) -> Vec<SimplexId> {
        (0..self.simplices.len())
            .filter(|&i| self.simplices[i].dim() == d)
            .collect()
    }

    /// Checks every structural invariant and reports all violations.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        // duplicates cannot arise via constructors that dedupe, but
        // from_parts dedupes too; keep the check against lookup drift
        if self.lookup.len() != self.simplices.len() {
            for (i, s) in self.simplices.iter().enumerate() {
                if self.lookup.get(&s.verts) != Some(&i) {
                    violations.push(Violation::DuplicateSimplex {
                        simplex: self.external_verts(i),
                    });
                }
            }
        }
        for (i, s) in self.simplices.iter().enumerate() {
            for (drop, facet) in s.facets.iter().enumerate() {
                if facet.is_none() {
                    let face: Vec<VertexId> = s
                        .verts
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| *k != drop)
                        .map(|(_, v)| self.vertex_ids[*v as usize])
                        .collect();
                    violations.push(Violation::FaceMissing {
                        simplex: self.external_verts(i),
                        face,
                    });
                }
            }
        }
        for (i, s) in self.simplices.iter().enumerate() {
            if s.dim() != 2 {
                continue;
            }
            let [a, b, c] = [s.verts[0], s.verts[1], s.verts[2]];
            let mut parity = false;
            let mut complete = true;
            for (x, y) in [(a, b), (a, c), (b, c)] {
                match self.cocycle_between(x, y) {
                    Some(w) => parity ^= w,
                    None => complete = false,
                }
            }
            if complete && parity {
                violations.push(Violation::CocycleCondition {
                    triangle: self.external_verts(i),
                });
            }
        }
        ValidationReport { violations }
    }

    /// All simplices with entry level at most `t`; face-closed by the
    /// lower-star rule.
    pub fn sublevel(&self, t: &Value) -> Subcomplex {
        let cutoff = self.levels.partition_point(|l| l <= t);
        self.sublevel_below(cutoff)
    }

    /// Sublevel by level index: members have `level < cutoff`.
    pub fn sublevel_below(&self, cutoff: usize) -> Subcomplex {
        let members = (0..self.simplices.len())
            .filter(|&i| self.simplices[i].level < cutoff)
            .collect();
        Subcomplex { members }
    }

    pub fn full_subcomplex(&self) -> Subcomplex {
        Subcomplex {
            members: (0..self.simplices.len()).collect(),
        }
    }

    /// Deterministic total order on simplices: (entry level, dimension,
    /// lexicographic vertex list). Faces precede cofaces.
    pub fn filtration_order(&self) -> Vec<SimplexId> {
        let mut order: Vec<SimplexId> = (0..self.simplices.len()).collect();
        order.sort_by(|&a, &b| {
            let sa = &self.simplices[a];
            let sb = &self.simplices[b];
            sa.level
                .cmp(&sb.level)
                .then_with(|| sa.dim().cmp(&sb.dim()))
                .then_with(|| sa.verts.cmp(&sb.verts))
        });
        order
    }

    /// Checks that a subcomplex is closed under faces.
    pub fn is_face_closed(&self, sub: &Subcomplex) -> bool {
        let mask = sub.mask(self);
        sub.members.iter().all(|&s| {
            self.simplices[s]
                .facets
                .iter()
                .all(|f| matches!(f, Some(id) if mask[*id]))
        })
    }

    /// Closes a set of simplices under faces.
    pub fn face_closure(&self, seed: &[SimplexId]) -> Subcomplex {
        let mut mask = vec![false; self.simplices.len()];
        let mut stack: Vec<SimplexId> = seed.to_vec();
        while let Some(s) = stack.pop() {
            if mask[s] {
                continue;
            }
            mask[s] = true;
            for f in self.simplices[s].facets.iter().flatten() {
                stack.push(*f);
            }
        }
        Subcomplex {
            members: (0..self.simplices.len()).filter(|&i| mask[i]).collect(),
        }
    }

    /// Same complex with new vertex values (matched by position in
    /// ascending id order).
    pub fn with_values(&self, values: Vec<Value>) -> Result<Self, BuildError> {
        assert_eq!(values.len(), self.vertex_ids.len());
        let vertices: Vec<(VertexId, Value)> = self
            .vertex_ids
            .iter()
            .copied()
            .zip(values)
            .collect();
        let simplices: Vec<Vec<VertexId>> = (0..self.simplices.len())
            .map(|i| self.external_verts(i))
            .collect();
        let odd: Vec<(VertexId, VertexId)> = self
            .odd_edges
            .iter()
            .map(|&e| {
                let v = self.external_verts(e);
                (v[0], v[1])
            })
            .collect();
        Self::from_parts(vertices, &simplices, &odd)
    }

    /// The induced complex on a face-closed subcomplex, keeping external
    /// vertex ids, values and the restricted cocycle.
    pub fn restrict(&self, sub: &Subcomplex) -> Result<Self, BuildError> {
        let mut vert_set: BTreeSet<u32> = BTreeSet::new();
        for &s in &sub.members {
            vert_set.extend(self.simplices[s].verts.iter().copied());
        }
        let vertices: Vec<(VertexId, Value)> = vert_set
            .iter()
            .map(|&v| (self.vertex_ids[v as usize], self.vertex_values[v as usize].clone()))
            .collect();
        let simplices: Vec<Vec<VertexId>> = sub
            .members
            .iter()
            .map(|&s| self.external_verts(s))
            .collect();
        let odd: Vec<(VertexId, VertexId)> = self
            .odd_edges
            .iter()
            .filter(|e| sub.contains(**e))
            .map(|&e| {
                let v = self.external_verts(e);
                (v[0], v[1])
            })
            .collect();
        Self::from_parts(vertices, &simplices, &odd)
    }

    /// Maximal simplices (no coface), in canonical order.
    pub fn maximal_simplices(&self) -> Vec<SimplexId> {
        let mut has_coface = vec![false; self.simplices.len()];
        for s in &self.simplices {
            for f in s.facets.iter().flatten() {
                has_coface[*f] = true;
            }
        }
        (0..self.simplices.len())
            .filter(|&i| !has_coface[i])
            .collect()
    }

    /// Barycentric subdivision. New vertex values follow the lower-star
    /// rule (max over the subdivided simplex); the cocycle is pulled back
    /// so the induced double cover is isomorphic.
    pub fn subdivide(&self) -> Result<Self, BuildError> {
        if self.dimension > MAX_DIMENSION {
            return Err(BuildError::DimensionTooLarge(self.dimension));
        }
        // new vertex per old simplex, id = position in canonical order
        let new_id = |s: SimplexId| s as VertexId;
        let vertices: Vec<(VertexId, Value)> = (0..self.simplices.len())
            .map(|s| (new_id(s), self.entry_value(s).clone()))
            .collect();

        let mut maximal: Vec<Vec<VertexId>> = Vec::new();
        for m in self.maximal_simplices() {
            let verts = &self.simplices[m].verts;
            let n = verts.len();
            let mut perm: Vec<usize> = (0..n).collect();
            loop {
                // flag: prefixes of the permuted vertex list
                let mut chain = Vec::with_capacity(n);
                let mut prefix: Vec<u32> = Vec::with_capacity(n);
                for &p in &perm {
                    prefix.push(verts[p]);
                    let mut sorted = prefix.clone();
                    sorted.sort_unstable();
                    chain.push(new_id(self.lookup[&sorted]));
                }
                maximal.push(chain);
                if !next_permutation(&mut perm) {
                    break;
                }
            }
        }

        // pulled-back cocycle: for barycenters of sigma within tau, compare
        // the minimal representative vertices inside tau
        let rep = |s: SimplexId| self.simplices[s].verts[0];
        let mut odd: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
        for chain in &maximal {
            for i in 0..chain.len() {
                for j in (i + 1)..chain.len() {
                    let (si, sj) = (chain[i] as SimplexId, chain[j] as SimplexId);
                    let w = self
                        .cocycle_between(rep(si), rep(sj))
                        .expect("representatives of nested simplices share a simplex");
                    if w {
                        let (a, b) = (chain[i].min(chain[j]), chain[i].max(chain[j]));
                        odd.insert((a, b));
                    }
                }
            }
        }
        let odd: Vec<(VertexId, VertexId)> = odd.into_iter().collect();
        Self::from_maximal(vertices, &maximal, &odd)
    }
}

/// In-place lexicographic next permutation; false when wrapped.
fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// A 1-cochain over GF(2), supported on edges of a complex, together with
/// its dimension. Representatives must be cocycles.
#[derive(Clone, Debug)]
pub struct CochainClass {
    pub dim: usize,
    /// Supporting simplex ids (of dimension `dim`).
    pub support: BTreeSet<SimplexId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotACocycle;

impl fmt::Display for NotACocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "representative is not a cocycle on its complex")
    }
}

impl CochainClass {
    /// The covering class [w] of a complex.
    pub fn covering_class(c: &SymmetricComplex) -> CochainClass {
        CochainClass {
            dim: 1,
            support: c.odd_edges().collect(),
        }
    }

    /// Builds a 1-cochain from edge supports, checking the cocycle
    /// condition on every triangle.
    pub fn one_cocycle(
        c: &SymmetricComplex,
        edges: &[SimplexId],
    ) -> Result<CochainClass, NotACocycle> {
        let support: BTreeSet<SimplexId> = edges.iter().copied().collect();
        for (i, s) in c.simplices().iter().enumerate() {
            if s.dim() != 2 {
                continue;
            }
            let parity = s
                .facets
                .iter()
                .flatten()
                .filter(|f| support.contains(*f))
                .count()
                % 2;
            if parity == 1 {
                let _ = i;
                return Err(NotACocycle);
            }
        }
        Ok(CochainClass { dim: 1, support })
    }

    pub fn value_on(&self, s: SimplexId) -> bool {
        self.support.contains(&s)
    }
}

pub fn display_external(verts: &[VertexId]) -> String {
    let mut out = String::new();
    for (i, v) in verts.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(&alloc::format!("{}", v));
    }
    out
}
