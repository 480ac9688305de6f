//! Detectors for levels that matter beyond the index sweep.
//!
//! Three strengths of evidence, kept apart so consumers never conflate
//! them: candidate levels (homology of a sublevel changes — necessary
//! only), certified levels (the rank of sublevel homology into the total
//! space jumps — a homotopy pulling the larger sublevel into the smaller
//! would factor that map, so a jump is a genuine obstruction), and
//! certificates (an embedded closed surface at a level, whose class feeds
//! the degree obstruction between two bracketing levels).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::homology::PersistenceDiagram;
use crate::symcx::{SimplexId, Subcomplex, SymmetricComplex, VertexId};
use crate::value::Value;
use crate::z2::BitMatrix;

/// Sorted distinct levels at which any persistence bar is born or dies:
/// the only levels where sublevel homology can change. Necessary-condition
/// screen only.
pub fn homology_critical_values(d: &PersistenceDiagram) -> Vec<Value> {
    let mut vals: Vec<Value> = Vec::new();
    for b in &d.bars {
        vals.push(b.birth.clone());
        if let Some(death) = &b.death {
            vals.push(death.clone());
        }
    }
    vals.sort();
    vals.dedup();
    vals
}

/// All (dimension, level) pairs where the essential rank jumps. Each such
/// level is certified: no homotopy through the ambient space can bring the
/// sublevel just above it into any sublevel below it.
pub fn certified_weak_significant(d: &PersistenceDiagram) -> Vec<(usize, Value)> {
    let mut out: Vec<(usize, Value)> = d
        .bars
        .iter()
        .filter(|b| b.death.is_none())
        .map(|b| (b.dim, b.birth.clone()))
        .collect();
    out.sort();
    out.dedup();
    out
}

#[derive(Clone, Debug, Default)]
pub struct SignificanceReport {
    /// Levels where sublevel homology changes (necessary condition).
    pub candidates: Vec<Value>,
    /// (dimension, level) pairs certified by an essential-rank jump.
    pub certified: Vec<(usize, Value)>,
}

impl SignificanceReport {
    pub fn from_diagram(d: &PersistenceDiagram) -> SignificanceReport {
        SignificanceReport {
            candidates: homology_critical_values(d),
            certified: certified_weak_significant(d),
        }
    }
}

/// Homeomorphism type of a closed connected surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceClass {
    pub euler_characteristic: i64,
    pub orientable: bool,
    /// Orientable genus g with χ = 2 - 2g, or non-orientable genus
    /// (crosscap number) g with χ = 2 - g.
    pub genus: u32,
}

impl SurfaceClass {
    pub fn new(euler_characteristic: i64, orientable: bool) -> SurfaceClass {
        assert!(euler_characteristic <= 2);
        assert!(!orientable || euler_characteristic % 2 == 0);
        let genus = if orientable {
            (2 - euler_characteristic) / 2
        } else {
            2 - euler_characteristic
        } as u32;
        SurfaceClass {
            euler_characteristic,
            orientable,
            genus,
        }
    }

    /// Genus on the common non-orientable scale (orientable g counts as
    /// 2g crosscaps); the scale on which the degree obstruction compares.
    pub fn nonorientable_scale(&self) -> u32 {
        if self.orientable {
            2 * self.genus
        } else {
            self.genus
        }
    }
}

/// Why a subcomplex is not a closed connected surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurfaceError {
    EmptyWitness,
    /// A member simplex that is neither a triangle nor a face of one.
    NotPure(Vec<VertexId>),
    NotFaceClosed,
    /// An edge contained in a number of triangles other than two.
    EdgeDegree { edge: Vec<VertexId>, count: usize },
    /// The triangles around a vertex do not close into a single fan.
    LinkBroken { vertex: VertexId },
    Disconnected,
}

impl fmt::Display for SurfaceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceError::EmptyWitness => write!(f, "witness is empty"),
            SurfaceError::NotPure(s) => {
                write!(f, "simplex {:?} is not a face of any triangle", s)
            }
            SurfaceError::NotFaceClosed => write!(f, "witness is not closed under faces"),
            SurfaceError::EdgeDegree { edge, count } => {
                write!(f, "edge {:?} lies in {} triangles, expected 2", edge, count)
            }
            SurfaceError::LinkBroken { vertex } => {
                write!(f, "link of vertex {} is not a single cycle", vertex)
            }
            SurfaceError::Disconnected => write!(f, "surface is not connected"),
        }
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

/// Checks that a pure 2-dimensional subcomplex is a closed connected
/// surface and classifies it: Euler characteristic by count, orientability
/// by propagating a coherent triangle orientation across shared edges.
pub fn classify_surface(
    c: &SymmetricComplex,
    sub: &Subcomplex,
) -> Result<SurfaceClass, SurfaceError> {
    if sub.is_empty() {
        return Err(SurfaceError::EmptyWitness);
    }
    if !c.is_face_closed(sub) {
        return Err(SurfaceError::NotFaceClosed);
    }
    let mut vertices: Vec<SimplexId> = Vec::new();
    let mut edges: Vec<SimplexId> = Vec::new();
    let mut triangles: Vec<SimplexId> = Vec::new();
    for &s in &sub.members {
        match c.simplex(s).dim() {
            0 => vertices.push(s),
            1 => edges.push(s),
            2 => triangles.push(s),
            _ => return Err(SurfaceError::NotPure(c.external_verts(s))),
        }
    }

    // purity: every vertex and edge must lie under a member triangle
    let mut covered: BTreeSet<SimplexId> = BTreeSet::new();
    for &t in &triangles {
        for e in c.simplex(t).facets.iter().flatten() {
            covered.insert(*e);
            for v in c.simplex(*e).facets.iter().flatten() {
                covered.insert(*v);
            }
        }
    }
    for &s in vertices.iter().chain(edges.iter()) {
        if !covered.contains(&s) {
            return Err(SurfaceError::NotPure(c.external_verts(s)));
        }
    }

    // every edge in exactly two triangles
    let mut edge_tris: BTreeMap<SimplexId, Vec<usize>> = BTreeMap::new();
    for (ti, &t) in triangles.iter().enumerate() {
        for e in c.simplex(t).facets.iter().flatten() {
            edge_tris.entry(*e).or_default().push(ti);
        }
    }
    for &e in &edges {
        let count = edge_tris.get(&e).map_or(0, |v| v.len());
        if count != 2 {
            return Err(SurfaceError::EdgeDegree {
                edge: c.external_verts(e),
                count,
            });
        }
    }

    // each vertex link must be one cycle: with all edge degrees equal to
    // two this reduces to the triangles around the vertex being connected
    // through shared incident edges
    let mut vert_tris: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (ti, &t) in triangles.iter().enumerate() {
        for &v in &c.simplex(t).verts {
            vert_tris.entry(v).or_default().push(ti);
        }
    }
    for (&v, tris) in &vert_tris {
        let local: BTreeMap<usize, usize> =
            tris.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let mut dsu = Dsu::new(tris.len());
        for (_, pair) in edge_tris.iter().filter(|(&e, _)| {
            c.simplex(e).verts.contains(&v)
        }) {
            if pair.len() == 2 {
                if let (Some(&a), Some(&b)) = (local.get(&pair[0]), local.get(&pair[1])) {
                    dsu.union(a, b);
                }
            }
        }
        let root = dsu.find(0);
        if (1..tris.len()).any(|i| dsu.find(i) != root) {
            return Err(SurfaceError::LinkBroken {
                vertex: c.vertex_ids()[v as usize],
            });
        }
    }

    // global connectivity across shared edges
    let mut dsu = Dsu::new(triangles.len());
    for pair in edge_tris.values() {
        if pair.len() == 2 {
            dsu.union(pair[0], pair[1]);
        }
    }
    let root = dsu.find(0);
    if (1..triangles.len()).any(|i| dsu.find(i) != root) {
        return Err(SurfaceError::Disconnected);
    }

    // orientability: flag per triangle (false = ascending vertex order);
    // two triangles are compatible when they induce opposite directions on
    // the shared edge. The ascending triangle (a,b,c) traverses edges
    // a->b, b->c forward and (a,c) backward.
    let base_dir = |t: SimplexId, e: SimplexId| -> bool {
        let pos = c
            .simplex(t)
            .facets
            .iter()
            .position(|f| *f == Some(e))
            .expect("edge belongs to triangle");
        pos == 1 // facets[1] drops the middle vertex, leaving (a,c)
    };
    let mut flag: Vec<Option<bool>> = vec![None; triangles.len()];
    let mut orientable = true;
    'components: for start in 0..triangles.len() {
        if flag[start].is_some() {
            continue;
        }
        flag[start] = Some(false);
        let mut stack = vec![start];
        while let Some(ti) = stack.pop() {
            let o = flag[ti].unwrap();
            for e in c.simplex(triangles[ti]).facets.iter().flatten() {
                let pair = &edge_tris[e];
                let tj = if pair[0] == ti { pair[1] } else { pair[0] };
                let want = o ^ base_dir(triangles[ti], *e) ^ base_dir(triangles[tj], *e) ^ true;
                match flag[tj] {
                    None => {
                        flag[tj] = Some(want);
                        stack.push(tj);
                    }
                    Some(have) if have != want => {
                        orientable = false;
                        break 'components;
                    }
                    Some(_) => {}
                }
            }
        }
    }

    let chi = vertices.len() as i64 - edges.len() as i64 + triangles.len() as i64;
    Ok(SurfaceClass::new(chi, orientable))
}

/// A claimed embedded surface at a level, to be verified independently.
#[derive(Clone, Debug)]
pub struct SurfaceCertificate {
    pub witness: Subcomplex,
    pub level: Value,
    pub claimed_class: SurfaceClass,
    pub claims_essential: bool,
}

/// Outcome of the three independent certificate checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateVerdict {
    /// The witness lies inside the sublevel at the claimed level.
    pub containment: bool,
    /// The witness classifies as the claimed surface; `None` carries the
    /// reason it is not a closed surface at all.
    pub classification: Result<bool, SurfaceError>,
    /// Whether the witness 2-cycle being non-bounding in the full complex
    /// agrees with the certificate's claim.
    pub essentiality: bool,
}

impl CertificateVerdict {
    pub fn all_pass(&self) -> bool {
        self.containment && self.classification == Ok(true) && self.essentiality
    }
}

/// Checks a surface certificate against its complex: containment in the
/// claimed sublevel, surface classification, and GF(2) essentiality of the
/// witness 2-cycle in the full complex.
pub fn verify_surface_certificate(
    c: &SymmetricComplex,
    cert: &SurfaceCertificate,
) -> Result<CertificateVerdict, SurfaceError> {
    if !c.is_face_closed(&cert.witness) {
        return Err(SurfaceError::NotFaceClosed);
    }
    let sublevel = c.sublevel(&cert.level);
    let containment = cert.witness.is_subset_of(&sublevel);
    let classification = classify_surface(c, &cert.witness).map(|cl| cl == cert.claimed_class);

    // the witness triangles sum to a 2-cycle; essential = not a boundary
    // of any 3-chain of the full complex
    let triangles = c.simplices_of_dim(2);
    let tri_index: BTreeMap<SimplexId, u32> = triangles
        .iter()
        .enumerate()
        .map(|(i, &t)| (t, i as u32))
        .collect();
    let z: Vec<u32> = cert
        .witness
        .members
        .iter()
        .filter(|&&s| c.simplex(s).dim() == 2)
        .map(|s| tri_index[s])
        .collect();
    let mut boundary = BitMatrix::new(triangles.len());
    for &tet in &c.simplices_of_dim(3) {
        let mut col: Vec<u32> = c
            .simplex(tet)
            .facets
            .iter()
            .map(|f| tri_index[&f.expect("valid complex")])
            .collect();
        col.sort_unstable();
        boundary.push_col(col);
    }
    let is_cycle = {
        // edge-incidence parity of the witness 2-chain must vanish
        let mut parity: BTreeMap<SimplexId, bool> = BTreeMap::new();
        for &s in &cert.witness.members {
            if c.simplex(s).dim() == 2 {
                for e in c.simplex(s).facets.iter().flatten() {
                    *parity.entry(*e).or_default() ^= true;
                }
            }
        }
        parity.values().all(|&p| !p)
    };
    let bounding = !z.is_empty() && boundary.echelonize().solvable(&z);
    let essential = is_cycle && !z.is_empty() && !bounding;
    Ok(CertificateVerdict {
        containment,
        classification,
        essentiality: essential == cert.claims_essential,
    })
}

/// Whether the genus gap alone rules out a mod-2-degree-1 map from
/// `source` to `target`: true iff the target's crosscap-scale genus
/// strictly exceeds the source's.
pub fn degree_obstruction(source: &SurfaceClass, target: &SurfaceClass) -> bool {
    target.nonorientable_scale() > source.nonorientable_scale()
}
