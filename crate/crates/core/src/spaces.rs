//! Generators for the bundled spaces.
//!
//! Every space is produced upstairs as an antipodally symmetric complex
//! and passed through one quotient helper that assigns the covering
//! cocycle from a choice of representatives, so the construction cannot
//! drift out of sync with the cocycle convention. Circle quotients, the
//! six-vertex projective plane (icosahedron quotient), projective
//! three-space as a cube grid with antipodal boundary identification,
//! Rayleigh-quotient samplers on subdivided icospheres, and the
//! genus-three counterexample complex with its embedded witnesses.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::symcx::{BuildError, CochainClass, SimplexId, Subcomplex, SymmetricComplex, VertexId};
use crate::value::Value;

/// Filtration assignment for a generated space.
#[derive(Clone, Debug)]
pub enum FMode {
    Constant(Value),
    /// One value per quotient vertex, in ascending vertex-id order.
    PerVertex(Vec<Value>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenError {
    UnsupportedDimension(usize),
    ValueCountMismatch { expected: usize, got: usize },
    NonSymmetricMatrix,
    SubdivisionTooDeep(u32),
    /// The far level must exceed three times the hole level.
    BadRadii,
    MeshTooCoarse(i64),
    /// The antipodal identification does not produce a simplicial complex.
    NonSimplicialQuotient,
    Build(BuildError),
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::UnsupportedDimension(n) => {
                write!(f, "projective space generator supports n = 1, 2, 3, got {}", n)
            }
            GenError::ValueCountMismatch { expected, got } => {
                write!(f, "expected {} vertex values, got {}", expected, got)
            }
            GenError::NonSymmetricMatrix => write!(f, "matrix is not symmetric"),
            GenError::SubdivisionTooDeep(l) => {
                write!(f, "subdivision level {} exceeds supported maximum 6", l)
            }
            GenError::BadRadii => write!(f, "levels must satisfy 0 < r and R > 3r"),
            GenError::MeshTooCoarse(n) => {
                write!(f, "mesh half-width {} too coarse; the handle needs at least 3", n)
            }
            GenError::NonSimplicialQuotient => {
                write!(f, "antipodal identification is not simplicial")
            }
            GenError::Build(e) => write!(f, "{}", e),
        }
    }
}

impl From<BuildError> for GenError {
    fn from(e: BuildError) -> GenError {
        GenError::Build(e)
    }
}

/// Quotient of an antipodally symmetric complex by the involution.
///
/// `antipode` is an involution on upstairs vertex indices (fixed points
/// allowed: they are simply not identified). The quotient vertex keeps the
/// smaller index of its orbit as external id. The cocycle of a quotient
/// edge is 1 exactly when one endpoint of an upstairs representative edge
/// is a non-minimal orbit member: a cycle downstairs then has odd holonomy
/// iff its lift swaps the two sheets.
fn antipodal_quotient(
    values: &[Value],
    antipode: &[usize],
    maximal: &[Vec<usize>],
) -> Result<SymmetricComplex, GenError> {
    let n = values.len();
    assert_eq!(antipode.len(), n);
    for v in 0..n {
        assert_eq!(antipode[antipode[v]], v, "antipode must be an involution");
        assert_eq!(values[v], values[antipode[v]], "values must be symmetric");
    }
    let rep = |v: usize| v.min(antipode[v]);
    let parity = |v: usize| v != rep(v);

    let vertices: Vec<(VertexId, Value)> = (0..n)
        .filter(|&v| rep(v) == v)
        .map(|v| (v as VertexId, values[v].clone()))
        .collect();

    let mut down_maximal: BTreeSet<Vec<VertexId>> = BTreeSet::new();
    // downstairs edge -> (cocycle value, canonical upstairs edge)
    let mut edge_info: BTreeMap<(VertexId, VertexId), (bool, (usize, usize))> = BTreeMap::new();
    for s in maximal {
        let mut down: Vec<VertexId> = s.iter().map(|&v| rep(v) as VertexId).collect();
        down.sort_unstable();
        if down.windows(2).any(|w| w[0] == w[1]) {
            return Err(GenError::NonSimplicialQuotient);
        }
        down_maximal.insert(down);
        for i in 0..s.len() {
            for j in (i + 1)..s.len() {
                let (u, v) = (s[i], s[j]);
                let key = {
                    let (a, b) = (rep(u) as VertexId, rep(v) as VertexId);
                    (a.min(b), a.max(b))
                };
                let w = parity(u) ^ parity(v);
                // the upstairs edge and its antipodal image are the same
                // downstairs edge; any other coincidence is a gluing defect
                let canon = {
                    let e = (u.min(v), u.max(v));
                    let (au, av) = (antipode[u], antipode[v]);
                    let ae = (au.min(av), au.max(av));
                    e.min(ae)
                };
                match edge_info.get(&key) {
                    None => {
                        edge_info.insert(key, (w, canon));
                    }
                    Some(&(w0, canon0)) => {
                        if w0 != w || canon0 != canon {
                            return Err(GenError::NonSimplicialQuotient);
                        }
                    }
                }
            }
        }
    }

    let odd: Vec<(VertexId, VertexId)> = edge_info
        .iter()
        .filter(|(_, (w, _))| *w)
        .map(|(&(a, b), _)| (a, b))
        .collect();
    let maximal_list: Vec<Vec<VertexId>> = down_maximal.into_iter().collect();
    Ok(SymmetricComplex::from_maximal(vertices, &maximal_list, &odd)?)
}

fn apply_fmode(c: SymmetricComplex, f: FMode) -> Result<SymmetricComplex, GenError> {
    match f {
        FMode::Constant(v) => {
            let values = vec![v; c.vertex_count()];
            Ok(c.with_values(values)?)
        }
        FMode::PerVertex(values) => {
            if values.len() != c.vertex_count() {
                return Err(GenError::ValueCountMismatch {
                    expected: c.vertex_count(),
                    got: values.len(),
                });
            }
            Ok(c.with_values(values)?)
        }
    }
}

// ---------------------------------------------------------------------------
// icosahedron and icosphere

type Coord = [Value; 3];

fn dist2(a: &Coord, b: &Coord) -> Value {
    let mut acc = Value::zero();
    for i in 0..3 {
        let d = &a[i] - &b[i];
        acc = acc + &d * &d;
    }
    acc
}

fn neg_coord(a: &Coord) -> Coord {
    [-&a[0], -&a[1], -&a[2]]
}

/// Icosahedron with rational coordinates: cyclic permutations of
/// (0, ±1, ±φ̂) with φ̂ = 1597/987 (a Fibonacci convergent). Faces are the
/// triangles of pairwise squared distance below 7 — exact edges sit at 4,
/// non-edges at ≈10.5, so the rational perturbation cannot flip any test.
fn icosahedron() -> (Vec<Coord>, Vec<[usize; 3]>) {
    let phi = Value::from_ratio(1597, 987);
    let mut verts: Vec<Coord> = Vec::with_capacity(12);
    for axis in 0..3 {
        for s1 in [1i64, -1] {
            for s2 in [1i64, -1] {
                let mut c = [Value::zero(), Value::zero(), Value::zero()];
                c[(axis + 1) % 3] = Value::from_int(s1);
                c[(axis + 2) % 3] = Value::from_int(s2) * phi.clone();
                verts.push(c);
            }
        }
    }
    let seven = Value::from_int(7);
    let adj = |i: usize, j: usize| dist2(&verts[i], &verts[j]) < seven;
    let mut faces = Vec::with_capacity(20);
    for i in 0..12 {
        for j in (i + 1)..12 {
            if !adj(i, j) {
                continue;
            }
            for k in (j + 1)..12 {
                if adj(i, k) && adj(j, k) {
                    faces.push([i, j, k]);
                }
            }
        }
    }
    debug_assert_eq!(faces.len(), 20);
    (verts, faces)
}

/// One midpoint-subdivision step: each triangle splits into four. Old
/// vertices are kept verbatim (no sphere projection is needed; every
/// consumer of the coordinates is scale-invariant along rays).
fn midpoint_subdivide(verts: &mut Vec<Coord>, faces: &[[usize; 3]]) -> Vec<[usize; 3]> {
    let half = Value::from_ratio(1, 2);
    let mut mid: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut out = Vec::with_capacity(faces.len() * 4);
    for f in faces {
        let mut m = [0usize; 3];
        for (k, &(i, j)) in [(f[0], f[1]), (f[1], f[2]), (f[0], f[2])].iter().enumerate() {
            let key = (i.min(j), i.max(j));
            m[k] = *mid.entry(key).or_insert_with(|| {
                let p = [
                    (&verts[key.0][0] + &verts[key.1][0]) * half.clone(),
                    (&verts[key.0][1] + &verts[key.1][1]) * half.clone(),
                    (&verts[key.0][2] + &verts[key.1][2]) * half.clone(),
                ];
                verts.push(p);
                verts.len() - 1
            });
        }
        out.push([f[0], m[0], m[2]]);
        out.push([f[1], m[0], m[1]]);
        out.push([f[2], m[1], m[2]]);
        out.push([m[0], m[1], m[2]]);
    }
    out
}

fn antipode_by_coords(verts: &[Coord]) -> Vec<usize> {
    let index: BTreeMap<&Coord, usize> = verts.iter().enumerate().map(|(i, c)| (c, i)).collect();
    verts
        .iter()
        .map(|c| *index.get(&neg_coord(c)).expect("vertex set is symmetric"))
        .collect()
}

// ---------------------------------------------------------------------------
// cube grid (doubled integer coordinates)
//
// Corners have all coordinates even, cube centers all odd, face centers
// exactly one even. Each unit cube splits into 24 tetrahedra: cone the
// cube center over the four triangles of each of its six faces. The
// decomposition is symmetric under negation, so the antipodal boundary
// identification is well defined on it.

struct Grid {
    coords: Vec<[i64; 3]>,
    index: BTreeMap<[i64; 3], usize>,
    tets: Vec<[usize; 4]>,
    /// Doubled half-width: boundary planes sit at ±half.
    half: i64,
}

impl Grid {
    fn vertex(&mut self, p: [i64; 3]) -> usize {
        if let Some(&i) = self.index.get(&p) {
            return i;
        }
        let i = self.coords.len();
        self.coords.push(p);
        self.index.insert(p, i);
        i
    }
}

fn face_corners(m: [i64; 3], axis: usize) -> [[i64; 3]; 4] {
    let b = (axis + 1) % 3;
    let c = (axis + 2) % 3;
    let mut out = [[0i64; 3]; 4];
    for (k, (t, u)) in [(-1i64, -1i64), (-1, 1), (1, 1), (1, -1)].iter().enumerate() {
        let mut p = m;
        p[b] += t;
        p[c] += u;
        out[k] = p;
    }
    out
}

fn build_grid(n: i64) -> Grid {
    let mut g = Grid {
        coords: Vec::new(),
        index: BTreeMap::new(),
        tets: Vec::new(),
        half: 2 * n,
    };
    let mut centers = Vec::new();
    let mut c = [-2 * n + 1; 3];
    loop {
        centers.push(c);
        if c[2] < 2 * n - 1 {
            c[2] += 2;
        } else if c[1] < 2 * n - 1 {
            c[2] = -2 * n + 1;
            c[1] += 2;
        } else if c[0] < 2 * n - 1 {
            c[2] = -2 * n + 1;
            c[1] = -2 * n + 1;
            c[0] += 2;
        } else {
            break;
        }
    }
    for c in centers {
        let ci = g.vertex(c);
        for axis in 0..3 {
            for s in [-1i64, 1] {
                let mut m = c;
                m[axis] += s;
                let mi = g.vertex(m);
                let corners = face_corners(m, axis);
                let ids: Vec<usize> = corners.iter().map(|&p| g.vertex(p)).collect();
                for k in 0..4 {
                    g.tets.push([ci, mi, ids[k], ids[(k + 1) % 4]]);
                }
            }
        }
    }
    g
}

fn grid_antipode(g: &Grid) -> Vec<usize> {
    g.coords
        .iter()
        .enumerate()
        .map(|(i, p)| {
            if p.iter().any(|&x| x.abs() == g.half) {
                g.index[&[-p[0], -p[1], -p[2]]]
            } else {
                i
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// generators

/// Quotient circle: an n-cycle whose closing edge carries the nontrivial
/// cocycle, modeling the antipodal quotient of a 2n-gon.
fn gen_circle(values: Vec<Value>) -> Result<SymmetricComplex, GenError> {
    if values.len() < 3 {
        return Err(GenError::ValueCountMismatch {
            expected: 3,
            got: values.len(),
        });
    }
    let n = values.len() as u32;
    let vertices: Vec<(VertexId, Value)> = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| (i as VertexId, v))
        .collect();
    let edges: Vec<Vec<VertexId>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    Ok(SymmetricComplex::from_maximal(vertices, &edges, &[(0, n - 1)])?)
}

/// Projective space of dimension 1, 2 or 3 with the generating covering
/// class: a quotient circle, the icosahedron quotient, or a cube with
/// antipodal boundary identification.
pub fn gen_rp(n: usize, f: FMode) -> Result<SymmetricComplex, GenError> {
    match n {
        1 => {
            let values = match f {
                FMode::Constant(v) => vec![v; 3],
                FMode::PerVertex(vs) => vs,
            };
            gen_circle(values)
        }
        2 => {
            let (verts, faces) = icosahedron();
            let antipode = antipode_by_coords(&verts);
            let values = vec![Value::zero(); verts.len()];
            let maximal: Vec<Vec<usize>> = faces.iter().map(|f| f.to_vec()).collect();
            let c = antipodal_quotient(&values, &antipode, &maximal)?;
            apply_fmode(c, f)
        }
        3 => {
            // half-width 2: with a single cube layer the origin would be
            // adjacent to both members of a boundary antipodal pair and
            // the quotient would not be simplicial
            let g = build_grid(2);
            let antipode = grid_antipode(&g);
            let values = vec![Value::zero(); g.coords.len()];
            let maximal: Vec<Vec<usize>> = g.tets.iter().map(|t| t.to_vec()).collect();
            let c = antipodal_quotient(&values, &antipode, &maximal)?;
            apply_fmode(c, f)
        }
        other => Err(GenError::UnsupportedDimension(other)),
    }
}

pub type Mat3 = [[Value; 3]; 3];

/// Rayleigh-quotient sampler: the icosphere at the given subdivision
/// level, quotiented antipodally, with f([x]) = xᵀAx / xᵀx evaluated in
/// exact arithmetic at the mesh directions.
pub fn gen_rayleigh(a: &Mat3, level: u32) -> Result<SymmetricComplex, GenError> {
    for i in 0..3 {
        for j in (i + 1)..3 {
            if a[i][j] != a[j][i] {
                return Err(GenError::NonSymmetricMatrix);
            }
        }
    }
    if level > 6 {
        return Err(GenError::SubdivisionTooDeep(level));
    }
    let (mut verts, mut faces) = icosahedron();
    for _ in 0..level {
        faces = midpoint_subdivide(&mut verts, &faces);
    }
    let antipode = antipode_by_coords(&verts);
    let values: Vec<Value> = verts
        .iter()
        .map(|x| {
            let mut num = Value::zero();
            let mut den = Value::zero();
            for i in 0..3 {
                den = den + &x[i] * &x[i];
                for j in 0..3 {
                    num = num + &(&a[i][j] * &x[i]) * &x[j];
                }
            }
            num / den
        })
        .collect();
    let maximal: Vec<Vec<usize>> = faces.iter().map(|f| f.to_vec()).collect();
    antipodal_quotient(&values, &antipode, &maximal)
}

/// Flat 7-vertex torus (triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7)
/// with trivial covering cocycle; the non-quotient control space.
pub fn gen_torus(f: FMode) -> Result<SymmetricComplex, GenError> {
    let mut tris: Vec<Vec<VertexId>> = Vec::with_capacity(14);
    for i in 0..7u32 {
        tris.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        tris.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    let vertices: Vec<(VertexId, Value)> = (0..7).map(|i| (i, Value::zero())).collect();
    let c = SymmetricComplex::from_maximal(vertices, &tris, &[])?;
    apply_fmode(c, f)
}

/// A 1-cocycle on the 7-vertex torus generating one coordinate class:
/// the indicator of the edges that wrap around the vertex cycle
/// (label difference at least 4). Its cup square vanishes.
pub fn torus_coordinate_class(c: &SymmetricComplex) -> CochainClass {
    let edges: Vec<SimplexId> = c
        .simplices_of_dim(1)
        .into_iter()
        .filter(|&e| {
            let v = c.external_verts(e);
            (v[1] as i64 - v[0] as i64).abs() >= 4
        })
        .collect();
    CochainClass::one_cocycle(c, &edges).expect("wrap indicator is a cocycle")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DyckMode {
    /// Designed levels {0, r, R}: exact sublevel homotopy types.
    Combinatorial,
    /// Distance of each vertex to the surface, minimized over the two
    /// antipodal representatives, rounded to 9 decimals.
    Metric,
}

#[derive(Clone, Debug)]
pub struct DyckParams {
    /// Level at which the two hole caps enter (the tube radius).
    pub r: Value,
    /// Level of everything away from the surface; must exceed 3r.
    pub big_r: Value,
    pub mode: DyckMode,
    /// Grid half-width in unit cubes; at least 3 so the handle and its
    /// tunnel are resolved away from the boundary.
    pub mesh: i64,
}

impl DyckParams {
    pub fn combinatorial() -> DyckParams {
        DyckParams {
            r: Value::from_int(1),
            big_r: Value::from_int(4),
            mode: DyckMode::Combinatorial,
            mesh: 3,
        }
    }

    pub fn metric() -> DyckParams {
        DyckParams {
            mode: DyckMode::Metric,
            ..DyckParams::combinatorial()
        }
    }
}

#[derive(Clone)]
pub struct DyckFixture {
    pub complex: SymmetricComplex,
    /// The genus-three surface, present from level 0.
    pub dyck_witness: Subcomplex,
    /// The equatorial projective plane, complete exactly at `r_level`.
    pub rp2_witness: Subcomplex,
    pub r_level: Value,
}

/// Squared distance (in doubled coordinates) from a grid point to an
/// axis-aligned unit square given by its face center.
fn square_dist2(p: [i64; 3], m: [i64; 3], axis: usize) -> i64 {
    let mut acc = 0i64;
    for i in 0..3 {
        let d = if i == axis {
            p[i] - m[i]
        } else {
            (p[i] - m[i]).abs().saturating_sub(1).max(0)
        };
        acc += d * d;
    }
    acc
}

fn face_axis(m: [i64; 3]) -> usize {
    (0..3).find(|&i| m[i] % 2 == 0).expect("face center has one even coordinate")
}

/// The counterexample complex: projective three-space containing the
/// genus-three surface (the equatorial plane with two square holes capped
/// by a one-cube-high arch) at level 0, with the plane completed across
/// the holes exactly at the middle level.
pub fn gen_dyck(params: &DyckParams) -> Result<DyckFixture, GenError> {
    let three_r = &(&params.r + &params.r) + &params.r;
    if params.r.is_negative() || params.r.is_zero() || params.big_r <= three_r {
        return Err(GenError::BadRadii);
    }
    if params.mesh < 3 {
        return Err(GenError::MeshTooCoarse(params.mesh));
    }
    let n = params.mesh;
    let g = build_grid(n);
    let antipode = grid_antipode(&g);

    // surface squares by face center, doubled coordinates
    let q1 = [-1i64, 1, 0];
    let q2 = [3i64, 1, 0];
    let mut plane: Vec<[i64; 3]> = Vec::new();
    let mut x = -2 * n + 1;
    while x <= 2 * n - 1 {
        let mut y = -2 * n + 1;
        while y <= 2 * n - 1 {
            plane.push([x, y, 0]);
            y += 2;
        }
        x += 2;
    }
    // the arch: two pillars over the holes plus a three-cube lintel,
    // leaving an open tunnel under the middle
    let arch_cubes: [[i64; 3]; 5] = [[-1, 1, 1], [3, 1, 1], [-1, 1, 3], [1, 1, 3], [3, 1, 3]];
    let mut shell_count: BTreeMap<[i64; 3], u32> = BTreeMap::new();
    for c in arch_cubes {
        for axis in 0..3 {
            for s in [-1i64, 1] {
                let mut m = c;
                m[axis] += s;
                *shell_count.entry(m).or_insert(0) += 1;
            }
        }
    }
    let handle: Vec<[i64; 3]> = shell_count
        .iter()
        .filter(|(m, &cnt)| cnt == 1 && **m != q1 && **m != q2)
        .map(|(&m, _)| m)
        .collect();

    let dyck_squares: Vec<[i64; 3]> = plane
        .iter()
        .copied()
        .filter(|&m| m != q1 && m != q2)
        .chain(handle.iter().copied())
        .collect();
    let rp2_squares: Vec<[i64; 3]> = plane.clone();

    // vertex values per mode
    let values: Vec<Value> = match params.mode {
        DyckMode::Combinatorial => {
            let mut on_surface: BTreeSet<[i64; 3]> = BTreeSet::new();
            for &m in &dyck_squares {
                on_surface.insert(m);
                for p in face_corners(m, face_axis(m)) {
                    on_surface.insert(p);
                }
            }
            g.coords
                .iter()
                .map(|&p| {
                    if on_surface.contains(&p) {
                        Value::zero()
                    } else if p == q1 || p == q2 {
                        params.r.clone()
                    } else {
                        params.big_r.clone()
                    }
                })
                .collect()
        }
        DyckMode::Metric => {
            let dist2_to_surface = |p: [i64; 3]| -> i64 {
                dyck_squares
                    .iter()
                    .map(|&m| square_dist2(p, m, face_axis(m)))
                    .min()
                    .expect("surface is nonempty")
            };
            g.coords
                .iter()
                .map(|&p| {
                    let mut d2 = dist2_to_surface(p);
                    if p.iter().any(|&x| x.abs() == g.half) {
                        d2 = d2.min(dist2_to_surface([-p[0], -p[1], -p[2]]));
                    }
                    // doubled coordinates: halve the distance
                    Value::from_ratio(d2, 4).sqrt_round(9)
                })
                .collect()
        }
    };

    let maximal: Vec<Vec<usize>> = g.tets.iter().map(|t| t.to_vec()).collect();
    let complex = antipodal_quotient(&values, &antipode, &maximal)?;

    // witnesses: collect the downstairs triangles of each square and close
    let rep = |v: usize| v.min(antipode[v]);
    let ext = |p: [i64; 3]| rep(g.index[&p]) as VertexId;
    let collect = |squares: &[[i64; 3]]| -> Subcomplex {
        let mut tris: Vec<SimplexId> = Vec::new();
        for &m in squares {
            let corners = face_corners(m, face_axis(m));
            for k in 0..4 {
                let t = [ext(m), ext(corners[k]), ext(corners[(k + 1) % 4])];
                tris.push(complex.find_simplex(&t).expect("surface triangle exists"));
            }
        }
        tris.sort_unstable();
        tris.dedup();
        complex.face_closure(&tris)
    };
    let dyck_witness = collect(&dyck_squares);
    let rp2_witness = collect(&rp2_squares);
    let r_level = match params.mode {
        DyckMode::Combinatorial => params.r.clone(),
        DyckMode::Metric => Value::from_ratio(1, 2),
    };
    Ok(DyckFixture {
        complex,
        dyck_witness,
        rp2_witness,
        r_level,
    })
}
