//! Total variation, medians, and the Cheeger constant on weighted graphs.
//!
//! The second min-max value of the normalized total-variation energy
//! equals the Cheeger constant. Both sides are realized here: a brute
//! subset oracle for the constant, and the loop-of-functions mechanism
//! (constant offsets through the median) whose maximal energy certifies
//! the upper bound. All comparisons are exact rationals.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::value::Value;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheegerError {
    NoVertices,
    SelfLoop(u32),
    UnknownVertex(u32),
    DuplicateEdge(u32, u32),
    NonPositiveWeight(u32, u32),
    NonPositiveMeasure(u32),
    /// Vertex measures must sum to one.
    MeasureNotNormalized,
    NotConnected,
    /// Brute-force subset search is capped at 24 vertices.
    TooLarge(usize),
    /// A single-vertex graph has no cuts.
    NoProperSubsets,
    LengthMismatch { expected: usize, got: usize },
    ConstantFunction,
    /// Zero must lie in the median interval.
    MedianNotZero,
    NormNotOne,
    EmptyPath,
}

impl fmt::Display for CheegerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheegerError::NoVertices => write!(f, "graph has no vertices"),
            CheegerError::SelfLoop(v) => write!(f, "self-loop at vertex {}", v),
            CheegerError::UnknownVertex(v) => write!(f, "unknown vertex {}", v),
            CheegerError::DuplicateEdge(u, v) => write!(f, "duplicate edge ({}, {})", u, v),
            CheegerError::NonPositiveWeight(u, v) => {
                write!(f, "edge ({}, {}) has non-positive weight", u, v)
            }
            CheegerError::NonPositiveMeasure(v) => {
                write!(f, "vertex {} has non-positive measure", v)
            }
            CheegerError::MeasureNotNormalized => write!(f, "vertex measures must sum to 1"),
            CheegerError::NotConnected => write!(f, "graph is not connected"),
            CheegerError::TooLarge(n) => {
                write!(f, "{} vertices exceed the brute-force cap of 24", n)
            }
            CheegerError::NoProperSubsets => {
                write!(f, "a single-vertex graph has no cuts")
            }
            CheegerError::LengthMismatch { expected, got } => {
                write!(f, "expected {} function values, got {}", expected, got)
            }
            CheegerError::ConstantFunction => write!(f, "function is constant"),
            CheegerError::MedianNotZero => write!(f, "0 is not a median of the function"),
            CheegerError::NormNotOne => write!(f, "function must have L1 norm 1"),
            CheegerError::EmptyPath => write!(f, "path is empty"),
        }
    }
}

/// A connected weighted graph with a normalized vertex measure.
#[derive(Clone, Debug)]
pub struct WeightedGraph {
    measures: Vec<Value>,
    edges: Vec<(u32, u32, Value)>,
}

impl WeightedGraph {
    pub fn new(
        measures: Vec<Value>,
        edges: Vec<(u32, u32, Value)>,
    ) -> Result<WeightedGraph, CheegerError> {
        let n = measures.len();
        if n == 0 {
            return Err(CheegerError::NoVertices);
        }
        let mut total = Value::zero();
        for (v, m) in measures.iter().enumerate() {
            if m.is_zero() || m.is_negative() {
                return Err(CheegerError::NonPositiveMeasure(v as u32));
            }
            total = total + m.clone();
        }
        if total != Value::one() {
            return Err(CheegerError::MeasureNotNormalized);
        }
        let mut edges: Vec<(u32, u32, Value)> = edges
            .into_iter()
            .map(|(u, v, w)| (u.min(v), u.max(v), w))
            .collect();
        edges.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
            }
            parent[x]
        }
        for (i, (u, v, w)) in edges.iter().enumerate() {
            if u == v {
                return Err(CheegerError::SelfLoop(*u));
            }
            if *v as usize >= n {
                return Err(CheegerError::UnknownVertex(*v));
            }
            if w.is_zero() || w.is_negative() {
                return Err(CheegerError::NonPositiveWeight(*u, *v));
            }
            if i > 0 && (edges[i - 1].0, edges[i - 1].1) == (*u, *v) {
                return Err(CheegerError::DuplicateEdge(*u, *v));
            }
            let (ru, rv) = (find(&mut parent, *u as usize), find(&mut parent, *v as usize));
            parent[ru] = rv;
        }
        let root = find(&mut parent, 0);
        if (1..n).any(|v| find(&mut parent, v) != root) {
            return Err(CheegerError::NotConnected);
        }
        Ok(WeightedGraph { measures, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.measures.len()
    }

    pub fn measures(&self) -> &[Value] {
        &self.measures
    }

    pub fn edges(&self) -> &[(u32, u32, Value)] {
        &self.edges
    }

    pub fn measure_of(&self, subset: &[usize]) -> Value {
        subset
            .iter()
            .fold(Value::zero(), |acc, &v| acc + self.measures[v].clone())
    }

    /// Total edge weight leaving the subset.
    pub fn cut(&self, subset: &[usize]) -> Value {
        let mut inside = vec![false; self.vertex_count()];
        for &v in subset {
            inside[v] = true;
        }
        let mut acc = Value::zero();
        for (u, v, w) in &self.edges {
            if inside[*u as usize] != inside[*v as usize] {
                acc = acc + w.clone();
            }
        }
        acc
    }
}

/// A real-valued function on the vertices of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFunction {
    pub values: Vec<Value>,
}

impl GraphFunction {
    pub fn new(g: &WeightedGraph, values: Vec<Value>) -> Result<GraphFunction, CheegerError> {
        if values.len() != g.vertex_count() {
            return Err(CheegerError::LengthMismatch {
                expected: g.vertex_count(),
                got: values.len(),
            });
        }
        Ok(GraphFunction { values })
    }

    pub fn constant(g: &WeightedGraph, v: Value) -> GraphFunction {
        GraphFunction {
            values: vec![v; g.vertex_count()],
        }
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    /// Weighted L1 norm Σ m_v |u_v|.
    pub fn l1_norm(&self, g: &WeightedGraph) -> Value {
        self.values
            .iter()
            .zip(&g.measures)
            .fold(Value::zero(), |acc, (u, m)| acc + u.abs() * m.clone())
    }
}

/// An ordered list of functions, discretizing a curve in function space.
#[derive(Clone, Debug)]
pub struct FunctionPath {
    pub steps: Vec<GraphFunction>,
}

/// Total variation Σ_e w_e |u_i - u_j|; zero exactly for constants.
pub fn tv(g: &WeightedGraph, u: &GraphFunction) -> Value {
    g.edges
        .iter()
        .fold(Value::zero(), |acc, (a, b, w)| {
            acc + w.clone() * (&u.values[*a as usize] - &u.values[*b as usize]).abs()
        })
}

/// The closed interval of medians: values m with μ({u ≤ m}) ≥ 1/2 and
/// μ({u ≥ m}) ≥ 1/2. Always nonempty; its endpoints are attained among
/// the function's values.
pub fn median_interval(g: &WeightedGraph, u: &GraphFunction) -> (Value, Value) {
    let mut pairs: Vec<(&Value, &Value)> =
        u.values.iter().zip(g.measures.iter()).collect();
    pairs.sort_by(|a, b| a.0.cmp(b.0));
    let half = Value::from_ratio(1, 2);
    // lo = least value with μ(u ≤ lo) ≥ 1/2
    let mut acc = Value::zero();
    let mut lo = None;
    for (v, m) in &pairs {
        acc = acc + (*m).clone();
        if acc >= half {
            lo = Some((*v).clone());
            break;
        }
    }
    // hi = greatest value with μ(u ≥ hi) ≥ 1/2
    let mut acc = Value::zero();
    let mut hi = None;
    for (v, m) in pairs.iter().rev() {
        acc = acc + (*m).clone();
        if acc >= half {
            hi = Some((*v).clone());
            break;
        }
    }
    (lo.expect("measure sums to 1"), hi.expect("measure sums to 1"))
}

/// Exact Cheeger constant by enumerating vertex subsets:
/// min over nonempty proper A of cut(A) / min(μ(A), μ(Aᶜ)). Complement
/// pairs give the same ratio, so only subsets avoiding vertex 0 are tried.
pub fn cheeger_brute(g: &WeightedGraph) -> Result<(Value, Vec<usize>), CheegerError> {
    let n = g.vertex_count();
    if n > 24 {
        return Err(CheegerError::TooLarge(n));
    }
    if n == 1 {
        return Err(CheegerError::NoProperSubsets);
    }
    let mut best: Option<(Value, Vec<usize>)> = None;
    for mask in 1u32..(1 << (n - 1)) {
        let subset: Vec<usize> = (0..n - 1).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
        let m = g.measure_of(&subset);
        let m_min = m.clone().min(Value::one() - m);
        let ratio = g.cut(&subset) / m_min;
        if best.as_ref().map_or(true, |(b, _)| ratio < *b) {
            best = Some((ratio, subset));
        }
    }
    Ok(best.expect("n >= 2 gives at least one subset"))
}

/// Energy of a function and its co-area rounding.
#[derive(Clone, Debug)]
pub struct FunctionBound {
    /// 𝓔(u) = TV(u) / min_c Σ m_v |u_v - c| (the minimum sits at the median).
    pub energy: Value,
    /// Best threshold set of u; its ratio never exceeds the energy.
    pub subset: Vec<usize>,
    pub subset_ratio: Value,
}

/// Evaluates the normalized-TV energy of a non-constant function and
/// rounds it to its best threshold subset via the co-area decomposition.
pub fn cheeger_function_bound(
    g: &WeightedGraph,
    u: &GraphFunction,
) -> Result<FunctionBound, CheegerError> {
    if u.values.len() != g.vertex_count() {
        return Err(CheegerError::LengthMismatch {
            expected: g.vertex_count(),
            got: u.values.len(),
        });
    }
    if u.is_constant() {
        return Err(CheegerError::ConstantFunction);
    }
    let (m_lo, _) = median_interval(g, u);
    let denom = u
        .values
        .iter()
        .zip(&g.measures)
        .fold(Value::zero(), |acc, (v, m)| acc + (v - &m_lo).abs() * m.clone());
    let energy = tv(g, u) / denom;

    // co-area rounding: scan super- and sublevel threshold sets
    let mut cuts: Vec<Value> = u.values.clone();
    cuts.sort();
    cuts.dedup();
    let mut best: Option<(Value, Vec<usize>)> = None;
    let mut consider = |subset: Vec<usize>| {
        if subset.is_empty() || subset.len() == g.vertex_count() {
            return;
        }
        let m = g.measure_of(&subset);
        let m_min = m.clone().min(Value::one() - m);
        let ratio = g.cut(&subset) / m_min;
        if best.as_ref().map_or(true, |(b, _)| ratio < *b) {
            best = Some((ratio, subset));
        }
    };
    for c in &cuts {
        let above: Vec<usize> = (0..u.values.len()).filter(|&v| u.values[v] > *c).collect();
        consider(above);
        let below: Vec<usize> = (0..u.values.len()).filter(|&v| u.values[v] < *c).collect();
        consider(below);
    }
    let (subset_ratio, subset) = best.expect("non-constant function has a proper threshold set");
    Ok(FunctionBound {
        energy,
        subset,
        subset_ratio,
    })
}

/// The loop of constant offsets through a normalized median-zero
/// function: constants at both ends (the compactified tangent
/// reparametrization), u + c in between over an ascending offset grid
/// that contains every value -u_v plus `samples` evenly spaced fillers.
/// Every interior step keeps energy at most TV(u).
pub fn tan_loop(
    g: &WeightedGraph,
    u: &GraphFunction,
    samples: usize,
) -> Result<FunctionPath, CheegerError> {
    if u.l1_norm(g) != Value::one() {
        return Err(CheegerError::NormNotOne);
    }
    let (lo, hi) = median_interval(g, u);
    if lo > Value::zero() || hi < Value::zero() {
        return Err(CheegerError::MedianNotZero);
    }
    let mut offsets: Vec<Value> = u.values.iter().map(|v| -v).collect();
    offsets.sort();
    let lo_end = offsets.first().unwrap() - &Value::one();
    let hi_end = offsets.last().unwrap() + &Value::one();
    let span = &hi_end - &lo_end;
    for i in 0..=samples + 1 {
        let frac = Value::from_ratio(i as i64, (samples + 1) as i64);
        offsets.push(&lo_end + &(&span * &frac));
    }
    offsets.sort();
    offsets.dedup();

    let mut steps = Vec::with_capacity(offsets.len() + 2);
    steps.push(GraphFunction::constant(g, Value::from_int(-1)));
    for c in offsets {
        let values: Vec<Value> = u.values.iter().map(|v| v + &c).collect();
        steps.push(GraphFunction { values });
    }
    steps.push(GraphFunction::constant(g, Value::one()));
    Ok(FunctionPath { steps })
}

/// The last path index whose function has at least half the measure at or
/// below zero, and whether zero is a median there. Paths starting on the
/// positive side are negated internally first, matching the symmetric
/// normalization of the underlying argument.
pub fn path_median_extract(
    g: &WeightedGraph,
    p: &FunctionPath,
) -> Result<(usize, bool), CheegerError> {
    if p.steps.is_empty() {
        return Err(CheegerError::EmptyPath);
    }
    let half = Value::from_ratio(1, 2);
    let mass_below = |u: &GraphFunction, flip: bool| -> Value {
        u.values
            .iter()
            .zip(&g.measures)
            .filter(|(v, _)| {
                if flip {
                    !v.is_negative()
                } else {
                    v.is_negative() || v.is_zero()
                }
            })
            .fold(Value::zero(), |acc, (_, m)| acc + m.clone())
    };
    let flip = mass_below(&p.steps[0], false) < half;
    let sigma = p
        .steps
        .iter()
        .rposition(|u| mass_below(u, flip) >= half)
        .unwrap_or(0);
    let (lo, hi) = median_interval(g, &p.steps[sigma]);
    let verdict = if flip {
        hi >= Value::zero() && lo <= Value::zero()
    } else {
        lo <= Value::zero() && hi >= Value::zero()
    };
    Ok((sigma, verdict))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> WeightedGraph {
        let q = Value::from_ratio(1, 4);
        WeightedGraph::new(
            vec![q.clone(), q.clone(), q.clone(), q],
            vec![
                (0, 1, Value::one()),
                (1, 2, Value::one()),
                (2, 3, Value::one()),
                (0, 3, Value::one()),
            ],
        )
        .unwrap()
    }

    fn k3() -> WeightedGraph {
        let t = Value::from_ratio(1, 3);
        WeightedGraph::new(
            vec![t.clone(), t.clone(), t],
            vec![
                (0, 1, Value::one()),
                (0, 2, Value::one()),
                (1, 2, Value::one()),
            ],
        )
        .unwrap()
    }

    fn bridged_triangles() -> WeightedGraph {
        let s = Value::from_ratio(1, 6);
        WeightedGraph::new(
            vec![s.clone(); 6],
            vec![
                (0, 1, Value::one()),
                (0, 2, Value::one()),
                (1, 2, Value::one()),
                (3, 4, Value::one()),
                (3, 5, Value::one()),
                (4, 5, Value::one()),
                (2, 3, Value::one()),
            ],
        )
        .unwrap()
    }

    fn func(g: &WeightedGraph, vals: &[i64]) -> GraphFunction {
        GraphFunction::new(g, vals.iter().map(|&v| Value::from_int(v)).collect()).unwrap()
    }

    #[test]
    fn tv_hand_values() {
        let g = c4();
        assert_eq!(tv(&g, &func(&g, &[2, -2, 0, 0])), Value::from_int(8));
        assert_eq!(tv(&g, &GraphFunction::constant(&g, Value::from_int(7))), Value::zero());
        let k = k3();
        assert_eq!(tv(&k, &func(&k, &[1, 0, 0])), Value::from_int(2));
    }

    #[test]
    fn median_intervals() {
        let g = WeightedGraph::new(
            vec![
                Value::from_ratio(1, 2),
                Value::from_ratio(1, 4),
                Value::from_ratio(1, 4),
            ],
            vec![(0, 1, Value::one()), (1, 2, Value::one())],
        )
        .unwrap();
        let u = GraphFunction::new(
            &g,
            vec![Value::from_int(-1), Value::from_int(2), Value::from_int(3)],
        )
        .unwrap();
        assert_eq!(
            median_interval(&g, &u),
            (Value::from_int(-1), Value::from_int(2))
        );
        let g2 = WeightedGraph::new(
            vec![Value::from_ratio(1, 2), Value::from_ratio(1, 2)],
            vec![(0, 1, Value::one())],
        )
        .unwrap();
        let u2 = func(&g2, &[0, 1]);
        assert_eq!(median_interval(&g2, &u2), (Value::zero(), Value::one()));
        let c = GraphFunction::constant(&g2, Value::from_int(5));
        assert_eq!(
            median_interval(&g2, &c),
            (Value::from_int(5), Value::from_int(5))
        );
    }

    #[test]
    fn brute_constants() {
        assert_eq!(cheeger_brute(&c4()).unwrap().0, Value::from_int(4));
        assert_eq!(cheeger_brute(&k3()).unwrap().0, Value::from_int(6));
        assert_eq!(
            cheeger_brute(&bridged_triangles()).unwrap().0,
            Value::from_int(2)
        );
    }

    #[test]
    fn function_bound_and_rounding() {
        let g = c4();
        let u = func(&g, &[2, -2, 0, 0]);
        let b = cheeger_function_bound(&g, &u).unwrap();
        assert_eq!(b.energy, Value::from_int(8));
        assert!(b.subset_ratio <= b.energy);
        // an indicator split along the optimal cut reproduces the constant
        let opt = GraphFunction::new(
            &g,
            vec![
                Value::from_int(2),
                Value::from_int(2),
                Value::from_int(-2),
                Value::from_int(-2),
            ],
        )
        .unwrap();
        let b = cheeger_function_bound(&g, &opt).unwrap();
        assert_eq!(b.energy, cheeger_brute(&g).unwrap().0);
        assert!(cheeger_function_bound(&g, &GraphFunction::constant(&g, Value::one())).is_err());
    }

    #[test]
    fn loop_and_extraction() {
        let g = c4();
        let u = func(&g, &[2, -2, 0, 0]);
        assert_eq!(u.l1_norm(&g), Value::one());
        let path = tan_loop(&g, &u, 8).unwrap();
        let max_energy = path
            .steps
            .iter()
            .filter(|s| !s.is_constant())
            .map(|s| cheeger_function_bound(&g, s).unwrap().energy)
            .fold(Value::zero(), |a, b| a.max(b));
        assert!(max_energy <= tv(&g, &u));
        let (sigma, verdict) = path_median_extract(&g, &path).unwrap();
        assert!(verdict, "zero must be a median at the extracted index");
        assert!(sigma > 0 && sigma < path.steps.len() - 1);
    }

    #[test]
    fn loop_preconditions() {
        let g = c4();
        let q = Value::from_int(2);
        let u = GraphFunction::new(&g, vec![q.clone(), q.clone(), q.clone(), q]).unwrap();
        assert!(matches!(
            tan_loop(&g, &u, 4),
            Err(CheegerError::NormNotOne)
        ));
        let v = GraphFunction::new(
            &g,
            vec![
                Value::from_int(1),
                Value::from_int(1),
                Value::from_int(1),
                Value::from_int(-3),
            ],
        )
        .unwrap();
        // |1|*3/4 + |-3|/4 != 1 -> scale to norm 1 with positive median
        let scaled = GraphFunction::new(
            &g,
            v.values
                .iter()
                .map(|x| x * &Value::from_ratio(2, 3))
                .collect(),
        )
        .unwrap();
        assert_eq!(scaled.l1_norm(&g), Value::one());
        assert!(matches!(
            tan_loop(&g, &scaled, 4),
            Err(CheegerError::MedianNotZero)
        ));
    }

    #[test]
    fn coarse_paths_are_reported() {
        let g = c4();
        let path = FunctionPath {
            steps: vec![
                GraphFunction::constant(&g, Value::from_int(-2)),
                GraphFunction::constant(&g, Value::from_int(2)),
            ],
        };
        let (sigma, verdict) = path_median_extract(&g, &path).unwrap();
        assert_eq!(sigma, 0);
        assert!(!verdict);
    }
}
