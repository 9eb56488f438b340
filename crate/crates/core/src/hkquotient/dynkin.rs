use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};

/// Type of an extended (affine) simply-laced Dynkin diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DynkinKind {
    A(usize),
    D(usize),
    E6,
    E7,
    E8,
}

impl fmt::Display for DynkinKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinKind::A(k) => write!(f, "A{k}"),
            DynkinKind::D(k) => write!(f, "D{k}"),
            DynkinKind::E6 => write!(f, "E6"),
            DynkinKind::E7 => write!(f, "E7"),
            DynkinKind::E8 => write!(f, "E8"),
        }
    }
}

impl FromStr for DynkinKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_uppercase();
        let bad = || Error::Config(format!("unknown diagram '{s}' (expected A<k>, D<k>, E6, E7 or E8)"));
        let kind = match t.as_str() {
            "E6" => DynkinKind::E6,
            "E7" => DynkinKind::E7,
            "E8" => DynkinKind::E8,
            _ if t.len() > 1 => {
                let k: usize = t[1..].parse().map_err(|_| bad())?;
                match &t[..1] {
                    "A" => DynkinKind::A(k),
                    "D" => DynkinKind::D(k),
                    _ => return Err(bad()),
                }
            }
            _ => return Err(bad()),
        };
        kind.validate()?;
        Ok(kind)
    }
}

impl DynkinKind {
    pub fn validate(&self) -> Result<()> {
        match *self {
            DynkinKind::A(k) if k < 1 => Err(Error::Config("A_k needs k ≥ 1".into())),
            DynkinKind::D(k) if k < 4 => Err(Error::Config("D_k needs k ≥ 4".into())),
            _ => Ok(()),
        }
    }
}

/// An undirected multigraph with an optional diagram tag and vertex marks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DynkinGraph {
    pub kind: Option<DynkinKind>,
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub marks: Vec<u64>,
}

impl DynkinGraph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if edges.iter().any(|&(a, b)| a >= vertices || b >= vertices || a == b) {
            return Err(Error::Invalid("edge endpoints must be distinct vertices".into()));
        }
        Ok(Self { kind: None, vertices, edges, marks: vec![1; vertices] })
    }

    /// The extended diagram of the given type, with marks from the affine Cartan null vector.
    pub fn extended(kind: DynkinKind) -> Result<Self> {
        kind.validate()?;
        let chain = |from: usize, to: usize| (from..to).map(|i| (i, i + 1)).collect::<Vec<_>>();
        let (vertices, edges) = match kind {
            DynkinKind::A(1) => (2, vec![(0, 1), (0, 1)]),
            DynkinKind::A(k) => {
                let mut e = chain(0, k);
                e.push((k, 0));
                (k + 1, e)
            }
            DynkinKind::D(k) => {
                // 0, 1 hang off 2; chain 2..k−2; k−1, k hang off k−2
                let mut e = vec![(0, 2), (1, 2)];
                e.extend(chain(2, k - 2));
                e.push((k - 2, k - 1));
                e.push((k - 2, k));
                (k + 1, e)
            }
            // chain 0-1-2-3-4 with arm 2-5-6
            DynkinKind::E6 => (7, vec![(0, 1), (1, 2), (2, 3), (3, 4), (2, 5), (5, 6)]),
            // chain 0..6 with 7 on 3
            DynkinKind::E7 => (8, {
                let mut e = chain(0, 6);
                e.push((3, 7));
                e
            }),
            // chain 0..7 with 8 on 5
            DynkinKind::E8 => (9, {
                let mut e = chain(0, 7);
                e.push((5, 8));
                e
            }),
        };
        let mut g = Self::new(vertices, edges)?;
        g.kind = Some(kind);
        g.marks = null_vector_marks(&g)?;
        Ok(g)
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertices];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// `2·Id − A`, with A counting edge multiplicities.
pub fn affine_cartan(graph: &DynkinGraph) -> DMatrix<i64> {
    let n = graph.vertices;
    let mut c = DMatrix::from_diagonal_element(n, n, 2i64);
    for &(a, b) in &graph.edges {
        c[(a, b)] -= 1;
        c[(b, a)] -= 1;
    }
    c
}

/// Minimal positive integer null vector of the affine Cartan matrix, verified exactly.
fn null_vector_marks(graph: &DynkinGraph) -> Result<Vec<u64>> {
    let c = affine_cartan(graph);
    let cf = c.map(|x| x as f64);
    let svd = cf.svd(false, true);
    let vt = svd.v_t.ok_or_else(|| Error::Model("SVD failed".into()))?;
    let (imin, smin) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
    if smin > 1e-8 {
        return Err(Error::Model(format!("Cartan matrix of {:?} is nonsingular", graph.kind)));
    }
    let v: Vec<f64> = vt.row(imin).iter().copied().collect();
    let sign = if v.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
    let min = v.iter().map(|x| x * sign).fold(f64::INFINITY, f64::min);
    if !(min > 1e-8) {
        return Err(Error::Model("null vector is not strictly positive".into()));
    }
    let scaled: Vec<f64> = v.iter().map(|x| x * sign / min).collect();
    let marks: Vec<i64> = scaled.iter().map(|x| x.round() as i64).collect();
    if scaled.iter().zip(&marks).any(|(x, m)| (x - *m as f64).abs() > 1e-6) {
        return Err(Error::Model(format!("null vector {scaled:?} is not integral after normalization")));
    }
    let d = nalgebra::DVector::from_vec(marks.clone());
    if (&c * &d).iter().any(|&x| x != 0) {
        return Err(Error::Model("integer marks fail the exact null check".into()));
    }
    Ok(marks.into_iter().map(|m| m as u64).collect())
}

/// Signs `c_i = ±1` with `c_ic_j = −1` across every edge, or `None` if an odd cycle exists.
pub fn dynkin_signs(graph: &DynkinGraph) -> Result<Option<Vec<i8>>> {
    if !graph.is_connected() {
        return Err(Error::Invalid("diagram must be connected".into()));
    }
    let adj = graph.adjacency();
    let mut sign = vec![0i8; graph.vertices];
    if graph.vertices == 0 {
        return Ok(Some(sign));
    }
    sign[0] = 1;
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for &u in &adj[v] {
            if sign[u] == 0 {
                sign[u] = -sign[v];
                queue.push_back(u);
            } else if sign[u] == sign[v] {
                return Ok(None);
            }
        }
    }
    Ok(Some(sign))
}

/// Marks `d_i` of the extended diagram (dimensions of the irreducible representations).
pub fn mckay_dims(kind: DynkinKind) -> Result<Vec<u64>> {
    Ok(DynkinGraph::extended(kind)?.marks)
}

/// Order of the binary polyhedral group attached to the diagram.
pub fn group_order(kind: DynkinKind) -> u64 {
    match kind {
        DynkinKind::A(k) => k as u64 + 1,
        DynkinKind::D(k) => 4 * (k as u64 - 2),
        DynkinKind::E6 => 24,
        DynkinKind::E7 => 48,
        DynkinKind::E8 => 120,
    }
}

/// Quaternionic dimension `Σ_edges d_i d_j` of `⊕_{i→j} Hom(C^{d_i}, C^{d_j})` over both orientations.
pub fn quiver_dim(graph: &DynkinGraph) -> u64 {
    graph.edges.iter().map(|&(a, b)| graph.marks[a] * graph.marks[b]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn all_kinds() -> Vec<DynkinKind> {
        let mut v: Vec<DynkinKind> = (1..=9).map(DynkinKind::A).collect();
        v.extend((4..=8).map(DynkinKind::D));
        v.extend([DynkinKind::E6, DynkinKind::E7, DynkinKind::E8]);
        v
    }

    fn brute_force(graph: &DynkinGraph) -> bool {
        (0..1u32 << graph.vertices).any(|bits| {
            graph.edges.iter().all(|&(a, b)| ((bits >> a) & 1) != ((bits >> b) & 1))
        })
    }

    #[test]
    fn signs_match_exhaustive_search() {
        for kind in all_kinds() {
            let g = DynkinGraph::extended(kind).unwrap();
            let s = dynkin_signs(&g).unwrap();
            assert_eq!(s.is_some(), brute_force(&g), "{kind}");
            if let Some(s) = &s {
                assert!(g.edges.iter().all(|&(a, b)| s[a] * s[b] == -1));
            }
            match kind {
                DynkinKind::A(k) => assert_eq!(s.is_some(), k % 2 == 1),
                _ => assert!(s.is_some()),
            }
        }
    }

    #[test]
    fn marks_and_orders() {
        assert_eq!(mckay_dims(DynkinKind::A(1)).unwrap(), vec![1, 1]);
        assert_eq!(mckay_dims(DynkinKind::A(4)).unwrap(), vec![1; 5]);
        assert_eq!(mckay_dims(DynkinKind::D(6)).unwrap(), vec![1, 1, 2, 2, 2, 1, 1]);
        assert_eq!(mckay_dims(DynkinKind::E6).unwrap(), vec![1, 2, 3, 2, 1, 2, 1]);
        assert_eq!(mckay_dims(DynkinKind::E7).unwrap(), vec![1, 2, 3, 4, 3, 2, 1, 2]);
        assert_eq!(mckay_dims(DynkinKind::E8).unwrap(), vec![1, 2, 3, 4, 5, 6, 4, 2, 3]);
        for kind in all_kinds() {
            let d = mckay_dims(kind).unwrap();
            assert_eq!(d.iter().map(|x| x * x).sum::<u64>(), group_order(kind), "{kind}");
        }
    }

    #[test]
    fn quiver_dimensions() {
        assert_eq!(quiver_dim(&DynkinGraph::extended(DynkinKind::A(1)).unwrap()), 2);
        for kind in all_kinds() {
            let g = DynkinGraph::extended(kind).unwrap();
            // quaternionic dim M minus dim Π U(d_i)/U(1) is one: the quotient is four-dimensional
            let dim_g = g.marks.iter().map(|d| d * d).sum::<u64>() - 1;
            assert_eq!(quiver_dim(&g) - dim_g, 1, "{kind}");
        }
    }

    #[test]
    fn parsing() {
        assert_eq!("a3".parse::<DynkinKind>().unwrap(), DynkinKind::A(3));
        assert_eq!("E8".parse::<DynkinKind>().unwrap(), DynkinKind::E8);
        assert!("D3".parse::<DynkinKind>().is_err());
        assert!("F4".parse::<DynkinKind>().is_err());
        assert_eq!(DynkinKind::D(5).to_string(), "D5");
    }

    #[test]
    fn disconnected_rejected() {
        let g = DynkinGraph::new(3, vec![(0, 1)]).unwrap();
        assert!(dynkin_signs(&g).is_err());
    }

    proptest! {
        #[test]
        fn bfs_agrees_with_brute_force_on_random_connected_graphs(
            n in 2usize..9,
            extra in proptest::collection::vec((0usize..9, 0usize..9), 0..8),
        ) {
            let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
            edges.extend(extra.into_iter().filter(|(a, b)| a < &n && b < &n && a != b));
            let g = DynkinGraph::new(n, edges).unwrap();
            let s = dynkin_signs(&g).unwrap();
            prop_assert_eq!(s.is_some(), brute_force(&g));
        }
    }
}
