//! Arcs, triangulations and flips of the convex (n+3)-gon, and the
//! triangle-sum construction of exchange matrices.
//!
//! Vertices `0..n+3` sit counterclockwise on the boundary. A triangle with
//! vertices `a < b < c` is therefore positively oriented as `a -> b -> c`.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolygonError {
    #[error("arc endpoints must differ (got {0},{0})")]
    EqualEndpoints(usize),
    #[error("vertex {vertex} outside the {size}-gon")]
    VertexOutOfRange { vertex: usize, size: usize },
    #[error("{0} is not an inner arc of the triangulation")]
    NotInnerArc(ChordArc),
    #[error("{0} is a boundary arc")]
    BoundaryArc(ChordArc),
    #[error("arcs {0} and {1} cross")]
    Crossing(ChordArc, ChordArc),
    #[error("expected {expected} inner arcs, got {got}")]
    WrongArcCount { expected: usize, got: usize },
    #[error("triangle side {0} is not among the listed arcs")]
    UnknownArcInTriangle(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

/// Chord `(i, j)` of the polygon, stored with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChordArc {
    i: usize,
    j: usize,
}

impl ChordArc {
    pub fn new(a: usize, b: usize) -> Result<Self, PolygonError> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(ChordArc { i: a, j: b }),
            std::cmp::Ordering::Greater => Ok(ChordArc { i: b, j: a }),
            std::cmp::Ordering::Equal => Err(PolygonError::EqualEndpoints(a)),
        }
    }

    pub fn endpoints(self) -> (usize, usize) {
        (self.i, self.j)
    }

    pub fn has_endpoint(self, v: usize) -> bool {
        self.i == v || self.j == v
    }

    /// Boundary arcs join cyclically adjacent vertices of the `size`-gon.
    pub fn is_boundary(self, size: usize) -> bool {
        self.j - self.i == 1 || (self.i == 0 && self.j == size - 1)
    }

    /// Variable name of the arc, `x_i_j`.
    pub fn name(self) -> String {
        format!("x_{}_{}", self.i, self.j)
    }
}

impl fmt::Display for ChordArc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// Two chords cross iff they share no endpoint and exactly one endpoint of
/// `b` lies strictly inside the span of `a`.
pub fn crossing(a: ChordArc, b: ChordArc) -> bool {
    if a.has_endpoint(b.i) || a.has_endpoint(b.j) {
        return false;
    }
    let inside = |v: usize| a.i < v && v < a.j;
    inside(b.i) != inside(b.j)
}

/// A triangle whose sides are listed along the positive orientation of its boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedTriangle {
    pub sides: [String; 3],
}

impl OrientedTriangle {
    pub fn new(a: impl Into<String>, b: impl Into<String>, c: impl Into<String>) -> Self {
        OrientedTriangle { sides: [a.into(), b.into(), c.into()] }
    }
}

/// Integer exchange matrix with labelled rows (all arcs) and columns (inner arcs).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExchangeMatrix {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub b: Vec<Vec<i32>>,
}

impl ExchangeMatrix {
    pub fn row_index(&self, label: &str) -> Option<usize> {
        self.rows.iter().position(|r| r == label)
    }

    pub fn col_index(&self, label: &str) -> Option<usize> {
        self.cols.iter().position(|c| c == label)
    }

    pub fn entry(&self, row: &str, col: &str) -> Option<i32> {
        Some(self.b[self.row_index(row)?][self.col_index(col)?])
    }

    /// The square block on rows and columns labelled by `cols`.
    pub fn is_skew_symmetric_block(&self) -> bool {
        let idx: Option<Vec<usize>> = self.cols.iter().map(|c| self.row_index(c)).collect();
        let Some(idx) = idx else { return false };
        (0..self.cols.len()).all(|a| {
            (0..self.cols.len()).all(|c| self.b[idx[a]][c] == -self.b[idx[c]][a])
        })
    }

    /// Same matrix with rows and columns reordered to the given label orders.
    pub fn reordered(&self, rows: &[String], cols: &[String]) -> Option<Self> {
        let ri: Option<Vec<usize>> = rows.iter().map(|r| self.row_index(r)).collect();
        let ci: Option<Vec<usize>> = cols.iter().map(|c| self.col_index(c)).collect();
        let (ri, ci) = (ri?, ci?);
        if ri.len() != self.rows.len() || ci.len() != self.cols.len() {
            return None;
        }
        Some(ExchangeMatrix {
            rows: rows.to_vec(),
            cols: cols.to_vec(),
            b: ri.iter().map(|&r| ci.iter().map(|&c| self.b[r][c]).collect()).collect(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, PolygonError> {
        let m: ExchangeMatrix =
            serde_json::from_str(s).map_err(|e| PolygonError::Malformed(e.to_string()))?;
        if m.b.len() != m.rows.len() || m.b.iter().any(|r| r.len() != m.cols.len()) {
            return Err(PolygonError::Malformed("matrix shape does not match labels".into()));
        }
        Ok(m)
    }
}

impl fmt::Display for ExchangeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.rows.iter().map(String::len).max().unwrap_or(0);
        write!(f, "{:w$} ", "")?;
        for c in &self.cols {
            write!(f, " {c:>6}")?;
        }
        writeln!(f)?;
        for (r, row) in self.rows.iter().zip(&self.b) {
            write!(f, "{r:w$} ")?;
            for v in row {
                write!(f, " {v:>6}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Sum of the elementary triangle matrices, restricted to the `inner` columns.
///
/// Each triangle contributes `+1` at `(s_k, s_{k+1})` and `-1` at
/// `(s_{k+1}, s_k)` for its cyclically consecutive sides.
pub fn triangle_sum_exchange_matrix(
    arcs: &[String],
    inner: &[String],
    triangles: &[OrientedTriangle],
) -> Result<ExchangeMatrix, PolygonError> {
    let row_of: HashMap<&str, usize> = arcs.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect();
    let col_of: HashMap<&str, usize> = inner.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect();
    if let Some(c) = inner.iter().find(|c| !row_of.contains_key(c.as_str())) {
        return Err(PolygonError::UnknownArcInTriangle(c.clone()));
    }
    let mut b = vec![vec![0i32; inner.len()]; arcs.len()];
    for t in triangles {
        for s in &t.sides {
            if !row_of.contains_key(s.as_str()) {
                return Err(PolygonError::UnknownArcInTriangle(s.clone()));
            }
        }
        for k in 0..3 {
            let from = t.sides[k].as_str();
            let to = t.sides[(k + 1) % 3].as_str();
            if let Some(&c) = col_of.get(to) {
                b[row_of[from]][c] += 1;
            }
            if let Some(&c) = col_of.get(from) {
                b[row_of[to]][c] -= 1;
            }
        }
    }
    Ok(ExchangeMatrix { rows: arcs.to_vec(), cols: inner.to_vec(), b })
}

/// Triangulation of the (n+3)-gon by `n` pairwise non-crossing diagonals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolygonTriangulation {
    n: usize,
    inner: BTreeSet<ChordArc>,
}

#[derive(Serialize, Deserialize)]
struct TriangulationWire {
    n: usize,
    inner: Vec<[usize; 2]>,
}

impl PolygonTriangulation {
    pub fn new(n: usize, arcs: impl IntoIterator<Item = ChordArc>) -> Result<Self, PolygonError> {
        let size = n + 3;
        let inner: BTreeSet<ChordArc> = arcs.into_iter().collect();
        for &a in &inner {
            if a.j >= size {
                return Err(PolygonError::VertexOutOfRange { vertex: a.j, size });
            }
            if a.is_boundary(size) {
                return Err(PolygonError::BoundaryArc(a));
            }
        }
        if inner.len() != n {
            return Err(PolygonError::WrongArcCount { expected: n, got: inner.len() });
        }
        let v: Vec<ChordArc> = inner.iter().copied().collect();
        for (k, &a) in v.iter().enumerate() {
            for &b in &v[k + 1..] {
                if crossing(a, b) {
                    return Err(PolygonError::Crossing(a, b));
                }
            }
        }
        Ok(PolygonTriangulation { n, inner })
    }

    /// All diagonals from `center`.
    pub fn star(n: usize, center: usize) -> Result<Self, PolygonError> {
        let size = n + 3;
        if center >= size {
            return Err(PolygonError::VertexOutOfRange { vertex: center, size });
        }
        let arcs = (2..size - 1)
            .map(|d| ChordArc::new(center, (center + d) % size))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n, arcs)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.n + 3
    }

    pub fn inner(&self) -> impl Iterator<Item = ChordArc> + '_ {
        self.inner.iter().copied()
    }

    pub fn contains(&self, a: ChordArc) -> bool {
        self.inner.contains(&a)
    }

    /// Boundary arcs `(0,1), (1,2), ..., (n+1,n+2), (0,n+2)`.
    pub fn boundary(&self) -> Vec<ChordArc> {
        boundary_arcs(self.n)
    }

    fn is_edge(&self, a: usize, b: usize) -> bool {
        let Ok(arc) = ChordArc::new(a, b) else { return false };
        arc.is_boundary(self.size()) || self.inner.contains(&arc)
    }

    /// Vertex triples `a < b < c` of all triangles.
    pub fn triangle_vertices(&self) -> Vec<[usize; 3]> {
        let m = self.size();
        let mut out = Vec::with_capacity(self.n + 1);
        for a in 0..m {
            for b in a + 1..m {
                if !self.is_edge(a, b) {
                    continue;
                }
                for c in b + 1..m {
                    if self.is_edge(b, c) && self.is_edge(a, c) {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }

    /// All `n + 1` triangles, sides listed counterclockwise.
    pub fn triangles(&self) -> Vec<OrientedTriangle> {
        self.triangle_vertices()
            .into_iter()
            .map(|[a, b, c]| {
                let side = |u, v| ChordArc::new(u, v).expect("distinct").name();
                OrientedTriangle::new(side(a, b), side(b, c), side(c, a))
            })
            .collect()
    }

    /// Replaces `a` by the other diagonal of the quadrilateral around it.
    pub fn flip(&self, a: ChordArc) -> Result<(Self, ChordArc), PolygonError> {
        if !self.inner.contains(&a) {
            return Err(PolygonError::NotInnerArc(a));
        }
        let (i, j) = a.endpoints();
        let apex = |k: &usize| self.is_edge(i, *k) && self.is_edge(j, *k);
        let inside = (i + 1..j).find(apex).expect("triangle on the inner side");
        let outside = (0..i).chain(j + 1..self.size()).find(apex).expect("triangle on the outer side");
        let flipped = ChordArc::new(inside, outside)?;
        let mut inner = self.inner.clone();
        inner.remove(&a);
        inner.insert(flipped);
        Ok((PolygonTriangulation { n: self.n, inner }, flipped))
    }

    /// Triangle-sum exchange matrix with rows `inner ++ boundary`.
    pub fn exchange_matrix(&self) -> ExchangeMatrix {
        self.exchange_matrix_ordered(&self.inner.iter().copied().collect::<Vec<_>>())
            .expect("own arcs")
    }

    /// Same matrix, with inner arcs in the given order.
    pub fn exchange_matrix_ordered(&self, inner_order: &[ChordArc]) -> Result<ExchangeMatrix, PolygonError> {
        if let Some(&a) = inner_order.iter().find(|a| !self.inner.contains(a)) {
            return Err(PolygonError::NotInnerArc(a));
        }
        if inner_order.len() != self.n {
            return Err(PolygonError::WrongArcCount { expected: self.n, got: inner_order.len() });
        }
        let inner: Vec<String> = inner_order.iter().map(|a| a.name()).collect();
        let mut arcs = inner.clone();
        arcs.extend(self.boundary().into_iter().map(ChordArc::name));
        triangle_sum_exchange_matrix(&arcs, &inner, &self.triangles())
    }

    pub fn to_json(&self) -> String {
        let wire = TriangulationWire { n: self.n, inner: self.inner.iter().map(|a| [a.i, a.j]).collect() };
        serde_json::to_string(&wire).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, PolygonError> {
        let wire: TriangulationWire =
            serde_json::from_str(s).map_err(|e| PolygonError::Malformed(e.to_string()))?;
        let arcs = wire
            .inner
            .iter()
            .map(|[a, b]| ChordArc::new(*a, *b))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(wire.n, arcs)
    }
}

pub fn boundary_arcs(n: usize) -> Vec<ChordArc> {
    let m = n + 3;
    (0..m).map(|v| ChordArc::new(v, (v + 1) % m).expect("m >= 3")).collect()
}

/// All inner chords of the (n+3)-gon.
pub fn diagonals(n: usize) -> Vec<ChordArc> {
    let m = n + 3;
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 2..m {
            let a = ChordArc { i, j };
            if !a.is_boundary(m) {
                out.push(a);
            }
        }
    }
    out
}

/// Breadth-first enumeration of the flip graph, starting at the star at vertex 0.
pub fn enumerate_triangulations(n: usize) -> Vec<PolygonTriangulation> {
    let start = PolygonTriangulation::star(n, 0).expect("valid star");
    let mut seen: HashSet<PolygonTriangulation> = HashSet::from([start.clone()]);
    let mut order = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    while let Some(t) = queue.pop_front() {
        for a in t.inner().collect::<Vec<_>>() {
            let (next, _) = t.flip(a).expect("inner arc");
            if seen.insert(next.clone()) {
                order.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(a: usize, b: usize) -> ChordArc {
        ChordArc::new(a, b).unwrap()
    }

    #[test]
    fn crossing_examples() {
        assert!(crossing(arc(0, 2), arc(1, 3)));
        assert!(!crossing(arc(0, 2), arc(2, 4)));
        assert!(!crossing(arc(0, 2), arc(3, 5)));
        assert!(!crossing(arc(0, 2), arc(1, 2)));
        assert!(!crossing(arc(0, 3), arc(0, 3)));
    }

    #[test]
    fn flip_quadrilateral_and_back() {
        let t = PolygonTriangulation::new(1, [arc(0, 2)]).unwrap();
        let (t2, new) = t.flip(arc(0, 2)).unwrap();
        assert_eq!(new, arc(1, 3));
        assert_eq!(t2.inner().collect::<Vec<_>>(), vec![arc(1, 3)]);
        let (t3, back) = t2.flip(new).unwrap();
        assert_eq!(back, arc(0, 2));
        assert_eq!(t3, t);
        assert_eq!(t.flip(arc(1, 3)), Err(PolygonError::NotInnerArc(arc(1, 3))));
    }

    #[test]
    fn flip_in_hexagon_star() {
        let t = PolygonTriangulation::star(3, 5).unwrap();
        assert_eq!(t.inner().collect::<Vec<_>>(), vec![arc(1, 5), arc(2, 5), arc(3, 5)]);
        let (t2, new) = t.flip(arc(2, 5)).unwrap();
        assert_eq!(new, arc(1, 3));
        assert!(t2.contains(arc(1, 3)) && !t2.contains(arc(2, 5)));
    }

    #[test]
    fn invalid_triangulations_rejected() {
        assert_eq!(
            PolygonTriangulation::new(1, [arc(0, 1)]),
            Err(PolygonError::BoundaryArc(arc(0, 1)))
        );
        assert_eq!(
            PolygonTriangulation::new(2, [arc(0, 2), arc(1, 3)]),
            Err(PolygonError::Crossing(arc(0, 2), arc(1, 3)))
        );
        assert!(matches!(
            PolygonTriangulation::new(2, [arc(0, 2)]),
            Err(PolygonError::WrongArcCount { expected: 2, got: 1 })
        ));
        assert!(matches!(
            PolygonTriangulation::new(1, [arc(0, 7)]),
            Err(PolygonError::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn triangles_of_small_polygons() {
        let t = PolygonTriangulation::new(1, [arc(0, 2)]).unwrap();
        assert_eq!(t.triangle_vertices(), vec![[0, 1, 2], [0, 2, 3]]);
        let tri = PolygonTriangulation::new(0, []).unwrap();
        assert_eq!(tri.triangles(), vec![OrientedTriangle::new("x_0_1", "x_1_2", "x_0_2")]);
        for n in 0..6 {
            let fan = PolygonTriangulation::star(n, n + 2).unwrap();
            let expected: Vec<[usize; 3]> = (0..=n).map(|i| [i, i + 1, n + 2]).collect();
            assert_eq!(fan.triangle_vertices(), expected);
        }
    }

    #[test]
    fn single_triangle_has_empty_matrix() {
        let tri = PolygonTriangulation::new(0, []).unwrap();
        let b = tri.exchange_matrix();
        assert_eq!(b.rows.len(), 3);
        assert!(b.cols.is_empty());
        assert!(b.b.iter().all(Vec::is_empty));
    }

    #[test]
    fn quadrilateral_column() {
        // Triangles (0,1,2) and (0,2,3), worked by hand from the definition.
        let t = PolygonTriangulation::new(1, [arc(0, 2)]).unwrap();
        let b = t.exchange_matrix();
        assert_eq!(b.entry("x_0_2", "x_0_2"), Some(0));
        assert_eq!(b.entry("x_0_1", "x_0_2"), Some(-1));
        assert_eq!(b.entry("x_1_2", "x_0_2"), Some(1));
        assert_eq!(b.entry("x_2_3", "x_0_2"), Some(-1));
        assert_eq!(b.entry("x_0_3", "x_0_2"), Some(1));
    }

    #[test]
    fn unknown_side_is_reported() {
        let tri = [OrientedTriangle::new("a", "b", "zz")];
        let arcs = vec!["a".to_string(), "b".to_string()];
        assert_eq!(
            triangle_sum_exchange_matrix(&arcs, &arcs[..1], &tri),
            Err(PolygonError::UnknownArcInTriangle("zz".into()))
        );
    }

    #[test]
    fn json_formats() {
        let t = PolygonTriangulation::star(2, 4).unwrap();
        assert_eq!(t.to_json(), r#"{"n":2,"inner":[[1,4],[2,4]]}"#);
        assert_eq!(PolygonTriangulation::from_json(&t.to_json()).unwrap(), t);
        let b = t.exchange_matrix();
        assert!(b.to_json().starts_with(r#"{"rows":["x_1_4","x_2_4","x_0_1""#));
        assert_eq!(ExchangeMatrix::from_json(&b.to_json()).unwrap(), b);
        assert!(ExchangeMatrix::from_json(r#"{"rows":["a"],"cols":["a"],"b":[[0,1]]}"#).is_err());
    }
}
