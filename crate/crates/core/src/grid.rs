//! Host graphs and connectivity of robot configurations.
//!
//! Grid hosts are bounded windows `{0..m-1} x {0..n-1}` of the infinite 8-grid
//! (king moves) or 4-grid (rook steps). Explicit hosts carry an adjacency list
//! and address vertex `i` as `Vertex { x: i, y: 0 }`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub x: i32,
    pub y: i32,
}

impl Vertex {
    pub const fn new(x: i32, y: i32) -> Self {
        Vertex { x, y }
    }

    /// Vertex `id` of an explicit graph.
    pub const fn id(id: usize) -> Self {
        Vertex { x: id as i32, y: 0 }
    }

    pub const fn shifted(self, dx: i32) -> Self {
        Vertex {
            x: self.x + dx,
            y: self.y,
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// A set of occupied vertices, stored sorted by `(x, y)`.
///
/// Connectivity depends on the host graph and is checked by
/// [`GridGraph::is_connected`], not by the constructor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Configuration(Vec<Vertex>);

/// Serialized as a list of `[x, y]` pairs.
impl Serialize for Configuration {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter().map(|v| [v.x, v.y]))
    }
}

impl Configuration {
    pub fn new(cells: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut cells: Vec<Vertex> = cells.into_iter().collect();
        cells.sort_unstable();
        let len = cells.len();
        cells.dedup();
        if cells.len() != len {
            return Err(Error::Domain("duplicate vertex in configuration".into()));
        }
        Ok(Configuration(cells))
    }

    /// Builds from cells already known to be distinct.
    pub(crate) fn from_sorted(cells: Vec<Vertex>) -> Self {
        debug_assert!(cells.windows(2).all(|w| w[0] < w[1]));
        Configuration(cells)
    }

    pub fn from_xy(cells: &[(i32, i32)]) -> Result<Self> {
        Self::new(cells.iter().map(|&(x, y)| Vertex::new(x, y)))
    }

    pub fn cells(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn translated(&self, dx: i32) -> Configuration {
        Configuration(self.0.iter().map(|v| v.shifted(dx)).collect())
    }

    pub fn min_x(&self) -> Option<i32> {
        self.0.first().map(|v| v.x)
    }

    pub fn max_x(&self) -> Option<i32> {
        self.0.last().map(|v| v.x)
    }

    /// `(C \ {from}) ∪ {to}` without any legality check.
    pub(crate) fn moved(&self, from: Vertex, to: Vertex) -> Configuration {
        let mut cells: Vec<Vertex> = self.0.iter().copied().filter(|&v| v != from).collect();
        let at = cells.binary_search(&to).unwrap_or_else(|i| i);
        cells.insert(at, to);
        Configuration(cells)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphKind {
    EightGrid { m: usize, n: usize },
    FourGrid { m: usize, n: usize },
    Explicit { adjacency: Vec<Vec<usize>> },
}

/// How initial and terminal configurations are recognised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    /// The configuration contains the sender (resp. receiver) vertex.
    Vertex,
    /// The configuration occupies the sender (resp. receiver) column.
    Column,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridGraph {
    kind: GraphKind,
    sender: Vertex,
    receiver: Vertex,
    membership: Membership,
}

impl GridGraph {
    /// `G_8(m, n)` with sender `(0,0)` and receiver `(m-1,0)`.
    pub fn eight_grid(m: usize, n: usize) -> Result<Self> {
        Self::grid(GraphKind::EightGrid { m, n }, m, n)
    }

    /// `G_4(m, n)` with sender `(0,0)` and receiver `(m-1,0)`.
    pub fn four_grid(m: usize, n: usize) -> Result<Self> {
        Self::grid(GraphKind::FourGrid { m, n }, m, n)
    }

    /// The two-row 8-grid strip every shipped algorithm runs on.
    pub fn strip(m: usize) -> Result<Self> {
        Self::eight_grid(m, 2)
    }

    fn grid(kind: GraphKind, m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::Domain(format!("grid dimensions must be positive, got {m}x{n}")));
        }
        if m > i32::MAX as usize / 2 || n > i32::MAX as usize / 2 {
            return Err(Error::Domain("grid too large".into()));
        }
        if m < 2 {
            return Err(Error::Domain("sender and receiver coincide when m = 1".into()));
        }
        Ok(GridGraph {
            kind,
            sender: Vertex::new(0, 0),
            receiver: Vertex::new(m as i32 - 1, 0),
            membership: Membership::Column,
        })
    }

    /// An explicit undirected graph on vertices `0..adjacency.len()`.
    pub fn explicit(vertices: usize, edges: &[(usize, usize)], sender: usize, receiver: usize) -> Result<Self> {
        let mut adjacency = vec![BTreeSet::new(); vertices];
        for &(u, v) in edges {
            if u >= vertices || v >= vertices {
                return Err(Error::Domain(format!("edge ({u},{v}) names a vertex outside 0..{vertices}")));
            }
            if u == v {
                return Err(Error::Domain(format!("self loop at {u}")));
            }
            adjacency[u].insert(v);
            adjacency[v].insert(u);
        }
        if sender >= vertices || receiver >= vertices {
            return Err(Error::Domain("sender or receiver outside the graph".into()));
        }
        if sender == receiver {
            return Err(Error::Domain("sender and receiver must differ".into()));
        }
        Ok(GridGraph {
            kind: GraphKind::Explicit {
                adjacency: adjacency.into_iter().map(|s| s.into_iter().collect()).collect(),
            },
            sender: Vertex::id(sender),
            receiver: Vertex::id(receiver),
            membership: Membership::Vertex,
        })
    }

    /// Parses `V E`, then `E` lines `u v`, then `S R`.
    pub fn parse_explicit(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let mut pair = |what: &str| -> Result<(usize, usize)> {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing {what} line")))?;
            let nums: Vec<&str> = line.split_whitespace().collect();
            if nums.len() != 2 {
                return Err(Error::Parse(format!("expected two integers for {what}, got {line:?}")));
            }
            let a = nums[0]
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer {:?}", nums[0])))?;
            let b = nums[1]
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer {:?}", nums[1])))?;
            Ok((a, b))
        };
        let (v, e) = pair("header")?;
        let edges = (0..e).map(|_| pair("edge")).collect::<Result<Vec<_>>>()?;
        let (s, r) = pair("sender/receiver")?;
        if lines.next().is_some() {
            return Err(Error::Parse("trailing content after sender/receiver line".into()));
        }
        Self::explicit(v, &edges, s, r)
    }

    pub fn with_membership(mut self, membership: Membership) -> Self {
        self.membership = membership;
        self
    }

    pub fn with_endpoints(mut self, sender: Vertex, receiver: Vertex) -> Result<Self> {
        if !self.contains(sender) || !self.contains(receiver) || sender == receiver {
            return Err(Error::Domain(format!("invalid endpoints {sender} -> {receiver}")));
        }
        self.sender = sender;
        self.receiver = receiver;
        Ok(self)
    }

    pub fn kind(&self) -> &GraphKind {
        &self.kind
    }

    pub fn sender(&self) -> Vertex {
        self.sender
    }

    pub fn receiver(&self) -> Vertex {
        self.receiver
    }

    pub fn membership(&self) -> Membership {
        self.membership
    }

    /// Column count for grid kinds.
    pub fn columns(&self) -> Option<usize> {
        match self.kind {
            GraphKind::EightGrid { m, .. } | GraphKind::FourGrid { m, .. } => Some(m),
            GraphKind::Explicit { .. } => None,
        }
    }

    pub fn rows(&self) -> Option<usize> {
        match self.kind {
            GraphKind::EightGrid { n, .. } | GraphKind::FourGrid { n, .. } => Some(n),
            GraphKind::Explicit { .. } => None,
        }
    }

    pub fn is_grid(&self) -> bool {
        !matches!(self.kind, GraphKind::Explicit { .. })
    }

    pub fn contains(&self, v: Vertex) -> bool {
        match &self.kind {
            GraphKind::EightGrid { m, n } | GraphKind::FourGrid { m, n } => {
                v.x >= 0 && v.y >= 0 && (v.x as usize) < *m && (v.y as usize) < *n
            }
            GraphKind::Explicit { adjacency } => v.y == 0 && v.x >= 0 && (v.x as usize) < adjacency.len(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        match &self.kind {
            GraphKind::EightGrid { m, n } | GraphKind::FourGrid { m, n } => m * n,
            GraphKind::Explicit { adjacency } => adjacency.len(),
        }
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        match &self.kind {
            GraphKind::EightGrid { m, n } | GraphKind::FourGrid { m, n } => (0..*m as i32)
                .flat_map(|x| (0..*n as i32).map(move |y| Vertex::new(x, y)))
                .collect(),
            GraphKind::Explicit { adjacency } => (0..adjacency.len()).map(Vertex::id).collect(),
        }
    }

    pub fn neighbors(&self, v: Vertex) -> Result<Vec<Vertex>> {
        if !self.contains(v) {
            return Err(Error::Domain(format!("vertex {v} out of bounds")));
        }
        Ok(self.neighbors_unchecked(v))
    }

    pub(crate) fn neighbors_unchecked(&self, v: Vertex) -> Vec<Vertex> {
        const KING: [(i32, i32); 8] = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)];
        const ROOK: [(i32, i32); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];
        match &self.kind {
            GraphKind::EightGrid { .. } => self.offsets(v, &KING),
            GraphKind::FourGrid { .. } => self.offsets(v, &ROOK),
            GraphKind::Explicit { adjacency } => adjacency[v.x as usize].iter().map(|&u| Vertex::id(u)).collect(),
        }
    }

    fn offsets(&self, v: Vertex, deltas: &[(i32, i32)]) -> Vec<Vertex> {
        deltas
            .iter()
            .map(|&(dx, dy)| Vertex::new(v.x + dx, v.y + dy))
            .filter(|&u| self.contains(u))
            .collect()
    }

    pub fn is_adjacent(&self, u: Vertex, v: Vertex) -> bool {
        if u == v || !self.contains(u) || !self.contains(v) {
            return false;
        }
        match &self.kind {
            GraphKind::EightGrid { .. } => (u.x - v.x).abs() <= 1 && (u.y - v.y).abs() <= 1,
            GraphKind::FourGrid { .. } => (u.x - v.x).abs() + (u.y - v.y).abs() == 1,
            GraphKind::Explicit { adjacency } => adjacency[u.x as usize].binary_search(&(v.x as usize)).is_ok(),
        }
    }

    /// Whether the subgraph induced by `cells` is connected. The empty set
    /// counts as connected.
    pub fn is_connected(&self, cells: &[Vertex]) -> Result<bool> {
        if let Some(v) = cells.iter().find(|&&v| !self.contains(v)) {
            return Err(Error::Domain(format!("vertex {v} out of bounds")));
        }
        Ok(self.connected_unchecked(cells))
    }

    pub(crate) fn connected_unchecked(&self, cells: &[Vertex]) -> bool {
        let Some(&start) = cells.first() else {
            return true;
        };
        let members: HashSet<Vertex> = cells.iter().copied().collect();
        let mut seen = HashSet::with_capacity(cells.len());
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for u in self.neighbors_unchecked(v) {
                if members.contains(&u) && seen.insert(u) {
                    stack.push(u);
                }
            }
        }
        seen.len() == members.len()
    }

    /// Breadth-first distance; `None` stands for "infinite" (unreachable).
    pub fn distance(&self, u: Vertex, v: Vertex) -> Result<Option<usize>> {
        for w in [u, v] {
            if !self.contains(w) {
                return Err(Error::Domain(format!("vertex {w} out of bounds")));
            }
        }
        if u == v {
            return Ok(Some(0));
        }
        let mut seen = HashSet::from([u]);
        let mut queue = VecDeque::from([(u, 0usize)]);
        while let Some((w, d)) = queue.pop_front() {
            for x in self.neighbors_unchecked(w) {
                if x == v {
                    return Ok(Some(d + 1));
                }
                if seen.insert(x) {
                    queue.push_back((x, d + 1));
                }
            }
        }
        Ok(None)
    }

    pub fn sender_distance(&self) -> Option<usize> {
        self.distance(self.sender, self.receiver).ok().flatten()
    }

    pub fn is_initial(&self, c: &Configuration) -> bool {
        self.touches(c, self.sender)
    }

    pub fn is_terminal(&self, c: &Configuration) -> bool {
        self.touches(c, self.receiver)
    }

    fn touches(&self, c: &Configuration, target: Vertex) -> bool {
        match (self.membership, self.is_grid()) {
            (Membership::Column, true) => c.cells().iter().any(|v| v.x == target.x),
            _ => c.contains(target),
        }
    }

    /// Checks bounds and connectivity of `c`.
    pub fn validate(&self, c: &Configuration) -> Result<()> {
        if !self.is_connected(c.cells())? {
            return Err(Error::Domain(format!("configuration {c} is not connected")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(cells: &[(i32, i32)]) -> BTreeSet<Vertex> {
        cells.iter().map(|&(x, y)| Vertex::new(x, y)).collect()
    }

    #[test]
    fn eight_grid_neighbors_at_bottom_edge() {
        let g = GridGraph::eight_grid(5, 2).unwrap();
        let got: BTreeSet<_> = g.neighbors(Vertex::new(1, 0)).unwrap().into_iter().collect();
        assert_eq!(got, set(&[(0, 0), (0, 1), (1, 1), (2, 0), (2, 1)]));
    }

    #[test]
    fn four_grid_neighbors_interior() {
        let g = GridGraph::four_grid(3, 3).unwrap();
        let got: BTreeSet<_> = g.neighbors(Vertex::new(1, 1)).unwrap().into_iter().collect();
        assert_eq!(got, set(&[(0, 1), (2, 1), (1, 0), (1, 2)]));
    }

    #[test]
    fn single_vertex_has_no_neighbors() {
        let g = GridGraph::explicit(2, &[], 0, 1).unwrap();
        assert!(g.neighbors(Vertex::id(0)).unwrap().is_empty());
    }

    #[test]
    fn neighbors_out_of_bounds() {
        let g = GridGraph::eight_grid(5, 2).unwrap();
        assert!(matches!(g.neighbors(Vertex::new(5, 0)), Err(Error::Domain(_))));
        assert!(matches!(g.neighbors(Vertex::new(0, -1)), Err(Error::Domain(_))));
    }

    #[test]
    fn connectivity_examples() {
        let g = GridGraph::eight_grid(5, 2).unwrap();
        let diag = [Vertex::new(0, 0), Vertex::new(1, 1), Vertex::new(2, 0)];
        assert!(g.is_connected(&diag).unwrap());
        assert!(!g.is_connected(&[Vertex::new(0, 0), Vertex::new(2, 0)]).unwrap());
        assert!(g.is_connected(&[Vertex::new(3, 1)]).unwrap());
        assert!(g.is_connected(&[]).unwrap());
        let four = GridGraph::four_grid(5, 2).unwrap();
        assert!(!four.is_connected(&diag).unwrap());
    }

    #[test]
    fn distances() {
        let g8 = GridGraph::eight_grid(10, 2).unwrap();
        assert_eq!(g8.distance(Vertex::new(0, 0), Vertex::new(9, 0)).unwrap(), Some(9));
        let g4 = GridGraph::four_grid(10, 2).unwrap();
        assert_eq!(g4.distance(Vertex::new(0, 0), Vertex::new(9, 1)).unwrap(), Some(10));
        assert_eq!(g4.distance(Vertex::new(3, 1), Vertex::new(3, 1)).unwrap(), Some(0));
        let split = GridGraph::explicit(4, &[(0, 1), (2, 3)], 0, 3).unwrap();
        assert_eq!(split.distance(Vertex::id(0), Vertex::id(3)).unwrap(), None);
    }

    #[test]
    fn parse_graph_file() {
        let g = GridGraph::parse_explicit("3 2\n0 1\n1 2\n0 2\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.sender(), Vertex::id(0));
        assert_eq!(g.receiver(), Vertex::id(2));
        assert_eq!(g.distance(g.sender(), g.receiver()).unwrap(), Some(2));
        assert!(GridGraph::parse_explicit("3 2\n0 1\n").is_err());
        assert!(GridGraph::parse_explicit("3 1\n0 7\n0 2\n").is_err());
        assert!(GridGraph::parse_explicit("3 1\n0 1\n1 1\n").is_err());
    }

    #[test]
    fn duplicate_cells_rejected() {
        assert!(Configuration::from_xy(&[(0, 0), (0, 0)]).is_err());
    }

    #[test]
    fn column_membership_on_grids() {
        let g = GridGraph::strip(6).unwrap();
        let c = Configuration::from_xy(&[(0, 1), (1, 0)]).unwrap();
        assert!(g.is_initial(&c));
        assert!(!g.clone().with_membership(Membership::Vertex).is_initial(&c));
        let t = Configuration::from_xy(&[(4, 0), (5, 1)]).unwrap();
        assert!(g.is_terminal(&t));
    }
}
