use std::collections::BTreeSet;
use std::fmt;

use super::HomologyError;

/// Reflexive transitive digraph on vertices `0..vertex_count`. The pair
/// `(i, j)` stands for the matrix unit `e_ij`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Digraph {
    vertex_count: usize,
    edges: BTreeSet<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Violation {
    Reflexivity(usize),
    /// `(i,j)` and `(j,k)` present without `(i,k)`.
    Transitivity { i: usize, j: usize, k: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // 1-based, matching the edge-list format
        match self {
            Violation::Reflexivity(i) => write!(f, "reflexivity at {}", i + 1),
            Violation::Transitivity { i, j, k } => {
                write!(f, "transitivity: ({},{}) and ({},{}) without ({},{})", i + 1, j + 1, j + 1, k + 1, i + 1, k + 1)
            }
        }
    }
}

impl Digraph {
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, HomologyError> {
        let edges: BTreeSet<_> = edges.into_iter().collect();
        if vertex_count == 0 {
            return Err(HomologyError::EmptyDigraph);
        }
        if let Some(&(i, j)) = edges.iter().find(|&&(i, j)| i >= vertex_count || j >= vertex_count) {
            return Err(HomologyError::VertexOutOfRange { i, j, n: vertex_count });
        }
        Ok(Digraph { vertex_count, edges })
    }

    /// Adds all loops to the given edges.
    pub fn with_loops(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, HomologyError> {
        Self::new(vertex_count, edges.into_iter().chain((0..vertex_count).map(|i| (i, i))))
    }

    /// The 4-cycle digraph with sources 0, 1 and sinks 2, 3.
    pub fn four_cycle() -> Self {
        Self::with_loops(4, crate::cycle::CYCLE_EDGES).expect("static digraph")
    }

    /// Digraph of `A(D4)` with vertex `v` blown up into a complete block of size `dims[v]`.
    pub fn four_cycle_tensor(dims: [usize; 4]) -> Self {
        Self::four_cycle().blow_up(&dims)
    }

    /// Replace vertex `v` by a complete block of `sizes[v]` vertices.
    pub fn blow_up(&self, sizes: &[usize]) -> Self {
        assert_eq!(sizes.len(), self.vertex_count);
        let offsets: Vec<usize> = sizes
            .iter()
            .scan(0, |acc, &s| {
                let o = *acc;
                *acc += s;
                Some(o)
            })
            .collect();
        let total: usize = sizes.iter().sum();
        let mut edges = BTreeSet::new();
        for &(i, j) in &self.edges {
            for x in 0..sizes[i] {
                for y in 0..sizes[j] {
                    edges.insert((offsets[i] + x, offsets[j] + y));
                }
            }
        }
        Digraph { vertex_count: total, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i, j))
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.has_edge(i, j) || self.has_edge(j, i)
    }

    pub fn transpose(&self) -> Self {
        Digraph { vertex_count: self.vertex_count, edges: self.edges.iter().map(|&(i, j)| (j, i)).collect() }
    }

    pub fn transitive_closure(&self) -> Self {
        let n = self.vertex_count;
        let mut reach = vec![vec![false; n]; n];
        for &(i, j) in &self.edges {
            reach[i][j] = true;
        }
        for k in 0..n {
            let through = reach[k].clone();
            for row in reach.iter_mut().filter(|row| row[k]) {
                for (x, &y) in row.iter_mut().zip(&through) {
                    *x |= y;
                }
            }
        }
        let edges = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| reach[i][j]).collect();
        Digraph { vertex_count: n, edges }
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for i in 0..self.vertex_count {
            if !self.has_edge(i, i) {
                out.push(Violation::Reflexivity(i));
            }
        }
        for &(i, j) in &self.edges {
            for &(_, k) in self.edges.range((j, 0)..=(j, usize::MAX)) {
                if !self.has_edge(i, k) {
                    out.push(Violation::Transitivity { i, j, k });
                }
            }
        }
        out
    }

    pub(crate) fn require_valid(&self) -> Result<(), HomologyError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(HomologyError::InvalidDigraph(v.iter().map(ToString::to_string).collect()))
        }
    }

    /// Quotient by `i ~ j` iff both `(i,j)` and `(j,i)` are edges; classes are
    /// numbered by their least vertex. Also returns the vertex-to-class map.
    pub fn reduced(&self) -> Result<(Digraph, Vec<usize>), HomologyError> {
        self.require_valid()?;
        let n = self.vertex_count;
        let mut class = vec![usize::MAX; n];
        let mut count = 0;
        for i in 0..n {
            if class[i] != usize::MAX {
                continue;
            }
            for (j, c) in class.iter_mut().enumerate().skip(i) {
                if *c == usize::MAX && self.has_edge(i, j) && self.has_edge(j, i) {
                    *c = count;
                }
            }
            count += 1;
        }
        let edges: BTreeSet<_> = self.edges.iter().map(|&(i, j)| (class[i], class[j])).collect();
        Ok((Digraph { vertex_count: count, edges }, class))
    }

    /// Parse the 1-based `i j` edge-list format; `#` starts a comment. The
    /// vertex count is the largest index mentioned.
    pub fn parse(text: &str) -> Result<Self, HomologyError> {
        let mut edges = Vec::new();
        let mut n = 0;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |msg: &str| HomologyError::Syntax { line: lineno + 1, message: msg.to_string() };
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(syntax("expected two vertex indices"));
            }
            let parse = |s: &str| s.parse::<usize>().ok().filter(|&v| v >= 1).ok_or_else(|| syntax("vertex indices are positive integers"));
            let (i, j) = (parse(parts[0])?, parse(parts[1])?);
            n = n.max(i).max(j);
            edges.push((i - 1, j - 1));
        }
        Digraph::new(n, edges)
    }
}

/// Vertex map between digraphs, one multiplicity-one summand of a regular morphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MorphismSummand {
    pub vertex_map: Vec<usize>,
}

impl MorphismSummand {
    pub fn check(&self, source: &Digraph, target: &Digraph) -> Result<(), HomologyError> {
        if self.vertex_map.len() != source.vertex_count() || self.vertex_map.iter().any(|&v| v >= target.vertex_count()) {
            return Err(HomologyError::BadVertexMap);
        }
        for &(i, j) in source.edges() {
            let (fi, fj) = (self.vertex_map[i], self.vertex_map[j]);
            if !target.has_edge(fi, fj) {
                return Err(HomologyError::EdgeNotPreserved { i: i + 1, j: j + 1, fi: fi + 1, fj: fj + 1 });
            }
        }
        Ok(())
    }

    pub fn from_symmetry(s: crate::cycle::Symmetry) -> Self {
        MorphismSummand { vertex_map: (0..4).map(|v| s.apply(v)).collect() }
    }
}
