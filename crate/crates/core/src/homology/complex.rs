use super::digraph::Digraph;
use super::matrix::IntMatrix;
use super::HomologyError;
use crate::scalar::Int;

/// Simplices grouped by dimension; each simplex is a sorted vertex list and
/// each dimension is sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    simplices: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplex {
    /// Downward closure of the given simplices.
    pub fn from_facets(facets: &[Vec<usize>]) -> Self {
        use std::collections::BTreeSet;
        let mut all: Vec<BTreeSet<Vec<usize>>> = Vec::new();
        for f in facets {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            let k = f.len();
            for mask in 1u64..(1u64 << k) {
                let s: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| f[b]).collect();
                let dim = s.len() - 1;
                if all.len() <= dim {
                    all.resize_with(dim + 1, BTreeSet::new);
                }
                all[dim].insert(s);
            }
        }
        SimplicialComplex { simplices: all.into_iter().map(|s| s.into_iter().collect()).collect() }
    }

    pub fn dimension(&self) -> Option<usize> {
        self.simplices.len().checked_sub(1)
    }

    pub fn simplices(&self, dim: usize) -> &[Vec<usize>] {
        self.simplices.get(dim).map_or(&[], |v| v.as_slice())
    }

    pub fn count(&self, dim: usize) -> usize {
        self.simplices(dim).len()
    }

    pub fn index_of(&self, simplex: &[usize]) -> Option<usize> {
        let dim = simplex.len().checked_sub(1)?;
        self.simplices(dim).binary_search_by(|s| s.as_slice().cmp(simplex)).ok()
    }

    pub fn is_downward_closed(&self) -> bool {
        (1..self.simplices.len()).all(|d| {
            self.simplices(d).iter().all(|s| (0..s.len()).all(|k| self.index_of(&face(s, k)).is_some()))
        })
    }

    /// Boundary `C_dim -> C_{dim-1}`; rows index (dim−1)-simplices. For
    /// `dim = 0` this is the zero map to the zero group.
    pub fn boundary<I: Int>(&self, dim: usize) -> IntMatrix<I> {
        if dim == 0 {
            return IntMatrix::zeros(0, self.count(0));
        }
        let mut m = IntMatrix::zeros(self.count(dim - 1), self.count(dim));
        for (j, s) in self.simplices(dim).iter().enumerate() {
            for k in 0..s.len() {
                let i = self.index_of(&face(s, k)).expect("downward closed");
                let sign = if k % 2 == 0 { I::one() } else { -I::one() };
                m.set(i, j, sign);
            }
        }
        m
    }
}

fn face(s: &[usize], k: usize) -> Vec<usize> {
    s.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &v)| v).collect()
}

/// Subsets whose vertices are pairwise joined by an edge in some direction.
pub fn clique_complex(g: &Digraph) -> Result<SimplicialComplex, HomologyError> {
    g.require_valid()?;
    let n = g.vertex_count();
    let mut levels: Vec<Vec<Vec<usize>>> = vec![(0..n).map(|v| vec![v]).collect()];
    loop {
        let last = levels.last().expect("nonempty");
        let mut next = Vec::new();
        for s in last {
            let top = *s.last().expect("nonempty simplex");
            for v in top + 1..n {
                if s.iter().all(|&u| g.adjacent(u, v)) {
                    let mut t = s.clone();
                    t.push(v);
                    next.push(t);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        levels.push(next);
    }
    Ok(SimplicialComplex { simplices: levels })
}
