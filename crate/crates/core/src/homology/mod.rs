//! Digraph algebras, their clique complexes, and integral simplicial homology
//! through Smith normal form.

mod complex;
mod digraph;
mod matrix;
mod snf;

use thiserror::Error;

use crate::scalar::Int;

pub use complex::{clique_complex, SimplicialComplex};
pub use digraph::{Digraph, MorphismSummand, Violation};
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, Smith};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("digraph has no vertices")]
    EmptyDigraph,
    #[error("edge ({i},{j}) out of range for {n} vertices")]
    VertexOutOfRange { i: usize, j: usize, n: usize },
    #[error("digraph is not reflexive and transitive: {}", .0.join("; "))]
    InvalidDigraph(Vec<String>),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("vertex map has the wrong length or leaves the target")]
    BadVertexMap,
    #[error("summand sends edge ({i},{j}) to non-edge ({fi},{fj})")]
    EdgeNotPreserved { i: usize, j: usize, fi: usize, fj: usize },
}

/// `Z^betti ⊕ ⨁ Z/t` for `t` in `torsion`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomologyGroup<I> {
    pub betti: usize,
    pub torsion: Vec<I>,
}

/// Which complex a digraph algebra is assigned.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Convention {
    /// Clique complex of the reduced digraph; stable under tensoring with matrix algebras.
    #[default]
    Reduced,
    /// Clique complex of the digraph itself.
    Full,
}

/// `H_n` of a complex together with the data needed to read off coordinates
/// of cycles and to produce representative generators.
#[derive(Clone, Debug)]
pub struct HomologyBasis<I> {
    dim: usize,
    /// Columns span `ker ∂_n` inside `C_n`.
    kernel: IntMatrix<I>,
    /// Rows give kernel coordinates of a cycle.
    kernel_coords: IntMatrix<I>,
    /// Change of basis from the second Smith decomposition.
    u2: IntMatrix<I>,
    u2_inv: IntMatrix<I>,
    factors: Vec<I>,
}

impl<I: Int> HomologyBasis<I> {
    pub fn compute(c: &SimplicialComplex, dim: usize) -> Self {
        let dn: IntMatrix<I> = c.boundary(dim);
        let f1 = smith_normal_form(&dn);
        let kernel = f1.v.cols_from(f1.rank);
        let kernel_coords = f1.v_inv.rows_from(f1.rank);
        let dn1: IntMatrix<I> = c.boundary(dim + 1);
        let b = if dn1.cols() == 0 {
            IntMatrix::zeros(kernel.cols(), 0)
        } else {
            kernel_coords.mul(&dn1)
        };
        let f2 = smith_normal_form(&b);
        let factors = f2.invariant_factors();
        HomologyBasis { dim, kernel, kernel_coords, u2: f2.u, u2_inv: f2.u_inv, factors }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn group(&self) -> HomologyGroup<I> {
        HomologyGroup {
            betti: self.kernel.cols() - self.factors.len(),
            torsion: self.factors.iter().filter(|d| !d.is_one()).cloned().collect(),
        }
    }

    pub fn betti(&self) -> usize {
        self.kernel.cols() - self.factors.len()
    }

    /// Representative cycles (columns over `C_n`) of the free generators.
    pub fn free_generators(&self) -> Vec<Vec<I>> {
        let gens = self.kernel.mul(&self.u2_inv);
        (self.factors.len()..gens.cols()).map(|j| gens.column(j)).collect()
    }

    /// Free coordinates of a cycle. Panics if `z` is not in `ker ∂_n`.
    pub fn free_coords(&self, z: &[I]) -> Vec<I> {
        let y = self.kernel_coords.mul_vec(z);
        assert_eq!(self.kernel.mul_vec(&y), z, "chain is not a cycle");
        self.u2.mul_vec(&y)[self.factors.len()..].to_vec()
    }
}

pub fn homology<I: Int>(c: &SimplicialComplex, n: usize) -> HomologyGroup<I> {
    HomologyBasis::compute(c, n).group()
}

pub fn digraph_complex(g: &Digraph, conv: Convention) -> Result<SimplicialComplex, HomologyError> {
    match conv {
        Convention::Reduced => clique_complex(&g.reduced()?.0),
        Convention::Full => clique_complex(g),
    }
}

pub fn digraph_homology<I: Int>(g: &Digraph, n: usize, conv: Convention) -> Result<HomologyGroup<I>, HomologyError> {
    Ok(homology(&digraph_complex(g, conv)?, n))
}

/// Induced map on free parts of `H1`, in the bases reported alongside.
#[derive(Clone, Debug)]
pub struct InducedH1<I> {
    /// `target_betti × source_betti`.
    pub matrix: IntMatrix<I>,
    /// Source generators as `(edge, coefficient)` lists, 0-based vertices.
    pub source_basis: Vec<Vec<((usize, usize), I)>>,
    pub target_basis: Vec<Vec<((usize, usize), I)>>,
}

/// Sum of the chain maps of the summands on 1-cycles of the clique complexes
/// of `source` and `target` (taken as given, without reduction).
pub fn induced_h1<I: Int>(
    summands: &[MorphismSummand],
    source: &Digraph,
    target: &Digraph,
) -> Result<InducedH1<I>, HomologyError> {
    for s in summands {
        s.check(source, target)?;
    }
    let cs = clique_complex(source)?;
    let ct = clique_complex(target)?;
    let hs = HomologyBasis::<I>::compute(&cs, 1);
    let ht = HomologyBasis::<I>::compute(&ct, 1);
    let src_gens = hs.free_generators();
    let mut matrix = IntMatrix::zeros(ht.betti(), hs.betti());
    for (j, z) in src_gens.iter().enumerate() {
        let mut image = vec![I::zero(); ct.count(1)];
        for s in summands {
            for (e, coeff) in cs.simplices(1).iter().zip(z) {
                if coeff.is_zero() {
                    continue;
                }
                let (fu, fv) = (s.vertex_map[e[0]], s.vertex_map[e[1]]);
                if fu == fv {
                    continue;
                }
                let (lo, hi, sign) = if fu < fv { (fu, fv, I::one()) } else { (fv, fu, -I::one()) };
                let idx = ct.index_of(&[lo, hi]).expect("edge-preserving summand lands on an edge");
                image[idx] = image[idx].clone() + sign * coeff.clone();
            }
        }
        for (i, v) in ht.free_coords(&image).into_iter().enumerate() {
            matrix.set(i, j, v);
        }
    }
    let describe = |c: &SimplicialComplex, gens: Vec<Vec<I>>| {
        gens.into_iter()
            .map(|z| {
                c.simplices(1)
                    .iter()
                    .zip(z)
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(e, v)| ((e[0], e[1]), v))
                    .collect()
            })
            .collect()
    };
    Ok(InducedH1 { matrix, source_basis: describe(&cs, src_gens), target_basis: describe(&ct, ht.free_generators()) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::{Signature, Symmetry};

    fn d4() -> Digraph {
        Digraph::four_cycle()
    }

    #[test]
    fn validate_examples() {
        assert!(d4().validate().is_empty());
        let no_loop = Digraph::new(2, [(1, 1), (0, 1)]).unwrap();
        assert_eq!(no_loop.validate(), vec![Violation::Reflexivity(0)]);
        let chain = Digraph::with_loops(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(chain.validate(), vec![Violation::Transitivity { i: 0, j: 1, k: 2 }]);
        assert!(clique_complex(&chain).is_err());
    }

    #[test]
    fn clique_examples() {
        let c = clique_complex(&d4()).unwrap();
        assert_eq!(c.count(0), 4);
        assert_eq!(c.simplices(1), &[vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]]);
        assert_eq!(c.count(2), 0);
        let tri = Digraph::with_loops(3, [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)]).unwrap();
        assert_eq!(clique_complex(&tri).unwrap().count(2), 1);
        let discrete = Digraph::with_loops(5, []).unwrap();
        let c = clique_complex(&discrete).unwrap();
        assert_eq!((c.count(0), c.count(1)), (5, 0));
    }

    #[test]
    fn homology_examples() {
        let c = clique_complex(&d4()).unwrap();
        assert_eq!(homology::<i64>(&c, 1), HomologyGroup { betti: 1, torsion: vec![] });
        assert_eq!(homology::<i64>(&c, 0).betti, 1);
        let sphere = SimplicialComplex::from_facets(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]);
        assert_eq!(homology::<i64>(&sphere, 2).betti, 1);
        assert_eq!(homology::<i64>(&sphere, 1).betti, 0);
    }

    #[test]
    fn projective_plane_torsion() {
        // minimal 6-vertex triangulation
        let facets: Vec<Vec<usize>> = [
            [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 1],
            [1, 2, 4], [2, 3, 5], [3, 4, 1], [4, 5, 2], [5, 1, 3],
        ]
        .iter()
        .map(|f| f.to_vec())
        .collect();
        let rp2 = SimplicialComplex::from_facets(&facets);
        assert_eq!(homology::<i64>(&rp2, 1), HomologyGroup { betti: 0, torsion: vec![2] });
        assert_eq!(homology::<i64>(&rp2, 2).betti, 0);
    }

    #[test]
    fn boundary_squares_to_zero() {
        let g = Digraph::four_cycle_tensor([2, 1, 2, 2]);
        let c = clique_complex(&g).unwrap();
        for d in 1..c.dimension().unwrap() {
            assert!(c.boundary::<i64>(d).mul(&c.boundary(d + 1)).is_zero());
        }
    }

    #[test]
    fn reduction_examples() {
        let (r, _) = Digraph::four_cycle_tensor([2, 2, 2, 2]).reduced().unwrap();
        assert_eq!(r, d4());
        assert_eq!(d4().reduced().unwrap().0, d4());
        let complete = Digraph::new(4, (0..4).flat_map(|i| (0..4).map(move |j| (i, j)))).unwrap();
        assert_eq!(complete.reduced().unwrap().0.vertex_count(), 1);
    }

    #[test]
    fn tensor_h1_is_z_in_both_conventions() {
        for n in 1..=3 {
            let g = Digraph::four_cycle_tensor([n; 4]);
            for conv in [Convention::Reduced, Convention::Full] {
                let h = digraph_homology::<i64>(&g, 1, conv).unwrap();
                assert_eq!(h, HomologyGroup { betti: 1, torsion: vec![] });
            }
        }
    }

    #[test]
    fn induced_examples() {
        let id = MorphismSummand::from_symmetry(Symmetry::Identity);
        let swap = MorphismSummand::from_symmetry(Symmetry::SourceSwap);
        let rot = MorphismSummand::from_symmetry(Symmetry::Rotation);
        let m = |s: &[MorphismSummand]| *induced_h1::<i64>(s, &d4(), &d4()).unwrap().matrix.get(0, 0);
        assert_eq!(m(std::slice::from_ref(&id)), 1);
        assert_eq!(m(&[id.clone(), swap]), 0);
        assert_eq!(m(&[id, rot]), 2);
    }

    #[test]
    fn induced_matches_signature_character() {
        for r in [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [3, 1, 2, 1], [2, 0, 1, 4]] {
            let s = Signature::<i64>::from_i64(r).unwrap();
            let summands: Vec<_> = s.summand_types().into_iter().map(MorphismSummand::from_symmetry).collect();
            let got = *induced_h1::<i64>(&summands, &d4(), &d4()).unwrap().matrix.get(0, 0);
            assert_eq!(got.abs(), s.h1().abs());
            assert_eq!(got, s.h1());
        }
    }

    #[test]
    fn non_edge_preserving_rejected() {
        let bad = MorphismSummand { vertex_map: vec![2, 1, 0, 3] };
        assert!(matches!(
            induced_h1::<i64>(&[bad], &d4(), &d4()),
            Err(HomologyError::EdgeNotPreserved { .. })
        ));
    }

    #[test]
    fn parse_edge_list() {
        let g = Digraph::parse("# D4\n1 1\n2 2\n3 3\n4 4\n1 3\n1 4\n2 3\n2 4\n").unwrap();
        assert_eq!(g, d4());
        assert!(matches!(Digraph::parse("1 x"), Err(HomologyError::Syntax { line: 1, .. })));
    }
}
