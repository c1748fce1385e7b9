/// The four symmetries of the 4-cycle digraph, which form a Klein four-group.
///
/// Vertices are numbered 1..4 with sources {1, 2} and sinks {3, 4}; the
/// digraph has edges (1,3), (1,4), (2,4), (2,3) besides the loops.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symmetry {
    Identity,
    /// 1 <-> 2
    SourceSwap,
    /// 1 <-> 2 and 3 <-> 4
    Rotation,
    /// 3 <-> 4
    SinkSwap,
}

impl Symmetry {
    pub const ALL: [Symmetry; 4] = [
        Symmetry::Identity,
        Symmetry::SourceSwap,
        Symmetry::Rotation,
        Symmetry::SinkSwap,
    ];

    /// Position of this symmetry in a signature 4-tuple.
    pub fn index(self) -> usize {
        match self {
            Symmetry::Identity => 0,
            Symmetry::SourceSwap => 1,
            Symmetry::Rotation => 2,
            Symmetry::SinkSwap => 3,
        }
    }

    pub fn from_index(i: usize) -> Option<Symmetry> {
        Self::ALL.get(i).copied()
    }

    pub fn compose(self, other: Symmetry) -> Symmetry {
        // Klein group: encode as bit pairs (source flip, sink flip) and xor.
        let bits = |s: Symmetry| match s {
            Symmetry::Identity => 0u8,
            Symmetry::SourceSwap => 0b01,
            Symmetry::SinkSwap => 0b10,
            Symmetry::Rotation => 0b11,
        };
        match bits(self) ^ bits(other) {
            0 => Symmetry::Identity,
            0b01 => Symmetry::SourceSwap,
            0b10 => Symmetry::SinkSwap,
            _ => Symmetry::Rotation,
        }
    }

    /// Sign by which the symmetry acts on the first homology of the 4-cycle.
    pub fn h1_character(self) -> i64 {
        match self {
            Symmetry::Identity | Symmetry::Rotation => 1,
            Symmetry::SourceSwap | Symmetry::SinkSwap => -1,
        }
    }

    /// Image of a vertex (0-based) under the symmetry.
    pub fn apply(self, vertex: usize) -> usize {
        let swap_sources = matches!(self, Symmetry::SourceSwap | Symmetry::Rotation);
        let swap_sinks = matches!(self, Symmetry::SinkSwap | Symmetry::Rotation);
        match vertex {
            0 if swap_sources => 1,
            1 if swap_sources => 0,
            2 if swap_sinks => 3,
            3 if swap_sinks => 2,
            v => v,
        }
    }

    /// Permutation matrix acting on K0 = Z^4, `m[i][j] = 1` iff `apply(j) == i`.
    pub fn permutation(self) -> [[i64; 4]; 4] {
        let mut m = [[0; 4]; 4];
        for (j, _) in m.clone().iter().enumerate() {
            m[self.apply(j)][j] = 1;
        }
        m
    }
}

/// Edges of the 4-cycle digraph besides the loops, in the order
/// e13, e14, e24, e23 used for the four generator unitaries.
pub const CYCLE_EDGES: [(usize, usize); 4] = [(0, 2), (0, 3), (1, 3), (1, 2)];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn klein_table() {
        use Symmetry::*;
        for s in Symmetry::ALL {
            assert_eq!(s.compose(s), Identity);
            assert_eq!(Identity.compose(s), s);
        }
        assert_eq!(SourceSwap.compose(Rotation), SinkSwap);
        assert_eq!(SourceSwap.compose(SinkSwap), Rotation);
        assert_eq!(Rotation.compose(SinkSwap), SourceSwap);
    }

    #[test]
    fn symmetries_preserve_edges() {
        for s in Symmetry::ALL {
            for (i, j) in CYCLE_EDGES {
                assert!(CYCLE_EDGES.contains(&(s.apply(i), s.apply(j))));
            }
        }
    }

    #[test]
    fn character_is_multiplicative() {
        for s in Symmetry::ALL {
            for t in Symmetry::ALL {
                assert_eq!(s.compose(t).h1_character(), s.h1_character() * t.h1_character());
            }
        }
    }
}
