use rand::Rng;

use super::linalg::{
    dist_to_partial_isometry, haar_unitary, is_finite, op_norm, real, unitarity_residual, upper_rank, CMatrix,
};
use super::NumericError;
use crate::cycle::{Signature, Symmetry};
use crate::scalar::Real;

/// The four generators `e13, e14, e24, e23` of `A(D4)`, in this order.
pub const GENERATORS: [&str; 4] = ["e13", "e14", "e24", "e23"];

/// Position of a block inside one of the four unitaries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlockKind {
    Alpha,
    Beta,
    Delta,
    Gamma,
}

impl BlockKind {
    pub const ALL: [BlockKind; 4] = [BlockKind::Alpha, BlockKind::Beta, BlockKind::Delta, BlockKind::Gamma];

    fn corner(self) -> (usize, usize) {
        match self {
            BlockKind::Alpha => (0, 0),
            BlockKind::Beta => (0, 1),
            BlockKind::Delta => (1, 0),
            BlockKind::Gamma => (1, 1),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BlockKind::Alpha => "α",
            BlockKind::Beta => "β",
            BlockKind::Delta => "δ",
            BlockKind::Gamma => "γ",
        }
    }
}

/// The block `(generator, kind)` carrying each summand type, per type.
pub const QUADRUPLES: [[(usize, BlockKind); 4]; 4] = [
    [(0, BlockKind::Alpha), (1, BlockKind::Beta), (2, BlockKind::Gamma), (3, BlockKind::Delta)],
    [(0, BlockKind::Delta), (1, BlockKind::Gamma), (2, BlockKind::Beta), (3, BlockKind::Alpha)],
    [(0, BlockKind::Gamma), (1, BlockKind::Delta), (2, BlockKind::Alpha), (3, BlockKind::Beta)],
    [(0, BlockKind::Beta), (1, BlockKind::Alpha), (2, BlockKind::Delta), (3, BlockKind::Gamma)],
];

// Spaces: rows P' R' Q' S' are 0..4, columns P R Q S are 0..4 as well.
const P: usize = 0;
const R: usize = 1;
const Q: usize = 2;
const S: usize = 3;

/// Row spaces (first, second) and column spaces of each generator's unitary.
const ROW_SPACES: [[usize; 2]; 4] = [[P, Q], [P, Q], [R, S], [R, S]];
const COL_SPACES: [[usize; 2]; 4] = [[P, Q], [R, S], [R, S], [P, Q]];

/// A star-extendible embedding of `A(D4)`, given by the four unitaries that
/// carry `φ(e33) → φ(e11)`, `φ(e44) → φ(e11)`, `φ(e44) → φ(e22)` and
/// `φ(e33) → φ(e22)`.
///
/// `φ(e11)` has rank `p'` in vertex 1 and `q'` in vertex 2, `φ(e22)` has
/// `r'` and `s'`; on the sinks `φ(e33)` has `p, q` and `φ(e44)` has `r, s`.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingData<T: Real> {
    /// `(p', r', q', s')`
    pub row_dims: [usize; 4],
    /// `(p, r, q, s)`
    pub col_dims: [usize; 4],
    /// `U13, U14, U24, U23`
    pub unitaries: [CMatrix<T>; 4],
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    Dimensions(String),
    Shape { generator: &'static str, rows: usize, cols: usize, expected: usize },
    NonFinite { generator: &'static str },
    Unitarity { generator: &'static str, residual: f64 },
    CycleRelation { residual: f64 },
}

impl<T: Real> EmbeddingData<T> {
    pub fn multiplicity(&self) -> usize {
        self.row_dims[P] + self.row_dims[Q]
    }

    fn row_dim(&self, g: usize, half: usize) -> usize {
        self.row_dims[ROW_SPACES[g][half]]
    }

    fn col_dim(&self, g: usize, half: usize) -> usize {
        self.col_dims[COL_SPACES[g][half]]
    }

    pub fn block(&self, g: usize, kind: BlockKind) -> CMatrix<T> {
        let (i, j) = kind.corner();
        let r0 = if i == 0 { 0 } else { self.row_dim(g, 0) };
        let c0 = if j == 0 { 0 } else { self.col_dim(g, 0) };
        self.unitaries[g].view((r0, c0), (self.row_dim(g, i), self.col_dim(g, j))).into_owned()
    }

    /// All sixteen blocks, generator-major.
    pub fn blocks(&self) -> Vec<((usize, BlockKind), CMatrix<T>)> {
        (0..4).flat_map(|g| BlockKind::ALL.map(|k| ((g, k), self.block(g, k)))).collect()
    }

    /// Dimensions of the four target vertices when the embedding is unital.
    pub fn target_dims(&self) -> [usize; 4] {
        let [pp, rr, qq, ss] = self.row_dims;
        let [p, r, q, s] = self.col_dims;
        [pp + rr, qq + ss, p + r, q + s]
    }

    pub fn validate(&self, tol: T) -> Vec<Violation> {
        let mut out = Vec::new();
        let rho = self.multiplicity();
        let [pp, rr, qq, ss] = self.row_dims;
        let [p, r, q, s] = self.col_dims;
        if [rr + ss, p + q, r + s].iter().any(|&x| x != rho) {
            out.push(Violation::Dimensions(format!(
                "p'+q' = {}, r'+s' = {}, p+q = {}, r+s = {} must agree",
                pp + qq,
                rr + ss,
                p + q,
                r + s
            )));
            return out;
        }
        for (g, u) in self.unitaries.iter().enumerate() {
            let generator = GENERATORS[g];
            if u.nrows() != rho || u.ncols() != rho {
                out.push(Violation::Shape { generator, rows: u.nrows(), cols: u.ncols(), expected: rho });
            } else if !is_finite(u) {
                out.push(Violation::NonFinite { generator });
            } else {
                let residual = unitarity_residual(u);
                if residual > tol {
                    out.push(Violation::Unitarity { generator, residual: residual.to_f64_lossy() });
                }
            }
        }
        if out.is_empty() {
            let [u13, u14, u24, u23] = &self.unitaries;
            let residual = op_norm(&(u13 * u23.adjoint() * u24 - u14));
            if residual > tol {
                out.push(Violation::CycleRelation { residual: residual.to_f64_lossy() });
            }
        }
        out
    }

    pub fn require_valid(&self, tol: T) -> Result<(), NumericError> {
        let v = self.validate(tol);
        if v.is_empty() {
            Ok(())
        } else {
            Err(NumericError::Invalid(v))
        }
    }

    /// Image of a generator as a matrix on the target, whose vertex spaces
    /// are ordered `[P', R'], [Q', S'], [P, R], [Q, S]`.
    pub fn realize(&self, g: usize) -> CMatrix<T> {
        let layout = Layout::of(self);
        let mut m = CMatrix::zeros(layout.total, layout.total);
        let rows: Vec<usize> = ROW_SPACES[g].iter().flat_map(|&sp| layout.row_space(sp)).collect();
        let cols: Vec<usize> = COL_SPACES[g].iter().flat_map(|&sp| layout.col_space(sp)).collect();
        for (i, &ri) in rows.iter().enumerate() {
            for (j, &cj) in cols.iter().enumerate() {
                m[(ri, cj)] = self.unitaries[g][(i, j)];
            }
        }
        m
    }

    /// `rank α1 − rank β1 + rank γ1 − rank δ1`, ranks taken as upper ranks.
    pub fn h1_rank_formula(&self) -> i64 {
        let rk = |k| upper_rank(&self.block(0, k)) as i64;
        rk(BlockKind::Alpha) - rk(BlockKind::Beta) + rk(BlockKind::Gamma) - rk(BlockKind::Delta)
    }
}

/// Coordinates of the eight subspaces inside a realized target.
struct Layout {
    offsets: [usize; 4],
    row_dims: [usize; 4],
    col_dims: [usize; 4],
    total: usize,
}

impl Layout {
    fn of<T: Real>(d: &EmbeddingData<T>) -> Self {
        let t = d.target_dims();
        let offsets = [0, t[0], t[0] + t[1], t[0] + t[1] + t[2]];
        Layout { offsets, row_dims: d.row_dims, col_dims: d.col_dims, total: t.iter().sum() }
    }

    /// Row spaces live in vertices 1 and 2: P', R' in vertex 1, Q', S' in vertex 2.
    fn row_space(&self, sp: usize) -> std::ops::Range<usize> {
        Self::space(self.offsets[0], self.offsets[1], self.row_dims, sp)
    }

    fn col_space(&self, sp: usize) -> std::ops::Range<usize> {
        Self::space(self.offsets[2], self.offsets[3], self.col_dims, sp)
    }

    /// Local coordinates of a space inside its vertex.
    fn local(dims: [usize; 4], sp: usize) -> std::ops::Range<usize> {
        match sp {
            P => 0..dims[P],
            R => dims[P]..dims[P] + dims[R],
            Q => 0..dims[Q],
            S => dims[Q]..dims[Q] + dims[S],
            _ => unreachable!("four spaces"),
        }
    }

    fn space(first: usize, second: usize, dims: [usize; 4], sp: usize) -> std::ops::Range<usize> {
        let base = if sp == P || sp == R { first } else { second };
        let l = Self::local(dims, sp);
        base + l.start..base + l.end
    }

    fn vertex(&self, v: usize) -> std::ops::Range<usize> {
        let end = if v == 3 { self.total } else { self.offsets[v + 1] };
        self.offsets[v]..end
    }
}

/// Edges of `D4` as (row vertex, column vertex), in generator order.
const EDGES: [(usize, usize); 4] = [(0, 2), (0, 3), (1, 3), (1, 2)];

/// `ψ ∘ φ` where `ψ = outer ⊗ id_k` acts on `A(D4) ⊗ M_k`, the target of
/// `inner`, whose four vertices must therefore all have dimension `k`.
pub fn compose_embeddings<T: Real>(inner: &EmbeddingData<T>, outer: &EmbeddingData<T>) -> Result<EmbeddingData<T>, NumericError> {
    let t = inner.target_dims();
    if t.iter().any(|&x| x != t[0]) {
        return Err(NumericError::NotUniform(t));
    }
    let k = t[0];
    let li = Layout::of(inner);
    let lo = Layout::of(outer);
    let outer_full: Vec<CMatrix<T>> = (0..4).map(|g| outer.realize(g)).collect();
    let kron = |a: &[usize], b: std::ops::Range<usize>| -> Vec<usize> {
        a.iter().flat_map(|&x| b.clone().map(move |y| x * k + y)).collect()
    };
    // composite φ(e11) on vertex 1 is P'ψ ⊗ P'φ ∪ R'ψ ⊗ Q'φ, and so on
    let rows_c = |sp_phi_first: usize, sp_phi_second: usize, outer_first: usize, outer_second: usize| {
        let a: Vec<usize> = lo.row_space(outer_first).collect();
        let b: Vec<usize> = lo.row_space(outer_second).collect();
        let mut v = kron(&a, Layout::local(inner.row_dims, sp_phi_first));
        v.extend(kron(&b, Layout::local(inner.row_dims, sp_phi_second)));
        v
    };
    let cols_c = |sp_phi_first: usize, sp_phi_second: usize, outer_first: usize, outer_second: usize| {
        let a: Vec<usize> = lo.col_space(outer_first).collect();
        let b: Vec<usize> = lo.col_space(outer_second).collect();
        let mut v = kron(&a, Layout::local(inner.col_dims, sp_phi_first));
        v.extend(kron(&b, Layout::local(inner.col_dims, sp_phi_second)));
        v
    };
    let rows = [rows_c(P, Q, P, R), rows_c(R, S, P, R), rows_c(P, Q, Q, S), rows_c(R, S, Q, S)];
    let cols = [cols_c(P, Q, P, R), cols_c(R, S, P, R), cols_c(P, Q, Q, S), cols_c(R, S, Q, S)];
    let n = lo.total * k;
    let mut unitaries: Vec<CMatrix<T>> = Vec::with_capacity(4);
    for g in 0..4 {
        let phi = inner.realize(g);
        let mut full = CMatrix::<T>::zeros(n, n);
        for (e, &(vi, vj)) in EDGES.iter().enumerate() {
            let x = phi.view((li.vertex(vi).start, li.vertex(vj).start), (k, k)).into_owned();
            full += outer_full[e].kronecker(&x);
        }
        let r: Vec<usize> = ROW_SPACES[g].iter().flat_map(|&sp| rows[sp].iter().copied()).collect();
        let c: Vec<usize> = COL_SPACES[g].iter().flat_map(|&sp| cols[sp].iter().copied()).collect();
        unitaries.push(full.select_rows(r.iter()).select_columns(c.iter()));
    }
    let row_dims = std::array::from_fn(|sp| rows[sp].len());
    let col_dims = std::array::from_fn(|sp| cols[sp].len());
    let unitaries: [CMatrix<T>; 4] = unitaries.try_into().expect("four generators");
    Ok(EmbeddingData { row_dims, col_dims, unitaries })
}

/// Every block within `tol` of a partial isometry.
pub fn is_locally_regular<T: Real>(d: &EmbeddingData<T>, tol: T) -> bool {
    d.blocks().iter().all(|(_, b)| dist_to_partial_isometry(b).distance <= tol)
}

/// Every block nonzero.
pub fn is_proper<T: Real>(d: &EmbeddingData<T>, tol: T) -> bool {
    d.blocks().iter().all(|(_, b)| op_norm(b) > tol)
}

pub fn is_strict<T: Real>(d: &EmbeddingData<T>, eps: T) -> bool {
    is_locally_regular(d, eps)
}

/// For each generator the four block norms agree.
pub fn is_norm_symmetric<T: Real>(d: &EmbeddingData<T>, tol: T) -> bool {
    (0..4).all(|g| {
        let norms: Vec<T> = BlockKind::ALL.iter().map(|&k| op_norm(&d.block(g, k))).collect();
        let max = norms.iter().copied().fold(T::zero(), T::max);
        norms.iter().all(|&n| (max - n).abs() <= tol)
    })
}

fn projection_gap<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    op_norm(&(a - b))
}

/// The signature of a rigid embedding, recovered from block ranks.
///
/// Blocks must be partial isometries whose range and initial projections
/// cohere along each type quadruple. The unitary obtained by going once
/// around a quadruple is not examined: a diagonal conjugation removes it.
pub fn is_rigid_numeric<T: Real>(d: &EmbeddingData<T>, tol: T) -> Option<Signature<i64>> {
    let mut r = [0i64; 4];
    for (t, quad) in QUADRUPLES.iter().enumerate() {
        let mut ranges = Vec::new();
        let mut initials = Vec::new();
        let mut ranks = Vec::new();
        for &(g, k) in quad {
            let rep = dist_to_partial_isometry(&d.block(g, k));
            if rep.distance > tol {
                return None;
            }
            let w = rep.nearest;
            ranks.push(rep.singular_values.iter().filter(|&&s| s > T::lit(0.5)).count());
            ranges.push(&w * w.adjoint());
            initials.push(w.adjoint() * &w);
        }
        let coherent = projection_gap(&ranges[0], &ranges[1]) <= tol
            && projection_gap(&ranges[2], &ranges[3]) <= tol
            && projection_gap(&initials[0], &initials[3]) <= tol
            && projection_gap(&initials[1], &initials[2]) <= tol;
        if !coherent || ranks.iter().any(|&x| x != ranks[0]) {
            return None;
        }
        r[t] = ranks[0] as i64;
    }
    Signature::new(r).ok()
}

/// Spaces `(first row, second row, first col, second col)` holding one
/// vector of each summand of a type: a rank-one summand of type `t` maps
/// `e11` into the first row space and `e22` into the second.
const TYPE_SPACES: [[usize; 4]; 4] = [[P, S, P, S], [Q, R, P, S], [Q, R, Q, R], [P, S, Q, R]];

fn type_index(sym: Symmetry) -> usize {
    sym.index()
}

/// Direct sum of rank-one rigid embeddings with the given signature. With a
/// generator, each of the eight subspaces is then conjugated by an
/// independent Haar unitary.
pub fn rigid_embedding<T: Real, G: Rng + ?Sized>(sig: &Signature<i64>, rng: Option<&mut G>) -> EmbeddingData<T> {
    let counts: [usize; 4] = std::array::from_fn(|t| sig.components()[t] as usize);
    let mut row_dims = [0usize; 4];
    let mut col_dims = [0usize; 4];
    // (type, copy) → local index in each space
    let mut row_of = vec![[0usize; 2]; 0];
    let mut col_of = vec![[0usize; 2]; 0];
    let mut kinds = Vec::new();
    for sym in Symmetry::ALL {
        let t = type_index(sym);
        let [a, b, c, e] = TYPE_SPACES[t];
        for _ in 0..counts[t] {
            row_of.push([row_dims[a], row_dims[b]]);
            col_of.push([col_dims[c], col_dims[e]]);
            row_dims[a] += 1;
            row_dims[b] += 1;
            col_dims[c] += 1;
            col_dims[e] += 1;
            kinds.push(t);
        }
    }
    let rho = kinds.len();
    let mut unitaries: [CMatrix<T>; 4] = std::array::from_fn(|_| CMatrix::zeros(rho, rho));
    for (n, &t) in kinds.iter().enumerate() {
        let spaces = TYPE_SPACES[t];
        for g in 0..4 {
            // generators 13, 14 leave vertex 1's image; 24, 23 leave vertex 2's
            let row_sp = if g < 2 { spaces[0] } else { spaces[1] };
            let col_sp = if g == 0 || g == 3 { spaces[2] } else { spaces[3] };
            let row_local = if g < 2 { row_of[n][0] } else { row_of[n][1] };
            let col_local = if g == 0 || g == 3 { col_of[n][0] } else { col_of[n][1] };
            let ri = if row_sp == ROW_SPACES[g][0] { row_local } else { row_dims[ROW_SPACES[g][0]] + row_local };
            let ci = if col_sp == COL_SPACES[g][0] { col_local } else { col_dims[COL_SPACES[g][0]] + col_local };
            unitaries[g][(ri, ci)] = real(1.0);
        }
    }
    let mut d = EmbeddingData { row_dims, col_dims, unitaries };
    if let Some(rng) = rng {
        let rows: [CMatrix<T>; 4] = std::array::from_fn(|sp| haar_unitary::<T, G>(rng, row_dims[sp]));
        let cols: [CMatrix<T>; 4] = std::array::from_fn(|sp| haar_unitary::<T, G>(rng, col_dims[sp]));
        for g in 0..4 {
            let left = block_diag(&rows[ROW_SPACES[g][0]], &rows[ROW_SPACES[g][1]]);
            let right = block_diag(&cols[COL_SPACES[g][0]], &cols[COL_SPACES[g][1]]);
            d.unitaries[g] = &left * &d.unitaries[g] * right.adjoint();
        }
    }
    d
}

fn block_diag<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    let n = a.nrows() + b.nrows();
    let mut m = CMatrix::zeros(n, n);
    m.view_mut((0, 0), a.shape()).copy_from(a);
    m.view_mut((a.nrows(), a.ncols()), b.shape()).copy_from(b);
    m
}

/// The multiplicity-two embedding with every block equal to `±1/√2`.
pub fn dp_example_phi<T: Real>() -> EmbeddingData<T> {
    let h = real::<T>(std::f64::consts::FRAC_1_SQRT_2);
    let m = |v: [f64; 4]| CMatrix::<T>::from_row_slice(2, 2, &v.map(real::<T>)) * h;
    EmbeddingData {
        row_dims: [1, 1, 1, 1],
        col_dims: [1, 1, 1, 1],
        unitaries: [m([1., 1., 1., -1.]), m([1., 1., -1., 1.]), m([-1., 1., 1., 1.]), m([1., -1., 1., 1.])],
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorizationReport {
    pub phi_valid: bool,
    pub phi_residuals: [f64; 4],
    pub locally_regular_phi: bool,
    pub composite_valid: bool,
    pub composite_signature: Option<Signature<i64>>,
    pub composite_rigid: bool,
    pub composite_h1: i64,
    pub composite_max_block_distance: f64,
    /// The composite's `α1` block and its rank.
    pub v1: CMatrix<f64>,
    pub v1_rank: usize,
    pub passed: bool,
}

pub fn verify_irregular_factorization(validate_tol: f64, rigid_tol: f64) -> FactorizationReport {
    let phi = dp_example_phi::<f64>();
    let phi_valid = phi.validate(validate_tol).is_empty();
    let phi_residuals = std::array::from_fn(|g| unitarity_residual(&phi.unitaries[g]));
    let locally_regular_phi = is_locally_regular(&phi, rigid_tol);
    let comp = compose_embeddings(&phi, &phi).expect("uniform target");
    let composite_valid = comp.validate(validate_tol).is_empty();
    let composite_signature = is_rigid_numeric(&comp, rigid_tol);
    let composite_max_block_distance =
        comp.blocks().iter().map(|(_, b)| dist_to_partial_isometry(b).distance).fold(0.0, f64::max);
    let composite_h1 = comp.h1_rank_formula();
    let v1 = comp.block(0, BlockKind::Alpha);
    let v1_rank = upper_rank(&v1);
    let composite_rigid = composite_signature.is_some();
    let passed = phi_valid && !locally_regular_phi && composite_valid && composite_rigid && composite_h1 == 0;
    FactorizationReport {
        phi_valid,
        phi_residuals,
        locally_regular_phi,
        composite_valid,
        composite_signature,
        composite_rigid,
        composite_h1,
        composite_max_block_distance,
        v1,
        v1_rank,
        passed,
    }
}
