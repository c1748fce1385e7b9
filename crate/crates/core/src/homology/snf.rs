use super::matrix::IntMatrix;
use crate::scalar::Int;

/// `u · m · v = s` with `s` diagonal, nonnegative, and `s[i][i] | s[i+1][i+1]`.
/// The inverses of `u` and `v` are tracked alongside so change of basis never
/// needs a separate inversion.
#[derive(Clone, Debug)]
pub struct Smith<I> {
    pub s: IntMatrix<I>,
    pub u: IntMatrix<I>,
    pub u_inv: IntMatrix<I>,
    pub v: IntMatrix<I>,
    pub v_inv: IntMatrix<I>,
    pub rank: usize,
}

impl<I: Int> Smith<I> {
    /// Nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<I> {
        (0..self.rank).map(|i| self.s.get(i, i).clone()).collect()
    }
}

struct State<I> {
    a: IntMatrix<I>,
    u: IntMatrix<I>,
    u_inv: IntMatrix<I>,
    v: IntMatrix<I>,
    v_inv: IntMatrix<I>,
}

impl<I: Int> State<I> {
    fn swap_rows(&mut self, i: usize, k: usize) {
        self.a.swap_rows(i, k);
        self.u.swap_rows(i, k);
        self.u_inv.swap_cols(i, k);
    }

    fn swap_cols(&mut self, j: usize, l: usize) {
        self.a.swap_cols(j, l);
        self.v.swap_cols(j, l);
        self.v_inv.swap_rows(j, l);
    }

    fn add_row(&mut self, i: usize, k: usize, c: &I) {
        self.a.add_row(i, k, c);
        self.u.add_row(i, k, c);
        self.u_inv.add_col(k, i, &-c.clone());
    }

    fn add_col(&mut self, j: usize, l: usize, c: &I) {
        self.a.add_col(j, l, c);
        self.v.add_col(j, l, c);
        self.v_inv.add_row(l, j, &-c.clone());
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    /// Eliminate row `t` and column `t` outside the pivot. Returns false when
    /// a nonzero remainder survived and the pivot must be re-chosen.
    fn clear_cross(&mut self, t: usize) -> bool {
        let p = self.a.get(t, t).clone();
        let mut clean = true;
        for i in t + 1..self.a.rows() {
            let x = self.a.get(i, t).clone();
            if !x.is_zero() {
                self.add_row(i, t, &-(x / p.clone()));
                clean &= self.a.get(i, t).is_zero();
            }
        }
        for j in t + 1..self.a.cols() {
            let x = self.a.get(t, j).clone();
            if !x.is_zero() {
                self.add_col(j, t, &-(x / p.clone()));
                clean &= self.a.get(t, j).is_zero();
            }
        }
        clean
    }
}

/// Smith normal form with minimal-entry pivoting. Intended for desk-scale
/// matrices (a few hundred columns).
pub fn smith_normal_form<I: Int>(m: &IntMatrix<I>) -> Smith<I> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut st = State {
        a: m.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_entry(&st.a, t, |i, j| i >= t && j >= t) else {
            break;
        };
        st.swap_rows(t, pi);
        st.swap_cols(t, pj);
        loop {
            if !st.clear_cross(t) {
                let (pi, pj) = min_entry(&st.a, t, |i, j| (i == t && j >= t) || (j == t && i >= t))
                    .expect("pivot row or column is nonzero");
                st.swap_rows(t, pi);
                st.swap_cols(t, pj);
                continue;
            }
            // Divisibility: fold an offending row into the pivot row and redo.
            let p = st.a.get(t, t).clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !st.a.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => st.add_row(t, i, &I::one()),
                None => break,
            }
        }
        if st.a.get(t, t).is_negative() {
            st.negate_row(t);
        }
        t += 1;
    }
    Smith { s: st.a, u: st.u, u_inv: st.u_inv, v: st.v, v_inv: st.v_inv, rank: t }
}

fn min_entry<I: Int>(a: &IntMatrix<I>, t: usize, keep: impl Fn(usize, usize) -> bool) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), I)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            if !keep(i, j) {
                continue;
            }
            let x = a.get(i, j).abs();
            if x.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, b)| x < *b) {
                best = Some(((i, j), x));
            }
        }
    }
    best.map(|(pos, _)| pos)
}
