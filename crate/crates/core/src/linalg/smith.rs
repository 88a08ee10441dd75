use crate::linalg::IntegerMatrix;
use crate::scalar::Scalar;

/// `u * m * v == d` with `u`, `v` unimodular and `d` diagonal,
/// nonnegative, and satisfying `d_1 | d_2 | ...` with zeros last.
///
/// `v_inv` is carried along because the saturation of a row lattice is
/// read off from its rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition<T> {
    pub u: IntegerMatrix<T>,
    pub v: IntegerMatrix<T>,
    pub v_inv: IntegerMatrix<T>,
    pub d: IntegerMatrix<T>,
}

impl<T: Scalar> SmithDecomposition<T> {
    /// Diagonal entries `d_i`, including units and zeros.
    pub fn diagonal(&self) -> Vec<T> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|x| !x.is_zero()).count()
    }

    /// Nonzero diagonal entries greater than one.
    pub fn invariant_factors(&self) -> Vec<T> {
        self.diagonal().into_iter().filter(|x| !x.is_zero() && !x.is_one()).collect()
    }
}

struct Work<T> {
    d: IntegerMatrix<T>,
    u: IntegerMatrix<T>,
    v: IntegerMatrix<T>,
    v_inv: IntegerMatrix<T>,
}

impl<T: Scalar> Work<T> {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    // row[dst] += f * row[src]
    fn row_op(&mut self, dst: usize, src: usize, f: &T) {
        self.d.add_row_multiple(dst, src, f);
        self.u.add_row_multiple(dst, src, f);
    }

    // col[dst] += f * col[src]; the inverse update is row[src] -= f * row[dst].
    fn col_op(&mut self, dst: usize, src: usize, f: &T) {
        self.d.add_col_multiple(dst, src, f);
        self.v.add_col_multiple(dst, src, f);
        self.v_inv.add_row_multiple(src, dst, &-f.clone());
    }

    fn smallest_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.d.rows() {
            for j in t..self.d.cols() {
                let x = &self.d[(i, j)];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < self.d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn move_to_pivot(&mut self, t: usize, (i, j): (usize, usize)) {
        self.swap_rows(t, i);
        self.swap_cols(t, j);
    }

    /// Pivot on the smallest nonzero entry of row `t` or column `t`.
    fn repivot_cross(&mut self, t: usize) {
        let mut best = (t, t);
        let mut best_abs: Option<T> = None;
        let consider = |pos: (usize, usize), x: &T, best: &mut (usize, usize), best_abs: &mut Option<T>| {
            if !x.is_zero() && best_abs.as_ref().is_none_or(|b| x.abs() < *b) {
                *best = pos;
                *best_abs = Some(x.abs());
            }
        };
        for i in t..self.d.rows() {
            consider((i, t), &self.d[(i, t)], &mut best, &mut best_abs);
        }
        for j in t..self.d.cols() {
            consider((t, j), &self.d[(t, j)], &mut best, &mut best_abs);
        }
        self.move_to_pivot(t, best);
    }

    fn clear_cross(&mut self, t: usize) -> bool {
        let mut clean = true;
        for i in t + 1..self.d.rows() {
            if self.d[(i, t)].is_zero() {
                continue;
            }
            let q = self.d[(i, t)].div_floor(&self.d[(t, t)]);
            self.row_op(i, t, &-q);
            if !self.d[(i, t)].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..self.d.cols() {
            if self.d[(t, j)].is_zero() {
                continue;
            }
            let q = self.d[(t, j)].div_floor(&self.d[(t, t)]);
            self.col_op(j, t, &-q);
            if !self.d[(t, j)].is_zero() {
                clean = false;
            }
        }
        clean
    }

    fn non_divisible(&self, t: usize) -> Option<usize> {
        let p = &self.d[(t, t)];
        for i in t + 1..self.d.rows() {
            for j in t + 1..self.d.cols() {
                if !self.d[(i, j)].is_multiple_of(p) {
                    return Some(i);
                }
            }
        }
        None
    }
}

/// Smith normal form with unimodular transforms.
pub fn smith_normal_form<T: Scalar>(m: &IntegerMatrix<T>) -> SmithDecomposition<T> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        d: m.clone(),
        u: IntegerMatrix::identity(rows),
        v: IntegerMatrix::identity(cols),
        v_inv: IntegerMatrix::identity(cols),
    };
    for t in 0..rows.min(cols) {
        let Some(pos) = w.smallest_in_block(t) else { break };
        w.move_to_pivot(t, pos);
        loop {
            if !w.clear_cross(t) {
                w.repivot_cross(t);
                continue;
            }
            match w.non_divisible(t) {
                Some(i) => w.row_op(t, i, &T::one()),
                None => break,
            }
        }
        if w.d[(t, t)].is_negative() {
            w.d.negate_row(t);
            w.u.negate_row(t);
        }
    }
    SmithDecomposition { u: w.u, v: w.v, v_inv: w.v_inv, d: w.d }
}
