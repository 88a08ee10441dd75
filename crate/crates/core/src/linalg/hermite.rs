use crate::linalg::IntegerMatrix;
use crate::scalar::Scalar;

/// Row-style Hermite normal form of the row lattice of `m`.
///
/// Zero rows are dropped, pivots are positive and every entry above a
/// pivot lies in `[0, pivot)`, so two matrices span the same lattice iff
/// their forms are equal.
pub fn hermite_normal_form<T: Scalar>(m: &IntegerMatrix<T>) -> IntegerMatrix<T> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut pr = 0;
    for col in 0..cols {
        if pr == rows {
            break;
        }
        loop {
            let pivot = (pr..rows)
                .filter(|&i| !a[(i, col)].is_zero())
                .min_by(|&i, &j| a[(i, col)].abs().cmp(&a[(j, col)].abs()));
            let Some(p) = pivot else { break };
            a.swap_rows(pr, p);
            let mut done = true;
            for i in pr + 1..rows {
                if a[(i, col)].is_zero() {
                    continue;
                }
                let q = a[(i, col)].div_floor(&a[(pr, col)]);
                a.add_row_multiple(i, pr, &-q);
                if !a[(i, col)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[(pr, col)].is_zero() {
            continue;
        }
        if a[(pr, col)].is_negative() {
            a.negate_row(pr);
        }
        for i in 0..pr {
            let q = a[(i, col)].div_floor(&a[(pr, col)]);
            a.add_row_multiple(i, pr, &-q);
        }
        pr += 1;
    }
    let kept: Vec<Vec<T>> = (0..pr).map(|i| a.row(i).to_vec()).collect();
    IntegerMatrix::from_rows(cols, &kept).expect("rows have matching length")
}

/// Integer coordinates of `v` in the basis given by the rows of a Hermite
/// form, or `None` when `v` is not in the lattice.
pub fn lattice_coordinates<T: Scalar>(hnf: &IntegerMatrix<T>, v: &[T]) -> Option<Vec<T>> {
    if v.len() != hnf.cols() {
        return None;
    }
    let mut rest = v.to_vec();
    let mut coords = Vec::with_capacity(hnf.rows());
    for i in 0..hnf.rows() {
        let row = hnf.row(i);
        let p = row.iter().position(|x| !x.is_zero())?;
        let (q, r) = rest[p].div_rem(&row[p]);
        if !r.is_zero() {
            return None;
        }
        for (x, y) in rest.iter_mut().zip(row) {
            *x = x.clone() - q.clone() * y.clone();
        }
        coords.push(q);
    }
    rest.iter().all(|x| x.is_zero()).then_some(coords)
}

pub fn lattice_contains<T: Scalar>(hnf: &IntegerMatrix<T>, v: &[T]) -> bool {
    lattice_coordinates(hnf, v).is_some()
}
