//! Incremental row reduction over a [`Ring`].
//!
//! Over `F_p[c]` the elimination is fraction free: a row is cleared against a
//! pivot row by `row <- (a/g) row - (b/g) pivot_row` with `g = gcd(a, b)`, and
//! each row is kept primitive with a monic leading entry. Rows therefore stay
//! polynomial in `c`, and the final echelon form is the reduced row echelon
//! form over `F_p(c)` with every row rescaled to its canonical primitive
//! representative. That makes the result independent of insertion order.

use crate::scalar::Ring;

#[derive(Clone, Debug)]
pub struct RowEchelon<R: Ring> {
    ncols: usize,
    rows: Vec<Vec<R::Elem>>,
    pivots: Vec<usize>,
}

impl<R: Ring> RowEchelon<R> {
    pub fn new(ncols: usize) -> Self {
        Self {
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    /// Rows ordered by pivot column.
    pub fn rows(&self) -> &[Vec<R::Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `row <- a' row - b' other` clearing column `col` of `row`.
    fn clear(ring: &R, row: &mut [R::Elem], other: &[R::Elem], col: usize) {
        let b = row[col].clone();
        if ring.is_zero(&b) {
            return;
        }
        let (a1, b1) = ring.reduce_pair(&other[col], &b);
        let scale_row = !ring.is_one(&a1);
        for (x, y) in row.iter_mut().zip(other) {
            let zx = ring.is_zero(x);
            if ring.is_zero(y) {
                if scale_row && !zx {
                    *x = ring.mul(x, &a1);
                }
                continue;
            }
            let t = ring.mul(&b1, y);
            *x = if zx {
                ring.neg(&t)
            } else if scale_row {
                ring.sub(&ring.mul(x, &a1), &t)
            } else {
                ring.sub(x, &t)
            };
        }
    }

    /// Reduces `v` against the current rows. The result vanishes exactly when
    /// `v` lies in the row space.
    pub fn reduce(&self, ring: &R, v: &mut [R::Elem]) {
        assert_eq!(v.len(), self.ncols);
        for (row, &col) in self.rows.iter().zip(&self.pivots) {
            Self::clear(ring, v, row, col);
        }
        ring.normalize(v);
    }

    pub fn contains(&self, ring: &R, v: &[R::Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(ring, &mut w);
        w.iter().all(|x| ring.is_zero(x))
    }

    /// Adds `v` to the row space. Returns whether the rank grew.
    pub fn insert(&mut self, ring: &R, mut v: Vec<R::Elem>) -> bool {
        if self.is_full() {
            return false;
        }
        self.reduce(ring, &mut v);
        let Some(col) = v.iter().position(|x| !ring.is_zero(x)) else {
            return false;
        };
        for row in self.rows.iter_mut() {
            if !ring.is_zero(&row[col]) {
                Self::clear(ring, row, &v, col);
                ring.normalize(row);
            }
        }
        let at = self.pivots.partition_point(|&p| p < col);
        self.pivots.insert(at, col);
        self.rows.insert(at, v);
        true
    }

    /// `(row . v)` for every row: zero exactly when `v` is in the kernel.
    pub fn project(&self, ring: &R, v: &[R::Elem]) -> Vec<R::Elem> {
        self.rows
            .iter()
            .map(|row| {
                let mut acc = ring.zero();
                for (x, y) in row.iter().zip(v) {
                    if !ring.is_zero(x) && !ring.is_zero(y) {
                        acc = ring.add(&acc, &ring.mul(x, y));
                    }
                }
                acc
            })
            .collect()
    }

    /// A basis of the right kernel in the same canonical echelon form.
    pub fn kernel(&self, ring: &R) -> RowEchelon<R> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let mut out = RowEchelon::new(self.ncols);
        for free in (0..self.ncols).filter(|&c| !is_pivot[c]) {
            let touching: Vec<usize> = (0..self.rows.len())
                .filter(|&r| !ring.is_zero(&self.rows[r][free]))
                .collect();
            // common multiple of the pivot entries involved
            let mut l = ring.one();
            for &r in &touching {
                let a = &self.rows[r][self.pivots[r]];
                let g = ring.gcd(&l, a);
                l = ring.mul(&l, &ring.div_exact(a, &g).expect("gcd divides"));
            }
            let mut v = vec![ring.zero(); self.ncols];
            v[free] = l.clone();
            for &r in &touching {
                let a = &self.rows[r][self.pivots[r]];
                let q = ring.div_exact(&l, a).expect("multiple of pivot");
                v[self.pivots[r]] = ring.neg(&ring.mul(&self.rows[r][free], &q));
            }
            out.insert(ring, v);
        }
        out
    }
}
