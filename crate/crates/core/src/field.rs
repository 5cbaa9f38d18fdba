//! Structured-grid storage for 8-component states with a two-cell ghost
//! frame. Components are interleaved per cell (the snapshot layout) and the
//! x1 index runs fastest.

use crate::grid::{Grid, GHOST};
use crate::scalar::Scalar;
use crate::state::{Vec8, NCOMP};

#[derive(Clone, Debug, PartialEq)]
pub struct Field<T> {
    pub grid: Grid<T>,
    data: Vec<T>,
    /// Padded dimensions (n + 2 ghost on each side).
    m: [usize; 3],
}

impl<T: Scalar> Field<T> {
    pub fn zeros(grid: Grid<T>) -> Self {
        let m = [
            grid.n[0] + 2 * GHOST,
            grid.n[1] + 2 * GHOST,
            grid.n[2] + 2 * GHOST,
        ];
        Field {
            grid,
            data: vec![T::zero(); m[0] * m[1] * m[2] * NCOMP],
            m,
        }
    }

    pub fn constant(grid: Grid<T>, value: &Vec8<T>) -> Self {
        let mut f = Self::zeros(grid);
        let n = f.grid.n;
        for k in 0..n[2] {
            for j in 0..n[1] {
                for i in 0..n[0] {
                    f.set_state(i as isize, j as isize, k as isize, value);
                }
            }
        }
        f
    }

    /// Base offset of cell (i, j, k); ghost cells are reached with negative
    /// or >= n indices down to -GHOST and n + GHOST - 1.
    #[inline]
    pub fn base(&self, i: isize, j: isize, k: isize) -> usize {
        debug_assert!(i >= -(GHOST as isize) && (i as i64) < (self.grid.n[0] + GHOST) as i64);
        debug_assert!(j >= -(GHOST as isize) && (j as i64) < (self.grid.n[1] + GHOST) as i64);
        debug_assert!(k >= -(GHOST as isize) && (k as i64) < (self.grid.n[2] + GHOST) as i64);
        let ii = (i + GHOST as isize) as usize;
        let jj = (j + GHOST as isize) as usize;
        let kk = (k + GHOST as isize) as usize;
        ((kk * self.m[1] + jj) * self.m[0] + ii) * NCOMP
    }

    /// Element stride of one step along `axis`.
    #[inline]
    pub fn stride(&self, axis: usize) -> usize {
        match axis {
            0 => NCOMP,
            1 => self.m[0] * NCOMP,
            _ => self.m[0] * self.m[1] * NCOMP,
        }
    }

    #[inline]
    pub fn get(&self, base: usize, comp: usize) -> T {
        self.data[base + comp]
    }

    #[inline]
    pub fn state(&self, i: isize, j: isize, k: isize) -> Vec8<T> {
        let b = self.base(i, j, k);
        let mut out = [T::zero(); NCOMP];
        out.copy_from_slice(&self.data[b..b + NCOMP]);
        out
    }

    #[inline]
    pub fn set_state(&mut self, i: isize, j: isize, k: isize, v: &Vec8<T>) {
        let b = self.base(i, j, k);
        self.data[b..b + NCOMP].copy_from_slice(v);
    }

    #[inline]
    pub fn raw(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn raw_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    #[inline]
    pub fn padded_dims(&self) -> [usize; 3] {
        self.m
    }

    /// Number of elements in one padded k-plane.
    #[inline]
    pub fn plane_len(&self) -> usize {
        self.m[0] * self.m[1] * NCOMP
    }

    /// Visits every interior cell as (i, j, k).
    pub fn for_each_interior(&self, mut f: impl FnMut(usize, usize, usize)) {
        for k in 0..self.grid.n[2] {
            for j in 0..self.grid.n[1] {
                for i in 0..self.grid.n[0] {
                    f(i, j, k);
                }
            }
        }
    }

    /// Max over interior cells and components of |a - b|, as f64.
    pub fn max_abs_diff(&self, other: &Field<T>) -> f64 {
        assert_eq!(self.grid.n, other.grid.n);
        let mut worst = 0.0f64;
        self.for_each_interior(|i, j, k| {
            let a = self.state(i as isize, j as isize, k as isize);
            let b = other.state(i as isize, j as isize, k as isize);
            for c in 0..NCOMP {
                worst = worst.max((a[c] - b[c]).abs().value());
            }
        });
        worst
    }

    /// Max over interior cells and components of |f - background|, as f64.
    pub fn max_abs_deviation(&self, background: &Vec8<T>) -> f64 {
        let mut worst = 0.0f64;
        self.for_each_interior(|i, j, k| {
            let a = self.state(i as isize, j as isize, k as isize);
            for c in 0..NCOMP {
                worst = worst.max((a[c] - background[c]).abs().value());
            }
        });
        worst
    }
}
