//! Cell-centered structured grids on three box domains:
//!
//! - `Quarter`: x1 in [0, L1] with walls of the u = 0 kind at both ends,
//!   x2 periodic, x3 in [0, L3] with walls of the u3 = H3 = 0 kind at both
//!   ends. The x3 = 0 face is the wall the reflection argument acts on.
//! - `Half`: same as quarter but x3 spans [-L3, L3] (cell count must be
//!   even) with the u3 = H3 = 0 walls at x3 = +-L3.
//! - `Periodic`: all axes periodic, no walls.
//!
//! Cells are centered: there is never a sample on a wall, so the reflection
//! across x3 = 0 is a pure index permutation with sign flips. Half-grid x3
//! coordinates are computed symmetrically about 0 so that mirrored cells get
//! exactly negated coordinates.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const GHOST: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainKind {
    Quarter,
    Half,
    Periodic,
}

impl DomainKind {
    pub fn name(&self) -> &'static str {
        match self {
            DomainKind::Quarter => "quarter",
            DomainKind::Half => "half",
            DomainKind::Periodic => "periodic",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "quarter" => Some(DomainKind::Quarter),
            "half" => Some(DomainKind::Half),
            "periodic" => Some(DomainKind::Periodic),
            _ => None,
        }
    }
}

/// What the integrator does at the two ends of an axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxisRule {
    Periodic,
    /// Mirror ghosts with u1, u2, u3 odd (realizes u = 0 at the face).
    WallVelocity,
    /// Mirror ghosts with u3, H3 odd (realizes u3 = H3 = 0 at the face).
    WallNormalPair,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid<T> {
    pub domain: DomainKind,
    pub n: [usize; 3],
    /// Physical length per axis (the half domain's x3 extent is 2 L3).
    pub extent: [T; 3],
    pub h: [T; 3],
    /// Integer cell offset subtracted when forming coordinates; nonzero only
    /// for the x3 axis of the half domain (n3/2), which centers the grid on 0.
    pub center_offset: [usize; 3],
}

impl<T: Scalar> Grid<T> {
    /// `extents` are (L1, L2, L3) as in the quarter domain; the half domain
    /// spans [-L3, L3] with `n[2]` cells in total.
    pub fn new(domain: DomainKind, extents: [f64; 3], n: [usize; 3]) -> Result<Self> {
        for (i, &c) in n.iter().enumerate() {
            if c == 0 {
                return Err(Error::Grid(format!("n{} must be positive", i + 1)));
            }
            if extents[i] <= 0.0 {
                return Err(Error::Grid(format!("L{} must be positive", i + 1)));
            }
        }
        let mut extent = [
            T::from_f64(extents[0]),
            T::from_f64(extents[1]),
            T::from_f64(extents[2]),
        ];
        let mut center_offset = [0usize; 3];
        if domain == DomainKind::Half {
            if n[2] % 2 != 0 {
                return Err(Error::Grid(
                    "half domain needs an even x3 cell count".into(),
                ));
            }
            extent[2] = T::from_f64(2.0 * extents[2]);
            center_offset[2] = n[2] / 2;
        }
        let h = [
            extent[0] / T::from_f64(n[0] as f64),
            extent[1] / T::from_f64(n[1] as f64),
            extent[2] / T::from_f64(n[2] as f64),
        ];
        Ok(Grid {
            domain,
            n,
            extent,
            h,
            center_offset,
        })
    }

    /// Center coordinate of cell `k` along `axis`. Computed as
    /// (k - center + 1/2) h in one rounding, so mirrored half-grid cells
    /// get exactly opposite x3 coordinates.
    #[inline]
    pub fn coord(&self, axis: usize, k: usize) -> T {
        let m = (k as f64) - (self.center_offset[axis] as f64) + 0.5;
        T::from_f64(m) * self.h[axis]
    }

    pub fn rule(&self, axis: usize) -> AxisRule {
        match (self.domain, axis) {
            (DomainKind::Periodic, _) => AxisRule::Periodic,
            (_, 0) => AxisRule::WallVelocity,
            (_, 1) => AxisRule::Periodic,
            (_, 2) => AxisRule::WallNormalPair,
            _ => unreachable!(),
        }
    }

    pub fn cell_count(&self) -> usize {
        self.n[0] * self.n[1] * self.n[2]
    }

    /// Visits every cell index triple (x1 fastest).
    pub fn for_each_cell(&self, mut f: impl FnMut(usize, usize, usize)) {
        for k in 0..self.n[2] {
            for j in 0..self.n[1] {
                for i in 0..self.n[0] {
                    f(i, j, k);
                }
            }
        }
    }

    pub fn min_h(&self) -> T {
        self.h[0].min(self.h[1]).min(self.h[2])
    }

    pub fn max_h(&self) -> f64 {
        self.h[0].value().max(self.h[1].value()).max(self.h[2].value())
    }

    pub fn cell_volume(&self) -> T {
        self.h[0] * self.h[1] * self.h[2]
    }

    /// The half grid covering [-L3, L3] with the same spacing.
    pub fn mirrored_half(&self) -> Result<Grid<T>> {
        if self.domain != DomainKind::Quarter {
            return Err(Error::Grid("only a quarter grid extends to a half grid".into()));
        }
        Grid::new(
            DomainKind::Half,
            [
                self.extent[0].value(),
                self.extent[1].value(),
                self.extent[2].value(),
            ],
            [self.n[0], self.n[1], 2 * self.n[2]],
        )
    }

    /// The quarter grid covering the upper x3 half.
    pub fn upper_quarter(&self) -> Result<Grid<T>> {
        if self.domain != DomainKind::Half {
            return Err(Error::Grid("only a half grid restricts to a quarter grid".into()));
        }
        Grid::new(
            DomainKind::Quarter,
            [
                self.extent[0].value(),
                self.extent[1].value(),
                self.extent[2].value() / 2.0,
            ],
            [self.n[0], self.n[1], self.n[2] / 2],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_coordinates_are_cell_centered() {
        let g = Grid::<f64>::new(DomainKind::Quarter, [1.0, 1.0, 1.0], [4, 4, 4]).unwrap();
        assert_eq!(g.coord(2, 0), 0.125);
        assert_eq!(g.coord(2, 3), 0.875);
    }

    #[test]
    fn half_coordinates_mirror_exactly() {
        let g = Grid::<f64>::new(DomainKind::Half, [1.0, 1.0, 1.0], [4, 4, 8]).unwrap();
        for k in 0..8 {
            let a = g.coord(2, k);
            let b = g.coord(2, 7 - k);
            assert_eq!(a, -b, "k = {k}");
        }
        // upper half matches the quarter grid coordinates bit for bit
        let q = g.upper_quarter().unwrap();
        for k in 0..4 {
            assert_eq!(g.coord(2, 4 + k), q.coord(2, k));
        }
    }

    #[test]
    fn half_requires_even_count() {
        assert!(Grid::<f64>::new(DomainKind::Half, [1.0, 1.0, 1.0], [4, 4, 7]).is_err());
    }

    #[test]
    fn spacing_matches_between_quarter_and_half() {
        let q = Grid::<f64>::new(DomainKind::Quarter, [1.0, 1.0, 0.75], [4, 4, 12]).unwrap();
        let h = q.mirrored_half().unwrap();
        assert_eq!(q.h[2], h.h[2]);
    }

    #[test]
    fn axis_rules() {
        let q = Grid::<f64>::new(DomainKind::Quarter, [1.0; 3], [4, 4, 4]).unwrap();
        assert_eq!(q.rule(0), AxisRule::WallVelocity);
        assert_eq!(q.rule(1), AxisRule::Periodic);
        assert_eq!(q.rule(2), AxisRule::WallNormalPair);
        let p = Grid::<f64>::new(DomainKind::Periodic, [1.0; 3], [4, 4, 4]).unwrap();
        for a in 0..3 {
            assert_eq!(p.rule(a), AxisRule::Periodic);
        }
    }
}
