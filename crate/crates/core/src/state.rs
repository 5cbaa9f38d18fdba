//! The 8-component state vector (p, u1, u2, u3, H1, H2, H3, S).
//!
//! The component order is fixed; every array of states in the codebase uses
//! this index map.

use crate::scalar::Scalar;

pub const NCOMP: usize = 8;

/// Component indices into the 8-vector.
pub mod comp {
    pub const P: usize = 0;
    pub const U1: usize = 1;
    pub const U2: usize = 2;
    pub const U3: usize = 3;
    pub const H1: usize = 4;
    pub const H2: usize = 5;
    pub const H3: usize = 6;
    pub const S: usize = 7;
}

pub const COMPONENT_NAMES: [&str; NCOMP] = ["p", "u1", "u2", "u3", "H1", "H2", "H3", "S"];

pub type Vec8<T> = [T; NCOMP];

/// A state vector with named accessors over the fixed component order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct State<T>(pub Vec8<T>);

impl<T: Scalar> State<T> {
    #[inline]
    pub fn pressure(&self) -> T {
        self.0[comp::P]
    }
    /// Velocity component along axis `j` (0-based).
    #[inline]
    pub fn velocity(&self, j: usize) -> T {
        self.0[comp::U1 + j]
    }
    /// Magnetic field component along axis `j` (0-based).
    #[inline]
    pub fn magnetic(&self, j: usize) -> T {
        self.0[comp::H1 + j]
    }
    #[inline]
    pub fn entropy(&self) -> T {
        self.0[comp::S]
    }

    /// The constant background state (0, 0, (c, 0, 0), 0).
    pub fn background(c: T) -> Self {
        let mut v = [T::zero(); NCOMP];
        v[comp::H1] = c;
        State(v)
    }
}

pub fn zero_vec8<T: Scalar>() -> Vec8<T> {
    [T::zero(); NCOMP]
}

pub fn background_vec8<T: Scalar>(c: T) -> Vec8<T> {
    State::background(c).0
}

/// Max-norm distance between two 8-vectors, as f64.
pub fn max_abs_diff<T: Scalar>(a: &Vec8<T>, b: &Vec8<T>) -> f64 {
    let mut m = 0.0f64;
    for i in 0..NCOMP {
        m = m.max((a[i] - b[i]).abs().value());
    }
    m
}
