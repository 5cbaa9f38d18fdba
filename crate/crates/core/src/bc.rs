//! Ghost-cell filling.
//!
//! Walls are realized by signed mirrors of the interior cells:
//!
//! - x3-type walls use the parity of the reflection construction (u3, H3
//!   odd, the rest even), so the u3 = H3 = 0 conditions emerge at the face.
//! - x1-type walls mirror with all of u1, u2, u3 odd and p, H, S even. The
//!   prescribed condition at that wall is only u = 0; this ghost parity is
//!   the numerical closure that realizes it at the face while leaving the
//!   remaining components free.
//!
//! Periodic axes wrap. Ghosts are filled per axis over interior transverse
//! ranges only; the axis-aligned stencils never read corner ghosts.

use crate::field::Field;
use crate::grid::{AxisRule, GHOST};
use crate::reflection::{signed_mirror, Parity, PARITY_X3};
use crate::scalar::Scalar;
use crate::state::{comp, NCOMP};

/// Mirror signature of the x1-type wall: all velocity components odd.
pub const PARITY_X1_WALL: [Parity; NCOMP] = {
    let mut p = [Parity::Even; NCOMP];
    p[comp::U1] = Parity::Odd;
    p[comp::U2] = Parity::Odd;
    p[comp::U3] = Parity::Odd;
    p
};

fn wall_signature(rule: AxisRule) -> Option<&'static [Parity; NCOMP]> {
    match rule {
        AxisRule::Periodic => None,
        AxisRule::WallVelocity => Some(&PARITY_X1_WALL),
        AxisRule::WallNormalPair => Some(&PARITY_X3),
    }
}

/// Fills the ghost frame of `f` according to the grid's axis rules.
pub fn apply_bc<T: Scalar>(f: &mut Field<T>) {
    let n = f.grid.n;
    let g = GHOST as isize;
    for axis in 0..3 {
        let rule = f.grid.rule(axis);
        let len = n[axis] as isize;
        // transverse interior ranges
        let (ta, tb) = match axis {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        for b in 0..n[tb] as isize {
            for a in 0..n[ta] as isize {
                let cell = |main: isize| -> [isize; 3] {
                    let mut c = [0isize; 3];
                    c[axis] = main;
                    c[ta] = a;
                    c[tb] = b;
                    c
                };
                match wall_signature(rule) {
                    None => {
                        for d in 0..g {
                            let lo = cell(-1 - d);
                            let src = cell(len - 1 - d);
                            let v = f.state(src[0], src[1], src[2]);
                            f.set_state(lo[0], lo[1], lo[2], &v);
                            let hi = cell(len + d);
                            let src = cell(d);
                            let v = f.state(src[0], src[1], src[2]);
                            f.set_state(hi[0], hi[1], hi[2], &v);
                        }
                    }
                    Some(sig) => {
                        for d in 0..g {
                            let lo = cell(-1 - d);
                            let src = cell(d);
                            let v = signed_mirror(sig, &f.state(src[0], src[1], src[2]));
                            f.set_state(lo[0], lo[1], lo[2], &v);
                            let hi = cell(len + d);
                            let src = cell(len - 1 - d);
                            let v = signed_mirror(sig, &f.state(src[0], src[1], src[2]));
                            f.set_state(hi[0], hi[1], hi[2], &v);
                        }
                    }
                }
            }
        }
    }
}
