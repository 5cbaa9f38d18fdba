//! Parity extension across the x3 = 0 wall and its inverse restriction.
//!
//! u3 and H3 extend oddly, every other component evenly. On the
//! cell-centered grid the extension is a pure index permutation with sign
//! flips: the upper half is copied verbatim and the lower half holds the
//! signed mirror, so `restrict(extend(f)) == f` holds bit for bit.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::DomainKind;
use crate::scalar::Scalar;
use crate::state::{comp, Vec8, NCOMP};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Per-component parity under x3 -> -x3: odd for u3 and H3.
pub const PARITY_X3: [Parity; NCOMP] = {
    let mut p = [Parity::Even; NCOMP];
    p[comp::U3] = Parity::Odd;
    p[comp::H3] = Parity::Odd;
    p
};

/// Applies a parity signature to an 8-vector.
#[inline]
pub fn signed_mirror<T: Scalar>(sig: &[Parity; NCOMP], v: &Vec8<T>) -> Vec8<T> {
    let mut out = *v;
    for i in 0..NCOMP {
        if sig[i] == Parity::Odd {
            out[i] = -out[i];
        }
    }
    out
}

/// Extends a quarter-box field to the half box [-L3, L3] by the signed
/// mirror. The upper half is the input, copied bit for bit.
pub fn extend<T: Scalar>(f: &Field<T>) -> Result<Field<T>> {
    if f.grid.domain != DomainKind::Quarter {
        return Err(Error::Precondition(
            "extend expects a field on the quarter box".into(),
        ));
    }
    let half = f.grid.mirrored_half()?;
    let nq = f.grid.n;
    let mut out = Field::zeros(half);
    for k in 0..nq[2] {
        for j in 0..nq[1] {
            for i in 0..nq[0] {
                let v = f.state(i as isize, j as isize, k as isize);
                out.set_state(i as isize, j as isize, (nq[2] + k) as isize, &v);
                let m = signed_mirror(&PARITY_X3, &v);
                out.set_state(i as isize, j as isize, (nq[2] - 1 - k) as isize, &m);
            }
        }
    }
    Ok(out)
}

/// Restricts a half-box field to its upper quarter, bit for bit.
pub fn restrict<T: Scalar>(f: &Field<T>) -> Result<Field<T>> {
    if f.grid.domain != DomainKind::Half {
        return Err(Error::Precondition(
            "restrict expects a field on the half box".into(),
        ));
    }
    let quarter = f.grid.upper_quarter()?;
    let nh = f.grid.n;
    let half_k = nh[2] / 2;
    let mut out = Field::zeros(quarter);
    for k in 0..half_k {
        for j in 0..nh[1] {
            for i in 0..nh[0] {
                let v = f.state(i as isize, j as isize, (half_k + k) as isize);
                out.set_state(i as isize, j as isize, k as isize, &v);
            }
        }
    }
    Ok(out)
}

/// Per-component max norm of f minus its signed mirror on the half box.
/// Zero exactly when the field has the parity symmetry.
pub fn parity_defect<T: Scalar>(f: &Field<T>) -> Result<Vec8<f64>> {
    if f.grid.domain != DomainKind::Half {
        return Err(Error::Precondition(
            "parity_defect expects a field on the half box".into(),
        ));
    }
    let n = f.grid.n;
    let mut defect = [0.0f64; NCOMP];
    for k in 0..n[2] / 2 {
        let km = n[2] - 1 - k;
        for j in 0..n[1] {
            for i in 0..n[0] {
                let lo = f.state(i as isize, j as isize, k as isize);
                let hi = f.state(i as isize, j as isize, km as isize);
                let mirrored = signed_mirror(&PARITY_X3, &hi);
                for c in 0..NCOMP {
                    defect[c] = defect[c].max((lo[c] - mirrored[c]).abs().value());
                }
            }
        }
    }
    Ok(defect)
}

pub fn parity_defect_max<T: Scalar>(f: &Field<T>) -> Result<f64> {
    Ok(parity_defect(f)?
        .into_iter()
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::state::background_vec8;

    fn quarter_grid(n3: usize) -> Grid<f64> {
        Grid::new(DomainKind::Quarter, [1.0, 1.0, 1.0], [4, 4, n3]).unwrap()
    }

    #[test]
    fn constant_background_extends_to_itself() {
        let bg = background_vec8(1.5);
        let f = Field::constant(quarter_grid(4), &bg);
        let e = extend(&f).unwrap();
        e.for_each_interior(|i, j, k| {
            assert_eq!(e.state(i as isize, j as isize, k as isize), bg);
        });
        assert_eq!(parity_defect_max(&e).unwrap(), 0.0);
    }

    #[test]
    fn odd_u3_profile_stays_odd() {
        let g = quarter_grid(8);
        let mut f = Field::zeros(g);
        let grid_iter = f.grid;
        grid_iter.for_each_cell(|i, j, k| {
            let x3 = g.coord(2, k);
            let mut v = [0.0; NCOMP];
            v[comp::U3] = (std::f64::consts::PI * x3).sin();
            f.set_state(i as isize, j as isize, k as isize, &v);
        });
        let e = extend(&f).unwrap();
        let gh = e.grid;
        e.for_each_interior(|i, j, k| {
            let x3 = gh.coord(2, k);
            let v = e.state(i as isize, j as isize, k as isize);
            let expect = (std::f64::consts::PI * x3).sin();
            assert!((v[comp::U3] - expect).abs() < 1e-15);
        });
    }

    #[test]
    fn even_pressure_profile_extends_evenly() {
        let g = quarter_grid(8);
        let mut f = Field::zeros(g);
        let grid_iter = f.grid;
        grid_iter.for_each_cell(|i, j, k| {
            let x3 = g.coord(2, k);
            let mut v = [0.0; NCOMP];
            v[comp::P] = x3 * x3;
            f.set_state(i as isize, j as isize, k as isize, &v);
        });
        let e = extend(&f).unwrap();
        let gh = e.grid;
        e.for_each_interior(|i, j, k| {
            let x3 = gh.coord(2, k);
            let v = e.state(i as isize, j as isize, k as isize);
            assert_eq!(v[comp::P], x3 * x3);
        });
    }

    #[test]
    fn restrict_of_extend_is_identity_bitwise() {
        let g = quarter_grid(6);
        let mut f = Field::zeros(g);
        let mut x = 0.618_f64;
        let grid_iter = f.grid;
        grid_iter.for_each_cell(|i, j, k| {
            let mut v = [0.0; NCOMP];
            for c in v.iter_mut() {
                x = (x * 16807.0).fract();
                *c = 2.0 * x - 1.0;
            }
            f.set_state(i as isize, j as isize, k as isize, &v);
        });
        let back = restrict(&extend(&f).unwrap()).unwrap();
        assert_eq!(back.max_abs_diff(&f), 0.0);
        back.for_each_interior(|i, j, k| {
            assert_eq!(
                back.state(i as isize, j as isize, k as isize),
                f.state(i as isize, j as isize, k as isize)
            );
        });
    }

    #[test]
    fn extend_of_restrict_detects_broken_parity() {
        let g = quarter_grid(4).mirrored_half().unwrap();
        // symmetric field, then break u3 parity at one cell
        let mut f = Field::constant(g, &background_vec8(1.0));
        assert_eq!(extend(&restrict(&f).unwrap()).unwrap().max_abs_diff(&f), 0.0);
        let mut v = f.state(1, 1, 1);
        v[comp::U3] = 0.25;
        f.set_state(1, 1, 1, &v);
        let rt = extend(&restrict(&f).unwrap()).unwrap();
        assert!(rt.max_abs_diff(&f) > 0.0);
        assert!(parity_defect_max(&f).unwrap() > 0.0);
    }

    #[test]
    fn even_nonzero_u3_has_double_defect() {
        let g = quarter_grid(4).mirrored_half().unwrap();
        let mut f = Field::zeros(g);
        let grid_iter = f.grid;
        grid_iter.for_each_cell(|i, j, k| {
            let mut v = [0.0; NCOMP];
            v[comp::U3] = 0.3; // even in x3, which breaks the odd signature
            f.set_state(i as isize, j as isize, k as isize, &v);
        });
        let d = parity_defect(&f).unwrap();
        assert_eq!(d[comp::U3], 0.6);
    }

    #[test]
    fn extend_rejects_wrong_domain() {
        let g = quarter_grid(4).mirrored_half().unwrap();
        let f = Field::zeros(g);
        assert!(extend(&f).is_err());
        let q = Field::<f64>::zeros(quarter_grid(4));
        assert!(restrict(&q).is_err());
    }
}
