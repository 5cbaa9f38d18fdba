//! Finite-difference stencils.
//!
//! Two families live here:
//!
//! - Ghost-based interior kernels for the integrator (`d1_central`,
//!   `d4_undivided`). These are written in paired form, grouping the two
//!   stencil legs that exchange places under a mirror, so that reflecting
//!   the inputs reflects the output bit for bit.
//! - Lattice operators without ghost data for the compatibility checker and
//!   the Sobolev-norm diagnostics: 4th- or 2nd-order central differences
//!   with one-sided rows of the same order at non-periodic edges, plus
//!   one-sided face extrapolations on the cell-centered grid. These are
//!   written in anchored-difference form (sums of differences against the
//!   evaluation point), so constant fields produce exactly zero.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::scalar::Scalar;
use crate::state::NCOMP;

/// 4th-order central first derivative from the four neighbors, paired form:
/// [(f_{i-2} - f_{i+2}) + 8 (f_{i+1} - f_{i-1})] / (12 h).
#[inline]
pub fn d1_central<T: Scalar>(fm2: T, fm1: T, fp1: T, fp2: T, inv_12h: T) -> T {
    ((fm2 - fp2) + T::from_f64(8.0) * (fp1 - fm1)) * inv_12h
}

/// Undivided five-point fourth difference, paired form:
/// (f_{i-2} + f_{i+2}) - 4 (f_{i-1} + f_{i+1}) + 6 f_i.
#[inline]
pub fn d4_undivided<T: Scalar>(fm2: T, fm1: T, f0: T, fp1: T, fp2: T) -> T {
    ((fm2 + fp2) - T::from_f64(4.0) * (fm1 + fp1)) + T::from_f64(6.0) * f0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiffScheme {
    Central4,
    Central2,
}

impl DiffScheme {
    fn min_points(&self) -> usize {
        match self {
            DiffScheme::Central4 => 5,
            DiffScheme::Central2 => 3,
        }
    }
}

#[inline]
pub fn lattice_idx(n: [usize; 3], i: usize, j: usize, k: usize) -> usize {
    (k * n[1] + j) * n[0] + i
}

/// Interior values of one component as a contiguous scalar lattice
/// (x1 fastest, no ghosts).
pub fn extract_component<T: Scalar>(f: &Field<T>, comp: usize) -> Vec<T> {
    let n = f.grid.n;
    let mut out = vec![T::zero(); n[0] * n[1] * n[2]];
    for k in 0..n[2] {
        for j in 0..n[1] {
            for i in 0..n[0] {
                out[lattice_idx(n, i, j, k)] =
                    f.get(f.base(i as isize, j as isize, k as isize), comp);
            }
        }
    }
    out
}

/// All eight components as scalar lattices.
pub fn extract_components<T: Scalar>(f: &Field<T>) -> [Vec<T>; NCOMP] {
    std::array::from_fn(|c| extract_component(f, c))
}

/// One-dimensional derivative rows. `line(i)` reads the i-th point; the
/// result for point `i` is written through `put`.
fn d1_line<T: Scalar>(
    len: usize,
    periodic: bool,
    scheme: DiffScheme,
    h: T,
    line: &impl Fn(usize) -> T,
    put: &mut impl FnMut(usize, T),
) {
    match scheme {
        DiffScheme::Central4 => {
            let inv = T::one() / (T::from_f64(12.0) * h);
            let c8 = T::from_f64(8.0);
            if periodic {
                for i in 0..len {
                    let w = |d: isize| line((i as isize + d).rem_euclid(len as isize) as usize);
                    put(i, ((w(-2) - w(2)) + c8 * (w(1) - w(-1))) * inv);
                }
            } else {
                // forward row at the first point, biased row at the second,
                // mirrored with a sign flip at the other end
                let edge =
                    |f0: T, f1: T, f2: T, f3: T, f4: T| -> (T, T) {
                        let d0 = (T::from_f64(48.0) * (f1 - f0) - T::from_f64(36.0) * (f2 - f0))
                            + (T::from_f64(16.0) * (f3 - f0) - T::from_f64(3.0) * (f4 - f0));
                        let d1 = (-T::from_f64(3.0) * (f0 - f1) + T::from_f64(18.0) * (f2 - f1))
                            - (T::from_f64(6.0) * (f3 - f1) - (f4 - f1));
                        (d0, d1)
                    };
                let (d0, d1) = edge(line(0), line(1), line(2), line(3), line(4));
                put(0, d0 * inv);
                put(1, d1 * inv);
                for i in 2..len - 2 {
                    put(
                        i,
                        ((line(i - 2) - line(i + 2)) + c8 * (line(i + 1) - line(i - 1))) * inv,
                    );
                }
                let m = len - 1;
                let (e0, e1) = edge(line(m), line(m - 1), line(m - 2), line(m - 3), line(m - 4));
                put(m, -(e0 * inv));
                put(m - 1, -(e1 * inv));
            }
        }
        DiffScheme::Central2 => {
            let inv = T::one() / (T::two() * h);
            if periodic {
                for i in 0..len {
                    let w = |d: isize| line((i as isize + d).rem_euclid(len as isize) as usize);
                    put(i, (w(1) - w(-1)) * inv);
                }
            } else {
                let edge = |f0: T, f1: T, f2: T| T::from_f64(4.0) * (f1 - f0) - (f2 - f0);
                put(0, edge(line(0), line(1), line(2)) * inv);
                for i in 1..len - 1 {
                    put(i, (line(i + 1) - line(i - 1)) * inv);
                }
                let m = len - 1;
                put(m, -(edge(line(m), line(m - 1), line(m - 2)) * inv));
            }
        }
    }
}

/// Derivative of a scalar lattice along `axis`. Non-periodic axes use
/// one-sided rows of the scheme's order at the two edges and need at least
/// `min_points` cells; periodic axes work at any length.
pub fn lattice_d1<T: Scalar>(
    src: &[T],
    n: [usize; 3],
    axis: usize,
    h: T,
    periodic: bool,
    scheme: DiffScheme,
) -> Result<Vec<T>> {
    let len = n[axis];
    if !periodic && len < scheme.min_points() {
        return Err(Error::Grid(format!(
            "axis {} has {} cells; the one-sided stencil needs at least {}",
            axis + 1,
            len,
            scheme.min_points()
        )));
    }
    let mut out = vec![T::zero(); src.len()];
    let strides = [1usize, n[0], n[0] * n[1]];
    let stride = strides[axis];
    let others: [usize; 2] = match axis {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    };
    for b in 0..n[others[1]] {
        for a in 0..n[others[0]] {
            let mut idx = [0usize; 3];
            idx[others[0]] = a;
            idx[others[1]] = b;
            let base = lattice_idx(n, idx[0], idx[1], idx[2]);
            let line = |i: usize| src[base + i * stride];
            let mut put = |i: usize, v: T| out[base + i * stride] = v;
            d1_line(len, periodic, scheme, h, &line, &mut put);
        }
    }
    Ok(out)
}

/// 2nd-order extrapolation of cell-centered values to the low face of
/// `axis`: f0 + (f0 - f1) / 2. Exact on constants. Returns the face plane
/// indexed over the two transverse axes (first transverse axis fastest).
pub fn face_value_low<T: Scalar>(src: &[T], n: [usize; 3], axis: usize) -> Vec<T> {
    face_map_low(src, n, axis, |line| {
        let f0 = line(0);
        let f1 = line(1);
        f0 + (f0 - f1) * T::half()
    })
}

/// 2nd-order one-sided normal derivative at the low face of `axis`:
/// (-2 f0 + 3 f1 - f2) / h in anchored form.
pub fn face_d1_low<T: Scalar>(src: &[T], n: [usize; 3], axis: usize, h: T) -> Vec<T> {
    face_map_low(src, n, axis, |line| {
        let f0 = line(0);
        (T::from_f64(3.0) * (line(1) - f0) - (line(2) - f0)) / h
    })
}

/// 2nd-order one-sided second normal derivative at the low face of `axis`:
/// (5 f0 - 13 f1 + 11 f2 - 3 f3) / (2 h^2) in anchored form.
pub fn face_d2_low<T: Scalar>(src: &[T], n: [usize; 3], axis: usize, h: T) -> Vec<T> {
    let inv = T::one() / (T::two() * h * h);
    face_map_low(src, n, axis, |line| {
        let f0 = line(0);
        ((-T::from_f64(13.0) * (line(1) - f0) + T::from_f64(11.0) * (line(2) - f0))
            - T::from_f64(3.0) * (line(3) - f0))
            * inv
    })
}

fn face_map_low<T: Scalar>(
    src: &[T],
    n: [usize; 3],
    axis: usize,
    f: impl Fn(&dyn Fn(usize) -> T) -> T,
) -> Vec<T> {
    let strides = [1usize, n[0], n[0] * n[1]];
    let stride = strides[axis];
    let others: [usize; 2] = match axis {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    };
    let mut out = Vec::with_capacity(n[others[0]] * n[others[1]]);
    for b in 0..n[others[1]] {
        for a in 0..n[others[0]] {
            let mut idx = [0usize; 3];
            idx[others[0]] = a;
            idx[others[1]] = b;
            let base = lattice_idx(n, idx[0], idx[1], idx[2]);
            let line = move |i: usize| src[base + i * stride];
            out.push(f(&line));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_lattice(vals: &[f64]) -> (Vec<f64>, [usize; 3]) {
        (vals.to_vec(), [vals.len(), 1, 1])
    }

    #[test]
    fn central4_exact_on_cubics() {
        // f(x) = x^3 on x = (i + 1/2) h
        let h = 0.1;
        let vals: Vec<f64> = (0..12).map(|i| ((i as f64 + 0.5) * h).powi(3)).collect();
        let (src, n) = line_lattice(&vals);
        let d = lattice_d1(&src, n, 0, h, false, DiffScheme::Central4).unwrap();
        for i in 0..12 {
            let x = (i as f64 + 0.5) * h;
            assert!(
                (d[i] - 3.0 * x * x).abs() < 1e-12,
                "i = {i}: {} vs {}",
                d[i],
                3.0 * x * x
            );
        }
    }

    #[test]
    fn central4_fourth_order_convergence() {
        let err = |m: usize| -> f64 {
            let h = 1.0 / m as f64;
            let vals: Vec<f64> = (0..m).map(|i| ((i as f64 + 0.5) * h).sin()).collect();
            let (src, n) = line_lattice(&vals);
            let d = lattice_d1(&src, n, 0, h, false, DiffScheme::Central4).unwrap();
            (0..m)
                .map(|i| (d[i] - ((i as f64 + 0.5) * h).cos()).abs())
                .fold(0.0, f64::max)
        };
        let e1 = err(20);
        let e2 = err(40);
        let rate = (e1 / e2).log2();
        assert!(rate > 3.7, "rate = {rate}");
    }

    #[test]
    fn exact_zero_on_constants() {
        let vals = vec![std::f64::consts::PI; 9];
        let (src, n) = line_lattice(&vals);
        for scheme in [DiffScheme::Central4, DiffScheme::Central2] {
            for periodic in [false, true] {
                let d = lattice_d1(&src, n, 0, 0.1, periodic, scheme).unwrap();
                assert!(d.iter().all(|&v| v == 0.0), "{scheme:?} periodic={periodic}");
            }
        }
        assert!(face_value_low(&src, n, 0).iter().all(|&v| v == std::f64::consts::PI));
        assert!(face_d1_low(&src, n, 0, 0.1).iter().all(|&v| v == 0.0));
        assert!(face_d2_low(&src, n, 0, 0.1).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn periodic_wrap_matches_interior() {
        let m = 16;
        let h = 1.0 / m as f64;
        let vals: Vec<f64> = (0..m)
            .map(|i| (2.0 * std::f64::consts::PI * (i as f64 + 0.5) * h).sin())
            .collect();
        let (src, n) = line_lattice(&vals);
        let d = lattice_d1(&src, n, 0, h, true, DiffScheme::Central4).unwrap();
        for i in 0..m {
            let x = (i as f64 + 0.5) * h;
            let exact = 2.0 * std::f64::consts::PI * (2.0 * std::f64::consts::PI * x).cos();
            assert!((d[i] - exact).abs() < 0.02 * exact.abs().max(1.0));
        }
    }

    #[test]
    fn degenerate_periodic_axis_is_inert() {
        let (src, n) = line_lattice(&[0.7]);
        let d = lattice_d1(&src, n, 0, 0.5, true, DiffScheme::Central4).unwrap();
        assert_eq!(d[0], 0.0);
    }

    #[test]
    fn face_operators_orders() {
        // smooth f, face at x = 0, cell centers (i + 1/2) h
        let f = |x: f64| (1.3 * x).exp();
        let check = |m: usize| -> (f64, f64, f64) {
            let h = 0.5 / m as f64;
            let vals: Vec<f64> = (0..m).map(|i| f((i as f64 + 0.5) * h)).collect();
            let (src, n) = line_lattice(&vals);
            let v = face_value_low(&src, n, 0)[0];
            let d1 = face_d1_low(&src, n, 0, h)[0];
            let d2 = face_d2_low(&src, n, 0, h)[0];
            ((v - 1.0).abs(), (d1 - 1.3).abs(), (d2 - 1.69).abs())
        };
        let (v1, d11, d21) = check(16);
        let (v2, d12, d22) = check(32);
        assert!((v1 / v2).log2() > 1.7);
        assert!((d11 / d12).log2() > 1.7);
        assert!((d21 / d22).log2() > 1.5);
    }

    #[test]
    fn second_order_scheme_rate() {
        let err = |m: usize| -> f64 {
            let h = 1.0 / m as f64;
            let vals: Vec<f64> = (0..m).map(|i| ((i as f64 + 0.5) * h).sin()).collect();
            let (src, n) = line_lattice(&vals);
            let d = lattice_d1(&src, n, 0, h, false, DiffScheme::Central2).unwrap();
            (0..m)
                .map(|i| (d[i] - ((i as f64 + 0.5) * h).cos()).abs())
                .fold(0.0, f64::max)
        };
        let rate = (err(32) / err(64)).log2();
        assert!(rate > 1.8, "rate = {rate}");
    }

    #[test]
    fn paired_central_mirrors_bitwise() {
        // reflecting the stencil legs negates the derivative exactly
        let cases = [
            [0.1234, -0.5, 3.25e-7, 1.0],
            [1.0, 1.0 + 1e-15, -2.0, 4.0e8],
            [0.0, -0.0, 1e-300, -1e-300],
        ];
        let inv = 1.0 / (12.0 * 0.037);
        for [a, b, c, d] in cases {
            let fwd: f64 = d1_central(a, b, c, d, inv);
            let rev: f64 = d1_central(d, c, b, a, inv);
            assert_eq!(fwd.to_bits(), (-rev).to_bits());
            let diss_f: f64 = d4_undivided(a, b, 0.77, c, d);
            let diss_r: f64 = d4_undivided(d, c, 0.77, b, a);
            assert_eq!(diss_f.to_bits(), diss_r.to_bits());
        }
    }
}
