//! Assembly of the symmetric quasilinear form of ideal compressible MHD.
//!
//! With U = (p, u, H, S) the system reads A0(U) dU/dt + sum_j A_j(U) d_j U = 0
//! where A0 is diagonal positive definite under the hyperbolicity condition
//! rho > 0, rho_p > 0, and the A_j are symmetric:
//!
//!   A0 = diag(rho_p/rho, rho I3, I3, 1)
//!
//!   A_j: (p,p) = (rho_p/rho) u_j,  (p, u_j) = 1,
//!        (u,u) = rho u_j I3,
//!        (u_k, H_i) = delta_{kj} H_i - H_j delta_{ki},
//!        (H,H) = u_j I3,  (S,S) = u_j.
//!
//! `rhs_from_gradients` applies the same blocks in solve form:
//! dU/dt = -A0^{-1} sum_j A_j g_j, using the diagonal structure of A0.

use crate::eos::EquationOfState;
use crate::error::{Error, Result};
use crate::mat8::Mat8;
use crate::scalar::Scalar;
use crate::state::{comp, State, Vec8, NCOMP};

/// The assembled coefficient matrices at one state.
#[derive(Clone, Copy, Debug)]
pub struct MatrixSet<T> {
    pub a0: Mat8<T>,
    pub a: [Mat8<T>; 3],
    pub a_hat: [Mat8<T>; 3],
}

/// Density values checked against the hyperbolicity condition.
pub fn checked_density<T: Scalar>(
    eos: &EquationOfState<T>,
    u: &State<T>,
    location: Option<[usize; 3]>,
) -> Result<(T, T)> {
    let (rho, rho_p) = eos.density(u.pressure(), u.entropy())?;
    if !(rho.value() > 0.0 && rho_p.value() > 0.0 && rho.is_finite() && rho_p.is_finite()) {
        return Err(Error::Hyperbolicity {
            rho: rho.value(),
            rho_p: rho_p.value(),
            location,
        });
    }
    Ok((rho, rho_p))
}

/// Diagonal of A0: (rho_p/rho, rho, rho, rho, 1, 1, 1, 1).
pub fn a0_diagonal<T: Scalar>(rho: T, rho_p: T) -> Vec8<T> {
    let one = T::one();
    [rho_p / rho, rho, rho, rho, one, one, one, one]
}

/// Fills the symmetric coefficient matrix for direction `j` (0-based).
fn fill_coefficient_matrix<T: Scalar>(j: usize, u: &Vec8<T>, rho: T, rho_p: T, m: &mut Mat8<T>) {
    *m = Mat8::zeros();
    let uj = u[comp::U1 + j];
    let hj = u[comp::H1 + j];

    m.set(comp::P, comp::P, (rho_p / rho) * uj);
    m.set_sym(comp::P, comp::U1 + j, T::one());
    for k in 0..3 {
        m.set(comp::U1 + k, comp::U1 + k, rho * uj);
    }
    // velocity-magnetic coupling: delta_{kj} H_i - H_j delta_{ki}
    for k in 0..3 {
        for i in 0..3 {
            if k == j && i == k {
                m.set_sym(comp::U1 + k, comp::H1 + i, u[comp::H1 + i] - hj);
            } else if k == j {
                m.set_sym(comp::U1 + k, comp::H1 + i, u[comp::H1 + i]);
            } else if k == i {
                m.set_sym(comp::U1 + k, comp::H1 + i, -hj);
            }
        }
    }
    for i in 0..3 {
        m.set(comp::H1 + i, comp::H1 + i, uj);
    }
    m.set(comp::S, comp::S, uj);
}

/// Assembles A0, A_1..3 and the derived A0^{-1} A_j at state `u`.
pub fn assemble<T: Scalar>(eos: &EquationOfState<T>, u: &State<T>) -> Result<MatrixSet<T>> {
    let (rho, rho_p) = checked_density(eos, u, None)?;
    let d = a0_diagonal(rho, rho_p);
    let a0 = Mat8::from_diagonal(&d);
    let mut a = [Mat8::zeros(); 3];
    for (j, aj) in a.iter_mut().enumerate() {
        fill_coefficient_matrix(j, &u.0, rho, rho_p, aj);
    }
    // A0 is diagonal, so the linear solve A0 X = A_j is a row scaling.
    let mut a_hat = a;
    for m in a_hat.iter_mut() {
        for r in 0..NCOMP {
            for c in 0..NCOMP {
                m.0[r][c] = m.0[r][c] / d[r];
            }
        }
    }
    Ok(MatrixSet { a0, a, a_hat })
}

/// dU/dt from spatial gradients: -A0^{-1} sum_j A_j g_j, with A0 inverted
/// through its diagonal. Linear in the gradients.
pub fn rhs_from_gradients<T: Scalar>(
    eos: &EquationOfState<T>,
    u: &State<T>,
    grads: &[Vec8<T>; 3],
) -> Result<Vec8<T>> {
    let (rho, rho_p) = checked_density(eos, u, None)?;
    Ok(rhs_with_density(&u.0, rho, rho_p, grads))
}

/// Same as [`rhs_from_gradients`] with the density pair already checked.
/// This is the per-cell kernel of the time integrator; the expression
/// ordering is fixed so that a signed mirror of the inputs produces the
/// exact signed mirror of the output.
#[inline]
pub fn rhs_with_density<T: Scalar>(u: &Vec8<T>, rho: T, rho_p: T, grads: &[Vec8<T>; 3]) -> Vec8<T> {
    let mut acc = [T::zero(); NCOMP];
    let mut m = Mat8::zeros();
    for j in 0..3 {
        fill_coefficient_matrix(j, u, rho, rho_p, &mut m);
        let av = m.matvec(&grads[j]);
        for r in 0..NCOMP {
            acc[r] += av[r];
        }
    }
    let d = a0_diagonal(rho, rho_p);
    let mut out = [T::zero(); NCOMP];
    for r in 0..NCOMP {
        out[r] = -(acc[r] / d[r]);
    }
    out
}

/// Spectral radius of A0^{-1} A_nu for the symmetric pencil (A_nu, A0) where
/// A_nu = sum_j nu_j A_j, computed through the congruence
/// D^{-1/2} A_nu D^{-1/2} and a Jacobi eigensolve.
pub fn direction_speed<T: Scalar>(
    eos: &EquationOfState<T>,
    u: &State<T>,
    nu: [T; 3],
) -> Result<T> {
    let (rho, rho_p) = checked_density(eos, u, None)?;
    let d = a0_diagonal(rho, rho_p);
    let mut dis = [T::zero(); NCOMP];
    for i in 0..NCOMP {
        dis[i] = T::one() / d[i].sqrt();
    }
    let mut anu = Mat8::<T>::zeros();
    let mut m = Mat8::<T>::zeros();
    for j in 0..3 {
        fill_coefficient_matrix(j, &u.0, rho, rho_p, &mut m);
        for r in 0..NCOMP {
            for c in 0..NCOMP {
                anu.0[r][c] += nu[j] * m.0[r][c];
            }
        }
    }
    let mut scaled = Mat8::zeros();
    for r in 0..NCOMP {
        for c in r..NCOMP {
            let v = anu.0[r][c] * (dis[r] * dis[c]);
            scaled.set_sym(r, c, v);
        }
    }
    Ok(scaled.sym_spectral_radius())
}

/// Max over coordinate directions of the spectral radius of A0^{-1} A_j:
/// an upper bound for every characteristic speed along the axes.
pub fn wave_speed_bound<T: Scalar>(eos: &EquationOfState<T>, u: &State<T>) -> Result<T> {
    let (rho, rho_p) = checked_density(eos, u, None)?;
    Ok(wave_speed_bound_with_density(&u.0, rho, rho_p))
}

/// [`wave_speed_bound`] with the density pair already checked (per-cell CFL
/// kernel).
pub fn wave_speed_bound_with_density<T: Scalar>(u: &Vec8<T>, rho: T, rho_p: T) -> T {
    let d = a0_diagonal(rho, rho_p);
    let mut dis = [T::zero(); NCOMP];
    for i in 0..NCOMP {
        dis[i] = T::one() / d[i].sqrt();
    }
    let mut bound = T::zero();
    let mut m = Mat8::zeros();
    for j in 0..3 {
        fill_coefficient_matrix(j, u, rho, rho_p, &mut m);
        let mut scaled = Mat8::zeros();
        for r in 0..NCOMP {
            for c in r..NCOMP {
                let v = m.0[r][c] * (dis[r] * dis[c]);
                scaled.set_sym(r, c, v);
            }
        }
        bound = bound.max(scaled.sym_spectral_radius());
    }
    bound
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_state() -> State<f64> {
        // p = 0, u = 0, H = (1, 0, 0), S = 0 with the exponential law at
        // kappa = 1, so rho = rho_p = 1 and A0 = I.
        State([0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0])
    }

    fn eos1() -> EquationOfState<f64> {
        EquationOfState::exponential(1.0)
    }

    #[test]
    fn a0_is_identity_at_unit_state() {
        let ms = assemble(&eos1(), &unit_state()).unwrap();
        assert_eq!(ms.a0, Mat8::identity());
    }

    #[test]
    fn a3_nonzero_pattern_at_unit_state() {
        let ms = assemble(&eos1(), &unit_state()).unwrap();
        let a3 = ms.a[2];
        let mut nonzero = Vec::new();
        for r in 0..NCOMP {
            for c in 0..NCOMP {
                if a3.0[r][c] != 0.0 {
                    nonzero.push((r, c, a3.0[r][c]));
                }
            }
        }
        // exactly (p,u3), (u3,p), (u3,H1), (H1,u3), all equal 1
        assert_eq!(
            nonzero,
            vec![
                (comp::P, comp::U3, 1.0),
                (comp::U3, comp::P, 1.0),
                (comp::U3, comp::H1, 1.0),
                (comp::H1, comp::U3, 1.0),
            ]
        );
    }

    #[test]
    fn a1_entries_at_unit_state() {
        let ms = assemble(&eos1(), &unit_state()).unwrap();
        let a1 = ms.a[0];
        assert_eq!(a1.get(comp::P, comp::U1), 1.0);
        assert_eq!(a1.get(comp::U1, comp::P), 1.0);
        assert_eq!(a1.get(comp::U2, comp::H2), -1.0);
        assert_eq!(a1.get(comp::H2, comp::U2), -1.0);
        assert_eq!(a1.get(comp::U3, comp::H3), -1.0);
        assert_eq!(a1.get(comp::H3, comp::U3), -1.0);
        // every other entry vanishes
        let mut count = 0;
        for r in 0..NCOMP {
            for c in 0..NCOMP {
                if a1.0[r][c] != 0.0 {
                    count += 1;
                }
            }
        }
        assert_eq!(count, 6);
    }

    #[test]
    fn rhs_vanishes_on_zero_gradients() {
        let g = [[0.0; 8]; 3];
        let out = rhs_from_gradients(&eos1(), &unit_state(), &g).unwrap();
        assert_eq!(out, [0.0; 8]);
    }

    #[test]
    fn rhs_pressure_gradient_column() {
        // dp/dx1 = 1 at the unit state: du1/dt = -1, everything else zero.
        let mut g = [[0.0; 8]; 3];
        g[0][comp::P] = 1.0;
        let out = rhs_from_gradients(&eos1(), &unit_state(), &g).unwrap();
        let mut expect = [0.0; 8];
        expect[comp::U1] = -1.0;
        assert_eq!(out, expect);
    }

    #[test]
    fn rhs_is_linear_in_gradients() {
        let eos = eos1();
        let u = State([0.3, 0.1, -0.2, 0.4, 0.9, -0.5, 0.2, -0.1]);
        let mut x = 0.37_f64;
        let mut rand = || {
            x = (x * 16807.0).fract();
            2.0 * x - 1.0
        };
        for _ in 0..20 {
            let mut g1 = [[0.0; 8]; 3];
            let mut g2 = [[0.0; 8]; 3];
            let mut gs = [[0.0; 8]; 3];
            for j in 0..3 {
                for cidx in 0..8 {
                    g1[j][cidx] = rand();
                    g2[j][cidx] = rand();
                    gs[j][cidx] = g1[j][cidx] + g2[j][cidx];
                }
            }
            let r1 = rhs_from_gradients(&eos, &u, &g1).unwrap();
            let r2 = rhs_from_gradients(&eos, &u, &g2).unwrap();
            let rs = rhs_from_gradients(&eos, &u, &gs).unwrap();
            for cidx in 0..8 {
                assert!((rs[cidx] - (r1[cidx] + r2[cidx])).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn assemble_rejects_lost_hyperbolicity() {
        let eos = EquationOfState::<f64>::polytropic(5.0 / 3.0, 1.0);
        let u = State([-1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(assemble(&eos, &u).is_err());
    }

    #[test]
    fn sound_only_speed_at_rest() {
        let u = State([0.0; 8]);
        let b = wave_speed_bound(&eos1(), &u).unwrap();
        assert!((b - 1.0).abs() < 1e-12);
        let d1 = direction_speed(&eos1(), &u, [1.0, 0.0, 0.0]).unwrap();
        assert!((b - d1).abs() < 1e-12);
    }

    #[test]
    fn fast_speed_at_unit_state() {
        let b = wave_speed_bound(&eos1(), &unit_state()).unwrap();
        assert!((b - 2.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn velocity_shift_moves_bound_by_at_most_shift() {
        let eos = eos1();
        let u = State([0.2, 0.0, 0.1, -0.3, 0.8, 0.4, -0.2, 0.1]);
        let b0 = wave_speed_bound(&eos, &u).unwrap();
        for &v in &[0.5, 1.25, -0.75] {
            let mut shifted = u;
            shifted.0[comp::U1] += v;
            let b1 = wave_speed_bound(&eos, &shifted).unwrap();
            assert!(b1 <= b0 + v.abs() + 1e-12, "b0 = {b0}, b1 = {b1}, v = {v}");
        }
    }

    #[test]
    fn works_in_f32_too() {
        let eos = EquationOfState::<f32>::exponential(1.0);
        let u = State([0.0f32, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        let ms = assemble(&eos, &u).unwrap();
        assert_eq!(ms.a[2].max_asymmetry(), 0.0);
        let b = wave_speed_bound(&eos, &u).unwrap();
        assert!((b - 2.0_f32.sqrt()).abs() < 1e-5);
    }
}
