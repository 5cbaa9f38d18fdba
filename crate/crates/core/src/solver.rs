//! Method-of-lines integrator for the quasilinear system on the quarter,
//! half, and periodic boxes.
//!
//! Space: 4th-order central differences of every component plus five-point
//! fourth-difference dissipation, both written in mirror-paired form. Ghost
//! cells realize the walls (see [`crate::bc`]). Time: classical four-stage
//! Runge-Kutta with the ghost fill re-applied before every stage.
//!
//! The per-cell update commutes with the signed x3 mirror exactly in
//! floating point, which is what makes the quarter-box run equal the
//! restriction of the half-box run bit for bit when both use the same time
//! step sequence.

use rayon::prelude::*;

use crate::bc::apply_bc;
use crate::diagnostics::{self, DiagRecord};
use crate::eos::EquationOfState;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::{Grid, GHOST};
use crate::reduce::ReduceMode;
use crate::reflection::{extend, restrict};
use crate::scalar::Scalar;
use crate::state::{State, Vec8, NCOMP};
use crate::stencil::{d1_central, d4_undivided};
use crate::system::{rhs_with_density, wave_speed_bound_with_density};

/// Worker pool: 0 threads means strictly serial execution.
pub struct Workers {
    pool: Option<rayon::ThreadPool>,
}

impl Workers {
    pub fn new(threads: usize) -> Self {
        let pool = if threads == 0 {
            None
        } else {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build()
                    .expect("worker pool"),
            )
        };
        Workers { pool }
    }

    pub fn serial() -> Self {
        Self::new(0)
    }

    pub fn parallel(&self) -> bool {
        self.pool.is_some()
    }

    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        match &self.pool {
            Some(pool) => pool.install(f),
            None => f(),
        }
    }
}

/// Evaluates the semidiscrete right-hand side over one padded k-plane.
fn rhs_plane<T: Scalar>(
    eos: &EquationOfState<T>,
    f: &Field<T>,
    k: usize,
    out_plane: &mut [T],
    inv12h: &[T; 3],
    eps_over_h: &[T; 3],
    with_dissipation: bool,
) -> Result<()> {
    let n = f.grid.n;
    let m0 = f.padded_dims()[0];
    let strides = [f.stride(0), f.stride(1), f.stride(2)];
    for j in 0..n[1] {
        for i in 0..n[0] {
            let b = f.base(i as isize, j as isize, k as isize);
            let u = f.state(i as isize, j as isize, k as isize);
            let (rho, rho_p) = eos.density(u[0], u[7])?;
            if !(rho.value() > 0.0 && rho_p.value() > 0.0 && rho.is_finite() && rho_p.is_finite())
            {
                return Err(Error::Hyperbolicity {
                    rho: rho.value(),
                    rho_p: rho_p.value(),
                    location: Some([i, j, k]),
                });
            }
            let mut grads = [[T::zero(); NCOMP]; 3];
            for axis in 0..3 {
                let s = strides[axis];
                for c in 0..NCOMP {
                    grads[axis][c] = d1_central(
                        f.get(b - 2 * s, c),
                        f.get(b - s, c),
                        f.get(b + s, c),
                        f.get(b + 2 * s, c),
                        inv12h[axis],
                    );
                }
            }
            let mut out = rhs_with_density(&u, rho, rho_p, &grads);
            if with_dissipation {
                for axis in 0..3 {
                    let s = strides[axis];
                    for c in 0..NCOMP {
                        let diss = d4_undivided(
                            f.get(b - 2 * s, c),
                            f.get(b - s, c),
                            f.get(b, c),
                            f.get(b + s, c),
                            f.get(b + 2 * s, c),
                        );
                        out[c] = out[c] - eps_over_h[axis] * diss;
                    }
                }
            }
            let off = ((j + GHOST) * m0 + (i + GHOST)) * NCOMP;
            out_plane[off..off + NCOMP].copy_from_slice(&out);
        }
    }
    Ok(())
}

pub struct Stepper<T> {
    pub eos: EquationOfState<T>,
    pub epsilon: T,
    pub cfl: T,
    grid: Grid<T>,
    k: [Field<T>; 4],
    stage: Field<T>,
}

impl<T: Scalar> Stepper<T> {
    pub fn new(eos: EquationOfState<T>, grid: Grid<T>, epsilon: T, cfl: T) -> Self {
        Stepper {
            eos,
            epsilon,
            cfl,
            grid,
            k: [
                Field::zeros(grid),
                Field::zeros(grid),
                Field::zeros(grid),
                Field::zeros(grid),
            ],
            stage: Field::zeros(grid),
        }
    }

    /// Semidiscrete right-hand side of `f` into `out` (interior cells).
    /// `f` must have its ghosts filled.
    pub fn rhs_into(&self, f: &Field<T>, out: &mut Field<T>, workers: &Workers) -> Result<()> {
        let inv12h = [
            T::one() / (T::from_f64(12.0) * self.grid.h[0]),
            T::one() / (T::from_f64(12.0) * self.grid.h[1]),
            T::one() / (T::from_f64(12.0) * self.grid.h[2]),
        ];
        let eps_over_h = [
            self.epsilon / self.grid.h[0],
            self.epsilon / self.grid.h[1],
            self.epsilon / self.grid.h[2],
        ];
        let with_diss = self.epsilon.value() != 0.0;
        let plane = f.plane_len();
        let n2 = self.grid.n[2];
        let eos = &self.eos;
        if workers.parallel() {
            workers.install(|| {
                out.raw_mut()
                    .par_chunks_mut(plane)
                    .enumerate()
                    .try_for_each(|(kk, out_plane)| {
                        if kk < GHOST || kk >= n2 + GHOST {
                            return Ok(());
                        }
                        rhs_plane(eos, f, kk - GHOST, out_plane, &inv12h, &eps_over_h, with_diss)
                    })
            })
        } else {
            for (kk, out_plane) in out.raw_mut().chunks_mut(plane).enumerate() {
                if kk < GHOST || kk >= n2 + GHOST {
                    continue;
                }
                rhs_plane(eos, f, kk - GHOST, out_plane, &inv12h, &eps_over_h, with_diss)?;
            }
            Ok(())
        }
    }

    /// Max over cells of the per-state wave speed bound.
    pub fn max_wave_speed(&self, f: &Field<T>, workers: &Workers) -> Result<T> {
        let n = self.grid.n;
        let eos = &self.eos;
        let plane_speed = |k: usize| -> Result<T> {
            let mut worst = T::zero();
            for j in 0..n[1] {
                for i in 0..n[0] {
                    let u = f.state(i as isize, j as isize, k as isize);
                    let (rho, rho_p) = eos.density(u[0], u[7])?;
                    if !(rho.value() > 0.0 && rho_p.value() > 0.0) {
                        return Err(Error::Hyperbolicity {
                            rho: rho.value(),
                            rho_p: rho_p.value(),
                            location: Some([i, j, k]),
                        });
                    }
                    worst = worst.max(wave_speed_bound_with_density(&u, rho, rho_p));
                }
            }
            Ok(worst)
        };
        if workers.parallel() {
            workers.install(|| {
                (0..n[2])
                    .into_par_iter()
                    .map(plane_speed)
                    .try_reduce(|| T::zero(), |a, b| Ok(a.max(b)))
            })
        } else {
            let mut worst = T::zero();
            for k in 0..n[2] {
                worst = worst.max(plane_speed(k)?);
            }
            Ok(worst)
        }
    }

    /// One classical Runge-Kutta step in place. `max_speed` is the wave
    /// speed bound used for the stability check.
    pub fn step(
        &mut self,
        u: &mut Field<T>,
        dt: T,
        max_speed: T,
        workers: &Workers,
    ) -> Result<()> {
        if max_speed.value() > 0.0 {
            let bound = (self.cfl * self.grid.min_h() / max_speed).value() * (1.0 + 1e-12);
            if dt.value() > bound {
                return Err(Error::CflViolation {
                    dt: dt.value(),
                    bound,
                });
            }
        }
        let half_dt = T::half() * dt;
        let two = T::two();

        apply_bc(u);
        // k1..k4 are taken out of self to appease borrows, then restored
        let mut k = std::mem::replace(&mut self.k, [
            Field::zeros(self.grid),
            Field::zeros(self.grid),
            Field::zeros(self.grid),
            Field::zeros(self.grid),
        ]);
        let mut stage = std::mem::replace(&mut self.stage, Field::zeros(self.grid));

        let result = (|| -> Result<()> {
            self.rhs_into(u, &mut k[0], workers)?;
            axpy(&mut stage, u, half_dt, &k[0]);
            apply_bc(&mut stage);
            self.rhs_into(&stage, &mut k[1], workers)?;
            axpy(&mut stage, u, half_dt, &k[1]);
            apply_bc(&mut stage);
            self.rhs_into(&stage, &mut k[2], workers)?;
            axpy(&mut stage, u, dt, &k[2]);
            apply_bc(&mut stage);
            self.rhs_into(&stage, &mut k[3], workers)?;
            let dt6 = dt / T::from_f64(6.0);
            let ur = u.raw_mut();
            let (k1r, k2r, k3r, k4r) = (k[0].raw(), k[1].raw(), k[2].raw(), k[3].raw());
            for idx in 0..ur.len() {
                let acc = ((k1r[idx] + two * k2r[idx]) + two * k3r[idx]) + k4r[idx];
                ur[idx] = ur[idx] + dt6 * acc;
            }
            Ok(())
        })();

        self.k = k;
        self.stage = stage;
        result
    }
}

/// dst = base + a * k over the whole padded buffer (ghosts of k are zero).
fn axpy<T: Scalar>(dst: &mut Field<T>, base: &Field<T>, a: T, k: &Field<T>) {
    let d = dst.raw_mut();
    let b = base.raw();
    let kr = k.raw();
    for i in 0..d.len() {
        d[i] = b[i] + a * kr[i];
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions<T> {
    pub cfl: T,
    pub epsilon: T,
    pub t_end: f64,
    /// 0 = no step cap.
    pub max_steps: u64,
    /// Diagnostics cadence in steps; 0 disables intermediate records.
    pub diag_every: u64,
    /// Reuse this exact step sequence instead of the CFL rule.
    pub forced_dts: Option<Vec<f64>>,
    pub reduce: ReduceMode,
    pub background: Vec8<T>,
}

impl<T: Scalar> RunOptions<T> {
    pub fn new(t_end: f64, background: Vec8<T>) -> Self {
        RunOptions {
            cfl: T::half(),
            epsilon: T::from_f64(0.02),
            t_end,
            max_steps: 0,
            diag_every: 1,
            forced_dts: None,
            reduce: ReduceMode::Tree,
            background,
        }
    }
}

pub struct RunResult<T> {
    pub field: Field<T>,
    pub time: f64,
    pub steps: u64,
    pub dts: Vec<f64>,
    pub diagnostics: Vec<DiagRecord>,
}

/// Integrates `initial` according to `opts`. `on_snapshot` is invoked for
/// the initial state, at the snapshot cadence built into the caller (it can
/// filter on the step number), and for the final state.
pub fn run<T: Scalar>(
    eos: &EquationOfState<T>,
    initial: Field<T>,
    opts: &RunOptions<T>,
    workers: &Workers,
    mut on_snapshot: impl FnMut(u64, f64, &Field<T>) -> Result<()>,
) -> Result<RunResult<T>> {
    let grid = initial.grid;
    let mut stepper = Stepper::new(*eos, grid, opts.epsilon, opts.cfl);
    let mut field = initial;
    let mut t = 0.0f64;
    let mut steps = 0u64;
    let mut dts = Vec::new();
    let mut diagnostics = Vec::new();

    let record = |field: &mut Field<T>, steps: u64, t: f64, diags: &mut Vec<DiagRecord>| -> Result<()> {
        apply_bc(field);
        let rec = diagnostics::record(
            field,
            eos,
            &opts.background,
            steps,
            t,
            opts.reduce,
            workers.parallel(),
        )?;
        diags.push(rec);
        Ok(())
    };

    record(&mut field, 0, 0.0, &mut diagnostics)?;
    on_snapshot(0, 0.0, &field)?;

    let t_tol = 1e-12 * opts.t_end.abs().max(1.0);
    loop {
        let done_time = opts.forced_dts.is_none() && t >= opts.t_end - t_tol;
        let done_steps = (opts.max_steps > 0 && steps >= opts.max_steps)
            || opts
                .forced_dts
                .as_ref()
                .is_some_and(|v| steps as usize >= v.len());
        if done_time || done_steps {
            break;
        }
        let speed = stepper.max_wave_speed(&field, workers)?;
        let dt = match &opts.forced_dts {
            Some(v) => v[steps as usize],
            None => {
                let mut dt = if speed.value() > 0.0 {
                    (opts.cfl * grid.min_h() / speed).value()
                } else {
                    opts.t_end - t
                };
                if t + dt > opts.t_end {
                    dt = opts.t_end - t;
                }
                dt
            }
        };
        stepper.step(&mut field, T::from_f64(dt), speed, workers)?;
        t += dt;
        steps += 1;
        dts.push(dt);
        if opts.diag_every > 0 && steps % opts.diag_every == 0 {
            record(&mut field, steps, t, &mut diagnostics)?;
        }
        on_snapshot(steps, t, &field)?;
    }
    if diagnostics.last().map(|r| r.step) != Some(steps) {
        record(&mut field, steps, t, &mut diagnostics)?;
    }

    Ok(RunResult {
        field,
        time: t,
        steps,
        dts,
        diagnostics,
    })
}

#[derive(Clone, Debug)]
pub struct ReflectionComparison {
    pub steps: u64,
    pub max_abs_diff: f64,
    pub max_rel_diff: f64,
    pub exact_equal: bool,
    pub half_parity_defect: f64,
    pub quarter_diagnostics: Vec<DiagRecord>,
    pub half_diagnostics: Vec<DiagRecord>,
}

/// The reflection equivalence experiment: integrate a quarter-box datum,
/// integrate its parity extension on the half box with the identical time
/// step sequence, restrict, and compare pointwise.
pub fn compare_reflection<T: Scalar>(
    eos: &EquationOfState<T>,
    quarter_initial: Field<T>,
    opts: &RunOptions<T>,
    workers: &Workers,
) -> Result<ReflectionComparison> {
    let half_initial = extend(&quarter_initial)?;
    let quarter = run(eos, quarter_initial, opts, workers, |_, _, _| Ok(()))?;
    let mut half_opts = opts.clone();
    half_opts.forced_dts = Some(quarter.dts.clone());
    let half = run(eos, half_initial, &half_opts, workers, |_, _, _| Ok(()))?;
    let restricted = restrict(&half.field)?;

    let mut max_abs = 0.0f64;
    let mut scale = 0.0f64;
    restricted.for_each_interior(|i, j, k| {
        let a = restricted.state(i as isize, j as isize, k as isize);
        let b = quarter.field.state(i as isize, j as isize, k as isize);
        for c in 0..NCOMP {
            max_abs = max_abs.max((a[c] - b[c]).abs().value());
            scale = scale.max(b[c].abs().value());
        }
    });
    let max_rel = if scale > 0.0 { max_abs / scale } else { max_abs };
    let half_parity_defect = half
        .diagnostics
        .last()
        .and_then(|r| r.parity_defect)
        .unwrap_or(0.0);

    Ok(ReflectionComparison {
        steps: quarter.steps,
        max_abs_diff: max_abs,
        max_rel_diff: max_rel,
        exact_equal: max_abs == 0.0,
        half_parity_defect,
        quarter_diagnostics: quarter.diagnostics,
        half_diagnostics: half.diagnostics,
    })
}

/// Wave speed bound as an op on a whole state (re-export of the per-state
/// kernel for callers that have an assembled state).
pub fn state_wave_speed<T: Scalar>(eos: &EquationOfState<T>, u: &State<T>) -> Result<T> {
    crate::system::wave_speed_bound(eos, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::DomainKind;
    use crate::state::{background_vec8, comp};

    fn eos1() -> EquationOfState<f64> {
        EquationOfState::exponential(1.0)
    }

    #[test]
    fn constant_state_is_a_bitwise_fixed_point() {
        let g = Grid::<f64>::new(DomainKind::Quarter, [1.0; 3], [8, 4, 8]).unwrap();
        let bg = background_vec8(1.0);
        let f0 = Field::constant(g, &bg);
        let opts = RunOptions {
            max_steps: 5,
            t_end: 1e9,
            ..RunOptions::new(1e9, bg)
        };
        let workers = Workers::serial();
        let r = run(&eos1(), f0.clone(), &opts, &workers, |_, _, _| Ok(())).unwrap();
        assert_eq!(r.steps, 5);
        assert_eq!(r.field.max_abs_diff(&f0), 0.0);
        // diagnostic series are constant
        for rec in &r.diagnostics {
            assert_eq!(rec.divh_max, 0.0);
            assert_eq!(rec.hnorms, [0.0; 4]);
        }
    }

    #[test]
    fn cfl_violation_is_reported() {
        let g = Grid::<f64>::new(DomainKind::Quarter, [1.0; 3], [8, 4, 8]).unwrap();
        let bg = background_vec8(1.0);
        let mut f = Field::constant(g, &bg);
        let mut stepper = Stepper::new(eos1(), g, 0.02, 0.5);
        let workers = Workers::serial();
        let speed = stepper.max_wave_speed(&f, &workers).unwrap();
        assert!(speed > 1.0);
        let err = stepper.step(&mut f, 10.0, speed, &workers);
        assert!(matches!(err, Err(Error::CflViolation { .. })));
    }

    #[test]
    fn one_step_commutes_with_the_signed_mirror() {
        // evolve a asymmetric half-box field, mirror it, evolve the mirror:
        // the two final fields are signed mirrors of each other exactly
        let gq = Grid::<f64>::new(DomainKind::Quarter, [1.0; 3], [6, 4, 4]).unwrap();
        let mut q = Field::zeros(gq);
        let mut x = 0.356_f64;
        let grid_iter = q.grid;
        grid_iter.for_each_cell(|i, j, k| {
            let mut v = background_vec8(1.0);
            for c in 0..NCOMP {
                x = (x * 16807.0).fract();
                v[c] += 0.01 * (2.0 * x - 1.0);
            }
            q.set_state(i as isize, j as isize, k as isize, &v);
        });
        // break the parity on purpose: the half field is NOT symmetric
        let mut h = extend(&q).unwrap();
        let mut v = h.state(2, 1, 1);
        v[comp::P] += 0.005;
        v[comp::U3] += 0.003;
        h.set_state(2, 1, 1, &v);

        let gh = h.grid;
        let n3 = gh.n[2];
        let mirror_field = |f: &Field<f64>| -> Field<f64> {
            let mut out = Field::zeros(gh);
            f.for_each_interior(|i, j, k| {
                let v = f.state(i as isize, j as isize, k as isize);
                let m = crate::reflection::signed_mirror(&crate::reflection::PARITY_X3, &v);
                out.set_state(i as isize, j as isize, (n3 - 1 - k) as isize, &m);
            });
            out
        };

        let workers = Workers::serial();
        let dt = 0.002;
        let mut a = h.clone();
        let mut stepper = Stepper::new(eos1(), gh, 0.02, 0.5);
        let sa = stepper.max_wave_speed(&a, &workers).unwrap();
        stepper.step(&mut a, dt, sa, &workers).unwrap();
        let mirrored_after = mirror_field(&a);

        let mut b = mirror_field(&h);
        let sb = stepper.max_wave_speed(&b, &workers).unwrap();
        stepper.step(&mut b, dt, sb, &workers).unwrap();

        assert_eq!(b.max_abs_diff(&mirrored_after), 0.0);
    }

    #[test]
    fn parallel_and_serial_steps_agree_bitwise() {
        let g = Grid::<f64>::new(DomainKind::Quarter, [1.0; 3], [8, 4, 8]).unwrap();
        let mut f = Field::zeros(g);
        let mut x = 0.77_f64;
        let grid_iter = f.grid;
        grid_iter.for_each_cell(|i, j, k| {
            let mut v = background_vec8(1.0);
            for c in 0..NCOMP {
                x = (x * 16807.0).fract();
                v[c] += 0.01 * (2.0 * x - 1.0);
            }
            f.set_state(i as isize, j as isize, k as isize, &v);
        });
        let serial = Workers::serial();
        let par = Workers::new(4);
        let mut a = f.clone();
        let mut b = f;
        let mut sa = Stepper::new(eos1(), g, 0.02, 0.5);
        let mut sb = Stepper::new(eos1(), g, 0.02, 0.5);
        for _ in 0..3 {
            let va = sa.max_wave_speed(&a, &serial).unwrap();
            let vb = sb.max_wave_speed(&b, &par).unwrap();
            assert_eq!(va, vb);
            let dt = 0.4 * g.min_h() / va;
            sa.step(&mut a, dt, va, &serial).unwrap();
            sb.step(&mut b, dt, vb, &par).unwrap();
        }
        assert_eq!(a.max_abs_diff(&b), 0.0);
    }
}
