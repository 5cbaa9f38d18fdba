//! Run diagnostics: divergence monitor, kinetic + magnetic energy, discrete
//! Sobolev norms of the deviation from the background, wall traces of u3 and
//! H3, and the parity defect on the half box.
//!
//! Sums go through [`crate::reduce`] so the results are independent of the
//! worker count; max norms are order-independent anyway.

use crate::eos::EquationOfState;
use crate::error::Result;
use crate::field::Field;
use crate::grid::DomainKind;
use crate::reduce::{self, ReduceMode};
use crate::reflection;
use crate::scalar::Scalar;
use crate::state::{comp, Vec8, NCOMP};
use crate::stencil::{d1_central, lattice_d1, lattice_idx, DiffScheme};
use crate::system::checked_density;

#[derive(Clone, Copy, Debug)]
pub struct DiagRecord {
    pub step: u64,
    pub t: f64,
    pub divh_max: f64,
    pub energy: f64,
    /// Discrete H^0..H^3 norms of (field - background).
    pub hnorms: [f64; 4],
    pub trace_u3: f64,
    pub trace_h3: f64,
    /// Only recorded on the half box.
    pub parity_defect: Option<f64>,
}

impl DiagRecord {
    pub fn csv_header(half: bool) -> String {
        let mut s = String::from("step,t,divh_max,energy,h0,h1,h2,h3,trace_u3,trace_h3");
        if half {
            s.push_str(",parity_defect");
        }
        s
    }

    pub fn csv_line(&self) -> String {
        let mut s = format!(
            "{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
            self.step,
            self.t,
            self.divh_max,
            self.energy,
            self.hnorms[0],
            self.hnorms[1],
            self.hnorms[2],
            self.hnorms[3],
            self.trace_u3,
            self.trace_h3
        );
        if let Some(p) = self.parity_defect {
            s.push_str(&format!(",{p:.17e}"));
        }
        s
    }
}

/// Max over interior cells of the 4th-order central divergence of H.
/// Ghost cells must be filled.
pub fn div_h_max<T: Scalar>(f: &Field<T>) -> f64 {
    let n = f.grid.n;
    let inv = [
        T::one() / (T::from_f64(12.0) * f.grid.h[0]),
        T::one() / (T::from_f64(12.0) * f.grid.h[1]),
        T::one() / (T::from_f64(12.0) * f.grid.h[2]),
    ];
    let mut worst = 0.0f64;
    for k in 0..n[2] as isize {
        for j in 0..n[1] as isize {
            for i in 0..n[0] as isize {
                let b = f.base(i, j, k);
                let mut div = T::zero();
                for axis in 0..3 {
                    let s = f.stride(axis);
                    let c = comp::H1 + axis;
                    div += d1_central(
                        f.get(b - 2 * s, c),
                        f.get(b - s, c),
                        f.get(b + s, c),
                        f.get(b + 2 * s, c),
                        inv[axis],
                    );
                }
                worst = worst.max(div.abs().value());
            }
        }
    }
    worst
}

/// Total of (rho |u|^2 + |H|^2) / 2 times the cell volume.
pub fn total_energy<T: Scalar>(
    f: &Field<T>,
    eos: &EquationOfState<T>,
    mode: ReduceMode,
    parallel: bool,
) -> Result<f64> {
    let n = f.grid.n;
    let mut cells = Vec::with_capacity(f.grid.cell_count());
    for k in 0..n[2] as isize {
        for j in 0..n[1] as isize {
            for i in 0..n[0] as isize {
                let u = f.state(i, j, k);
                let (rho, _) = checked_density(
                    eos,
                    &crate::state::State(u),
                    Some([i as usize, j as usize, k as usize]),
                )?;
                let ke = rho
                    * (u[comp::U1] * u[comp::U1]
                        + u[comp::U2] * u[comp::U2]
                        + u[comp::U3] * u[comp::U3]);
                let me = u[comp::H1] * u[comp::H1]
                    + u[comp::H2] * u[comp::H2]
                    + u[comp::H3] * u[comp::H3];
                cells.push(T::half() * (ke + me));
            }
        }
    }
    let total = reduce::sum(&cells, mode, parallel) * f.grid.cell_volume();
    Ok(total.value())
}

/// Discrete H^0..H^3 norms of (field - background): L2 norms of all mixed
/// central differences up to third order, with one-sided rows of the same
/// order near non-periodic faces.
pub fn sobolev_norms<T: Scalar>(
    f: &Field<T>,
    background: &Vec8<T>,
    mode: ReduceMode,
    parallel: bool,
) -> Result<[f64; 4]> {
    let n = f.grid.n;
    let vol = f.grid.cell_volume();
    let periodic = [
        f.grid.rule(0) == crate::grid::AxisRule::Periodic,
        f.grid.rule(1) == crate::grid::AxisRule::Periodic,
        f.grid.rule(2) == crate::grid::AxisRule::Periodic,
    ];
    let mut level_sq = [T::zero(); 4];
    let mut sq_buf = vec![T::zero(); f.grid.cell_count()];
    let mut add_level = |level: usize, lat: &[T], sq_buf: &mut Vec<T>| {
        for (dst, &v) in sq_buf.iter_mut().zip(lat.iter()) {
            *dst = v * v;
        }
        level_sq[level] += reduce::sum(sq_buf, mode, parallel);
    };
    for c in 0..NCOMP {
        let mut base = vec![T::zero(); f.grid.cell_count()];
        for k in 0..n[2] {
            for j in 0..n[1] {
                for i in 0..n[0] {
                    base[lattice_idx(n, i, j, k)] =
                        f.get(f.base(i as isize, j as isize, k as isize), c) - background[c];
                }
            }
        }
        add_level(0, &base, &mut sq_buf);
        // multi-indices by total order, derivatives applied in ascending
        // axis order; prefixes are reused
        let d = |src: &[T], axis: usize| -> Result<Vec<T>> {
            lattice_d1(src, n, axis, f.grid.h[axis], periodic[axis], DiffScheme::Central4)
        };
        let d0 = d(&base, 0)?;
        let d1 = d(&base, 1)?;
        let d2 = d(&base, 2)?;
        for lat in [&d0, &d1, &d2] {
            add_level(1, lat, &mut sq_buf);
        }
        let d00 = d(&d0, 0)?;
        let d01 = d(&d0, 1)?;
        let d02 = d(&d0, 2)?;
        let d11 = d(&d1, 1)?;
        let d12 = d(&d1, 2)?;
        let d22 = d(&d2, 2)?;
        for lat in [&d00, &d01, &d02, &d11, &d12, &d22] {
            add_level(2, lat, &mut sq_buf);
        }
        let thirds = [
            d(&d00, 0)?,
            d(&d00, 1)?,
            d(&d00, 2)?,
            d(&d01, 1)?,
            d(&d01, 2)?,
            d(&d02, 2)?,
            d(&d11, 1)?,
            d(&d11, 2)?,
            d(&d12, 2)?,
            d(&d22, 2)?,
        ];
        for lat in &thirds {
            add_level(3, lat, &mut sq_buf);
        }
    }
    let mut out = [0.0f64; 4];
    let mut acc = T::zero();
    for (lvl, sq) in level_sq.into_iter().enumerate() {
        acc += sq;
        out[lvl] = (acc * vol).sqrt().value();
    }
    Ok(out)
}

/// Max |u3| and |H3| interpolated to the x3 = 0 interface with the 4-point
/// face formula (9 (a + b) - (c + d)) / 16, where (a, b) are the two cells
/// adjacent to the face and (c, d) the next pair. On the quarter box the
/// lower pair are ghost cells (which must be filled); on the half box the
/// interface runs through the middle of the grid. The pairing makes the
/// value exactly zero for odd-parity data.
pub fn gamma0_trace<T: Scalar>(f: &Field<T>) -> (f64, f64) {
    let n = f.grid.n;
    if f.grid.domain == DomainKind::Periodic {
        return (0.0, 0.0);
    }
    let kf = match f.grid.domain {
        DomainKind::Quarter => 0isize,
        DomainKind::Half => (n[2] / 2) as isize,
        DomainKind::Periodic => unreachable!(),
    };
    let sixteenth = T::from_f64(1.0 / 16.0);
    let nine = T::from_f64(9.0);
    let mut worst = [0.0f64; 2];
    for j in 0..n[1] as isize {
        for i in 0..n[0] as isize {
            for (slot, c) in [(0usize, comp::U3), (1usize, comp::H3)] {
                let a = f.get(f.base(i, j, kf - 1), c);
                let b = f.get(f.base(i, j, kf), c);
                let cc = f.get(f.base(i, j, kf - 2), c);
                let dd = f.get(f.base(i, j, kf + 1), c);
                let face = (nine * (a + b) - (cc + dd)) * sixteenth;
                worst[slot] = worst[slot].max(face.abs().value());
            }
        }
    }
    (worst[0], worst[1])
}

/// One full diagnostics record. Ghost cells of `f` must be filled.
pub fn record<T: Scalar>(
    f: &Field<T>,
    eos: &EquationOfState<T>,
    background: &Vec8<T>,
    step: u64,
    t: f64,
    mode: ReduceMode,
    parallel: bool,
) -> Result<DiagRecord> {
    let (trace_u3, trace_h3) = gamma0_trace(f);
    let parity = if f.grid.domain == DomainKind::Half {
        Some(reflection::parity_defect_max(f)?)
    } else {
        None
    };
    Ok(DiagRecord {
        step,
        t,
        divh_max: div_h_max(f),
        energy: total_energy(f, eos, mode, parallel)?,
        hnorms: sobolev_norms(f, background, mode, parallel)?,
        trace_u3,
        trace_h3,
        parity_defect: parity,
    })
}
