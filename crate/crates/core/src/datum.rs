//! Initial-datum factory.
//!
//! Presets:
//! - `constant`: the background state (0, 0, (c, 0, 0), 0).
//! - `interior-bump`: a divergence-free magnetic perturbation built from a
//!   vector potential (H = curl A holds analytically), compactly supported
//!   away from every wall, with an optional pressure bump of the same shape.
//! - `symmetric-perturbation`: a perturbation straddling the x3 = 0 wall
//!   with the reflection parity built in (u3, H3 odd in x3, the rest even),
//!   divergence-free H from a parity-respecting vector potential, supported
//!   away from the x1 walls and the outer x3 wall.
//! - `alfven-periodic`: a circularly polarized transverse wave for the
//!   periodic box.
//!
//! The bump profile is C-infinity with compact support, so every trace and
//! compatibility condition holds in the continuum; the discrete checks see
//! only truncation error.

use crate::compat::InitialDatum;
use crate::eos::EquationOfState;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::{DomainKind, Grid};
use crate::scalar::Scalar;
use crate::state::{background_vec8, comp};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PresetKind {
    Constant,
    InteriorBump,
    SymmetricPerturbation,
    AlfvenPeriodic,
}

impl PresetKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "constant" => Some(PresetKind::Constant),
            "interior-bump" => Some(PresetKind::InteriorBump),
            "symmetric-perturbation" => Some(PresetKind::SymmetricPerturbation),
            "alfven-periodic" => Some(PresetKind::AlfvenPeriodic),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PresetKind::Constant => "constant",
            PresetKind::InteriorBump => "interior-bump",
            PresetKind::SymmetricPerturbation => "symmetric-perturbation",
            PresetKind::AlfvenPeriodic => "alfven-periodic",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DatumRecipe {
    pub kind: PresetKind,
    pub amplitude: f64,
    /// Support radius of the bump presets.
    pub width: f64,
    pub center: [f64; 3],
    /// Extra pressure-bump amplitude for `interior-bump`.
    pub p_amplitude: f64,
    /// Wavenumber index for `alfven-periodic`.
    pub mode: u32,
}

impl DatumRecipe {
    pub fn constant() -> Self {
        DatumRecipe {
            kind: PresetKind::Constant,
            amplitude: 0.0,
            width: 0.2,
            center: [0.5, 0.5, 0.5],
            p_amplitude: 0.0,
            mode: 1,
        }
    }

    pub fn interior_bump(amplitude: f64, width: f64, center: [f64; 3]) -> Self {
        DatumRecipe {
            kind: PresetKind::InteriorBump,
            amplitude,
            width,
            center,
            p_amplitude: 0.0,
            mode: 1,
        }
    }

    pub fn symmetric_perturbation(amplitude: f64, width: f64, center12: [f64; 2]) -> Self {
        DatumRecipe {
            kind: PresetKind::SymmetricPerturbation,
            amplitude,
            width,
            center: [center12[0], center12[1], 0.0],
            p_amplitude: 0.0,
            mode: 1,
        }
    }
}

/// Unit-height compactly supported bump in the squared normalized radius s:
/// (1 - s)^6 for s < 1, zero beyond. C^5 in the radius, so it sits in H^3
/// with room to spare, and its derivative constants are mild enough that
/// the discrete checks reach their asymptotic rates on coarse grids.
fn bump<T: Scalar>(s: T) -> T {
    if s.value() >= 1.0 {
        T::zero()
    } else {
        let q = T::one() - s;
        let q2 = q * q;
        q2 * q2 * q2
    }
}

/// d(bump)/ds = -6 (1 - s)^5.
fn bump_ds<T: Scalar>(s: T) -> T {
    if s.value() >= 1.0 {
        T::zero()
    } else {
        let q = T::one() - s;
        let q2 = q * q;
        -(T::from_f64(6.0) * q2 * q2 * q)
    }
}

fn check_support_inside(
    grid_extent: f64,
    lo_allowed: f64,
    center: f64,
    width: f64,
    axis: usize,
) -> Result<()> {
    if center - width <= lo_allowed || center + width >= grid_extent {
        return Err(Error::Datum(format!(
            "bump support [{:.3}, {:.3}] touches a wall along axis {}",
            center - width,
            center + width,
            axis + 1
        )));
    }
    Ok(())
}

/// Builds an initial datum satisfying the quarter-space hypotheses by
/// construction (divergence-free magnetic field, compatibility at the x1
/// wall by compact support, parity at the x3 wall where the support reaches
/// it).
pub fn make_admissible_datum<T: Scalar>(
    recipe: &DatumRecipe,
    grid: &Grid<T>,
    eos: &EquationOfState<T>,
    background_c: f64,
) -> Result<InitialDatum<T>> {
    let c = T::from_f64(background_c);
    let bg = background_vec8(c);
    let mut field = Field::constant(*grid, &bg);
    let amp = T::from_f64(recipe.amplitude);
    let w = T::from_f64(recipe.width);

    match recipe.kind {
        PresetKind::Constant => {}
        PresetKind::InteriorBump => {
            if recipe.amplitude != 0.0 {
                let lo = match grid.domain {
                    DomainKind::Half => -grid.extent[2].value() / 2.0,
                    _ => 0.0,
                };
                check_support_inside(grid.extent[0].value(), 0.0, recipe.center[0], recipe.width, 0)?;
                check_support_inside(grid.extent[1].value(), 0.0, recipe.center[1], recipe.width, 1)?;
                let x3_extent = match grid.domain {
                    DomainKind::Half => grid.extent[2].value() / 2.0,
                    _ => grid.extent[2].value(),
                };
                check_support_inside(x3_extent, lo, recipe.center[2], recipe.width, 2)?;
                let ctr = [
                    T::from_f64(recipe.center[0]),
                    T::from_f64(recipe.center[1]),
                    T::from_f64(recipe.center[2]),
                ];
                let a = amp * w;
                let pamp = T::from_f64(recipe.p_amplitude);
                let two = T::two();
                let g = *grid;
                g.for_each_cell(|i, j, k| {
                    let d1 = g.coord(0, i) - ctr[0];
                    let d2 = g.coord(1, j) - ctr[1];
                    let d3 = g.coord(2, k) - ctr[2];
                    let s = (d1 * d1 + d2 * d2 + d3 * d3) / (w * w);
                    if s.value() >= 1.0 {
                        return;
                    }
                    let phi = bump(s);
                    let dphi = bump_ds(s);
                    let mut v = field.state(i as isize, j as isize, k as isize);
                    // H = curl (0, 0, a phi): dH1 = d2(a phi), dH2 = -d1(a phi)
                    v[comp::H1] += a * dphi * two * d2 / (w * w);
                    v[comp::H2] -= a * dphi * two * d1 / (w * w);
                    v[comp::P] += pamp * phi;
                    field.set_state(i as isize, j as isize, k as isize, &v);
                });
            }
        }
        PresetKind::SymmetricPerturbation => {
            if grid.domain != DomainKind::Quarter && grid.domain != DomainKind::Half {
                return Err(Error::Datum(
                    "symmetric-perturbation needs a quarter or half domain".into(),
                ));
            }
            if recipe.amplitude != 0.0 {
                // `width` is the x3 support radius about the wall; the
                // transverse radius is 0.6 width so a wide wall footprint
                // still clears the x1 and x2 walls
                let wt = 0.6 * recipe.width;
                check_support_inside(grid.extent[0].value(), 0.0, recipe.center[0], wt, 0)?;
                check_support_inside(grid.extent[1].value(), 0.0, recipe.center[1], wt, 1)?;
                let x3_half_extent = match grid.domain {
                    DomainKind::Half => grid.extent[2].value() / 2.0,
                    _ => grid.extent[2].value(),
                };
                if recipe.width >= x3_half_extent {
                    return Err(Error::Datum(format!(
                        "bump support [-{0:.3}, {0:.3}] touches the outer x3 wall",
                        recipe.width
                    )));
                }
                let ctr = [T::from_f64(recipe.center[0]), T::from_f64(recipe.center[1])];
                let wt = T::from_f64(wt);
                let aa = T::half() * amp;
                let two = T::two();
                let g = *grid;
                g.for_each_cell(|i, j, k| {
                    let d1 = g.coord(0, i) - ctr[0];
                    let d2 = g.coord(1, j) - ctr[1];
                    let x3 = g.coord(2, k);
                    let s = (d1 * d1 + d2 * d2) / (wt * wt) + (x3 * x3) / (w * w);
                    if s.value() >= 1.0 {
                        return;
                    }
                    let phi = bump(s);
                    let dphi = bump_ds(s);
                    let mut v = field.state(i as isize, j as isize, k as isize);
                    // even components
                    v[comp::P] += T::half() * amp * phi;
                    v[comp::S] += T::from_f64(0.25) * amp * phi;
                    v[comp::U1] += T::half() * amp * phi;
                    // odd velocity
                    v[comp::U3] += amp * (x3 / w) * phi;
                    // H = curl (aa x3 phi, 0, aa w phi):
                    //   H1 = d2(aa w phi)                  (even)
                    //   H2 = d3(aa x3 phi) - d1(aa w phi)  (even)
                    //   H3 = -d2(aa x3 phi)                (odd)
                    v[comp::H1] += aa * w * dphi * two * d2 / (wt * wt);
                    v[comp::H2] += aa * (phi + x3 * dphi * two * x3 / (w * w))
                        - aa * w * dphi * two * d1 / (wt * wt);
                    v[comp::H3] -= aa * x3 * dphi * two * d2 / (wt * wt);
                    field.set_state(i as isize, j as isize, k as isize, &v);
                });
            }
        }
        PresetKind::AlfvenPeriodic => {
            if grid.domain != DomainKind::Periodic {
                return Err(Error::Datum(
                    "alfven-periodic needs a periodic domain".into(),
                ));
            }
            let (rho0, _) = eos.density(T::zero(), T::zero())?;
            let b = rho0.sqrt();
            let kwave = T::from_f64(2.0 * std::f64::consts::PI * recipe.mode as f64)
                / grid.extent[0];
            let g = *grid;
            g.for_each_cell(|i, j, k| {
                let x1 = g.coord(0, i);
                let (s, co) = {
                    let a = kwave * x1;
                    // sin/cos through exp is not available on Scalar; use
                    // the f64 value (datum construction, not a hot path)
                    let av = a.value();
                    (T::from_f64(av.sin()), T::from_f64(av.cos()))
                };
                let mut v = field.state(i as isize, j as isize, k as isize);
                v[comp::U2] += amp * co;
                v[comp::U3] += amp * s;
                v[comp::H2] -= b * amp * co;
                v[comp::H3] -= b * amp * s;
                field.set_state(i as isize, j as isize, k as isize, &v);
            });
        }
    }

    Ok(InitialDatum {
        field,
        background: bg,
    })
}

/// A datum that deliberately violates the x1-wall compatibility condition at
/// first order: u1 and p are proportional to x1 times a bump touching the
/// wall, so u = 0 on the wall (order zero holds) while du/dt != 0 there.
/// Negative control for the compatibility checker. `width` is the x1 support
/// radius; the transverse radius is 0.45 width so the support clears the
/// other walls.
pub fn gamma1_incompatible_datum<T: Scalar>(
    grid: &Grid<T>,
    background_c: f64,
    amplitude: f64,
    width: f64,
) -> Result<InitialDatum<T>> {
    if grid.domain != DomainKind::Quarter {
        return Err(Error::Datum("the negative control needs a quarter domain".into()));
    }
    let c = T::from_f64(background_c);
    let bg = background_vec8(c);
    let mut field = Field::constant(*grid, &bg);
    let amp = T::from_f64(amplitude);
    let w1 = T::from_f64(width);
    let wt = T::from_f64(0.45 * width);
    let ctr = [
        T::zero(),
        grid.extent[1] * T::half(),
        grid.extent[2] * T::half(),
    ];
    let g = *grid;
    g.for_each_cell(|i, j, k| {
        let d1 = g.coord(0, i) - ctr[0];
        let d2 = g.coord(1, j) - ctr[1];
        let d3 = g.coord(2, k) - ctr[2];
        let s = (d1 * d1) / (w1 * w1) + (d2 * d2 + d3 * d3) / (wt * wt);
        if s.value() >= 1.0 {
            return;
        }
        let phi = bump(s);
        let mut v = field.state(i as isize, j as isize, k as isize);
        v[comp::U1] += amp * (d1 / w1) * phi;
        v[comp::P] += amp * (d1 / w1) * phi;
        field.set_state(i as isize, j as isize, k as isize, &v);
    });
    Ok(InitialDatum {
        field,
        background: bg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reflection::parity_defect_max;

    fn eos1() -> EquationOfState<f64> {
        EquationOfState::exponential(1.0)
    }

    fn quarter(n: usize) -> Grid<f64> {
        Grid::new(DomainKind::Quarter, [1.0; 3], [n, n, n]).unwrap()
    }

    #[test]
    fn constant_is_background() {
        let g = quarter(8);
        let d = make_admissible_datum(&DatumRecipe::constant(), &g, &eos1(), 1.0).unwrap();
        assert_eq!(d.field.max_abs_deviation(&d.background), 0.0);
    }

    #[test]
    fn zero_amplitude_bump_equals_constant() {
        let g = quarter(8);
        let mut r = DatumRecipe::interior_bump(0.0, 0.2, [0.5, 0.5, 0.5]);
        let a = make_admissible_datum(&r, &g, &eos1(), 1.0).unwrap();
        r.kind = PresetKind::Constant;
        let b = make_admissible_datum(&r, &g, &eos1(), 1.0).unwrap();
        assert_eq!(a.field.max_abs_diff(&b.field), 0.0);
    }

    #[test]
    fn bump_touching_wall_is_rejected() {
        let g = quarter(8);
        let r = DatumRecipe::interior_bump(0.01, 0.4, [0.3, 0.5, 0.5]);
        assert!(make_admissible_datum(&r, &g, &eos1(), 1.0).is_err());
    }

    #[test]
    fn bump_inside_perturbs_h() {
        let g = quarter(16);
        let r = DatumRecipe::interior_bump(0.01, 0.2, [0.5, 0.5, 0.5]);
        let d = make_admissible_datum(&r, &g, &eos1(), 1.0).unwrap();
        let dev = d.field.max_abs_deviation(&d.background);
        assert!(dev > 1e-4 && dev < 0.05, "dev = {dev}");
    }

    #[test]
    fn interior_bump_discrete_divergence_decays_second_order() {
        // the curl construction is divergence-free analytically; the
        // 2nd-order discrete divergence must shrink ~4x per refinement
        let r = DatumRecipe::interior_bump(0.01, 0.2, [0.5, 0.5, 0.5]);
        let div_at = |n: usize| -> f64 {
            let g = quarter(n);
            let d = make_admissible_datum(&r, &g, &eos1(), 1.0).unwrap();
            let lat = crate::stencil::extract_components(&d.field);
            let mut worst = 0.0f64;
            let mut sum = vec![0.0f64; g.cell_count()];
            for axis in 0..3 {
                let dl = crate::stencil::lattice_d1(
                    &lat[comp::H1 + axis],
                    g.n,
                    axis,
                    g.h[axis],
                    g.rule(axis) == crate::grid::AxisRule::Periodic,
                    crate::stencil::DiffScheme::Central2,
                )
                .unwrap();
                for (acc, v) in sum.iter_mut().zip(dl) {
                    *acc += v;
                }
            }
            for v in sum {
                worst = worst.max(v.abs());
            }
            worst
        };
        let d32 = div_at(32);
        let d64 = div_at(64);
        let rate = (d32 / d64).log2();
        assert!(rate > 1.6, "rate = {rate}, d32 = {d32}, d64 = {d64}");
    }

    #[test]
    fn symmetric_perturbation_extends_with_zero_defect() {
        let g = quarter(16);
        let r = DatumRecipe::symmetric_perturbation(0.01, 0.7, [0.5, 0.5]);
        let d = make_admissible_datum(&r, &g, &eos1(), 1.0).unwrap();
        let e = crate::reflection::extend(&d.field).unwrap();
        // sampling the same formulas on the half grid gives the same field
        let gh = g.mirrored_half().unwrap();
        let dh = make_admissible_datum(&r, &gh, &eos1(), 1.0).unwrap();
        assert_eq!(e.max_abs_diff(&dh.field), 0.0);
        assert_eq!(parity_defect_max(&dh.field).unwrap(), 0.0);
    }

    #[test]
    fn alfven_needs_periodic_domain() {
        let g = quarter(8);
        let mut r = DatumRecipe::constant();
        r.kind = PresetKind::AlfvenPeriodic;
        r.amplitude = 0.01;
        assert!(make_admissible_datum(&r, &g, &eos1(), 1.0).is_err());
        let gp = Grid::new(DomainKind::Periodic, [1.0; 3], [8, 8, 8]).unwrap();
        assert!(make_admissible_datum(&r, &gp, &eos1(), 1.0).is_ok());
    }
}
