use mhdq_core::compat::time_derivatives;
use mhdq_core::datum::{make_admissible_datum, DatumRecipe};
use mhdq_core::eos::EquationOfState;
use mhdq_core::grid::{DomainKind, Grid};
use mhdq_core::state::NCOMP;

fn main() {
    let g = Grid::<f64>::new(DomainKind::Quarter, [1.0; 3], [16, 16, 16]).unwrap();
    let r = DatumRecipe::interior_bump(0.01, 0.2, [0.5, 0.5, 0.5]);
    let eos = EquationOfState::exponential(1.0);
    let d = make_admissible_datum(&r, &g, &eos, 1.0).unwrap();
    let derivs = time_derivatives(&eos, &d, 2).unwrap();
    for (level, fld) in derivs.iter().enumerate().skip(1) {
        let margin = 0.2 + (2.0 * level as f64 + 0.5) * g.h[0];
        let mut worst = (0.0f64, [0usize;3], 0usize, 0.0f64);
        fld.for_each_interior(|i, j, k| {
            let x = [g.coord(0, i), g.coord(1, j), g.coord(2, k)];
            let r2: f64 = x.iter().map(|v| (v - 0.5) * (v - 0.5)).sum();
            if r2.sqrt() > margin {
                let v = fld.state(i as isize, j as isize, k as isize);
                for c in 0..NCOMP {
                    if v[c].abs() > worst.0 {
                        worst = (v[c].abs(), [i,j,k], c, r2.sqrt());
                    }
                }
            }
        });
        println!("level {level}: margin {margin:.4} worst |v| = {:.3e} at {:?} comp {} r={:.4}", worst.0, worst.1, worst.2, worst.3);
    }
}
