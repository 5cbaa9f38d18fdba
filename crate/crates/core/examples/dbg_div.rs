use mhdq_core::datum::{make_admissible_datum, DatumRecipe};
use mhdq_core::eos::EquationOfState;
use mhdq_core::grid::{AxisRule, DomainKind, Grid};
use mhdq_core::state::comp;
use mhdq_core::stencil::{extract_components, lattice_d1, DiffScheme};

fn div_at(n: usize, w: f64) -> f64 {
    let g = Grid::<f64>::new(DomainKind::Quarter, [1.0; 3], [n, n, n]).unwrap();
    let r = DatumRecipe::interior_bump(0.01, w, [0.5, 0.5, 0.5]);
    let eos = EquationOfState::exponential(1.0);
    let d = make_admissible_datum(&r, &g, &eos, 1.0).unwrap();
    let lat = extract_components(&d.field);
    let mut sum = vec![0.0f64; g.cell_count()];
    for axis in 0..3 {
        let dl = lattice_d1(&lat[comp::H1 + axis], g.n, axis, g.h[axis],
            g.rule(axis) == AxisRule::Periodic, DiffScheme::Central2).unwrap();
        for (acc, v) in sum.iter_mut().zip(dl) { *acc += v; }
    }
    sum.into_iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

fn main() {
    for w in [0.2, 0.3] {
        let d16 = div_at(16, w);
        let d32 = div_at(32, w);
        let d64 = div_at(64, w);
        let d128 = div_at(128, w);
        println!("w={w}: 16:{d16:.4e} 32:{d32:.4e} 64:{d64:.4e} 128:{d128:.4e} rates {:.2} {:.2} {:.2}",
            (d16/d32).log2(), (d32/d64).log2(), (d64/d128).log2());
    }
}
