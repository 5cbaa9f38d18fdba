use mhdq_core::compat::{check_all, CompatTolerances};
use mhdq_core::datum::{make_admissible_datum, DatumRecipe};
use mhdq_core::eos::EquationOfState;
use mhdq_core::grid::{DomainKind, Grid};

fn main() {
    let eos = EquationOfState::exponential(1.0);
    for w in [0.5, 0.6, 0.7, 0.8] {
        for n in [[32usize, 32, 32], [64, 64, 64]] {
            let g = Grid::<f64>::new(DomainKind::Quarter, [1.0; 3], n).unwrap();
            let r = DatumRecipe::symmetric_perturbation(0.01, w, [0.5, 0.5]);
            let d = match make_admissible_datum(&r, &g, &eos, 1.0) {
                Ok(d) => d,
                Err(e) => { println!("w={w} n={:?}: {e}", n); continue; }
            };
            let rep = check_all(&eos, &d, &CompatTolerances::default()).unwrap();
            let worst_auto = ["gamma0_auto_k0", "gamma0_auto_k1", "gamma0_auto_k2"]
                .iter().map(|nm| { let c = rep.get(nm).unwrap(); c.value / c.tolerance }).fold(0.0f64, f64::max);
            let fails: Vec<String> = rep.conditions.iter().filter(|c| !c.pass)
                .map(|c| format!("{}:{:.2}x", c.name, c.value / c.tolerance.max(1e-300))).collect();
            let auto_max = ["gamma0_auto_k0", "gamma0_auto_k1", "gamma0_auto_k2"]
                .iter().map(|nm| rep.get(nm).unwrap().value).fold(0.0f64, f64::max);
            println!("w={w} n={:?}: worst_auto_ratio={worst_auto:.3} auto_value={auto_max:.3e} fails={fails:?}", n[2]);
        }
    }
}
