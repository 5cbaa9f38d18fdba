//! Seeded randomized verification suites over the algebraic structure:
//! symmetry and positivity of the assembled matrices, boundary-matrix rank
//! stratification, vanishing of the wall quadratic form on N, the subspace
//! invariances (including directional derivatives), and the consistency of
//! the solve-form right-hand side. Deterministic for a fixed seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::eos::EquationOfState;
use crate::state::{comp, State, Vec8, NCOMP};
use crate::subspace::{
    boundary_signature, check_boundary_form, check_boundary_rank, check_geometric_invariance,
    BoundaryDescriptor, BoundarySide, SubspaceId, SubspaceProjector,
};
use crate::system::{assemble, direction_speed, rhs_from_gradients, wave_speed_bound};

pub const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct SuiteCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub checks: Vec<SuiteCheck>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn push(&mut self, name: impl Into<String>, pass: bool, detail: String) {
        self.checks.push(SuiteCheck {
            name: name.into(),
            pass,
            detail,
        });
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("{tag} {:<38} {}\n", c.name, c.detail));
        }
        let n_pass = self.checks.iter().filter(|c| c.pass).count();
        out.push_str(&format!(
            "RESULT {} ({n_pass}/{})\n",
            if self.all_pass() { "PASS" } else { "FAIL" },
            self.checks.len()
        ));
        out
    }
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    2.0 * rng.random::<f64>() - 1.0
}

fn random_state(rng: &mut ChaCha8Rng, polytropic: bool) -> State<f64> {
    let mut v = [0.0; NCOMP];
    for x in v.iter_mut() {
        *x = uniform(rng);
    }
    if polytropic {
        v[comp::P] = 0.1 + 0.95 * (v[comp::P] + 1.0); // p in (0.1, 2)
    }
    State(v)
}

fn random_gamma0_state(rng: &mut ChaCha8Rng, polytropic: bool) -> State<f64> {
    let mut u = random_state(rng, polytropic);
    u.0[comp::U3] = 0.0;
    u.0[comp::H3] = 0.0;
    u
}

fn random_gamma1_state(rng: &mut ChaCha8Rng, polytropic: bool, h1_min: f64) -> State<f64> {
    let mut u = random_state(rng, polytropic);
    u.0[comp::U1] = 0.0;
    u.0[comp::U2] = 0.0;
    u.0[comp::U3] = 0.0;
    let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
    u.0[comp::H1] = sign * (h1_min + (1.0 - h1_min) * rng.random::<f64>());
    u
}

fn random_n_state(rng: &mut ChaCha8Rng, polytropic: bool) -> State<f64> {
    random_gamma0_state(rng, polytropic)
}

fn eos_label(polytropic: bool) -> &'static str {
    if polytropic {
        "polytropic"
    } else {
        "exponential"
    }
}

/// Runs every structure suite for both built-in equations of state.
/// `samples` scales every sample count; the defaults of the acceptance runs
/// use 1000.
pub fn run_structure_suite(samples: usize, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::default();
    projector_algebra(&mut report);
    for polytropic in [false, true] {
        let eos = if polytropic {
            EquationOfState::polytropic(5.0 / 3.0, 1.0)
        } else {
            EquationOfState::exponential(1.0)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (polytropic as u64));
        symmetry_and_positivity(&mut report, &eos, polytropic, samples, &mut rng);
        rhs_consistency(&mut report, &eos, polytropic, samples / 5, &mut rng);
        direction_bound(&mut report, &eos, polytropic, samples / 5, &mut rng);
        boundary_ranks(&mut report, &eos, polytropic, samples / 2, &mut rng);
        boundary_form(&mut report, &eos, polytropic, samples / 2, &mut rng);
        invariances(&mut report, &eos, polytropic, samples / 5, &mut rng);
        signatures(&mut report, &eos, polytropic, &mut rng);
    }
    report
}

fn projector_algebra(report: &mut SuiteReport) {
    let pn = SubspaceProjector { which: SubspaceId::N }.matrix::<f64>();
    let pp = SubspaceProjector {
        which: SubspaceId::NPerp,
    }
    .matrix::<f64>();
    let mut ok = true;
    for r in 0..NCOMP {
        for c in 0..NCOMP {
            let sum = pn.0[r][c] + pp.0[r][c];
            let expect = if r == c { 1.0 } else { 0.0 };
            ok &= sum == expect;
            let mut prod = 0.0;
            for k in 0..NCOMP {
                prod += pn.0[r][k] * pp.0[k][c];
            }
            ok &= prod == 0.0;
        }
    }
    report.push("projector_algebra", ok, "P_N + P_perp = I, P_N P_perp = 0 exactly".into());
}

fn symmetry_and_positivity(
    report: &mut SuiteReport,
    eos: &EquationOfState<f64>,
    polytropic: bool,
    n: usize,
    rng: &mut ChaCha8Rng,
) {
    let mut max_asym = 0.0f64;
    let mut min_diag = f64::INFINITY;
    let mut min_eig = f64::INFINITY;
    for _ in 0..n {
        let u = random_state(rng, polytropic);
        let ms = assemble(eos, &u).expect("hyperbolic by construction");
        for j in 0..3 {
            max_asym = max_asym.max(ms.a[j].max_asymmetry());
        }
        max_asym = max_asym.max(ms.a0.max_asymmetry());
        for i in 0..NCOMP {
            min_diag = min_diag.min(ms.a0.0[i][i]);
        }
        for v in ms.a0.sym_eigenvalues() {
            min_eig = min_eig.min(v);
        }
    }
    report.push(
        format!("a_symmetry[{}]", eos_label(polytropic)),
        max_asym == 0.0,
        format!("max |A - A^T| = {max_asym:.3e} over {n} states (must be exactly 0)"),
    );
    report.push(
        format!("a0_positive_definite[{}]", eos_label(polytropic)),
        min_diag > 0.0 && min_eig > 0.0,
        format!("min A0 eigenvalue = {min_eig:.3e}"),
    );
}

fn rhs_consistency(
    report: &mut SuiteReport,
    eos: &EquationOfState<f64>,
    polytropic: bool,
    n: usize,
    rng: &mut ChaCha8Rng,
) {
    let mut worst = 0.0f64;
    for _ in 0..n {
        let u = random_state(rng, polytropic);
        let mut g = [[0.0; NCOMP]; 3];
        for gj in g.iter_mut() {
            for x in gj.iter_mut() {
                *x = uniform(rng);
            }
        }
        let r = rhs_from_gradients(eos, &u, &g).unwrap();
        let ms = assemble(eos, &u).unwrap();
        let a0r = ms.a0.matvec(&r);
        let mut resid: Vec8<f64> = a0r;
        let mut scale = 0.0f64;
        for j in 0..3 {
            let av = ms.a[j].matvec(&g[j]);
            for i in 0..NCOMP {
                resid[i] += av[i];
                scale = scale.max(av[i].abs());
            }
        }
        for i in 0..NCOMP {
            scale = scale.max(a0r[i].abs());
        }
        if scale > 0.0 {
            for i in 0..NCOMP {
                worst = worst.max(resid[i].abs() / scale);
            }
        }
    }
    report.push(
        format!("rhs_consistency[{}]", eos_label(polytropic)),
        worst <= 1e-13,
        format!("max relative |A0 rhs + sum A_j g_j| = {worst:.3e} (tol 1e-13)"),
    );
}

fn direction_bound(
    report: &mut SuiteReport,
    eos: &EquationOfState<f64>,
    polytropic: bool,
    n: usize,
    rng: &mut ChaCha8Rng,
) {
    let mut worst = 0.0f64;
    let sqrt3 = 3.0f64.sqrt();
    for _ in 0..n {
        let u = random_state(rng, polytropic);
        let mut nu = [uniform(rng), uniform(rng), uniform(rng)];
        let norm = (nu[0] * nu[0] + nu[1] * nu[1] + nu[2] * nu[2]).sqrt();
        if norm < 1e-3 {
            continue;
        }
        for x in nu.iter_mut() {
            *x /= norm;
        }
        let dir = direction_speed(eos, &u, nu).unwrap();
        let bound = wave_speed_bound(eos, &u).unwrap();
        if bound > 0.0 {
            worst = worst.max(dir / (sqrt3 * bound));
        }
    }
    report.push(
        format!("direction_speed_bound[{}]", eos_label(polytropic)),
        worst <= 1.0 + 1e-12,
        format!("max rho(sum nu_j Ahat_j) / (sqrt(3) bound) = {worst:.6}"),
    );
}

fn boundary_ranks(
    report: &mut SuiteReport,
    eos: &EquationOfState<f64>,
    polytropic: bool,
    n: usize,
    rng: &mut ChaCha8Rng,
) {
    let g0 = BoundaryDescriptor {
        side: BoundarySide::Gamma0,
    };
    let g1 = BoundaryDescriptor {
        side: BoundarySide::Gamma1,
    };
    let mut ok0 = true;
    let mut ok1 = true;
    for _ in 0..n {
        let u0 = random_gamma0_state(rng, polytropic);
        ok0 &= check_boundary_rank(eos, &u0, g0, RANK_TOLERANCE).unwrap() == 2;
        let u1 = random_gamma1_state(rng, polytropic, 0.1);
        ok1 &= check_boundary_rank(eos, &u1, g1, RANK_TOLERANCE).unwrap() == 6;
    }
    report.push(
        format!("rank2_on_x3_wall[{}]", eos_label(polytropic)),
        ok0,
        format!("rank = 2 on {n} admissible x3-wall states"),
    );
    report.push(
        format!("rank6_on_x1_wall[{}]", eos_label(polytropic)),
        ok1,
        format!("rank = 6 on {n} admissible x1-wall states with |H1| >= 0.1"),
    );
    // degenerate case: H = 0, u = 0 drops the rank below 6
    let mut u = random_state(rng, polytropic);
    for i in comp::U1..=comp::H3 {
        u.0[i] = 0.0;
    }
    let degenerate_rank = check_boundary_rank(eos, &u, g1, RANK_TOLERANCE).unwrap();
    report.push(
        format!("rank_degenerate_detected[{}]", eos_label(polytropic)),
        degenerate_rank < 6,
        format!("H = 0, u = 0 on the x1 wall gives rank {degenerate_rank} < 6"),
    );
}

fn boundary_form(
    report: &mut SuiteReport,
    eos: &EquationOfState<f64>,
    polytropic: bool,
    n: usize,
    rng: &mut ChaCha8Rng,
) {
    let mut worst = 0.0f64;
    for _ in 0..n {
        let u = random_gamma0_state(rng, polytropic);
        let mut v = [0.0; NCOMP];
        for x in v.iter_mut() {
            *x = uniform(rng);
        }
        v[comp::U3] = 0.0;
        v[comp::H3] = 0.0;
        let q = check_boundary_form(eos, &u, &v).unwrap();
        worst = worst.max(q.abs());
    }
    report.push(
        format!("boundary_form_zero_on_n[{}]", eos_label(polytropic)),
        worst <= 1e-14,
        format!("max |<A3 v, v>| = {worst:.3e} over {n} pairs (tol 1e-14)"),
    );
}

fn invariances(
    report: &mut SuiteReport,
    eos: &EquationOfState<f64>,
    polytropic: bool,
    n: usize,
    rng: &mut ChaCha8Rng,
) {
    let mut worst_base = 0.0f64;
    let mut worst_deriv = 0.0f64;
    for _ in 0..n {
        let u = random_n_state(rng, polytropic);
        let mut w = [0.0; NCOMP];
        for x in w.iter_mut() {
            *x = uniform(rng);
        }
        w[comp::U3] = 0.0;
        w[comp::H3] = 0.0;
        for j in 0..3 {
            let (base, deriv) = check_geometric_invariance(eos, &u, j, Some(&w)).unwrap();
            worst_base = worst_base.max(base.residual());
            worst_deriv = worst_deriv.max(deriv.unwrap().residual());
        }
    }
    report.push(
        format!("subspace_invariance[{}]", eos_label(polytropic)),
        worst_base <= 1e-12,
        format!("max residual block norm = {worst_base:.3e} over {n} states in N (tol 1e-12)"),
    );
    report.push(
        format!("subspace_invariance_derivative[{}]", eos_label(polytropic)),
        worst_deriv <= 1e-12,
        format!("max residual block norm of D Ahat = {worst_deriv:.3e} (tol 1e-12)"),
    );
}

fn signatures(
    report: &mut SuiteReport,
    eos: &EquationOfState<f64>,
    polytropic: bool,
    rng: &mut ChaCha8Rng,
) {
    let g0 = BoundaryDescriptor {
        side: BoundarySide::Gamma0,
    };
    let g1 = BoundaryDescriptor {
        side: BoundarySide::Gamma1,
    };
    let u0 = random_gamma0_state(rng, polytropic);
    let s0 = boundary_signature(eos, &u0, g0, RANK_TOLERANCE).unwrap();
    let u1 = random_gamma1_state(rng, polytropic, 0.1);
    let s1 = boundary_signature(eos, &u1, g1, RANK_TOLERANCE).unwrap();
    report.push(
        format!("signature_x3_wall[{}]", eos_label(polytropic)),
        s0 == (1, 6, 1),
        format!("(pos, zero, neg) = {s0:?} (sampled, for inspection)"),
    );
    report.push(
        format!("signature_x1_wall[{}]", eos_label(polytropic)),
        s1 == (3, 2, 3),
        format!("(pos, zero, neg) = {s1:?} (sampled, for inspection)"),
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let report = run_structure_suite(50, 7);
        assert!(report.all_pass(), "{}", report.render());
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let a = run_structure_suite(20, 42).render();
        let b = run_structure_suite(20, 42).render();
        assert_eq!(a, b);
    }
}
