use pspin_core::analytic::{
    agreement_identities, darmc_residual, first_level, gse, ising_c3_hat, ising_rate,
    ising_rate_domain, ising_stationarity_log_residual, rate, rate_domain_start,
    spherical_stationary, subag_solution, u_star, TWO_FORM_TOL,
};
use pspin_core::SpinSet;

fn grid(lo: f64, hi: f64, points: usize) -> impl Iterator<Item = f64> {
    let step = (hi - lo) / (points - 1) as f64;
    (0..points).map(move |k| lo + step * k as f64)
}

#[test]
fn spherical_branch_residuals_on_grid() {
    for p in 2..=10 {
        let us = u_star(p).unwrap();
        for u in grid(us, us + 3.0, 50) {
            let st = spherical_stationary(p, u).unwrap();
            assert!(
                st.quadratic_residual() <= 1e-12,
                "p={p} u={u}: {}",
                st.quadratic_residual()
            );
            assert!(
                st.gamma_residual() <= 1e-12,
                "p={p} u={u}: {}",
                st.gamma_residual()
            );
        }
    }
}

#[test]
fn ising_closed_forms_agree() {
    for p in 2..=10 {
        let dom = ising_rate_domain(p).unwrap();
        // further out ln(u - c3) loses digits to cancellation
        let top = gse(SpinSet::Ising, p).unwrap().u_gs + 0.25;
        for u in grid(dom.u_fold + 1e-9, top, 50) {
            let r = ising_rate(p, u).unwrap();
            let c = r.c3_hat;
            let pf = p as f64;
            let stationary = -0.5 * c * c * (pf - 1.0)
                - (u - c).ln()
                - c * u
                - 0.5 * (std::f64::consts::PI / (2.0 * pf)).ln();
            assert!((stationary - r.phi).abs() <= TWO_FORM_TOL, "p={p} u={u}");
        }
    }
}

#[test]
fn rate_vanishes_at_gse() {
    for set in SpinSet::ALL {
        for p in 2..=10 {
            let g = gse(set, p).unwrap();
            let phi = rate(set, p, g.u_gs).unwrap().phi;
            assert!(phi.abs() <= 1e-9, "{set} p={p}: phi = {phi:e}");
        }
    }
}

#[test]
fn rate_strictly_decreasing_to_past_gse() {
    for set in SpinSet::ALL {
        for p in 2..=10 {
            let start = rate_domain_start(set, p).unwrap() + 1e-6;
            let end = gse(set, p).unwrap().u_gs + 1.0;
            let values: Vec<f64> = grid(start, end, 80)
                .map(|u| rate(set, p, u).unwrap().phi)
                .collect();
            for (k, w) in values.windows(2).enumerate() {
                assert!(w[1] < w[0], "{set} p={p} step {k}: {w:?}");
            }
        }
    }
}

#[test]
fn second_level_never_exceeds_first() {
    for set in SpinSet::ALL {
        for p in 2..=30 {
            let second = gse(set, p).unwrap().xi_multipartite;
            let first = first_level(set, p).unwrap().xi_multipartite;
            assert!(second <= first + 1e-12, "{set} p={p}: {second} > {first}");
        }
    }
}

#[test]
fn values_increase_with_p() {
    for set in SpinSet::ALL {
        let mut prev = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in 2..=30 {
            let second = gse(set, p).unwrap().xi_multipartite;
            let first = first_level(set, p).unwrap().xi_multipartite;
            assert!(second > prev.0 && first > prev.1, "{set} p={p}");
            prev = (second, first);
        }
    }
}

#[test]
fn agreement_suite() {
    for p in 3..=20 {
        let u = gse(SpinSet::Spherical, p).unwrap().u_gs;
        let sol = subag_solution(p).unwrap();
        assert!((sol.e_star - u).abs() <= 1e-8, "p={p}");
        assert!(darmc_residual(p, u).unwrap().abs() <= 1e-8);
        let (a, b) = agreement_identities(p).unwrap();
        assert!(a <= 1e-9 && b <= 1e-9, "p={p}: {a:e} {b:e}");
    }
}

#[test]
fn table_one_and_two() {
    let spherical = [2.0000, 2.8700, 3.5882, 4.2217, 4.7977, 5.3311];
    let ising = [1.5377, 1.9927, 2.3348, 2.6235, 2.8796, 3.1130];
    for (k, p) in (2..=7u32).enumerate() {
        let s = gse(SpinSet::Spherical, p).unwrap().xi_multipartite;
        let i = gse(SpinSet::Ising, p).unwrap().xi_multipartite;
        assert!((s - spherical[k]).abs() <= 5e-5, "spherical p={p}: {s}");
        assert!((i - ising[k]).abs() <= 5e-5, "ising p={p}: {i}");
    }
}

#[test]
fn ising_log_residual_at_returned_c3() {
    for p in 2..=10 {
        let dom = ising_rate_domain(p).unwrap();
        let top = gse(SpinSet::Ising, p).unwrap().u_gs + 0.25;
        for u in grid(dom.u_fold + 1e-9, top, 50) {
            let c = ising_c3_hat(p, u).unwrap();
            let res = ising_stationarity_log_residual(p, u, c);
            assert!(res.abs() <= 1e-10, "p={p} u={u}: {res:e}");
            assert!(c >= dom.c_fold && c < u);
        }
    }
}
