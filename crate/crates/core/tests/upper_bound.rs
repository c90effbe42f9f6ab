use pspin_core::analytic::{finite_n_upper_bound, log_mgf_max_linear};
use pspin_core::empirical::{estimate_upper_log_mgf, estimate_xi_upper};
use pspin_core::SpinSet;

#[test]
fn ising_upper_bound_matches_monte_carlo() {
    for p in [2u32, 3] {
        for n in [1usize, 5] {
            for c3 in [0.5, 1.0] {
                let seed = 17 + p as u64 * 100 + n as u64 * 10 + (c3 * 2.0) as u64;
                let t = c3 * (p as f64).sqrt();
                let exact = log_mgf_max_linear(SpinSet::Ising, n, t).unwrap();
                let mc = estimate_upper_log_mgf(SpinSet::Ising, n, t, 100_000, seed).unwrap();
                assert!(
                    (mc.mean - exact).abs() <= 3.0 * mc.std_err,
                    "p={p} n={n} c3={c3}: {mc:?} vs {exact}"
                );

                let bound = finite_n_upper_bound(p, n, c3, SpinSet::Ising).unwrap();
                let xi = estimate_xi_upper(p, n, SpinSet::Ising, c3, 100_000, seed).unwrap();
                assert!((xi.mean - bound).abs() <= 3.0 * xi.std_err);
            }
        }
    }
}

#[test]
fn spherical_upper_bound_matches_monte_carlo() {
    for n in [1usize, 3, 8] {
        let t = 0.8;
        let exact = log_mgf_max_linear(SpinSet::Spherical, n, t).unwrap();
        let mc = estimate_upper_log_mgf(SpinSet::Spherical, n, t, 100_000, 5 + n as u64).unwrap();
        assert!(
            (mc.mean - exact).abs() <= 3.0 * mc.std_err,
            "n={n}: {mc:?} vs {exact}"
        );
    }
}
