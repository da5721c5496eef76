use degchain_core::master::{convergence_metrics, evolve};
use degchain_core::{default_zoo, extract_limit, steady_by_recurrence, ChainClass};

#[test]
fn rate_limits_match_declared_affine_limits() {
    let t_grid = [1_000, 10_000, 100_000, 1_000_000];
    for spec in default_zoo() {
        let m = spec.limit.m;
        let probes: Vec<u64> = (m..m + 6).collect();
        let lim = extract_limit(&spec.rate, &probes, &t_grid).unwrap();
        assert!(
            (lim.a - spec.limit.a).abs() < 1e-4,
            "{}: A {} vs {}",
            spec.name,
            lim.a,
            spec.limit.a
        );
        assert!(
            (lim.b - spec.limit.b).abs() < 1e-4,
            "{}: B {} vs {}",
            spec.name,
            lim.b,
            spec.limit.b
        );
    }
}

#[test]
fn declared_exponents_match_limits() {
    for spec in default_zoo() {
        match spec.limit.class() {
            ChainClass::ScaleFree => {
                let g = spec.expected_gamma.unwrap();
                assert!(
                    (g - (1.0 + 1.0 / spec.limit.a)).abs() < 1e-12,
                    "{}",
                    spec.name
                );
            }
            _ => assert!(spec.expected_gamma.is_none(), "{}", spec.name),
        }
    }
}

#[test]
fn master_equation_conserves_mass_for_every_model() {
    for spec in default_zoo() {
        let trace = evolve(&spec, 20_000, 100, &[100, 20_000]).unwrap();
        for s in &trace.snapshots {
            let total: f64 = s.probs.iter().sum::<f64>() + s.overflow;
            assert!(
                (total - 1.0).abs() < 1e-10,
                "{} t = {}: {total}",
                spec.name,
                s.t
            );
            assert!(s.probs.iter().all(|&p| (0.0..=1.0).contains(&p)));
        }
        let limit = steady_by_recurrence(&spec.birth, &spec.limit, 100).unwrap();
        let tv = convergence_metrics(&trace, &limit).unwrap();
        assert!(tv[1].1 < tv[0].1, "{}: {tv:?}", spec.name);
    }
}
