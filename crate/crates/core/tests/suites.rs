//! The shipped property suites must pass across the supported desk-scale
//! configurations, not just the acceptance defaults.

use weilrep::verify::{run_suites, SuiteConfig};

fn assert_all_pass(cfg: SuiteConfig) {
    for report in run_suites("all", &cfg).unwrap() {
        for prop in &report.properties {
            assert!(
                prop.passed,
                "{}::{} failed at p={} n={} seed={}: {}",
                report.suite, prop.name, cfg.p, cfg.n, cfg.seed, prop.detail
            );
        }
    }
}

#[test]
fn suites_pass_at_p3_n2() {
    assert_all_pass(SuiteConfig {
        p: 3,
        n: 2,
        seed: 17,
        trials: 25,
        tolerance: 1e-8,
    });
}

#[test]
fn suites_pass_at_p5_n1() {
    assert_all_pass(SuiteConfig {
        p: 5,
        n: 1,
        seed: 19,
        trials: 25,
        tolerance: 1e-8,
    });
}

#[test]
fn suites_pass_at_p7_n1() {
    assert_all_pass(SuiteConfig {
        p: 7,
        n: 1,
        seed: 23,
        trials: 10,
        tolerance: 1e-8,
    });
}
