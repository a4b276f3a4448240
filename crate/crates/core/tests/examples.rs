// Each example is compiled in as a module and its run_example checked for output.

#[allow(dead_code)]
mod constants_table {
    include!("../examples/constants_table.rs");
}

#[test]
fn example_constants_table() {
    let out = constants_table::run_example().unwrap();
    assert!(out.lines().count() > 2);
    assert!(!out.contains("NaN"));
}

#[allow(dead_code)]
mod wm_dispersion {
    include!("../examples/wm_dispersion.rs");
}

#[test]
fn example_wm_dispersion() {
    let out = wm_dispersion::run_example().unwrap();
    assert!(out.lines().count() > 2);
    assert!(!out.contains("NaN"));
}

#[allow(dead_code)]
mod regularized_fl {
    include!("../examples/regularized_fl.rs");
}

#[test]
fn example_regularized_fl() {
    let out = regularized_fl::run_example().unwrap();
    assert!(out.lines().count() > 2);
    assert!(!out.contains("NaN"));
}

#[allow(dead_code)]
mod order_m_fl {
    include!("../examples/order_m_fl.rs");
}

#[test]
fn example_order_m_fl() {
    let out = order_m_fl::run_example().unwrap();
    assert!(out.lines().count() > 2);
    assert!(!out.contains("NaN"));
}

#[allow(dead_code)]
mod spectral_oracle {
    include!("../examples/spectral_oracle.rs");
}

#[test]
fn example_spectral_oracle() {
    let out = spectral_oracle::run_example().unwrap();
    assert!(out.lines().count() > 2);
    assert!(!out.contains("NaN"));
}

#[allow(dead_code)]
mod potentials {
    include!("../examples/potentials.rs");
}

#[test]
fn example_potentials() {
    let out = potentials::run_example().unwrap();
    assert!(out.lines().count() > 2);
    assert!(!out.contains("NaN"));
}

#[allow(dead_code)]
mod regularization_rule {
    include!("../examples/regularization_rule.rs");
}

#[test]
fn example_regularization_rule() {
    let out = regularization_rule::run_example().unwrap();
    assert!(out.lines().count() > 2);
    assert!(!out.contains("NaN"));
}

#[allow(dead_code)]
mod continuum_limit {
    include!("../examples/continuum_limit.rs");
}

#[test]
fn example_continuum_limit() {
    let out = continuum_limit::run_example().unwrap();
    assert!(out.lines().count() > 2);
    assert!(!out.contains("NaN"));
}
