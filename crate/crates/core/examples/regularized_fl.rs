// Regularized representation across the Levy interval and beyond.

use fraclap::field::TestField;
use fraclap::flcore::fl_regularized;
use fraclap::quad::QuadSpec;

pub fn run_example() -> fraclap::Result<String> {
    let u = TestField::unit_gaussian();
    let spec = QuadSpec::default();
    let mut out = String::from("alpha  FL u(0)          FL u(1)\n");
    for alpha in [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0] {
        let a = fl_regularized(&u, &[0.0], 1, alpha, &spec)?;
        let b = fl_regularized(&u, &[1.0], 1, alpha, &spec)?;
        out += &format!("{alpha:<5}  {:<15.10}  {:.10}\n", a.value, b.value);
    }
    let w = fl_regularized(&u, &[0.0], 1, 2.0005, &spec)?;
    if let Some(msg) = w.warning {
        out += &format!("alpha = 2.0005: {msg}\n");
    }
    Ok(out)
}

fn main() -> fraclap::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
