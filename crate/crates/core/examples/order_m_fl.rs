// Standard and order-m singular integrals agree on smooth fields.

use fraclap::field::TestField;
use fraclap::flcore::{fl_eigenvalue, fl_order_m, fl_standard, Representation};

pub fn run_example() -> fraclap::Result<String> {
    let u = TestField::gaussian(&[0.3, -0.2], 0.8)?;
    let x = [0.5, 0.1];
    let alpha = 1.2;
    let mut out = format!("2D Gaussian, alpha = {alpha}, x = {x:?}\n");
    out += &format!("standard   {:.12}\n", fl_standard(&u, &x, 2, alpha, 1e-12)?.value);
    for m in 1..=4 {
        out += &format!("order m={m}  {:.12}\n", fl_order_m(&u, &x, 2, alpha, m, 1e-12)?.value);
    }
    out += "plane-wave eigenvalues at k = 2, alpha = 4.5 (m = 3):\n";
    let e = fl_eigenvalue(Representation::OrderM(3), 3, 4.5, 2.0)?;
    out += &format!("  {e:.12} vs -k^alpha = {:.12}\n", -(2f64.powf(4.5)));
    Ok(out)
}

fn main() -> fraclap::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
