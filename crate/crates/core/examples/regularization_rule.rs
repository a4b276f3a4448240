// The eps-regularized kernel on the half line against the closed form.

use fraclap::quad::{i_reg, reg_halfline, Cutoff, QuadSpec};

pub fn run_example() -> fraclap::Result<String> {
    let mut out = String::from("alpha   quadrature          closed form\n");
    for alpha in [1e-6, 0.25, 0.5, 1.0, 1.5, 1.9] {
        let spec = QuadSpec { cutoff: Cutoff::Fixed(1.0), ..QuadSpec::default() };
        let q = reg_halfline(|_| 1.0, alpha, &spec)?;
        out += &format!("{alpha:<6}  {:<18.14}  {:.14}\n", q.value, i_reg(1.0, alpha)?);
    }
    out += &format!("pi/2 = {:.14}\n", std::f64::consts::FRAC_PI_2);
    Ok(out)
}

fn main() -> fraclap::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
