// Normalization constants for a few dimensions and exponents.

use fraclap::constants::{a_delta, norm_constants};

pub fn run_example() -> fraclap::Result<String> {
    let mut out = String::from("n  m  alpha   U            V            C_general    C_standard\n");
    for n in 1..=3 {
        for (m, alpha) in [(1, 0.5), (1, 1.5), (2, 2.5), (3, 4.5)] {
            let c = norm_constants(m, n, alpha)?;
            out += &format!(
                "{n}  {m}  {alpha:<5}  {:<11.6e}  {:<11.6e}  {:<11.6e}  {:.6e}\n",
                c.u, c.v, c.c_general, c.c_standard
            );
        }
    }
    out += &format!("A_delta(1, h=1, zeta=ln 2) = {:.12}\n", a_delta(1.0, 1.0, 2f64.ln())?);
    Ok(out)
}

fn main() -> fraclap::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
