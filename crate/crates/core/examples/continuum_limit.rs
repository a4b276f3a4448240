// ln(a) omega^2 approaching the fractional continuum limit as a -> 1.

use fraclap::lattice::continuum_study;

pub fn run_example() -> fraclap::Result<String> {
    let mut out = String::new();
    for (delta, m) in [(1.05, 1), (1.5, 2)] {
        out += &format!("delta = {delta}, m = {m}, kh = 1\n  a      ln a omega^2   limit          error\n");
        for p in continuum_study(delta, m, 1.0, &[1.5, 1.25, 1.1, 1.05, 1.02, 1.01], 1e-12)? {
            out += &format!("  {:<5}  {:<13.10}  {:<13.10}  {:.3e}\n", p.a, p.scaled, p.limit, p.error);
        }
    }
    Ok(out)
}

fn main() -> fraclap::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
