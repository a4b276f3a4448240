// Weierstrass-Mandelbrot dispersion relation and its self-similarity.

use fraclap::lattice::{continuum_constant, wm_dispersion, SelfSimilarParams};

pub fn run_example() -> fraclap::Result<String> {
    let (delta, a, m) = (1.05, 1.5, 1);
    let p = SelfSimilarParams::new(delta, a, 1.0, m)?;
    let lim = continuum_constant(m, delta)? / a.ln();
    let mut out = String::from("kh      omega^2        A'/ln(a) kh^delta\n");
    for i in 0..=8 {
        let kh = 0.5 * i as f64;
        out += &format!("{kh:<6}  {:<13.8}  {:.8}\n", wm_dispersion(kh, &p)?, lim * kh.powf(delta));
    }
    // 2.25 * 1.5 is exact, so the identity can be checked to rounding
    let r = wm_dispersion(a * 2.25, &p)? / wm_dispersion(2.25, &p)?;
    out += &format!("omega^2(a kh) / omega^2(kh) = {r:.14}, a^delta = {:.14}\n", a.powf(delta));
    Ok(out)
}

fn main() -> fraclap::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
