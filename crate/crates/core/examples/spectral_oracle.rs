// FFT oracle: plain periodic transform against the image-corrected one.

use fraclap::field::TestField;
use fraclap::flcore::fl_regularized;
use fraclap::oracle::{dft_fl_report, gaussian_spectral, GridField};
use fraclap::quad::QuadSpec;

pub fn run_example() -> fraclap::Result<String> {
    let u = TestField::unit_gaussian();
    let spec = QuadSpec::default();
    let xs = [0.0, 0.5, 1.0, 2.0];
    let mut out = String::from("alpha  x    quadrature       periodic DFT     image corrected\n");
    for alpha in [0.5, 1.5, 3.0] {
        let rep = dft_fl_report(&GridField::from_field(&u, 1024, 16.0)?, alpha)?;
        let it = rep.field.interpolant();
        let img = gaussian_spectral(alpha, 1.0, 0.0, 1024, 16.0, &xs, true)?;
        for (i, &x) in xs.iter().enumerate() {
            let q = fl_regularized(&u, &[x], 1, alpha, &spec)?.value;
            out += &format!("{alpha:<5}  {x:<3}  {q:<15.11}  {:<15.11}  {:.11}\n", it.eval(x), img[i]);
        }
        out += &format!("       Parseval residuals {:.1e} {:.1e}\n", rep.parseval_forward, rep.parseval_inverse);
    }
    Ok(out)
}

fn main() -> fraclap::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
