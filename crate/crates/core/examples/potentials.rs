// Generalized self-similar potentials: validation, scaling factor, eigenvalues.

use fraclap::constants::c_standard;
use fraclap::potentials::{potential_eigenvalue, scaling_factor, validate_stiffness, StiffnessMatrix};

pub fn run_example() -> fraclap::Result<String> {
    let mut out = String::new();
    let nearest = StiffnessMatrix::from_toeplitz(&[1.0, -1.0])?;
    let second = StiffnessMatrix::from_difference_order(2)?;
    for (name, v) in [("nearest neighbour", &nearest), ("second difference", &second)] {
        let r = validate_stiffness(v);
        out += &format!("{name}: valid {} admissible {} kernel {}\n", r.is_valid(), r.is_admissible(), r.kernel_dim);
        for alpha in [0.5, 1.0, 1.5, 2.5, 3.5] {
            let av = scaling_factor(v, alpha)?;
            out += &format!(
                "  alpha {alpha:<4} A_V {av:<+12.6}  C {:<+10.6}  eigenvalue(k=1) {:+.6}\n",
                c_standard(1, alpha)?,
                potential_eigenvalue(v, 1, alpha, 1.0)?
            );
        }
    }
    out += "invalid: ";
    out += &validate_stiffness(&StiffnessMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]])?).violations.join("; ");
    out.push('\n');
    Ok(out)
}

fn main() -> fraclap::Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
