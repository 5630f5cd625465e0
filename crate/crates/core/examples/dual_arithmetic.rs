// Dual matrices add, multiply and transpose partwise; ε² = 0.
//
// ```bash
// cargo run --example dual_arithmetic
// ```

use dualorder::{DualMatrix, Result, Tolerances};

pub fn run_example() -> Result<()> {
    let x = DualMatrix::from_rows(&[&[1.0, 2.0], &[0.0, 1.0]], &[&[0.0, 1.0], &[1.0, 0.0]])?;
    let y = DualMatrix::from_rows(&[&[2.0, 0.0], &[1.0, 3.0]], &[&[1.0, 1.0], &[0.0, 0.0]])?;

    let sum = x.add(&y)?;
    let prod = x.mul(&y)?;
    println!("x + y = {sum}");
    println!("x · y = {prod}");

    // (xy)ᵀ = yᵀxᵀ
    let lhs = prod.transpose();
    let rhs = y.transpose().mul(&x.transpose())?;
    assert!(lhs.approx_eq(&rhs, &Tolerances::default())?);

    let eps = DualMatrix::epsilon(1.0);
    let eps2 = eps.mul(&eps)?;
    println!("ε · ε = {eps2}");
    assert_eq!(eps2, DualMatrix::zeros(1, 1));

    match x.add(&DualMatrix::zeros(3, 3)) {
        Err(e) => println!("shape mismatch: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
