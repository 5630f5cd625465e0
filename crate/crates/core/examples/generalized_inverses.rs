// MPDGI always exists; the DMPGI only when (I − AA†)A₀(I − A†A) = 0.
//
// ```bash
// cargo run --example generalized_inverses
// ```

use dualorder::{fixtures, ginv, linalg, DualMatrix, Result, Tolerances};

pub fn run_example() -> Result<()> {
    let tol = Tolerances::default();

    let real = fixtures::f7().real().clone();
    println!("pinv(diag(1, 2, 0)) = {}", DualMatrix::from_real(linalg::pinv(&real, &tol)?)?);

    for (name, x) in fixtures::all() {
        let p = ginv::mpdgi(&x, &tol)?;
        let d = ginv::dmpgi(&x, &tol)?;
        let pr = p.penrose_residuals.unwrap_or_default();
        println!(
            "{name}: MPDGI {}, max dual Penrose residual {:.1e}",
            p.value().expect("MPDGI exists"),
            pr.iter().cloned().fold(0.0, f64::max)
        );
        match d.value() {
            Some(v) => println!("    DMPGI {v}"),
            None => println!("    no DMPGI, projector residual {:.3}", d.projector_residual),
        }
    }

    let report = ginv::dmpgi_exists(&fixtures::f2(), &tol)?;
    println!(
        "F2 existence: projector test {}, rank test rk = {} vs 2·rk A = {}",
        report.exists,
        report.block_rank,
        2 * report.real_rank
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
