// Where the dual orders part ways: P-order is not antisymmetric, and
// neither P-star nor D-star carries over to the inverses.
//
// ```bash
// cargo run --example counterexamples
// ```

use dualorder::orders;
use dualorder::{fixtures, ginv, Result, Tolerances};

pub fn run_example() -> Result<()> {
    let tol = Tolerances::default();

    let (f1, f2) = (fixtures::f1(), fixtures::f2());
    let up = orders::p_order_leq(&f1, &f2, &tol)?.holds;
    let down = orders::p_order_leq(&f2, &f1, &tol)?.holds;
    println!("F1 ≤ F2 and F2 ≤ F1 under P-order: {up}, {down}; F1 = F2: {}", f1.approx_eq(&f2, &tol)?);
    println!(
        "they share an MPDGI: {}",
        ginv::mpdgi_value(&f1, &tol)?.approx_eq(&ginv::mpdgi_value(&f2, &tol)?, &tol)?
    );

    let (f6, f7, f8) = (fixtures::f6(), fixtures::f7(), fixtures::f8());
    let s67 = orders::relation_matrix(&f6, &f7, &tol)?;
    println!(
        "F6 ≤ F7: P-star {}, D-star {}, P-star on MPDGIs {}",
        s67.p_star.holds, s67.d_star.holds, s67.p_star_mpdgi.holds
    );
    let s68 = orders::relation_matrix(&f6, &f8, &tol)?;
    println!(
        "F6 ≤ F8: D-star {}, D-star on MPDGIs {}, P-star on DMPGIs {:?}",
        s68.d_star.holds,
        s68.d_star_mpdgi.holds,
        s68.p_star_dmpgi.as_ref().map(|r| r.holds)
    );

    let mono = orders::check_dagger_monotone(&f6, &f8, &tol)?;
    println!("F6 ≤ F8 gives B̂† ≤ Â† under D-star: {}", mono.inverted.holds);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
