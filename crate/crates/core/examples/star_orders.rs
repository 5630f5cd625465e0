// Every order query on the shipped fixtures, through all three routes.
//
// ```bash
// cargo run --example star_orders
// ```

use dualorder::orders::{self, Relation};
use dualorder::{fixtures, Result, Tolerances};

pub fn run_example() -> Result<()> {
    let tol = Tolerances::default();
    let pairs = [("F3", "F4"), ("F3", "F5"), ("F6", "F7"), ("F6", "F8"), ("F1", "F2")];
    let get = |n: &str| fixtures::all().into_iter().find(|(k, _)| *k == n).unwrap().1;

    print!("{:<10}", "pair");
    for r in Relation::ALL {
        print!("{:>9}", r.name());
    }
    println!();
    for (x, y) in pairs {
        let (a, b) = (get(x), get(y));
        let s = orders::relation_matrix(&a, &b, &tol)?;
        print!("{:<10}", format!("{x} ≤ {y}"));
        for r in Relation::ALL {
            let rep = s.report(r);
            let cell = if !rep.prerequisite_failures.is_empty() {
                "n/a"
            } else if rep.holds {
                "yes"
            } else {
                "no"
            };
            print!("{cell:>9}");
        }
        println!();
    }

    let (a, b) = (fixtures::f3(), fixtures::f4());
    let by_def = orders::p_star_leq(&a, &b, &tol)?;
    let by_char = orders::p_star_leq_char(&a, &b, &tol)?;
    let by_form = orders::p_star_leq_canonical(&a, &b, &tol)?;
    println!(
        "F3 P-star F4: definition {}, transposes {}, canonical form {}",
        by_def.holds, by_char.holds, by_form.holds
    );
    assert!(by_def.holds && by_char.holds && by_form.holds);

    let d = orders::d_star_leq(&a, &b, &tol)?;
    for c in d.failed_conditions() {
        println!("F3 D-star F4 fails {}: residual {:.3} > {:.1e}", c.name, c.residual, c.bound);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
