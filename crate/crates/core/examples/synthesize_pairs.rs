// Seeded generators for related pairs and chains, built in a shared frame.
//
// ```bash
// cargo run --example synthesize_pairs
// ```

use dualorder::orders::{self, Relation};
use dualorder::synthesis::{self, GenSpec};
use dualorder::{Result, Tolerances};

pub fn run_example() -> Result<()> {
    let tol = Tolerances::with_eq(1e-8);
    let spec = GenSpec::new(5, 4, 1, 3, 7);

    let kinds = [
        ("d-star", synthesis::gen_d_star_pair(&spec)?, Relation::DStar),
        ("p-star", synthesis::gen_p_star_pair(&spec)?, Relation::PStar),
        ("both (d)", synthesis::gen_both_pair(&spec)?, Relation::DStar),
        ("p-order", synthesis::gen_p_order_pair(&spec)?, Relation::POrder),
    ];
    for (name, pair, rel) in kinds {
        let (a, b) = pair.pair();
        let rep = rel.check(&a, &b, &tol)?;
        println!("{name:<9} holds {} (max residual {:.1e})", rep.holds, rep.max_residual());
        assert!(rep.holds);
    }

    let mut pair = synthesis::gen_d_star_pair(&spec)?;
    let block = pair.perturb_coupled(0.1, 99).expect("rank a < rank b leaves a coupled block");
    let (a, b) = pair.pair();
    println!("after nudging block {block}: d-star holds {}", orders::d_star_leq(&a, &b, &tol)?.holds);

    let chain = synthesis::gen_p_star_chain(&GenSpec::new(4, 4, 1, 2, 3), 3)?;
    let (a, b, c) = chain.triple();
    println!(
        "chain A ≤ B ≤ C: {} {} and A ≤ C: {}",
        orders::p_star_leq(&a, &b, &tol)?.holds,
        orders::p_star_leq(&b, &c, &tol)?.holds,
        orders::p_star_leq(&a, &c, &tol)?.holds
    );

    let x = synthesis::gen_dual_without_dmpgi(&GenSpec::new(3, 3, 1, 1, 5))?;
    println!("gen_dual_without_dmpgi has a DMPGI: {}", dualorder::ginv::has_dmpgi(&x, &tol)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
