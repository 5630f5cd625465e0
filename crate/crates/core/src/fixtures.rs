//! Hand-checkable dual matrices used as counterexamples and regression
//! anchors. The same values ship as JSON under `fixtures/`.
//!
//! | name | relation it exhibits |
//! |------|----------------------|
//! | F1, F2 | mutual P-order with F1 ≠ F2; F2 has no DMPGI |
//! | F3, F4 | P-star but not D-star |
//! | F3, F5 | D-star but not P-star |
//! | F6, F7 | P-star, not D-star, MPDGIs not P-star related |
//! | F6, F8 | D-star, MPDGIs not D-star related, DMPGIs not P-star related |

use crate::dual::DualMatrix;

fn build(real: &[&[f64]], dual: &[&[f64]]) -> DualMatrix {
    DualMatrix::from_rows(real, dual).expect("fixture literal is well formed")
}

const E11_2: [&[f64]; 2] = [&[1.0, 0.0], &[0.0, 0.0]];
const E11_3: [&[f64]; 3] = [&[1.0, 0.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0]];
const D110: [&[f64]; 3] = [&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 0.0]];
const D120: [&[f64]; 3] = [&[1.0, 0.0, 0.0], &[0.0, 2.0, 0.0], &[0.0, 0.0, 0.0]];

pub fn f1() -> DualMatrix {
    build(&E11_2, &[&[1.0, 0.0], &[0.0, 0.0]])
}

pub fn f2() -> DualMatrix {
    build(&E11_2, &[&[1.0, 0.0], &[0.0, 1.0]])
}

pub fn f3() -> DualMatrix {
    build(&E11_3, &[&[1.0, 1.0, 1.0], &[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]])
}

pub fn f4() -> DualMatrix {
    build(&D110, &[&[1.0, 1.0, 1.0], &[1.0, 1.0, 0.0], &[1.0, 0.0, 0.0]])
}

pub fn f5() -> DualMatrix {
    build(&D110, &[&[1.0, 0.0, 1.0], &[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0]])
}

pub fn f6() -> DualMatrix {
    build(&E11_3, &[&[1.0, 2.0, 3.0], &[4.0, 0.0, 0.0], &[7.0, 0.0, 0.0]])
}

pub fn f7() -> DualMatrix {
    build(&D120, &[&[1.0, 2.0, 3.0], &[4.0, -1.0, -2.0], &[7.0, -3.0, 0.0]])
}

pub fn f8() -> DualMatrix {
    build(&D120, &[&[1.0, -6.0, 3.0], &[0.0, -2.0, -1.0], &[7.0, -3.0, 0.0]])
}

/// The 1×1 pair `ε` and `2ε` that are mutually T-star related.
pub fn eps_pair() -> (DualMatrix, DualMatrix) {
    (DualMatrix::epsilon(1.0), DualMatrix::epsilon(2.0))
}

/// All shipped fixtures by file stem.
pub fn all() -> Vec<(&'static str, DualMatrix)> {
    vec![
        ("F1", f1()),
        ("F2", f2()),
        ("F3", f3()),
        ("F4", f4()),
        ("F5", f5()),
        ("F6", f6()),
        ("F7", f7()),
        ("F8", f8()),
    ]
}
