// The JSON matrix file format and a compute/check session through the CLI entry point.
//
// ```bash
// cargo run --example matrix_files
// ```

use dualorder::{cli, fixtures, io, Error, Result};

pub fn run_example() -> Result<()> {
    let dir = std::env::temp_dir().join(format!("dualorder-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let (a, b) = (dir.join("F3.json"), dir.join("F5.json"));
    io::write_matrix(&a, &fixtures::f3())?;
    io::write_matrix(&b, &fixtures::f5())?;
    println!("{}", std::fs::read_to_string(&a)?.trim());

    let inv = dir.join("inv.json");
    let session: [&[&str]; 3] = [
        &["compute", "dmpgi", a.to_str().unwrap(), "-o", inv.to_str().unwrap()],
        &["check", "d-star", a.to_str().unwrap(), b.to_str().unwrap()],
        &["check", "d-star", b.to_str().unwrap(), a.to_str().unwrap()],
    ];
    for args in session {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = cli::run(std::iter::once("dualorder").chain(args.iter().copied()), &mut out, &mut err);
        print!("$ dualorder {} -> exit {code}\n{}", args[..2].join(" "), String::from_utf8_lossy(&out));
    }
    println!("DMPGI of F3: {}", io::read_matrix(&inv)?);

    match io::parse_matrix(r#"{"rows": 1, "cols": 1, "real": [[1]], "scale": 2}"#) {
        Err(Error::Parse(msg)) => println!("rejected: {msg}"),
        other => panic!("expected a parse error, got {other:?}"),
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
