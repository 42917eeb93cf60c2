//! Round-trips a coupling spec through JSON and diagonalizes it with both engines.
//!
//! `cargo run --example spec_file`

use kronspin::{
    build_general, eigh, lanczos_extremal, spec_to_kronsum, HamiltonianSpec, LanczosConfig,
};

fn main() -> kronspin::Result<()> {
    let text = r#"{
        "n_sites": 5,
        "mu_b0": 0.25,
        "couplings": [
            {"i": 1, "j": 2, "J": 1.0},
            {"i": 2, "j": 3, "J": 0.8},
            {"i": 3, "j": 4, "J": 1.2},
            {"i": 5, "j": 4, "J": 0.6},
            {"i": 1, "j": 5, "J": 0.3}
        ]
    }"#;
    let spec = HamiltonianSpec::from_json(text)?;
    println!("normalized spec:\n{}", spec.to_json());

    let dense = eigh(&build_general(&spec)?, false)?;
    let lanczos = lanczos_extremal(&spec_to_kronsum(&spec), &LanczosConfig::default())?;
    println!("dense ground   {:.12}", dense.eigenvalues[0]);
    println!("lanczos ground {:.12}", lanczos.eigenvalues[0]);

    match HamiltonianSpec::from_json(
        r#"{"n_sites": 2, "mu_b0": 0, "couplings": [{"i": 1, "j": 1, "J": 1}]}"#,
    ) {
        Ok(_) => println!("unexpectedly accepted a self-coupling"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
