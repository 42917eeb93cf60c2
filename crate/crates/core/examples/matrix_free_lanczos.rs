//! Lowest levels of a 16-site Heisenberg chain without forming the
//! 65536 x 65536 matrix.
//!
//! `cargo run --release --example matrix_free_lanczos`

use std::time::Instant;

use kronspin::matfree::{commutator_probe, configure_threads_from_env};
use kronspin::{
    lanczos_extremal, spec_to_kronsum, HamiltonianSpec, KronSum, LanczosConfig, PauliAxis,
    StateVector, Which,
};

fn main() -> kronspin::Result<()> {
    let threads = configure_threads_from_env();
    let n = 16;
    let spec = HamiltonianSpec::chain(n, 0.1, 1.0)?;
    let h = spec_to_kronsum(&spec);
    println!(
        "{n} sites, {} terms, dimension {}, {threads} threads",
        h.terms().len(),
        h.dimension()
    );

    h.verify_hermitian(7)?;
    let x = StateVector::random(n, 1)?;
    let start = Instant::now();
    let _ = h.matvec(&x)?;
    println!("one matvec: {:.3}s", start.elapsed().as_secs_f64());

    let s2 = KronSum::total_spin_squared(n)?;
    let sz = KronSum::total_component(PauliAxis::Z, n)?;
    println!("‖[H, S²] x‖ = {:e}", commutator_probe(&h, &s2, &x)?);
    println!("‖[H, S_z] x‖ = {:e}", commutator_probe(&h, &sz, &x)?);

    let cfg = LanczosConfig {
        which: Which::Lowest,
        k: 3,
        want_vectors: true,
        ..LanczosConfig::default()
    };
    let start = Instant::now();
    let spectrum = lanczos_extremal(&h, &cfg)?;
    println!(
        "lowest levels {:?} in {:.2}s",
        spectrum.eigenvalues,
        start.elapsed().as_secs_f64()
    );

    // The ground state of an antiferromagnetic even chain is a singlet.
    if let Some(v) = &spectrum.eigenvectors {
        let ground = StateVector::new(n, v.column(0))?;
        let s2_ground = ground.inner(&s2.matvec(&ground)?);
        println!("<S²> in the ground state: {:.3e}", s2_ground.re);
    }
    Ok(())
}
