//! Two- and three-spin NMR Hamiltonians, their spectra and conserved quantities,
//! and the rebuild of the two-spin operator from weighted total spin.
//!
//! `cargo run --example nmr_hamiltonians`

use kronspin::spin::conserved_residual;
use kronspin::{
    build_h2, build_h3, eigh, total_component, total_spin_squared, verify_h2_decomposition,
    PauliAxis, WeightTriple,
};

fn main() -> kronspin::Result<()> {
    let (mu, j) = (0.4, 1.0);
    let h2 = build_h2(mu, j);
    println!(
        "H2(μB₀ = {mu}, J = {j}) eigenvalues {:?}",
        eigh(&h2, false)?.eigenvalues
    );
    println!("  expected -3J, J - 2μB₀, J, J + 2μB₀");

    let h3 = build_h3(mu, 1.0, 0.5, 0.25);
    let spectrum = eigh(&h3, true)?;
    println!("H3 eigenvalues {:?}", spectrum.eigenvalues);
    let sz = total_component(PauliAxis::Z, 3)?;
    let s2 = total_spin_squared(3)?;
    println!("  ‖[H3, S_z]‖ = {:e}", conserved_residual(&h3, &sz)?);
    println!("  ‖[H3, S²]‖  = {:e}", conserved_residual(&h3, &s2)?);

    let a = 0.5f64.sqrt();
    let d = verify_h2_decomposition(WeightTriple::isotropic(a), -a);
    for r in &d.squared_components {
        println!("{r}");
    }
    println!("{}", d.report);
    println!("  identity offset dropped: {}", d.identity_offset);
    println!("  matching: {:?}", d.matching);

    let skew = verify_h2_decomposition(WeightTriple::new(1.0, 0.5, 1.0), -1.0);
    println!("anisotropic weights: {:?}", skew.matching);
    Ok(())
}
