//! Pauli algebra, site lifting, and the total-spin observables.
//!
//! `cargo run --example spin_operators`

use kronspin::{
    commutator, eigh, lift, pauli, total_component, total_spin_squared, Complex64, PauliAxis,
    SiteIndex,
};

fn main() -> kronspin::Result<()> {
    let [x, y, z] = PauliAxis::ALL.map(pauli);
    let xy = commutator(&x, &y)?;
    println!(
        "[σx, σy] = 2iσz: {}",
        xy == z.scale(Complex64::new(0.0, 2.0))
    );

    let n = 3;
    for k in 1..=n {
        let site = SiteIndex::new(k, n)?;
        let diag: Vec<f64> = (0..8)
            .map(|i| lift(&z, site).unwrap().get(i, i).re)
            .collect();
        println!("σz on site {k} of {n}: diag {diag:?}");
    }

    for n in 2..=4 {
        let sz = eigh(&total_component(PauliAxis::Z, n)?, false)?;
        let s2 = eigh(&total_spin_squared(n)?, false)?;
        println!("n = {n}");
        println!("  S_z levels {:?}", sz.multiplicities(1e-9));
        println!("  S² levels  {:?}", s2.multiplicities(1e-9));
    }
    Ok(())
}
