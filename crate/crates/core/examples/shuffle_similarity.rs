//! Swapping Kronecker factors is a similarity transform by a permutation.
//!
//! `cargo run --example shuffle_similarity`

use kronspin::linalg::spectrum_multiset_equal;
use kronspin::{
    commutation_matrix, eigh, kron, similarity_transform, swap_kron_factors, ComplexMatrix,
};

fn main() -> kronspin::Result<()> {
    let a = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, -1.0]])?;
    let b = ComplexMatrix::from_real_rows(&[&[0.0, 1.0, 0.0], &[1.0, 3.0, 2.0], &[0.0, 2.0, 1.0]])?;
    let ab = kron(&a, &b)?;
    let ba = kron(&b, &a)?;

    let p = commutation_matrix(2, 3);
    let conjugated = p.matmul(&ab)?.matmul(&p.transpose())?;
    println!("P (A⊗B) Pᵀ == B⊗A exactly: {}", conjugated == ba);
    println!(
        "index shuffle agrees: {}",
        swap_kron_factors(&ab, a.shape(), b.shape())? == ba
    );

    // Pᵀ = P⁻¹, so B⊗A is similar to A⊗B with C = Pᵀ.
    let d = similarity_transform(&p.transpose(), &ab)?;
    println!("C⁻¹ (A⊗B) C distance from B⊗A: {:e}", d.distance(&ba)?);

    let s1 = eigh(&ab, false)?;
    let s2 = eigh(&ba, false)?;
    println!("spectrum of A⊗B: {:?}", s1.eigenvalues);
    println!(
        "same multiset for B⊗A: {}",
        spectrum_multiset_equal(&s1, &s2, 1e-10)
    );
    Ok(())
}
