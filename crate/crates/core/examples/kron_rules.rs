//! Builds a few Kronecker products and checks every algebraic rule on them.
//!
//! `cargo run --example kron_rules`

use kronspin::{check_property, kron, pauli, ComplexMatrix, KronProperty, PauliAxis};

fn main() -> kronspin::Result<()> {
    let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]])?;
    let b = ComplexMatrix::from_real_rows(&[&[0.0, 5.0, 1.0], &[6.0, 7.0, 0.5]])?;
    let p = kron(&a, &b)?;
    println!(
        "A (2x2) ⊗ B (2x3) is {}x{}:\n{}",
        p.rows(),
        p.cols(),
        p.to_text()
    );

    let sx = pauli(PauliAxis::X);
    let sz = pauli(PauliAxis::Z);
    for property in KronProperty::ALL {
        let operands = match property {
            KronProperty::LeftDistributive => vec![sx.clone(), sz.clone(), sx.clone()],
            KronProperty::RightDistributive => vec![sx.clone(), sz.clone(), sx.clone()],
            KronProperty::MixedProduct => vec![sx.clone(), sz.clone(), sz.clone(), sx.clone()],
            KronProperty::IdentityFactors => {
                vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3)]
            }
            _ => vec![sx.clone(), sz.clone()],
        };
        let check = check_property(property, &operands, &[2.0, -0.5], 1e-10)?;
        println!("{}", check.report);
        for d in &check.diagnostics {
            println!("    {d}");
        }
        if let Some((r, c)) = check.witness {
            println!("    σx⊗σz and σz⊗σx first differ at ({r}, {c})");
        }
    }
    Ok(())
}
