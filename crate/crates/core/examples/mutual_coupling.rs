//! Dipole impedances and the array coupling matrix.
//!
//! Prints the half-wave self impedance, the mutual impedance as a function
//! of element separation, and how strongly the coupling matrix departs from
//! identity as the grid tightens.
//!
//! ```text
//! cargo run --example mutual_coupling
//! ```

use coupled_mimo::array::ArrayGeometry;
use coupled_mimo::coupling::{mutual_impedance, self_impedance, CouplingModel, DipoleParams};
use nalgebra::DMatrix;

fn main() -> coupled_mimo::Result<()> {
    let dipole = DipoleParams::half_wave(50.0)?;
    let z_self = self_impedance(&dipole);
    println!("half-wave dipole, diameter 0.001λ, Z_L = 50 Ω");
    println!("self impedance: {:.2} + j{:.2} Ω", z_self.re, z_self.im);

    println!("\nmutual impedance vs separation:");
    for d in [0.1, 0.2, 0.3, 0.5, 0.7, 1.0, 2.0, 5.0] {
        let z = mutual_impedance(d, &dipole)?;
        println!(
            "  d = {d:>4.1}λ: {:>8.3} {:+.3}j Ω  (|Z| = {:.3})",
            z.re,
            z.im,
            z.norm()
        );
    }

    // coupling strength of a 4×4 grid vs spacing
    println!("\ncoupling matrix distance from the decoupled limit (4×4 grid):");
    let scalar = dipole.load_impedance / (dipole.load_impedance + z_self);
    for d in [0.1, 0.25, 0.5, 1.0, 2.0] {
        let geometry = ArrayGeometry::new(4, 4, d)?;
        let model = CouplingModel::new(&geometry, &dipole)?;
        let target = DMatrix::from_diagonal_element(16, 16, scalar);
        println!(
            "  d = {d:>4.2}λ: ||K - (Z_L/(Z_L+z_self))·I||_F = {:.4}",
            (&model.k - target).norm()
        );
    }
    println!("\n(off-diagonal coupling dies off as the elements separate)");
    Ok(())
}
