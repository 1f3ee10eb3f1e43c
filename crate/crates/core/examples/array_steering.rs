//! Build a rectangular array and inspect its far-field steering matrix.
//!
//! ```text
//! cargo run --example array_steering
//! ```

use coupled_mimo::array::{steering_element, ArrayGeometry, IncidentDirections};
use coupled_mimo::{array::steering_matrix, seed};

fn main() -> coupled_mimo::Result<()> {
    // 128 elements as a 16×8 grid at 0.1λ spacing.
    let geometry = ArrayGeometry::new(16, 8, 0.1)?;
    let (a, b) = geometry.aperture();
    println!(
        "array: {}x{} = {} elements, spacing {}λ, aperture {a:.1}λ × {b:.1}λ",
        geometry.per_row,
        geometry.per_col,
        geometry.num_antennas(),
        geometry.spacing
    );

    // one realization worth of incident directions
    let mut rng = seed::stream(7);
    let directions = IncidentDirections::sample(70, &mut rng)?;
    println!(
        "sampled P = {} azimuths, shared elevation {:.3} rad",
        directions.len(),
        directions.elevation
    );

    let steering = steering_matrix(&geometry, &directions);
    println!("steering matrix: {}x{}", steering.nrows(), steering.ncols());

    // the reference element has zero phase toward every direction
    let reference = steering_element(
        &geometry,
        1,
        1,
        directions.azimuths[0],
        directions.elevation,
    )?;
    println!("reference element response: {reference}");

    // every entry is a pure phase
    let worst = steering
        .iter()
        .map(|z| (z.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    println!("max | |entry| - 1 | = {worst:.2e}");

    // first few entries of the first steering column
    println!("column 0 head:");
    for idx in 0..4 {
        let (c, e) = geometry.grid_position(idx);
        println!("  element ({c},{e}) -> {:.4}", steering[(idx, 0)]);
    }
    Ok(())
}
