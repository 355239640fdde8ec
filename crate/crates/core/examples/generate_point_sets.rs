//! Every point-set family, written to and read back from the text format.
//!
//! cargo run --example generate_point_sets

use jitterbench::generators::{
    gen_grid, gen_hammersley, gen_jittered, gen_partition_jittered, gen_uniform, GridMode,
};
use jitterbench::geometry::bracket;
use jitterbench::partition::randomized_fine_grid_partition;
use jitterbench::PointSet;

fn main() -> jitterbench::Result<()> {
    let sets = [
        gen_uniform(16, 2, 7)?,
        gen_grid(4, 2, GridMode::Centered)?,
        gen_jittered(4, 2, 7)?,
        gen_hammersley(16, 2)?,
        gen_partition_jittered(&randomized_fine_grid_partition(8, 16, 2, 3)?, 7)?,
    ];
    for p in &sets {
        println!(
            "{:<20} N={:<3} first point {:?}",
            p.provenance().generator,
            p.len(),
            p.point(0)
        );
    }

    // one jittered point per cell, cells visited in lexicographic order
    let jittered = &sets[2];
    let cells: Vec<Vec<usize>> = jittered
        .iter()
        .map(|x| bracket(x, 4))
        .collect::<Result<_, _>>()?;
    println!("cells of the jittered set: {:?}", &cells[..5]);

    let mut buf = Vec::new();
    jittered.write_to(&mut buf)?;
    let text = String::from_utf8(buf).expect("utf-8");
    println!("{}", text.lines().take(3).collect::<Vec<_>>().join("\n"));
    // coordinates survive bit for bit; the header keeps generator and seed
    let back = PointSet::read_from(text.as_bytes())?;
    assert_eq!(back.coords(), jittered.coords());
    println!("round trip exact: {}", back.coords() == jittered.coords());
    Ok(())
}
