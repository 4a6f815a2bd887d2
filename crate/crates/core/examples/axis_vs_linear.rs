//! The same (time, value) pairs joined by straight lines and by a
//! stairstep. Level 1 agrees, the area does not.

use sigstream::embeddings::{axis_path, linear_path};
use sigstream::sig::{signature, signed_area};

fn main() -> sigstream::Result<()> {
    let pairs = [(0.0, 1.0), (1.0, 4.0), (2.0, 2.0), (3.0, 5.0), (4.0, 7.0)];
    for (name, path) in [("linear", linear_path(&pairs)?), ("axis", axis_path(&pairs)?)] {
        let sig = signature(&path, 2)?;
        println!(
            "{name:>6}: {} points, level 1 {:?}, area {}",
            path.len(),
            sig.level(1),
            signed_area(&sig, 1, 2)?
        );
    }
    Ok(())
}
