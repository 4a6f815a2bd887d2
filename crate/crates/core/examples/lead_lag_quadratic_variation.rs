//! The signed area of the lead-lag path is half the quadratic variation of
//! the stream.

use sigstream::embeddings::lead_lag;
use sigstream::sig::{signature, signed_area};

fn main() -> sigstream::Result<()> {
    let stream = [1.0, 3.0, 2.0, 6.0, 5.5, 7.0];
    let path = lead_lag(&stream)?;
    for p in path.points() {
        println!("{p:?}");
    }
    let area = signed_area(&signature(&path, 2)?, 1, 2)?;
    let qv: f64 = stream.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum();
    println!("area {area}, half quadratic variation {}", qv / 2.0);
    Ok(())
}
