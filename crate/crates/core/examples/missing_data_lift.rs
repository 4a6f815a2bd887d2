//! A stream with gaps lifted to (time, last observed value, missing flag).

use sigstream::embeddings::{missing_lift, StreamRecord};
use sigstream::sig::signature;

fn main() -> sigstream::Result<()> {
    let stream = [Some(1.0), Some(3.0), None, Some(5.0), Some(3.0), None, None, Some(9.0), Some(3.0), Some(5.0)];
    let record = StreamRecord::with_gaps("example", &stream, None);
    let path = missing_lift(&record)?;
    for (i, p) in path.points().enumerate() {
        println!("{i}: {p:?}");
    }
    let sig = signature(&path, 2)?;
    for (index, value) in sig.iter() {
        println!("{index} {value}");
    }
    Ok(())
}
