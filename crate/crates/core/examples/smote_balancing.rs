//! Balancing 18 against 11 rows with ADASYN: seven synthetic minority rows.

use ndarray::Array2;
use rand_distr::{Distribution, StandardNormal};
use sigstream::ml::{balance, OversampleConfig};
use sigstream::rng::stream;

fn main() -> sigstream::Result<()> {
    let mut r = stream(3, "example", &[]);
    let y: Vec<u8> = (0..29).map(|i| u8::from(i >= 18)).collect();
    let x = Array2::from_shape_fn((29, 2), |(i, _)| {
        let z: f64 = StandardNormal.sample(&mut r);
        z + 2.0 * f64::from(y[i])
    });
    let out = balance(x.view(), &y, &OversampleConfig::default(), &mut r)?;
    let ones = out.y.iter().filter(|&&l| l == 1).count();
    println!("{} synthetic rows; classes now {}/{}", out.n_synthetic, out.y.len() - ones, ones);
    for row in out.x.rows().into_iter().skip(29) {
        println!("  {row}");
    }
    Ok(())
}
