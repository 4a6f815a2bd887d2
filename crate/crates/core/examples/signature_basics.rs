//! Truncated signature of a small 2-d path, level by level, with the Chen
//! identity, the signed area and a shuffle product checked on the way.

use sigstream::sig::{chen_product, shuffle, signature, signature_oracle, signed_area, MultiIndex, Path};

fn main() -> sigstream::Result<()> {
    let path = Path::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 2.0], vec![3.0, 1.0]])?;
    let sig = signature(&path, 3)?;
    for k in 1..=3 {
        println!("level {k}: {:?}", sig.level(k));
    }

    let (head, tail) = path.split_at(2)?;
    let joined = chen_product(&signature(&head, 3)?, &signature(&tail, 3)?)?;
    println!("Chen identity error: {:e}", joined.max_abs_diff(&sig));

    let word: MultiIndex = "(1,2,1)".parse()?;
    println!("S{word} = {} (oracle {})", sig.get(&word).unwrap(), signature_oracle(&path, &word)?);
    println!("signed area A(1,2) = {}", signed_area(&sig, 1, 2)?);

    // S^(1) S^(2) equals the sum over the shuffles of (1) and (2)
    let (a, b) = ("(1)".parse()?, "(2)".parse()?);
    let lhs = sig.get(&a).unwrap() * sig.get(&b).unwrap();
    let rhs: f64 = shuffle(&a, &b)
        .terms()
        .iter()
        .map(|(w, m)| *m as f64 * sig.get(w).unwrap())
        .sum();
    println!("shuffle identity: {lhs} = {rhs}");
    Ok(())
}
