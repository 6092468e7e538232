//! Arithmetic in a prime field and in a binary extension field, then an
//! affine system solved and its solution coset listed.

use ffcs::linalg::{rank, solve_affine};
use ffcs::{Field, FieldMatrix, Result};

fn main() -> Result<()> {
    let gf7 = Field::new(7)?;
    println!("GF(7): 3 + 5 = {}, 3 * 5 = {}, 1/3 = {}", gf7.add(3, 5), gf7.mul(3, 5), gf7.inv(3)?);

    let gf8 = Field::new(8)?;
    println!(
        "GF(8) with primitive polynomial {:#b}: 3 + 5 = {}, 3 * 5 = {}, 1/3 = {}",
        gf8.primitive_poly().unwrap_or(0),
        gf8.add(3, 5),
        gf8.mul(3, 5),
        gf8.inv(3)?
    );

    let gf3 = Field::new(3)?;
    let a = FieldMatrix::from_rows(&[vec![1, 2, 0, 1], vec![0, 1, 1, 2]])?;
    let y = [2, 1];
    println!("rank of A over GF(3): {}", rank(&gf3, &a)?);
    let sol = solve_affine(&gf3, &a, &y)?;
    println!("{} solutions of A z = y:", sol.size(gf3.q()));
    for z in sol.iter(&gf3).into_iter().flatten() {
        println!("  {:?} -> A z = {:?}", z.0, gf3.matvec(&a, &z)?.0);
    }
    Ok(())
}
