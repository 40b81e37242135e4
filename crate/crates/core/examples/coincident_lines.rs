//! When is the α-line of `q` the β-line of `r`? Exactly when `β·q = α·r`.

use dotpairs::geometry::{alpha_line, lines_coincide, radial_direction};
use dotpairs::{Point, Rational};

fn main() -> dotpairs::Result<()> {
    let cases = [
        ((1, 0), "1", (2, 0), "2"),
        ((1, 0), "1", (-1, 0), "-1"),
        ((1, 0), "1", (0, 1), "1"),
        ((1, 2), "3", (2, 4), "5"),
        ((1, 2), "3", (-3, -6), "-9"),
    ];
    for ((qx, qy), a, (rx, ry), b) in cases {
        let q = Point::from_ints(qx, qy);
        let r = Point::from_ints(rx, ry);
        let alpha: Rational = a.parse()?;
        let beta: Rational = b.parse()?;
        let same = lines_coincide(&q, &alpha, &r, &beta)?;
        let line = alpha_line(&q, &alpha).expect("non-origin point");
        println!(
            "q = {q}, alpha = {alpha} | r = {r}, beta = {beta}: coincide = {same:<5} (q's line {}x + {}y = {}, radial {} vs {})",
            line.a,
            line.b,
            line.c,
            radial_direction(&q)?,
            radial_direction(&r)?
        );
    }
    Ok(())
}
