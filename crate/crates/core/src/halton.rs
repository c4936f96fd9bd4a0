//! Halton low-discrepancy sequence.

use alloc::vec::Vec;

/// Radical inverse of `index` in `base`: the base-`base` digits of `index`
/// mirrored around the radix point.
pub fn radical_inverse(mut index: u64, base: u32) -> f64 {
    let b = u64::from(base);
    let inv = 1.0 / f64::from(base);
    let mut scale = inv;
    let mut out = 0.0;
    while index > 0 {
        out += (index % b) as f64 * scale;
        index /= b;
        scale *= inv;
    }
    out
}

/// `count` points of the 2D Halton sequence in the unit square, starting at
/// sequence index `skip + 1` (index 0 is the origin).
pub fn halton_points(count: usize, bases: (u32, u32), skip: u64) -> Vec<(f64, f64)> {
    (0..count as u64)
        .map(|k| {
            let idx = skip + 1 + k;
            (radical_inverse(idx, bases.0), radical_inverse(idx, bases.1))
        })
        .collect()
}

/// Whether two bases are usable together (both >= 2 and coprime).
pub fn bases_valid(bases: (u32, u32)) -> bool {
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    bases.0 >= 2 && bases.1 >= 2 && gcd(bases.0, bases.1) == 1
}
