//! Real roots of `a x^2 + b x + c = 0` without cancellation.

/// Roots in descending order, or `None` when the discriminant is negative.
///
/// The larger-magnitude root comes from `q = -(b + sign(b) sqrt(D)) / 2`,
/// the other from the product identity `x1 x2 = c / a`. Discriminants within
/// a few ulps of zero (relative to `b^2`) are treated as a double root.
pub fn real_roots(a: f64, b: f64, c: f64) -> Option<(f64, f64)> {
    debug_assert!(a != 0.0);
    let disc = b * b - 4.0 * a * c;
    let disc = if disc < 0.0 {
        if disc >= -8.0 * f64::EPSILON * b * b {
            0.0
        } else {
            return None;
        }
    } else {
        disc
    };
    let sq = disc.sqrt();
    let q = -0.5 * (b + b.signum() * sq);
    if q == 0.0 {
        // b == 0 and c == 0
        return Some((0.0, 0.0));
    }
    let x1 = q / a;
    let x2 = c / q;
    Some(if x1 >= x2 { (x1, x2) } else { (x2, x1) })
}
