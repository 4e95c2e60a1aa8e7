//! Brute-force reference implementations for the test suites.
//!
//! Everything here recomputes results from raw slices by materializing every
//! candidate and picking the largest after a sort — deliberately not the
//! fold-based routes used by [`crate::measure`] — so agreement between the
//! two is evidence, not a tautology. Intended for tests; nothing in the
//! library calls into this module.

/// Largest element of a finite candidate list, `None` when empty.
fn sorted_max(mut candidates: Vec<f64>) -> Option<f64> {
    candidates.sort_by(|a, b| a.partial_cmp(b).expect("finite candidates"));
    candidates.last().copied()
}

/// Measure of the event given by member indices: largest member weight.
pub fn measure(weights: &[f64], members: &[usize]) -> f64 {
    let mut cs = Vec::new();
    for &i in members {
        cs.push(weights[i]);
    }
    sorted_max(cs).unwrap_or(0.0)
}

/// Sup-expectation by full enumeration of `value * weight` products.
pub fn expectation(values: &[f64], weights: &[f64]) -> f64 {
    let mut cs = Vec::new();
    for i in 0..values.len() {
        cs.push(values[i] * weights[i]);
    }
    sorted_max(cs).expect("nonempty space")
}

/// Sup-variance by full enumeration of squared centred products.
pub fn variance(values: &[f64], weights: &[f64]) -> f64 {
    let e = expectation(values, weights);
    let mut cs = Vec::new();
    for i in 0..values.len() {
        cs.push((values[i] - e) * (values[i] - e) * weights[i]);
    }
    sorted_max(cs).expect("nonempty space")
}

/// Pointwise running maximum of the first `n` rows (`rows[k][i]` is the
/// value of step `k + 1` at outcome `i`).
pub fn running_max(rows: &[Vec<f64>], n: usize) -> Vec<f64> {
    let width = rows[0].len();
    let mut out = Vec::with_capacity(width);
    for i in 0..width {
        let mut column = Vec::new();
        for row in rows.iter().take(n) {
            column.push(row[i]);
        }
        out.push(sorted_max(column).expect("nonempty prefix"));
    }
    out
}

/// Both sides of the deviation inequality at radius `r`, by enumeration:
/// returns `(measure of {|v - E| >= r}, Var / r^2)`.
pub fn chebyshev_sides(values: &[f64], weights: &[f64], r: f64) -> (f64, f64) {
    let e = expectation(values, weights);
    let mut members = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        if (v - e).abs() >= r {
            members.push(i);
        }
    }
    (measure(weights, &members), variance(values, weights) / (r * r))
}
