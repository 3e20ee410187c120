//! Small real-polynomial helpers. Coefficients are stored in ascending
//! powers: `c[0] + c[1] x + c[2] x^2 + ...`.

pub(crate) fn eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

pub(crate) fn derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| c * i as f64)
        .collect()
}

fn trimmed(coeffs: &[f64]) -> &[f64] {
    let len = coeffs
        .iter()
        .rposition(|&c| c != 0.0)
        .map_or(0, |i| i + 1);
    &coeffs[..len]
}

/// Real roots of the polynomial inside `[lo, hi]`, ascending.
///
/// Works recursively: the roots of the derivative split the interval into
/// monotone pieces, each of which holds at most one root, found by bisection.
pub(crate) fn real_roots_in(coeffs: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let coeffs = trimmed(coeffs);
    match coeffs.len() {
        0 | 1 => Vec::new(),
        2 => {
            let r = -coeffs[0] / coeffs[1];
            if (lo..=hi).contains(&r) {
                vec![r]
            } else {
                Vec::new()
            }
        }
        _ => {
            let mut knots = vec![lo];
            knots.extend(real_roots_in(&derivative(coeffs), lo, hi));
            knots.push(hi);
            let mut roots: Vec<f64> = Vec::new();
            for w in knots.windows(2) {
                if let Some(r) = bisect(coeffs, w[0], w[1]) {
                    if roots.last().is_none_or(|&last| r > last) {
                        roots.push(r);
                    }
                }
            }
            roots
        }
    }
}

fn bisect(coeffs: &[f64], mut lo: f64, mut hi: f64) -> Option<f64> {
    let mut f_lo = eval(coeffs, lo);
    let f_hi = eval(coeffs, hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = eval(coeffs, mid);
        if f_mid == 0.0 {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
