//! Spectrum of the exponentially damped oscillator.
//!
//! Clearing the kernel pole from `d(s) = m s^2 + cμs/(μ+s) + k` gives the cubic
//! `p(s) = m s^3 + mμ s^2 + (k + cμ) s + kμ = (μ + s) d(s)`. Its three simple
//! roots and the residues of `1/d(s) = (s + μ)/p(s)` determine the impulse
//! response `h(t) = Σ R_j e^{s_j t}`.

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::OscillatorParams;

/// Roots closer than this (relative to the largest root modulus) are treated as repeated.
const SEPARATION_TOL: f64 = 1e-8;

/// Companion eigenvalues of a double root are only accurate to about
/// sqrt(eps), so near-double roots are also caught through the discriminant,
/// which vanishes quadratically in the separation.
const DISCRIMINANT_TOL: f64 = 1e-14;

/// `p(s)` with coefficients ordered from the cubic term down to the constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicPolynomial {
    coeffs: [f64; 4],
}

impl CharacteristicPolynomial {
    pub fn new(params: &OscillatorParams) -> Self {
        let (m, c, k, mu) = (params.m(), params.c(), params.k(), params.mu());
        Self {
            coeffs: [m, m * mu, k + c * mu, k * mu],
        }
    }

    pub fn coefficients(&self) -> [f64; 4] {
        self.coeffs
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        let [a3, a2, a1, a0] = self.coeffs;
        ((s * a3 + a2) * s + a1) * s + a0
    }

    pub fn eval_derivative(&self, s: Complex64) -> Complex64 {
        let [a3, a2, a1, _] = self.coeffs;
        (s * (3.0 * a3) + 2.0 * a2) * s + a1
    }

    /// Discriminant and the sum of the magnitudes of its terms.
    pub fn discriminant(&self) -> (f64, f64) {
        let [a, b, c, d] = self.coeffs;
        let terms = [
            18.0 * a * b * c * d,
            -4.0 * b * b * b * d,
            b * b * c * c,
            -4.0 * a * c * c * c,
            -27.0 * a * a * d * d,
        ];
        (terms.iter().sum(), terms.iter().map(|t| t.abs()).sum())
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Eigenvalues of the companion matrix of the monic cubic.
    fn companion_roots(&self) -> [Complex64; 3] {
        let [a3, a2, a1, a0] = self.coeffs;
        let companion = Matrix3::new(
            -a2 / a3, -a1 / a3, -a0 / a3, //
            1.0, 0.0, 0.0, //
            0.0, 1.0, 0.0,
        );
        let ev = companion.complex_eigenvalues();
        [ev[0], ev[1], ev[2]]
    }

    fn polish(&self, mut s: Complex64) -> Complex64 {
        for _ in 0..2 {
            let d = self.eval_derivative(s);
            if d.norm() == 0.0 {
                break;
            }
            let next = s - self.eval(s) / d;
            if self.eval(next).norm() <= self.eval(s).norm() {
                s = next;
            } else {
                break;
            }
        }
        s
    }
}

pub fn characteristic_poly(params: &OscillatorParams) -> CharacteristicPolynomial {
    CharacteristicPolynomial::new(params)
}

/// Roots `s_1, s_2, s_3` of `p` and residues of the transfer function `1/d(s)`.
///
/// In the oscillatory case `s_1 = -α + βi` (β > 0), `s_2 = conj(s_1)` and
/// `s_3 = -γ` is the real, non-oscillatory root. With three real roots they
/// are sorted in descending order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSolution {
    roots: [Complex64; 3],
    residues: [Complex64; 3],
    oscillatory: bool,
}

pub fn solve_eigen(params: &OscillatorParams) -> Result<EigenSolution> {
    let poly = CharacteristicPolynomial::new(params);
    let raw = poly.companion_roots();

    let pair = raw.iter().position(|r| r.im > 0.0);
    let roots = match pair {
        Some(i) => {
            let s1 = poly.polish(raw[i]);
            // the real root is whichever eigenvalue is farthest from the pair
            let j = (0..3)
                .filter(|&j| j != i)
                .max_by(|&p, &q| {
                    (raw[p] - raw[i])
                        .norm()
                        .total_cmp(&(raw[q] - raw[i]).norm())
                })
                .unwrap();
            let s3 = poly.polish(Complex64::new(raw[j].re, 0.0));
            if s1.im > 0.0 {
                [s1, s1.conj(), Complex64::new(s3.re, 0.0)]
            } else {
                // polishing collapsed the pair onto the real axis
                let mut r = [s1.re, s1.re, s3.re];
                r.sort_by(|a, b| b.total_cmp(a));
                r.map(|x| Complex64::new(x, 0.0))
            }
        }
        None => {
            let mut r = raw.map(|z| poly.polish(Complex64::new(z.re, 0.0)).re);
            r.sort_by(|a, b| b.total_cmp(a));
            r.map(|x| Complex64::new(x, 0.0))
        }
    };
    let oscillatory = roots[0].im > 0.0;

    let scale = roots.iter().fold(0.0, |m: f64, r| m.max(r.norm()));
    let (disc, disc_scale) = poly.discriminant();
    if disc.abs() <= DISCRIMINANT_TOL * disc_scale {
        let (i, j) = closest_pair(&roots);
        return Err(Error::DegenerateSpectrum(
            roots[i].to_string(),
            roots[j].to_string(),
        ));
    }
    for i in 0..3 {
        for j in (i + 1)..3 {
            if (roots[i] - roots[j]).norm() < SEPARATION_TOL * scale {
                return Err(Error::DegenerateSpectrum(
                    roots[i].to_string(),
                    roots[j].to_string(),
                ));
            }
        }
    }

    let mu = params.mu();
    let residue = |s: Complex64| (s + mu) / poly.eval_derivative(s);
    let residues = if oscillatory {
        let r1 = residue(roots[0]);
        [r1, r1.conj(), Complex64::new(residue(roots[2]).re, 0.0)]
    } else {
        roots.map(residue)
    };

    Ok(EigenSolution {
        roots,
        residues,
        oscillatory,
    })
}

fn closest_pair(roots: &[Complex64; 3]) -> (usize, usize) {
    [(0, 1), (0, 2), (1, 2)]
        .into_iter()
        .min_by(|&(a, b), &(c, d)| {
            (roots[a] - roots[b])
                .norm()
                .total_cmp(&(roots[c] - roots[d]).norm())
        })
        .unwrap()
}

impl EigenSolution {
    pub fn roots(&self) -> [Complex64; 3] {
        self.roots
    }

    pub fn residues(&self) -> [Complex64; 3] {
        self.residues
    }

    pub fn is_oscillatory(&self) -> bool {
        self.oscillatory
    }

    /// Decay rate of the oscillatory pair, `-Re s_1`.
    pub fn alpha(&self) -> Option<f64> {
        self.oscillatory.then(|| -self.roots[0].re)
    }

    /// Damped frequency of the oscillatory pair, `Im s_1`.
    pub fn beta(&self) -> Option<f64> {
        self.oscillatory.then(|| self.roots[0].im)
    }

    /// Decay rate of the real root, `-s_3`.
    pub fn gamma(&self) -> Option<f64> {
        self.oscillatory.then(|| -self.roots[2].re)
    }

    /// Real part of `Σ_j R_j w_j(s_j)`; the imaginary parts of conjugate terms cancel.
    pub(crate) fn modal_sum(&self, weight: impl Fn(Complex64) -> Complex64) -> f64 {
        let mut total = Complex64::new(0.0, 0.0);
        let mut magnitude = 0.0;
        for (r, &s) in self.residues.iter().zip(&self.roots) {
            let term = r * weight(s);
            magnitude += term.norm();
            total += term;
        }
        debug_assert!(
            total.im.abs() <= 1e-10 * magnitude + 1e-12,
            "modal sum left an imaginary part {} (scale {magnitude})",
            total.im
        );
        total.re
    }

    /// `h(t) = Σ R_j e^{s_j t}`.
    pub fn impulse_response(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.modal_sum(|s| (s * t).exp()))
    }

    /// `h'(t) = Σ R_j s_j e^{s_j t}`.
    pub fn impulse_response_derivative(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.modal_sum(|s| s * (s * t).exp()))
    }

    /// `h''(t) = Σ R_j s_j^2 e^{s_j t}`.
    pub fn impulse_response_second_derivative(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.modal_sum(|s| s * s * (s * t).exp()))
    }
}

pub(crate) fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            t,
            domain: "[0, inf)".into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn params(m: f64, c: f64, k: f64, mu: f64) -> OscillatorParams {
        OscillatorParams::new(m, c, k, mu).unwrap()
    }

    #[test]
    fn polynomial_coefficients() {
        assert_eq!(
            characteristic_poly(&params(1.0, 0.0, 1.0, 2.0)).coefficients(),
            [1.0, 2.0, 1.0, 2.0]
        );
        assert_eq!(
            characteristic_poly(&params(1.0, 0.5, 4.0, 2.0)).coefficients(),
            [1.0, 2.0, 5.0, 8.0]
        );
    }

    #[test]
    fn polynomial_matches_cleared_characteristic_function() {
        let p = params(1.3, 0.7, 2.2, 3.1);
        let poly = characteristic_poly(&p);
        for s in [Complex64::new(0.4, 1.1), Complex64::new(-2.0, 0.3), Complex64::new(5.0, 0.0)] {
            let d = s * s * p.m() + s * (p.c() * p.mu()) / (s + p.mu()) + p.k();
            assert!(((s + p.mu()) * d - poly.eval(s)).norm() < 1e-12 * poly.eval(s).norm().max(1.0));
        }
    }

    #[test]
    fn undamped_factored_case() {
        let eig = solve_eigen(&params(1.0, 0.0, 1.0, 2.0)).unwrap();
        assert!(eig.is_oscillatory());
        let [s1, s2, s3] = eig.roots();
        assert_abs_diff_eq!(s1.re, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s1.im, 1.0, epsilon = 1e-14);
        assert_eq!(s2, s1.conj());
        assert_abs_diff_eq!(s3.re, -2.0, epsilon = 1e-14);
        let [r1, r2, r3] = eig.residues();
        assert_abs_diff_eq!(r1.re, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r1.im, -0.5, epsilon = 1e-14);
        assert_eq!(r2, r1.conj());
        assert_abs_diff_eq!(r3.norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(eig.impulse_response(PI / 2.0).unwrap(), 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(eig.impulse_response_derivative(0.0).unwrap(), 1.0, epsilon = 1e-13);
    }

    #[test]
    fn reference_case_identities() {
        let p = params(1.0, 0.5, 4.0, 2.0);
        let poly = characteristic_poly(&p);
        let eig = solve_eigen(&p).unwrap();
        assert!(eig.is_oscillatory());
        for s in eig.roots() {
            assert!(poly.eval(s).norm() < 1e-10);
            assert!(s.re < 0.0);
        }
        let sum: Complex64 = eig.residues().iter().sum();
        let first: Complex64 = eig.residues().iter().zip(eig.roots()).map(|(r, s)| r * s).sum();
        assert!(sum.norm() < 1e-12);
        assert!((first - 1.0).norm() < 1e-12);
        assert!(eig.impulse_response(0.0).unwrap().abs() < 1e-14);
    }

    #[test]
    fn derivative_matches_central_difference() {
        let eig = solve_eigen(&params(1.0, 0.5, 4.0, 2.0)).unwrap();
        let step = 1e-5;
        let fd = (eig.impulse_response(0.7 + step).unwrap()
            - eig.impulse_response(0.7 - step).unwrap())
            / (2.0 * step);
        assert_abs_diff_eq!(eig.impulse_response_derivative(0.7).unwrap(), fd, epsilon = 1e-6);
    }

    #[test]
    fn viscous_limit() {
        let eig = solve_eigen(&params(1.0, 1.0, 1.0, 1e6)).unwrap();
        let s1 = eig.roots()[0];
        let exact = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
        assert!((s1 - exact).norm() / exact.norm() < 1e-2);
    }

    #[test]
    fn three_real_roots_sorted() {
        // heavy damping with a slow kernel: overdamped pair plus the real root
        let eig = solve_eigen(&params(1.0, 10.0, 1.0, 50.0)).unwrap();
        assert!(!eig.is_oscillatory());
        let r = eig.roots();
        assert!(r[0].re > r[1].re && r[1].re > r[2].re);
        assert!(r.iter().all(|s| s.im == 0.0 && s.re < 0.0));
        assert_eq!(eig.alpha(), None);
        let sum: f64 = eig.residues().iter().map(|r| r.re).sum();
        assert!(sum.abs() < 1e-10);
    }

    #[test]
    fn repeated_roots_rejected() {
        // p = (s + 1)^2 (s + 2): mu = 4, k = 1/2, c = 9/8
        let err = solve_eigen(&params(1.0, 1.125, 0.5, 4.0)).unwrap_err();
        assert!(matches!(err, Error::DegenerateSpectrum(..)));
        // p = (s + 1)^3: mu = 3, k = 1/3, c = 8/9
        let err = solve_eigen(&params(1.0, 8.0 / 9.0, 1.0 / 3.0, 3.0)).unwrap_err();
        assert!(matches!(err, Error::DegenerateSpectrum(..)));
    }

    #[test]
    fn negative_time_rejected() {
        let eig = solve_eigen(&params(1.0, 0.5, 4.0, 2.0)).unwrap();
        assert!(eig.impulse_response(-1.0).is_err());
        assert!(eig.impulse_response_derivative(f64::NAN).is_err());
    }
}
