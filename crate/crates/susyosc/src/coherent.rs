//! su(1,1) coherent states of the singular oscillator: discrete-basis
//! coefficients, coordinate representation, overlaps, the resolution of
//! unity on the unit disc, and the holomorphic inner product.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::oscillator::{BasisVector, LadderOp, OscillatorParams};
use crate::quadrature::{integrate_disc, integrate_halfline, DiscIntegral, HalfLineParams};
use crate::special::log_gamma;

/// Point of the unit disc labelling a coherent state; `z = 0` is the
/// vacuum. `|z| < 1` strictly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentLabel {
    z: Complex64,
}

impl CoherentLabel {
    pub fn new(z: Complex64) -> Result<Self> {
        if !(z.norm() < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "coherent label must lie strictly inside the unit disc, got |z| = {}",
                z.norm()
            )));
        }
        Ok(CoherentLabel { z })
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }
}

/// Truncated coefficient expansion of a coherent state, with the norm
/// mass lost to the truncation.
#[derive(Debug, Clone)]
pub struct CoherentExpansion {
    pub vector: BasisVector,
    pub tail_mass: f64,
}

/// `sqrt(Γ(2k+n) / (n! Γ(2k)))`, the monomial weight of the coherent
/// series and of the holomorphic representation.
pub fn basis_weight(k: f64, n: usize) -> f64 {
    let nf = n as f64;
    (0.5 * (log_gamma(2.0 * k + nf).expect("2k+n > 0")
        - log_gamma(nf + 1.0).unwrap()
        - log_gamma(2.0 * k).expect("2k > 0")))
    .exp()
}

/// Single closed-form coefficient `<n|z> = (1-z z̄)^k w_n z^n`; exact at
/// any `|z| < 1`, free of truncation concerns.
pub fn coherent_coefficient(k: f64, n: usize, z: Complex64) -> Complex64 {
    let envelope = (1.0 - z.norm_sqr()).powf(k);
    envelope * basis_weight(k, n) * z.powu(n as u32)
}

/// Coefficients `c_n = (1-z z̄)^k [Γ(2k+n)/(n! Γ(2k))]^{1/2} z^n`
/// truncated at the basis dimension.
///
/// The series path is restricted to `|z| <= 0.9`: beyond that the
/// geometric tail decays too slowly for the default truncations, while
/// the coordinate path ([`coherent_wavefunction`]) stays exact.
pub fn coherent_coefficients(
    params: &OscillatorParams,
    label: CoherentLabel,
) -> Result<CoherentExpansion> {
    let z = label.z();
    if z.norm() > 0.9 {
        return Err(Error::InvalidParameter(format!(
            "|z| = {} too close to the disc boundary for the truncated series path (limit 0.9)",
            z.norm()
        )));
    }
    let k = params.k();
    let dim = params.basis_dim();
    let envelope = (1.0 - z.norm_sqr()).powf(k);
    let mut coeffs = Vec::with_capacity(dim);
    let mut zn = Complex64::new(1.0, 0.0);
    let mut captured = 0.0;
    for n in 0..dim {
        let c = envelope * basis_weight(k, n) * zn;
        captured += c.norm_sqr();
        coeffs.push(c);
        zn *= z;
    }
    Ok(CoherentExpansion {
        vector: BasisVector::from_coeffs(coeffs),
        tail_mass: (1.0 - captured).max(0.0),
    })
}

/// A complex-valued half-line function with analytic value/derivative
/// channels; the coordinate face of a coherent state.
#[derive(Clone)]
pub struct ComplexWavefunction {
    pub grid: Arc<Vec<f64>>,
    pub values: Vec<Complex64>,
    pub label: String,
    pub origin_exponent: f64,
    value_fn: Arc<dyn Fn(f64) -> Complex64 + Send + Sync>,
    deriv_fn: Arc<dyn Fn(f64) -> Complex64 + Send + Sync>,
}

impl std::fmt::Debug for ComplexWavefunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ComplexWavefunction")
            .field("label", &self.label)
            .field("grid_len", &self.grid.len())
            .finish()
    }
}

impl ComplexWavefunction {
    pub fn value(&self, x: f64) -> Complex64 {
        (self.value_fn)(x)
    }

    pub fn derivative(&self, x: f64) -> Complex64 {
        (self.deriv_fn)(x)
    }
}

/// Coordinate representation
/// `ψ_z(x) = 2^{1/2-k} Γ^{-1/2}(2k) (1-z)^{-2k} (1-z z̄)^k x^{2k-1/2}
/// exp[-(1+z) x² / (4(1-z))]`.
///
/// Principal branch of `(1-z)^{-2k}`: `1-z` has positive real part on
/// the disc, so the branch cut is never crossed.
pub fn coherent_wavefunction(
    params: &OscillatorParams,
    label: CoherentLabel,
) -> Result<ComplexWavefunction> {
    let z = label.z();
    let k = params.k();
    let one = Complex64::new(1.0, 0.0);
    let prefactor = ((0.5 - k) * std::f64::consts::LN_2 - 0.5 * log_gamma(2.0 * k)?).exp()
        * (one - z).powf(-2.0 * k)
        * (1.0 - z.norm_sqr()).powf(k);
    // Gaussian width: -(1+z)/(4(1-z)); its real part is negative on the
    // disc, so the state decays.
    let width = -(one + z) / ((one - z) * 4.0);
    let rho = 2.0 * k - 0.5;
    let value = move |x: f64| prefactor * x.powf(rho) * (width * x * x).exp();
    let deriv = move |x: f64| value(x) * (Complex64::new(rho / x, 0.0) + 2.0 * width * x);
    let grid = params.default_grid();
    let values = grid.iter().map(|&x| value(x)).collect();
    Ok(ComplexWavefunction {
        grid,
        values,
        label: format!("psi_z({z})"),
        origin_exponent: rho,
        value_fn: Arc::new(value),
        deriv_fn: Arc::new(deriv),
    })
}

/// Closed-form overlap
/// `<z1|z2> = (1-|z1|²)^k (1-|z2|²)^k (1 - z̄1 z2)^{-2k}`.
///
/// Derived by summing the coefficient series; the series sum is the
/// ground truth the tests hold it to.
pub fn coherent_overlap(
    params: &OscillatorParams,
    z1: CoherentLabel,
    z2: CoherentLabel,
) -> Complex64 {
    let k = params.k();
    let a = (1.0 - z1.z().norm_sqr()).powf(k);
    let b = (1.0 - z2.z().norm_sqr()).powf(k);
    let cross = (Complex64::new(1.0, 0.0) - z1.z().conj() * z2.z()).powf(-2.0 * k);
    a * b * cross
}

/// One matrix element `∫ <m|z><z|n> dμ(z)` of the resolution of unity;
/// the contract is `δ_mn`.
pub fn resolution_check(params: &OscillatorParams, m: usize, n: usize) -> Result<DiscIntegral> {
    let k = params.k();
    integrate_disc(
        move |z| coherent_coefficient(k, m, z) * coherent_coefficient(k, n, z).conj(),
        k,
        1e-9,
    )
}

/// Holomorphic-space inner product
/// `∫ e^{-f} conj(ψ1(z)) ψ2(z) dμ(z)` with `e^{-f} = (1-z z̄)^{2k}` and
/// `ψ_i(z) = Σ C_n w_n z^n`; the contract is the coefficient inner
/// product `Σ conj(C_n) C'_n`.
pub fn holomorphic_inner(
    params: &OscillatorParams,
    f1: &BasisVector,
    f2: &BasisVector,
) -> Result<DiscIntegral> {
    if f1.dim() != f2.dim() {
        return Err(Error::DimensionMismatch(format!(
            "holomorphic factors: {} vs {}",
            f1.dim(),
            f2.dim()
        )));
    }
    let k = params.k();
    let dim = f1.dim();
    let w: Vec<f64> = (0..dim).map(|n| basis_weight(k, n)).collect();
    let c1 = f1.coeffs.clone();
    let c2 = f2.coeffs.clone();
    let g = move |z: Complex64| {
        let mut p1 = Complex64::new(0.0, 0.0);
        let mut p2 = Complex64::new(0.0, 0.0);
        let mut zn = Complex64::new(1.0, 0.0);
        for n in 0..dim {
            p1 += c1[n] * w[n] * zn;
            p2 += c2[n] * w[n] * zn;
            zn *= z;
        }
        (1.0 - z.norm_sqr()).powf(2.0 * k) * p1.conj() * p2
    };
    integrate_disc(g, k, 1e-9)
}

/// Residual of the displacement-operator relation
/// `(k_- - 2kz - z² k_+) |z> = 0` in truncated coefficients; returns the
/// worst coefficient magnitude (bounded by the truncation tail).
pub fn displacement_residual(params: &OscillatorParams, label: CoherentLabel) -> Result<f64> {
    let expansion = coherent_coefficients(params, label)?;
    let v = &expansion.vector;
    let z = label.z();
    let lowered = params.ladder_apply(LadderOp::Lower, v)?.vector;
    let raised = params.ladder_apply(LadderOp::Raise, v)?.vector;
    let k = params.k();
    let dim = v.dim();
    let mut worst = 0.0f64;
    // The top two coefficients feel the raise truncation; skip them.
    for n in 0..dim.saturating_sub(2) {
        let r = lowered.coeffs[n] - 2.0 * k * z * v.coeffs[n] - z * z * raised.coeffs[n];
        worst = worst.max(r.norm());
    }
    Ok(worst)
}

/// Synthesizes `Σ c_n ψ_n(x)` with one Laguerre recurrence sweep per
/// evaluation point.
pub struct SeriesSynthesizer {
    k: f64,
    /// c_n times the eigenfunction normalization.
    merged: Vec<Complex64>,
}

impl SeriesSynthesizer {
    pub fn new(params: &OscillatorParams, coeffs: &BasisVector) -> Result<Self> {
        let k = params.k();
        let merged = coeffs
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| {
                let nf = n as f64;
                let ln_norm = 0.5
                    * (log_gamma(nf + 1.0)? + (1.0 - 2.0 * k) * std::f64::consts::LN_2
                        - log_gamma(nf + 2.0 * k)?);
                Ok(c * ln_norm.exp())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SeriesSynthesizer { k, merged })
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let k = self.k;
        let t = x * x / 2.0;
        let a = 2.0 * k - 1.0;
        let env = x.powf(2.0 * k - 0.5) * (-x * x / 4.0).exp();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut prev = 1.0f64; // L_0
        let mut cur = 1.0 + a - t; // L_1
        for (n, c) in self.merged.iter().enumerate() {
            let l_n = match n {
                0 => 1.0,
                1 => cur,
                _ => {
                    let jf = (n - 1) as f64;
                    let next = ((2.0 * jf + 1.0 + a - t) * cur - (jf + a) * prev) / (jf + 1.0);
                    prev = cur;
                    cur = next;
                    next
                }
            };
            sum += c * l_n;
        }
        sum * env
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::inner_product;
    use crate::quadrature::radial_reference;

    fn label(re: f64, im: f64) -> CoherentLabel {
        CoherentLabel::new(Complex64::new(re, im)).unwrap()
    }

    #[test]
    fn label_rejects_boundary() {
        assert!(CoherentLabel::new(Complex64::new(1.0, 0.0)).is_err());
        assert!(CoherentLabel::new(Complex64::new(0.8, 0.7)).is_err());
        assert!(CoherentLabel::new(Complex64::new(0.0, 0.0)).is_ok());
    }

    #[test]
    fn vacuum_coefficients() {
        let p = OscillatorParams::from_k(1.3, 10).unwrap();
        let e = coherent_coefficients(&p, label(0.0, 0.0)).unwrap();
        assert_eq!(e.vector.coeffs[0], Complex64::new(1.0, 0.0));
        assert!(e.vector.coeffs[1..].iter().all(|c| c.norm() == 0.0));
        assert!(e.tail_mass.abs() < 1e-15);
    }

    #[test]
    fn coefficient_ratio_fixes_normalization() {
        // c_1 / c_0 = sqrt(2k) z.
        let p = OscillatorParams::from_k(0.95, 8).unwrap();
        let z = Complex64::new(0.21, -0.34);
        let e = coherent_coefficients(&p, CoherentLabel::new(z).unwrap()).unwrap();
        let ratio = e.vector.coeffs[1] / e.vector.coeffs[0];
        let want = (2.0 * p.k()).sqrt() * z;
        assert!((ratio - want).norm() < 1e-14);
    }

    #[test]
    fn coefficients_normalize_to_unity() {
        let p = OscillatorParams::from_k(1.2, 80).unwrap();
        let e = coherent_coefficients(&p, label(0.45, -0.35)).unwrap();
        assert!(
            e.tail_mass < 1e-12,
            "tail mass {} too large at N=80",
            e.tail_mass
        );
        assert!((e.vector.norm_sqr() + e.tail_mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn series_path_rejects_near_boundary() {
        let p = OscillatorParams::from_k(1.2, 80).unwrap();
        assert!(coherent_coefficients(&p, label(0.95, 0.0)).is_err());
        // Coordinate path still fine there.
        assert!(coherent_wavefunction(&p, label(0.95, 0.0)).is_ok());
    }

    #[test]
    fn vacuum_wavefunction_is_ground_state() {
        let p = OscillatorParams::from_k(1.45, 8).unwrap();
        let wz = coherent_wavefunction(&p, label(0.0, 0.0)).unwrap();
        let psi0 = p.eigenfunction(0).unwrap();
        for &x in &[0.2, 0.9, 2.1, 4.4] {
            let a = wz.value(x);
            let b = psi0.value(x);
            assert!((a.re - b).abs() < 1e-13 * b.abs().max(1e-6) && a.im.abs() < 1e-15);
        }
    }

    #[test]
    fn coherent_state_unit_norm_by_quadrature() {
        let p = OscillatorParams::from_k(1.1, 8).unwrap();
        let wz = coherent_wavefunction(&p, label(0.3, 0.4)).unwrap();
        let norm = integrate_halfline(
            |x| wz.value(x).norm_sqr(),
            &HalfLineParams::new(2.0 * wz.origin_exponent).with_tolerance(1e-11),
        )
        .unwrap();
        assert!((norm.value - 1.0).abs() < 1e-10, "{}", norm.value);
    }

    #[test]
    fn coordinate_form_matches_series_synthesis() {
        let p = OscillatorParams::from_k(1.3, 80).unwrap();
        for &(re, im) in &[(0.3, 0.0), (0.0, 0.55), (-0.42, 0.38), (0.6, 0.0)] {
            let l = label(re, im);
            let closed = coherent_wavefunction(&p, l).unwrap();
            let series =
                SeriesSynthesizer::new(&p, &coherent_coefficients(&p, l).unwrap().vector).unwrap();
            for i in (0..closed.grid.len()).step_by(97) {
                let x = closed.grid[i];
                let d = (closed.value(x) - series.eval(x)).norm();
                assert!(d <= 1e-8, "z=({re},{im}) x={x}: deviation {d}");
            }
        }
    }

    #[test]
    fn overlap_closed_form_against_series() {
        let p = OscillatorParams::from_k(0.8, 120).unwrap();
        let cases = [
            ((0.3, 0.1), (0.3, 0.1)),
            ((0.0, 0.0), (0.5, -0.2)),
            ((0.37, -0.41), (-0.12, 0.6)),
            ((-0.5, 0.3), (0.44, 0.21)),
        ];
        for ((a, b), (c, d)) in cases {
            let z1 = label(a, b);
            let z2 = label(c, d);
            let closed = coherent_overlap(&p, z1, z2);
            let v1 = coherent_coefficients(&p, z1).unwrap().vector;
            let v2 = coherent_coefficients(&p, z2).unwrap().vector;
            let series = v1.dot(&v2);
            assert!(
                (closed - series).norm() < 1e-10,
                "closed {closed} vs series {series}"
            );
        }
        // Same label: unit normalization.
        let z = label(0.52, -0.17);
        assert!((coherent_overlap(&p, z, z) - Complex64::new(1.0, 0.0)).norm() < 1e-13);
        // Against the vacuum: the n = 0 series term.
        let z2 = label(0.33, 0.21);
        let want = (1.0 - z2.z().norm_sqr()).powf(p.k());
        assert!((coherent_overlap(&p, label(0.0, 0.0), z2) - want).norm() < 1e-13);
    }

    #[test]
    fn resolution_of_unity_entries() {
        let p = OscillatorParams::from_k(1.2, 16).unwrap();
        let r00 = resolution_check(&p, 0, 0).unwrap();
        assert!((r00.value.re - 1.0).abs() < 1e-8 && r00.value.im.abs() < 1e-10);
        let r01 = resolution_check(&p, 0, 1).unwrap();
        assert!(r01.value.norm() < 1e-10);
        let r44 = resolution_check(&p, 4, 4).unwrap();
        assert!((r44.value.re - 1.0).abs() < 1e-6, "{}", r44.value.re);
    }

    #[test]
    fn resolution_diagonal_against_independent_radial_reference() {
        // After the exact angular average the (n, n) entry reduces to
        // (2k-1) w_n² ∫ (1-t)^{2k-2} t^n dt; check the disc rule against
        // the tanh-sinh path.
        let p = OscillatorParams::from_k(1.2, 16).unwrap();
        let k = p.k();
        for n in [0usize, 3, 7] {
            let disc = resolution_check(&p, n, n).unwrap().value.re;
            let w = basis_weight(k, n);
            let oned = radial_reference(k, |t| w * w * t.powi(n as i32), 1e-12).unwrap();
            assert!(
                (disc - oned).abs() < 1e-8,
                "n={n}: disc {disc} vs reference {oned}"
            );
        }
    }

    #[test]
    fn resolution_rejects_small_k() {
        let p = OscillatorParams::from_k(0.5, 8).unwrap();
        assert!(resolution_check(&p, 0, 0).is_err());
    }

    #[test]
    fn holomorphic_inner_basis_cases() {
        let p = OscillatorParams::from_k(0.9, 8).unwrap();
        let e0 = BasisVector::basis_state(0, 8);
        let e1 = BasisVector::basis_state(1, 8);
        let e3 = BasisVector::basis_state(3, 8);
        let v = holomorphic_inner(&p, &e0, &e0).unwrap().value;
        assert!((v.re - 1.0).abs() < 1e-8 && v.im.abs() < 1e-10);
        let v = holomorphic_inner(&p, &e0, &e1).unwrap().value;
        assert!(v.norm() < 1e-10);
        let v = holomorphic_inner(&p, &e3, &e3).unwrap().value;
        assert!((v.re - 1.0).abs() < 1e-6);
    }

    #[test]
    fn displacement_relation_annihilates_coherent_state() {
        let p = OscillatorParams::from_k(1.35, 80).unwrap();
        for &(re, im) in &[(0.5, 0.0), (0.2, -0.45), (-0.3, 0.3)] {
            let r = displacement_residual(&p, label(re, im)).unwrap();
            assert!(r < 1e-12, "z=({re},{im}): residual {r}");
        }
    }

    #[test]
    fn synthesizer_reproduces_single_eigenfunction() {
        let p = OscillatorParams::from_k(1.05, 8).unwrap();
        let s = SeriesSynthesizer::new(&p, &BasisVector::basis_state(3, 8)).unwrap();
        let psi3 = p.eigenfunction(3).unwrap();
        for &x in &[0.4, 1.3, 3.0] {
            assert!((s.eval(x).re - psi3.value(x)).abs() < 1e-13);
        }
        let w1 = p.eigenfunction(1).unwrap();
        let n = inner_product(&w1, &w1, 1e-10).unwrap();
        assert!((n.value - 1.0).abs() < 1e-9);
    }
}
