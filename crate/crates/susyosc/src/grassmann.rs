//! Exact arithmetic in the four-dimensional Grassmann algebra on two
//! generators `α`, `ᾱ` with `α² = ᾱ² = αᾱ + ᾱα = 0`, the
//! order-preserving conjugation `conj(βv) = conj(β) conj(v)`, and
//! Berezin integration.
//!
//! Elements are stored in the ordered basis `{1, α, ᾱ, ᾱα}`; every
//! product is reduced to this normal form with explicit signs, so the
//! full multiplication table is finite and brute-force testable. The
//! same kernel serves both generator pairs of the superspace
//! construction (state-space `θ, θ̄` and coefficient-space `α, ᾱ`);
//! instances never mix because the θ-degree is kept structural, not
//! stored.

use num_complex::Complex64;

/// Basis index of the unit element.
pub const B_ONE: usize = 0;
/// Basis index of the generator `α`.
pub const B_ALPHA: usize = 1;
/// Basis index of the conjugate generator `ᾱ`.
pub const B_ALPHA_BAR: usize = 2;
/// Basis index of the top element `ᾱα`.
pub const B_TOP: usize = 3;

/// Element of the 4-dimensional Grassmann algebra with complex
/// coefficients in the ordered basis `{1, α, ᾱ, ᾱα}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Supernumber {
    pub c: [Complex64; 4],
}

/// Parity of a supernumber under the even/odd grading.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

impl Supernumber {
    pub const fn zero() -> Self {
        Supernumber {
            c: [Complex64::new(0.0, 0.0); 4],
        }
    }

    pub fn one() -> Self {
        Supernumber::from_complex(Complex64::new(1.0, 0.0))
    }

    pub fn from_complex(v: Complex64) -> Self {
        let mut s = Supernumber::zero();
        s.c[B_ONE] = v;
        s
    }

    pub fn from_real(v: f64) -> Self {
        Supernumber::from_complex(Complex64::new(v, 0.0))
    }

    /// The generator `α`.
    pub fn alpha() -> Self {
        Supernumber::basis(B_ALPHA)
    }

    /// The conjugate generator `ᾱ`.
    pub fn alpha_bar() -> Self {
        Supernumber::basis(B_ALPHA_BAR)
    }

    /// The top element `ᾱα`.
    pub fn top() -> Self {
        Supernumber::basis(B_TOP)
    }

    pub fn basis(i: usize) -> Self {
        let mut s = Supernumber::zero();
        s.c[i] = Complex64::new(1.0, 0.0);
        s
    }

    /// General odd element `a α + b ᾱ`.
    pub fn odd(a: Complex64, b: Complex64) -> Self {
        let mut s = Supernumber::zero();
        s.c[B_ALPHA] = a;
        s.c[B_ALPHA_BAR] = b;
        s
    }

    /// Product in normal form. The only sign-bearing reductions are
    /// `α·ᾱ = -ᾱα` and `ᾱ·α = +ᾱα`; everything containing a repeated
    /// generator vanishes.
    pub fn mul(&self, other: &Supernumber) -> Supernumber {
        let a = &self.c;
        let b = &other.c;
        let mut c = [Complex64::new(0.0, 0.0); 4];
        c[B_ONE] = a[B_ONE] * b[B_ONE];
        c[B_ALPHA] = a[B_ONE] * b[B_ALPHA] + a[B_ALPHA] * b[B_ONE];
        c[B_ALPHA_BAR] = a[B_ONE] * b[B_ALPHA_BAR] + a[B_ALPHA_BAR] * b[B_ONE];
        c[B_TOP] = a[B_ONE] * b[B_TOP] + a[B_TOP] * b[B_ONE] - a[B_ALPHA] * b[B_ALPHA_BAR]
            + a[B_ALPHA_BAR] * b[B_ALPHA];
        Supernumber { c }
    }

    /// Order-preserving conjugation: coefficients conjugate, `α ↔ ᾱ`
    /// swap, and `conj(ᾱα) = αᾱ = -ᾱα`. A multiplicative homomorphism,
    /// unlike the order-reversing convention.
    pub fn conj(&self) -> Supernumber {
        Supernumber {
            c: [
                self.c[B_ONE].conj(),
                self.c[B_ALPHA_BAR].conj(),
                self.c[B_ALPHA].conj(),
                -self.c[B_TOP].conj(),
            ],
        }
    }

    /// Berezin integral `∫ · dα dᾱ` normalized by `∫ ᾱα dα dᾱ = 1`:
    /// extracts the top coefficient.
    pub fn berezin(&self) -> Complex64 {
        self.c[B_TOP]
    }

    pub fn parity(&self) -> Parity {
        let even_zero = self.c[B_ONE].norm() == 0.0 && self.c[B_TOP].norm() == 0.0;
        let odd_zero = self.c[B_ALPHA].norm() == 0.0 && self.c[B_ALPHA_BAR].norm() == 0.0;
        if odd_zero {
            Parity::Even
        } else if even_zero {
            Parity::Odd
        } else {
            Parity::Mixed
        }
    }

    pub fn even_part(&self) -> Supernumber {
        let mut s = Supernumber::zero();
        s.c[B_ONE] = self.c[B_ONE];
        s.c[B_TOP] = self.c[B_TOP];
        s
    }

    pub fn odd_part(&self) -> Supernumber {
        let mut s = Supernumber::zero();
        s.c[B_ALPHA] = self.c[B_ALPHA];
        s.c[B_ALPHA_BAR] = self.c[B_ALPHA_BAR];
        s
    }

    /// Grade involution `β_even - β_odd`; the sign a homogeneous odd
    /// vector imposes on a coefficient passing the pairing.
    pub fn grade_flip(&self) -> Supernumber {
        let mut s = *self;
        s.c[B_ALPHA] = -s.c[B_ALPHA];
        s.c[B_ALPHA_BAR] = -s.c[B_ALPHA_BAR];
        s
    }

    pub fn add(&self, other: &Supernumber) -> Supernumber {
        let mut s = Supernumber::zero();
        for i in 0..4 {
            s.c[i] = self.c[i] + other.c[i];
        }
        s
    }

    pub fn sub(&self, other: &Supernumber) -> Supernumber {
        let mut s = Supernumber::zero();
        for i in 0..4 {
            s.c[i] = self.c[i] - other.c[i];
        }
        s
    }

    pub fn neg(&self) -> Supernumber {
        let mut s = Supernumber::zero();
        for i in 0..4 {
            s.c[i] = -self.c[i];
        }
        s
    }

    pub fn scale(&self, f: Complex64) -> Supernumber {
        let mut s = Supernumber::zero();
        for i in 0..4 {
            s.c[i] = self.c[i] * f;
        }
        s
    }

    /// Largest coefficient magnitude; the residual norm used by the
    /// exactness checks.
    pub fn max_abs(&self) -> f64 {
        self.c.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|v| v.norm() == 0.0)
    }
}

impl std::fmt::Display for Supernumber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({}) + ({})·α + ({})·ᾱ + ({})·ᾱα",
            self.c[0], self.c[1], self.c[2], self.c[3]
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn generator_products() {
        let a = Supernumber::alpha();
        let ab = Supernumber::alpha_bar();
        // α·ᾱ = -ᾱα.
        assert_eq!(a.mul(&ab), Supernumber::top().neg());
        // ᾱ·α = +ᾱα.
        assert_eq!(ab.mul(&a), Supernumber::top());
        // Nilpotency.
        assert!(a.mul(&a).is_zero());
        assert!(ab.mul(&ab).is_zero());
        assert!(Supernumber::top().mul(&Supernumber::top()).is_zero());
        assert!(a.mul(&Supernumber::top()).is_zero());
        assert!(Supernumber::top().mul(&a).is_zero());
    }

    #[test]
    fn nilpotency_of_odd_elements() {
        let beta = Supernumber::odd(c(1.3, -0.4), c(0.2, 2.2));
        assert!(beta.mul(&beta).is_zero());
    }

    #[test]
    fn even_elements_with_top_square_nicely() {
        // (1 + ᾱα)(1 - ᾱα) = 1 since (ᾱα)² = 0.
        let plus = Supernumber::one().add(&Supernumber::top());
        let minus = Supernumber::one().sub(&Supernumber::top());
        assert_eq!(plus.mul(&minus), Supernumber::one());
    }

    #[test]
    fn berezin_rules() {
        assert_eq!(Supernumber::top().berezin(), c(1.0, 0.0));
        assert_eq!(Supernumber::one().berezin(), c(0.0, 0.0));
        assert_eq!(Supernumber::alpha().berezin(), c(0.0, 0.0));
        // ∫ αᾱ dα dᾱ = -1 after reduction to normal order.
        let a = Supernumber::alpha();
        let ab = Supernumber::alpha_bar();
        assert_eq!(a.mul(&ab).berezin(), c(-1.0, 0.0));
    }

    #[test]
    fn parity_classification() {
        assert_eq!(Supernumber::alpha().parity(), Parity::Odd);
        assert_eq!(
            Supernumber::one().add(&Supernumber::top()).parity(),
            Parity::Even
        );
        assert_eq!(
            Supernumber::one().add(&Supernumber::alpha()).parity(),
            Parity::Mixed
        );
        assert_eq!(Supernumber::zero().parity(), Parity::Even);
    }

    #[test]
    fn normalization_factor_is_self_conjugate() {
        // N = 1 + (i/2) ᾱα satisfies conj(N) = N.
        let n = Supernumber::one().add(&Supernumber::top().scale(c(0.0, 0.5)));
        assert_eq!(n.conj(), n);
        // iᾱα self-conjugate, ᾱα anti-self-conjugate.
        let itop = Supernumber::top().scale(c(0.0, 1.0));
        assert_eq!(itop.conj(), itop);
        assert_eq!(Supernumber::top().conj(), Supernumber::top().neg());
    }

    #[test]
    fn conjugation_of_top_preserves_order() {
        // conj(ᾱα) = conj(ᾱ)·conj(α) = αᾱ = -ᾱα.
        let lhs = Supernumber::top().conj();
        let rhs = Supernumber::alpha().mul(&Supernumber::alpha_bar());
        assert_eq!(lhs, rhs);
    }

    fn arb_supernumber() -> impl Strategy<Value = Supernumber> {
        proptest::array::uniform8(-5.0f64..5.0).prop_map(|v| Supernumber {
            c: [c(v[0], v[1]), c(v[2], v[3]), c(v[4], v[5]), c(v[6], v[7])],
        })
    }

    fn close(a: &Supernumber, b: &Supernumber, tol: f64) -> bool {
        a.sub(b).max_abs() <= tol
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn associativity(a in arb_supernumber(), b in arb_supernumber(), d in arb_supernumber()) {
            let lhs = a.mul(&b).mul(&d);
            let rhs = a.mul(&b.mul(&d));
            prop_assert!(close(&lhs, &rhs, 1e-10));
        }

        #[test]
        fn distributivity(a in arb_supernumber(), b in arb_supernumber(), d in arb_supernumber()) {
            let lhs = a.mul(&b.add(&d));
            let rhs = a.mul(&b).add(&a.mul(&d));
            prop_assert!(close(&lhs, &rhs, 1e-10));
        }

        #[test]
        fn conjugation_is_involutive(a in arb_supernumber()) {
            prop_assert!(close(&a.conj().conj(), &a, 0.0));
        }

        #[test]
        fn conjugation_is_multiplicative(a in arb_supernumber(), b in arb_supernumber()) {
            // The order-preserving convention makes conj a homomorphism;
            // this is exactly what separates it from the reversal rule.
            let lhs = a.mul(&b).conj();
            let rhs = a.conj().mul(&b.conj());
            prop_assert!(close(&lhs, &rhs, 1e-10));
        }

        #[test]
        fn parity_grading_multiplicative(a in arb_supernumber(), b in arb_supernumber()) {
            let (ae, ao) = (a.even_part(), a.odd_part());
            let (be, bo) = (b.even_part(), b.odd_part());
            prop_assert!(ae.mul(&be).parity() != Parity::Odd || ae.mul(&be).is_zero());
            prop_assert!(ao.mul(&bo).parity() != Parity::Odd || ao.mul(&bo).is_zero());
            prop_assert!(ae.mul(&bo).parity() != Parity::Even || ae.mul(&bo).is_zero());
            prop_assert!(ao.mul(&be).parity() != Parity::Even || ao.mul(&be).is_zero());
        }
    }
}
