//! The super Hilbert space built from the oscillator tower and its
//! Darboux partner: superscalar product, superalgebra generators,
//! supercoherent states, the supermeasure resolution of identity, and
//! the superholomorphic representation.
//!
//! States live in the discrete basis: the even sector carries
//! coefficients on `ψ_n`, the odd sector on `θ φ_n` with `φ_n = L ψ_n`,
//! plus (exact regime only) a separate coefficient on `θ φ_{-1}`.
//! Because `L` maps the `ψ` basis onto the `φ` basis unitarily, every
//! generator acts by the same coefficient formulas on both sectors and
//! all superalgebra checks are exact to rounding. The `θ`-degree is
//! structural — even vector vs odd vector — never a stored Grassmann
//! number; coefficients take values in the four-dimensional Grassmann
//! algebra.
//!
//! Conventions fixed by the consistency checks in this module's tests
//! (and enforced by the acceptance suite):
//!
//! * pairing: `<v1|v2> = <ψ1|ψ2> + i <φ1|φ2>`, extended to Grassmann
//!   coefficients by
//!   `<β1 v|β2 w> = (-1)^{ε(v) ε(β2)} conj(β1) β2 <v|w>`;
//! * supermeasure: `i dα dᾱ dμ(z)` with `∫ ᾱα dα dᾱ = 1`;
//! * reproducing kernel: `<Ψ_z̄ᾱ|Ψ> = (1-z z̄)^k (1 - (i/2) ᾱα) Ψ(z, α)`
//!   — the i/2 is pinned numerically by
//!   [`reproducing_prefactor_residual`];
//! * holomorphic weight: `e^{-f} = (1 - i ᾱα)(1-z z̄)^{2k}`, the unique
//!   Grassmann ordering for which the superholomorphic inner product
//!   reduces to the pairing above.

use num_complex::Complex64;

use crate::coherent::{basis_weight, coherent_coefficient, coherent_coefficients, CoherentLabel};
use crate::darboux::{SusyRegime, TransformSpec};
use crate::error::{Error, Result};
use crate::grassmann::{Parity, Supernumber};
use crate::quadrature::{integrate_disc, DiscIntegral};

/// Even/odd coefficient pair with an optional exact-regime ground
/// sector; the homogeneous realization `Ψ = ψ + θφ` in coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Superstate {
    pub even: Vec<Supernumber>,
    pub odd: Vec<Supernumber>,
    /// Coefficient on `θ φ_{-1}`; `Some` only for exact-regime states.
    pub ground: Option<Supernumber>,
}

impl Superstate {
    pub fn zeros(dim: usize, with_ground: bool) -> Self {
        Superstate {
            even: vec![Supernumber::zero(); dim],
            odd: vec![Supernumber::zero(); dim],
            ground: if with_ground {
                Some(Supernumber::zero())
            } else {
                None
            },
        }
    }

    pub fn basis_even(n: usize, dim: usize) -> Self {
        let mut s = Self::zeros(dim, false);
        s.even[n] = Supernumber::one();
        s
    }

    pub fn basis_odd(n: usize, dim: usize) -> Self {
        let mut s = Self::zeros(dim, false);
        s.odd[n] = Supernumber::one();
        s
    }

    pub fn basis_ground(dim: usize) -> Self {
        let mut s = Self::zeros(dim, true);
        s.ground = Some(Supernumber::one());
        s
    }

    pub fn dim(&self) -> usize {
        self.even.len()
    }

    pub fn scale(&self, f: Complex64) -> Superstate {
        Superstate {
            even: self.even.iter().map(|c| c.scale(f)).collect(),
            odd: self.odd.iter().map(|c| c.scale(f)).collect(),
            ground: self.ground.map(|g| g.scale(f)),
        }
    }

    /// Left multiplication by a supernumber coefficient.
    pub fn left_mul(&self, beta: &Supernumber) -> Superstate {
        Superstate {
            even: self.even.iter().map(|c| beta.mul(c)).collect(),
            odd: self.odd.iter().map(|c| beta.mul(c)).collect(),
            ground: self.ground.map(|g| beta.mul(&g)),
        }
    }

    pub fn sub(&self, other: &Superstate) -> Superstate {
        Superstate {
            even: self
                .even
                .iter()
                .zip(&other.even)
                .map(|(a, b)| a.sub(b))
                .collect(),
            odd: self
                .odd
                .iter()
                .zip(&other.odd)
                .map(|(a, b)| a.sub(b))
                .collect(),
            ground: match (self.ground, other.ground) {
                (Some(a), Some(b)) => Some(a.sub(&b)),
                (Some(a), None) => Some(a),
                (None, Some(b)) => Some(b.neg()),
                (None, None) => None,
            },
        }
    }

    pub fn add(&self, other: &Superstate) -> Superstate {
        self.sub(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for c in self.even.iter().chain(self.odd.iter()) {
            m = m.max(c.max_abs());
        }
        if let Some(g) = self.ground {
            m = m.max(g.max_abs());
        }
        m
    }

    /// True when every coefficient is a plain complex number; the
    /// holomorphic representation requires it.
    pub fn has_complex_coefficients(&self) -> bool {
        let plain = |c: &Supernumber| {
            c.odd_part().is_zero() && c.c[crate::grassmann::B_TOP].norm() == 0.0
        };
        self.even.iter().all(plain)
            && self.odd.iter().all(plain)
            && self.ground.map_or(true, |g| plain(&g))
    }
}

/// Superscalar product `<s1|s2> = <ψ1|ψ2> + i <φ1|φ2>` extended
/// Λ₂-linearly with the graded sign rule
/// `<β1 v|β2 w> = (-1)^{ε(v) ε(β2)} conj(β1) β2 <v|w>`.
pub fn super_inner(s1: &Superstate, s2: &Superstate) -> Result<Supernumber> {
    if s1.dim() != s2.dim() {
        return Err(Error::DimensionMismatch(format!(
            "superstate truncations differ: {} vs {}",
            s1.dim(),
            s2.dim()
        )));
    }
    let i = Complex64::new(0.0, 1.0);
    let mut acc = Supernumber::zero();
    for (a, b) in s1.even.iter().zip(&s2.even) {
        acc = acc.add(&a.conj().mul(b));
    }
    for (a, b) in s1.odd.iter().zip(&s2.odd) {
        acc = acc.add(&a.conj().mul(&b.grade_flip()).scale(i));
    }
    if let (Some(a), Some(b)) = (s1.ground, s2.ground) {
        acc = acc.add(&a.conj().mul(&b.grade_flip()).scale(i));
    }
    Ok(acc)
}

/// Generators of the dynamical superalgebra, plus the parity operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    K0,
    KPlus,
    KMinus,
    QPlus,
    QMinus,
    Identity,
    B0,
}

impl Generator {
    /// Odd generators pick up a graded sign when passing a Grassmann
    /// coefficient: `Q(βv) = (-1)^{ε(β)} β Q(v)`.
    fn is_odd(&self) -> bool {
        matches!(self, Generator::QPlus | Generator::QMinus)
    }
}

/// Result of a generator application: the state plus any squared-norm
/// mass a raise pushed past the truncation.
#[derive(Debug, Clone)]
pub struct GeneratorResult {
    pub state: Superstate,
    pub truncation_loss: f64,
}

/// Applies a superalgebra generator in coefficient space.
///
/// The K family acts blockwise with the su(1,1) coefficient formulas on
/// both sectors (identical formulas because `L ψ_n = φ_n`); `Q_+` maps
/// the even sector into the odd one, `Q_-` back; the exact-regime
/// ground sector is annihilated by every generator — the superalgebra
/// representation on it is trivial.
pub fn apply_generator(
    spec: &TransformSpec,
    g: Generator,
    s: &Superstate,
) -> Result<GeneratorResult> {
    let k = spec.params().k();
    let dim = s.dim();
    let mut out = Superstate::zeros(dim, s.ground.is_some());
    let mut loss = 0.0f64;
    let pass = |c: &Supernumber| if g.is_odd() { c.grade_flip() } else { *c };
    match g {
        Generator::K0 => {
            for n in 0..dim {
                let f = Complex64::new(k + n as f64, 0.0);
                out.even[n] = s.even[n].scale(f);
                out.odd[n] = s.odd[n].scale(f);
            }
        }
        Generator::KPlus => {
            for n in 1..dim {
                let nf = n as f64;
                let f = Complex64::new((nf * (nf - 1.0 + 2.0 * k)).sqrt(), 0.0);
                out.even[n] = s.even[n - 1].scale(f);
                out.odd[n] = s.odd[n - 1].scale(f);
            }
            let nf = dim as f64;
            let top = nf * (nf - 1.0 + 2.0 * k);
            loss = (s.even[dim - 1].max_abs().powi(2) + s.odd[dim - 1].max_abs().powi(2)) * top;
        }
        Generator::KMinus => {
            for n in 0..dim.saturating_sub(1) {
                let nf = n as f64;
                let f = Complex64::new(((nf + 1.0) * (nf + 2.0 * k)).sqrt(), 0.0);
                out.even[n] = s.even[n + 1].scale(f);
                out.odd[n] = s.odd[n + 1].scale(f);
            }
        }
        Generator::QPlus => {
            for n in 0..dim {
                out.odd[n] = pass(&s.even[n]);
            }
        }
        Generator::QMinus => {
            for n in 0..dim {
                out.even[n] = pass(&s.odd[n]);
            }
        }
        Generator::Identity => {
            out.even.clone_from_slice(&s.even);
            out.odd.clone_from_slice(&s.odd);
        }
        Generator::B0 => {
            out.even.clone_from_slice(&s.even);
            for n in 0..dim {
                out.odd[n] = s.odd[n].neg();
            }
        }
    }
    // Ground sector untouched: it stays zero in `out` for every
    // generator (trivial subrepresentation).
    Ok(GeneratorResult {
        state: out,
        truncation_loss: loss,
    })
}

/// Label of a supercoherent state: a disc point and an odd Grassmann
/// displacement.
#[derive(Debug, Clone, Copy)]
pub struct SupercoherentLabel {
    z: CoherentLabel,
    alpha: Supernumber,
}

impl SupercoherentLabel {
    pub fn new(z: CoherentLabel, alpha: Supernumber) -> Result<Self> {
        if !(alpha.parity() == Parity::Odd || alpha.is_zero()) {
            return Err(Error::InvalidParameter(
                "supercoherent displacement must be an odd supernumber".into(),
            ));
        }
        Ok(SupercoherentLabel { z, alpha })
    }

    /// Label with `α = a · (odd generator)`.
    pub fn from_parts(z: Complex64, a: Complex64) -> Result<Self> {
        Self::new(CoherentLabel::new(z)?, Supernumber::alpha().scale(a))
    }

    pub fn z(&self) -> CoherentLabel {
        self.z
    }

    pub fn alpha(&self) -> Supernumber {
        self.alpha
    }

    /// `N = 1 + (i/2) conj(α) α`: self-conjugate, and `N α = α`.
    pub fn normalization(&self) -> Supernumber {
        let abar_a = self.alpha.conj().mul(&self.alpha);
        Supernumber::one().add(&abar_a.scale(Complex64::new(0.0, 0.5)))
    }
}

/// Supercoherent state `Ψ_{zα} = N (ψ_z - α θ φ_z)` in coefficients:
/// even sector `N c_n(z)`, odd sector `-N α c_n(z) = -α c_n(z)`.
pub fn supercoherent_state(spec: &TransformSpec, label: &SupercoherentLabel) -> Result<Superstate> {
    if spec.regime() == SusyRegime::Invalid {
        return Err(Error::InvalidSpec(
            "supercoherent states need a valid partner system".into(),
        ));
    }
    let params = spec.params();
    let expansion = coherent_coefficients(params, label.z())?;
    let n_sup = label.normalization();
    let neg_n_alpha = n_sup.mul(&label.alpha()).neg();
    let dim = params.basis_dim();
    let mut s = Superstate::zeros(dim, spec.regime() == SusyRegime::Exact);
    for n in 0..dim {
        let c = expansion.vector.coeffs[n];
        s.even[n] = n_sup.scale(c);
        s.odd[n] = neg_n_alpha.scale(c);
    }
    Ok(s)
}

/// Truncated supercoherent coefficients from the closed per-mode form;
/// valid at any `|z| < 1` (used inside disc integrals, where the nodes
/// approach the boundary).
fn supercoherent_closed(
    spec: &TransformSpec,
    dim: usize,
    z: Complex64,
    alpha: Supernumber,
) -> Superstate {
    let k = spec.params().k();
    let n_sup =
        Supernumber::one().add(&alpha.conj().mul(&alpha).scale(Complex64::new(0.0, 0.5)));
    let neg_n_alpha = n_sup.mul(&alpha).neg();
    let mut s = Superstate::zeros(dim, false);
    for n in 0..dim {
        let c = coherent_coefficient(k, n, z);
        s.even[n] = n_sup.scale(c);
        s.odd[n] = neg_n_alpha.scale(c);
    }
    s
}

/// Residual of the fermionic eigenrelation `Q_- Ψ_{zα} = α Ψ_{zα}`,
/// exact in Grassmann coefficients; returns the worst coefficient
/// magnitude over both sectors and all four Λ₂ components.
pub fn annihilation_check(spec: &TransformSpec, label: &SupercoherentLabel) -> Result<f64> {
    let psi = supercoherent_state(spec, label)?;
    let lhs = apply_generator(spec, Generator::QMinus, &psi)?.state;
    let rhs = psi.left_mul(&label.alpha());
    Ok(lhs.sub(&rhs).max_abs())
}

/// Which sector a basis state for the resolution check lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    Even(usize),
    Odd(usize),
}

impl Sector {
    fn index(&self) -> usize {
        match self {
            Sector::Even(n) | Sector::Odd(n) => *n,
        }
    }

    fn state(&self, dim: usize) -> Superstate {
        match self {
            Sector::Even(n) => Superstate::basis_even(*n, dim),
            Sector::Odd(n) => Superstate::basis_odd(*n, dim),
        }
    }
}

/// One matrix element `<u| ∫ P_{z̄ᾱ} dμ(z,z̄,α,ᾱ) |w>` of the super
/// resolution of identity: the Berezin integration over `i dα dᾱ` is
/// done exactly on the supernumber product `<u|Ψ_{z̄ᾱ}><Ψ_{z̄ᾱ}|w>`
/// (with `α` the generator itself), the disc integration by quadrature.
///
/// Contract: the pairing table — `δ_mn` on the even block, `i δ_mn` on
/// the odd block, exact zero across.
pub fn super_resolution_entry(spec: &TransformSpec, u: Sector, w: Sector) -> Result<DiscIntegral> {
    let k = spec.params().k();
    let dim = u.index().max(w.index()) + 1;
    let u_state = u.state(dim);
    let w_state = w.state(dim);
    let spec_copy = *spec;
    let g = move |z: Complex64| {
        // Projector label (z̄, ᾱ): conjugated disc point, conjugate
        // odd generator.
        let psi = supercoherent_closed(&spec_copy, dim, z.conj(), Supernumber::alpha_bar());
        let left = super_inner(&u_state, &psi).expect("dims match");
        let right = super_inner(&psi, &w_state).expect("dims match");
        left.mul(&right).berezin() * Complex64::new(0.0, 1.0)
    };
    integrate_disc(g, k, 1e-9)
}

/// Holomorphic representation `Ψ(z, α) = ψ(z) - i α φ(z)` with
/// `ψ(z) = Σ C_n^0 w_n z^n` and `φ(z) = Σ C_n^1 w_n z^n`.
pub fn superholomorphic_rep(
    spec: &TransformSpec,
    s: &Superstate,
    z: Complex64,
    alpha: Supernumber,
) -> Result<Supernumber> {
    if !(z.norm() < 1.0) {
        return Err(Error::InvalidParameter(
            "holomorphic representation needs |z| < 1".into(),
        ));
    }
    let k = spec.params().k();
    let mut psi = Supernumber::zero();
    let mut phi = Supernumber::zero();
    let mut zn = Complex64::new(1.0, 0.0);
    for n in 0..s.dim() {
        let wn = basis_weight(k, n);
        psi = psi.add(&s.even[n].scale(wn * zn));
        phi = phi.add(&s.odd[n].scale(wn * zn));
        zn *= z;
    }
    let i = Complex64::new(0.0, 1.0);
    Ok(psi.sub(&alpha.mul(&phi).scale(i)))
}

/// Residual of the reproducing-kernel identity
/// `<Ψ_z̄ᾱ|Ψ> = (1-z z̄)^k (1 - (i/2) ᾱα) Ψ(z, α)` at `α` = generator.
/// The coefficient i/2 is the resolved value of the kernel prefactor;
/// any other value makes this residual order one.
pub fn reproducing_prefactor_residual(
    spec: &TransformSpec,
    s: &Superstate,
    z: Complex64,
) -> Result<f64> {
    let dim = s.dim();
    let alpha = Supernumber::alpha();
    let kernel_state = supercoherent_closed(spec, dim, z.conj(), Supernumber::alpha_bar());
    let lhs = super_inner(&kernel_state, s)?;
    let rep = superholomorphic_rep(spec, s, z, alpha)?;
    let prefactor =
        Supernumber::one().add(&Supernumber::top().scale(Complex64::new(0.0, -0.5)));
    let envelope = (1.0 - z.norm_sqr()).powf(spec.params().k());
    let rhs = prefactor.mul(&rep).scale(Complex64::new(envelope, 0.0));
    Ok(lhs.sub(&rhs).max_abs())
}

/// Superholomorphic inner product
/// `∫ conj(Ψ1(z,α)) Ψ2(z,α) e^{-f} i dα dᾱ dμ(z)` with
/// `e^{-f} = (1 - i ᾱα)(1-z z̄)^{2k}`.
///
/// Restricted to complex-coefficient states (coefficients carrying
/// Grassmann content would alias the integration variables). Contract:
/// equals `<ψ1|ψ2> + i <φ1|φ2>`.
pub fn superholo_inner(
    spec: &TransformSpec,
    s1: &Superstate,
    s2: &Superstate,
) -> Result<DiscIntegral> {
    if s1.dim() != s2.dim() {
        return Err(Error::DimensionMismatch(format!(
            "superstate truncations differ: {} vs {}",
            s1.dim(),
            s2.dim()
        )));
    }
    if !s1.has_complex_coefficients() || !s2.has_complex_coefficients() {
        return Err(Error::InvalidParameter(
            "superholomorphic inner product is defined for complex-coefficient states".into(),
        ));
    }
    let k = spec.params().k();
    let alpha = Supernumber::alpha();
    let weight = Supernumber::one().add(&Supernumber::top().scale(Complex64::new(0.0, -1.0)));
    let a = s1.clone();
    let b = s2.clone();
    let spec_copy = *spec;
    let g = move |z: Complex64| {
        let rep1 = superholomorphic_rep(&spec_copy, &a, z, alpha).expect("validated");
        let rep2 = superholomorphic_rep(&spec_copy, &b, z, alpha).expect("validated");
        let product = rep1.conj().mul(&rep2).mul(&weight);
        let bosonic = (1.0 - z.norm_sqr()).powf(2.0 * k);
        product.berezin() * Complex64::new(0.0, 1.0) * bosonic
    };
    integrate_disc(g, k, 1e-9)
}
