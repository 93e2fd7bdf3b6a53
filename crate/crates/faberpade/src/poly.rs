//! Dense polynomials with complex coefficients.
//!
//! Coefficients are stored in ascending order of degree: `coeffs[k]` is the
//! coefficient of `z^k`. The zero polynomial is canonically represented by an
//! empty coefficient vector; constructors and arithmetic strip trailing
//! (exactly) zero coefficients so that equality of representations is
//! structural. Tiny-but-nonzero coefficients produced by quadrature are kept
//! verbatim — thresholding is the caller's business, not the container's.

use std::fmt;

use num_complex::Complex64;

/// A dense univariate polynomial over the complex numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl ComplexPoly {
    /// Builds a polynomial from ascending coefficients, stripping trailing
    /// exact zeros.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut p = ComplexPoly { coeffs };
        p.normalize();
        p
    }

    /// Builds a polynomial from ascending real coefficients.
    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The zero polynomial.
    pub fn zero() -> Self {
        ComplexPoly { coeffs: Vec::new() }
    }

    /// The constant polynomial `1`.
    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    /// A constant polynomial.
    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = Complex64::new(1.0, 0.0);
        ComplexPoly { coeffs }
    }

    /// The monic polynomial with the given multiset of roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut p = Self::one();
        for &r in roots {
            p = p.mul(&Self::new(vec![-r, Complex64::new(1.0, 0.0)]));
        }
        p
    }

    fn normalize(&mut self) {
        while let Some(last) = self.coeffs.last() {
            if last.re == 0.0 && last.im == 0.0 {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    /// `true` when this is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Coefficient of `z^k` (zero beyond the stored length).
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs
            .get(k)
            .copied()
            .unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    /// Ascending coefficient slice (empty for the zero polynomial).
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Leading coefficient, or `None` for the zero polynomial.
    pub fn leading(&self) -> Option<Complex64> {
        self.coeffs.last().copied()
    }

    /// Evaluates at `z` by Horner's rule.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + other.coeff(k));
        }
        Self::new(coeffs)
    }

    /// Pointwise difference `self - other`.
    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) - other.coeff(k));
        }
        Self::new(coeffs)
    }

    /// Product by convolution.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs =
            vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(coeffs)
    }

    /// Product by a scalar.
    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// Product by `z^k`.
    pub fn mul_monomial(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k];
        coeffs.extend_from_slice(&self.coeffs);
        ComplexPoly { coeffs }
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, &c)| c * ((k + 1) as f64))
                .collect(),
        )
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm_l2(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Sum of coefficient moduli.
    pub fn norm_l1(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// Largest coefficient modulus.
    pub fn norm_max(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Divides by the leading coefficient. Returns `None` for the zero
    /// polynomial.
    pub fn monic(&self) -> Option<Self> {
        let lead = self.leading()?;
        Some(self.scale(lead.inv()))
    }
}

impl fmt::Display for ComplexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c.re == 0.0 && c.im == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({}{:+}i)", c.re, c.im)?;
            }
            match k {
                0 => {}
                1 => write!(f, "*z")?,
                _ => write!(f, "*z^{}", k)?,
            }
        }
        Ok(())
    }
}
