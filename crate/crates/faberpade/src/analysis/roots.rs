//! Polynomial root finding for reading poles off computed denominators.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::AnalysisError;
use crate::poly::ComplexPoly;

/// All roots of `p`, with multiplicity, as companion-matrix eigenvalues
/// refined by one safeguarded Newton step (the step is kept only when it
/// does not increase `|p|`).
///
/// A nonzero constant polynomial has no roots and returns an empty list; the
/// zero polynomial is rejected.
pub fn poly_roots(p: &ComplexPoly) -> Result<Vec<Complex64>, AnalysisError> {
    let deg = match p.degree() {
        None => return Err(AnalysisError::ZeroPolynomial),
        Some(0) => return Ok(Vec::new()),
        Some(d) => d,
    };

    // Monic companion matrix: subdiagonal ones, last column -a_j / a_deg.
    let lead = p.coeff(deg);
    let mut companion = DMatrix::<Complex64>::zeros(deg, deg);
    for i in 1..deg {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..deg {
        companion[(i, deg - 1)] = -p.coeff(i) / lead;
    }

    let eig = companion
        .eigenvalues()
        .expect("complex eigenvalue computation always converges on complex input");

    let dp = p.derivative();
    let mut roots: Vec<Complex64> = eig
        .iter()
        .map(|&r| {
            let d = dp.eval(r);
            if d.norm() == 0.0 {
                return r;
            }
            let refined = r - p.eval(r) / d;
            if p.eval(refined).norm() <= p.eval(r).norm() {
                refined
            } else {
                r
            }
        })
        .collect();

    // Deterministic order for consumers that compare root sets.
    roots.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .expect("roots are finite")
    });
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quadratic_with_integer_roots() {
        // z^2 - 5z + 6
        let p = ComplexPoly::new(vec![c(6.0, 0.0), c(-5.0, 0.0), c(1.0, 0.0)]);
        let roots = poly_roots(&p).unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - c(2.0, 0.0)).norm() <= 1e-10);
        assert!((roots[1] - c(3.0, 0.0)).norm() <= 1e-10);
    }

    #[test]
    fn triple_root_within_conditioning_limit() {
        // (z - 2)^3 = z^3 - 6z^2 + 12z - 8: a triple root is only determined
        // to about eps^(1/3) from the expanded coefficients.
        let p = ComplexPoly::from_roots(&[c(2.0, 0.0); 3]);
        let roots = poly_roots(&p).unwrap();
        assert_eq!(roots.len(), 3);
        for r in roots {
            assert!((r - c(2.0, 0.0)).norm() <= 1e-4, "root {r}");
        }
    }

    #[test]
    fn degree_eight_construct_then_solve() {
        let truth = [
            c(2.0, 1.0),
            c(-3.0, 0.0),
            c(0.5, -2.0),
            c(-1.5, 1.5),
            c(4.0, 0.0),
            c(0.0, 3.0),
            c(-2.5, -1.0),
            c(1.0, -0.5),
        ];
        let p = ComplexPoly::from_roots(&truth);
        let roots = poly_roots(&p).unwrap();
        assert_eq!(roots.len(), 8);
        let mut expected = truth.to_vec();
        expected.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        for (r, e) in roots.iter().zip(expected.iter()) {
            assert!((r - e).norm() <= 1e-8, "{r} vs {e}");
        }
    }

    #[test]
    fn non_monic_input_is_normalized() {
        // 3(z - 2)(z + 1)
        let p = ComplexPoly::new(vec![c(-6.0, 0.0), c(-3.0, 0.0), c(3.0, 0.0)]);
        let roots = poly_roots(&p).unwrap();
        assert!((roots[0] - c(-1.0, 0.0)).norm() <= 1e-12);
        assert!((roots[1] - c(2.0, 0.0)).norm() <= 1e-12);
    }

    #[test]
    fn zero_and_constant_polynomials() {
        assert!(matches!(
            poly_roots(&ComplexPoly::zero()),
            Err(AnalysisError::ZeroPolynomial)
        ));
        assert!(poly_roots(&ComplexPoly::constant(c(4.0, 0.0)))
            .unwrap()
            .is_empty());
    }
}
