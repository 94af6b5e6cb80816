//! Orthonormal basis families, their eigenvalues and directional derivatives.
//!
//! Three families are supported: Chebyshev polynomials on `[-1, 1]`, their
//! tensor product on `[-1, 1]^2`, and real spherical harmonics on the unit
//! sphere. Every family is ordered by nondecreasing eigenvalue with the
//! constant function first.

pub mod chebyshev;
pub mod harmonics;

use crate::error::{MsnError, Result};
use crate::real::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisFamily {
    Chebyshev1D,
    ChebyshevTensor2D,
    SphericalHarmonics,
}

impl BasisFamily {
    /// Dimension of the ambient coordinates of a domain point.
    pub fn point_dim(self) -> usize {
        match self {
            BasisFamily::Chebyshev1D => 1,
            BasisFamily::ChebyshevTensor2D => 2,
            BasisFamily::SphericalHarmonics => 3,
        }
    }

    fn domain_name(self) -> &'static str {
        match self {
            BasisFamily::Chebyshev1D => "interval [-1,1]",
            BasisFamily::ChebyshevTensor2D => "square [-1,1]^2",
            BasisFamily::SphericalHarmonics => "unit sphere",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MultiIndex {
    Degree(usize),
    Pair(usize, usize),
    Harmonic { l: usize, m: i64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BasisIndex {
    pub ordinal: usize,
    pub multi_index: MultiIndex,
    pub eigenvalue: f64,
}

/// A basis family truncated at `max_degree` together with its fixed ordering.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisSpec {
    family: BasisFamily,
    max_degree: usize,
    indices: Vec<BasisIndex>,
    /// Tensor case: ordinal of `(k1, k2)` at `k1 * (m+1) + k2`.
    tensor_lookup: Vec<usize>,
}

/// Number of basis elements of `family` truncated at `max_degree`.
pub fn dimension(family: BasisFamily, max_degree: usize) -> usize {
    match family {
        BasisFamily::Chebyshev1D => max_degree + 1,
        BasisFamily::ChebyshevTensor2D | BasisFamily::SphericalHarmonics => (max_degree + 1) * (max_degree + 1),
    }
}

/// Diagonal entry `(1 + lambda)^s` of the Sobolev weight matrix.
pub fn sobolev_weight(eigenvalue: f64, s: f64) -> f64 {
    (1.0 + eigenvalue).powf(s)
}

impl BasisSpec {
    pub fn new(family: BasisFamily, max_degree: usize) -> Self {
        let mut indices = Vec::with_capacity(dimension(family, max_degree));
        let mut tensor_lookup = Vec::new();
        match family {
            BasisFamily::Chebyshev1D => {
                for k in 0..=max_degree {
                    indices.push(BasisIndex {
                        ordinal: k,
                        multi_index: MultiIndex::Degree(k),
                        eigenvalue: k as f64,
                    });
                }
            }
            BasisFamily::ChebyshevTensor2D => {
                let mut pairs: Vec<(usize, usize)> = (0..=max_degree)
                    .flat_map(|a| (0..=max_degree).map(move |b| (a, b)))
                    .collect();
                // Euclidean norm first (compared exactly through k1^2 + k2^2), then alphabetical.
                pairs.sort_by_key(|&(a, b)| (a * a + b * b, a, b));
                tensor_lookup = vec![0; pairs.len()];
                for (ordinal, &(a, b)) in pairs.iter().enumerate() {
                    tensor_lookup[a * (max_degree + 1) + b] = ordinal;
                    indices.push(BasisIndex {
                        ordinal,
                        multi_index: MultiIndex::Pair(a, b),
                        eigenvalue: ((a * a + b * b) as f64).sqrt(),
                    });
                }
            }
            BasisFamily::SphericalHarmonics => {
                for l in 0..=max_degree {
                    for m in -(l as i64)..=(l as i64) {
                        indices.push(BasisIndex {
                            ordinal: indices.len(),
                            multi_index: MultiIndex::Harmonic { l, m },
                            eigenvalue: l as f64,
                        });
                    }
                }
            }
        }
        Self {
            family,
            max_degree,
            indices,
            tensor_lookup,
        }
    }

    pub fn family(&self) -> BasisFamily {
        self.family
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn dimension(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[BasisIndex] {
        &self.indices
    }

    pub fn index(&self, ordinal: usize) -> Result<&BasisIndex> {
        self.indices.get(ordinal).ok_or(MsnError::Index {
            ordinal,
            dimension: self.indices.len(),
        })
    }

    /// Ordinal of tensor multi-index `(k1, k2)`.
    pub fn tensor_ordinal(&self, k1: usize, k2: usize) -> Option<usize> {
        if self.family != BasisFamily::ChebyshevTensor2D || k1 > self.max_degree || k2 > self.max_degree {
            return None;
        }
        Some(self.tensor_lookup[k1 * (self.max_degree + 1) + k2])
    }

    pub fn sobolev_weight(&self, ordinal: usize, s: f64) -> Result<f64> {
        Ok(sobolev_weight(self.index(ordinal)?.eigenvalue, s))
    }

    /// All diagonal entries of `D_s`, in working precision.
    pub fn sobolev_weights<T: Real>(&self, s: f64) -> Vec<T> {
        let s = T::of(s);
        self.indices
            .iter()
            .map(|ix| (T::one() + T::of(ix.eigenvalue)).powf(s))
            .collect()
    }

    /// Validates a domain point, returning it clamped onto the domain.
    pub fn check_point<T: Real>(&self, point: &[T]) -> Result<Vec<T>> {
        let dim = self.family.point_dim();
        let out_of_domain = || MsnError::Domain {
            domain: self.family.domain_name(),
            point: point.iter().map(|v| v.to_f64_lossless()).collect(),
        };
        if point.len() != dim || point.iter().any(|v| !v.is_finite()) {
            return Err(out_of_domain());
        }
        let tol = T::domain_tolerance();
        match self.family {
            BasisFamily::Chebyshev1D | BasisFamily::ChebyshevTensor2D => {
                if point.iter().any(|v| v.abs() > T::one() + tol) {
                    return Err(out_of_domain());
                }
                Ok(point.iter().map(|v| v.max(-T::one()).min(T::one())).collect())
            }
            BasisFamily::SphericalHarmonics => {
                let norm = norm3(point);
                if (norm - T::one()).abs() > tol {
                    return Err(out_of_domain());
                }
                Ok(point.to_vec())
            }
        }
    }

    pub(crate) fn check_direction<T: Real>(&self, point: &[T], direction: &[T]) -> Result<()> {
        let dim = self.family.point_dim();
        if direction.len() != dim {
            return Err(MsnError::Precondition(format!(
                "direction has {} components, expected {dim}",
                direction.len()
            )));
        }
        let tol = T::domain_tolerance();
        let norm = direction.iter().fold(T::zero(), |acc, v| acc + *v * *v).sqrt();
        if (norm - T::one()).abs() > tol {
            return Err(MsnError::Precondition(format!(
                "direction is not unit length (norm {norm})"
            )));
        }
        if self.family == BasisFamily::SphericalHarmonics {
            let dot: T = point.iter().zip(direction).map(|(a, b)| *a * *b).sum();
            if dot.abs() > tol {
                return Err(MsnError::Precondition(format!(
                    "direction not tangent to the sphere (inner product {dot})"
                )));
            }
        }
        Ok(())
    }

    /// `phi_k(point)` for every ordinal, written into `out`.
    pub fn eval_all<T: Real>(&self, point: &[T], out: &mut [T]) -> Result<()> {
        let p = self.check_point(point)?;
        self.check_len(out.len())?;
        let m = self.max_degree;
        match self.family {
            BasisFamily::Chebyshev1D => chebyshev::values(p[0], out),
            BasisFamily::ChebyshevTensor2D => {
                let mut x = vec![T::zero(); m + 1];
                let mut y = vec![T::zero(); m + 1];
                chebyshev::values(p[0], &mut x);
                chebyshev::values(p[1], &mut y);
                self.fill_tensor(out, |a, b| x[a] * y[b]);
            }
            BasisFamily::SphericalHarmonics => harmonics::values(m, &p, out),
        }
        Ok(())
    }

    /// Directional derivative of every `phi_k` at `point` along unit `direction`.
    pub fn eval_all_deriv<T: Real>(&self, point: &[T], direction: &[T], out: &mut [T]) -> Result<()> {
        let p = self.check_point(point)?;
        self.check_direction(&p, direction)?;
        self.check_len(out.len())?;
        let m = self.max_degree;
        match self.family {
            BasisFamily::Chebyshev1D => {
                chebyshev::derivatives(p[0], out);
                for v in out.iter_mut() {
                    *v = *v * direction[0];
                }
            }
            BasisFamily::ChebyshevTensor2D => {
                let mut x = vec![T::zero(); m + 1];
                let mut y = vec![T::zero(); m + 1];
                let mut dx = vec![T::zero(); m + 1];
                let mut dy = vec![T::zero(); m + 1];
                chebyshev::values(p[0], &mut x);
                chebyshev::values(p[1], &mut y);
                chebyshev::derivatives(p[0], &mut dx);
                chebyshev::derivatives(p[1], &mut dy);
                let (u, v) = (direction[0], direction[1]);
                self.fill_tensor(out, |a, b| u * dx[a] * y[b] + v * x[a] * dy[b]);
            }
            BasisFamily::SphericalHarmonics => harmonics::directional_derivatives(m, &p, direction, out),
        }
        Ok(())
    }

    pub fn eval<T: Real>(&self, ordinal: usize, point: &[T]) -> Result<T> {
        self.index(ordinal)?;
        let mut out = vec![T::zero(); self.dimension()];
        self.eval_all(point, &mut out)?;
        Ok(out[ordinal])
    }

    pub fn eval_deriv<T: Real>(&self, ordinal: usize, point: &[T], direction: &[T]) -> Result<T> {
        self.index(ordinal)?;
        let mut out = vec![T::zero(); self.dimension()];
        self.eval_all_deriv(point, direction, &mut out)?;
        Ok(out[ordinal])
    }

    fn fill_tensor<T: Real>(&self, out: &mut [T], f: impl Fn(usize, usize) -> T) {
        for (slot, ix) in out.iter_mut().zip(&self.indices) {
            if let MultiIndex::Pair(a, b) = ix.multi_index {
                *slot = f(a, b);
            }
        }
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got != self.dimension() {
            return Err(MsnError::LengthMismatch {
                what: "basis output buffer",
                expected: self.dimension(),
                got,
            });
        }
        Ok(())
    }
}

/// `phi_k(point)` for the basis element `k` of `spec`.
pub fn eval_basis<T: Real>(spec: &BasisSpec, k: &BasisIndex, point: &[T]) -> Result<T> {
    spec.eval(k.ordinal, point)
}

/// Directional derivative of `phi_k` at `point` along unit `direction`.
pub fn eval_basis_deriv<T: Real>(spec: &BasisSpec, k: &BasisIndex, point: &[T], direction: &[T]) -> Result<T> {
    spec.eval_deriv(k.ordinal, point, direction)
}

pub(crate) fn norm3<T: Real>(p: &[T]) -> T {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(dimension(BasisFamily::Chebyshev1D, 0), 1);
        assert_eq!(dimension(BasisFamily::ChebyshevTensor2D, 3), 16);
        assert_eq!(dimension(BasisFamily::SphericalHarmonics, 2), 9);
        for fam in [
            BasisFamily::Chebyshev1D,
            BasisFamily::ChebyshevTensor2D,
            BasisFamily::SphericalHarmonics,
        ] {
            for m in 0..6 {
                assert_eq!(BasisSpec::new(fam, m).dimension(), dimension(fam, m));
            }
        }
    }

    #[test]
    fn tensor_ordering_norm_then_alphabetical() {
        let spec = BasisSpec::new(BasisFamily::ChebyshevTensor2D, 1);
        let order: Vec<_> = spec.indices().iter().map(|i| i.multi_index).collect();
        assert_eq!(
            order,
            vec![
                MultiIndex::Pair(0, 0),
                MultiIndex::Pair(0, 1),
                MultiIndex::Pair(1, 0),
                MultiIndex::Pair(1, 1)
            ]
        );
        let spec = BasisSpec::new(BasisFamily::ChebyshevTensor2D, 3);
        // (0,2),(2,0) have norm 2 < sqrt(5) of (1,2)
        let first: Vec<_> = spec.indices()[..7].iter().map(|i| i.multi_index).collect();
        assert_eq!(
            first,
            vec![
                MultiIndex::Pair(0, 0),
                MultiIndex::Pair(0, 1),
                MultiIndex::Pair(1, 0),
                MultiIndex::Pair(1, 1),
                MultiIndex::Pair(0, 2),
                MultiIndex::Pair(2, 0),
                MultiIndex::Pair(1, 2),
            ]
        );
        assert_eq!(spec.tensor_ordinal(2, 1), Some(7));
    }

    #[test]
    fn eigenvalues_nondecreasing_and_constant_first() {
        for fam in [
            BasisFamily::Chebyshev1D,
            BasisFamily::ChebyshevTensor2D,
            BasisFamily::SphericalHarmonics,
        ] {
            let spec = BasisSpec::new(fam, 7);
            assert_eq!(spec.indices()[0].eigenvalue, 0.0);
            assert!(spec.indices().windows(2).all(|w| w[0].eigenvalue <= w[1].eigenvalue));
            let pt: Vec<f64> = match fam {
                BasisFamily::Chebyshev1D => vec![0.3],
                BasisFamily::ChebyshevTensor2D => vec![0.3, -0.7],
                BasisFamily::SphericalHarmonics => vec![0.6, 0.0, 0.8],
            };
            assert_eq!(spec.eval(0, &pt).unwrap(), 1.0);
        }
    }

    #[test]
    fn eval_examples() {
        let spec = BasisSpec::new(BasisFamily::Chebyshev1D, 3);
        let r2 = 2f64.sqrt();
        assert!((spec.eval(3, &[1.0f64]).unwrap() / r2 - 1.0).abs() < 1e-15);
        assert!((spec.eval(3, &[0.5f64]).unwrap() / r2 + 1.0).abs() < 1e-15);
        assert!((spec.eval_deriv(3, &[1.0f64], &[1.0]).unwrap() / r2 - 9.0).abs() < 1e-13);
        assert_eq!(spec.eval_deriv(0, &[0.2f64], &[-1.0]).unwrap(), 0.0);

        let sh = BasisSpec::new(BasisFamily::SphericalHarmonics, 2);
        assert_eq!(sh.eval(0, &[0.0f64, 0.0, 1.0]).unwrap(), 1.0);

        // T1(x)T1(y) = xy scaled by 2; directional derivative (y, x) . dir
        let t2 = BasisSpec::new(BasisFamily::ChebyshevTensor2D, 1);
        let k = t2.tensor_ordinal(1, 1).unwrap();
        let d = [1.0 / 2f64.sqrt(), 1.0 / 2f64.sqrt()];
        let got = t2.eval_deriv(k, &[0.2f64, 0.3], &d).unwrap() / 2.0;
        assert!((got - 0.353_553_390_593_273_8).abs() < 1e-14);
    }

    #[test]
    fn weights() {
        assert_eq!(sobolev_weight(0.0, 8.0), 1.0);
        assert_eq!(sobolev_weight(3.0, 2.0), 16.0);
        let spec = BasisSpec::new(BasisFamily::Chebyshev1D, 160);
        let w = spec.sobolev_weight(160, 10.0).unwrap();
        assert!((w / 161f64.powi(10) - 1.0).abs() < 1e-14);
        assert!((w - 1.17e22).abs() / 1.17e22 < 0.01);
    }

    #[test]
    fn errors() {
        let spec = BasisSpec::new(BasisFamily::Chebyshev1D, 3);
        assert!(matches!(spec.eval(1, &[1.5f64]), Err(MsnError::Domain { .. })));
        assert!(matches!(spec.eval(4, &[0.5f64]), Err(MsnError::Index { .. })));
        assert!(matches!(
            spec.eval_deriv(1, &[0.5f64], &[0.5]),
            Err(MsnError::Precondition(_))
        ));
        let sh = BasisSpec::new(BasisFamily::SphericalHarmonics, 3);
        assert!(matches!(sh.eval(1, &[1.0f64, 1.0, 0.0]), Err(MsnError::Domain { .. })));
        // radial direction is not tangent
        assert!(matches!(
            sh.eval_deriv(1, &[0.0f64, 0.0, 1.0], &[0.0, 0.0, 1.0]),
            Err(MsnError::Precondition(_))
        ));
    }

    #[test]
    fn ordering_deterministic() {
        for fam in [
            BasisFamily::Chebyshev1D,
            BasisFamily::ChebyshevTensor2D,
            BasisFamily::SphericalHarmonics,
        ] {
            assert_eq!(BasisSpec::new(fam, 9), BasisSpec::new(fam, 9));
        }
    }
}
