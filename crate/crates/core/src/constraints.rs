//! Birkhoff interpolation data and its assembly into `V a = f`.

use crate::basis::{harmonics, BasisSpec};
use crate::error::{MsnError, Result};
use crate::geometry::{Domain, PointSet};
use crate::linalg::Matrix;
use crate::real::Real;

/// A linear functional applied to the interpolant.
#[derive(Clone, Debug, PartialEq)]
pub enum LinearFunctional {
    Eval { point: Vec<f64> },
    DirectionalDeriv { point: Vec<f64>, direction: Vec<f64> },
}

impl LinearFunctional {
    pub fn point(&self) -> &[f64] {
        match self {
            LinearFunctional::Eval { point } | LinearFunctional::DirectionalDeriv { point, .. } => point,
        }
    }

    /// `(L phi_k)` for every basis element, written into `out`.
    pub fn apply_to_basis<T: Real>(&self, spec: &BasisSpec, out: &mut [T]) -> Result<()> {
        match self {
            LinearFunctional::Eval { point } => spec.eval_all(&to_t::<T>(point), out),
            LinearFunctional::DirectionalDeriv { point, direction } => {
                spec.eval_all_deriv(&to_t::<T>(point), &to_t::<T>(direction), out)
            }
        }
    }
}

pub(crate) fn to_t<T: Real>(v: &[f64]) -> Vec<T> {
    v.iter().map(|&x| T::of(x)).collect()
}

/// Dense system `V a = f`; rows follow the functional order.
#[derive(Clone, Debug)]
pub struct ConstraintSystem<T> {
    pub matrix: Matrix<T>,
    pub rhs: Vec<T>,
    pub spec: BasisSpec,
}

impl<T: Real> ConstraintSystem<T> {
    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    /// Same matrix with another right-hand side.
    pub fn with_rhs(&self, data: &[f64]) -> Result<Self> {
        if data.len() != self.rows() {
            return Err(MsnError::LengthMismatch {
                what: "right-hand side",
                expected: self.rows(),
                got: data.len(),
            });
        }
        Ok(Self {
            matrix: self.matrix.clone(),
            rhs: to_t(data),
            spec: self.spec.clone(),
        })
    }
}

/// `V[i][k] = L_i phi_k`, `f[i] = data[i]`, in the working precision `T`.
pub fn assemble<T: Real>(
    spec: &BasisSpec,
    functionals: &[LinearFunctional],
    data: &[f64],
) -> Result<ConstraintSystem<T>> {
    if functionals.len() != data.len() {
        return Err(MsnError::LengthMismatch {
            what: "functionals vs data",
            expected: functionals.len(),
            got: data.len(),
        });
    }
    let matrix = assemble_matrix(spec, functionals)?;
    let rhs: Vec<T> = to_t(data);
    if rhs.iter().any(|v| !v.is_finite()) {
        return Err(MsnError::NonFinite("right-hand side"));
    }
    Ok(ConstraintSystem {
        matrix,
        rhs,
        spec: spec.clone(),
    })
}

/// Constraint matrix alone.
pub fn assemble_matrix<T: Real>(spec: &BasisSpec, functionals: &[LinearFunctional]) -> Result<Matrix<T>> {
    let (m, n) = (functionals.len(), spec.dimension());
    let mut matrix = Matrix::zeros(m, n);
    let mut row = vec![T::zero(); n];
    for (i, functional) in functionals.iter().enumerate() {
        functional.apply_to_basis(spec, &mut row)?;
        if row.iter().any(|v| !v.is_finite()) {
            return Err(MsnError::NonFinite("constraint matrix"));
        }
        for (k, &v) in row.iter().enumerate() {
            matrix[(i, k)] = v;
        }
    }
    Ok(matrix)
}

/// A scalar field with gradient, in ambient coordinates.
pub trait ScalarField {
    fn value(&self, p: &[f64]) -> f64;
    fn gradient(&self, p: &[f64]) -> Vec<f64>;
}

/// How derivative directions are chosen at each derivative node.
#[derive(Clone, Debug, PartialEq)]
pub enum Directions {
    /// The same unit vectors at every node.
    Fixed(Vec<Vec<f64>>),
    /// The orthonormal `(e_theta, e_phi)` frame of the sphere.
    TangentFrame,
}

impl Directions {
    /// `+1` in 1D, the coordinate axes in 2D.
    pub fn axes(dim: usize) -> Self {
        Directions::Fixed(
            (0..dim)
                .map(|i| (0..dim).map(|j| (i == j) as u8 as f64).collect())
                .collect(),
        )
    }

    /// `(1, 1)/sqrt 2` and `(1, -1)/sqrt 2`.
    pub fn rotated() -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        Directions::Fixed(vec![vec![r, r], vec![r, -r]])
    }

    /// Default directions for a domain.
    pub fn default_for(domain: Domain) -> Self {
        match domain {
            Domain::Sphere => Directions::TangentFrame,
            d => Directions::axes(d.dim()),
        }
    }

    fn at(&self, p: &[f64]) -> Vec<Vec<f64>> {
        match self {
            Directions::Fixed(v) => v.clone(),
            Directions::TangentFrame => {
                let (e1, e2) = harmonics::tangent_frame(p);
                vec![e1.to_vec(), e2.to_vec()]
            }
        }
    }
}

/// Value conditions at `values`, then directional-derivative conditions at
/// `derivs` (all directions of one node before the next node).
pub fn birkhoff_conditions(
    field: &dyn ScalarField,
    values: &PointSet,
    derivs: &PointSet,
    directions: &Directions,
) -> (Vec<LinearFunctional>, Vec<f64>) {
    let mut functionals = Vec::new();
    let mut data = Vec::new();
    for p in values.iter() {
        functionals.push(LinearFunctional::Eval { point: p.to_vec() });
        data.push(field.value(p));
    }
    for p in derivs.iter() {
        let grad = field.gradient(p);
        for dir in directions.at(p) {
            data.push(grad.iter().zip(&dir).map(|(g, d)| g * d).sum());
            functionals.push(LinearFunctional::DirectionalDeriv {
                point: p.to_vec(),
                direction: dir,
            });
        }
    }
    (functionals, data)
}
