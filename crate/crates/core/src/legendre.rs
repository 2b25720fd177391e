//! Legendre generators: `f`, `grad f`, the conjugate `f*` and `grad f*`.
//!
//! | kind         | `f(x)`              | `dom f`    | `int dom f*` |
//! |--------------|---------------------|------------|--------------|
//! | `Energy`     | `1/2 |x|^2`         | `R^J`      | `R^J`        |
//! | `Quadratic`  | `1/2 <x, Ax>`       | `R^J`      | `R^J`        |
//! | `NegEntropy` | `sum x ln x - x`    | `R^J_+`    | `R^J`        |
//! | `NegLog`     | `-sum ln x`         | `R^J_++`   | `R^J_--`     |
//!
//! Values outside the domain are `+inf`, never errors. `0 ln 0` is taken as
//! `0`, so the boundary of the nonnegative orthant belongs to the domain of
//! the negative entropy.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::{Deserialize, Serialize};

use crate::{dot, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Energy,
    #[serde(alias = "quad")]
    Quadratic,
    NegEntropy,
    NegLog,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Energy => "energy",
            Kind::Quadratic => "quadratic",
            Kind::NegEntropy => "negentropy",
            Kind::NegLog => "neglog",
        }
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "energy" => Ok(Kind::Energy),
            "quad" | "quadratic" => Ok(Kind::Quadratic),
            "negentropy" | "kl" => Ok(Kind::NegEntropy),
            "neglog" | "is" => Ok(Kind::NegLog),
            other => Err(Error::InvalidArgument(format!("unknown generator {other:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
struct QuadForm {
    matrix: DMatrix<f64>,
    chol: Cholesky<f64, Dyn>,
}

impl QuadForm {
    fn new(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("empty matrix".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix("matrix is not square".into()));
        }
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        let matrix = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        let scale = matrix.amax();
        for i in 0..n {
            for j in 0..i {
                if (matrix[(i, j)] - matrix[(j, i)]).abs() > 1e-12 * scale {
                    return Err(Error::InvalidMatrix(format!("not symmetric at ({i}, {j})")));
                }
            }
        }
        let sym = (&matrix + matrix.transpose()) * 0.5;
        let chol = Cholesky::new(sym.clone()).ok_or_else(|| Error::InvalidMatrix("not positive definite".into()))?;
        if chol.l_dirty().diagonal().iter().any(|d| *d <= 0.0) {
            return Err(Error::InvalidMatrix("not positive definite".into()));
        }
        Ok(Self { matrix: sym, chol })
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        (&self.matrix * DVector::from_column_slice(x)).as_slice().to_vec()
    }

    fn solve(&self, x: &[f64]) -> Vec<f64> {
        self.chol.solve(&DVector::from_column_slice(x)).as_slice().to_vec()
    }
}

/// One of the four supported Legendre functions on `R^J`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "LegendreRepr", into = "LegendreRepr")]
pub struct LegendreFunction {
    kind: Kind,
    dimension: usize,
    quad: Option<QuadForm>,
}

/// Wire form: `{"kind": "...", "dimension": J, "matrix": [[...]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LegendreRepr {
    pub kind: Kind,
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
}

impl TryFrom<LegendreRepr> for LegendreFunction {
    type Error = Error;

    fn try_from(repr: LegendreRepr) -> Result<Self> {
        match repr.kind {
            Kind::Quadratic => {
                let m = repr.matrix.ok_or_else(|| Error::InvalidMatrix("quadratic generator needs a matrix".into()))?;
                let f = Self::quadratic(&m)?;
                if f.dimension != repr.dimension {
                    return Err(Error::DimensionMismatch { expected: repr.dimension, got: f.dimension });
                }
                Ok(f)
            }
            kind => Self::new(kind, repr.dimension),
        }
    }
}

impl From<LegendreFunction> for LegendreRepr {
    fn from(f: LegendreFunction) -> Self {
        let matrix =
            f.quad.map(|q| (0..f.dimension).map(|i| (0..f.dimension).map(|j| q.matrix[(i, j)]).collect()).collect());
        LegendreRepr { kind: f.kind, dimension: f.dimension, matrix }
    }
}

impl LegendreFunction {
    /// Builds a matrix-free generator. Use [`LegendreFunction::quadratic`]
    /// for `Kind::Quadratic`.
    pub fn new(kind: Kind, dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        if kind == Kind::Quadratic {
            return Err(Error::InvalidMatrix("quadratic generator needs a matrix".into()));
        }
        Ok(Self { kind, dimension, quad: None })
    }

    pub fn energy(dimension: usize) -> Result<Self> {
        Self::new(Kind::Energy, dimension)
    }

    pub fn neg_entropy(dimension: usize) -> Result<Self> {
        Self::new(Kind::NegEntropy, dimension)
    }

    pub fn neg_log(dimension: usize) -> Result<Self> {
        Self::new(Kind::NegLog, dimension)
    }

    /// `x -> 1/2 <x, Ax>` for a symmetric positive definite `A` (row-major).
    pub fn quadratic(rows: &[Vec<f64>]) -> Result<Self> {
        let quad = QuadForm::new(rows)?;
        Ok(Self { kind: Kind::Quadratic, dimension: rows.len(), quad: Some(quad) })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Whether `D(x, .)` is convex on `U` for every `x`. False only for the
    /// negative logarithm (Itakura-Saito).
    pub fn second_arg_convex(&self) -> bool {
        self.kind != Kind::NegLog
    }

    pub fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch { expected: self.dimension, got: x.len() });
        }
        Ok(())
    }

    pub fn in_domain(&self, x: &[f64]) -> bool {
        match self.kind {
            Kind::Energy | Kind::Quadratic => x.iter().all(|v| v.is_finite()),
            Kind::NegEntropy => x.iter().all(|&v| v >= 0.0 && v.is_finite()),
            Kind::NegLog => x.iter().all(|&v| v > 0.0 && v.is_finite()),
        }
    }

    /// Membership in `U = int dom f`.
    pub fn in_interior(&self, x: &[f64]) -> bool {
        match self.kind {
            Kind::Energy | Kind::Quadratic => x.iter().all(|v| v.is_finite()),
            Kind::NegEntropy | Kind::NegLog => x.iter().all(|&v| v > 0.0 && v.is_finite()),
        }
    }

    /// Membership in `int dom f*`, the range of `grad f`.
    pub fn in_conj_interior(&self, xs: &[f64]) -> bool {
        match self.kind {
            Kind::NegLog => xs.iter().all(|&v| v < 0.0 && v.is_finite()),
            _ => xs.iter().all(|v| v.is_finite()),
        }
    }

    /// `f(x)`, `+inf` outside `dom f`.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        if !self.in_domain(x) {
            return Ok(f64::INFINITY);
        }
        Ok(match self.kind {
            Kind::Energy => 0.5 * dot(x, x),
            Kind::Quadratic => 0.5 * dot(x, &self.quad().apply(x)),
            Kind::NegEntropy => x.iter().map(|&v| xlogx(v) - v).sum(),
            Kind::NegLog => -x.iter().map(|v| v.ln()).sum::<f64>(),
        })
    }

    /// `grad f(x)` for `x` in `U`.
    pub fn grad(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        if !self.in_interior(x) {
            return Err(Error::Domain(format!("{x:?} is not in int dom f for {}", self.kind.name())));
        }
        Ok(self.grad_unchecked(x))
    }

    pub(crate) fn grad_unchecked(&self, x: &[f64]) -> Vec<f64> {
        match self.kind {
            Kind::Energy => x.to_vec(),
            Kind::Quadratic => self.quad().apply(x),
            Kind::NegEntropy => x.iter().map(|v| v.ln()).collect(),
            Kind::NegLog => x.iter().map(|v| -1.0 / v).collect(),
        }
    }

    /// `f*(x*)`, `+inf` outside `dom f*`.
    pub fn eval_conj(&self, xs: &[f64]) -> Result<f64> {
        self.check_dim(xs)?;
        Ok(match self.kind {
            Kind::Energy => 0.5 * dot(xs, xs),
            Kind::Quadratic => 0.5 * dot(xs, &self.quad().solve(xs)),
            Kind::NegEntropy => xs.iter().map(|v| v.exp()).sum(),
            Kind::NegLog => {
                if self.in_conj_interior(xs) {
                    xs.iter().map(|v| -1.0 - (-v).ln()).sum()
                } else {
                    f64::INFINITY
                }
            }
        })
    }

    /// `grad f*(x*) = (grad f)^{-1}(x*)` for `x*` in `int dom f*`.
    pub fn grad_conj(&self, xs: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(xs)?;
        if !self.in_conj_interior(xs) {
            return Err(Error::Domain(format!("{xs:?} is not in int dom f* for {}", self.kind.name())));
        }
        Ok(self.grad_conj_unchecked(xs))
    }

    pub(crate) fn grad_conj_unchecked(&self, xs: &[f64]) -> Vec<f64> {
        match self.kind {
            Kind::Energy => xs.to_vec(),
            Kind::Quadratic => self.quad().solve(xs),
            Kind::NegEntropy => xs.iter().map(|v| v.exp()).collect(),
            Kind::NegLog => xs.iter().map(|v| -1.0 / v).collect(),
        }
    }

    /// `hess f*(x*) v`.
    pub(crate) fn hess_conj_apply(&self, xs: &[f64], v: &[f64]) -> Vec<f64> {
        match self.kind {
            Kind::Energy => v.to_vec(),
            Kind::Quadratic => self.quad().solve(v),
            Kind::NegEntropy => xs.iter().zip(v).map(|(s, w)| s.exp() * w).collect(),
            Kind::NegLog => xs.iter().zip(v).map(|(s, w)| w / (s * s)).collect(),
        }
    }

    /// One-sided directional derivative `f'(x; h)` for `x` in `dom f`.
    ///
    /// Only the negative entropy has boundary points in its domain; there a
    /// zero coordinate moving inward contributes `-inf` and one moving
    /// outward makes the quotient `+inf`.
    pub fn directional(&self, x: &[f64], h: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        self.check_dim(h)?;
        if !self.in_domain(x) {
            return Err(Error::Domain(format!("{x:?} is not in dom f")));
        }
        if self.in_interior(x) {
            return Ok(dot(&self.grad_unchecked(x), h));
        }
        // Boundary of R^J_+ for the negative entropy.
        let mut out = 0.0;
        let mut inward = false;
        for (&xi, &hi) in x.iter().zip(h) {
            if xi > 0.0 {
                out += xi.ln() * hi;
            } else if hi < 0.0 {
                return Ok(f64::INFINITY);
            } else if hi > 0.0 {
                inward = true;
            }
        }
        Ok(if inward { f64::NEG_INFINITY } else { out })
    }

    fn quad(&self) -> &QuadForm {
        self.quad.as_ref().expect("quadratic generator carries its matrix")
    }
}

fn xlogx(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v * v.ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn energy() -> LegendreFunction {
        LegendreFunction::energy(2).unwrap()
    }
    fn negent() -> LegendreFunction {
        LegendreFunction::neg_entropy(2).unwrap()
    }
    fn neglog() -> LegendreFunction {
        LegendreFunction::neg_log(2).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(energy().eval(&[3.0, 4.0]).unwrap(), 12.5);
        assert_eq!(negent().eval(&[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(neglog().eval(&[1.0, -1.0]).unwrap(), f64::INFINITY);
        assert_eq!(negent().eval(&[-1.0, 1.0]).unwrap(), f64::INFINITY);
        assert!(matches!(energy().eval(&[1.0]), Err(Error::DimensionMismatch { expected: 2, got: 1 })));
    }

    #[test]
    fn grad_examples() {
        assert_eq!(energy().grad(&[2.0, 5.0]).unwrap(), vec![2.0, 5.0]);
        assert_eq!(negent().grad(&[1.0, 1.0]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(neglog().grad(&[2.0, 4.0]).unwrap(), vec![-0.5, -0.25]);
        assert!(matches!(negent().grad(&[0.0, 1.0]), Err(Error::Domain(_))));
    }

    #[test]
    fn grad_conj_examples() {
        let y = negent().grad_conj(&[0.0, 4f64.ln()]).unwrap();
        assert_abs_diff_eq!(y[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(y[1], 4.0, epsilon = 1e-14);
        assert_eq!(energy().grad_conj(&[7.0, -3.0]).unwrap(), vec![7.0, -3.0]);
        assert_eq!(neglog().grad_conj(&[-0.5, -0.25]).unwrap(), vec![2.0, 4.0]);
        assert!(matches!(neglog().grad_conj(&[0.0, -1.0]), Err(Error::Domain(_))));
    }

    #[test]
    fn eval_conj_examples() {
        assert_eq!(negent().eval_conj(&[0.0, 0.0]).unwrap(), 2.0);
        assert_eq!(energy().eval_conj(&[3.0, 4.0]).unwrap(), 12.5);
        assert_eq!(neglog().eval_conj(&[-1.0, -1.0]).unwrap(), -2.0);
        assert_eq!(neglog().eval_conj(&[1.0, -1.0]).unwrap(), f64::INFINITY);
    }

    #[test]
    fn domain_membership() {
        assert!(negent().in_domain(&[0.0, 1.0]));
        assert!(!negent().in_interior(&[0.0, 1.0]));
        assert!(energy().in_domain(&[-1e9, 3.0]) && energy().in_interior(&[-1e9, 3.0]));
        assert!(!neglog().in_domain(&[0.0, 1.0]));
        assert!(!neglog().in_interior(&[0.0, 1.0]));
    }

    #[test]
    fn quadratic_validation() {
        assert!(LegendreFunction::quadratic(&[vec![2.0, 1.0], vec![1.0, 2.0]]).is_ok());
        assert!(matches!(LegendreFunction::quadratic(&[vec![1.0, 2.0], vec![0.0, 1.0]]), Err(Error::InvalidMatrix(_))));
        assert!(matches!(LegendreFunction::quadratic(&[vec![1.0, 2.0], vec![2.0, 1.0]]), Err(Error::InvalidMatrix(_))));
        assert!(LegendreFunction::new(Kind::Energy, 0).is_err());
        assert!(LegendreFunction::new(Kind::Quadratic, 2).is_err());
    }

    #[test]
    fn quadratic_conjugate() {
        let f = LegendreFunction::quadratic(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let x = [0.3, -1.2];
        let g = f.grad(&x).unwrap();
        assert_eq!(g, vec![-0.6, -2.1]);
        let back = f.grad_conj(&g).unwrap();
        assert_abs_diff_eq!(back[0], x[0], epsilon = 1e-14);
        assert_abs_diff_eq!(back[1], x[1], epsilon = 1e-14);
    }

    #[test]
    fn json_shape() {
        let f = LegendreFunction::quadratic(&[vec![2.0, 0.5], vec![0.5, 1.0]]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"kind":"quadratic","dimension":2,"matrix":[[2.0,0.5],[0.5,1.0]]}"#);
        let back: LegendreFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(back.kind(), Kind::Quadratic);
        let e: LegendreFunction = serde_json::from_str(r#"{"kind":"negentropy","dimension":3}"#).unwrap();
        assert_eq!(e.dimension(), 3);
        assert!(serde_json::from_str::<LegendreFunction>(r#"{"kind":"quadratic","dimension":2}"#).is_err());
    }

    #[test]
    fn boundary_directional() {
        let f = negent();
        assert_eq!(f.directional(&[0.0, 1.0], &[1.0, 0.0]).unwrap(), f64::NEG_INFINITY);
        assert_eq!(f.directional(&[0.0, 1.0], &[-1.0, 0.0]).unwrap(), f64::INFINITY);
        assert_eq!(f.directional(&[0.0, 2.0], &[0.0, 3.0]).unwrap(), 3.0 * 2f64.ln());
    }
}
