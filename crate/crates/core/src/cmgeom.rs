//! Cayley–Menger determinants, simplex volumes, realizability, and affine maps.
//!
//! The volume constant is `2^k (k!)^2`: for a unit equilateral triangle the
//! bordered determinant is -3 and the squared area is 3/16, which pins the
//! constant at 16 = 2^2 (2!)^2. `2^k k!` is off by a factor of `k!`.

use nalgebra::{DMatrix, Matrix2, Matrix3, Matrix4, Vector2, Vector3};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::development::{PlanarPolygon, Point2};

/// Relative tolerance on signed squared volumes.
pub const EPS_VOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("distance table of size {0} is not (k+1)^2 for any k >= 1")]
    BadShape(usize),
    #[error("distance table is not symmetric with zero diagonal and nonnegative finite entries")]
    NotADistanceTable,
    #[error("signed squared volume {0} is negative: no Euclidean simplex has these distances")]
    NegativeSquaredVolume(f64),
    #[error("the first three corners are collinear")]
    DegenerateBase,
    #[error("source points do not span 3-space")]
    RankDeficient,
    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },
}

/// Squared pairwise distances among `k + 1` points.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceSpec {
    k: usize,
    d2: Vec<f64>,
}

impl DistanceSpec {
    /// Build from a symmetric row-major `(k+1) x (k+1)` table of squared distances.
    pub fn new(k: usize, d2: Vec<f64>) -> Result<Self, GeomError> {
        if k == 0 || d2.len() != (k + 1) * (k + 1) {
            return Err(GeomError::BadShape(d2.len()));
        }
        let n = k + 1;
        let ok = (0..n).all(|i| {
            d2[i * n + i] == 0.0 && (0..n).all(|j| d2[i * n + j].is_finite() && d2[i * n + j] >= 0.0 && d2[i * n + j] == d2[j * n + i])
        });
        if !ok {
            return Err(GeomError::NotADistanceTable);
        }
        Ok(DistanceSpec { k, d2 })
    }

    /// Build from the upper triangle `d2[i][j]`, `i < j`, in row order.
    pub fn from_upper(k: usize, upper: &[f64]) -> Result<Self, GeomError> {
        let n = k + 1;
        if upper.len() != n * (n - 1) / 2 {
            return Err(GeomError::BadShape(upper.len()));
        }
        let mut d2 = vec![0.0; n * n];
        let mut it = upper.iter();
        for i in 0..n {
            for j in i + 1..n {
                let v = *it.next().expect("length checked");
                d2[i * n + j] = v;
                d2[j * n + i] = v;
            }
        }
        DistanceSpec::new(k, d2)
    }

    pub fn from_points<const D: usize>(points: &[[f64; D]]) -> Self {
        let n = points.len();
        let mut d2 = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                d2[i * n + j] = (0..D).map(|c| (points[i][c] - points[j][c]).powi(2)).sum();
            }
        }
        DistanceSpec { k: n - 1, d2 }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d2[i * (self.k + 1) + j]
    }

    pub fn max_entry(&self) -> f64 {
        self.d2.iter().cloned().fold(0.0, f64::max)
    }

    /// Same spec with point indices permuted: new point `i` is old `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> DistanceSpec {
        let n = self.k + 1;
        let mut d2 = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                d2[i * n + j] = self.get(perm[i], perm[j]);
            }
        }
        DistanceSpec { k: self.k, d2 }
    }

    pub fn scaled(&self, lambda: f64) -> DistanceSpec {
        DistanceSpec {
            k: self.k,
            d2: self.d2.iter().map(|x| x * lambda * lambda).collect(),
        }
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// `(-1)^(k+1) / (2^k (k!)^2)`, the factor turning the determinant into vol².
pub fn volume_factor(k: usize) -> f64 {
    let sign = if (k + 1) % 2 == 0 { 1.0 } else { -1.0 };
    sign / (2f64.powi(k as i32) * factorial(k).powi(2))
}

/// The bordered `(k+2) x (k+2)` Cayley–Menger matrix.
pub fn cayley_menger_matrix(spec: &DistanceSpec) -> DMatrix<f64> {
    let n = spec.k + 2;
    DMatrix::from_fn(n, n, |i, j| match (i, j) {
        (0, 0) => 0.0,
        (0, _) | (_, 0) => 1.0,
        _ => spec.get(i - 1, j - 1),
    })
}

/// Cayley–Menger determinant by LU with partial pivoting.
pub fn cayley_menger_det(spec: &DistanceSpec) -> f64 {
    cayley_menger_matrix(spec).lu().determinant()
}

/// Exact Cayley–Menger determinant of rational squared distances
/// (`d2` row-major, `(k+1)^2` entries) by fraction-free Bareiss elimination.
pub fn cayley_menger_det_exact(k: usize, d2: &[BigRational]) -> BigRational {
    let n = k + 2;
    assert_eq!(d2.len(), (k + 1) * (k + 1));
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match (i, j) {
                    (0, 0) => BigRational::zero(),
                    (0, _) | (_, 0) => BigRational::one(),
                    _ => d2[(i - 1) * (k + 1) + (j - 1)].clone(),
                })
                .collect()
        })
        .collect();
    rational_det(&mut m)
}

/// Determinant over the rationals by Gaussian elimination with exact pivots.
pub fn rational_det(m: &mut [Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= pivot.clone();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone() / pivot.clone();
            for c in col..n {
                let delta = factor.clone() * m[col][c].clone();
                m[r][c] -= delta;
            }
        }
    }
    det
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `(-1)^(k+1) cm / (2^k (k!)^2)`: the squared volume, possibly negative
/// for unrealizable distances.
pub fn signed_squared_volume(spec: &DistanceSpec) -> f64 {
    volume_factor(spec.k) * cayley_menger_det(spec)
}

/// Scale of the squared volume for relative comparisons: `max(d²)^k` times the factor.
fn squared_volume_scale(spec: &DistanceSpec) -> f64 {
    spec.max_entry().powi(spec.k as i32) * volume_factor(spec.k).abs()
}

/// k-dimensional volume of the simplex with the given squared distances.
pub fn simplex_volume(spec: &DistanceSpec) -> Result<f64, GeomError> {
    let v2 = signed_squared_volume(spec);
    if v2 < -EPS_VOL * squared_volume_scale(spec) {
        return Err(GeomError::NegativeSquaredVolume(v2));
    }
    Ok(v2.max(0.0).sqrt())
}

/// Leading sub-spec on points `0..=j`.
fn leading(spec: &DistanceSpec, j: usize) -> DistanceSpec {
    let n = j + 1;
    let d2 = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| spec.get(a, b)).collect();
    DistanceSpec { k: j, d2 }
}

/// Nondegenerate realizability: `(-1)^(j+1) cm_j > 0` for every leading
/// sub-simplex on points `0..=j`, `j = 1..=k`. For `j = k` alone the sign
/// is necessary but not sufficient once `k >= 3`. Floating near-zeros fall
/// in a relative dead zone of `EPS_VOL` and count as degenerate.
pub fn realizable_simplex(spec: &DistanceSpec) -> bool {
    (1..=spec.k).all(|j| {
        let s = leading(spec, j);
        signed_squared_volume(&s) > EPS_VOL * squared_volume_scale(&s)
    })
}

/// Exact form of [`realizable_simplex`].
pub fn realizable_simplex_exact(k: usize, d2: &[BigRational]) -> bool {
    assert_eq!(d2.len(), (k + 1) * (k + 1));
    (1..=k).all(|j| {
        let n = j + 1;
        let sub: Vec<BigRational> = (0..n).flat_map(|a| (0..n).map(move |b| d2[a * (k + 1) + b].clone())).collect();
        let cm = cayley_menger_det_exact(j, &sub);
        if (j + 1) % 2 == 0 {
            cm.is_positive()
        } else {
            cm.is_negative()
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineMap2D {
    pub linear: Matrix2<f64>,
    pub translation: Vector2<f64>,
}

impl AffineMap2D {
    pub fn identity() -> Self {
        AffineMap2D {
            linear: Matrix2::identity(),
            translation: Vector2::zeros(),
        }
    }

    pub fn apply(&self, p: Point2) -> Point2 {
        let v = self.linear * Vector2::new(p.x, p.y) + self.translation;
        Point2::new(v.x, v.y)
    }

    pub fn det(&self) -> f64 {
        self.linear.determinant()
    }

    /// The unique map sending `src[i]` to `dst[i]` for three non-collinear sources.
    pub fn from_triangles(src: [Point2; 3], dst: [Point2; 3]) -> Result<Self, GeomError> {
        let s = Matrix2::new(
            src[1].x - src[0].x,
            src[2].x - src[0].x,
            src[1].y - src[0].y,
            src[2].y - src[0].y,
        );
        let d = Matrix2::new(
            dst[1].x - dst[0].x,
            dst[2].x - dst[0].x,
            dst[1].y - dst[0].y,
            dst[2].y - dst[0].y,
        );
        let scale = (s.column(0).norm() * s.column(1).norm()).max(f64::MIN_POSITIVE);
        if s.determinant().abs() <= 1e-14 * scale {
            return Err(GeomError::DegenerateBase);
        }
        let inv = s.try_inverse().ok_or(GeomError::DegenerateBase)?;
        let linear = d * inv;
        let translation = Vector2::new(dst[0].x, dst[0].y) - linear * Vector2::new(src[0].x, src[0].y);
        Ok(AffineMap2D { linear, translation })
    }
}

/// Correspondence between the corners of two polygons with equal corner
/// counts: corner `i` of the first goes to corner `offset ± i` of the second.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CornerCorrespondence {
    pub offset: usize,
    pub reversed: bool,
}

impl CornerCorrespondence {
    pub fn identity() -> Self {
        CornerCorrespondence {
            offset: 0,
            reversed: false,
        }
    }

    pub fn image(&self, i: usize, m: usize) -> usize {
        if self.reversed {
            (self.offset + m - (i % m)) % m
        } else {
            (self.offset + i) % m
        }
    }
}

/// Affine map from `q` onto `q2` respecting the corner correspondence, built
/// from corners 0, 1, 2 and checked on the rest within `eps_aff * diam(q2)`.
pub fn polygon_affine_equivalent(
    q: &PlanarPolygon,
    q2: &PlanarPolygon,
    corr: CornerCorrespondence,
    eps_aff: f64,
) -> Result<Option<AffineMap2D>, GeomError> {
    let m = q.len();
    if m != q2.len() || m < 3 {
        return Ok(None);
    }
    let src = [q.corner(0), q.corner(1), q.corner(2)];
    let dst = [
        q2.corner(corr.image(0, m)),
        q2.corner(corr.image(1, m)),
        q2.corner(corr.image(2, m)),
    ];
    let map = AffineMap2D::from_triangles(src, dst)?;
    let tol = eps_aff * q2.diameter();
    let fits = (3..m).all(|i| map.apply(q.corner(i)).dist(&q2.corner(corr.image(i, m))) <= tol);
    Ok(fits.then_some(map))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineMap3D {
    pub linear: Matrix3<f64>,
    pub translation: Vector3<f64>,
}

impl AffineMap3D {
    pub fn identity() -> Self {
        AffineMap3D {
            linear: Matrix3::identity(),
            translation: Vector3::zeros(),
        }
    }

    pub fn new(linear: Matrix3<f64>, translation: Vector3<f64>) -> Self {
        AffineMap3D { linear, translation }
    }

    pub fn apply(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.linear * p + self.translation
    }

    pub fn det(&self) -> f64 {
        self.linear.determinant()
    }

    pub fn compose(&self, inner: &AffineMap3D) -> AffineMap3D {
        AffineMap3D {
            linear: self.linear * inner.linear,
            translation: self.linear * inner.translation + self.translation,
        }
    }

    pub fn inverse(&self) -> Option<AffineMap3D> {
        let inv = self.linear.try_inverse()?;
        Some(AffineMap3D {
            linear: inv,
            translation: -(inv * self.translation),
        })
    }

    pub fn to_homogeneous(&self) -> Matrix4<f64> {
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&self.linear);
        m.fixed_view_mut::<3, 1>(0, 3).copy_from(&self.translation);
        m
    }
}

/// Least-squares affine fit `targets ≈ A(sources)`; the residual is the
/// largest pointwise error.
pub fn fit_affine_map_3d(
    sources: &[Vector3<f64>],
    targets: &[Vector3<f64>],
) -> Result<(AffineMap3D, f64), GeomError> {
    let n = sources.len();
    if n < 4 || targets.len() != n {
        return Err(GeomError::TooFewPoints { need: 4, got: n.min(targets.len()) });
    }
    let centroid = sources.iter().sum::<Vector3<f64>>() / n as f64;
    let tcentroid = targets.iter().sum::<Vector3<f64>>() / n as f64;
    let spread = sources
        .iter()
        .map(|p| (p - centroid).norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    // Centred design matrix; its rank decides whether the sources span 3-space.
    let x = DMatrix::from_fn(n, 3, |i, j| (sources[i] - centroid)[j] / spread);
    let y = DMatrix::from_fn(n, 3, |i, j| targets[i][j] - tcentroid[j]);
    let svd = x.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin <= 1e-10 * smax.max(f64::MIN_POSITIVE) {
        return Err(GeomError::RankDeficient);
    }
    let sol = svd.solve(&y, 1e-14 * smax).map_err(|_| GeomError::RankDeficient)?;
    // sol is 3x3 with targets_c = X_c * sol, i.e. linear = sol^T / spread
    let linear = Matrix3::from_fn(|i, j| sol[(j, i)] / spread);
    let translation = tcentroid - linear * centroid;
    let map = AffineMap3D { linear, translation };
    let residual = sources
        .iter()
        .zip(targets)
        .map(|(s, t)| (map.apply(s) - t).norm())
        .fold(0.0, f64::max);
    Ok((map, residual))
}
